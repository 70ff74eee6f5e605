//! Persistence modules, morphisms between them, and their pointwise
//! invariants.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::interval::Interval;
use crate::matrix::Matrix;
use crate::measure::Measure;
use crate::poset::Poset;
use crate::rational::Rational;
use std::sync::Arc;

/// Pointwise dimensions of a module or of a kernel/cokernel.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DimensionFunction(pub Vec<usize>);

impl DimensionFunction {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn integrate(&self, mu: &Measure) -> Result<Rational> {
        mu.integrate(&self.0)
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// A finite-dimensional representation of a finite poset: a vector space
/// dimension per point and a matrix per generating arrow, in the arrow order
/// of [`Poset::arrows`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PersistenceModule {
    field: Field,
    poset: Arc<Poset>,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl PersistenceModule {
    pub fn new(field: Field, poset: Arc<Poset>, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        if dims.len() != poset.len() {
            return Err(Error::InvalidModule(format!(
                "{} dimensions for {} points",
                dims.len(),
                poset.len()
            )));
        }
        let arrows = poset.arrows();
        if maps.len() != arrows.len() {
            return Err(Error::InvalidModule(format!(
                "{} structure maps for {} arrows",
                maps.len(),
                arrows.len()
            )));
        }
        for (k, (a, m)) in arrows.iter().zip(&maps).enumerate() {
            if m.field() != field {
                return Err(Error::FieldMismatch(field.prime(), m.field().prime()));
            }
            if m.rows() != dims[a.target] || m.cols() != dims[a.source] {
                return Err(Error::DimensionMismatch(format!(
                    "arrow {k} ({} -> {}) needs a {}x{} matrix, got {}x{}",
                    a.source,
                    a.target,
                    dims[a.target],
                    dims[a.source],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        for (base, [h0, v1, v0, h1]) in poset.squares() {
            if maps[v1].mul(&maps[h0]) != maps[h1].mul(&maps[v0]) {
                return Err(Error::NotCommutative(base));
            }
        }
        Ok(PersistenceModule {
            field,
            poset,
            dims,
            maps,
        })
    }

    pub fn zero(field: Field, poset: Arc<Poset>) -> Self {
        let dims = vec![0; poset.len()];
        let maps = poset.arrows().iter().map(|_| Matrix::zeros(field, 0, 0)).collect();
        PersistenceModule {
            field,
            poset,
            dims,
            maps,
        }
    }

    /// The interval module: the field on `i`, identities inside, zero outside.
    pub fn interval(field: Field, poset: Arc<Poset>, i: &Interval) -> Result<Self> {
        if poset.as_linear().is_none() || i.hi >= poset.len() {
            return Err(Error::PosetMismatch(format!("interval {i} does not fit the poset")));
        }
        let dims = i.indicator(poset.len());
        let maps = poset
            .arrows()
            .iter()
            .map(|a| {
                if i.contains(a.source) && i.contains(a.target) {
                    Matrix::identity(field, 1)
                } else {
                    Matrix::zeros(field, dims[a.target], dims[a.source])
                }
            })
            .collect();
        PersistenceModule::new(field, poset, dims, maps)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, p: usize) -> usize {
        self.dims[p]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn map(&self, arrow: usize) -> &Matrix {
        &self.maps[arrow]
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn hilbert(&self) -> DimensionFunction {
        DimensionFunction(self.dims.clone())
    }

    /// `M(a ≤ b)`, composed along a directed path; `None` unless `a ≤ b`.
    pub fn map_between(&self, a: usize, b: usize) -> Option<Matrix> {
        let path = self.poset.path(a, b)?;
        let mut acc = Matrix::identity(self.field, self.dims[a]);
        for arrow in path {
            acc = self.maps[arrow].mul(&acc);
        }
        Some(acc)
    }

    fn same_base(&self, other: &PersistenceModule) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.prime(), other.field.prime()));
        }
        if self.poset != other.poset {
            return Err(Error::PosetMismatch("modules live on different posets".into()));
        }
        Ok(())
    }
}

/// `M ⊕ N ⊕ ...` with its canonical injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Arc<PersistenceModule>,
    pub injections: Vec<Morphism>,
    pub projections: Vec<Morphism>,
}

pub fn direct_sum(ms: &[Arc<PersistenceModule>]) -> Result<DirectSum> {
    let first = ms
        .first()
        .ok_or_else(|| Error::InvalidModule("direct sum of no modules".into()))?;
    for m in &ms[1..] {
        first.same_base(m)?;
    }
    let field = first.field;
    let poset = first.poset.clone();
    let n = poset.len();
    let dims: Vec<usize> = (0..n).map(|p| ms.iter().map(|m| m.dims[p]).sum()).collect();
    let maps = (0..poset.arrows().len())
        .map(|a| Matrix::block_diag(field, &ms.iter().map(|m| &m.maps[a]).collect::<Vec<_>>()))
        .collect();
    let sum = Arc::new(PersistenceModule::new(field, poset, dims.clone(), maps)?);
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut offsets = vec![0; n];
    for m in ms {
        let mut inj = Vec::with_capacity(n);
        let mut proj = Vec::with_capacity(n);
        for p in 0..n {
            let mut i = Matrix::zeros(field, dims[p], m.dims[p]);
            i.put(offsets[p], 0, &Matrix::identity(field, m.dims[p]));
            proj.push(i.transpose());
            inj.push(i);
            offsets[p] += m.dims[p];
        }
        injections.push(Morphism::new(m.clone(), sum.clone(), inj)?);
        projections.push(Morphism::new(sum.clone(), m.clone(), proj)?);
    }
    Ok(DirectSum {
        module: sum,
        injections,
        projections,
    })
}

/// A natural transformation between two modules on the same poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: Arc<PersistenceModule>,
    target: Arc<PersistenceModule>,
    components: Vec<Matrix>,
}

impl Morphism {
    pub fn new(source: Arc<PersistenceModule>, target: Arc<PersistenceModule>, components: Vec<Matrix>) -> Result<Self> {
        source.same_base(&target)?;
        if components.len() != source.dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} components for {} points",
                components.len(),
                source.dims.len()
            )));
        }
        for (p, c) in components.iter().enumerate() {
            if c.field() != source.field {
                return Err(Error::FieldMismatch(source.field.prime(), c.field().prime()));
            }
            if c.rows() != target.dims[p] || c.cols() != source.dims[p] {
                return Err(Error::DimensionMismatch(format!(
                    "component at point {p} needs {}x{}, got {}x{}",
                    target.dims[p],
                    source.dims[p],
                    c.rows(),
                    c.cols()
                )));
            }
        }
        let f = Morphism {
            source,
            target,
            components,
        };
        f.check_natural()?;
        Ok(f)
    }

    fn check_natural(&self) -> Result<()> {
        for (k, a) in self.source.poset.arrows().iter().enumerate() {
            let lhs = self.target.maps[k].mul(&self.components[a.source]);
            let rhs = self.components[a.target].mul(&self.source.maps[k]);
            if lhs != rhs {
                return Err(Error::NotNatural {
                    source_point: a.source,
                    target_point: a.target,
                });
            }
        }
        Ok(())
    }

    pub fn identity(m: Arc<PersistenceModule>) -> Self {
        let components = m.dims.iter().map(|&d| Matrix::identity(m.field, d)).collect();
        Morphism {
            source: m.clone(),
            target: m,
            components,
        }
    }

    pub fn zero(source: Arc<PersistenceModule>, target: Arc<PersistenceModule>) -> Result<Self> {
        source.same_base(&target)?;
        let components = (0..source.dims.len())
            .map(|p| Matrix::zeros(source.field, target.dims[p], source.dims[p]))
            .collect();
        Ok(Morphism {
            source,
            target,
            components,
        })
    }

    /// The map between interval modules that is `c` on `I ∩ J` and zero
    /// elsewhere. Fails naturality exactly when no nonzero map exists.
    pub fn interval_map(
        source: Arc<PersistenceModule>,
        target: Arc<PersistenceModule>,
        i: &Interval,
        j: &Interval,
        c: u32,
    ) -> Result<Self> {
        let field = source.field;
        let components = (0..source.dims.len())
            .map(|p| {
                if i.contains(p) && j.contains(p) {
                    Matrix::from_fn(field, 1, 1, |_, _| c)
                } else {
                    Matrix::zeros(field, target.dims[p], source.dims[p])
                }
            })
            .collect();
        Morphism::new(source, target, components)
    }

    pub fn source(&self) -> &Arc<PersistenceModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PersistenceModule> {
        &self.target
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn component(&self, p: usize) -> &Matrix {
        &self.components[p]
    }

    pub fn field(&self) -> Field {
        self.source.field
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        if *other.target != *self.source {
            return Err(Error::InvalidZigzag("composition of non-composable morphisms".into()));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(g, f)| g.mul(f))
            .collect();
        Ok(Morphism {
            source: other.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    /// `Σ c_i f_i` of parallel morphisms.
    pub fn linear_combination(fs: &[Morphism], coeffs: &[u32]) -> Result<Morphism> {
        let first = fs
            .first()
            .ok_or_else(|| Error::InvalidModule("empty linear combination".into()))?;
        if fs.len() != coeffs.len() {
            return Err(Error::DimensionMismatch("one coefficient per morphism".into()));
        }
        let mut acc = Morphism::zero(first.source.clone(), first.target.clone())?;
        for (f, &c) in fs.iter().zip(coeffs) {
            if *f.source != *first.source || *f.target != *first.target {
                return Err(Error::InvalidModule("linear combination of non-parallel morphisms".into()));
            }
            for (a, b) in acc.components.iter_mut().zip(&f.components) {
                *a = a.add(&b.scale(c));
            }
        }
        Ok(acc)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.components.iter().map(Matrix::rank).collect()
    }

    pub fn is_mono(&self) -> bool {
        self.ranks().iter().zip(&self.source.dims).all(|(r, d)| r == d)
    }

    pub fn is_epi(&self) -> bool {
        self.ranks().iter().zip(&self.target.dims).all(|(r, d)| r == d)
    }

    pub fn is_iso(&self) -> bool {
        let r = self.ranks();
        r.iter().zip(&self.source.dims).all(|(r, d)| r == d) && r.iter().zip(&self.target.dims).all(|(r, d)| r == d)
    }

    /// Pointwise `(dim ker, dim coker)` via rank-nullity.
    pub fn ker_coker_dims(&self) -> (DimensionFunction, DimensionFunction) {
        let r = self.ranks();
        let ker = self.source.dims.iter().zip(&r).map(|(d, r)| d - r).collect();
        let coker = self.target.dims.iter().zip(&r).map(|(d, r)| d - r).collect();
        (DimensionFunction(ker), DimensionFunction(coker))
    }

    /// `∫ dim ker dμ + ∫ dim coker dμ`.
    pub fn cost(&self, mu: &Measure) -> Result<Rational> {
        mu.check_poset(&self.source.poset)?;
        let (k, c) = self.ker_coker_dims();
        Ok(k.integrate(mu)? + c.integrate(mu)?)
    }

    /// Factors `self = mono ∘ epi` through its pointwise image.
    pub fn image_factorize(&self) -> Result<(Morphism, Morphism)> {
        let field = self.field();
        let bases: Vec<Matrix> = self.components.iter().map(Matrix::column_space_basis).collect();
        let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
        let poset = self.source.poset.clone();
        let mut maps = Vec::new();
        for (k, a) in poset.arrows().iter().enumerate() {
            let pushed = self.target.maps[k].mul(&bases[a.source]);
            let m = bases[a.target]
                .solve_matrix(&pushed)?
                .ok_or_else(|| Error::InvalidModule("image is not closed under the structure maps".into()))?;
            maps.push(m);
        }
        let image = Arc::new(PersistenceModule::new(field, poset, dims, maps)?);
        let mut epi = Vec::new();
        for (b, c) in bases.iter().zip(&self.components) {
            epi.push(b.solve_matrix(c)?.expect("component lies in its own image"));
        }
        let epi = Morphism::new(self.source.clone(), image.clone(), epi)?;
        let mono = Morphism::new(image, self.target.clone(), bases)?;
        Ok((epi, mono))
    }

    /// Block-diagonal sum of morphisms, between the direct sums of their
    /// sources and of their targets.
    pub fn direct_sum(fs: &[Morphism]) -> Result<Morphism> {
        let sources: Vec<_> = fs.iter().map(|f| f.source.clone()).collect();
        let targets: Vec<_> = fs.iter().map(|f| f.target.clone()).collect();
        let s = direct_sum(&sources)?.module;
        let t = direct_sum(&targets)?.module;
        let field = s.field;
        let components = (0..s.dims.len())
            .map(|p| Matrix::block_diag(field, &fs.iter().map(|f| &f.components[p]).collect::<Vec<_>>()))
            .collect();
        Morphism::new(s, t, components)
    }

    /// Replaces source and target by equal modules (checked structurally),
    /// so that chained morphisms share the same allocation.
    pub fn with_modules(&self, source: Arc<PersistenceModule>, target: Arc<PersistenceModule>) -> Result<Morphism> {
        if *source != *self.source || *target != *self.target {
            return Err(Error::InvalidModule("replacement modules differ".into()));
        }
        Ok(Morphism {
            source,
            target,
            components: self.components.clone(),
        })
    }
}

/// A basis of `Hom(M, N)` as a list of morphisms.
pub fn hom_basis(m: &Arc<PersistenceModule>, n: &Arc<PersistenceModule>) -> Result<Vec<Morphism>> {
    m.same_base(n)?;
    let field = m.field;
    let npts = m.dims.len();
    let mut offset = vec![0; npts + 1];
    for p in 0..npts {
        offset[p + 1] = offset[p] + n.dims[p] * m.dims[p];
    }
    let nvars = offset[npts];
    let var = |p: usize, r: usize, c: usize| offset[p] + r * m.dims[p] + c;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (k, a) in m.poset.arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (nm, mm) = (&n.maps[k], &m.maps[k]);
        for i in 0..n.dims[t] {
            for j in 0..m.dims[s] {
                let mut row = vec![0u32; nvars];
                for l in 0..n.dims[s] {
                    let v = var(s, l, j);
                    row[v] = field.add(row[v], nm.get(i, l));
                }
                for l in 0..m.dims[t] {
                    let v = var(t, i, l);
                    row[v] = field.sub(row[v], mm.get(l, j));
                }
                rows.push(row);
            }
        }
    }
    let system = Matrix::from_fn(field, rows.len(), nvars, |r, c| rows[r][c]);
    let kernel = system.kernel_basis();
    let mut out = Vec::with_capacity(kernel.cols());
    for col in 0..kernel.cols() {
        let components = (0..npts)
            .map(|p| Matrix::from_fn(field, n.dims[p], m.dims[p], |r, c| kernel.get(var(p, r, c), col)))
            .collect();
        out.push(Morphism {
            source: m.clone(),
            target: n.clone(),
            components,
        });
    }
    Ok(out)
}

/// `(∫|dim M − dim N| dμ, ∫(dim M + dim N) dμ)`, a lower and an upper bound
/// on the zigzag distance.
pub fn hilbert_bounds(m: &PersistenceModule, n: &PersistenceModule, mu: &Measure) -> Result<(Rational, Rational)> {
    m.same_base(n)?;
    mu.check_poset(&m.poset)?;
    let diff: Vec<usize> = m.dims.iter().zip(&n.dims).map(|(a, b)| a.abs_diff(*b)).collect();
    let sum: Vec<usize> = m.dims.iter().zip(&n.dims).map(|(a, b)| a + b).collect();
    Ok((mu.integrate(&diff)?, mu.integrate(&sum)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::hom_dim;
    use crate::poset::{GridPoset, LinearPoset, Orientation};
    use crate::rational::int;

    fn f31() -> Field {
        Field::default()
    }

    fn linear(orients: Vec<Orientation>) -> Arc<Poset> {
        Arc::new(Poset::Linear(LinearPoset::with_orientations(orients)))
    }

    fn iv(lo: usize, hi: usize) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn interval_module_dims() {
        let p = linear(vec![Orientation::Forward; 4]);
        let m = PersistenceModule::interval(f31(), p.clone(), &iv(1, 3)).unwrap();
        assert_eq!(m.hilbert().0, vec![0, 1, 1, 1, 0]);
        assert!(PersistenceModule::zero(f31(), p).hilbert().0.iter().all(|&d| d == 0));
    }

    #[test]
    fn grid_must_commute() {
        let g = GridPoset::new(vec![int(0), int(1)], vec![int(0), int(1)]).unwrap();
        let p = Arc::new(Poset::Grid(g));
        let one = Matrix::identity(f31(), 1);
        let zero = Matrix::zeros(f31(), 1, 1);
        // arrows: h(0,0), h(0,1), v(0,0), v(1,0)
        let ok = PersistenceModule::new(f31(), p.clone(), vec![1; 4], vec![one.clone(); 4]);
        assert!(ok.is_ok());
        let bad = PersistenceModule::new(f31(), p, vec![1; 4], vec![one.clone(), one.clone(), one, zero]);
        assert_eq!(bad.unwrap_err(), Error::NotCommutative(0));
    }

    #[test]
    fn identity_and_zero_costs() {
        let p = linear(vec![Orientation::Forward; 3]);
        let m = Arc::new(PersistenceModule::interval(f31(), p.clone(), &iv(0, 2)).unwrap());
        let id = Morphism::identity(m.clone());
        let (k, c) = id.ker_coker_dims();
        assert_eq!(k.total() + c.total(), 0);
        let z = Arc::new(PersistenceModule::zero(f31(), p));
        let f = Morphism::zero(m.clone(), z).unwrap();
        assert_eq!(f.ker_coker_dims().0 .0, m.dims().to_vec());
    }

    #[test]
    fn naturality_is_enforced() {
        let p = linear(vec![Orientation::Forward; 3]);
        let i = Arc::new(PersistenceModule::interval(f31(), p.clone(), &iv(2, 3)).unwrap());
        let j = Arc::new(PersistenceModule::interval(f31(), p.clone(), &iv(1, 2)).unwrap());
        assert!(Morphism::interval_map(i.clone(), j.clone(), &iv(2, 3), &iv(1, 2), 1).is_ok());
        assert!(matches!(
            Morphism::interval_map(j, i, &iv(1, 2), &iv(2, 3), 1),
            Err(Error::NotNatural { .. })
        ));
    }

    #[test]
    fn hom_dims_match_brute_force() {
        use Orientation::*;
        for mask in 0..16u32 {
            let orients: Vec<_> = (0..4).map(|e| if mask >> e & 1 == 1 { Backward } else { Forward }).collect();
            let p = linear(orients);
            let ivs: Vec<_> = (0..5).flat_map(|a| (a..5).map(move |b| iv(a, b))).collect();
            for a in &ivs {
                for b in &ivs {
                    let ma = Arc::new(PersistenceModule::interval(f31(), p.clone(), a).unwrap());
                    let mb = Arc::new(PersistenceModule::interval(f31(), p.clone(), b).unwrap());
                    let h = hom_basis(&ma, &mb).unwrap().len();
                    assert_eq!(h, hom_dim(&p, a, b), "{a} -> {b} on {p}");
                    let canonical = Morphism::interval_map(ma, mb, a, b, 1);
                    assert_eq!(canonical.is_ok(), h == 1 || a.intersect(b).is_none());
                }
            }
        }
    }

    #[test]
    fn direct_sum_projections() {
        let p = linear(vec![Orientation::Forward, Orientation::Forward, Orientation::Backward, Orientation::Backward]);
        let m = Arc::new(PersistenceModule::interval(f31(), p.clone(), &iv(0, 2)).unwrap());
        let n = Arc::new(PersistenceModule::interval(f31(), p, &iv(2, 4)).unwrap());
        let s = direct_sum(&[m.clone(), n.clone()]).unwrap();
        assert_eq!(s.module.dims(), &[1, 1, 2, 1, 1]);
        for j in 0..2 {
            for k in 0..2 {
                let c = s.projections[j].compose(&s.injections[k]).unwrap();
                if j == k {
                    assert!(c.is_iso());
                } else {
                    assert!(c.is_zero());
                }
            }
        }
    }

    #[test]
    fn image_factorization() {
        let p = linear(vec![Orientation::Forward; 3]);
        let i = Arc::new(PersistenceModule::interval(f31(), p.clone(), &iv(1, 3)).unwrap());
        let j = Arc::new(PersistenceModule::interval(f31(), p, &iv(0, 2)).unwrap());
        let f = Morphism::interval_map(i, j, &iv(1, 3), &iv(0, 2), 3).unwrap();
        let (e, m) = f.image_factorize().unwrap();
        assert_eq!(m.compose(&e).unwrap(), f);
        assert!(e.is_epi() && m.is_mono());
        assert_eq!(e.ker_coker_dims().0, f.ker_coker_dims().0);
        assert_eq!(m.ker_coker_dims().1, f.ker_coker_dims().1);
        assert_eq!(e.target().dims(), &[0, 1, 1, 0]);
    }

    #[test]
    fn bounds_for_equal_modules() {
        let p = linear(vec![Orientation::Forward; 3]);
        let m = PersistenceModule::interval(f31(), p, &iv(1, 3)).unwrap();
        let mu = Measure::counting(4);
        assert_eq!(hilbert_bounds(&m, &m, &mu).unwrap(), (int(0), int(6)));
    }
}
