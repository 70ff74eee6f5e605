//! Morphisms between interval-decomposed modules in interval coordinates,
//! and the change-of-basis move that rewrites them.

use crate::decompose::CoherentBasis;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::interval::{hom_dim, Interval};
use crate::matrix::Matrix;
use crate::module::{Morphism, PersistenceModule};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Source,
    Target,
}

/// A morphism `f: M → N` written as one scalar `f_{j,k}` per pair of
/// target id `j` and source id `k`, relative to coherent bases of both
/// ends. The scalar multiplies the canonical map between the two interval
/// modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalMorphism {
    source: Arc<PersistenceModule>,
    target: Arc<PersistenceModule>,
    src_basis: CoherentBasis,
    tgt_basis: CoherentBasis,
    coeffs: Matrix,
}

pub fn to_interval_coordinates(
    f: &Morphism,
    src_basis: &CoherentBasis,
    tgt_basis: &CoherentBasis,
) -> Result<IntervalMorphism> {
    src_basis.check(f.source())?;
    tgt_basis.check(f.target())?;
    let field = f.field();
    let poset = f.source().poset().clone();
    let mut coeffs = Matrix::zeros(field, tgt_basis.len(), src_basis.len());
    let mut seen = vec![false; tgt_basis.len() * src_basis.len()];
    for p in 0..poset.len() {
        let inv = tgt_basis.basis(p).inverse().expect("coherent bases are invertible");
        let c = inv.mul(&f.component(p).mul(src_basis.basis(p)));
        for (r, &j) in tgt_basis.ids_at(p).iter().enumerate() {
            for (col, &k) in src_basis.ids_at(p).iter().enumerate() {
                let v = c.get(r, col);
                let idx = j * src_basis.len() + k;
                if !seen[idx] {
                    seen[idx] = true;
                    coeffs.set(j, k, v);
                } else if coeffs.get(j, k) != v {
                    return Err(Error::NotCoherent(format!(
                        "coefficient ({j}, {k}) is not constant on the overlap"
                    )));
                }
            }
        }
    }
    for j in 0..tgt_basis.len() {
        for k in 0..src_basis.len() {
            if coeffs.get(j, k) != 0 && hom_dim(&poset, &src_basis.interval(k), &tgt_basis.interval(j)) == 0 {
                return Err(Error::NotCoherent(format!("nonzero coefficient ({j}, {k}) with no map between the intervals")));
            }
        }
    }
    Ok(IntervalMorphism {
        source: f.source().clone(),
        target: f.target().clone(),
        src_basis: src_basis.clone(),
        tgt_basis: tgt_basis.clone(),
        coeffs,
    })
}

impl IntervalMorphism {
    /// Builds the morphism with the given coefficients, rejecting nonzero
    /// coefficients between intervals that admit no nonzero map.
    pub fn from_coefficients(
        source: Arc<PersistenceModule>,
        src_basis: CoherentBasis,
        target: Arc<PersistenceModule>,
        tgt_basis: CoherentBasis,
        coeffs: Matrix,
    ) -> Result<Self> {
        src_basis.check(&source)?;
        tgt_basis.check(&target)?;
        if coeffs.rows() != tgt_basis.len() || coeffs.cols() != src_basis.len() {
            return Err(Error::DimensionMismatch("one coefficient per pair of summands".into()));
        }
        let poset = source.poset();
        for j in 0..coeffs.rows() {
            for k in 0..coeffs.cols() {
                if coeffs.get(j, k) != 0 && hom_dim(poset, &src_basis.interval(k), &tgt_basis.interval(j)) == 0 {
                    return Err(Error::NotCoherent(format!(
                        "nonzero coefficient ({j}, {k}) with no map between the intervals"
                    )));
                }
            }
        }
        Ok(IntervalMorphism {
            source,
            target,
            src_basis,
            tgt_basis,
            coeffs,
        })
    }

    pub fn coefficients(&self) -> &Matrix {
        &self.coeffs
    }

    pub fn coefficient(&self, j: usize, k: usize) -> u32 {
        self.coeffs.get(j, k)
    }

    pub fn source_basis(&self) -> &CoherentBasis {
        &self.src_basis
    }

    pub fn target_basis(&self) -> &CoherentBasis {
        &self.tgt_basis
    }

    pub fn source(&self) -> &Arc<PersistenceModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PersistenceModule> {
        &self.target
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    /// Rebuilds the pointwise morphism from the coefficients.
    pub fn reconstruct(&self) -> Result<Morphism> {
        let n = self.source.poset().len();
        let mut comps = Vec::with_capacity(n);
        for p in 0..n {
            let (tids, sids) = (self.tgt_basis.ids_at(p), self.src_basis.ids_at(p));
            let c = Matrix::from_fn(self.field(), tids.len(), sids.len(), |r, col| self.coeffs.get(tids[r], sids[col]));
            let sinv = self.src_basis.basis(p).inverse().expect("coherent bases are invertible");
            comps.push(self.tgt_basis.basis(p).mul(&c).mul(&sinv));
        }
        Morphism::new(self.source.clone(), self.target.clone(), comps)
    }

    /// Replaces the basis of summand `replaced` on one side by
    /// `k·e + ℓ·ψ(e)`, where `ψ` is the canonical map from the interval of
    /// `replaced` to that of `partner`, and rewrites the coefficients so that
    /// the underlying morphism is unchanged.
    pub fn change_basis(&self, side: Side, replaced: usize, partner: usize, k: u32, l: u32) -> Result<IntervalMorphism> {
        let field = self.field();
        let poset = self.source.poset().clone();
        let k = k % field.prime();
        let l = l % field.prime();
        let (basis, module) = match side {
            Side::Source => (&self.src_basis, &self.source),
            Side::Target => (&self.tgt_basis, &self.target),
        };
        if replaced >= basis.len() || partner >= basis.len() {
            return Err(Error::ChangeOfBasis("summand id out of range".into()));
        }
        if k == 0 {
            return Err(Error::ChangeOfBasis("k must be nonzero".into()));
        }
        let (ir, is) = (basis.interval(replaced), basis.interval(partner));
        if l != 0 && (replaced == partner || hom_dim(&poset, &ir, &is) == 0) {
            return Err(Error::ChangeOfBasis(format!(
                "no nonzero map from summand {replaced} {ir} to summand {partner} {is}"
            )));
        }
        let mut bases = basis.bases().to_vec();
        for (p, b) in bases.iter_mut().enumerate() {
            let Some(cr) = basis.column_of(p, replaced) else {
                continue;
            };
            b.scale_column(cr, k);
            if let Some(cs) = basis.column_of(p, partner) {
                b.add_column_multiple(cr, cs, l);
            }
        }
        let new_basis = basis.with_bases(bases);
        new_basis.check(module)?;
        let mut coeffs = self.coeffs.clone();
        // Composites of canonical maps are canonical iff the three
        // intervals meet, and zero otherwise.
        let meets = |other: Interval| ir.intersect(&is).and_then(|x| x.intersect(&other)).is_some();
        match side {
            Side::Target => {
                let kinv = field.inv(k);
                let shift = field.mul(l, kinv);
                for c in 0..self.src_basis.len() {
                    let old = self.coeffs.get(replaced, c);
                    coeffs.set(replaced, c, field.mul(old, kinv));
                    if l != 0 && meets(self.src_basis.interval(c)) {
                        let v = field.sub(coeffs.get(partner, c), field.mul(shift, old));
                        coeffs.set(partner, c, v);
                    }
                }
            }
            Side::Source => {
                for j in 0..self.tgt_basis.len() {
                    let mut v = field.mul(k, self.coeffs.get(j, replaced));
                    if l != 0 && meets(self.tgt_basis.interval(j)) {
                        v = field.add(v, field.mul(l, self.coeffs.get(j, partner)));
                    }
                    coeffs.set(j, replaced, v);
                }
            }
        }
        let (src_basis, tgt_basis) = match side {
            Side::Source => (new_basis, self.tgt_basis.clone()),
            Side::Target => (self.src_basis.clone(), new_basis),
        };
        Ok(IntervalMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            src_basis,
            tgt_basis,
            coeffs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::module_from_barcode;
    use crate::interval::Barcode;
    use crate::poset::{LinearPoset, Poset};

    fn iv(lo: usize, hi: usize) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn model(p: &Arc<Poset>, ivs: &[Interval]) -> (Arc<PersistenceModule>, CoherentBasis) {
        let b = Barcode::from_intervals(p.clone(), ivs.iter().copied()).unwrap();
        let (m, cb) = module_from_barcode(Field::default(), &b).unwrap();
        (Arc::new(m), cb)
    }

    fn build(p: &Arc<Poset>, src: &[Interval], tgt: &[Interval], rows: &[Vec<i64>]) -> IntervalMorphism {
        let (m, mb) = model(p, src);
        let (n, nb) = model(p, tgt);
        let c = Matrix::from_rows(Field::default(), tgt.len(), src.len(), rows).unwrap();
        IntervalMorphism::from_coefficients(m, mb, n, nb, c).unwrap()
    }

    #[test]
    fn identity_has_unit_coefficient() {
        let p = Arc::new(Poset::Linear(LinearPoset::ordered(4)));
        let (m, mb) = model(&p, &[iv(1, 2)]);
        let c = to_interval_coordinates(&Morphism::identity(m.clone()), &mb, &mb).unwrap();
        assert_eq!(c.coefficients().to_signed_rows(), vec![vec![1]]);
        let z = to_interval_coordinates(&Morphism::zero(m.clone(), m).unwrap(), &mb, &mb).unwrap();
        assert!(z.coefficients().is_zero());
    }

    /// `M = [2,3]` into `N₁ ⊕ N₂ = [0,2] ⊕ [1,2]`, so `N₁ ≤ N₂ ≤ M`.
    fn one_to_two(k: i64, l: i64) -> IntervalMorphism {
        let p = Arc::new(Poset::Linear(LinearPoset::ordered(4)));
        build(&p, &[iv(2, 3)], &[iv(0, 2), iv(1, 2)], &[vec![k], vec![l]])
    }

    #[test]
    fn coordinates_round_trip() {
        let c = one_to_two(1, 1);
        let f = c.reconstruct().unwrap();
        let back = to_interval_coordinates(&f, c.source_basis(), c.target_basis()).unwrap();
        assert_eq!(back.coefficients().to_signed_rows(), vec![vec![1], vec![1]]);
    }

    #[test]
    fn trivial_change_changes_nothing() {
        let c = one_to_two(2, 3);
        let d = c.change_basis(Side::Target, 1, 0, 1, 0).unwrap();
        assert_eq!(d.coefficients(), c.coefficients());
        assert_eq!(d.target_basis(), c.target_basis());
    }

    #[test]
    fn one_to_two_elimination() {
        // N₂′ spanned by k·e′ + ℓ·e″ on the overlap: p₁f = 0 afterwards.
        let (k, l) = (2, 3);
        let c = one_to_two(k, l);
        let d = c.change_basis(Side::Target, 1, 0, l as u32, k as u32).unwrap();
        assert_eq!(d.coefficient(0, 0), 0);
        assert_eq!(d.coefficient(1, 0), 1);
        assert_eq!(d.reconstruct().unwrap(), c.reconstruct().unwrap());
        // There is no nonzero map N₁ → N₂, so the opposite change is refused.
        assert!(c.change_basis(Side::Target, 0, 1, 1, 1).is_err());
        assert!(c.change_basis(Side::Target, 1, 0, 0, 1).is_err());
    }

    #[test]
    fn two_to_one_elimination() {
        // M₁ ⊕ M₂ = [1,3] ⊕ [2,4] onto N = [0,2], so N ≤ M₁ ≤ M₂.
        let p = Arc::new(Poset::Linear(LinearPoset::ordered(5)));
        let (k, l) = (4, 5);
        let c = build(&p, &[iv(1, 3), iv(2, 4)], &[iv(0, 2)], &[vec![k, l]]);
        let f = Field::default();
        // M₂′ spanned by e″ − ℓk⁻¹·e′: then f·i′₂ = 0.
        let d = c
            .change_basis(Side::Source, 1, 0, 1, f.neg(f.div(l as u32, k as u32)))
            .unwrap();
        assert_eq!(d.coefficient(0, 1), 0);
        assert_eq!(d.coefficient(0, 0), k as u32);
        assert_eq!(d.reconstruct().unwrap(), c.reconstruct().unwrap());
    }

    #[test]
    fn impossible_coefficients_are_rejected() {
        let p = Arc::new(Poset::Linear(LinearPoset::ordered(4)));
        let (m, mb) = model(&p, &[iv(0, 1)]);
        let (n, nb) = model(&p, &[iv(1, 2)]);
        let c = Matrix::identity(Field::default(), 1);
        assert!(IntervalMorphism::from_coefficients(m, mb, n, nb, c).is_err());
    }
}
