//! Interval decomposition over linear quivers and coherent bases.
//!
//! Two independent algorithms are provided. [`decompose_by_reduction`]
//! sweeps a fully forward quiver left to right with the elder rule and
//! produces a coherent basis along the way. [`decompose_by_ranks`] works for
//! any orientation: it computes the rank of the limit-to-colimit map over
//! every segment and recovers multiplicities by inclusion-exclusion.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::interval::{Barcode, Interval};
use crate::matrix::Matrix;
use crate::module::{hom_basis, Morphism, PersistenceModule};
use crate::poset::Poset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Bases of every `M(p)` whose columns are labeled by the barcode ids alive
/// at `p`, such that each structure map sends basis vectors to basis vectors
/// of the same id, or to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherentBasis {
    barcode: Barcode,
    ids: Vec<Interval>,
    point_ids: Vec<Vec<usize>>,
    bases: Vec<Matrix>,
}

impl CoherentBasis {
    pub fn new(m: &PersistenceModule, barcode: Barcode, bases: Vec<Matrix>) -> Result<Self> {
        let ids = barcode.intervals();
        let point_ids = point_ids(&ids, m.poset().len());
        let cb = CoherentBasis {
            barcode,
            ids,
            point_ids,
            bases,
        };
        cb.check(m)?;
        Ok(cb)
    }

    /// Re-validates the matching property against `m`.
    pub fn check(&self, m: &PersistenceModule) -> Result<()> {
        let n = m.poset().len();
        if self.bases.len() != n || *self.barcode.poset() != *m.poset() {
            return Err(Error::NotCoherent("basis does not fit the module".into()));
        }
        let mut inverses = Vec::with_capacity(n);
        for p in 0..n {
            let b = &self.bases[p];
            if b.rows() != m.dim(p) || b.cols() != self.point_ids[p].len() {
                return Err(Error::NotCoherent(format!(
                    "point {p}: {} basis vectors for dimension {}",
                    b.cols(),
                    m.dim(p)
                )));
            }
            inverses.push(
                b.inverse()
                    .ok_or_else(|| Error::NotCoherent(format!("point {p}: vectors are not a basis")))?,
            );
        }
        for (k, a) in m.poset().arrows().iter().enumerate() {
            let got = inverses[a.target].mul(&m.map(k).mul(&self.bases[a.source]));
            if got != self.label_matrix(m.field(), a.source, a.target) {
                return Err(Error::NotCoherent(format!(
                    "arrow {} -> {} is not a matching of basis vectors",
                    a.source, a.target
                )));
            }
        }
        Ok(())
    }

    /// The 0/1 matrix sending the basis vector of id `i` at `s` to the
    /// basis vector of id `i` at `t`.
    pub fn label_matrix(&self, field: Field, s: usize, t: usize) -> Matrix {
        let (src, tgt) = (&self.point_ids[s], &self.point_ids[t]);
        Matrix::from_fn(field, tgt.len(), src.len(), |r, c| u32::from(tgt[r] == src[c]))
    }

    pub fn barcode(&self) -> &Barcode {
        &self.barcode
    }

    /// Intervals indexed by id.
    pub fn intervals(&self) -> &[Interval] {
        &self.ids
    }

    pub fn interval(&self, id: usize) -> Interval {
        self.ids[id]
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids_at(&self, p: usize) -> &[usize] {
        &self.point_ids[p]
    }

    pub fn basis(&self, p: usize) -> &Matrix {
        &self.bases[p]
    }

    pub fn bases(&self) -> &[Matrix] {
        &self.bases
    }

    /// Column of id `id` in the basis at `p`.
    pub fn column_of(&self, p: usize, id: usize) -> Option<usize> {
        self.point_ids[p].binary_search(&id).ok()
    }

    /// Replaces the bases without re-validation; callers check afterwards.
    pub(crate) fn with_bases(&self, bases: Vec<Matrix>) -> CoherentBasis {
        CoherentBasis {
            bases,
            ..self.clone()
        }
    }
}

fn point_ids(ids: &[Interval], n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|p| (0..ids.len()).filter(|&k| ids[k].contains(p)).collect())
        .collect()
}

/// The direct sum of the barcode's interval modules, with its standard
/// coherent basis (identity matrices, columns in id order).
pub fn module_from_barcode(field: Field, b: &Barcode) -> Result<(PersistenceModule, CoherentBasis)> {
    let poset = b.poset().clone();
    let ids = b.intervals();
    let pids = point_ids(&ids, poset.len());
    let dims: Vec<usize> = pids.iter().map(Vec::len).collect();
    let maps = poset
        .arrows()
        .iter()
        .map(|a| {
            let (src, tgt) = (&pids[a.source], &pids[a.target]);
            Matrix::from_fn(field, tgt.len(), src.len(), |r, c| u32::from(tgt[r] == src[c]))
        })
        .collect();
    let m = PersistenceModule::new(field, poset, dims.clone(), maps)?;
    let bases = dims.iter().map(|&d| Matrix::identity(field, d)).collect();
    let cb = CoherentBasis::new(&m, b.clone(), bases)?;
    Ok((m, cb))
}

fn linear_len(m: &PersistenceModule) -> Result<usize> {
    match &**m.poset() {
        Poset::Linear(l) => Ok(l.len()),
        Poset::Grid(_) => Err(Error::NotDecomposable(
            "grid modules are not decomposed into intervals".into(),
        )),
    }
}

/// Elder-rule reduction on a fully forward quiver, returning the barcode and
/// a coherent basis.
pub fn decompose_by_reduction(m: &PersistenceModule) -> Result<(Barcode, CoherentBasis)> {
    let n = linear_len(m)?;
    if !m.poset().is_ordered() {
        return Err(Error::NotOrdered);
    }
    let f = m.field();
    // Every class carries its birth point and its vector at each point so far.
    struct Class {
        birth: usize,
        death: Option<usize>,
        vectors: Vec<Vec<u32>>,
    }
    let mut classes: Vec<Class> = Vec::new();
    let mut alive: Vec<usize> = Vec::new();
    for r in 0..m.dim(0) {
        let mut e = vec![0; m.dim(0)];
        e[r] = 1;
        alive.push(classes.len());
        classes.push(Class {
            birth: 0,
            death: None,
            vectors: vec![e],
        });
    }
    for i in 0..n {
        if i + 1 == n {
            for &c in &alive {
                classes[c].death = Some(i);
            }
            break;
        }
        let a = m.map(i);
        let mut order = alive.clone();
        order.sort_by_key(|&c| (classes[c].birth, c));
        // (class, reduced image, pivot row)
        let mut kept: Vec<(usize, Vec<u32>, usize)> = Vec::new();
        let mut next_alive = Vec::new();
        for &c in &order {
            let mut v = a.mul_vec(&classes[c].vectors[i - classes[c].birth]);
            loop {
                let Some(piv) = v.iter().position(|&x| x != 0) else {
                    break;
                };
                let Some(&(k, ref w, _)) = kept.iter().find(|(_, _, p)| *p == piv) else {
                    break;
                };
                let alpha = f.div(v[piv], w[piv]);
                for (x, y) in v.iter_mut().zip(w) {
                    *x = f.sub(*x, f.mul(alpha, *y));
                }
                let (kb, cb) = (classes[k].birth, classes[c].birth);
                for p in cb..=i {
                    let kv = classes[k].vectors[p - kb].clone();
                    for (x, y) in classes[c].vectors[p - cb].iter_mut().zip(kv) {
                        *x = f.sub(*x, f.mul(alpha, y));
                    }
                }
            }
            match v.iter().position(|&x| x != 0) {
                None => classes[c].death = Some(i),
                Some(piv) => {
                    classes[c].vectors.push(v.clone());
                    kept.push((c, v, piv));
                    next_alive.push(c);
                }
            }
        }
        let pivots: Vec<usize> = kept.iter().map(|k| k.2).collect();
        let d = m.dim(i + 1);
        for r in (0..d).filter(|r| !pivots.contains(r)) {
            let mut e = vec![0; d];
            e[r] = 1;
            next_alive.push(classes.len());
            classes.push(Class {
                birth: i + 1,
                death: None,
                vectors: vec![e],
            });
        }
        alive = next_alive;
    }
    let mut labeled: Vec<(Interval, usize)> = classes
        .iter()
        .enumerate()
        .map(|(c, cl)| (Interval::new(cl.birth, cl.death.expect("every class dies")).expect("birth <= death"), c))
        .collect();
    labeled.sort();
    let barcode = Barcode::from_intervals(m.poset().clone(), labeled.iter().map(|l| l.0))?;
    let mut bases = Vec::with_capacity(n);
    for p in 0..n {
        let cols: Vec<Vec<u32>> = labeled
            .iter()
            .filter(|(iv, _)| iv.contains(p))
            .map(|(_, c)| classes[*c].vectors[p - classes[*c].birth].clone())
            .collect();
        bases.push(Matrix::from_columns(f, m.dim(p), &cols));
    }
    let cb = CoherentBasis::new(m, barcode.clone(), bases)?;
    Ok((barcode, cb))
}

/// Rank of the map from the limit to the colimit of `m` restricted to the
/// segment `a..=b`.
pub fn segment_rank(m: &PersistenceModule, a: usize, b: usize) -> Result<usize> {
    linear_len(m)?;
    let f = m.field();
    let mut offset = vec![0; b - a + 2];
    for p in a..=b {
        offset[p - a + 1] = offset[p - a] + m.dim(p);
    }
    let total = offset[b - a + 1];
    if total == 0 {
        return Ok(0);
    }
    let arrows: Vec<_> = m
        .poset()
        .arrows()
        .into_iter()
        .enumerate()
        .filter(|(_, ar)| (a..=b).contains(&ar.source) && (a..=b).contains(&ar.target))
        .collect();
    // Sections: rows `M(s→t) x_s − x_t = 0` for each arrow.
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (k, ar) in &arrows {
        let mk = m.map(*k);
        let (os, ot) = (offset[ar.source - a], offset[ar.target - a]);
        for r in 0..m.dim(ar.target) {
            let mut row = vec![0; total];
            for c in 0..m.dim(ar.source) {
                row[os + c] = mk.get(r, c);
            }
            row[ot + r] = f.sub(row[ot + r], 1);
            rows.push(row);
        }
    }
    let sections = Matrix::from_fn(f, rows.len(), total, |r, c| rows[r][c]).kernel_basis();
    // Relations `u_s − M(s→t) u_s` spanning the kernel of ⊕M(p) → colim.
    let mut rel: Vec<Vec<u32>> = Vec::new();
    for (k, ar) in &arrows {
        let mk = m.map(*k);
        let (os, ot) = (offset[ar.source - a], offset[ar.target - a]);
        for c in 0..m.dim(ar.source) {
            let mut v = vec![0; total];
            v[os + c] = 1;
            for r in 0..m.dim(ar.target) {
                v[ot + r] = f.sub(v[ot + r], mk.get(r, c));
            }
            rel.push(v);
        }
    }
    let relations = Matrix::from_columns(f, total, &rel);
    let da = m.dim(a);
    let lims: Vec<Vec<u32>> = (0..sections.cols())
        .map(|c| {
            let mut v = vec![0; total];
            v[..da].copy_from_slice(&sections.column(c)[..da]);
            v
        })
        .collect();
    let lims = Matrix::from_columns(f, total, &lims);
    Ok(relations.hstack(&lims).rank() - relations.rank())
}

/// `ranks[a][b]` for every segment `a <= b`.
pub fn segment_ranks(m: &PersistenceModule) -> Result<Vec<Vec<usize>>> {
    let n = linear_len(m)?;
    let mut out = vec![vec![0; n]; n];
    for a in 0..n {
        for b in a..n {
            out[a][b] = segment_rank(m, a, b)?;
        }
    }
    Ok(out)
}

/// Barcode from segment ranks by inclusion-exclusion; any orientation.
pub fn decompose_by_ranks(m: &PersistenceModule) -> Result<Barcode> {
    let n = linear_len(m)?;
    let rk = segment_ranks(m)?;
    let get = |a: isize, b: usize| -> isize {
        if a < 0 || b >= n {
            0
        } else {
            rk[a as usize][b] as isize
        }
    };
    let mut bc = Barcode::new(m.poset().clone());
    for a in 0..n {
        for b in a..n {
            let ai = a as isize;
            let mult = get(ai, b) - get(ai - 1, b) - get(ai, b + 1) + get(ai - 1, b + 1);
            if mult < 0 {
                return Err(Error::NotDecomposable(format!(
                    "negative multiplicity at [{a}, {b}]"
                )));
            }
            bc.insert(Interval::new(a, b)?, mult as usize)?;
        }
    }
    Ok(bc)
}

/// Barcode of a module on a linear quiver: reduction on forward quivers,
/// segment ranks otherwise.
pub fn decompose(m: &PersistenceModule) -> Result<Barcode> {
    linear_len(m)?;
    if m.poset().is_ordered() {
        Ok(decompose_by_reduction(m)?.0)
    } else {
        decompose_by_ranks(m)
    }
}

/// A barcode together with a coherent basis. On non-forward quivers the
/// basis is the image of the standard basis under an isomorphism from the
/// barcode's model module, found by a seeded random search in `Hom`.
pub fn decompose_with_basis(m: &PersistenceModule) -> Result<(Barcode, CoherentBasis)> {
    linear_len(m)?;
    if m.poset().is_ordered() {
        return decompose_by_reduction(m);
    }
    let b = decompose_by_ranks(m)?;
    let cb = coherent_basis(m, &b)?;
    Ok((b, cb))
}

pub fn coherent_basis(m: &PersistenceModule, b: &Barcode) -> Result<CoherentBasis> {
    let (model, _) = module_from_barcode(m.field(), b)?;
    if model.dims() != m.dims() {
        return Err(Error::NotCoherent("barcode does not reproduce the dimensions".into()));
    }
    let model = Arc::new(model);
    let target = Arc::new(m.clone());
    let homs = hom_basis(&model, &target)?;
    if model.is_zero() {
        return CoherentBasis::new(m, b.clone(), model.dims().iter().map(|_| Matrix::zeros(m.field(), 0, 0)).collect());
    }
    if homs.is_empty() {
        return Err(Error::NotCoherent("no morphism from the barcode model".into()));
    }
    let p = m.field().prime();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..256 {
        let coeffs: Vec<u32> = homs.iter().map(|_| rng.gen_range(0..p)).collect();
        let phi = Morphism::linear_combination(&homs, &coeffs)?;
        if phi.is_iso() {
            return CoherentBasis::new(m, b.clone(), phi.components().to_vec());
        }
    }
    Err(Error::NotCoherent("no isomorphism from the barcode model found".into()))
}
