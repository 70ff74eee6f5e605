//! Induced algebraic matchings for monomorphisms and epimorphisms between
//! interval-decomposed modules, computed by change-of-basis elimination on
//! interval coordinates.

use crate::coords::{to_interval_coordinates, IntervalMorphism, Side};
use crate::decompose::{decompose_with_basis, CoherentBasis};
use crate::error::{Error, Result};
use crate::interval::{symmetric_difference_measure, Interval};
use crate::measure::Measure;
use crate::module::{Morphism, PersistenceModule};
use crate::rational::Rational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatchKind {
    Mono,
    Epi,
}

/// A partial pairing of source and target summands, with the bases in which
/// the morphism is diagonal on the pairs.
#[derive(Clone, Debug)]
pub struct AlgebraicMatching {
    pub kind: MatchKind,
    /// `(source id, target id)`.
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_sources: Vec<usize>,
    pub unmatched_targets: Vec<usize>,
    /// The morphism in the final bases.
    pub coords: IntervalMorphism,
    /// Number of change-of-basis steps applied.
    pub steps: usize,
}

impl AlgebraicMatching {
    pub fn source_interval(&self, k: usize) -> Interval {
        self.coords.source_basis().interval(k)
    }

    pub fn target_interval(&self, j: usize) -> Interval {
        self.coords.target_basis().interval(j)
    }

    /// `p′_a f i_a` for the pair at `index`, as a map of interval modules.
    pub fn diagonal_component(&self, index: usize) -> Result<Morphism> {
        let (k, j) = self.pairs[index];
        let (ik, ij) = (self.source_interval(k), self.target_interval(j));
        let field = self.coords.field();
        let poset = self.coords.source().poset().clone();
        let s = Arc::new(PersistenceModule::interval(field, poset.clone(), &ik)?);
        let t = Arc::new(PersistenceModule::interval(field, poset, &ij)?);
        Morphism::interval_map(s, t, &ik, &ij, self.coords.coefficient(j, k))
    }

    /// Whether every diagonal component is a mono (resp. epi).
    pub fn diagonals_ok(&self) -> Result<bool> {
        for a in 0..self.pairs.len() {
            let d = self.diagonal_component(a)?;
            let ok = match self.kind {
                MatchKind::Mono => d.is_mono() && !d.is_zero(),
                MatchKind::Epi => d.is_epi() && !d.is_zero(),
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether paired intervals share right ends (mono) or left ends (epi).
    pub fn ends_agree(&self) -> bool {
        self.pairs.iter().all(|&(k, j)| {
            let (a, b) = (self.source_interval(k), self.target_interval(j));
            match self.kind {
                MatchKind::Mono => a.hi == b.hi,
                MatchKind::Epi => a.lo == b.lo,
            }
        })
    }

    /// `d_μ` of every pair, then of every unmatched source and target
    /// against zero.
    pub fn costs(&self, mu: &Measure) -> Result<Vec<Rational>> {
        let mut out = Vec::new();
        for &(k, j) in &self.pairs {
            out.push(symmetric_difference_measure(
                Some(&self.source_interval(k)),
                Some(&self.target_interval(j)),
                mu,
            )?);
        }
        for &k in &self.unmatched_sources {
            out.push(symmetric_difference_measure(Some(&self.source_interval(k)), None, mu)?);
        }
        for &j in &self.unmatched_targets {
            out.push(symmetric_difference_measure(None, Some(&self.target_interval(j)), mu)?);
        }
        Ok(out)
    }

    pub fn total_cost(&self, mu: &Measure) -> Result<Rational> {
        Ok(self.costs(mu)?.into_iter().fold(Rational::zero(), |a, b| a + b))
    }
}

/// The matching induced by `f`, with both ends decomposed first.
pub fn induced_matching(f: &Morphism, kind: MatchKind) -> Result<AlgebraicMatching> {
    let (_, sb) = decompose_with_basis(f.source())?;
    let (_, tb) = decompose_with_basis(f.target())?;
    match kind {
        MatchKind::Mono => induced_matching_mono(f, &sb, &tb),
        MatchKind::Epi => induced_matching_epi(f, &sb, &tb),
    }
}

fn blocks(ivs: &[Interval], key: impl Fn(&Interval) -> usize) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (id, iv) in ivs.iter().enumerate() {
        out.entry(key(iv)).or_default().push(id);
    }
    out
}

fn step(c: &IntervalMorphism, side: Side, replaced: usize, partner: usize, l: u32) -> Result<IntervalMorphism> {
    c.change_basis(side, replaced, partner, 1, l)
        .map_err(|e| Error::MatchingFailed(format!("elimination step refused: {e}")))
}

pub fn induced_matching_mono(f: &Morphism, src: &CoherentBasis, tgt: &CoherentBasis) -> Result<AlgebraicMatching> {
    if !f.is_mono() {
        return Err(Error::NotMono);
    }
    let mut c = to_interval_coordinates(f, src, tgt)?;
    let fld = f.field();
    let sivs = src.intervals().to_vec();
    let tivs = tgt.intervals().to_vec();
    let sblocks = blocks(&sivs, |i| i.hi);
    let tblocks = blocks(&tivs, |i| i.hi);
    let mut pairs = Vec::new();
    let mut used_t = vec![false; tivs.len()];
    let mut steps = 0;
    for (hi, mut ks) in sblocks {
        let mut js = tblocks.get(&hi).cloned().unwrap_or_default();
        // Sources largest first, targets smallest first.
        ks.sort_by_key(|&k| (sivs[k].lo, k));
        js.sort_by_key(|&j| (std::cmp::Reverse(tivs[j].lo), j));
        for &k in &ks {
            let j = *js
                .iter()
                .find(|&&j| !used_t[j] && c.coefficient(j, k) != 0)
                .ok_or_else(|| Error::MatchingFailed(format!("source {k} has no partner with the same right end")))?;
            for &j2 in &js {
                if j2 != j && c.coefficient(j2, k) != 0 {
                    let l = fld.div(c.coefficient(j2, k), c.coefficient(j, k));
                    c = step(&c, Side::Target, j, j2, l)?;
                    steps += 1;
                }
            }
            for &k2 in &ks {
                if k2 != k && c.coefficient(j, k2) != 0 {
                    let l = fld.neg(fld.div(c.coefficient(j, k2), c.coefficient(j, k)));
                    c = step(&c, Side::Source, k2, k, l)?;
                    steps += 1;
                }
            }
            used_t[j] = true;
            pairs.push((k, j));
        }
    }
    let unmatched_targets = (0..tivs.len()).filter(|&j| !used_t[j]).collect();
    Ok(AlgebraicMatching {
        kind: MatchKind::Mono,
        pairs,
        unmatched_sources: Vec::new(),
        unmatched_targets,
        coords: c,
        steps,
    })
}

pub fn induced_matching_epi(f: &Morphism, src: &CoherentBasis, tgt: &CoherentBasis) -> Result<AlgebraicMatching> {
    if !f.is_epi() {
        return Err(Error::NotEpi);
    }
    let mut c = to_interval_coordinates(f, src, tgt)?;
    let fld = f.field();
    let sivs = src.intervals().to_vec();
    let tivs = tgt.intervals().to_vec();
    let sblocks = blocks(&sivs, |i| i.lo);
    let tblocks = blocks(&tivs, |i| i.lo);
    let mut pairs = Vec::new();
    let mut used_s = vec![false; sivs.len()];
    let mut steps = 0;
    for (lo, mut js) in tblocks {
        let mut ks = sblocks.get(&lo).cloned().unwrap_or_default();
        // Targets largest first, sources smallest first.
        js.sort_by_key(|&j| (std::cmp::Reverse(tivs[j].hi), j));
        ks.sort_by_key(|&k| (sivs[k].hi, k));
        for &j in &js {
            let k = *ks
                .iter()
                .find(|&&k| !used_s[k] && c.coefficient(j, k) != 0)
                .ok_or_else(|| Error::MatchingFailed(format!("target {j} has no partner with the same left end")))?;
            for &k2 in &ks {
                if k2 != k && c.coefficient(j, k2) != 0 {
                    let l = fld.neg(fld.div(c.coefficient(j, k2), c.coefficient(j, k)));
                    c = step(&c, Side::Source, k2, k, l)?;
                    steps += 1;
                }
            }
            for &j2 in &js {
                if j2 != j && c.coefficient(j2, k) != 0 {
                    let l = fld.div(c.coefficient(j2, k), c.coefficient(j, k));
                    c = step(&c, Side::Target, j, j2, l)?;
                    steps += 1;
                }
            }
            used_s[k] = true;
            pairs.push((k, j));
        }
    }
    let unmatched_sources = (0..sivs.len()).filter(|&k| !used_s[k]).collect();
    Ok(AlgebraicMatching {
        kind: MatchKind::Epi,
        pairs,
        unmatched_sources,
        unmatched_targets: Vec::new(),
        coords: c,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::module_from_barcode;
    use crate::field::Field;
    use crate::interval::Barcode;
    use crate::matrix::Matrix;
    use crate::poset::{LinearPoset, Orientation, Poset};
    use crate::rational::int;

    fn iv(lo: usize, hi: usize) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn model(p: &Arc<Poset>, ivs: &[Interval]) -> (Arc<PersistenceModule>, CoherentBasis) {
        let b = Barcode::from_intervals(p.clone(), ivs.iter().copied()).unwrap();
        let (m, cb) = module_from_barcode(Field::default(), &b).unwrap();
        (Arc::new(m), cb)
    }

    fn map(p: &Arc<Poset>, src: &[Interval], tgt: &[Interval], rows: &[Vec<i64>]) -> (Morphism, CoherentBasis, CoherentBasis) {
        let (m, mb) = model(p, src);
        let (n, nb) = model(p, tgt);
        let c = Matrix::from_rows(Field::default(), tgt.len(), src.len(), rows).unwrap();
        let f = IntervalMorphism::from_coefficients(m, mb.clone(), n, nb.clone(), c)
            .unwrap()
            .reconstruct()
            .unwrap();
        (f, mb, nb)
    }

    #[test]
    fn isomorphism_is_a_perfect_matching() {
        let p = Arc::new(Poset::Linear(LinearPoset::ordered(4)));
        let (m, mb) = model(&p, &[iv(0, 2), iv(1, 3)]);
        let f = Morphism::identity(m);
        for kind in [MatchKind::Mono, MatchKind::Epi] {
            let am = match kind {
                MatchKind::Mono => induced_matching_mono(&f, &mb, &mb),
                MatchKind::Epi => induced_matching_epi(&f, &mb, &mb),
            }
            .unwrap();
            assert_eq!(am.pairs.len(), 2);
            assert!(am.unmatched_sources.is_empty() && am.unmatched_targets.is_empty());
            assert_eq!(am.total_cost(&Measure::counting(4)).unwrap(), int(0));
        }
    }

    #[test]
    fn inclusion_leaves_a_cokernel() {
        let p = Arc::new(Poset::Linear(LinearPoset::ordered(4)));
        let (f, mb, nb) = map(&p, &[iv(2, 3)], &[iv(1, 3)], &[vec![1]]);
        let am = induced_matching_mono(&f, &mb, &nb).unwrap();
        assert_eq!(am.pairs, vec![(0, 0)]);
        assert_eq!(am.total_cost(&Measure::counting(4)).unwrap(), int(1));
        assert!(induced_matching_epi(&f, &mb, &nb).is_err());
    }

    #[test]
    fn quotient_leaves_a_kernel() {
        let p = Arc::new(Poset::Linear(LinearPoset::ordered(4)));
        let (f, mb, nb) = map(&p, &[iv(1, 3)], &[iv(1, 2)], &[vec![1]]);
        let am = induced_matching_epi(&f, &mb, &nb).unwrap();
        assert_eq!(am.pairs, vec![(0, 0)]);
        assert!(am.diagonals_ok().unwrap());
        assert_eq!(am.total_cost(&Measure::counting(4)).unwrap(), int(1));
    }

    #[test]
    fn one_to_two_inside_a_mono() {
        // [2,3] ↪ [0,3] ⊕ [1,3] with both coefficients nonzero: the
        // coefficient onto the larger summand is eliminated.
        let p = Arc::new(Poset::Linear(LinearPoset::ordered(4)));
        let (f, mb, nb) = map(&p, &[iv(2, 3)], &[iv(0, 3), iv(1, 3)], &[vec![2], vec![3]]);
        let am = induced_matching_mono(&f, &mb, &nb).unwrap();
        assert_eq!(am.pairs, vec![(0, 1)]);
        assert_eq!(am.coords.coefficient(0, 0), 0);
        assert_eq!(am.coords.reconstruct().unwrap(), f);
        assert!(am.diagonals_ok().unwrap() && am.ends_agree());
        let coker: Rational = f.ker_coker_dims().1.integrate(&Measure::counting(4)).unwrap();
        assert_eq!(am.total_cost(&Measure::counting(4)).unwrap(), coker);
    }

    #[test]
    fn zigzag_surjection() {
        // •→•→•←•←•: M ⊕ N = [0,2] ⊕ [2,4] onto L = [0,4].
        use Orientation::*;
        let p = Arc::new(Poset::Linear(LinearPoset::with_orientations(vec![Forward, Forward, Backward, Backward])));
        let (f, mb, nb) = map(&p, &[iv(0, 2), iv(2, 4)], &[iv(0, 4)], &[vec![1, 1]]);
        assert!(f.is_epi());
        let am = induced_matching_epi(&f, &mb, &nb).unwrap();
        assert_eq!(am.pairs, vec![(0, 0)]);
        assert_eq!(am.unmatched_sources, vec![1]);
        let mu = Measure::counting(5);
        assert_eq!(f.ker_coker_dims().0.integrate(&mu).unwrap(), int(1));
        assert_eq!(am.total_cost(&mu).unwrap(), int(5));
        assert!(!am.diagonals_ok().unwrap());
    }
}
