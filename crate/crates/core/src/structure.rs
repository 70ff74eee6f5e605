//! Nested-chain normal forms for morphisms from or to a single interval.

use crate::coords::{to_interval_coordinates, IntervalMorphism, Side};
use crate::decompose::CoherentBasis;
use crate::error::{Error, Result};
use crate::interval::{hom_dim, interval_strictly_inside, measure_of, Interval};
use crate::measure::Measure;
use crate::module::{DimensionFunction, Morphism};
use crate::rational::Rational;

/// `f` rewritten so that its only nonzero coefficients land on a chain
/// `M_1 ⋑ M_2 ⋑ ... ⋑ M_n` of summands, strictly nested inside each other.
#[derive(Clone, Debug)]
pub struct NestedChain {
    /// Ids of the chain summands, largest first.
    pub chain: Vec<usize>,
    /// Ids of the summands `f` misses entirely.
    pub residual: Vec<usize>,
    pub coords: IntervalMorphism,
    pub ker: DimensionFunction,
    pub coker: DimensionFunction,
}

impl NestedChain {
    pub fn chain_intervals(&self, basis: &CoherentBasis) -> Vec<Interval> {
        self.chain.iter().map(|&a| basis.interval(a)).collect()
    }
}

fn single_interval(b: &CoherentBasis, err: Error) -> Result<Interval> {
    match b.intervals() {
        [i] => Ok(*i),
        _ => Err(err),
    }
}

/// Pointwise dimension of `N ⊕ (M_n∖I) ⊕ ⨁_{j<n} M_j∖((M_j∖M_{j+1})∩I)`.
fn chain_formula(n_pts: usize, i: &Interval, chain: &[Interval], residual: &[Interval]) -> DimensionFunction {
    let mut d = vec![0; n_pts];
    for (c, slot) in d.iter_mut().enumerate() {
        *slot += residual.iter().filter(|r| r.contains(c)).count();
        if let Some(last) = chain.last() {
            if last.contains(c) && !i.contains(c) {
                *slot += 1;
            }
        }
        for w in chain.windows(2) {
            let (mj, next) = (w[0], w[1]);
            if mj.contains(c) && !(!next.contains(c) && i.contains(c)) {
                *slot += 1;
            }
        }
    }
    DimensionFunction(d)
}

fn missing(n_pts: usize, i: &Interval, big: Option<&Interval>) -> DimensionFunction {
    DimensionFunction(
        (0..n_pts)
            .map(|c| usize::from(i.contains(c) && !big.is_some_and(|b| b.contains(c))))
            .collect(),
    )
}

fn finish(
    ids: &[usize],
    basis: &CoherentBasis,
    i: &Interval,
    c: IntervalMorphism,
    n_pts: usize,
    nonzero: impl Fn(&IntervalMorphism, usize) -> bool,
) -> Result<(Vec<usize>, Vec<usize>, DimensionFunction, DimensionFunction, IntervalMorphism)> {
    let mut chain: Vec<usize> = ids.iter().copied().filter(|&a| nonzero(&c, a)).collect();
    chain.sort_by_key(|&a| {
        let iv = basis.interval(a);
        (std::cmp::Reverse(iv.len()), iv.lo)
    });
    let ivs: Vec<Interval> = chain.iter().map(|&a| basis.interval(a)).collect();
    for w in ivs.windows(2) {
        if !interval_strictly_inside(&w[1], &w[0]) {
            return Err(Error::MatchingFailed(format!("survivors {} and {} are not strictly nested", w[0], w[1])));
        }
    }
    let residual: Vec<usize> = ids.iter().copied().filter(|a| !chain.contains(a)).collect();
    let rivs: Vec<Interval> = residual.iter().map(|&a| basis.interval(a)).collect();
    let short = missing(n_pts, i, ivs.first());
    let long = chain_formula(n_pts, i, &ivs, &rivs);
    Ok((chain, residual, short, long, c))
}

/// Normal form of a nonzero `f: I → M` with `M` a sum of intervals.
/// Afterwards `ker f = I∖M_1` and `coker f` is given by the chain formula.
pub fn structure_from_interval(f: &Morphism, src: &CoherentBasis, tgt: &CoherentBasis) -> Result<NestedChain> {
    let poset = f.source().poset().clone();
    if !poset.is_ordered() {
        return Err(Error::NotOrdered);
    }
    let i = single_interval(src, Error::NotIntervalSource)?;
    if f.is_zero() {
        return Err(Error::ZeroMorphism);
    }
    let fld = f.field();
    let mut c = to_interval_coordinates(f, src, tgt)?;
    let ids: Vec<usize> = (0..tgt.len()).collect();
    'outer: loop {
        let live: Vec<usize> = ids.iter().copied().filter(|&a| c.coefficient(a, 0) != 0).collect();
        for &a in &live {
            for &b in &live {
                // M_a ≤ M_b: kill a by rewriting b.
                if a != b && hom_dim(&poset, &tgt.interval(b), &tgt.interval(a)) == 1 {
                    let l = fld.div(c.coefficient(a, 0), c.coefficient(b, 0));
                    let next = c.change_basis(Side::Target, b, a, 1, l)?;
                    if next.coefficient(a, 0) == 0 {
                        c = next;
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    let n_pts = poset.len();
    let (chain, residual, ker, coker, c) = finish(&ids, tgt, &i, c, n_pts, |c, a| c.coefficient(a, 0) != 0)?;
    let check = f.ker_coker_dims();
    if check.0 != ker || check.1 != coker {
        return Err(Error::MatchingFailed("chain formula disagrees with the morphism".into()));
    }
    Ok(NestedChain {
        chain,
        residual,
        coords: c,
        ker,
        coker,
    })
}

/// Normal form of a nonzero `f: M → I`. Afterwards `coker f = I∖M_1` and
/// `ker f` is given by the chain formula.
pub fn structure_to_interval(f: &Morphism, src: &CoherentBasis, tgt: &CoherentBasis) -> Result<NestedChain> {
    let poset = f.source().poset().clone();
    if !poset.is_ordered() {
        return Err(Error::NotOrdered);
    }
    let i = single_interval(tgt, Error::NotIntervalTarget)?;
    if f.is_zero() {
        return Err(Error::ZeroMorphism);
    }
    let fld = f.field();
    let mut c = to_interval_coordinates(f, src, tgt)?;
    let ids: Vec<usize> = (0..src.len()).collect();
    'outer: loop {
        let live: Vec<usize> = ids.iter().copied().filter(|&a| c.coefficient(0, a) != 0).collect();
        for &a in &live {
            for &b in &live {
                // M_a ≤ M_b: kill b by rewriting it against a.
                if a != b && hom_dim(&poset, &src.interval(b), &src.interval(a)) == 1 {
                    let l = fld.neg(fld.div(c.coefficient(0, b), c.coefficient(0, a)));
                    let next = c.change_basis(Side::Source, b, a, 1, l)?;
                    if next.coefficient(0, b) == 0 {
                        c = next;
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    let n_pts = poset.len();
    let (chain, residual, coker, ker, c) = finish(&ids, src, &i, c, n_pts, |c, a| c.coefficient(0, a) != 0)?;
    let check = f.ker_coker_dims();
    if check.0 != ker || check.1 != coker {
        return Err(Error::MatchingFailed("chain formula disagrees with the morphism".into()));
    }
    Ok(NestedChain {
        chain,
        residual,
        coords: c,
        ker,
        coker,
    })
}

/// `μ(M_1 ∩ I)`, the part of `I` the chain accounts for.
pub fn matched_weight(chain: &NestedChain, basis: &CoherentBasis, i: &Interval, mu: &Measure) -> Result<Rational> {
    match chain.chain.first() {
        None => Ok(Rational::default()),
        Some(&a) => match basis.interval(a).intersect(i) {
            None => Ok(Rational::default()),
            Some(k) => measure_of(&k, mu),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::module_from_barcode;
    use crate::field::Field;
    use crate::interval::Barcode;
    use crate::matrix::Matrix;
    use crate::module::PersistenceModule;
    use crate::poset::{LinearPoset, Poset};
    use crate::rational::int;
    use std::sync::Arc;

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
    fn comparable_targets_collapse() {
        // I = [3,5] into [0,1] ⊕ [1,3] ⊕ [2,4], with [1,3] ≤ [2,4].
        let p = Arc::new(Poset::Linear(LinearPoset::ordered(7)));
        let (f, ib, mb) = map(&p, &[iv(3, 5)], &[iv(0, 1), iv(1, 3), iv(2, 4)], &[vec![0], vec![5], vec![1]]);
        let nc = structure_from_interval(&f, &ib, &mb).unwrap();
        assert_eq!(nc.chain_intervals(&mb), vec![iv(2, 4)]);
        assert_eq!(nc.coords.reconstruct().unwrap(), f);
        assert_eq!(nc.ker.0, vec![0, 0, 0, 0, 0, 1, 0]);
        assert_eq!(matched_weight(&nc, &mb, &iv(3, 5), &Measure::counting(7)).unwrap(), int(2));
    }

    #[test]
    fn strictly_nested_targets_survive() {
        let p = Arc::new(Poset::Linear(LinearPoset::ordered(7)));
        let (f, ib, mb) = map(&p, &[iv(3, 6)], &[iv(0, 5), iv(2, 4)], &[vec![1], vec![1]]);
        let nc = structure_from_interval(&f, &ib, &mb).unwrap();
        assert_eq!(nc.chain_intervals(&mb), vec![iv(0, 5), iv(2, 4)]);
        assert!(nc.residual.is_empty());
    }

    #[test]
    fn dual_form() {
        let p = Arc::new(Poset::Linear(LinearPoset::ordered(7)));
        let (f, mb, ib) = map(&p, &[iv(1, 4), iv(2, 3), iv(2, 6)], &[iv(0, 3)], &[vec![1, 2, 0]]);
        let nc = structure_to_interval(&f, &mb, &ib).unwrap();
        assert_eq!(nc.coords.reconstruct().unwrap(), f);
        assert_eq!(nc.chain_intervals(&mb), vec![iv(1, 4), iv(2, 3)]);
        assert_eq!(nc.coker.0, vec![1, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn bad_inputs() {
        let p = Arc::new(Poset::Linear(LinearPoset::ordered(4)));
        let (f, a, b) = map(&p, &[iv(1, 2), iv(2, 3)], &[iv(0, 2)], &[vec![1, 1]]);
        assert!(matches!(structure_from_interval(&f, &a, &b), Err(Error::NotIntervalSource)));
        let (z, a, b) = map(&p, &[iv(1, 2)], &[iv(0, 2)], &[vec![0]]);
        assert!(matches!(structure_from_interval(&z, &a, &b), Err(Error::ZeroMorphism)));
    }
}
