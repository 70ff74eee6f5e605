//! Intervals of linear posets, barcodes, and the interval relations.

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::poset::{Orientation, Poset};
use crate::rational::Rational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// A contiguous, nonempty range of point indices `lo..=hi` of a linear poset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(p: usize) -> Self {
        Interval { lo: p, hi: p }
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: usize) -> bool {
        self.lo <= p && p <= self.hi
    }

    pub fn points(&self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn is_subset(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Points of `self` not in `other`.
    pub fn minus(&self, other: &Interval) -> Vec<usize> {
        self.points().filter(|&p| !other.contains(p)).collect()
    }

    fn check(&self, poset: &Poset) -> Result<()> {
        if poset.as_linear().is_none() {
            return Err(Error::PosetMismatch("intervals live on linear posets".into()));
        }
        if self.hi >= poset.len() {
            return Err(Error::PosetMismatch(format!(
                "interval [{}, {}] exceeds a poset of {} points",
                self.lo,
                self.hi,
                poset.len()
            )));
        }
        Ok(())
    }

    pub fn indicator(&self, n: usize) -> Vec<usize> {
        (0..n).map(|p| usize::from(self.contains(p))).collect()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

pub fn measure_of(i: &Interval, mu: &Measure) -> Result<Rational> {
    if i.hi >= mu.len() {
        return Err(Error::PosetMismatch("interval exceeds the measure's support".into()));
    }
    Ok(mu.of_points(i.points()))
}

/// `μ(I △ J)`; `None` stands for the zero module.
pub fn symmetric_difference_measure(i: Option<&Interval>, j: Option<&Interval>, mu: &Measure) -> Result<Rational> {
    match (i, j) {
        (None, None) => Ok(Rational::zero()),
        (Some(a), None) | (None, Some(a)) => measure_of(a, mu),
        (Some(a), Some(b)) => {
            let (x, y) = (measure_of(a, mu)?, measure_of(b, mu)?);
            let both = a.intersect(b).map(|k| mu.of_points(k.points())).unwrap_or_default();
            Ok(x + y - both.clone() - both)
        }
    }
}

/// `I ≤ J`: every point of `I` lies below a point of `J` and every point
/// of `J` lies above a point of `I`. Only defined on ordered posets.
pub fn interval_leq(poset: &Poset, i: &Interval, j: &Interval) -> Result<bool> {
    if !poset.is_ordered() {
        return Err(Error::NotOrdered);
    }
    i.check(poset)?;
    j.check(poset)?;
    Ok(i.lo <= j.lo && i.hi <= j.hi)
}

/// `I ⋐ J`: `I ⊂ J` with points of `J` strictly on both sides of `I`.
pub fn interval_strictly_inside(i: &Interval, j: &Interval) -> bool {
    j.lo < i.lo && i.hi < j.hi
}

/// Dimension (0 or 1) of the space of maps from the interval module on `i`
/// to the one on `j`. Works for any edge orientation: a nonzero map exists
/// iff the intervals meet, no arrow leaves `I ∩ J` into `J ∖ I`, and no
/// arrow enters `I ∩ J` from `I ∖ J`.
pub fn hom_dim(poset: &Poset, i: &Interval, j: &Interval) -> usize {
    let Some(l) = poset.as_linear() else {
        return 0;
    };
    let Some(k) = i.intersect(j) else {
        return 0;
    };
    if k.lo > 0 {
        let o = l.orientation(k.lo - 1);
        if j.lo < i.lo && o != Orientation::Forward {
            return 0;
        }
        if i.lo < j.lo && o != Orientation::Backward {
            return 0;
        }
    }
    if k.hi + 1 < l.len() {
        let o = l.orientation(k.hi);
        if j.hi > i.hi && o != Orientation::Backward {
            return 0;
        }
        if i.hi > j.hi && o != Orientation::Forward {
            return 0;
        }
    }
    1
}

/// `K ⊆ I` spans a submodule of the interval module on `I`.
pub fn is_sub_interval(poset: &Poset, k: &Interval, i: &Interval) -> bool {
    k.is_subset(i) && hom_dim(poset, k, i) == 1
}

/// `K ⊆ I` spans a quotient of the interval module on `I`.
pub fn is_quotient_interval(poset: &Poset, k: &Interval, i: &Interval) -> bool {
    k.is_subset(i) && hom_dim(poset, i, k) == 1
}

/// A multiset of intervals on one linear poset. Interval ids are positions
/// in [`Barcode::intervals`], which lists repeats consecutively in
/// increasing `(lo, hi)` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Barcode {
    poset: Arc<Poset>,
    bars: BTreeMap<Interval, usize>,
}

impl Barcode {
    pub fn new(poset: Arc<Poset>) -> Self {
        Barcode {
            poset,
            bars: BTreeMap::new(),
        }
    }

    pub fn from_intervals(poset: Arc<Poset>, intervals: impl IntoIterator<Item = Interval>) -> Result<Self> {
        let mut b = Barcode::new(poset);
        for i in intervals {
            b.insert(i, 1)?;
        }
        Ok(b)
    }

    pub fn insert(&mut self, i: Interval, mult: usize) -> Result<()> {
        i.check(&self.poset)?;
        if mult > 0 {
            *self.bars.entry(i).or_insert(0) += mult;
        }
        Ok(())
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn multiplicities(&self) -> &BTreeMap<Interval, usize> {
        &self.bars
    }

    pub fn multiplicity(&self, i: &Interval) -> usize {
        self.bars.get(i).copied().unwrap_or(0)
    }

    pub fn intervals(&self) -> Vec<Interval> {
        self.bars
            .iter()
            .flat_map(|(i, &m)| std::iter::repeat_n(*i, m))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.bars.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Pointwise number of intervals containing each point.
    pub fn dims(&self) -> Vec<usize> {
        let mut out = vec![0; self.poset.len()];
        for (i, &m) in &self.bars {
            for p in i.points() {
                out[p] += m;
            }
        }
        out
    }

    /// Multiset union.
    pub fn union(&self, other: &Barcode) -> Result<Barcode> {
        if self.poset != other.poset {
            return Err(Error::PosetMismatch("barcodes on different posets".into()));
        }
        let mut out = self.clone();
        for (i, &m) in &other.bars {
            out.insert(*i, m)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .bars
            .iter()
            .map(|(i, m)| if *m == 1 { i.to_string() } else { format!("{i}x{m}") })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::LinearPoset;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;
    use Orientation::*;

    fn iv(lo: usize, hi: usize) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn ordered(n: usize) -> Poset {
        Poset::Linear(LinearPoset::ordered(n))
    }

    #[test]
    fn measures() {
        let mu = Measure::counting(6);
        assert_eq!(measure_of(&iv(1, 3), &mu).unwrap(), int(3));
        assert_eq!(symmetric_difference_measure(None, None, &mu).unwrap(), int(0));
        let half = Measure::from_weights(vec![int(1), ratio(1, 2)]).unwrap();
        assert_eq!(measure_of(&iv(1, 1), &half).unwrap(), ratio(1, 2));
    }

    #[test]
    fn symmetric_differences() {
        let mu = Measure::counting(6);
        let sd = |a, b| symmetric_difference_measure(Some(&a), Some(&b), &mu).unwrap();
        assert_eq!(sd(iv(1, 3), iv(1, 3)), int(0));
        assert_eq!(sd(iv(1, 3), iv(2, 5)), int(3));
        assert_eq!(sd(iv(1, 1), iv(3, 3)), int(2));
    }

    #[test]
    fn leq_and_inside() {
        let p = ordered(5);
        assert!(interval_leq(&p, &iv(1, 2), &iv(1, 2)).unwrap());
        assert!(interval_leq(&p, &iv(1, 2), &iv(2, 3)).unwrap());
        assert!(!interval_leq(&p, &iv(2, 3), &iv(1, 1)).unwrap());
        let z = Poset::Linear(LinearPoset::with_orientations(vec![Forward, Backward]));
        assert_eq!(interval_leq(&z, &iv(0, 0), &iv(0, 0)), Err(Error::NotOrdered));
        assert!(interval_strictly_inside(&iv(2, 2), &iv(1, 3)));
        assert!(!interval_strictly_inside(&iv(1, 3), &iv(1, 3)));
        assert!(!interval_strictly_inside(&iv(1, 2), &iv(1, 3)));
    }

    #[test]
    fn hom_dims_ordered() {
        let p = ordered(5);
        assert_eq!(hom_dim(&p, &iv(1, 3), &iv(1, 3)), 1);
        assert_eq!(hom_dim(&p, &iv(0, 1), &iv(3, 4)), 0);
        assert_eq!(hom_dim(&p, &iv(2, 3), &iv(1, 2)), 1);
        assert_eq!(hom_dim(&p, &iv(1, 2), &iv(2, 3)), 0);
    }

    #[test]
    fn hom_dims_zigzag() {
        // •→•→•←•←•
        let p = Poset::Linear(LinearPoset::with_orientations(vec![Forward, Forward, Backward, Backward]));
        let full = iv(0, 4);
        assert_eq!(hom_dim(&p, &iv(0, 2), &full), 1);
        assert_eq!(hom_dim(&p, &iv(2, 4), &full), 1);
        assert_eq!(hom_dim(&p, &full, &iv(0, 2)), 0);
        assert!(is_sub_interval(&p, &iv(2, 2), &full));
        assert!(is_quotient_interval(&p, &iv(0, 4), &full));
        assert!(!is_quotient_interval(&p, &iv(0, 2), &full));
    }

    #[test]
    fn barcode_dims() {
        let p = Arc::new(ordered(5));
        let b = Barcode::from_intervals(p, [iv(0, 2), iv(1, 4), iv(1, 4)]).unwrap();
        assert_eq!(b.dims(), vec![1, 3, 3, 2, 2]);
        assert_eq!(b.len(), 3);
        assert_eq!(b.intervals(), vec![iv(0, 2), iv(1, 4), iv(1, 4)]);
        assert!(b.clone().insert(iv(3, 5), 1).is_err());
    }

    fn arb_interval(n: usize) -> impl Strategy<Value = Interval> {
        (0..n, 0..n).prop_map(|(a, b)| iv(a.min(b), a.max(b)))
    }

    proptest! {
        #[test]
        fn symmetric_difference_is_a_metric(a in arb_interval(8), b in arb_interval(8), c in arb_interval(8),
                                            ws in proptest::collection::vec(0i64..5, 8)) {
            let mu = Measure::from_weights(ws.into_iter().map(int).collect()).unwrap();
            let d = |x: &Interval, y: &Interval| symmetric_difference_measure(Some(x), Some(y), &mu).unwrap();
            prop_assert_eq!(d(&a, &b), d(&b, &a));
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
            let pointwise = mu.integrate(&a.indicator(8).iter().zip(b.indicator(8))
                .map(|(x, y)| x.abs_diff(y)).collect::<Vec<_>>()).unwrap();
            prop_assert_eq!(pointwise, d(&a, &b));
        }

        #[test]
        fn leq_is_a_preorder(a in arb_interval(7), b in arb_interval(7), c in arb_interval(7)) {
            let p = ordered(7);
            prop_assert!(interval_leq(&p, &a, &a).unwrap());
            if interval_leq(&p, &a, &b).unwrap() && interval_leq(&p, &b, &c).unwrap() {
                prop_assert!(interval_leq(&p, &a, &c).unwrap());
            }
        }
    }
}
