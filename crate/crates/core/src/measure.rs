//! Point weights on a finite poset.

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::rational::{int, Rational};
use num_traits::{Signed, Zero};

/// A nonnegative rational weight per poset point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Measure {
    weights: Vec<Rational>,
}

impl Measure {
    pub fn counting(n: usize) -> Self {
        Measure {
            weights: vec![int(1); n],
        }
    }

    pub fn from_weights(weights: Vec<Rational>) -> Result<Self> {
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidMeasure("weights must be nonnegative".into()));
        }
        Ok(Measure { weights })
    }

    /// Weights each point by the length (linear) or area (grid) of the
    /// half-open cell it represents; the last cell on each axis ends at the
    /// given upper bound.
    pub fn lebesgue_cells(poset: &Poset, upper: &[Rational]) -> Result<Self> {
        fn widths(coords: &[Rational], upper: &Rational) -> Result<Vec<Rational>> {
            let last = coords.last().expect("nonempty axis");
            if upper < last {
                return Err(Error::InvalidMeasure("upper bound precedes the last coordinate".into()));
            }
            let mut out: Vec<Rational> = coords.windows(2).map(|w| &w[1] - &w[0]).collect();
            out.push(upper - last);
            Ok(out)
        }
        match poset {
            Poset::Linear(l) => {
                let [u] = upper else {
                    return Err(Error::InvalidMeasure("a linear poset takes one upper bound".into()));
                };
                Ok(Measure {
                    weights: widths(l.coords(), u)?,
                })
            }
            Poset::Grid(g) => {
                let [ux, uy] = upper else {
                    return Err(Error::InvalidMeasure("a grid takes two upper bounds".into()));
                };
                let wx = widths(g.xs(), ux)?;
                let wy = widths(g.ys(), uy)?;
                let mut weights = vec![Rational::zero(); g.nx() * g.ny()];
                for (ix, a) in wx.iter().enumerate() {
                    for (iy, b) in wy.iter().enumerate() {
                        weights[g.index(ix, iy)] = a * b;
                    }
                }
                Ok(Measure { weights })
            }
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, p: usize) -> &Rational {
        &self.weights[p]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn is_counting(&self) -> bool {
        self.weights.iter().all(|w| *w == int(1))
    }

    pub fn check_poset(&self, poset: &Poset) -> Result<()> {
        if self.len() != poset.len() {
            return Err(Error::PosetMismatch(format!(
                "measure has {} weights, poset has {} points",
                self.len(),
                poset.len()
            )));
        }
        Ok(())
    }

    /// `Σ_p count(p) · weight(p)`.
    pub fn integrate(&self, counts: &[usize]) -> Result<Rational> {
        if counts.len() != self.len() {
            return Err(Error::PosetMismatch(format!(
                "function has {} values, measure has {} points",
                counts.len(),
                self.len()
            )));
        }
        Ok(counts
            .iter()
            .zip(&self.weights)
            .filter(|(c, _)| **c != 0)
            .fold(Rational::zero(), |acc, (&c, w)| acc + w * int(c as i64)))
    }

    /// Total weight of a set of points.
    pub fn of_points(&self, points: impl IntoIterator<Item = usize>) -> Rational {
        points
            .into_iter()
            .fold(Rational::zero(), |acc, p| acc + &self.weights[p])
    }
}
