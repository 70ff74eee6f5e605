//! Zigzags of morphisms and their cost.

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::module::{Morphism, PersistenceModule};
use crate::rational::Rational;
use num_traits::Zero;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// The step's morphism goes from the current module to the next one.
    Forward,
    /// The step's morphism goes from the next module back to the current one.
    Backward,
}

/// `M = M_0 ~ M_1 ~ ... ~ M_n = N` with each step a morphism in either
/// direction.
#[derive(Clone, Debug)]
pub struct Zigzag {
    start: Arc<PersistenceModule>,
    steps: Vec<(Direction, Morphism)>,
}

impl Zigzag {
    pub fn empty(m: Arc<PersistenceModule>) -> Self {
        Zigzag {
            start: m,
            steps: Vec::new(),
        }
    }

    pub fn new(start: Arc<PersistenceModule>, steps: Vec<(Direction, Morphism)>) -> Result<Self> {
        let mut z = Zigzag::empty(start);
        for (d, f) in steps {
            z.push(d, f)?;
        }
        Ok(z)
    }

    pub fn push(&mut self, d: Direction, f: Morphism) -> Result<()> {
        let cur = self.end().clone();
        let touching = match d {
            Direction::Forward => f.source(),
            Direction::Backward => f.target(),
        };
        if **touching != *cur {
            return Err(Error::InvalidZigzag(format!(
                "step {} does not start at the previous module",
                self.steps.len()
            )));
        }
        self.steps.push((d, f));
        Ok(())
    }

    /// `M → 0 ← N`.
    pub fn through_zero(m: Arc<PersistenceModule>, n: Arc<PersistenceModule>) -> Result<Self> {
        let z = Arc::new(PersistenceModule::zero(m.field(), m.poset().clone()));
        let to = Morphism::zero(m.clone(), z.clone())?;
        let from = Morphism::zero(n, z)?;
        Zigzag::new(m, vec![(Direction::Forward, to), (Direction::Backward, from)])
    }

    pub fn start(&self) -> &Arc<PersistenceModule> {
        &self.start
    }

    pub fn end(&self) -> &Arc<PersistenceModule> {
        match self.steps.last() {
            None => &self.start,
            Some((Direction::Forward, f)) => f.target(),
            Some((Direction::Backward, f)) => f.source(),
        }
    }

    pub fn steps(&self) -> &[(Direction, Morphism)] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Intermediate modules `M_0, ..., M_n`.
    pub fn modules(&self) -> Vec<Arc<PersistenceModule>> {
        let mut out = vec![self.start.clone()];
        for (d, f) in &self.steps {
            out.push(match d {
                Direction::Forward => f.target().clone(),
                Direction::Backward => f.source().clone(),
            });
        }
        out
    }

    /// Sum over steps of the measured kernel and cokernel dimensions.
    pub fn cost(&self, mu: &Measure) -> Result<Rational> {
        mu.check_poset(self.start.poset())?;
        self.steps
            .iter()
            .try_fold(Rational::zero(), |acc, (_, f)| Ok(acc + f.cost(mu)?))
    }

    pub fn concat(&self, other: &Zigzag) -> Result<Zigzag> {
        if **other.start() != **self.end() {
            return Err(Error::InvalidZigzag("zigzags do not meet".into()));
        }
        let mut out = self.clone();
        for (d, f) in &other.steps {
            out.push(*d, f.clone())?;
        }
        Ok(out)
    }

    pub fn reversed(&self) -> Zigzag {
        let end = self.end().clone();
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|(d, f)| {
                let d = match d {
                    Direction::Forward => Direction::Backward,
                    Direction::Backward => Direction::Forward,
                };
                (d, f.clone())
            })
            .collect();
        Zigzag { start: end, steps }
    }

    /// Replaces every step by its epi-mono factorization through the image.
    pub fn expand_images(&self) -> Result<Zigzag> {
        let mut out = Zigzag::empty(self.start.clone());
        for (d, f) in &self.steps {
            let (epi, mono) = f.image_factorize()?;
            match d {
                Direction::Forward => {
                    out.push(Direction::Forward, epi)?;
                    out.push(Direction::Forward, mono)?;
                }
                Direction::Backward => {
                    out.push(Direction::Backward, mono)?;
                    out.push(Direction::Backward, epi)?;
                }
            }
        }
        Ok(out)
    }
}
