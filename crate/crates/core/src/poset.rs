//! Finite indexing posets: linear quivers with any arrow orientation, and
//! two-parameter grids with the product order.

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Arrow from point `i` to point `i + 1`.
    Forward,
    /// Arrow from point `i + 1` to point `i`.
    Backward,
}

/// A generating arrow of the poset, between point indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearPoset {
    coords: Vec<Rational>,
    orients: Vec<Orientation>,
}

impl LinearPoset {
    pub fn new(coords: Vec<Rational>, orients: Vec<Orientation>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoset("a linear poset needs at least one point".into()));
        }
        if orients.len() + 1 != coords.len() {
            return Err(Error::InvalidPoset(format!(
                "{} points need {} edge orientations, got {}",
                coords.len(),
                coords.len() - 1,
                orients.len()
            )));
        }
        if coords.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPoset("coordinates must be strictly increasing".into()));
        }
        Ok(LinearPoset { coords, orients })
    }

    /// The ordered poset on integer coordinates `0..n`.
    pub fn ordered(n: usize) -> Self {
        Self::with_orientations(vec![Orientation::Forward; n.saturating_sub(1)])
    }

    /// Integer coordinates `0..=orients.len()` with the given orientations.
    pub fn with_orientations(orients: Vec<Orientation>) -> Self {
        let coords = (0..=orients.len() as i64).map(crate::rational::int).collect();
        LinearPoset { coords, orients }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn orientations(&self) -> &[Orientation] {
        &self.orients
    }

    /// Orientation of the edge between points `e` and `e + 1`.
    pub fn orientation(&self, e: usize) -> Orientation {
        self.orients[e]
    }

    pub fn is_ordered(&self) -> bool {
        self.orients.iter().all(|&o| o == Orientation::Forward)
    }

    pub fn index_of(&self, coord: &Rational) -> Option<usize> {
        self.coords.iter().position(|c| c == coord)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridPoset {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

impl GridPoset {
    pub fn new(xs: Vec<Rational>, ys: Vec<Rational>) -> Result<Self> {
        if xs.is_empty() || ys.is_empty() {
            return Err(Error::InvalidPoset("grid axes must be nonempty".into()));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) || ys.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPoset("grid coordinates must be strictly increasing".into()));
        }
        Ok(GridPoset { xs, ys })
    }

    pub fn xs(&self) -> &[Rational] {
        &self.xs
    }

    pub fn ys(&self) -> &[Rational] {
        &self.ys
    }

    pub fn nx(&self) -> usize {
        self.xs.len()
    }

    pub fn ny(&self) -> usize {
        self.ys.len()
    }

    /// Points are numbered `ix * ny + iy`.
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        ix * self.ny() + iy
    }

    pub fn position(&self, idx: usize) -> (usize, usize) {
        (idx / self.ny(), idx % self.ny())
    }

    pub fn index_of(&self, x: &Rational, y: &Rational) -> Option<usize> {
        let ix = self.xs.iter().position(|c| c == x)?;
        let iy = self.ys.iter().position(|c| c == y)?;
        Some(self.index(ix, iy))
    }

    fn horizontal_count(&self) -> usize {
        (self.nx() - 1) * self.ny()
    }

    /// Arrow index of `(ix, iy) -> (ix + 1, iy)`.
    pub fn horizontal_arrow(&self, ix: usize, iy: usize) -> usize {
        ix * self.ny() + iy
    }

    /// Arrow index of `(ix, iy) -> (ix, iy + 1)`.
    pub fn vertical_arrow(&self, ix: usize, iy: usize) -> usize {
        self.horizontal_count() + ix * (self.ny() - 1) + iy
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Poset {
    Linear(LinearPoset),
    Grid(GridPoset),
}

impl Poset {
    pub fn len(&self) -> usize {
        match self {
            Poset::Linear(l) => l.len(),
            Poset::Grid(g) => g.nx() * g.ny(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_linear(&self) -> Option<&LinearPoset> {
        match self {
            Poset::Linear(l) => Some(l),
            Poset::Grid(_) => None,
        }
    }

    pub fn as_grid(&self) -> Option<&GridPoset> {
        match self {
            Poset::Grid(g) => Some(g),
            Poset::Linear(_) => None,
        }
    }

    /// Ordered means the order is total and every arrow increases the index:
    /// a fully forward-oriented linear poset.
    pub fn is_ordered(&self) -> bool {
        matches!(self, Poset::Linear(l) if l.is_ordered())
    }

    /// All generating arrows, indexed consistently with module structure maps.
    pub fn arrows(&self) -> Vec<Arrow> {
        match self {
            Poset::Linear(l) => l
                .orients
                .iter()
                .enumerate()
                .map(|(e, o)| match o {
                    Orientation::Forward => Arrow {
                        source: e,
                        target: e + 1,
                    },
                    Orientation::Backward => Arrow {
                        source: e + 1,
                        target: e,
                    },
                })
                .collect(),
            Poset::Grid(g) => {
                let mut out = Vec::new();
                for ix in 0..g.nx().saturating_sub(1) {
                    for iy in 0..g.ny() {
                        out.push(Arrow {
                            source: g.index(ix, iy),
                            target: g.index(ix + 1, iy),
                        });
                    }
                }
                for ix in 0..g.nx() {
                    for iy in 0..g.ny().saturating_sub(1) {
                        out.push(Arrow {
                            source: g.index(ix, iy),
                            target: g.index(ix, iy + 1),
                        });
                    }
                }
                out
            }
        }
    }

    /// Unit squares of a grid as `(h_bottom, v_right, v_left, h_top)` arrow
    /// indices: `v_right ∘ h_bottom` must equal `h_top ∘ v_left`.
    pub fn squares(&self) -> Vec<(usize, [usize; 4])> {
        let Poset::Grid(g) = self else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for ix in 0..g.nx().saturating_sub(1) {
            for iy in 0..g.ny().saturating_sub(1) {
                out.push((
                    g.index(ix, iy),
                    [
                        g.horizontal_arrow(ix, iy),
                        g.vertical_arrow(ix + 1, iy),
                        g.vertical_arrow(ix, iy),
                        g.horizontal_arrow(ix, iy + 1),
                    ],
                ));
            }
        }
        out
    }

    /// The partial order generated by the arrows.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        match self {
            Poset::Linear(l) => {
                if a <= b {
                    l.orients[a..b].iter().all(|&o| o == Orientation::Forward)
                } else {
                    l.orients[b..a].iter().all(|&o| o == Orientation::Backward)
                }
            }
            Poset::Grid(g) => {
                let (ax, ay) = g.position(a);
                let (bx, by) = g.position(b);
                ax <= bx && ay <= by
            }
        }
    }

    /// A directed path of arrow indices from `a` to `b`, when `a <= b`.
    pub fn path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        if !self.leq(a, b) {
            return None;
        }
        match self {
            Poset::Linear(_) => Some(if a <= b { (a..b).collect() } else { (b..a).rev().collect() }),
            Poset::Grid(g) => {
                let (ax, ay) = g.position(a);
                let (bx, by) = g.position(b);
                let mut out: Vec<usize> = (ax..bx).map(|ix| g.horizontal_arrow(ix, ay)).collect();
                out.extend((ay..by).map(|iy| g.vertical_arrow(bx, iy)));
                Some(out)
            }
        }
    }

    pub fn point_label(&self, idx: usize) -> String {
        match self {
            Poset::Linear(l) => format_rational(&l.coords[idx]),
            Poset::Grid(g) => {
                let (ix, iy) = g.position(idx);
                format!("({}, {})", format_rational(&g.xs[ix]), format_rational(&g.ys[iy]))
            }
        }
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Poset::Linear(l) => {
                write!(f, "•")?;
                for o in &l.orients {
                    write!(f, "{}•", if *o == Orientation::Forward { "→" } else { "←" })?;
                }
                Ok(())
            }
            Poset::Grid(g) => write!(f, "{}x{} grid", g.nx(), g.ny()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use Orientation::*;

    #[test]
    fn zigzag_order() {
        let p = Poset::Linear(LinearPoset::with_orientations(vec![Forward, Forward, Backward, Backward]));
        assert!(p.leq(0, 2));
        assert!(p.leq(4, 2));
        assert!(!p.leq(2, 4));
        assert!(!p.leq(0, 3));
        assert!(p.leq(3, 3));
        assert_eq!(p.to_string(), "•→•→•←•←•");
        assert_eq!(p.path(4, 2), Some(vec![3, 2]));
    }

    #[test]
    fn grid_arrows_and_squares() {
        let g = GridPoset::new(vec![int(0), int(1), int(2)], vec![int(0), int(1)]).unwrap();
        let p = Poset::Grid(g.clone());
        let arrows = p.arrows();
        assert_eq!(arrows.len(), 2 * 2 + 3);
        let a = arrows[g.horizontal_arrow(1, 1)];
        assert_eq!((a.source, a.target), (g.index(1, 1), g.index(2, 1)));
        let v = arrows[g.vertical_arrow(2, 0)];
        assert_eq!((v.source, v.target), (g.index(2, 0), g.index(2, 1)));
        assert_eq!(p.squares().len(), 2);
        assert!(p.leq(g.index(0, 0), g.index(2, 1)));
        assert!(!p.leq(g.index(1, 1), g.index(2, 0)));
    }

    #[test]
    fn rejects_bad_coordinates() {
        assert!(LinearPoset::new(vec![int(0), int(0)], vec![Forward]).is_err());
        assert!(LinearPoset::new(vec![int(0), int(1)], vec![]).is_err());
        assert!(GridPoset::new(vec![int(1), int(0)], vec![int(0)]).is_err());
    }
}
