//! Graph filtrations over a poset and their degree-zero homology.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::module::{Morphism, PersistenceModule};
use crate::poset::Poset;
use petgraph::unionfind::UnionFind;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationEdge {
    pub u: usize,
    pub v: usize,
    /// Minimal points at which the edge is present.
    pub appears: Vec<usize>,
}

/// A graph whose vertices and edges appear on upsets of a poset, each given
/// by an antichain of minimal points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFiltration {
    poset: Arc<Poset>,
    vertices: Vec<Vec<usize>>,
    edges: Vec<FiltrationEdge>,
}

impl GraphFiltration {
    pub fn new(poset: Arc<Poset>, vertices: Vec<Vec<usize>>, edges: Vec<FiltrationEdge>) -> Result<Self> {
        fn check_antichain(poset: &Poset, what: String, pts: &[usize]) -> Result<()> {
            let n = poset.len();
            if pts.is_empty() {
                return Err(Error::InvalidFiltration(format!("{what} never appears")));
            }
            for (a, &x) in pts.iter().enumerate() {
                if x >= n {
                    return Err(Error::InvalidFiltration(format!("{what} appears outside the poset")));
                }
                for &y in &pts[a + 1..] {
                    if poset.leq(x, y) || poset.leq(y, x) {
                        return Err(Error::InvalidFiltration(format!(
                            "appearance set of {what} is not an antichain"
                        )));
                    }
                }
            }
            Ok(())
        }
        for (i, v) in vertices.iter().enumerate() {
            check_antichain(&poset, format!("vertex {i}"), v)?;
        }
        let f = GraphFiltration {
            poset,
            vertices,
            edges,
        };
        for (k, e) in f.edges.iter().enumerate() {
            if e.u >= f.vertices.len() || e.v >= f.vertices.len() || e.u == e.v {
                return Err(Error::InvalidFiltration(format!("edge {k} has bad endpoints")));
            }
            check_antichain(&f.poset, format!("edge {k}"), &e.appears)?;
            for &a in &e.appears {
                if !f.vertex_present(e.u, a) || !f.vertex_present(e.v, a) {
                    return Err(Error::InvalidFiltration(format!(
                        "edge {k} appears at point {a} before its endpoints"
                    )));
                }
            }
        }
        Ok(f)
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn vertices(&self) -> &[Vec<usize>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[FiltrationEdge] {
        &self.edges
    }

    fn present(&self, appears: &[usize], p: usize) -> bool {
        appears.iter().any(|&a| self.poset.leq(a, p))
    }

    pub fn vertex_present(&self, v: usize, p: usize) -> bool {
        self.present(&self.vertices[v], p)
    }

    pub fn edge_present(&self, k: usize, p: usize) -> bool {
        self.present(&self.edges[k].appears, p)
    }

    /// Component index of every present vertex at `p`; components are
    /// numbered in order of their smallest vertex.
    pub fn components(&self, p: usize) -> (Vec<Option<usize>>, usize) {
        let nv = self.vertices.len();
        let mut uf = UnionFind::<usize>::new(nv);
        for (k, e) in self.edges.iter().enumerate() {
            if self.edge_present(k, p) {
                uf.union(e.u, e.v);
            }
        }
        let mut root_label = vec![None; nv];
        let mut labels = vec![None; nv];
        let mut count = 0;
        for v in 0..nv {
            if !self.vertex_present(v, p) {
                continue;
            }
            let r = uf.find(v);
            let l = *root_label[r].get_or_insert_with(|| {
                count += 1;
                count - 1
            });
            labels[v] = Some(l);
        }
        (labels, count)
    }

    fn representatives(labels: &[Option<usize>], count: usize) -> Vec<usize> {
        let mut reps = vec![usize::MAX; count];
        for (v, l) in labels.iter().enumerate() {
            if let Some(l) = *l {
                if reps[l] == usize::MAX {
                    reps[l] = v;
                }
            }
        }
        reps
    }

    /// `H₀` with the basis of connected components at every point.
    pub fn h0(&self, field: Field) -> Result<PersistenceModule> {
        let comps: Vec<_> = (0..self.poset.len()).map(|p| self.components(p)).collect();
        let dims = comps.iter().map(|c| c.1).collect();
        let maps = self
            .poset
            .arrows()
            .iter()
            .map(|a| component_map(field, &comps[a.source], &comps[a.target]))
            .collect::<Result<Vec<_>>>()?;
        PersistenceModule::new(field, self.poset.clone(), dims, maps)
    }

    /// The map `H₀(self) → H₀(other)` induced by inclusion, where `self` is
    /// a subfiltration of `other` on the same vertex set.
    pub fn inclusion(
        &self,
        other: &GraphFiltration,
        source: Arc<PersistenceModule>,
        target: Arc<PersistenceModule>,
    ) -> Result<Morphism> {
        if self.poset != other.poset || self.vertices.len() != other.vertices.len() {
            return Err(Error::InvalidFiltration("filtrations on different vertex sets or posets".into()));
        }
        let field = source.field();
        let mut components = Vec::with_capacity(self.poset.len());
        for p in 0..self.poset.len() {
            for v in 0..self.vertices.len() {
                if self.vertex_present(v, p) && !other.vertex_present(v, p) {
                    return Err(Error::InvalidFiltration(format!("vertex {v} missing from the larger filtration")));
                }
            }
            let big = other.components(p);
            for (k, e) in self.edges.iter().enumerate() {
                if self.edge_present(k, p) && big.0[e.u] != big.0[e.v] {
                    return Err(Error::InvalidFiltration(format!(
                        "edge {k} is not inside the larger filtration"
                    )));
                }
            }
            components.push(component_map(field, &self.components(p), &big)?);
        }
        Morphism::new(source, target, components)
    }
}

fn component_map(
    field: Field,
    (src_labels, src_count): &(Vec<Option<usize>>, usize),
    (tgt_labels, tgt_count): &(Vec<Option<usize>>, usize),
) -> Result<Matrix> {
    let mut m = Matrix::zeros(field, *tgt_count, *src_count);
    for (c, v) in GraphFiltration::representatives(src_labels, *src_count).into_iter().enumerate() {
        let t = tgt_labels[v].ok_or_else(|| Error::InvalidFiltration(format!("vertex {v} disappears")))?;
        m.set(t, c, 1);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{GridPoset, LinearPoset};
    use crate::rational::int;

    fn grid(n: i64) -> Arc<Poset> {
        Arc::new(Poset::Grid(GridPoset::new((0..n).map(int).collect(), (0..n).map(int).collect()).unwrap()))
    }

    #[test]
    fn single_vertex_is_the_full_upset() {
        let p = grid(3);
        let f = GraphFiltration::new(p, vec![vec![0]], vec![]).unwrap();
        let m = f.h0(Field::default()).unwrap();
        assert_eq!(m.dims(), &[1; 9]);
        assert!(m.maps().iter().all(|a| *a == Matrix::identity(Field::default(), 1)));
    }

    #[test]
    fn merging_on_a_line() {
        let p = Arc::new(Poset::Linear(LinearPoset::ordered(4)));
        let f = GraphFiltration::new(
            p,
            vec![vec![0], vec![1]],
            vec![FiltrationEdge {
                u: 0,
                v: 1,
                appears: vec![2],
            }],
        )
        .unwrap();
        let m = f.h0(Field::default()).unwrap();
        assert_eq!(m.dims(), &[1, 2, 1, 1]);
        assert_eq!(m.map(1).to_signed_rows(), vec![vec![1, 1]]);
    }

    #[test]
    fn ill_formed_filtrations() {
        let p = Arc::new(Poset::Linear(LinearPoset::ordered(4)));
        let early = FiltrationEdge {
            u: 0,
            v: 1,
            appears: vec![0],
        };
        assert!(GraphFiltration::new(p.clone(), vec![vec![0], vec![1]], vec![early]).is_err());
        assert!(GraphFiltration::new(p, vec![vec![0, 1]], vec![]).is_err());
    }

    #[test]
    fn inclusion_is_natural() {
        let p = Arc::new(Poset::Linear(LinearPoset::ordered(4)));
        let small = GraphFiltration::new(p.clone(), vec![vec![1], vec![1]], vec![]).unwrap();
        let big = GraphFiltration::new(
            p,
            vec![vec![0], vec![1]],
            vec![FiltrationEdge {
                u: 0,
                v: 1,
                appears: vec![3],
            }],
        )
        .unwrap();
        let f = Field::default();
        let (a, b) = (Arc::new(small.h0(f).unwrap()), Arc::new(big.h0(f).unwrap()));
        let inc = small.inclusion(&big, a.clone(), b.clone()).unwrap();
        assert_eq!(inc.ker_coker_dims().0 .0, vec![0, 0, 0, 1]);
        assert_eq!(inc.ker_coker_dims().1 .0, vec![1, 0, 0, 0]);
        assert!(big.inclusion(&small, b, a).is_err());
    }
}
