//! TOML documents for modules, morphisms and zigzags.
//!
//! Rationals are written as integers or strings such as `"3/2"`. A point is
//! one coordinate on a line and a `[x, y]` pair on a grid. Paths inside
//! morphism and zigzag documents are relative to the referring file.

use crate::decompose::module_from_barcode;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::{FiltrationEdge, GraphFiltration};
use crate::interval::{Barcode, Interval};
use crate::matrix::Matrix;
use crate::measure::Measure;
use crate::module::{Morphism, PersistenceModule};
use crate::poset::{GridPoset, LinearPoset, Orientation, Poset};
use crate::rational::{format_rational, int, parse_rational, Rational};
use crate::zigzag::{Direction, Zigzag};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn value(&self) -> Result<Rational> {
        match self {
            Num::Int(v) => Ok(int(*v)),
            Num::Text(s) => parse_rational(s),
        }
    }

    pub fn from_rational(r: &Rational) -> Num {
        if r.is_integer() {
            if let Ok(v) = i64::try_from(r.numer()) {
                return Num::Int(v);
            }
        }
        Num::Text(format_rational(r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointDoc {
    Line(Num),
    Grid([Num; 2]),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PosetDoc {
    Linear {
        coords: Vec<Num>,
        /// One letter per arrow, `f` for forward and `b` for backward.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        orientations: Option<String>,
    },
    Grid {
        xs: Vec<Num>,
        ys: Vec<Num>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeasureDoc {
    Counting,
    Weights { weights: Vec<Num> },
    LebesgueCells { upper: Vec<Num> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalDoc {
    pub lo: Num,
    pub hi: Num,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub multiplicity: usize,
}

fn one() -> usize {
    1
}

fn is_one(v: &usize) -> bool {
    *v == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub from: PointDoc,
    pub to: PointDoc,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub appears: Vec<PointDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub u: usize,
    pub v: usize,
    pub appears: Vec<PointDoc>,
}

/// A module given by exactly one of: a barcode, dimensions plus maps (dims
/// in point order, `ix * ny + iy` on grids), or a graph filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_prime: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    pub poset: PosetDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<IntervalDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<MapDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<VertexDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<EdgeDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub at: PointDoc,
    pub matrix: Vec<Vec<i64>>,
}

/// Per-point matrices between two module files; points left out carry zero
/// maps. `induced = "inclusion"` instead derives the map from two
/// filtration files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub induced: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<ComponentDoc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionDoc {
    Forward,
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub direction: DirectionDoc,
    pub morphism: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZigzagDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
    #[serde(default)]
    pub steps: Vec<StepDoc>,
}

pub fn parse_doc<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_toml<T: Serialize>(doc: &T) -> Result<String> {
    toml::to_string(doc).map_err(|e| Error::Parse(e.to_string()))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_doc<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    parse_doc(&read(path)?).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn nums(v: &[Num]) -> Result<Vec<Rational>> {
    v.iter().map(Num::value).collect()
}

impl PosetDoc {
    pub fn build(&self) -> Result<Poset> {
        match self {
            PosetDoc::Linear { coords, orientations } => {
                let coords = nums(coords)?;
                let n = coords.len();
                let orients = match orientations {
                    None => vec![Orientation::Forward; n.saturating_sub(1)],
                    Some(s) => s
                        .chars()
                        .filter(|c| !c.is_whitespace())
                        .map(|c| match c {
                            'f' | 'F' => Ok(Orientation::Forward),
                            'b' | 'B' => Ok(Orientation::Backward),
                            other => Err(Error::Parse(format!("orientation letter {other:?}"))),
                        })
                        .collect::<Result<_>>()?,
                };
                Ok(Poset::Linear(LinearPoset::new(coords, orients)?))
            }
            PosetDoc::Grid { xs, ys } => Ok(Poset::Grid(GridPoset::new(nums(xs)?, nums(ys)?)?)),
        }
    }

    pub fn from_poset(p: &Poset) -> PosetDoc {
        match p {
            Poset::Linear(l) => PosetDoc::Linear {
                coords: l.coords().iter().map(Num::from_rational).collect(),
                orientations: (!l.is_ordered()).then(|| {
                    l.orientations()
                        .iter()
                        .map(|o| match o {
                            Orientation::Forward => 'f',
                            Orientation::Backward => 'b',
                        })
                        .collect()
                }),
            },
            Poset::Grid(g) => PosetDoc::Grid {
                xs: g.xs().iter().map(Num::from_rational).collect(),
                ys: g.ys().iter().map(Num::from_rational).collect(),
            },
        }
    }
}

impl MeasureDoc {
    pub fn build(&self, poset: &Poset) -> Result<Measure> {
        match self {
            MeasureDoc::Counting => Ok(Measure::counting(poset.len())),
            MeasureDoc::Weights { weights } => {
                let m = Measure::from_weights(nums(weights)?)?;
                m.check_poset(poset)?;
                Ok(m)
            }
            MeasureDoc::LebesgueCells { upper } => Measure::lebesgue_cells(poset, &nums(upper)?),
        }
    }
}

pub fn point_index(poset: &Poset, p: &PointDoc) -> Result<usize> {
    let found = match (poset, p) {
        (Poset::Linear(l), PointDoc::Line(x)) => l.index_of(&x.value()?),
        (Poset::Grid(g), PointDoc::Grid([x, y])) => g.index_of(&x.value()?, &y.value()?),
        _ => return Err(Error::Parse("point has the wrong shape for this poset".into())),
    };
    found.ok_or_else(|| Error::Parse(format!("{p:?} is not a point of the poset")))
}

pub fn point_doc(poset: &Poset, idx: usize) -> PointDoc {
    match poset {
        Poset::Linear(l) => PointDoc::Line(Num::from_rational(&l.coords()[idx])),
        Poset::Grid(g) => {
            let (ix, iy) = g.position(idx);
            PointDoc::Grid([Num::from_rational(&g.xs()[ix]), Num::from_rational(&g.ys()[iy])])
        }
    }
}

fn matrix(field: Field, rows: usize, cols: usize, entries: &[Vec<i64>]) -> Result<Matrix> {
    if rows == 0 && entries.iter().all(Vec::is_empty) {
        return Ok(Matrix::zeros(field, 0, cols));
    }
    Matrix::from_rows(field, rows, cols, entries)
}

fn rows_of(m: &Matrix) -> Vec<Vec<i64>> {
    if m.rows() == 0 {
        Vec::new()
    } else {
        m.to_signed_rows()
    }
}

/// A parsed module document with everything derived from it.
#[derive(Clone, Debug)]
pub struct LoadedModule {
    pub doc: ModuleDoc,
    pub module: Arc<PersistenceModule>,
    pub measure: Measure,
    pub barcode: Option<Barcode>,
    pub filtration: Option<GraphFiltration>,
}

impl ModuleDoc {
    /// `field` overrides the document's prime.
    pub fn build(&self, field: Option<Field>) -> Result<LoadedModule> {
        let field = match (field, self.field_prime) {
            (Some(f), _) => f,
            (None, Some(p)) => Field::new(p as u64)?,
            (None, None) => Field::default(),
        };
        let poset = Arc::new(self.poset.build()?);
        let measure = self.measure.as_ref().unwrap_or(&MeasureDoc::Counting).build(&poset)?;
        let kinds = [self.intervals.is_some(), self.dims.is_some() || self.maps.is_some(), self.vertices.is_some()];
        if kinds.iter().filter(|&&k| k).count() != 1 {
            return Err(Error::Parse("a module needs exactly one of intervals, dims/maps, or vertices/edges".into()));
        }
        let mut barcode = None;
        let mut filtration = None;
        let module = if let Some(ivs) = &self.intervals {
            let lp = poset
                .as_linear()
                .ok_or_else(|| Error::Parse("barcodes need a linear poset".into()))?;
            let mut b = Barcode::new(poset.clone());
            for d in ivs {
                let idx = |x: &Num| -> Result<usize> {
                    let v = x.value()?;
                    lp.index_of(&v)
                        .ok_or_else(|| Error::Parse(format!("{} is not a coordinate", format_rational(&v))))
                };
                b.insert(Interval::new(idx(&d.lo)?, idx(&d.hi)?)?, d.multiplicity)?;
            }
            let (m, _) = module_from_barcode(field, &b)?;
            barcode = Some(b);
            m
        } else if let Some(vs) = &self.vertices {
            let pts = |a: &[PointDoc]| a.iter().map(|p| point_index(&poset, p)).collect::<Result<Vec<_>>>();
            let vertices = vs.iter().map(|v| pts(&v.appears)).collect::<Result<Vec<_>>>()?;
            let edges = self
                .edges
                .iter()
                .flatten()
                .map(|e| {
                    Ok(FiltrationEdge {
                        u: e.u,
                        v: e.v,
                        appears: pts(&e.appears)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let g = GraphFiltration::new(poset.clone(), vertices, edges)?;
            let m = g.h0(field)?;
            filtration = Some(g);
            m
        } else {
            let dims = self.dims.clone().unwrap_or_else(|| vec![0; poset.len()]);
            if dims.len() != poset.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} dims for {} points",
                    dims.len(),
                    poset.len()
                )));
            }
            let arrows = poset.arrows();
            let mut maps: Vec<Option<Matrix>> = vec![None; arrows.len()];
            for d in self.maps.iter().flatten() {
                let (s, t) = (point_index(&poset, &d.from)?, point_index(&poset, &d.to)?);
                let k = arrows
                    .iter()
                    .position(|a| a.source == s && a.target == t)
                    .ok_or_else(|| Error::Parse(format!("no arrow from {:?} to {:?}", d.from, d.to)))?;
                if maps[k].is_some() {
                    return Err(Error::Parse(format!("map on arrow {:?} -> {:?} given twice", d.from, d.to)));
                }
                maps[k] = Some(matrix(field, dims[t], dims[s], &d.matrix)?);
            }
            let maps = maps
                .into_iter()
                .zip(&arrows)
                .map(|(m, a)| m.unwrap_or_else(|| Matrix::zeros(field, dims[a.target], dims[a.source])))
                .collect();
            PersistenceModule::new(field, poset.clone(), dims, maps)?
        };
        Ok(LoadedModule {
            doc: self.clone(),
            module: Arc::new(module),
            measure,
            barcode,
            filtration,
        })
    }

    /// A document listing `m` by dimensions and maps.
    pub fn raw(m: &PersistenceModule, measure: Option<MeasureDoc>) -> ModuleDoc {
        let poset = m.poset();
        let maps = poset
            .arrows()
            .iter()
            .enumerate()
            .filter(|(k, _)| !m.map(*k).is_zero())
            .map(|(k, a)| MapDoc {
                from: point_doc(poset, a.source),
                to: point_doc(poset, a.target),
                matrix: rows_of(m.map(k)),
            })
            .collect();
        ModuleDoc {
            field_prime: (m.field() != Field::default()).then(|| m.field().prime()),
            dims: Some(m.dims().to_vec()),
            poset: PosetDoc::from_poset(poset),
            measure,
            intervals: None,
            maps: Some(maps),
            vertices: None,
            edges: None,
        }
    }
}

/// Loads files once each so that morphisms and zigzags share modules.
#[derive(Debug, Default)]
pub struct Loader {
    field: Option<Field>,
    modules: HashMap<PathBuf, LoadedModule>,
}

fn key(path: &Path) -> PathBuf {
    std::fs::canonicalize(path).unwrap_or_else(|_| path.to_path_buf())
}

fn relative(base: &Path, p: &str) -> PathBuf {
    match base.parent() {
        Some(dir) => dir.join(p),
        None => PathBuf::from(p),
    }
}

impl Loader {
    pub fn new(field: Option<Field>) -> Self {
        Loader {
            field,
            modules: HashMap::new(),
        }
    }

    pub fn module(&mut self, path: &Path) -> Result<LoadedModule> {
        let k = key(path);
        if let Some(m) = self.modules.get(&k) {
            return Ok(m.clone());
        }
        let doc: ModuleDoc = read_doc(path)?;
        let m = doc.build(self.field)?;
        self.modules.insert(k, m.clone());
        Ok(m)
    }

    pub fn morphism(&mut self, path: &Path) -> Result<Morphism> {
        let doc: MorphismDoc = read_doc(path)?;
        let src = self.module(&relative(path, &doc.source))?;
        let tgt = self.module(&relative(path, &doc.target))?;
        match doc.induced.as_deref() {
            Some("inclusion") => {
                if !doc.components.is_empty() {
                    return Err(Error::Parse("an induced morphism takes no components".into()));
                }
                let (Some(a), Some(b)) = (&src.filtration, &tgt.filtration) else {
                    return Err(Error::Parse("induced inclusions need two filtration files".into()));
                };
                a.inclusion(b, src.module.clone(), tgt.module.clone())
            }
            Some(other) => Err(Error::Parse(format!("unknown induced morphism {other:?}"))),
            None => {
                let (s, t) = (&src.module, &tgt.module);
                if s.poset() != t.poset() {
                    return Err(Error::PosetMismatch(format!("{}: source and target posets differ", path.display())));
                }
                let field = s.field();
                let mut comps: Vec<Option<Matrix>> = vec![None; s.poset().len()];
                for c in &doc.components {
                    let p = point_index(s.poset(), &c.at)?;
                    if comps[p].is_some() {
                        return Err(Error::Parse(format!("component at {:?} given twice", c.at)));
                    }
                    comps[p] = Some(matrix(field, t.dim(p), s.dim(p), &c.matrix)?);
                }
                let comps = comps
                    .into_iter()
                    .enumerate()
                    .map(|(p, m)| m.unwrap_or_else(|| Matrix::zeros(field, t.dim(p), s.dim(p))))
                    .collect();
                Morphism::new(s.clone(), t.clone(), comps)
            }
        }
    }

    /// The zigzag and the measure of its first module.
    pub fn zigzag(&mut self, path: &Path) -> Result<(Zigzag, Measure)> {
        let doc: ZigzagDoc = read_doc(path)?;
        let steps = doc
            .steps
            .iter()
            .map(|s| {
                let d = match s.direction {
                    DirectionDoc::Forward => Direction::Forward,
                    DirectionDoc::Backward => Direction::Backward,
                };
                Ok((d, self.morphism(&relative(path, &s.morphism))?))
            })
            .collect::<Result<Vec<_>>>()?;
        let start = match (&doc.start, steps.first()) {
            (Some(s), _) => self.module(&relative(path, s))?,
            (None, Some((d, f))) => {
                let m = match d {
                    Direction::Forward => f.source(),
                    Direction::Backward => f.target(),
                };
                self.modules
                    .values()
                    .find(|l| l.module == *m)
                    .cloned()
                    .ok_or_else(|| Error::InvalidZigzag("start module not loaded".into()))?
            }
            (None, None) => return Err(Error::Parse("an empty zigzag needs a start module".into())),
        };
        let z = Zigzag::new(start.module.clone(), steps)?;
        Ok((z, start.measure))
    }
}

pub fn morphism_doc(f: &Morphism, source: &str, target: &str) -> MorphismDoc {
    let poset = f.source().poset();
    MorphismDoc {
        source: source.into(),
        target: target.into(),
        induced: None,
        components: (0..poset.len())
            .filter(|&p| !f.component(p).is_zero())
            .map(|p| ComponentDoc {
                at: point_doc(poset, p),
                matrix: rows_of(f.component(p)),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BARS: &str = r#"
[poset]
kind = "linear"
coords = [0, 1, 2, 3, 4]
orientations = "ffbb"

[[intervals]]
lo = 0
hi = 2

[[intervals]]
lo = 2
hi = 4
multiplicity = 2
"#;

    #[test]
    fn barcode_document() {
        let doc: ModuleDoc = parse_doc(BARS).unwrap();
        let m = doc.build(None).unwrap();
        assert_eq!(m.module.dims(), &[1, 1, 3, 2, 2]);
        assert_eq!(m.barcode.unwrap().len(), 3);
        let again: ModuleDoc = parse_doc(&to_toml(&doc).unwrap()).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn raw_round_trip() {
        let doc: ModuleDoc = parse_doc(BARS).unwrap();
        let m = doc.build(None).unwrap().module;
        let raw = ModuleDoc::raw(&m, Some(MeasureDoc::Weights {
            weights: vec![Num::Text("1/2".into()), Num::Int(1), Num::Int(1), Num::Int(2), Num::Int(0)],
        }));
        let text = to_toml(&raw).unwrap();
        let back: ModuleDoc = parse_doc(&text).unwrap();
        assert_eq!(back, raw);
        assert_eq!(*back.build(None).unwrap().module, *m);
    }

    #[test]
    fn grid_filtration() {
        let text = r#"
[poset]
kind = "grid"
xs = [0, 1, 2]
ys = [0, 1, 2]

[measure]
kind = "lebesgue-cells"
upper = ["5/2", 3]

[[vertices]]
appears = [[0, 0]]

[[vertices]]
appears = [[1, 0], [0, 1]]

[[edges]]
u = 0
v = 1
appears = [[2, 1], [1, 2]]
"#;
        let m = parse_doc::<ModuleDoc>(text).unwrap().build(None).unwrap();
        assert_eq!(m.module.dims(), &[1, 2, 2, 2, 2, 1, 2, 1, 1]);
        assert_eq!(m.measure.weight(8), &parse_rational("1/2").unwrap());
    }

    #[test]
    fn rejects_bad_documents() {
        for bad in [
            "poset = 3",
            "[poset]\nkind = \"linear\"\ncoords = [0, 1]\n[[intervals]]\nlo = 0\nhi = 5\n",
            "[poset]\nkind = \"linear\"\ncoords = [0, 1]\ndims = [1, 1]\n",
            "[poset]\nkind = \"linear\"\ncoords = [0, 1]\norientations = \"x\"\n[[intervals]]\nlo = 0\nhi = 1\n",
        ] {
            let r = parse_doc::<ModuleDoc>(bad).and_then(|d| d.build(None));
            assert!(r.is_err(), "{bad}");
        }
    }
}
