//! Wasserstein distances between persistence diagrams and between
//! interval-decomposable modules, with witness zigzags for `d_μ`.

use crate::assignment::{bottleneck_assignment, min_cost_assignment};
use crate::decompose::{decompose_with_basis, CoherentBasis};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::interval::{is_sub_interval, measure_of, symmetric_difference_measure, Barcode, Interval};
use crate::measure::Measure;
use crate::module::{direct_sum, hilbert_bounds, Morphism, PersistenceModule};
use crate::poset::Poset;
use crate::rational::{pow, to_f64, Extended, Rational};
use crate::zigzag::{Direction, Zigzag};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(u32),
    Infinity,
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            t => match t.parse::<u32>() {
                Ok(p) if p >= 1 => Ok(Exponent::Finite(p)),
                _ => Err(Error::Parse(format!("exponent must be a positive integer or inf, got {t:?}"))),
            },
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramPoint {
    pub birth: Extended,
    pub death: Extended,
}

impl DiagramPoint {
    pub fn finite(birth: Rational, death: Rational) -> Self {
        DiagramPoint {
            birth: Extended::Finite(birth),
            death: Extended::Finite(death),
        }
    }

    fn is_finite(&self) -> bool {
        self.birth.is_finite() && self.death.is_finite()
    }
}

/// The point of an interval on a linear poset: birth is the first
/// coordinate plus the measure before the interval, and death exceeds birth
/// by the measure of the interval.
pub fn diagram_point(poset: &Poset, i: &Interval, mu: &Measure) -> Result<DiagramPoint> {
    let lp = poset.as_linear().ok_or_else(|| Error::NotDecomposable("diagram points need a linear poset".into()))?;
    mu.check_poset(poset)?;
    let birth = &lp.coords()[0] + mu.of_points(0..i.lo);
    let death = &birth + measure_of(i, mu)?;
    Ok(DiagramPoint::finite(birth, death))
}

pub fn diagram(b: &Barcode, mu: &Measure) -> Result<Vec<DiagramPoint>> {
    b.intervals().iter().map(|i| diagram_point(b.poset(), i, mu)).collect()
}

/// One entry of an optimal matching; `None` stands for the diagonal, or for
/// the zero module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matched {
    pub a: Option<usize>,
    pub b: Option<usize>,
    pub cost: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wasserstein {
    pub p: Exponent,
    /// `Σ cost^p` for finite `p`, the largest cost for `p = ∞`; `None` when
    /// the distance is infinite.
    pub objective: Option<Rational>,
    pub matching: Vec<Matched>,
}

fn nth_root_exact(x: &Rational, p: u32) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let root = |v: &BigInt| {
        let r = v.nth_root(p);
        (r.pow(p) == *v).then_some(r)
    };
    Some(Rational::new(root(x.numer())?, root(x.denom())?))
}

impl Wasserstein {
    pub fn is_infinite(&self) -> bool {
        self.objective.is_none()
    }

    /// The distance itself when it is rational.
    pub fn exact(&self) -> Option<Rational> {
        let o = self.objective.as_ref()?;
        match self.p {
            Exponent::Infinity => Some(o.clone()),
            Exponent::Finite(p) => nth_root_exact(o, p),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match (&self.objective, self.p) {
            (None, _) => f64::INFINITY,
            (Some(o), Exponent::Infinity) => to_f64(o),
            (Some(o), Exponent::Finite(p)) => to_f64(o).powf(1.0 / p as f64),
        }
    }

    /// `x^p`, or `x` itself for `p = ∞`: comparable with the objective.
    fn lift(&self, x: &Rational) -> Rational {
        match self.p {
            Exponent::Infinity => x.clone(),
            Exponent::Finite(p) => pow(x, p),
        }
    }

    pub fn at_least(&self, x: &Rational) -> bool {
        x.is_negative() || self.objective.as_ref().is_none_or(|o| *o >= self.lift(x))
    }

    pub fn at_most(&self, x: &Rational) -> bool {
        !x.is_negative() && self.objective.as_ref().is_some_and(|o| *o <= self.lift(x))
    }

    pub fn equals(&self, x: &Rational) -> bool {
        self.objective.as_ref().is_some_and(|o| *o == self.lift(x))
    }

    /// Exact check of `self ≤ a + b` for `p ∈ {1, 2, ∞}`, with a relative
    /// tolerance of 1e-9 otherwise.
    pub fn triangle(&self, a: &Wasserstein, b: &Wasserstein) -> bool {
        let (Some(x), Some(y), Some(z)) = (&self.objective, &a.objective, &b.objective) else {
            return self.objective.is_none() || a.objective.is_none() || b.objective.is_none();
        };
        match self.p {
            Exponent::Finite(1) => *x <= y + z,
            Exponent::Infinity => *x <= y + z,
            Exponent::Finite(2) => {
                // √x ≤ √y + √z  ⇔  x − y − z ≤ 2√(yz)
                let d = x - y - z;
                !d.is_positive() || &d * &d <= Rational::from_integer(4.into()) * y * z
            }
            Exponent::Finite(_) => {
                let (x, y, z) = (self.to_f64(), a.to_f64(), b.to_f64());
                x <= (y + z) * (1.0 + 1e-9) + 1e-12
            }
        }
    }
}

fn lifted(p: Exponent, x: &Rational) -> Rational {
    match p {
        Exponent::Infinity => x.clone(),
        Exponent::Finite(q) => pow(x, q),
    }
}

/// Optimal partial matching between `A` and `B` where unmatched elements
/// pay their diagonal cost.
pub fn solve_matching(p: Exponent, ground: &[Vec<Rational>], diag_a: &[Rational], diag_b: &[Rational]) -> Wasserstein {
    let (na, nb) = (diag_a.len(), diag_b.len());
    let n = na + nb;
    let mut cost = vec![vec![Rational::zero(); n]; n];
    for (i, row) in cost.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = match (i < na, j < nb) {
                (true, true) => lifted(p, &ground[i][j]),
                (true, false) => lifted(p, &diag_a[i]),
                (false, true) => lifted(p, &diag_b[j]),
                (false, false) => Rational::zero(),
            };
        }
    }
    let (objective, assign) = match p {
        Exponent::Infinity => bottleneck_assignment(&cost),
        Exponent::Finite(_) => min_cost_assignment(&cost),
    };
    let mut matching = Vec::new();
    for (i, &j) in assign.iter().enumerate() {
        match (i < na, j < nb) {
            (true, true) => matching.push(Matched {
                a: Some(i),
                b: Some(j),
                cost: ground[i][j].clone(),
            }),
            (true, false) => matching.push(Matched {
                a: Some(i),
                b: None,
                cost: diag_a[i].clone(),
            }),
            (false, true) => matching.push(Matched {
                a: None,
                b: Some(j),
                cost: diag_b[j].clone(),
            }),
            (false, false) => {}
        }
    }
    Wasserstein {
        p,
        objective: Some(objective),
        matching,
    }
}

/// `W_p` between diagrams under the 1-norm, with the diagonal cost of a
/// point equal to its persistence.
pub fn wasserstein_diagrams(p: Exponent, a: &[DiagramPoint], b: &[DiagramPoint]) -> Result<Wasserstein> {
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        for x in a {
            for y in b {
                x.birth.abs_diff(&y.birth)?;
                x.death.abs_diff(&y.death)?;
            }
        }
        for x in a.iter().chain(b) {
            x.birth.abs_diff(&x.death)?;
        }
        return Ok(Wasserstein {
            p,
            objective: None,
            matching: Vec::new(),
        });
    }
    let f = |x: &Extended| x.finite().unwrap().clone();
    let ground: Vec<Vec<Rational>> = a
        .iter()
        .map(|x| {
            b.iter()
                .map(|y| (f(&x.birth) - f(&y.birth)).abs() + (f(&x.death) - f(&y.death)).abs())
                .collect()
        })
        .collect();
    let diag = |xs: &[DiagramPoint]| -> Vec<Rational> { xs.iter().map(|x| (f(&x.death) - f(&x.birth)).abs()).collect() };
    Ok(solve_matching(p, &ground, &diag(a), &diag(b)))
}

/// `d_μ` between interval modules, `None` standing for zero.
pub fn d_interval(i: Option<&Interval>, j: Option<&Interval>, mu: &Measure) -> Result<Rational> {
    symmetric_difference_measure(i, j, mu)
}

/// `W_p` between barcodes with ground metric `d_μ` on intervals.
pub fn wasserstein_barcodes(p: Exponent, a: &Barcode, b: &Barcode, mu: &Measure) -> Result<Wasserstein> {
    if a.poset() != b.poset() {
        return Err(Error::PosetMismatch("barcodes live on different posets".into()));
    }
    mu.check_poset(a.poset())?;
    let (ia, ib) = (a.intervals(), b.intervals());
    let ground = ia
        .iter()
        .map(|x| ib.iter().map(|y| d_interval(Some(x), Some(y), mu)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let da = ia.iter().map(|x| measure_of(x, mu)).collect::<Result<Vec<_>>>()?;
    let db = ib.iter().map(|x| measure_of(x, mu)).collect::<Result<Vec<_>>>()?;
    Ok(solve_matching(p, &ground, &da, &db))
}

#[derive(Clone, Debug)]
pub struct ModuleDistance {
    pub distance: Wasserstein,
    pub source: Barcode,
    pub target: Barcode,
}

/// Decomposes both modules and matches their barcodes.
pub fn wasserstein_modules(p: Exponent, m: &PersistenceModule, n: &PersistenceModule, mu: &Measure) -> Result<ModuleDistance> {
    if m.poset() != n.poset() {
        return Err(Error::PosetMismatch("modules live on different posets".into()));
    }
    let (a, _) = decompose_with_basis(m)?;
    let (b, _) = decompose_with_basis(n)?;
    let distance = wasserstein_barcodes(p, &a, &b, mu)?;
    Ok(ModuleDistance {
        distance,
        source: a,
        target: b,
    })
}

fn interval_module(field: Field, poset: &Arc<Poset>, i: Option<&Interval>) -> Result<Arc<PersistenceModule>> {
    Ok(Arc::new(match i {
        Some(i) => PersistenceModule::interval(field, poset.clone(), i)?,
        None => PersistenceModule::zero(field, poset.clone()),
    }))
}

/// Moves from the interval module on `from` to the one on `to`, where the two
/// differ at one end only.
fn interval_step(z: &mut Zigzag, poset: &Poset, from: Interval, to: Interval) -> Result<()> {
    let field = z.start().field();
    let cur = z.end().clone();
    let next = interval_module(field, cur.poset(), Some(&to))?;
    let (small, big) = if to.is_subset(&from) { (to, from) } else { (from, to) };
    let shrinking = small == to;
    let (d, f) = if is_sub_interval(poset, &small, &big) {
        // small ↪ big
        if shrinking {
            (Direction::Backward, Morphism::interval_map(next, cur, &to, &from, 1)?)
        } else {
            (Direction::Forward, Morphism::interval_map(cur, next, &from, &to, 1)?)
        }
    } else if shrinking {
        (Direction::Forward, Morphism::interval_map(cur, next, &from, &to, 1)?)
    } else {
        (Direction::Backward, Morphism::interval_map(next, cur, &to, &from, 1)?)
    };
    z.push(d, f)
}

/// A zigzag between interval modules whose cost is `d_μ(I, J)` for every
/// measure: through zero when the intervals are disjoint, otherwise by
/// trimming `I` to `I ∩ J` and growing to `J`, one end at a time.
pub fn interval_zigzag(field: Field, poset: &Arc<Poset>, i: Option<&Interval>, j: Option<&Interval>) -> Result<Zigzag> {
    let m = interval_module(field, poset, i)?;
    let n = interval_module(field, poset, j)?;
    let (i, j, k) = match (i, j) {
        (None, None) => return Ok(Zigzag::empty(m)),
        (Some(_), None) => return Zigzag::new(m.clone(), vec![(Direction::Forward, Morphism::zero(m, n)?)]),
        (None, Some(_)) => return Zigzag::new(m.clone(), vec![(Direction::Backward, Morphism::zero(n, m)?)]),
        (Some(i), Some(j)) => match i.intersect(j) {
            None => return Zigzag::through_zero(m, n),
            Some(k) => (*i, *j, k),
        },
    };
    let mut z = Zigzag::empty(m);
    let mut cur = i;
    for next in [
        Interval::new(k.lo, cur.hi)?,
        k,
        Interval::new(j.lo, k.hi)?,
        j,
    ] {
        if next != cur {
            interval_step(&mut z, poset, cur, next)?;
            cur = next;
        }
    }
    Ok(z)
}

/// Embeds the steps of `z` into the pattern `F B F B ...` of length `len`,
/// filling gaps with identities.
fn pad_to_pattern(z: &Zigzag, len: usize) -> Vec<Morphism> {
    let mut out = Vec::with_capacity(len);
    let mut cur = z.start().clone();
    let dir = |t: usize| if t.is_multiple_of(2) { Direction::Forward } else { Direction::Backward };
    for (d, f) in z.steps() {
        while dir(out.len()) != *d {
            out.push(Morphism::identity(cur.clone()));
        }
        out.push(f.clone());
        cur = match d {
            Direction::Forward => f.target().clone(),
            Direction::Backward => f.source().clone(),
        };
    }
    while out.len() < len {
        out.push(Morphism::identity(cur.clone()));
    }
    out
}

/// The iso from a direct sum of the listed summands (`None` for zero) onto
/// `m`, through the coherent basis.
fn summand_iso(m: &Arc<PersistenceModule>, basis: &CoherentBasis, ids: &[Option<usize>], sum: Arc<PersistenceModule>) -> Result<Morphism> {
    let comps = (0..m.poset().len())
        .map(|p| {
            let cols: Vec<usize> = ids
                .iter()
                .filter_map(|id| id.and_then(|a| basis.column_of(p, a)))
                .collect();
            basis.basis(p).select_columns(&cols)
        })
        .collect();
    Morphism::new(sum, m.clone(), comps)
}

/// `d_μ(M, N) = W_1` for interval-decomposable modules over an ordered
/// line, together with a zigzag attaining it.
pub fn d_mu_exact_decomposable(m: &Arc<PersistenceModule>, n: &Arc<PersistenceModule>, mu: &Measure) -> Result<(Rational, Zigzag)> {
    let poset = m.poset().clone();
    if !poset.is_ordered() {
        return Err(Error::NotOrdered);
    }
    if *poset != **n.poset() {
        return Err(Error::PosetMismatch("modules live on different posets".into()));
    }
    let field = m.field();
    let (a, ab) = decompose_with_basis(m)?;
    let (b, bb) = decompose_with_basis(n)?;
    let w = wasserstein_barcodes(Exponent::Finite(1), &a, &b, mu)?;
    let value = w.objective.clone().unwrap_or_default();
    if w.matching.is_empty() {
        return Ok((value, Zigzag::empty(m.clone())));
    }
    let (ia, ib) = (a.intervals(), b.intervals());
    let pieces = w
        .matching
        .iter()
        .map(|e| interval_zigzag(field, &poset, e.a.map(|x| &ia[x]), e.b.map(|y| &ib[y])))
        .collect::<Result<Vec<_>>>()?;
    let len = 2 * pieces.iter().map(Zigzag::len).max().unwrap_or(0);
    let padded: Vec<Vec<Morphism>> = pieces.iter().map(|z| pad_to_pattern(z, len)).collect();
    let a_ids: Vec<Option<usize>> = w.matching.iter().map(|e| e.a).collect();
    let b_ids: Vec<Option<usize>> = w.matching.iter().map(|e| e.b).collect();
    let s = direct_sum(&pieces.iter().map(|z| z.start().clone()).collect::<Vec<_>>())?.module;
    let t = direct_sum(&pieces.iter().map(|z| z.end().clone()).collect::<Vec<_>>())?.module;
    let mut z = Zigzag::empty(m.clone());
    z.push(Direction::Backward, summand_iso(m, &ab, &a_ids, s)?)?;
    for step in 0..len {
        let d = if step % 2 == 0 { Direction::Forward } else { Direction::Backward };
        let f = Morphism::direct_sum(&padded.iter().map(|v| v[step].clone()).collect::<Vec<_>>())?;
        z.push(d, f)?;
    }
    z.push(Direction::Forward, summand_iso(n, &bb, &b_ids, t)?)?;
    Ok((value, z))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundSource {
    /// `∫|dim M − dim N| dμ`.
    Hilbert,
    /// Through the zero module.
    Trivial,
    /// `W_1` on the barcodes, exact for decomposable modules on an ordered line.
    Isometry,
    /// Cost of the hint zigzag with this index.
    Hint(usize),
    /// The two modules are equal, so the empty zigzag costs nothing.
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub lower: Rational,
    pub upper: Rational,
    pub lower_source: BoundSource,
    pub upper_source: BoundSource,
}

impl Bracket {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// Lower and upper bounds on `d_μ(M, N)` from the Hilbert functions, the
/// given zigzags between `M` and `N` (in either direction) and, when both are
/// decomposable over an ordered line, the exact value.
pub fn d_mu_bracket(m: &Arc<PersistenceModule>, n: &Arc<PersistenceModule>, mu: &Measure, hints: &[Zigzag]) -> Result<Bracket> {
    let (lower, trivial) = hilbert_bounds(m, n, mu)?;
    let mut b = Bracket {
        lower,
        upper: trivial,
        lower_source: BoundSource::Hilbert,
        upper_source: BoundSource::Trivial,
    };
    if **m == **n {
        b.upper = Rational::zero();
        b.upper_source = BoundSource::Identity;
    }
    for (k, z) in hints.iter().enumerate() {
        let forward = **z.start() == **m && **z.end() == **n;
        let backward = **z.start() == **n && **z.end() == **m;
        if !forward && !backward {
            return Err(Error::InvalidZigzag(format!("hint {k} does not connect the two modules")));
        }
        let c = z.cost(mu)?;
        if c < b.upper {
            b.upper = c;
            b.upper_source = BoundSource::Hint(k);
        }
    }
    if m.poset().is_ordered() {
        let w = wasserstein_modules(Exponent::Finite(1), m, n, mu)?.distance;
        let exact = w.objective.unwrap_or_default();
        if exact > b.lower {
            b.lower = exact.clone();
            b.lower_source = BoundSource::Isometry;
        }
        if exact < b.upper {
            b.upper = exact;
            b.upper_source = BoundSource::Isometry;
        }
    }
    Ok(b)
}

/// Every part lives on the poset of `whole` and their dimensions add up to it.
pub fn check_parts(whole: &PersistenceModule, parts: &[Arc<PersistenceModule>]) -> Result<()> {
    let mut dims = vec![0; whole.dims().len()];
    for p in parts {
        if p.poset() != whole.poset() {
            return Err(Error::PosetMismatch("part lives on another poset".into()));
        }
        for (d, x) in dims.iter_mut().zip(p.dims()) {
            *d += x;
        }
    }
    if dims != whole.dims() {
        return Err(Error::DimensionMismatch("parts do not add up to the module".into()));
    }
    Ok(())
}

/// `W_p` over the given indecomposable parts with the Hilbert lower bound as
/// ground cost, a lower bound on the algebraic `W_p`.
pub fn wp_lower_bound_indecomposable(
    p: Exponent,
    parts_m: &[Arc<PersistenceModule>],
    parts_n: &[Arc<PersistenceModule>],
    mu: &Measure,
) -> Result<Wasserstein> {
    let ground = parts_m
        .iter()
        .map(|x| parts_n.iter().map(|y| Ok(hilbert_bounds(x, y, mu)?.0)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mass = |xs: &[Arc<PersistenceModule>]| xs.iter().map(|x| x.hilbert().integrate(mu)).collect::<Result<Vec<_>>>();
    Ok(solve_matching(p, &ground, &mass(parts_m)?, &mass(parts_n)?))
}
