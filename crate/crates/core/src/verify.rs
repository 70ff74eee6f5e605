//! Seeded random instances and the property suites run by `verify` and the
//! acceptance tests.

use crate::coords::IntervalMorphism;
use crate::decompose::{
    decompose, decompose_by_ranks, decompose_by_reduction, decompose_with_basis, module_from_barcode, segment_ranks,
    CoherentBasis,
};
use crate::error::Result;
use crate::field::Field;
use crate::interval::{hom_dim, measure_of, Barcode, Interval};
use crate::matching::{induced_matching_epi, induced_matching_mono, MatchKind};
use crate::matrix::Matrix;
use crate::measure::Measure;
use crate::module::{direct_sum, hilbert_bounds, Morphism, PersistenceModule};
use crate::poset::{LinearPoset, Orientation, Poset};
use crate::rational::{format_rational, ratio, Rational};
use crate::wasserstein::{
    d_interval, d_mu_exact_decomposable, diagram, interval_zigzag, wasserstein_barcodes, wasserstein_diagrams,
    wasserstein_modules, Exponent,
};
use crate::zigzag::{Direction, Zigzag};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::Arc;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub name: String,
    pub trials: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn run(&mut self, what: &str, r: Result<()>) {
        if let Err(e) = r {
            self.checks += 1;
            self.failures.push(format!("{what}: {e}"));
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} trials, {} checks, {} failures",
            self.name,
            self.trials,
            self.checks,
            self.failures.len()
        )
    }
}

pub fn ordered_line(n: usize) -> Arc<Poset> {
    Arc::new(Poset::Linear(LinearPoset::ordered(n)))
}

pub fn random_interval(rng: &mut Rng8, n: usize) -> Interval {
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    Interval::new(a.min(b), a.max(b)).expect("ordered ends")
}

pub fn random_barcode(rng: &mut Rng8, poset: &Arc<Poset>, max: usize) -> Barcode {
    let k = rng.gen_range(0..=max);
    let n = poset.len();
    Barcode::from_intervals(poset.clone(), (0..k).map(|_| random_interval(rng, n))).expect("intervals fit")
}

/// Weights drawn from {0, 1/2, 1, 2, 3}.
pub fn random_measure(rng: &mut Rng8, n: usize) -> Measure {
    let choices = [ratio(0, 1), ratio(1, 2), ratio(1, 1), ratio(2, 1), ratio(3, 1)];
    Measure::from_weights((0..n).map(|_| choices[rng.gen_range(0..choices.len())].clone()).collect()).expect("nonnegative")
}

pub fn random_invertible(rng: &mut Rng8, field: Field, n: usize) -> Matrix {
    loop {
        let m = Matrix::from_fn(field, n, n, |_, _| rng.gen_range(0..field.prime()));
        if m.rank() == n {
            return m;
        }
    }
}

/// The barcode's model module conjugated by random pointwise automorphisms,
/// so its structure matrices are no longer 0/1.
pub fn scrambled_module(rng: &mut Rng8, field: Field, b: &Barcode) -> Result<(PersistenceModule, CoherentBasis)> {
    let (m, _) = module_from_barcode(field, b)?;
    let g: Vec<Matrix> = m.dims().iter().map(|&d| random_invertible(rng, field, d)).collect();
    let maps = m
        .poset()
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, a)| g[a.target].mul(m.map(k)).mul(&g[a.source].inverse().expect("invertible")))
        .collect();
    let s = PersistenceModule::new(field, m.poset().clone(), m.dims().to_vec(), maps)?;
    let cb = CoherentBasis::new(&s, b.clone(), g)?;
    Ok((s, cb))
}

/// A module on `poset` with random dims up to `max_dim` and random maps.
/// Only valid on linear posets, which carry no commutativity conditions.
pub fn random_linear_module(rng: &mut Rng8, field: Field, poset: &Arc<Poset>, max_dim: usize) -> Result<PersistenceModule> {
    let dims: Vec<usize> = (0..poset.len()).map(|_| rng.gen_range(0..=max_dim)).collect();
    let maps = poset
        .arrows()
        .iter()
        .map(|a| {
            let zero_bias = rng.gen_bool(0.3);
            Matrix::from_fn(field, dims[a.target], dims[a.source], |_, _| {
                if zero_bias && rng.gen_bool(0.5) {
                    0
                } else {
                    rng.gen_range(0..field.prime())
                }
            })
        })
        .collect();
    PersistenceModule::new(field, poset.clone(), dims, maps)
}

/// Random coefficients on every pair of summands admitting a nonzero map.
pub fn random_coefficients(rng: &mut Rng8, poset: &Poset, src: &CoherentBasis, tgt: &CoherentBasis, density: f64) -> Matrix {
    let field = Field::default();
    Matrix::from_fn(field, tgt.len(), src.len(), |j, k| {
        if hom_dim(poset, &src.interval(k), &tgt.interval(j)) == 1 && rng.gen_bool(density) {
            rng.gen_range(1..field.prime())
        } else {
            0
        }
    })
}

pub fn random_morphism(
    rng: &mut Rng8,
    src: (&Arc<PersistenceModule>, &CoherentBasis),
    tgt: (&Arc<PersistenceModule>, &CoherentBasis),
    density: f64,
) -> Result<Morphism> {
    let c = random_coefficients(rng, src.0.poset(), src.1, tgt.1, density);
    IntervalMorphism::from_coefficients(src.0.clone(), src.1.clone(), tgt.0.clone(), tgt.1.clone(), c)?.reconstruct()
}

fn model(field: Field, b: &Barcode) -> Result<(Arc<PersistenceModule>, CoherentBasis)> {
    let (m, cb) = module_from_barcode(field, b)?;
    Ok((Arc::new(m), cb))
}

/// A random mono between sums of at most `max` intervals: every source
/// summand sits inside a target summand with the same right end, and random
/// extra coefficients are kept when the map stays injective.
pub fn random_mono(rng: &mut Rng8, poset: &Arc<Poset>, max: usize) -> Result<(Morphism, CoherentBasis, CoherentBasis)> {
    random_half_exact(rng, poset, max, MatchKind::Mono)
}

/// The dual of [`random_mono`]: every target summand is a quotient of a
/// source summand with the same left end.
pub fn random_epi(rng: &mut Rng8, poset: &Arc<Poset>, max: usize) -> Result<(Morphism, CoherentBasis, CoherentBasis)> {
    random_half_exact(rng, poset, max, MatchKind::Epi)
}

fn random_half_exact(
    rng: &mut Rng8,
    poset: &Arc<Poset>,
    max: usize,
    kind: MatchKind,
) -> Result<(Morphism, CoherentBasis, CoherentBasis)> {
    let field = Field::default();
    let n = poset.len();
    let big: Vec<Interval> = (0..rng.gen_range(1..=max)).map(|_| random_interval(rng, n)).collect();
    let mut small = Vec::new();
    for i in &big {
        if rng.gen_bool(0.75) {
            let cut = rng.gen_range(i.lo..=i.hi);
            small.push(match kind {
                MatchKind::Mono => Interval::new(cut, i.hi).expect("inside"),
                MatchKind::Epi => Interval::new(i.lo, cut).expect("inside"),
            });
        }
    }
    let (sb, tb) = match kind {
        MatchKind::Mono => (&small, &big),
        MatchKind::Epi => (&big, &small),
    };
    let (s, scb) = model(field, &Barcode::from_intervals(poset.clone(), sb.iter().copied())?)?;
    let (t, tcb) = model(field, &Barcode::from_intervals(poset.clone(), tb.iter().copied())?)?;
    // Pair every small summand with one big summand of the right shape.
    let mut base = Matrix::zeros(field, tcb.len(), scb.len());
    let (few, many) = match kind {
        MatchKind::Mono => (&scb, &tcb),
        MatchKind::Epi => (&tcb, &scb),
    };
    let mut used = vec![false; many.len()];
    for a in 0..few.len() {
        let fa = few.interval(a);
        let b = (0..many.len())
            .find(|&b| {
                let mb = many.interval(b);
                !used[b]
                    && fa.is_subset(&mb)
                    && match kind {
                        MatchKind::Mono => fa.hi == mb.hi,
                        MatchKind::Epi => fa.lo == mb.lo,
                    }
            })
            .expect("each small summand came from a big one");
        used[b] = true;
        let coef = rng.gen_range(1..field.prime());
        match kind {
            MatchKind::Mono => base.set(b, a, coef),
            MatchKind::Epi => base.set(a, b, coef),
        }
    }
    for _ in 0..8 {
        let extra = random_coefficients(rng, poset, &scb, &tcb, 0.5);
        let c = base.add(&extra);
        let f = IntervalMorphism::from_coefficients(s.clone(), scb.clone(), t.clone(), tcb.clone(), c)?.reconstruct()?;
        let ok = match kind {
            MatchKind::Mono => f.is_mono(),
            MatchKind::Epi => f.is_epi(),
        };
        if ok {
            return Ok((f, scb, tcb));
        }
    }
    let f = IntervalMorphism::from_coefficients(s, scb.clone(), t, tcb.clone(), base)?.reconstruct()?;
    Ok((f, scb, tcb))
}

/// A zigzag from `m` to `n` through `len − 1` random interval-decomposable
/// modules, with random directions and random morphisms.
pub fn random_zigzag(
    rng: &mut Rng8,
    m: (&Arc<PersistenceModule>, &CoherentBasis),
    n: (&Arc<PersistenceModule>, &CoherentBasis),
    len: usize,
    max_intervals: usize,
) -> Result<Zigzag> {
    let field = m.0.field();
    let poset = m.0.poset().clone();
    let mut chain: Vec<(Arc<PersistenceModule>, CoherentBasis)> = vec![(m.0.clone(), m.1.clone())];
    for _ in 1..len {
        chain.push(model(field, &random_barcode(rng, &poset, max_intervals))?);
    }
    chain.push((n.0.clone(), n.1.clone()));
    let mut z = Zigzag::empty(m.0.clone());
    for w in chain.windows(2) {
        let density = rng.gen_range(0.3..1.0);
        if rng.gen_bool(0.5) {
            z.push(Direction::Forward, random_morphism(rng, (&w[0].0, &w[0].1), (&w[1].0, &w[1].1), density)?)?;
        } else {
            z.push(Direction::Backward, random_morphism(rng, (&w[1].0, &w[1].1), (&w[0].0, &w[0].1), density)?)?;
        }
    }
    Ok(z)
}

const EXPONENTS: [Exponent; 4] = [Exponent::Finite(1), Exponent::Finite(2), Exponent::Finite(3), Exponent::Infinity];

fn show(w: &Option<Rational>) -> String {
    w.as_ref().map(format_rational).unwrap_or_else(|| "inf".into())
}

/// Module-side `W_p` against diagram-side `W_p`, and the cost of the
/// matching-derived zigzag against `W_1`, on ordered lines with counting
/// measure.
pub fn isometry_suite(trials: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("isometry");
    let mut g = rng(seed);
    let poset = ordered_line(21);
    let mu = Measure::counting(21);
    let field = Field::default();
    for t in 0..trials {
        r.trials += 1;
        let a = random_barcode(&mut g, &poset, 8);
        let b = random_barcode(&mut g, &poset, 8);
        let res = (|| -> Result<()> {
            let (ma, _) = scrambled_module(&mut g, field, &a)?;
            let (mb, _) = scrambled_module(&mut g, field, &b)?;
            let (da, db) = (diagram(&a, &mu)?, diagram(&b, &mu)?);
            for p in EXPONENTS {
                let wm = wasserstein_modules(p, &ma, &mb, &mu)?.distance;
                let wd = wasserstein_diagrams(p, &da, &db)?;
                r.check(wm.objective == wd.objective, || {
                    format!("trial {t}, p = {p}: modules {} vs diagrams {} for {a} and {b}", show(&wm.objective), show(&wd.objective))
                });
            }
            let (ma, mb) = (Arc::new(ma), Arc::new(mb));
            let (w1, z) = d_mu_exact_decomposable(&ma, &mb, &mu)?;
            let cost = z.cost(&mu)?;
            r.check(cost == w1, || {
                format!("trial {t}: witness zigzag costs {} but W1 = {} for {a} and {b}", format_rational(&cost), format_rational(&w1))
            });
            Ok(())
        })();
        r.run(&format!("trial {t}"), res);
    }
    r
}

/// Random zigzags between random decomposable pairs never beat `W_1`.
pub fn zigzag_lower_bound_suite(trials: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("zigzag-lower-bound");
    let mut g = rng(seed);
    let field = Field::default();
    for t in 0..trials {
        r.trials += 1;
        let res = (|| -> Result<()> {
            let n = g.gen_range(2..=8);
            let poset = ordered_line(n);
            let mu = if g.gen_bool(0.5) { Measure::counting(n) } else { random_measure(&mut g, n) };
            let (m, mcb) = model(field, &random_barcode(&mut g, &poset, 4))?;
            let (k, kcb) = model(field, &random_barcode(&mut g, &poset, 4))?;
            let len = g.gen_range(1..=4);
            let z = random_zigzag(&mut g, (&m, &mcb), (&k, &kcb), len, 4)?;
            let w1 = wasserstein_modules(Exponent::Finite(1), &m, &k, &mu)?.distance.objective.unwrap_or_default();
            let cost = z.cost(&mu)?;
            r.check(cost >= w1, || {
                format!(
                    "trial {t}: zigzag of length {len} costs {} below W1 = {} between {} and {}",
                    format_rational(&cost),
                    format_rational(&w1),
                    mcb.barcode(),
                    kcb.barcode()
                )
            });
            Ok(())
        })();
        r.run(&format!("trial {t}"), res);
    }
    r
}

/// Metric axioms on triples and p-subadditivity on quadruples, for
/// `p ∈ {1, 2, ∞}`.
pub fn axioms_suite(trials: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("axioms");
    let mut g = rng(seed);
    let field = Field::default();
    let ps = [Exponent::Finite(1), Exponent::Finite(2), Exponent::Infinity];
    for t in 0..trials {
        r.trials += 1;
        let res = (|| -> Result<()> {
            let n = g.gen_range(3..=12);
            let poset = ordered_line(n);
            let mu = random_measure(&mut g, n);
            let mut ms: Vec<Arc<PersistenceModule>> = Vec::new();
            for _ in 0..5 {
                let b = random_barcode(&mut g, &poset, 5);
                ms.push(Arc::new(scrambled_module(&mut g, field, &b)?.0));
            }
            for p in ps {
                let w = |x: &PersistenceModule, y: &PersistenceModule| wasserstein_modules(p, x, y, &mu).map(|d| d.distance);
                let (a, b, c) = (&ms[0], &ms[1], &ms[2]);
                let ab = w(a, b)?;
                let ba = w(b, a)?;
                let bc = w(b, c)?;
                let ac = w(a, c)?;
                r.check(ab.objective == ba.objective, || format!("trial {t}, p = {p}: asymmetric"));
                r.check(w(a, a)?.objective == Some(Rational::zero()), || format!("trial {t}, p = {p}: W(M, M) ≠ 0"));
                r.check(ac.triangle(&ab, &bc), || {
                    format!("trial {t}, p = {p}: triangle fails with {} > {} + {}", show(&ac.objective), show(&ab.objective), show(&bc.objective))
                });
                // W(M ⊕ M′, N ⊕ N′)^p ≤ W(M, N)^p + W(M′, N′)^p
                let (m1, n1, m2, n2) = (&ms[0], &ms[1], &ms[3], &ms[4]);
                let left = direct_sum(&[m1.clone(), m2.clone()])?.module;
                let right = direct_sum(&[n1.clone(), n2.clone()])?.module;
                let whole = w(&left, &right)?.objective.unwrap_or_default();
                let x = w(m1, n1)?.objective.unwrap_or_default();
                let y = w(m2, n2)?.objective.unwrap_or_default();
                let bound = match p {
                    Exponent::Infinity => x.clone().max(y.clone()),
                    Exponent::Finite(_) => &x + &y,
                };
                r.check(whole <= bound, || {
                    format!("trial {t}, p = {p}: sum distance {} exceeds {}", format_rational(&whole), format_rational(&bound))
                });
            }
            Ok(())
        })();
        r.run(&format!("trial {t}"), res);
    }
    r
}

/// Induced matchings of random monos and epis.
pub fn matching_suite(trials: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("matching");
    let mut g = rng(seed);
    for t in 0..trials {
        for kind in [MatchKind::Mono, MatchKind::Epi] {
            r.trials += 1;
            let res = (|| -> Result<()> {
                let n = g.gen_range(2..=10);
                let poset = ordered_line(n);
                let mu = random_measure(&mut g, n);
                let (f, sb, tb) = match kind {
                    MatchKind::Mono => random_mono(&mut g, &poset, 6)?,
                    MatchKind::Epi => random_epi(&mut g, &poset, 6)?,
                };
                let am = match kind {
                    MatchKind::Mono => induced_matching_mono(&f, &sb, &tb)?,
                    MatchKind::Epi => induced_matching_epi(&f, &sb, &tb)?,
                };
                let (ker, coker) = f.ker_coker_dims();
                let expect = match kind {
                    MatchKind::Mono => coker.integrate(&mu)?,
                    MatchKind::Epi => ker.integrate(&mu)?,
                };
                let total = am.total_cost(&mu)?;
                r.check(am.diagonals_ok()?, || format!("trial {t} {kind:?}: a diagonal component fails"));
                r.check(am.ends_agree(), || format!("trial {t} {kind:?}: paired ends differ"));
                r.check(am.coords.reconstruct()? == f, || format!("trial {t} {kind:?}: bases no longer represent f"));
                let complete = match kind {
                    MatchKind::Mono => am.pairs.len() == sb.len(),
                    MatchKind::Epi => am.pairs.len() == tb.len(),
                };
                r.check(complete, || format!("trial {t} {kind:?}: some summand left unmatched"));
                r.check(total == expect, || {
                    format!("trial {t} {kind:?}: matched cost {} vs {}", format_rational(&total), format_rational(&expect))
                });
                Ok(())
            })();
            r.run(&format!("trial {t} {kind:?}"), res);
        }
    }
    r
}

fn orientations(n: usize) -> impl Iterator<Item = Vec<Orientation>> {
    let e = n.saturating_sub(1);
    (0..1u32 << e).map(move |mask| {
        (0..e)
            .map(|k| if mask >> k & 1 == 0 { Orientation::Forward } else { Orientation::Backward })
            .collect()
    })
}

/// Every orientation of every line with at most `max_points` points, with
/// `per_orientation` random modules each.
pub fn decomposition_suite(max_points: usize, per_orientation: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("decomposition");
    let mut g = rng(seed);
    let field = Field::default();
    for n in 1..=max_points {
        for o in orientations(n) {
            let poset = Arc::new(Poset::Linear(LinearPoset::with_orientations(o.clone())));
            for t in 0..per_orientation {
                r.trials += 1;
                let res = (|| -> Result<()> {
                    let m = random_linear_module(&mut g, field, &poset, 3)?;
                    let b = decompose(&m)?;
                    let (model_m, _) = module_from_barcode(field, &b)?;
                    r.check(b.dims() == m.dims(), || format!("{poset} #{t}: dims not reproduced by {b}"));
                    r.check(segment_ranks(&model_m)? == segment_ranks(&m)?, || format!("{poset} #{t}: segment ranks differ for {b}"));
                    r.check(decompose(&model_m)? == b, || format!("{poset} #{t}: barcode model does not round-trip"));
                    if poset.is_ordered() {
                        let (rb, _) = decompose_by_reduction(&m)?;
                        r.check(rb == decompose_by_ranks(&m)?, || format!("{poset} #{t}: reduction and ranks disagree"));
                    }
                    let (_, cb) = decompose_with_basis(&m)?;
                    r.run(&format!("{poset} #{t}: coherent basis"), cb.check(&m));
                    Ok(())
                })();
                r.run(&format!("{poset} #{t}"), res);
            }
        }
    }
    r
}

/// Every pair of intervals (and each interval against zero) on every
/// orientation of every line with at most `max_points` points.
pub fn interval_suite(max_points: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("intervals");
    let mut g = rng(seed);
    let field = Field::default();
    for n in 1..=max_points {
        for o in orientations(n) {
            let poset = Arc::new(Poset::Linear(LinearPoset::with_orientations(o)));
            let mut ivs: Vec<Option<Interval>> = vec![None];
            for lo in 0..n {
                for hi in lo..n {
                    ivs.push(Some(Interval::new(lo, hi).expect("ordered")));
                }
            }
            for mu in [Measure::counting(n), random_measure(&mut g, n)] {
                for i in &ivs {
                    for j in &ivs {
                        r.trials += 1;
                        let res = (|| -> Result<()> {
                            let d = d_interval(i.as_ref(), j.as_ref(), &mu)?;
                            let inside = |x: &Option<Interval>, p: usize| x.is_some_and(|x| x.contains(p));
                            let brute = mu.of_points((0..n).filter(|&p| inside(i, p) != inside(j, p)));
                            let z = interval_zigzag(field, &poset, i.as_ref(), j.as_ref())?;
                            let cost = z.cost(&mu)?;
                            let lower = hilbert_bounds(z.start(), z.end(), &mu)?.0;
                            let ok = d == brute && cost == d && lower == d && z.len() <= 4;
                            r.check(ok, || {
                                format!(
                                    "{poset}: {i:?} vs {j:?}: d = {}, brute = {}, zigzag = {}, hilbert = {}",
                                    format_rational(&d),
                                    format_rational(&brute),
                                    format_rational(&cost),
                                    format_rational(&lower)
                                )
                            });
                            Ok(())
                        })();
                        r.run(&format!("{poset}: {i:?} vs {j:?}"), res);
                    }
                }
            }
        }
    }
    r
}

/// Hilbert bounds around `W_1` on ordered lines, and interval-level
/// persistence against the diagonal, plus the zigzag lower bound suite.
pub fn bounds_suite(trials: usize, seed: u64) -> SuiteReport {
    let mut r = zigzag_lower_bound_suite(trials, seed);
    r.name = "bounds".into();
    let mut g = rng(seed ^ 0xb0b);
    let field = Field::default();
    for t in 0..trials {
        r.trials += 1;
        let res = (|| -> Result<()> {
            let n = g.gen_range(2..=12);
            let poset = ordered_line(n);
            let mu = random_measure(&mut g, n);
            let a = random_barcode(&mut g, &poset, 6);
            let b = random_barcode(&mut g, &poset, 6);
            let (ma, _) = model(field, &a)?;
            let (mb, _) = model(field, &b)?;
            let (lo, hi) = hilbert_bounds(&ma, &mb, &mu)?;
            let w1 = wasserstein_barcodes(Exponent::Finite(1), &a, &b, &mu)?.objective.unwrap_or_default();
            r.check(lo <= w1 && w1 <= hi, || {
                format!("trial {t}: W1 {} outside [{}, {}]", format_rational(&w1), format_rational(&lo), format_rational(&hi))
            });
            for (i, x) in a.intervals().iter().zip(diagram(&a, &mu)?) {
                let pers = x.death.finite().cloned().unwrap_or_default() - x.birth.finite().cloned().unwrap_or_default();
                r.check(pers == measure_of(i, &mu)?, || format!("trial {t}: persistence of {i} differs from its measure"));
            }
            Ok(())
        })();
        r.run(&format!("trial {t}"), res);
    }
    r
}
