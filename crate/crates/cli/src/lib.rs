//! Command implementations behind the `algwass` binary. Each command returns
//! a [`Report`] holding a JSON value for machine output, text for people,
//! and an exit status.

use algwass::decompose::decompose_with_basis;
use algwass::interval::{measure_of, symmetric_difference_measure, Interval};
use algwass::io::{to_toml, LoadedModule, Loader, MeasureDoc, ModuleDoc};
use algwass::matching::{induced_matching_epi, induced_matching_mono, MatchKind};
use algwass::rational::{format_rational, to_f64};
use algwass::verify;
use algwass::wasserstein::{
    check_parts, d_mu_bracket, diagram, wasserstein_diagrams, wasserstein_modules, wp_lower_bound_indecomposable,
    BoundSource, Matched,
};
use algwass::{Error, Exponent, Field, Poset, Rational, Wasserstein};
use num_traits::Zero;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
    Invalid,
    ModeMismatch,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 1,
            Status::Invalid => 2,
            Status::ModeMismatch => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub status: Status,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report {
            json,
            text,
            status: Status::Ok,
        }
    }
}

/// Command failures, split by exit status.
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NotDecomposable(_) | Error::NotOrdered | Error::NotMono | Error::NotEpi => Status::ModeMismatch,
            _ => Status::Invalid,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn mismatch(message: impl Into<String>) -> Failure {
    Failure {
        status: Status::ModeMismatch,
        message: message.into(),
    }
}

pub type CmdResult = std::result::Result<Report, Failure>;

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub field_prime: Option<u32>,
    pub seed: u64,
}

impl Options {
    fn loader(&self) -> std::result::Result<Loader, Failure> {
        let field = self.field_prime.map(|p| Field::new(p as u64)).transpose()?;
        Ok(Loader::new(field))
    }
}

fn q(r: &Rational) -> String {
    format_rational(r)
}

fn extended(x: &algwass::Extended) -> String {
    x.finite().map(q).unwrap_or_else(|| "inf".into())
}

fn interval_label(poset: &Poset, i: &Interval) -> String {
    format!("[{}, {}]", poset.point_label(i.lo), poset.point_label(i.hi))
}

pub fn decompose(opts: &Options, file: &Path) -> CmdResult {
    let m = opts.loader()?.module(file)?;
    let (b, _) = decompose_with_basis(&m.module)?;
    let poset = b.poset().clone();
    let points = diagram(&b, &m.measure)?;
    let mut text = format!("{} on {}\n", if b.is_empty() { "zero module" } else { "barcode" }, poset);
    let mut rows = Vec::new();
    for (iv, mult) in b.multiplicities() {
        let x = algwass::wasserstein::diagram_point(&poset, iv, &m.measure)?;
        let (birth, death) = (extended(&x.birth), extended(&x.death));
        writeln!(text, "  {} x{}  point ({birth}, {death})", interval_label(&poset, iv), mult).unwrap();
        rows.push(json!({
            "lo": iv.lo, "hi": iv.hi,
            "lo_coord": poset.point_label(iv.lo), "hi_coord": poset.point_label(iv.hi),
            "multiplicity": mult,
            "birth": birth, "death": death,
        }));
    }
    Ok(Report::ok(json!({ "command": "decompose", "intervals": rows, "count": points.len() }), text))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMode {
    Module,
    Diagram,
    Bracket,
    LowerBound,
}

pub struct DistanceArgs<'a> {
    pub p: Exponent,
    pub a: &'a Path,
    pub b: &'a Path,
    pub mode: DistanceMode,
    pub hints: &'a [PathBuf],
    pub parts_a: &'a [PathBuf],
    pub parts_b: &'a [PathBuf],
}

fn value_json(w: &Wasserstein) -> Value {
    json!({
        "p": w.p.to_string(),
        "infinite": w.is_infinite(),
        "objective": w.objective.as_ref().map(q),
        "exact": w.exact().as_ref().map(q),
        "approx": w.to_f64(),
    })
}

fn value_text(w: &Wasserstein) -> String {
    match (&w.objective, w.p) {
        (None, _) => "W = inf".into(),
        (Some(o), Exponent::Infinity) => format!("W_inf = {}", q(o)),
        (Some(o), Exponent::Finite(1)) => format!("W_1 = {}", q(o)),
        (Some(o), Exponent::Finite(p)) => match w.exact() {
            Some(e) => format!("W_{p}^{p} = {}  W_{p} = {}", q(o), q(&e)),
            None => format!("W_{p}^{p} = {}  W_{p} ≈ {:.9}", q(o), w.to_f64()),
        },
    }
}

fn same_measure(a: &LoadedModule, b: &LoadedModule) -> std::result::Result<(), Failure> {
    if a.measure != b.measure {
        return Err(Error::InvalidMeasure("the two files declare different measures".into()).into());
    }
    Ok(())
}

pub fn distance(opts: &Options, args: &DistanceArgs) -> CmdResult {
    let mut loader = opts.loader()?;
    let ma = loader.module(args.a)?;
    let mb = loader.module(args.b)?;
    same_measure(&ma, &mb)?;
    let mu = &ma.measure;
    let poset = ma.module.poset().clone();
    let linear = poset.as_linear().is_some();
    match args.mode {
        DistanceMode::Module | DistanceMode::Diagram if !linear => {
            return Err(mismatch("--module and --diagram need linear posets; use --bracket or --lower-bound on grids"))
        }
        _ => {}
    }
    match args.mode {
        DistanceMode::Module => {
            let d = wasserstein_modules(args.p, &ma.module, &mb.module, mu)?;
            let (ia, ib) = (d.source.intervals(), d.target.intervals());
            let label = |x: Option<usize>, ivs: &[Interval]| x.map(|k| interval_label(&poset, &ivs[k])).unwrap_or_else(|| "0".into());
            let mut text = value_text(&d.distance) + "\n";
            let rows: Vec<Value> = d
                .distance
                .matching
                .iter()
                .map(|e| {
                    let (l, r) = (label(e.a, &ia), label(e.b, &ib));
                    writeln!(text, "  {l} <-> {r}  d = {}", q(&e.cost)).unwrap();
                    json!({ "a": l, "b": r, "cost": q(&e.cost) })
                })
                .collect();
            let mut j = value_json(&d.distance);
            j["command"] = json!("distance");
            j["mode"] = json!("module");
            j["matching"] = json!(rows);
            Ok(Report::ok(j, text))
        }
        DistanceMode::Diagram => {
            let (ba, _) = decompose_with_basis(&ma.module)?;
            let (bb, _) = decompose_with_basis(&mb.module)?;
            let (da, db) = (diagram(&ba, mu)?, diagram(&bb, mu)?);
            let w = wasserstein_diagrams(args.p, &da, &db)?;
            let pt = |x: &algwass::wasserstein::DiagramPoint| {
format!("({}, {})", extended(&x.birth), extended(&x.death))
            };
            let mut text = value_text(&w) + "\n";
            let rows: Vec<Value> = w
                .matching
                .iter()
                .map(|e: &Matched| {
                    let l = e.a.map(|k| pt(&da[k])).unwrap_or_else(|| "diagonal".into());
                    let r = e.b.map(|k| pt(&db[k])).unwrap_or_else(|| "diagonal".into());
                    writeln!(text, "  {l} <-> {r}  d = {}", q(&e.cost)).unwrap();
                    json!({ "a": l, "b": r, "cost": q(&e.cost) })
                })
                .collect();
            let mut j = value_json(&w);
            j["command"] = json!("distance");
            j["mode"] = json!("diagram");
            j["matching"] = json!(rows);
            Ok(Report::ok(j, text))
        }
        DistanceMode::Bracket => {
            let hints = args
                .hints
                .iter()
                .map(|h| Ok(loader.zigzag(h)?.0))
                .collect::<std::result::Result<Vec<_>, Error>>()?;
            let b = d_mu_bracket(&ma.module, &mb.module, mu, &hints)?;
            let src = |s: &BoundSource| match s {
                BoundSource::Hilbert => "hilbert".to_string(),
                BoundSource::Trivial => "through zero".to_string(),
                BoundSource::Isometry => "W_1 of the barcodes".to_string(),
                BoundSource::Identity => "equal modules".to_string(),
                BoundSource::Hint(k) => format!("hint {}", args.hints[*k].display()),
            };
            let text = format!(
                "{} <= d_mu <= {}\n  lower from {}\n  upper from {}\n",
                q(&b.lower),
                q(&b.upper),
                src(&b.lower_source),
                src(&b.upper_source)
            );
            Ok(Report::ok(
                json!({
                    "command": "distance", "mode": "bracket",
                    "lower": q(&b.lower), "upper": q(&b.upper), "exact": b.is_exact(),
                    "lower_source": src(&b.lower_source), "upper_source": src(&b.upper_source),
                }),
                text,
            ))
        }
        DistanceMode::LowerBound => {
            let parts = |files: &[PathBuf], whole: &LoadedModule, loader: &mut Loader| -> std::result::Result<Vec<_>, Failure> {
                if files.is_empty() {
                    return Ok(vec![whole.module.clone()]);
                }
                let ms = files.iter().map(|f| Ok(loader.module(f)?.module)).collect::<std::result::Result<Vec<_>, Error>>()?;
                check_parts(&whole.module, &ms)?;
                Ok(ms)
            };
            let pa = parts(args.parts_a, &ma, &mut loader)?;
            let pb = parts(args.parts_b, &mb, &mut loader)?;
            let w = wp_lower_bound_indecomposable(args.p, &pa, &pb, mu)?;
            let mut j = value_json(&w);
            j["command"] = json!("distance");
            j["mode"] = json!("lower-bound");
            let text = format!("lower bound: {}\n", value_text(&w));
            Ok(Report::ok(j, text))
        }
    }
}

pub fn matching(opts: &Options, file: &Path, kind: MatchKind) -> CmdResult {
    let mut loader = opts.loader()?;
    let f = loader.morphism(file)?;
    let src = f.source().clone();
    let tgt = f.target().clone();
    let poset = src.poset().clone();
    let m_src = loader_measure(&mut loader, file)?;
    let (_, sb) = decompose_with_basis(&src)?;
    let (_, tb) = decompose_with_basis(&tgt)?;
    let am = match kind {
        MatchKind::Mono => induced_matching_mono(&f, &sb, &tb)?,
        MatchKind::Epi => induced_matching_epi(&f, &sb, &tb)?,
    };
    let mu = &m_src;
    let (ker, coker) = f.ker_coker_dims();
    let (weight_name, weight) = match kind {
        MatchKind::Mono => ("coker", coker.integrate(mu)?),
        MatchKind::Epi => ("ker", ker.integrate(mu)?),
    };
    let total = am.total_cost(mu)?;
    let mut text = format!("{kind:?} on {poset}: {} pairs after {} basis changes\n", am.pairs.len(), am.steps);
    let mut rows = Vec::new();
    for &(k, j) in &am.pairs {
        let (a, b) = (am.source_interval(k), am.target_interval(j));
        let d = symmetric_difference_measure(Some(&a), Some(&b), mu)?;
        writeln!(
            text,
            "  {} -> {}  coefficient {}  d = {}",
            interval_label(&poset, &a),
            interval_label(&poset, &b),
            am.coords.coefficient(j, k),
            q(&d)
        )
        .unwrap();
        rows.push(json!({
            "source": interval_label(&poset, &a), "target": interval_label(&poset, &b),
            "coefficient": am.coords.coefficient(j, k), "cost": q(&d),
        }));
    }
    let mut unmatched = Vec::new();
    for (side, ids, basis) in [("source", &am.unmatched_sources, &sb), ("target", &am.unmatched_targets, &tb)] {
        for &k in ids {
            let iv = basis.interval(k);
            let d = measure_of(&iv, mu)?;
            writeln!(text, "  {side} {} unmatched  d = {}", interval_label(&poset, &iv), q(&d)).unwrap();
            unmatched.push(json!({ "side": side, "interval": interval_label(&poset, &iv), "cost": q(&d) }));
        }
    }
    let off_diagonal: Vec<Value> = (0..tb.len())
        .flat_map(|j| (0..sb.len()).map(move |k| (j, k)))
        .filter(|&(j, k)| !am.pairs.contains(&(k, j)))
        .map(|(j, k)| {
            json!({
                "source": interval_label(&poset, &am.source_interval(k)),
                "target": interval_label(&poset, &am.target_interval(j)),
                "coefficient": am.coords.coefficient(j, k),
            })
        })
        .collect();
    let diagonals = am.diagonals_ok()?;
    let identity = total == weight;
    let ordered = poset.is_ordered();
    writeln!(text, "  total matched cost {}  {weight_name} weight {}", q(&total), q(&weight)).unwrap();
    writeln!(
        text,
        "  diagonal components {}; cost = {weight_name} weight: {}",
        if diagonals { "pass" } else { "fail" },
        match (identity, ordered) {
            (true, _) => "holds",
            (false, true) => "FAILS",
            (false, false) => "does not hold (not expected off fully forward lines)",
        }
    )
    .unwrap();
    let status = if ordered && !(identity && diagonals) {
        Status::VerificationFailed
    } else {
        Status::Ok
    };
    Ok(Report {
        json: json!({
            "command": "match", "kind": format!("{kind:?}").to_lowercase(),
            "pairs": rows, "unmatched": unmatched, "off_diagonal": off_diagonal,
            "total_cost": q(&total), "weight_kind": weight_name, "weight": q(&weight),
            "diagonals_ok": diagonals, "identity_holds": identity, "ordered": ordered,
            "basis_changes": am.steps,
        }),
        text,
        status,
    })
}

/// The measure declared by the source module of a morphism file.
fn loader_measure(loader: &mut Loader, file: &Path) -> std::result::Result<algwass::Measure, Failure> {
    let doc: algwass::io::MorphismDoc = algwass::io::read_doc(file)?;
    let dir = file.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(loader.module(&dir.join(&doc.source))?.measure)
}

pub fn cost(opts: &Options, file: &Path) -> CmdResult {
    let mut loader = opts.loader()?;
    let (z, mu) = loader.zigzag(file)?;
    let mut total = Rational::zero();
    let mut text = String::new();
    let mut steps = Vec::new();
    for (k, (d, f)) in z.steps().iter().enumerate() {
        let (ker, coker) = f.ker_coker_dims();
        let (kw, cw) = (ker.integrate(&mu)?, coker.integrate(&mu)?);
        writeln!(text, "  step {k} {d:?}: ker {}  coker {}", q(&kw), q(&cw)).unwrap();
        total += &kw + &cw;
        steps.push(json!({ "direction": format!("{d:?}").to_lowercase(), "ker": q(&kw), "coker": q(&cw) }));
    }
    text = format!("zigzag cost {}\n{text}", q(&total));
    Ok(Report::ok(json!({ "command": "cost", "cost": q(&total), "approx": to_f64(&total), "steps": steps }), text))
}

pub fn verify_suite(opts: &Options, suite: &str, trials: Option<usize>) -> CmdResult {
    let seed = opts.seed;
    let report = match suite {
        "isometry" => verify::isometry_suite(trials.unwrap_or(200), seed),
        "axioms" => verify::axioms_suite(trials.unwrap_or(100), seed),
        "bounds" => verify::bounds_suite(trials.unwrap_or(200), seed),
        "matching" => verify::matching_suite(trials.unwrap_or(100), seed),
        "decomposition" => match trials {
            Some(0) => verify::decomposition_suite(0, 0, seed),
            t => verify::decomposition_suite(6, t.unwrap_or(5), seed),
        },
        "intervals" => verify::interval_suite(if trials == Some(0) { 0 } else { 5 }, seed),
        other => {
            return Err(Failure {
                status: Status::Invalid,
                message: format!("unknown suite {other:?}; expected isometry, axioms, bounds, matching, decomposition or intervals"),
            })
        }
    };
    let mut text = format!("{} {report}\n", if report.passed() { "PASS" } else { "FAIL" });
    for f in report.failures.iter().take(10) {
        writeln!(text, "  counterexample: {f}").unwrap();
    }
    Ok(Report {
        json: json!({
            "command": "verify", "suite": report.name, "seed": seed,
            "trials": report.trials, "checks": report.checks,
            "passed": report.passed(), "failures": report.failures,
        }),
        text,
        status: if report.passed() { Status::Ok } else { Status::VerificationFailed },
    })
}

/// Rewrites a module file as explicit dimensions and maps.
pub fn convert(opts: &Options, file: &Path) -> CmdResult {
    let m = opts.loader()?.module(file)?;
    let measure = m.doc.measure.clone().filter(|d| *d != MeasureDoc::Counting);
    let doc = ModuleDoc::raw(&m.module, measure);
    let text = to_toml(&doc)?;
    Ok(Report::ok(json!({ "command": "convert", "toml": text }), text))
}
