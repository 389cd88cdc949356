//! `tsallis`: command-line front end for `tsallis-core`.
//!
//! Every subcommand writes one JSON document to stdout, or a CSV table when
//! `--csv` is given (the JSON summary then goes to stderr). Errors are
//! reported on stderr as JSON and mapped onto exit codes.

use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use tsallis_core::carnot::{
    cauchy_ratios, cc_distance, dilate, discrete_ball_sizes, growth_exponent, koranyi_norm,
    pansu_schedule, GroupKind, DEFAULT_ELEMENT_BUDGET,
};
use tsallis_core::curvature::{curvature_of_q, gaussian_curvature_numeric, q_of_curvature, ModelMetric};
use tsallis_core::entropy::{
    abe_entropy, composition_rhs, escort, product_distribution, rescaled_entropy, tsallis_entropy,
    DiscreteDistribution,
};
use tsallis_core::heisenberg::{
    bracket, embed, exp_map, group_law, multiply, HeisenbergPoint, LieVector, UpperUnitriangular,
    GROUP_LAW_CONVENTION,
};
use tsallis_core::maxent::{solve_maxent, MaxentProblem};
use tsallis_core::qalgebra::{q_add, QParam};
use tsallis_core::{Error, Execution};

const EXIT_DOMAIN: u8 = 2;
const EXIT_CONVERGENCE: u8 = 3;
const EXIT_RESOURCE: u8 = 4;
const EXIT_USAGE: u8 = 64;

const HEISENBERG_LATTICE_LAW: &str = "integer lattice, (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')";

#[derive(Parser, Debug)]
#[command(name = "tsallis", version, about = "q-deformed entropy and Heisenberg-group toolkit")]
struct Cli {
    #[command(flatten)]
    fmt: FormatFlags,

    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FormatFlags {
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// Emit a CSV table where one exists; the JSON summary goes to stderr.
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Deformed addition x + y + (1 - q) x y.
    Qadd {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
    },
    /// Tsallis entropy of a distribution.
    Entropy {
        /// Inline weights `0.5,0.5` or `@file.csv`.
        #[arg(long)]
        dist: String,
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        /// Report the rescaled entropy (1 - q) S_q instead.
        #[arg(long)]
        rescaled: bool,
    },
    /// Checks the composition law on independent pairs.
    ComposeCheck {
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        /// First system; random pairs are drawn when omitted.
        #[arg(long, requires = "dist2")]
        dist: Option<String>,
        #[arg(long, requires = "dist")]
        dist2: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Escort distribution p^q / Σ p^q.
    Escort {
        #[arg(long)]
        dist: String,
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
    },
    /// Compares the Jackson-derivative form of the entropy with the direct sum.
    AbeCheck {
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        /// Distribution to check; random strictly positive ones when omitted.
        #[arg(long)]
        dist: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Unitriangular matrix with every free entry equal to x.
    Embed {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// Product of two unitriangular matrices, by default of embed(x) and embed(y).
    Mul {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "a")]
        x: Option<f64>,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "b")]
        y: Option<f64>,
        /// First factor as `a12,a13,a23`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple, conflicts_with = "x")]
        a: Option<[f64; 3]>,
        /// Second factor as `a12,a13,a23`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple, conflicts_with = "y")]
        b: Option<[f64; 3]>,
    },
    /// Bracket table and randomized check of exp(u) exp(v) = exp(u + v + [u,v]/2).
    BchCheck {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Components are drawn from [-range, range].
        #[arg(long, default_value_t = 10.0)]
        range: f64,
    },
    /// Ball sizes of a Cayley graph and the fitted growth exponent.
    Growth {
        #[arg(long, value_enum, default_value_t = GroupArg::Heisenberg)]
        group: GroupArg,
        #[arg(long, default_value_t = 12)]
        rmax: u32,
        /// Maximum number of group elements to enumerate.
        #[arg(long, default_value_t = DEFAULT_ELEMENT_BUDGET)]
        budget: usize,
        /// Run the enumeration on one thread.
        #[arg(long)]
        sequential: bool,
        /// With --csv, also write the JSON summary to this file.
        #[arg(long)]
        summary: Option<String>,
    },
    /// Carnot-Carathéodory distance between two points.
    Ccdist {
        /// End point `x,y,z`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        to: [f64; 3],
        /// Start point `x,y,z`; the identity by default.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        from: Option<[f64; 3]>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Pansu difference quotients along a halving schedule.
    Pansu {
        #[arg(long, value_enum, default_value_t = MapArg::Shear)]
        map: MapArg,
        /// Base point `x,y,z`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple, default_value = "0,0,0")]
        g: [f64; 3],
        /// Direction `x,y,z`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple, default_value = "1,0,0")]
        h: [f64; 3],
        /// Translation point `x,y,z` for `--map translation`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple, default_value = "1,-2,0.5")]
        by: [f64; 3],
        /// Dilation factor for `--map dilation`.
        #[arg(long, default_value_t = 3.0)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        t0: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Curvature -(ln(2 - q))², numerically checked on a model metric.
    Curvature {
        /// A single index; omit to tabulate.
        #[arg(long, allow_hyphen_values = true)]
        q: Option<f64>,
        /// Invert: both indices with this curvature.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "q")]
        k: Option<f64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = -4.0)]
        q_min: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1.9)]
        q_max: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Maximum-entropy distribution for a JSON problem file.
    Maxent {
        /// Problem document `{"support": [...], "q": 1.5, "constraints": [...]}`.
        #[arg(long)]
        problem: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GroupArg {
    Heisenberg,
    Z2,
    Free2,
}

impl From<GroupArg> for GroupKind {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Heisenberg => GroupKind::Heisenberg,
            GroupArg::Z2 => GroupKind::Z2,
            GroupArg::Free2 => GroupKind::Free2,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MapArg {
    Translation,
    Dilation,
    Shear,
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok(out)
}

/// What a successful subcommand produced.
enum Output {
    Json(Value),
    /// `full`, when present, replaces `summary` in JSON mode.
    Table {
        csv: String,
        summary: Value,
        full: Option<Value>,
    },
}

struct Failed {
    error: Error,
    partial: Option<Box<Output>>,
}

impl From<Error> for Failed {
    fn from(error: Error) -> Self {
        Failed { error, partial: None }
    }
}

type CmdResult = Result<Output, Failed>;

/// Integral values print without a fractional part, everything else in the
/// shortest representation that round-trips.
fn num(x: f64) -> Value {
    if x.is_finite() && x.fract() == 0.0 && x.abs() < 9.0e15 {
        Value::from(x as i64)
    } else {
        Value::from(x)
    }
}

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

fn point_json(p: &HeisenbergPoint) -> Value {
    nums(&p.as_array())
}

fn matrix_json(m: &UpperUnitriangular) -> Value {
    Value::Array(m.to_rows().iter().map(|r| nums(r)).collect())
}

fn qparam(q: f64) -> Result<QParam, Error> {
    QParam::new(q)
}

fn load_dist(arg: &str) -> Result<DiscreteDistribution, Error> {
    match arg.strip_prefix('@') {
        Some(path) => DiscreteDistribution::from_csv_reader(File::open(path)?),
        None => DiscreteDistribution::parse_inline(arg),
    }
}

fn random_dist(rng: &mut ChaCha8Rng, positive: bool) -> Result<DiscreteDistribution, Error> {
    let n = rng.random_range(2..=50);
    let masses = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            if positive {
                0.01 + u
            } else if u < 0.1 {
                0.0
            } else {
                u
            }
        })
        .collect();
    DiscreteDistribution::from_masses(masses)
}

fn qadd(x: f64, y: f64, q: f64) -> CmdResult {
    Ok(Output::Json(json!({ "result": num(q_add(x, y, qparam(q)?)) })))
}

fn entropy(dist: &str, q: f64, rescaled: bool) -> CmdResult {
    let p = load_dist(dist)?;
    let q = qparam(q)?;
    Ok(Output::Json(if rescaled {
        json!({ "S_tilde_q": num(rescaled_entropy(&p, q)?.value) })
    } else {
        json!({ "S_q": num(tsallis_entropy(&p, q)?.value) })
    }))
}

fn compose_check(q: f64, pair: Option<(&str, &str)>, trials: usize, seed: u64) -> CmdResult {
    let q = qparam(q)?;
    let pairs = match pair {
        Some((a, b)) => vec![(load_dist(a)?, load_dist(b)?)],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let positive = q.value() < 0.0;
            (0..trials)
                .map(|_| Ok((random_dist(&mut rng, positive)?, random_dist(&mut rng, positive)?)))
                .collect::<Result<Vec<_>, Error>>()?
        }
    };
    let mut max_defect = 0.0f64;
    for (p1, p2) in &pairs {
        let s1 = tsallis_entropy(p1, q)?;
        let s2 = tsallis_entropy(p2, q)?;
        let joint = tsallis_entropy(&product_distribution(p1, p2), q)?;
        max_defect = max_defect.max((joint.value - composition_rhs(&s1, &s2, q)).abs());
    }
    Ok(Output::Json(json!({
        "q": num(q.value()),
        "pairs": pairs.len(),
        "max_defect": num(max_defect),
    })))
}

fn escort_cmd(dist: &str, q: f64) -> CmdResult {
    let p = load_dist(dist)?;
    let e = escort(&p, qparam(q)?)?;
    let mut csv = String::from(if e.support().is_some() { "weight,x\n" } else { "weight\n" });
    for (i, w) in e.weights().iter().enumerate() {
        match e.support() {
            Some(xs) => csv.push_str(&format!("{w:?},{:?}\n", xs[i])),
            None => csv.push_str(&format!("{w:?}\n")),
        }
    }
    let mut doc = Map::new();
    doc.insert("weights".into(), nums(e.weights()));
    if let Some(xs) = e.support() {
        doc.insert("support".into(), nums(xs));
    }
    Ok(Output::Table {
        csv,
        summary: Value::Object(doc),

    full: None,
    })
}

fn abe_check(q: f64, dist: Option<&str>, trials: usize, seed: u64) -> CmdResult {
    let q = qparam(q)?;
    let dists = match dist {
        Some(d) => vec![load_dist(d)?],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..trials)
                .map(|_| random_dist(&mut rng, true))
                .collect::<Result<Vec<_>, Error>>()?
        }
    };
    let mut max_defect = 0.0f64;
    let mut last = (0.0, 0.0);
    for p in &dists {
        let s = tsallis_entropy(p, q)?.value;
        let a = abe_entropy(p, q)?.value;
        max_defect = max_defect.max((s - a).abs());
        last = (s, a);
    }
    let mut doc = Map::new();
    doc.insert("q".into(), num(q.value()));
    doc.insert("distributions".into(), dists.len().into());
    if dist.is_some() {
        doc.insert("S_q".into(), num(last.0));
        doc.insert("abe".into(), num(last.1));
    }
    doc.insert("max_defect".into(), num(max_defect));
    Ok(Output::Json(Value::Object(doc)))
}

fn mul(x: Option<f64>, y: Option<f64>, a: Option<[f64; 3]>, b: Option<[f64; 3]>) -> CmdResult {
    let factor = |s: Option<f64>, t: Option<[f64; 3]>| match (s, t) {
        (_, Some([a12, a13, a23])) => UpperUnitriangular::new(a12, a13, a23),
        (Some(v), None) => embed(v),
        (None, None) => unreachable!("clap requires one of the two forms"),
    };
    let (ma, mb) = (factor(x, a), factor(y, b));
    let m = multiply(&ma, &mb);
    let mut doc = Map::new();
    doc.insert("matrix".into(), matrix_json(&m));
    if let (Some(x), Some(y)) = (x, y) {
        doc.insert("secondary_diagonal".into(), nums(&[m.a12, m.a23]));
        doc.insert("corner".into(), num(m.a13));
        doc.insert("q_add_0".into(), num(q_add(x, y, QParam::new(0.0)?)));
    }
    Ok(Output::Json(Value::Object(doc)))
}

fn bch_check(trials: usize, range: f64, seed: u64) -> CmdResult {
    if range <= 0.0 || !range.is_finite() {
        return Err(Error::domain(format!("range must be positive, got {range}")).into());
    }
    let basis = [("X", LieVector::X), ("Y", LieVector::Y), ("Z", LieVector::Z)];
    let mut table = Map::new();
    for (na, a) in &basis {
        for (nb, b) in &basis {
            let c = bracket(a, b);
            table.insert(format!("[{na},{nb}]"), nums(&[c.cx, c.cy, c.cz]));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        LieVector::new(
            rng.random_range(-range..=range),
            rng.random_range(-range..=range),
            rng.random_range(-range..=range),
        )
    };
    let mut max_scaled = 0.0f64;
    for _ in 0..trials {
        let (u, v) = (draw(), draw());
        let lhs = multiply(&exp_map(&u), &exp_map(&v));
        let rhs = exp_map(&(u + v + bracket(&u, &v).scale(0.5)));
        let diff = (lhs.a12 - rhs.a12)
            .abs()
            .max((lhs.a13 - rhs.a13).abs())
            .max((lhs.a23 - rhs.a23).abs());
        let size = |w: &LieVector| w.cx.abs().max(w.cy.abs()).max(w.cz.abs());
        let scale = (size(&u) + size(&v)).max(1.0);
        max_scaled = max_scaled.max(diff / (scale * scale));
    }
    Ok(Output::Json(json!({
        "convention": GROUP_LAW_CONVENTION,
        "brackets": table,
        "trials": trials,
        "max_scaled_defect": num(max_scaled),
    })))
}

fn growth(group: GroupArg, rmax: u32, budget: usize, sequential: bool) -> CmdResult {
    let exec = if sequential { Execution::Sequential } else { Execution::default() };
    let kind = GroupKind::from(group);
    let report = discrete_ball_sizes(kind, rmax, budget, exec)?;
    let mut summary = Map::new();
    summary.insert("group".into(), kind.to_string().into());
    if kind == GroupKind::Heisenberg {
        summary.insert("convention".into(), HEISENBERG_LATTICE_LAW.into());
    }
    summary.insert("rmax".into(), rmax.into());
    let fit = growth_exponent(&report);
    let fitted = fit.as_ref().ok();
    summary.insert("fitted_exponent".into(), fitted.and_then(|f| f.fitted_exponent).map_or(Value::Null, num));
    summary.insert("fit_residual".into(), fitted.and_then(|f| f.fit_residual).map_or(Value::Null, num));
    summary.insert("window".into(), fitted.and_then(|f| f.window).map_or(Value::Null, |(a, b)| json!([a, b])));
    let mut full = summary.clone();
    full.insert(
        "records".into(),
        report
            .records
            .iter()
            .map(|&(r, s)| json!({ "radius": r, "ball_size": s }))
            .collect(),
    );
    let out = Output::Table {
        csv: report.to_csv(),
        summary: Value::Object(summary),
        full: Some(Value::Object(full)),
    };
    match fit {
        Ok(_) => Ok(out),
        Err(error) => Err(Failed {
            error,
            partial: Some(Box::new(out)),
        }),
    }
}

fn ccdist(to: [f64; 3], from: Option<[f64; 3]>, tol: f64) -> CmdResult {
    let h = HeisenbergPoint::new(to[0], to[1], to[2]);
    let g = from.map_or(HeisenbergPoint::ORIGIN, |f| HeisenbergPoint::new(f[0], f[1], f[2]));
    let res = cc_distance(&g, &h, tol)?;
    let rel = group_law(&g.inverse(), &h);
    let mut csv = String::from("x,y,z\n");
    for p in &res.samples {
        csv.push_str(&format!("{:?},{:?},{:?}\n", p.x, p.y, p.z));
    }
    let summary = json!({
        "convention": GROUP_LAW_CONVENTION,
        "from": point_json(&g),
        "to": point_json(&h),
        "length": num(res.length),
        "koranyi": num(koranyi_norm(&rel)),
        "turning_angle": num(res.turning_angle),
        "iterations": res.iterations,
        "solver_residual": num(res.solver_residual),
    });
    Ok(Output::Table {
        csv,
        summary,
        full: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn pansu(map: MapArg, g: [f64; 3], h: [f64; 3], by: [f64; 3], lambda: f64, t0: f64, steps: usize) -> CmdResult {
    if t0 <= 0.0 || !t0.is_finite() {
        return Err(Error::domain(format!("t0 must be positive, got {t0}")).into());
    }
    if steps < 3 {
        return Err(Error::invalid("need at least 3 steps").into());
    }
    let g = HeisenbergPoint::new(g[0], g[1], g[2]);
    let h = HeisenbergPoint::new(h[0], h[1], h[2]);
    let a = HeisenbergPoint::new(by[0], by[1], by[2]);
    let schedule = match map {
        MapArg::Translation => pansu_schedule(|p| group_law(&a, p), &g, &h, t0, steps),
        MapArg::Dilation => pansu_schedule(|p| dilate(p, lambda), &g, &h, t0, steps),
        MapArg::Shear => pansu_schedule(
            |p: &HeisenbergPoint| HeisenbergPoint::new(p.x + p.y * p.y, p.y, p.z),
            &g,
            &h,
            t0,
            steps,
        ),
    };
    let ratios = cauchy_ratios(&schedule, 1e-14);
    let spread = schedule
        .iter()
        .map(|(_, q)| q.coord_distance(&schedule[0].1))
        .fold(0.0f64, f64::max);
    let max_ratio = ratios.iter().copied().fold(0.0f64, f64::max);
    let mut csv = String::from("t,x,y,z\n");
    for (t, q) in &schedule {
        csv.push_str(&format!("{t:?},{:?},{:?},{:?}\n", q.x, q.y, q.z));
    }
    let summary = json!({
        "convention": GROUP_LAW_CONVENTION,
        "map": format!("{map:?}").to_lowercase(),
        "quotients": schedule.iter().map(|(t, q)| json!({ "t": num(*t), "value": point_json(q) })).collect::<Vec<_>>(),
        "max_spread": num(spread),
        "cauchy_ratios": nums(&ratios),
        "max_ratio": num(max_ratio),
    });
    Ok(Output::Table {
        csv,
        summary,
        full: None,
    })
}

fn curvature_row(q: f64) -> Result<(f64, f64), Error> {
    let qp = qparam(q)?;
    let k = curvature_of_q(qp)?;
    let m = ModelMetric::from_q(qp)?;
    let h = 1e-3 / m.a.max(1.0);
    let numeric = gaussian_curvature_numeric(&m, 0.25, 0.0, h)?;
    Ok((k, numeric))
}

fn curvature(q: Option<f64>, k: Option<f64>, q_min: f64, q_max: f64, points: usize) -> CmdResult {
    if let Some(k) = k {
        let b = q_of_curvature(k)?;
        return Ok(Output::Json(json!({
            "k": num(k),
            "q_below_one": num(b.below_one),
            "q_above_one": num(b.above_one),
        })));
    }
    if let Some(q) = q {
        let (k, numeric) = curvature_row(q)?;
        return Ok(Output::Json(json!({ "q": num(q), "k": num(k), "k_numeric": num(numeric) })));
    }
    if points < 2 || q_max.partial_cmp(&q_min) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::invalid("table needs points >= 2 and q_max > q_min").into());
    }
    let mut csv = String::from("q,k,k_numeric\n");
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let q = q_min + (q_max - q_min) * i as f64 / (points - 1) as f64;
        let (k, numeric) = curvature_row(q)?;
        csv.push_str(&format!("{q:?},{k:?},{numeric:?}\n"));
        rows.push(json!({ "q": num(q), "k": num(k), "k_numeric": num(numeric) }));
    }
    Ok(Output::Table {
        csv,
        summary: json!({ "rows": rows }),
        full: None,
    })
}

fn maxent(problem: &str, tol: f64, max_iter: usize) -> CmdResult {
    let path = problem.strip_prefix('@').unwrap_or(problem);
    let prob = MaxentProblem::from_json_reader(File::open(path).map_err(Error::from)?)?;
    let sol = solve_maxent(&prob, tol, max_iter)?;
    let summary = json!({
        "q": num(prob.q.value()),
        "entropy": num(sol.entropy),
        "multipliers": nums(&sol.multipliers),
        "kkt_residual": num(sol.kkt_residual),
        "iterations": sol.iterations,
        "support": nums(sol.distribution.support().unwrap_or(&[])),
        "weights": nums(sol.distribution.weights()),
    });
    Ok(Output::Table {
        csv: sol.to_csv(),
        summary,
        full: None,
    })
}

fn dispatch(cli: &Cli) -> CmdResult {
    let seed = cli.seed;
    match &cli.command {
        Command::Qadd { x, y, q } => qadd(*x, *y, *q),
        Command::Entropy { dist, q, rescaled } => entropy(dist, *q, *rescaled),
        Command::ComposeCheck { q, dist, dist2, trials } => {
            let pair = dist.as_deref().zip(dist2.as_deref());
            compose_check(*q, pair, *trials, seed)
        }
        Command::Escort { dist, q } => escort_cmd(dist, *q),
        Command::AbeCheck { q, dist, trials } => abe_check(*q, dist.as_deref(), *trials, seed),
        Command::Embed { x } => Ok(Output::Json(json!({ "matrix": matrix_json(&embed(*x)) }))),
        Command::Mul { x, y, a, b } => mul(*x, *y, *a, *b),
        Command::BchCheck { trials, range } => bch_check(*trials, *range, seed),
        Command::Growth {
            group,
            rmax,
            budget,
            sequential,
            ..
        } => growth(*group, *rmax, *budget, *sequential),
        Command::Ccdist { to, from, tol } => ccdist(*to, *from, *tol),
        Command::Pansu {
            map,
            g,
            h,
            by,
            lambda,
            t0,
            steps,
        } => pansu(*map, *g, *h, *by, *lambda, *t0, *steps),
        Command::Curvature {
            q,
            k,
            q_min,
            q_max,
            points,
        } => curvature(*q, *k, *q_min, *q_max, *points),
        Command::Maxent {
            problem,
            tol,
            max_iter,
        } => maxent(problem, *tol, *max_iter),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ConvergenceFailure { .. } => EXIT_CONVERGENCE,
        Error::ResourceLimit { .. } => EXIT_RESOURCE,
        Error::Domain(_)
        | Error::SingularElement { .. }
        | Error::InvalidInput(_)
        | Error::Infeasible(_)
        | Error::FitRejected { .. } => EXIT_DOMAIN,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::ConvergenceFailure { .. } => "convergence-failure",
        Error::ResourceLimit { .. } => "resource-limit",
        _ => "domain-error",
    }
}

fn write_output(cli: &Cli, out: &Output) -> io::Result<()> {
    let mut stdout = io::stdout().lock();
    match out {
        Output::Json(v) => writeln!(stdout, "{v}"),
        Output::Table { csv, summary, .. } if cli.fmt.csv => {
            stdout.write_all(csv.as_bytes())?;
            let text = summary.to_string();
            if let Command::Growth {
                summary: Some(path), ..
            } = &cli.command
            {
                std::fs::write(path, format!("{text}\n"))?;
            }
            writeln!(io::stderr(), "{text}")
        }
        Output::Table { summary, full, .. } => writeln!(stdout, "{}", full.as_ref().unwrap_or(summary)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(out) => match write_output(&cli, &out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("{}", json!({ "error": "io", "message": e.to_string() }));
                ExitCode::from(EXIT_DOMAIN)
            }
        },
        Err(Failed { error, partial }) => {
            if let Some(out) = partial {
                let _ = write_output(&cli, &out);
            }
            eprintln!(
                "{}",
                json!({ "error": error_kind(&error), "message": error.to_string() })
            );
            ExitCode::from(exit_code(&error))
        }
    }
}
