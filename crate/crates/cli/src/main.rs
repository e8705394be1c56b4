//! Command-line surface: exact persistence probabilities, region
//! classification, exponents, verification, and CSV phase-diagram export.
//!
//! Machine-first output: compact JSON on stdout (`--pretty` for humans),
//! exact quantities serialized as `p/q` strings, float shadows labeled as
//! such. Exit codes: 0 success, 2 domain/usage error, 3 verification
//! failure.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::Serialize;

use persist_ma1::combinatorics::{
    comb_pn_blue, comb_pn_dual, comb_pn_green, mallows_riordan, phi,
};
use persist_ma1::duality::{dual_neg, dual_pos};
use persist_ma1::exponent::{find_exponent, Enclosure, ExponentKind, DEFAULT_TOL};
use persist_ma1::num_util::rat_to_f64;
use persist_ma1::oracle::{dp_exact_pn_capped, mc_estimate, DEFAULT_DP_CAP};
use persist_ma1::phase::{classify, trivial_value, RegionTag};
use persist_ma1::regions::{
    blue_gf, blue_recurrence_pn, green_gf, grey_pn, orange_gf, persistence_series, yellow_gf,
    Method, PersistenceTable,
};
use persist_ma1::{parse_rational, Error, Params};

/// Environment variable overriding the exact integrator's recursion cap.
const CAP_ENV: &str = "PERSIST_MA1_CAP";

#[derive(Parser)]
#[command(
    name = "persist-ma1",
    version,
    about = "Exact persistence probabilities of the MA(1) process with uniform innovations"
)]
struct Cli {
    /// Human-readable output instead of compact JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify (a, theta) into phase-diagram regions.
    Classify {
        /// Left-endpoint parameter, as `p/q` or a decimal string.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Coupling parameter, as `p/q` or a decimal string.
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
    /// Exact persistence probabilities p_0..p_n.
    Pn {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long)]
        n: usize,
        /// Computation path.
        #[arg(long, value_enum, default_value_t = Mode::Formula)]
        mode: Mode,
        /// Monte Carlo sample count (mc mode).
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Monte Carlo seed (mc mode).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generating-function coefficients to a given order.
    Gf {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long)]
        order: usize,
    },
    /// Persistence exponent: smallest denominator root and decay rate.
    Exponent {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        /// Root enclosure tolerance.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Reciprocal-series polynomial phi_ell, optionally evaluated at theta.
    Phi {
        #[arg(long)]
        ell: usize,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<String>,
    },
    /// Mallows-Riordan polynomial J_n.
    Mallows {
        #[arg(long)]
        n: usize,
    },
    /// Run every applicable computation path plus the exact integrator and
    /// report per-n discrepancies; exits 3 on any mismatch.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long)]
        n: usize,
    },
    /// Export a CSV grid (a, theta, region, p_1..p_N, lambda) for plotting.
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        a_min: String,
        #[arg(long, allow_hyphen_values = true)]
        a_max: String,
        #[arg(long, allow_hyphen_values = true)]
        theta_min: String,
        #[arg(long, allow_hyphen_values = true)]
        theta_max: String,
        /// Grid points per axis (endpoints inclusive).
        #[arg(long)]
        steps: usize,
        /// Number of probabilities per grid point.
        #[arg(long)]
        n: usize,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Formula,
    Recurrence,
    Combinatorial,
    Oracle,
    Mc,
}

impl Mode {
    fn as_str(&self) -> &'static str {
        match self {
            Mode::Formula => "formula",
            Mode::Recurrence => "recurrence",
            Mode::Combinatorial => "combinatorial",
            Mode::Oracle => "oracle",
            Mode::Mc => "mc",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            println!("{}", serde_json::json!({ "error": err.to_string() }));
            ExitCode::from(2)
        }
    }
}

fn dp_cap() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_DP_CAP)
}

fn parse_params(a: &str, theta: &str) -> Result<Params, Error> {
    Params::new(parse_rational(a)?, parse_rational(theta)?)
}

#[derive(Serialize)]
struct ParamsJson {
    a: String,
    theta: String,
}

impl ParamsJson {
    fn of(params: &Params) -> Self {
        ParamsJson {
            a: params.a().to_string(),
            theta: params.theta().to_string(),
        }
    }
}

#[derive(Serialize)]
struct ClassifyOut {
    a: String,
    theta: String,
    canonical: String,
    applicable: Vec<String>,
    dual_target: Option<ParamsJson>,
}

#[derive(Serialize)]
struct ExactEntry {
    n: usize,
    exact: String,
    float: f64,
}

#[derive(Serialize)]
struct PnOut {
    a: String,
    theta: String,
    mode: String,
    method: String,
    entries: Vec<ExactEntry>,
}

#[derive(Serialize)]
struct McEntry {
    n: usize,
    mean: f64,
    stderr: f64,
}

#[derive(Serialize)]
struct McOut {
    a: String,
    theta: String,
    mode: String,
    samples: u64,
    seed: u64,
    entries: Vec<McEntry>,
}

#[derive(Serialize)]
struct GfOut {
    a: String,
    theta: String,
    order: usize,
    method: String,
    coefficients: Vec<String>,
}

#[derive(Serialize)]
struct EnclosureJson {
    mid: f64,
    rad: f64,
}

impl EnclosureJson {
    fn of(e: &Enclosure) -> Self {
        EnclosureJson {
            mid: e.mid,
            rad: e.rad,
        }
    }
}

#[derive(Serialize)]
struct ExponentOut {
    a: String,
    theta: String,
    kind: String,
    z0: Option<EnclosureJson>,
    lambda: Option<EnclosureJson>,
    constant: Option<f64>,
    tol: f64,
    z_max: f64,
}

#[derive(Serialize)]
struct PhiOut {
    ell: usize,
    poly: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
}

#[derive(Serialize)]
struct MallowsOut {
    n: usize,
    poly: String,
}

#[derive(Serialize)]
struct VerifyRow {
    n: usize,
    values: BTreeMap<String, String>,
    max_discrepancy: String,
}

#[derive(Serialize)]
struct VerifyOut {
    a: String,
    theta: String,
    n: usize,
    oracle_included: bool,
    paths: Vec<String>,
    per_n: Vec<VerifyRow>,
    ok: bool,
}

#[derive(Serialize)]
struct ScanOut {
    out: String,
    rows: usize,
    columns: String,
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let pretty = cli.pretty;
    match cli.command {
        Command::Classify { a, theta } => {
            let params = parse_params(&a, &theta)?;
            let assignment = classify(&params);
            let out = ClassifyOut {
                a: params.a().to_string(),
                theta: params.theta().to_string(),
                canonical: assignment.canonical.as_str().to_string(),
                applicable: assignment
                    .applicable
                    .iter()
                    .map(|t| t.as_str().to_string())
                    .collect(),
                dual_target: assignment.dual_target.as_ref().map(ParamsJson::of),
            };
            emit(&out, pretty);
            Ok(ExitCode::SUCCESS)
        }
        Command::Pn {
            a,
            theta,
            n,
            mode,
            samples,
            seed,
        } => {
            let params = parse_params(&a, &theta)?;
            if mode == Mode::Mc {
                let entries = (0..=n)
                    .map(|m| {
                        let e = mc_estimate(&params, m, samples, seed);
                        McEntry {
                            n: m,
                            mean: e.mean,
                            stderr: e.stderr,
                        }
                    })
                    .collect();
                let out = McOut {
                    a: params.a().to_string(),
                    theta: params.theta().to_string(),
                    mode: "mc".into(),
                    samples,
                    seed,
                    entries,
                };
                if pretty {
                    print_mc_table(&out);
                } else {
                    emit(&out, false);
                }
                return Ok(ExitCode::SUCCESS);
            }
            let table = table_for_mode(&params, n, mode)?;
            let out = PnOut {
                a: params.a().to_string(),
                theta: params.theta().to_string(),
                mode: mode.as_str().into(),
                method: table.method.as_str().into(),
                entries: table
                    .entries
                    .iter()
                    .map(|e| ExactEntry {
                        n: e.n,
                        exact: e.exact.to_string(),
                        float: e.shadow,
                    })
                    .collect(),
            };
            if pretty {
                print_pn_table(&out);
            } else {
                emit(&out, false);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gf { a, theta, order } => {
            let params = parse_params(&a, &theta)?;
            let table = persistence_series(&params, order)?;
            let out = GfOut {
                a: params.a().to_string(),
                theta: params.theta().to_string(),
                order,
                method: table.method.as_str().into(),
                coefficients: table.entries.iter().map(|e| e.exact.to_string()).collect(),
            };
            emit(&out, pretty);
            Ok(ExitCode::SUCCESS)
        }
        Command::Exponent { a, theta, tol } => {
            let params = parse_params(&a, &theta)?;
            let result = find_exponent(&params, tol)?;
            let out = ExponentOut {
                a: params.a().to_string(),
                theta: params.theta().to_string(),
                kind: result.kind.as_str().to_string(),
                z0: result.z0.as_ref().map(EnclosureJson::of),
                lambda: result.lambda.as_ref().map(EnclosureJson::of),
                constant: result.constant,
                tol,
                z_max: result.z_max,
            };
            emit(&out, pretty);
            Ok(ExitCode::SUCCESS)
        }
        Command::Phi { ell, theta } => {
            let polynomial = phi(ell);
            let (theta_str, value) = match theta {
                Some(t) => {
                    let t = parse_rational(&t)?;
                    let v = polynomial.poly.eval(&t);
                    (Some(t.to_string()), Some(v.to_string()))
                }
                None => (None, None),
            };
            let out = PhiOut {
                ell,
                poly: polynomial.poly.render("theta"),
                theta: theta_str,
                value,
            };
            emit(&out, pretty);
            Ok(ExitCode::SUCCESS)
        }
        Command::Mallows { n } => {
            if n == 0 {
                return Err(Error::Domain("the polynomials start at n = 1".into()));
            }
            let j = mallows_riordan(n)?;
            let out = MallowsOut {
                n,
                poly: j.poly.render("theta"),
            };
            emit(&out, pretty);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { a, theta, n } => {
            let params = parse_params(&a, &theta)?;
            let out = verify(&params, n)?;
            if pretty {
                print_verify_table(&out);
            } else {
                emit(&out, false);
            }
            Ok(if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
        Command::Scan {
            a_min,
            a_max,
            theta_min,
            theta_max,
            steps,
            n,
            out,
        } => {
            let scan = run_scan(
                &parse_rational(&a_min)?,
                &parse_rational(&a_max)?,
                &parse_rational(&theta_min)?,
                &parse_rational(&theta_max)?,
                steps,
                n,
                &out,
            )?;
            emit(&scan, pretty);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn table_for_mode(params: &Params, n: usize, mode: Mode) -> Result<PersistenceTable, Error> {
    let tags = classify(params).applicable;
    match mode {
        Mode::Formula => persistence_series(params, n),
        Mode::Recurrence => {
            if !tags.contains(&RegionTag::Blue) {
                return Err(Error::Domain(format!(
                    "the recurrence path needs the blue region, got {params}"
                )));
            }
            let values = (0..=n).map(|m| blue_recurrence_pn(params, m)).collect();
            Ok(PersistenceTable::new(
                params.clone(),
                values,
                Method::Recurrence,
            ))
        }
        Mode::Combinatorial => {
            let values: Vec<BigRational> = if tags.contains(&RegionTag::Blue) {
                (0..=n).map(|m| comb_pn_blue(params, m)).collect()
            } else if tags.contains(&RegionTag::Green) {
                (0..=n)
                    .map(|m| comb_pn_green(params, m))
                    .collect::<Result<_, _>>()?
            } else {
                (0..=n)
                    .map(|m| comb_pn_dual(params, m))
                    .collect::<Result<_, _>>()?
            };
            Ok(PersistenceTable::new(
                params.clone(),
                values,
                Method::Combinatorial,
            ))
        }
        Mode::Oracle => {
            let cap = dp_cap();
            let values = (0..=n)
                .map(|m| dp_exact_pn_capped(params, m, cap))
                .collect::<Result<_, _>>()?;
            Ok(PersistenceTable::new(params.clone(), values, Method::Oracle))
        }
        Mode::Mc => unreachable!("handled by the caller"),
    }
}

/// All applicable exact paths for one parameter pair, as (name, per-n values).
fn verify(params: &Params, n: usize) -> Result<VerifyOut, Error> {
    let assignment = classify(params);
    let tags = &assignment.applicable;
    let mut paths: Vec<(String, Vec<BigRational>)> = Vec::new();

    let dispatcher = persistence_series(params, n)?;
    paths.push((
        format!("dispatcher[{}]", dispatcher.method),
        dispatcher.entries.iter().map(|e| e.exact.clone()).collect(),
    ));

    if tags
        .iter()
        .any(|t| matches!(t, RegionTag::WhiteOne | RegionTag::ZeroTail | RegionTag::ThetaOne))
    {
        paths.push((
            "trivial".into(),
            (0..=n).map(|m| trivial_value(params, m).unwrap()).collect(),
        ));
    }
    if tags.contains(&RegionTag::Blue) {
        paths.push(("blue_gf".into(), blue_gf(params, n)?.coeffs().to_vec()));
        paths.push((
            "blue_recurrence".into(),
            (0..=n).map(|m| blue_recurrence_pn(params, m)).collect(),
        ));
        paths.push((
            "blue_combinatorial".into(),
            (0..=n).map(|m| comb_pn_blue(params, m)).collect(),
        ));
    }
    if tags.contains(&RegionTag::Green) {
        paths.push(("green_gf".into(), green_gf(params, n)?.coeffs().to_vec()));
        paths.push((
            "green_combinatorial".into(),
            (0..=n)
                .map(|m| comb_pn_green(params, m))
                .collect::<Result<_, _>>()?,
        ));
    }
    if tags.contains(&RegionTag::Yellow) && params.theta().is_negative() {
        paths.push(("yellow_gf".into(), yellow_gf(params, n)?.coeffs().to_vec()));
    }
    if tags.contains(&RegionTag::Orange) {
        paths.push(("orange_gf".into(), orange_gf(params, n)?.coeffs().to_vec()));
    }
    if tags.contains(&RegionTag::GreyPiecewise) {
        paths.push((
            "grey_closed".into(),
            (0..=n).map(|m| grey_pn(params, m)).collect(),
        ));
    }
    let dual_comb_applies = {
        let theta = params.theta();
        let a = params.a();
        (*theta >= BigRational::one() && !a.is_negative())
            || (*theta < -BigRational::one()
                && *a >= -theta.recip()
                && *a <= -theta.clone())
    };
    if dual_comb_applies {
        paths.push((
            "dual_combinatorial".into(),
            (0..=n)
                .map(|m| comb_pn_dual(params, m))
                .collect::<Result<_, _>>()?,
        ));
    }
    if params.a().is_positive() && params.theta().is_positive() {
        let image = dual_pos(params)?;
        let t = persistence_series(&image, n)?;
        paths.push((
            "dual_pos".into(),
            t.entries.iter().map(|e| e.exact.clone()).collect(),
        ));
    }
    if params.a().is_positive() && params.theta().is_negative() {
        let image = dual_neg(params)?;
        let t = persistence_series(&image, n)?;
        paths.push((
            "dual_neg".into(),
            t.entries.iter().map(|e| e.exact.clone()).collect(),
        ));
    }
    let cap = dp_cap();
    let oracle_included = n <= cap;
    if oracle_included {
        paths.push((
            "oracle".into(),
            (0..=n)
                .map(|m| dp_exact_pn_capped(params, m, cap))
                .collect::<Result<_, _>>()?,
        ));
    }

    let mut per_n = Vec::with_capacity(n + 1);
    let mut ok = true;
    for m in 0..=n {
        let mut values = BTreeMap::new();
        let mut min: Option<BigRational> = None;
        let mut max: Option<BigRational> = None;
        for (name, vals) in &paths {
            let v = &vals[m];
            values.insert(name.clone(), v.to_string());
            min = Some(min.map_or_else(|| v.clone(), |m: BigRational| m.min(v.clone())));
            max = Some(max.map_or_else(|| v.clone(), |m: BigRational| m.max(v.clone())));
        }
        let discrepancy = max.unwrap() - min.unwrap();
        if !discrepancy.is_zero() {
            ok = false;
        }
        per_n.push(VerifyRow {
            n: m,
            values,
            max_discrepancy: discrepancy.to_string(),
        });
    }

    Ok(VerifyOut {
        a: params.a().to_string(),
        theta: params.theta().to_string(),
        n,
        oracle_included,
        paths: paths.into_iter().map(|(name, _)| name).collect(),
        per_n,
        ok,
    })
}

fn run_scan(
    a_min: &BigRational,
    a_max: &BigRational,
    theta_min: &BigRational,
    theta_max: &BigRational,
    steps: usize,
    n: usize,
    out: &PathBuf,
) -> Result<ScanOut, Error> {
    if steps == 0 {
        return Err(Error::Domain("steps must be at least 1".into()));
    }
    if a_min > a_max || theta_min > theta_max {
        return Err(Error::Domain("empty scan range".into()));
    }
    if *a_min <= BigRational::from_integer((-1).into()) {
        return Err(Error::InvalidLeftEndpoint(format!(
            "a-min = {a_min} but the left endpoint requires a > -1"
        )));
    }
    let grid = |lo: &BigRational, hi: &BigRational| -> Vec<BigRational> {
        if steps == 1 {
            return vec![lo.clone()];
        }
        let step = (hi - lo) / BigRational::from_integer((steps as i64 - 1).into());
        (0..steps)
            .map(|i| lo + &step * BigRational::from_integer((i as i64).into()))
            .collect()
    };
    let a_grid = grid(a_min, a_max);
    let theta_grid = grid(theta_min, theta_max);

    let mut rows = Vec::with_capacity(a_grid.len() * theta_grid.len());
    for a in &a_grid {
        for theta in &theta_grid {
            let params = Params::new(a.clone(), theta.clone())?;
            let assignment = classify(&params);
            let table = persistence_series(&params, n)?;
            let lambda = match find_exponent(&params, 1e-9)? {
                r if r.kind == ExponentKind::NotFound => String::new(),
                r => r
                    .lambda
                    .map(|l| format!("{}", l.mid))
                    .unwrap_or_default(),
            };
            let mut row = format!(
                "{},{},{}",
                rat_to_f64(a),
                rat_to_f64(theta),
                assignment.canonical.as_str()
            );
            for m in 1..=n {
                row.push_str(&format!(",{}", table.entries[m].shadow));
            }
            row.push(',');
            row.push_str(&lambda);
            rows.push(row);
        }
    }
    // rows come out of the nested loops already sorted by (a, theta)
    let mut header = String::from("a,theta,region");
    for m in 1..=n {
        header.push_str(&format!(",p{m}"));
    }
    header.push_str(",lambda");

    let file = std::fs::File::create(out)
        .map_err(|e| Error::Domain(format!("cannot write {}: {e}", out.display())))?;
    let mut writer = std::io::BufWriter::new(file);
    writeln!(writer, "{header}").map_err(|e| Error::Domain(e.to_string()))?;
    for row in &rows {
        writeln!(writer, "{row}").map_err(|e| Error::Domain(e.to_string()))?;
    }
    writer.flush().map_err(|e| Error::Domain(e.to_string()))?;

    Ok(ScanOut {
        out: out.display().to_string(),
        rows: rows.len(),
        columns: header,
    })
}

fn emit<T: Serialize>(value: &T, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("serializable output");
    println!("{text}");
}

fn print_pn_table(out: &PnOut) {
    println!(
        "p_n at a = {}, theta = {}  (mode {}, path {})",
        out.a, out.theta, out.mode, out.method
    );
    let width = out
        .entries
        .iter()
        .map(|e| e.exact.len())
        .max()
        .unwrap_or(1)
        .max(5);
    println!("{:>4}  {:width$}  float", "n", "exact");
    for e in &out.entries {
        println!("{:>4}  {:width$}  {}", e.n, e.exact, e.float);
    }
}

fn print_mc_table(out: &McOut) {
    println!(
        "Monte Carlo p_n at a = {}, theta = {}  ({} samples, seed {})",
        out.a, out.theta, out.samples, out.seed
    );
    println!("{:>4}  {:>12}  {:>12}", "n", "mean", "stderr");
    for e in &out.entries {
        println!("{:>4}  {:>12.8}  {:>12.8}", e.n, e.mean, e.stderr);
    }
}

fn print_verify_table(out: &VerifyOut) {
    println!(
        "verification at a = {}, theta = {}  (paths: {})",
        out.a,
        out.theta,
        out.paths.join(", ")
    );
    for row in &out.per_n {
        println!("  n = {:<3} max discrepancy = {}", row.n, row.max_discrepancy);
    }
    println!("result: {}", if out.ok { "all paths agree" } else { "MISMATCH" });
}
