//! Command-line front end: JSON certificates and human-readable reports
//! for the chart/gluing certification, the torus-weight verification, orbit
//! witnesses, and batch sweeps.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use gsv::atlas::{self, PairScope};
use gsv::repthy;
use gsv::symalg::Rational;
use gsv::variety::{self, GSVSpec, PointJson};

const EXIT_FAILED: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Symbolic pair certification is refused above this size rather than
/// silently degraded to sampling.
const MAX_CHARTS: usize = 15;
const MAX_DIMENSION: usize = 24;

/// The weight report sweeps the atlas once (a chart solve per minor, no
/// Jacobians). Its cost scales with the chart count, the r! size of the
/// generic minor, and the complement width, so the budget caps that
/// product; the cap sits an order of magnitude above the r <= s <= 6
/// domain the acceptance suite certifies.
const MAX_WEIGHT_COST: usize = 20_000;

fn weights_cost(spec: &GSVSpec) -> usize {
    let factorial = (2..=spec.r()).try_fold(1usize, |acc, k| acc.checked_mul(k));
    let Some(factorial) = factorial else {
        return usize::MAX;
    };
    spec.chart_count()
        .saturating_mul(factorial)
        .saturating_mul(spec.s() - spec.r() + 1)
}

const DEFAULT_TIME_BUDGET_SECS: u64 = 300;

#[derive(Parser)]
#[command(
    name = "gsv",
    version,
    about = "Exact certificates for the generalised affine Stiefel variety GSV(r,s)",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify canonical-divisor triviality: unit gluing factors for chart
    /// pairs plus the Cartier cocycle on all chart triples
    Canonical(SpecArgs),
    /// Torus weight decomposition of the tangent space and the zero-sum
    /// certificate for the canonical weight
    Weights(SpecArgs),
    /// Check a point file for membership and produce an orbit witness
    Orbit(OrbitArgs),
    /// Run canonical and weight checks for every spec with r <= s <= bound
    Sweep(SweepArgs),
    /// Print the chart atlas with solved expressions
    Atlas(SpecArgs),
}

#[derive(Args)]
struct SpecArgs {
    /// Number of rows of X (r >= 1)
    #[arg(long)]
    r: usize,
    /// Number of columns of X (s >= r)
    #[arg(long)]
    s: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct OrbitArgs {
    /// Path to a point JSON file: {"r":…,"s":…,"X":[["p/q",…]],"Y":[[…]]}
    point_file: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Upper bound for s; every spec with 1 <= r <= s <= bound is checked
    #[arg(long, default_value_t = 3)]
    s: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// Which chart pairs to certify symbolically
    #[arg(long, value_enum, default_value_t = PairScopeArg::All)]
    pairs: PairScopeArg,
    /// Seed for all randomized checks (reported for reproducibility)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random samples per randomized check
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Emit the JSON report on stdout instead of human-readable text
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this file
    #[arg(long, value_name = "FILE")]
    out: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PairScopeArg {
    Adjacent,
    All,
}

impl From<PairScopeArg> for PairScope {
    fn from(value: PairScopeArg) -> Self {
        match value {
            PairScopeArg::Adjacent => PairScope::Adjacent,
            PairScopeArg::All => PairScope::All,
        }
    }
}

/// The uniform report wrapper. The JSON form deliberately excludes elapsed
/// time so that identical config and seed produce byte-identical output;
/// timing is shown in the human-readable rendering only.
#[derive(Serialize)]
struct Report {
    #[serde(rename = "toolVersion")]
    tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    spec: Option<GSVSpec>,
    command: String,
    verdict: String,
    payload: Value,
    #[serde(rename = "paperErrata")]
    paper_errata: Vec<Erratum>,
}

#[derive(Serialize, Clone)]
struct Erratum {
    id: String,
    detail: String,
}

fn erratum_dimension() -> Erratum {
    Erratum {
        id: "dimension-vs-codimension".into(),
        detail: "the quantity rs + r(s-r) stated as the codimension is the dimension of the \
                 variety; the codimension in the ambient 2rs-dimensional affine space is r^2"
            .into(),
    }
}

fn erratum_weight_count() -> Erratum {
    Erratum {
        id: "tangent-weight-count".into(),
        detail: "the stated count rs + s(s-r) of tangent weights should read rs + r(s-r) = \
                 2rs - r^2; the certified multiset has exactly 2rs - r^2 members"
            .into(),
    }
}

struct Budget {
    deadline: Instant,
}

impl Budget {
    fn from_env() -> Result<Budget, String> {
        let secs = match std::env::var("GSV_TIME_BUDGET") {
            Ok(text) => text
                .parse::<u64>()
                .map_err(|_| format!("GSV_TIME_BUDGET must be a positive integer, got {text:?}"))?,
            Err(_) => DEFAULT_TIME_BUDGET_SECS,
        };
        if secs == 0 {
            return Err("GSV_TIME_BUDGET must be positive".into());
        }
        Ok(Budget { deadline: Instant::now() + Duration::from_secs(secs) })
    }

    fn check(&self) -> Result<(), Exceeded> {
        if Instant::now() > self.deadline { Err(Exceeded) } else { Ok(()) }
    }
}

struct Exceeded;

fn within_size_budget(spec: &GSVSpec) -> bool {
    spec.chart_count() <= MAX_CHARTS && spec.dimension() <= MAX_DIMENSION
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let budget = match Budget::from_env() {
        Ok(b) => b,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let started = Instant::now();
    let outcome = match &cli.command {
        Command::Canonical(args) => cmd_canonical(args, &budget),
        Command::Weights(args) => cmd_weights(args, &budget),
        Command::Orbit(args) => cmd_orbit(args, &budget),
        Command::Sweep(args) => cmd_sweep(args, &budget),
        Command::Atlas(args) => cmd_atlas(args, &budget),
    };
    let (report, human, common) = match outcome {
        Ok(v) => v,
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    emit(&report, &human, common, started)
}

struct UsageError(String);

type CmdResult = Result<(Report, String, OutputOptions), UsageError>;

struct OutputOptions {
    json: bool,
    out: Option<String>,
}

impl From<&CommonArgs> for OutputOptions {
    fn from(c: &CommonArgs) -> Self {
        OutputOptions { json: c.json, out: c.out.clone() }
    }
}

fn emit(report: &Report, human: &str, opts: OutputOptions, started: Instant) -> ExitCode {
    let rendered = serde_json::to_string_pretty(report).expect("report serializes");
    if let Some(path) = &opts.out {
        if let Err(e) = std::fs::File::create(path).and_then(|mut f| {
            f.write_all(rendered.as_bytes())?;
            f.write_all(b"\n")
        }) {
            eprintln!("error: cannot write {path}: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    // tolerate a closed stdout (e.g. piping into `head`)
    let mut stdout = std::io::stdout();
    let write_result = if opts.json {
        writeln!(stdout, "{rendered}")
    } else {
        write!(stdout, "{human}").and_then(|_| {
            writeln!(stdout, "verdict: {} ({} ms)", report.verdict, started.elapsed().as_millis())
        })
    };
    drop(write_result);
    match report.verdict.as_str() {
        "OK" => ExitCode::SUCCESS,
        "BUDGET_EXCEEDED" => ExitCode::from(EXIT_BUDGET),
        _ => ExitCode::from(EXIT_FAILED),
    }
}

fn parse_spec(r: usize, s: usize) -> Result<GSVSpec, UsageError> {
    GSVSpec::new(r, s).map_err(|_| UsageError(format!("invalid spec: need 1 <= r <= s, got r={r}, s={s}")))
}

fn budget_report(command: &str, spec: Option<GSVSpec>, detail: String) -> (Report, String) {
    let report = Report {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        spec,
        command: command.into(),
        verdict: "BUDGET_EXCEEDED".into(),
        payload: json!({ "reason": detail }),
        paper_errata: vec![],
    };
    let human = format!("{command}: budget exceeded\n  {}\n", report.payload["reason"].as_str().unwrap());
    (report, human)
}

fn failed_report(command: &str, spec: Option<GSVSpec>, detail: String) -> (Report, String) {
    let report = Report {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        spec,
        command: command.into(),
        verdict: "FAILED".into(),
        payload: json!({ "error": detail }),
        paper_errata: vec![],
    };
    let human = format!("{command}: FAILED\n  {}\n", report.payload["error"].as_str().unwrap());
    (report, human)
}

// ---------------------------------------------------------------------------
// canonical

fn cmd_canonical(args: &SpecArgs, budget: &Budget) -> CmdResult {
    let spec = parse_spec(args.r, args.s)?;
    let opts = OutputOptions::from(&args.common);
    if !within_size_budget(&spec) {
        let (report, human) = budget_report(
            "canonical",
            Some(spec),
            format!(
                "symbolic certification is limited to C(s,r) <= {MAX_CHARTS} charts and \
                 dimension <= {MAX_DIMENSION}; GSV({},{}) has {} charts and dimension {}",
                spec.r(),
                spec.s(),
                spec.chart_count(),
                spec.dimension()
            ),
        );
        return Ok((report, human, opts));
    }
    match run_certification(&spec, args.common.pairs.into(), budget) {
        Ok(cert) => {
            let payload = cert.payload();
            let verdict = if payload.verdict == "CANONICAL_TRIVIAL" { "OK" } else { "FAILED" };
            let mut human = format!(
                "canonical certification of GSV({},{}) over {} chart pair(s)\n",
                spec.r(),
                spec.s(),
                cert.pairs.len()
            );
            for pair in &cert.pairs {
                human.push_str(&format!(
                    "  {} ~ {}: gluing {}, det formula {}\n",
                    pair.from,
                    pair.to,
                    pair.gluing_factor,
                    if pair.det_formula_matched { "matched" } else { "MISMATCH" }
                ));
            }
            human.push_str(&format!(
                "  cocycle triples checked: {} (sign cocycle {}, unit cocycle {})\n",
                cert.cocycle_triples_checked,
                if cert.sign_cocycle_ok { "ok" } else { "BROKEN" },
                if cert.cartier_cocycle_ok { "ok" } else { "BROKEN" },
            ));
            human.push_str(&format!("  certificate: {}\n", payload.verdict));
            let report = Report {
                tool_version: env!("CARGO_PKG_VERSION").into(),
                spec: Some(spec),
                command: "canonical".into(),
                verdict: verdict.into(),
                payload: serde_json::to_value(&payload).expect("payload serializes"),
                paper_errata: vec![],
            };
            Ok((report, human, opts))
        }
        Err(CertError::Budget) => {
            let (report, human) =
                budget_report("canonical", Some(spec), "time budget exhausted".into());
            Ok((report, human, opts))
        }
        Err(CertError::Atlas(e)) => {
            let (report, human) = failed_report("canonical", Some(spec), e.to_string());
            Ok((report, human, opts))
        }
    }
}

enum CertError {
    Budget,
    Atlas(atlas::AtlasError),
}

/// Pair-by-pair certification with time-budget checks between units of work.
fn run_certification(
    spec: &GSVSpec,
    scope: PairScope,
    budget: &Budget,
) -> Result<atlas::CanonicalCertification, CertError> {
    let mut pairs = Vec::new();
    for (i, j) in atlas::chart_pairs(spec, scope) {
        budget.check().map_err(|_| CertError::Budget)?;
        pairs.push(atlas::glue_pair(spec, &i, &j).map_err(CertError::Atlas)?);
    }
    let triples = atlas::chart_triples(spec);
    let mut cartier_ok = true;
    for (a, b, c) in &triples {
        budget.check().map_err(|_| CertError::Budget)?;
        if !atlas::cartier_cocycle(spec, a, b, c).map_err(CertError::Atlas)? {
            cartier_ok = false;
        }
    }
    Ok(atlas::CanonicalCertification::from_parts(spec, pairs, triples.len(), cartier_ok))
}

// ---------------------------------------------------------------------------
// weights

fn cmd_weights(args: &SpecArgs, budget: &Budget) -> CmdResult {
    let spec = parse_spec(args.r, args.s)?;
    let opts = OutputOptions::from(&args.common);
    if budget.check().is_err() {
        let (report, human) = budget_report("weights", Some(spec), "time budget exhausted".into());
        return Ok((report, human, opts));
    }
    if weights_cost(&spec) > MAX_WEIGHT_COST {
        let (report, human) = budget_report(
            "weights",
            Some(spec),
            format!(
                "the per-chart weight check is limited to C(s,r) * r! * (s-r+1) <= \
                 {MAX_WEIGHT_COST}; GSV({},{}) has {} charts of minor size {}",
                spec.r(),
                spec.s(),
                spec.chart_count(),
                spec.r()
            ),
        );
        return Ok((report, human, opts));
    }
    let report_payload = repthy::weight_report(&spec);
    let verdict = if report_payload.verdict == "THEOREM1_OK" { "OK" } else { "FAILED" };
    let mut human = format!(
        "tangent weight decomposition of GSV({},{}) under the restricted torus\n",
        spec.r(),
        spec.s()
    );
    for (character, multiplicity) in repthy::tangent_weights(&spec).iter() {
        human.push_str(&format!("  weight {character} x{multiplicity}\n"));
    }
    human.push_str(&format!(
        "  count: {} (= 2rs - r^2), canonical weight: {:?}, pairing: {}\n",
        report_payload.tangent_weight_count,
        report_payload.canonical_weight,
        report_payload.pairing
    ));
    let report = Report {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        spec: Some(spec),
        command: "weights".into(),
        verdict: verdict.into(),
        payload: serde_json::to_value(&report_payload).expect("payload serializes"),
        paper_errata: vec![erratum_weight_count()],
    };
    Ok((report, human, opts))
}

// ---------------------------------------------------------------------------
// orbit

fn cmd_orbit(args: &OrbitArgs, budget: &Budget) -> CmdResult {
    let opts = OutputOptions::from(&args.common);
    let text = std::fs::read_to_string(&args.point_file)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", args.point_file)))?;
    let parsed: PointJson = serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("{} is not valid point JSON: {e}", args.point_file)))?;
    let (spec, point) = parsed
        .decode()
        .map_err(|e| UsageError(format!("{}: {e}", args.point_file)))?;
    if budget.check().is_err() {
        let (report, human) = budget_report("orbit", Some(spec), "time budget exhausted".into());
        return Ok((report, human, opts));
    }

    // Membership first; report the violated equation entry on failure.
    if !variety::contains(&spec, &point).map_err(|e| UsageError(e.to_string()))? {
        let product = &point.x * &point.y;
        let mut violation = None;
        'search: for i in 0..spec.r() {
            for k in 0..spec.r() {
                let expected = if i == k { Rational::from_integer(1.into()) } else { Rational::from_integer(0.into()) };
                let residual = product.at(i, k) - &expected;
                if residual != Rational::from_integer(0.into()) {
                    violation = Some((i + 1, k + 1, residual.to_string()));
                    break 'search;
                }
            }
        }
        let (row, col, residual) = violation.expect("off-variety point has a violated entry");
        let report = Report {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            spec: Some(spec),
            command: "orbit".into(),
            verdict: "FAILED".into(),
            payload: json!({
                "membership": false,
                "violation": { "row": row, "col": col, "residual": residual },
            }),
            paper_errata: vec![],
        };
        let human = format!(
            "orbit: point is not on GSV({},{}): (X*Y - I)[{row},{col}] = {residual}\n",
            spec.r(),
            spec.s()
        );
        return Ok((report, human, opts));
    }

    let rank = variety::jacobian_rank_at(&spec, &point).expect("membership checked");
    let witness = match repthy::orbit_witness(&spec, &point) {
        Ok(w) => w,
        Err(e) => {
            let (report, human) = failed_report("orbit", Some(spec), e.to_string());
            return Ok((report, human, opts));
        }
    };
    let round_trip = repthy::act(&witness, &repthy::base_point(&spec)).expect("shapes match") == point;
    let render = |m: &gsv::symmat::QMatrix| -> Vec<Vec<String>> {
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.at(i, j).to_string()).collect())
            .collect()
    };
    let verdict = if round_trip && rank == spec.r() * spec.r() { "OK" } else { "FAILED" };
    let report = Report {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        spec: Some(spec),
        command: "orbit".into(),
        verdict: verdict.into(),
        payload: json!({
            "membership": true,
            "jacobianRank": rank,
            "expectedRank": spec.r() * spec.r(),
            "dimension": spec.dimension(),
            "witness": { "A": render(witness.a()), "B": render(witness.b()) },
            "roundTripVerified": round_trip,
        }),
        paper_errata: vec![],
    };
    let mut human = format!(
        "orbit witness for a point of GSV({},{})\n  membership: exact\n  jacobian rank: {rank} (expected {}), dimension {}\n",
        spec.r(),
        spec.s(),
        spec.r() * spec.r(),
        spec.dimension()
    );
    human.push_str("  witness B:\n");
    for row in render(witness.b()) {
        human.push_str(&format!("    [{}]\n", row.join(", ")));
    }
    human.push_str(&format!("  round trip act(g, v) = p: {}\n", if round_trip { "verified" } else { "FAILED" }));
    Ok((report, human, opts))
}

// ---------------------------------------------------------------------------
// sweep

fn cmd_sweep(args: &SweepArgs, budget: &Budget) -> CmdResult {
    let opts = OutputOptions::from(&args.common);
    let bound = args.s;
    if bound < 1 {
        return Err(UsageError("sweep bound must be at least 1".into()));
    }
    // (1, s) alone exceeds the size budget beyond s = MAX_CHARTS, so large
    // bounds can be refused before materializing the spec list.
    if bound > MAX_CHARTS {
        let (report, human) = budget_report(
            "sweep",
            None,
            format!("a sweep bound above {MAX_CHARTS} always exceeds the size budget; lower the bound"),
        );
        return Ok((report, human, opts));
    }
    let mut specs = Vec::new();
    for s in 1..=bound {
        for r in 1..=s {
            specs.push(GSVSpec::new(r, s).expect("r <= s"));
        }
    }
    if let Some(too_big) = specs.iter().find(|spec| !within_size_budget(spec)) {
        let (report, human) = budget_report(
            "sweep",
            None,
            format!(
                "GSV({},{}) exceeds the size budget (C(s,r) <= {MAX_CHARTS}, dimension <= {MAX_DIMENSION}); lower the bound",
                too_big.r(),
                too_big.s()
            ),
        );
        return Ok((report, human, opts));
    }

    let mut human = format!("sweep over all specs with 1 <= r <= s <= {bound}\n");
    let mut entries = Vec::new();
    let mut all_ok = true;
    for spec in &specs {
        if budget.check().is_err() {
            let (report, human) = budget_report("sweep", None, "time budget exhausted".into());
            return Ok((report, human, opts));
        }
        let cert = match run_certification(spec, args.common.pairs.into(), budget) {
            Ok(cert) => cert,
            Err(CertError::Budget) => {
                let (report, human) = budget_report("sweep", None, "time budget exhausted".into());
                return Ok((report, human, opts));
            }
            Err(CertError::Atlas(e)) => {
                // first failure short-circuits with context
                let (report, human) = failed_report(
                    "sweep",
                    Some(*spec),
                    format!("certification of GSV({},{}) failed: {e}", spec.r(), spec.s()),
                );
                return Ok((report, human, opts));
            }
        };
        let weights = repthy::weight_report(spec);
        let homogeneity_ok = homogeneity_sample(spec, args.common.seed, args.common.samples);
        let cert_payload = cert.payload();
        let spec_ok = cert_payload.verdict == "CANONICAL_TRIVIAL"
            && weights.verdict == "THEOREM1_OK"
            && homogeneity_ok;
        human.push_str(&format!(
            "  GSV({},{}): canonical {} ({} pairs), weights {} (count {}), homogeneity {}\n",
            spec.r(),
            spec.s(),
            cert_payload.verdict,
            cert_payload.pairs.len(),
            weights.verdict,
            weights.tangent_weight_count,
            if homogeneity_ok { "ok" } else { "FAILED" },
        ));
        if !spec_ok {
            all_ok = false;
        }
        entries.push(json!({
            "spec": spec,
            "canonical": serde_json::to_value(&cert_payload).expect("payload serializes"),
            "weights": serde_json::to_value(&weights).expect("payload serializes"),
            "homogeneity": { "samples": args.common.samples, "ok": homogeneity_ok },
        }));
        if !spec_ok {
            break; // short-circuit with the failing entry recorded
        }
    }
    let report = Report {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        spec: None,
        command: "sweep".into(),
        verdict: if all_ok { "OK" } else { "FAILED" }.into(),
        payload: json!({
            "bound": bound,
            "seed": args.common.seed,
            "samples": args.common.samples,
            "pairScope": match args.common.pairs {
                PairScopeArg::Adjacent => "adjacent",
                PairScopeArg::All => "all",
            },
            "specs": entries,
        }),
        paper_errata: vec![erratum_dimension(), erratum_weight_count()],
    };
    Ok((report, human, opts))
}

/// Seeded orbit round-trips: every random on-variety point must be
/// reproduced exactly by its witness.
fn homogeneity_sample(spec: &GSVSpec, seed: u64, samples: u64) -> bool {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let p = repthy::random_on_variety_point(&mut rng, spec);
        let Ok(witness) = repthy::orbit_witness(spec, &p) else {
            return false;
        };
        let Ok(image) = repthy::act(&witness, &repthy::base_point(spec)) else {
            return false;
        };
        if image != p {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// atlas

fn cmd_atlas(args: &SpecArgs, budget: &Budget) -> CmdResult {
    let spec = parse_spec(args.r, args.s)?;
    let opts = OutputOptions::from(&args.common);
    if !within_size_budget(&spec) {
        let (report, human) = budget_report(
            "atlas",
            Some(spec),
            format!(
                "atlas construction is limited to C(s,r) <= {MAX_CHARTS} charts and dimension <= {MAX_DIMENSION}"
            ),
        );
        return Ok((report, human, opts));
    }
    if budget.check().is_err() {
        let (report, human) = budget_report("atlas", Some(spec), "time budget exhausted".into());
        return Ok((report, human, opts));
    }
    let charts = variety::chart_atlas(&spec);
    let mut human = format!(
        "atlas of GSV({},{}): {} charts, {} free coordinates each\n",
        spec.r(),
        spec.s(),
        charts.len(),
        spec.dimension()
    );
    let mut chart_entries = Vec::new();
    let mut all_solve = true;
    for chart in &charts {
        let solves = chart.solves_defining_equations(&spec);
        all_solve &= solves;
        human.push_str(&format!("  chart {}:\n", chart.index_set()));
        let mut solved_json = BTreeMap::new();
        for (variable, expression) in chart.solved() {
            human.push_str(&format!("    {variable} = {expression}\n"));
            solved_json.insert(variable.to_string(), expression.to_string());
        }
        if !solves {
            human.push_str("    SUBSTITUTION CHECK FAILED\n");
        }
        chart_entries.push(json!({
            "I": chart.index_set().indices(),
            "freeCoordCount": chart.free_coords().len(),
            "solved": solved_json,
            "solvesEquations": solves,
        }));
    }
    let report = Report {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        spec: Some(spec),
        command: "atlas".into(),
        verdict: if all_solve { "OK" } else { "FAILED" }.into(),
        payload: json!({
            "spec": spec,
            "charts": chart_entries,
        }),
        paper_errata: vec![],
    };
    Ok((report, human, opts))
}
