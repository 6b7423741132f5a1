//! `psdec` — command-line surface for the principal-series decomposition
//! toolkit.
//!
//! Subcommands:
//!
//! * `cone` — enumerate cone points or equivalence classes with their
//!   invariants, region, and class size;
//! * `decompose` — family, constituent count, dimension, and class data for
//!   one cone point at a given residue cardinality `q`;
//! * `zeta` — per-term comparison of the exhaustively-counted zeta
//!   coefficients against the printed closed forms (the documented
//!   `η₂`-family disagreements are reported as `expected-deviation`, never
//!   hidden and never adopted);
//! * `verify` — the verification suites: `group` (character theory of
//!   `B^δ_m`), `gl3` (matrix oracle inside `GL₃(Z/p^ℓ)`, `ℓ = c₃`), or
//!   `all`.
//!
//! Output formats: `json` (default; one top-level object with an
//! `entries`/`reports` array), `csv`, or an aligned `table`. All numerics
//! are exact integers; in `--symbolic` mode polynomials appear as
//! coefficient lists `[c₀, c₁, …]`.
//!
//! Exit codes: `0` success (expected deviations included), `1` usage error,
//! `3` verification failure. The env var `PSDEC_BOUND` overrides the
//! enumeration size bound (default 10⁶ elements).

use clap::{Parser, Subcommand, ValueEnum};
use psdec_core::closed_forms as cf;
use psdec_core::cone::{self, ConePoint};
use psdec_core::report::{Report, Status};
use psdec_core::ring::{Backend, RingCtx};
use psdec_core::twisted::TwistedCtx;
use psdec_core::{gl3, spectral};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::io::Write;

const EXIT_USAGE: i32 = 1;
const EXIT_VERIFICATION: i32 = 3;

#[derive(Parser)]
#[command(
    name = "psdec",
    version,
    about = "Exact decomposition data and verification suites for the degenerate principal series of GL3 over finite local rings",
    disable_help_subcommand = true
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Zmod,
    Polymod,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Zmod => Backend::Zmod,
            BackendArg::Polymod => Backend::PolyMod,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate cone points (or ∼-classes) up to a level bound.
    Cone {
        /// Largest level to list (≤ 30).
        #[arg(long, default_value_t = 2)]
        max_level: u32,
        /// List equivalence classes instead of individual points.
        #[arg(long)]
        classes: bool,
    },
    /// Decomposition data of V_c for a single cone point.
    Decompose {
        /// Cone point as c1,c2,c3 (requires c1,c2 ≤ c3 ≤ c1+c2).
        #[arg(long, value_parser = parse_cone_point)]
        c: ConePoint,
        /// Residue cardinality (≥ 2).
        #[arg(long)]
        q: u64,
    },
    /// Zeta-series coefficients: exhaustive catalogue vs printed closed forms.
    Zeta {
        /// Residue cardinality (≥ 2); required unless --symbolic.
        #[arg(long)]
        q: Option<u64>,
        /// Largest dimension exponent n to tabulate (≤ 40).
        #[arg(long, default_value_t = 10)]
        max_n: u32,
        /// Print coefficient lists instead of evaluating at q.
        #[arg(long)]
        symbolic: bool,
        /// Merge catalogue terms by integer dimension at q.
        #[arg(long)]
        aggregate: bool,
    },
    /// Run verification suites; exit 3 if any check fails.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// Character-theoretic suite for the twisted group B^δ_m.
    Group {
        /// Residue characteristic (prime).
        #[arg(long)]
        p: u64,
        /// Ring length (O = O/π^m).
        #[arg(long)]
        m: u32,
        /// Twist exponent e in δ = π^e.
        #[arg(long, default_value_t = 0)]
        delta_exp: u32,
        /// Ring backend.
        #[arg(long, value_enum, default_value_t = BackendArg::Zmod)]
        backend: BackendArg,
    },
    /// Matrix oracle inside GL₃(Z/p^ℓ) with ℓ = c₃.
    Gl3 {
        /// Residue characteristic (prime).
        #[arg(long)]
        p: u64,
        /// Cone point as c1,c2,c3; requires 1 ≤ m ≤ μ(c).
        #[arg(long, value_parser = parse_cone_point)]
        c: ConePoint,
        /// Reduction length of the target twisted group.
        #[arg(long)]
        m: u32,
        /// Root seed for the sampled checks (deterministic).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Both suites at canonical small configurations, plus order counting.
    All {
        /// Root seed for the sampled checks (deterministic).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_cone_point(s: &str) -> Result<ConePoint, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three coordinates c1,c2,c3, got {s:?}"));
    }
    let mut v = [0u32; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| format!("bad coordinate {part:?}: {e}"))?;
    }
    ConePoint::new(v[0], v[1], v[2]).map_err(|e| e.to_string())
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help / --version are successes, everything else is usage.
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.cmd {
        Cmd::Cone { max_level, classes } => cmd_cone(*max_level, *classes),
        Cmd::Decompose { c, q } => cmd_decompose(c, *q),
        Cmd::Zeta { q, max_n, symbolic, aggregate } => cmd_zeta(*q, *max_n, *symbolic, *aggregate),
        Cmd::Verify { suite } => cmd_verify(suite),
    };
    match outcome {
        Ok((value, code)) => match render(&value, cli.format) {
            Ok(()) => code,
            // a closed pipe (e.g. `psdec … | head`) is not an error
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => code,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

type Outcome = Result<(Value, i32), String>;

fn err<T>(e: impl ToString) -> Result<T, String> {
    Err(e.to_string())
}

// ---- cone -------------------------------------------------------------

fn cmd_cone(max_level: u32, classes: bool) -> Outcome {
    if max_level > cf::MAX_CATALOGUE_LEVEL {
        return err(format!(
            "--max-level {max_level} exceeds the catalogue bound {}",
            cf::MAX_CATALOGUE_LEVEL
        ));
    }
    let mut entries = Vec::new();
    if classes {
        for level in 0..=max_level {
            for class in cone::classes_at_level(level) {
                let inv = class.invariants;
                entries.push(json!({
                    "rep": class.rep.to_string(),
                    "mu": inv.mu,
                    "kappa": inv.kappa,
                    "level": inv.level,
                    "region": class.rep.region(),
                    "class_size": class.members.len(),
                }));
            }
        }
    } else {
        for c in cone::enumerate_up_to(max_level) {
            let inv = c.invariants();
            entries.push(json!({
                "c": c.to_string(),
                "mu": inv.mu,
                "kappa": inv.kappa,
                "level": inv.level,
                "region": c.region(),
                "class_size": cone::class_size(inv.mu, inv.kappa, inv.level),
            }));
        }
    }
    Ok((
        json!({
            "command": "cone",
            "params": { "max_level": max_level, "classes": classes },
            "entries": entries,
        }),
        0,
    ))
}

// ---- decompose --------------------------------------------------------

fn cmd_decompose(c: &ConePoint, q: u64) -> Outcome {
    if q < 2 {
        return err("--q must be at least 2");
    }
    let d = cf::decompose_point(c);
    let count = cf::eval_nonneg(&d.constituent_count, q).map_err(|e| e.to_string())?;
    let dim = cf::eval_nonneg(&d.constituent_dim, q).map_err(|e| e.to_string())?;
    let mut entry = json!({
        "c": d.point.to_string(),
        "q": q,
        "family": d.family,
        "mu": d.invariants.mu,
        "kappa": d.invariants.kappa,
        "level": d.invariants.level,
        "constituent_count": u128_value(count),
        "constituent_dim": u128_value(dim),
        "class_size": d.class_size,
        "canonical": d.canonical.to_string(),
    });
    if count == 0 {
        entry["note"] = Value::String("V_c = 0".into());
    }
    Ok((
        json!({
            "command": "decompose",
            "params": { "c": c.to_string(), "q": q },
            "entries": [entry],
        }),
        0,
    ))
}

// ---- zeta -------------------------------------------------------------

fn cmd_zeta(q: Option<u64>, max_n: u32, symbolic: bool, aggregate: bool) -> Outcome {
    if max_n > cf::MAX_ZETA_N {
        return err(format!(
            "--max-n {max_n} exceeds the series bound {}",
            cf::MAX_ZETA_N
        ));
    }
    if let Some(q) = q {
        if q < 2 {
            return err("--q must be at least 2");
        }
    }
    if symbolic && aggregate {
        return err("--aggregate needs numeric dimensions; drop --symbolic");
    }

    if aggregate {
        let q = q.ok_or("--aggregate requires --q")?;
        let merged = cf::dimension_aggregate(max_n, q).map_err(|e| e.to_string())?;
        let entries: Vec<Value> = merged
            .into_iter()
            .map(|(dim, count)| json!({ "dimension": u128_value(dim), "count": u128_value(count) }))
            .collect();
        return Ok((
            json!({
                "command": "zeta",
                "params": { "q": q, "max_n": max_n, "aggregate": true },
                "entries": entries,
            }),
            0,
        ));
    }

    let terms = cf::zeta_terms(max_n).map_err(|e| e.to_string())?;
    let mut entries = Vec::new();
    let mut exit = 0;
    for t in &terms {
        let dim_poly = cf::term_dimension(t.family, t.n).map_err(|e| e.to_string())?;
        let mut entry = Map::new();
        entry.insert("family".into(), json!(t.family));
        entry.insert("n".into(), json!(t.n));
        if symbolic {
            entry.insert("dimension".into(), json!(dim_poly.coeffs));
            entry.insert("catalogue".into(), json!(t.catalogue_count.coeffs));
            entry.insert("printed".into(), json!(t.printed_count.coeffs));
            entry.insert("agrees".into(), json!(t.agrees));
            push_status(&mut entry, t.family, t.agrees, &mut exit);
        } else {
            let q = q.ok_or("zeta needs --q (or --symbolic)")?;
            let dim = cf::eval_nonneg(&dim_poly, q).map_err(|e| e.to_string())?;
            let cat = cf::eval_nonneg(&t.catalogue_count, q).map_err(|e| e.to_string())?;
            let printed = cf::eval_nonneg(&t.printed_count, q).map_err(|e| e.to_string())?;
            let agrees = cat == printed;
            entry.insert("dimension".into(), u128_value(dim));
            entry.insert("catalogue".into(), u128_value(cat));
            entry.insert("printed".into(), u128_value(printed));
            entry.insert("agrees".into(), json!(agrees));
            push_status(&mut entry, t.family, agrees, &mut exit);
        }
        entries.push(Value::Object(entry));
    }
    let mut params = Map::new();
    if let Some(q) = q {
        params.insert("q".into(), json!(q));
    }
    params.insert("max_n".into(), json!(max_n));
    params.insert("symbolic".into(), json!(symbolic));
    Ok((
        json!({
            "command": "zeta",
            "params": params,
            "entries": entries,
        }),
        exit,
    ))
}

/// Status policy for a zeta row: agreement is a pass; an `η₂` disagreement
/// is the documented expected deviation; a disagreement anywhere else would
/// be a genuine failure and flips the exit code.
fn push_status(entry: &mut Map<String, Value>, family: cf::ZetaFamily, agrees: bool, exit: &mut i32) {
    let status = if agrees {
        Status::Pass
    } else if family == cf::ZetaFamily::Eta2 {
        Status::ExpectedDeviation
    } else {
        *exit = EXIT_VERIFICATION;
        Status::Fail
    };
    entry.insert("status".into(), json!(status));
}

// ---- verify -----------------------------------------------------------

fn cmd_verify(suite: &Suite) -> Outcome {
    let (name, params, reports) = match suite {
        Suite::Group { p, m, delta_exp, backend } => {
            let reports = group_suite((*backend).into(), *p, *m, *delta_exp)?;
            (
                "group",
                json!({ "p": p, "m": m, "delta_exp": delta_exp,
                        "backend": Backend::from(*backend).to_string() }),
                reports,
            )
        }
        Suite::Gl3 { p, c, m, seed } => {
            let reports = gl3::run_suite(*p, *c, *m, *seed).map_err(|e| e.to_string())?;
            (
                "gl3",
                json!({ "p": p, "c": c.to_string(), "m": m, "seed": seed }),
                reports,
            )
        }
        Suite::All { seed } => {
            let mut reports = Vec::new();
            for (p, m, e) in [(2, 2, 0), (3, 1, 0)] {
                reports.extend(group_suite(Backend::Zmod, p, m, e)?);
            }
            let c = ConePoint::new(2, 2, 3).expect("valid cone point");
            reports.extend(gl3::run_suite(2, c, 1, *seed).map_err(|e| e.to_string())?);
            for (p, ell) in [(2, 1), (2, 2), (3, 1)] {
                reports.push(gl3::order_report(p, ell).map_err(|e| e.to_string())?);
            }
            ("all", json!({ "seed": seed }), reports)
        }
    };
    let all_passed = psdec_core::report::all_passed(&reports);
    let value = json!({
        "command": "verify",
        "suite": name,
        "params": params,
        "reports": reports,
        "all_passed": all_passed,
    });
    Ok((value, if all_passed { 0 } else { EXIT_VERIFICATION }))
}

fn group_suite(backend: Backend, p: u64, m: u32, delta_exp: u32) -> Result<Vec<Report>, String> {
    let ring = RingCtx::new(backend, p, m).map_err(|e| e.to_string())?;
    let tw = TwistedCtx::new(ring, delta_exp);
    spectral::run_suite(&tw).map_err(|e| e.to_string())
}

// ---- rendering ----------------------------------------------------------

fn u128_value(v: u128) -> Value {
    match u64::try_from(v) {
        Ok(small) => json!(small),
        // beyond u64 (not reachable under the documented bounds, but the
        // schema stays numeric-as-string rather than lossy)
        Err(_) => Value::String(v.to_string()),
    }
}

fn render(value: &Value, format: Format) -> std::io::Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(value).expect("serializable"))
        }
        Format::Csv | Format::Table => {
            // Table output is for reading: per-check count columns (present
            // on verify reports, dozens wide) are elided there — failures
            // still name the offending keys in `detail`, and the full data
            // is in json/csv.
            let rows = tabulate(value, format == Format::Table);
            if format == Format::Csv {
                print_csv(&mut out, &rows)
            } else {
                print_table(&mut out, &rows)
            }
        }
    }
}

/// Flatten the `entries`/`reports` array into rows of dotted-key scalar
/// columns; keys are sorted, so the column order is deterministic.
fn tabulate(value: &Value, compact: bool) -> (Vec<String>, Vec<Vec<String>>) {
    let list = value
        .get("entries")
        .or_else(|| value.get("reports"))
        .and_then(Value::as_array)
        .cloned()
        .unwrap_or_default();
    let flats: Vec<BTreeMap<String, String>> = list.iter().map(flatten).collect();
    let mut columns: Vec<String> = flats
        .iter()
        .flat_map(|m| m.keys().cloned())
        .filter(|k| !(compact && k.starts_with("counts.")))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    // keep identifying columns first when present
    for lead in ["status", "check", "n", "family", "rep", "c", "dimension"] {
        if let Some(pos) = columns.iter().position(|c| c == lead) {
            let col = columns.remove(pos);
            columns.insert(0, col);
        }
    }
    let rows = flats
        .iter()
        .map(|m| columns.iter().map(|c| m.get(c).cloned().unwrap_or_default()).collect())
        .collect();
    (columns, rows)
}

fn flatten(value: &Value) -> BTreeMap<String, String> {
    fn go(prefix: &str, v: &Value, out: &mut BTreeMap<String, String>) {
        match v {
            Value::Object(map) => {
                for (k, vv) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    go(&key, vv, out);
                }
            }
            Value::Array(_) => {
                out.insert(prefix.to_string(), v.to_string());
            }
            Value::String(s) => {
                out.insert(prefix.to_string(), s.clone());
            }
            other => {
                out.insert(prefix.to_string(), other.to_string());
            }
        }
    }
    let mut out = BTreeMap::new();
    go("", value, &mut out);
    out
}

fn print_csv(out: &mut impl Write, rows: &(Vec<String>, Vec<Vec<String>>)) -> std::io::Result<()> {
    let escape = |s: &str| {
        if s.contains([',', '"', '\n']) {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s.to_string()
        }
    };
    let (header, body) = rows;
    writeln!(out, "{}", header.iter().map(|h| escape(h)).collect::<Vec<_>>().join(","))?;
    for row in body {
        writeln!(out, "{}", row.iter().map(|c| escape(c)).collect::<Vec<_>>().join(","))?;
    }
    Ok(())
}

fn print_table(out: &mut impl Write, rows: &(Vec<String>, Vec<Vec<String>>)) -> std::io::Result<()> {
    let (header, body) = rows;
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for row in body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(out, "{}", line(header))?;
    writeln!(out, "{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "))?;
    for row in body {
        writeln!(out, "{}", line(row))?;
    }
    Ok(())
}
