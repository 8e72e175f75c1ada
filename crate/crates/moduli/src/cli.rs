//! Command-line front door. Subcommands cover the motive calculator, the
//! counting oracles, model classification, the global-field counting
//! functions, and the `repro` acceptance sweep.
//!
//! Conventions: flags only (no config files); JSON output carries a
//! top-level `"schema": 1` and never includes wall-clock timings, so
//! identical configurations produce byte-identical JSON; CSV uses RFC 4180
//! quoting; potentially large counts are serialized as decimal strings.
//! Exit status is 0 on success or match, 1 on a formula-versus-oracle
//! mismatch, and 2 on usage, validation, or budget errors.

use std::io::{self, Write};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::json;

use crate::acceptance;
use crate::arith::{z_fqt, z_q_experiment, HeightQuery, ZQ_DISCLAIMER};
use crate::census::{
    coprime_pair_report, direct_coarse_census, stratum_census, CensusReport, DEFAULT_BUDGET,
};
use crate::gf::{is_prime, FieldSpec};
use crate::motive::{moduli_class_closed, MotiveClass};
use crate::polyfq::{Poly, DEFAULT_FACTOR_SEED};
use crate::weier::{Place, WeierstrassFibration};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "moduli",
    version,
    about = "Exact point counts and enumeration censuses for moduli of semistable elliptic fibrations over P^1",
    after_help = "The environment variable MODULI_BUDGET overrides the default enumeration \
                  budget (100000000 steps) wherever --budget is not given."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArg {
    /// Field size q = p^e (a prime power).
    #[arg(long)]
    pub q: u64,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// The moduli class L^{10n+1} - L^{10n-1} and, with --q, its
    /// specialization to the number of F_q-points.
    Motive {
        /// Discriminant degree parameter n >= 1.
        #[arg(long)]
        n: u32,
        /// Evaluate the class at L = q (counts points for char != 2, 3).
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Count monic coprime pairs of degrees exactly (d1, d2) over F_q:
    /// the formula value, and with --oracle also the exhaustive count.
    PolyCount {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
        /// Run the exhaustive enumeration oracle and compare.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Enumeration budget in pairs (default from MODULI_BUDGET or 10^8).
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Stratified census of |L_{1,12n}(F_q)| by exhaustive coprime-pair
    /// counting, stratum by stratum, against the closed form.
    CensusStrata {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Direct coarse-space census: enumerate all models, deduplicate
    /// canonical encodings (slow path; q = 5, n = 1 visits 5^12 models).
    CensusDirect {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        n: u32,
        /// Waive the enumeration budget for the known-large run.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Kodaira fiber configuration of the model y^2 = x^3 + a4 x + a6,
    /// printed as JSON.
    Classify {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        n: u32,
        /// Coefficients of a4, constant term first, e.g. "1,0,2" for 2t^2+1.
        #[arg(long)]
        a4: String,
        /// Coefficients of a6, constant term first.
        #[arg(long)]
        a6: String,
        /// Seed for the equal-degree splitting stream of the factorization.
        #[arg(long, default_value_t = DEFAULT_FACTOR_SEED)]
        seed: u64,
    },
    /// Exact Z_{F_q(t)}(B): fibrations counted by discriminant height,
    /// with the B^{5/6} upper bound.
    Zfqt {
        #[command(flatten)]
        field: FieldArg,
        /// Height bound B >= 1 (decimal, arbitrary precision).
        #[arg(long = "B")]
        bound: String,
        #[arg(long)]
        json: bool,
    },
    /// Empirical count of semistable rational curves by bounded ht6
    /// (away-from-6 proxy): CSV grid plus a JSON summary with the fitted
    /// slope. Exploration only; asserts nothing about the growth rate.
    Zq {
        /// Largest height bound of the grid.
        #[arg(long = "Bmax")]
        b_max: u64,
        /// Grid spacing; only "log10" is supported.
        #[arg(long, default_value = "log10")]
        grid: String,
        /// Grid points per decade.
        #[arg(long, default_value_t = 4)]
        per_decade: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run the acceptance sweep and emit a single JSON verdict; exit 1 if
    /// any criterion fails. --force includes the slow direct census.
    Repro {
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also run the direct coarse census (minutes of runtime).
        #[arg(long)]
        force: bool,
    },
}

/// Parse and dispatch, returning the process exit code. Usage errors from
/// clap itself exit(2) before this runs.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    let stdout = io::stdout();
    run(&cli, &mut stdout.lock())
}

/// Execute a parsed configuration, writing the report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> i32 {
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, String> {
    match &cli.command {
        Command::Motive { n, q, json } => cmd_motive(*n, *q, *json, out),
        Command::PolyCount { field, d1, d2, oracle, jobs, budget, json, csv } => {
            cmd_poly_count(field.q, *d1, *d2, *oracle, *jobs, *budget, format(*json, *csv), out)
        }
        Command::CensusStrata { field, n, jobs, budget, json, csv } => {
            cmd_census_strata(field.q, *n, *jobs, *budget, format(*json, *csv), out)
        }
        Command::CensusDirect { field, n, force, budget, json, csv } => {
            cmd_census_direct(field.q, *n, *force, *budget, format(*json, *csv), out)
        }
        Command::Classify { field, n, a4, a6, seed } => {
            cmd_classify(field.q, *n, a4, a6, *seed, out)
        }
        Command::Zfqt { field, bound, json } => cmd_zfqt(field.q, bound, *json, out),
        Command::Zq { b_max, grid, per_decade, jobs, budget } => {
            cmd_zq(*b_max, grid, *per_decade, *jobs, *budget, out)
        }
        Command::Repro { jobs, force } => cmd_repro(*jobs, *force, out),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

fn format(json: bool, csv: bool) -> Format {
    if json {
        Format::Json
    } else if csv {
        Format::Csv
    } else {
        Format::Text
    }
}

/// Factor q as p^e and certify p prime; the error spells the grammar.
fn parse_prime_power(q: u64) -> Result<(u64, u32), String> {
    if q < 2 {
        return Err(format!("--q {q}: a prime power of at least 2 is required"));
    }
    let mut p = q;
    for d in 2..=q {
        if d * d > q {
            break;
        }
        if q % d == 0 {
            p = d;
            break;
        }
    }
    let mut e = 0u32;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(format!("--q {q} is not a prime power"));
    }
    debug_assert!(is_prime(p));
    Ok((p, e))
}

fn field_from_q(q: u64) -> Result<FieldSpec, String> {
    let (p, e) = parse_prime_power(q)?;
    FieldSpec::new(p, e).map_err(|e| e.to_string())
}

/// Fields used by the moduli counts must avoid characteristic 2 and 3.
fn moduli_field_from_q(q: u64) -> Result<FieldSpec, String> {
    let (p, e) = parse_prime_power(q)?;
    if p == 2 || p == 3 {
        return Err(format!(
            "--q {q}: moduli counts need characteristic different from 2 and 3"
        ));
    }
    FieldSpec::new(p, e).map_err(|e| e.to_string())
}

fn warn_char_2_3(q: u64) {
    if let Ok((p, _)) = parse_prime_power(q) {
        if p == 2 || p == 3 {
            eprintln!(
                "warning: q = {q} has characteristic {p}; the point-count \
                 interpretation needs char != 2, 3 and does not apply, the \
                 polynomial evaluation itself is still exact"
            );
        }
    }
}

fn resolve_budget(flag: Option<u64>) -> Result<u64, String> {
    if let Some(b) = flag {
        if b == 0 {
            return Err("--budget must be positive".to_string());
        }
        return Ok(b);
    }
    match std::env::var("MODULI_BUDGET") {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&b| b > 0)
            .ok_or_else(|| format!("MODULI_BUDGET={s:?} is not a positive integer")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// Coefficient-list grammar: "1,0,2" means 2t^2 + 1 (constant term first),
/// each entry the canonical integer encoding of a field element.
fn parse_poly(field: &FieldSpec, s: &str, flag: &str) -> Result<Poly, String> {
    let worked = "expected a comma-separated coefficient list, constant term \
                  first, e.g. --a4 1,0,2 for 2t^2 + 1";
    let mut reps = Vec::new();
    for part in s.split(',') {
        let rep: u64 = part
            .trim()
            .parse()
            .map_err(|_| format!("{flag} {s:?}: {worked}"))?;
        if rep >= field.order() {
            return Err(format!(
                "{flag} {s:?}: coefficient {rep} is not an element encoding of {field}; {worked}"
            ));
        }
        reps.push(rep);
    }
    Ok(Poly::from_reps(field, &reps))
}

fn poly_to_coeff_string(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    p.coeffs()
        .iter()
        .map(|c| c.rep().to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// RFC 4180: quote a field when it contains a comma, quote, or newline.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row(fields: &[String]) -> String {
    fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",")
}

fn class_terms_json(c: &MotiveClass) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = c
        .terms()
        .map(|(exp, coeff)| {
            let coeff = i64::try_from(coeff).expect("class coefficients are word-sized");
            json!([exp, coeff])
        })
        .collect();
    json!(terms)
}

fn write_line(out: &mut dyn Write, line: &str) -> Result<(), String> {
    writeln!(out, "{line}").map_err(|e| format!("write failed: {e}"))
}

fn cmd_motive(n: u32, q: Option<u64>, json: bool, out: &mut dyn Write) -> Result<i32, String> {
    if n == 0 {
        return Err("--n must be at least 1".to_string());
    }
    let class = moduli_class_closed(n);
    if let Some(q) = q {
        if q < 2 {
            return Err("--q must be at least 2".to_string());
        }
        warn_char_2_3(q);
    }
    if json {
        let mut value = json!({
            "schema": 1,
            "n": n,
            "class": class_terms_json(&class),
        });
        if let Some(q) = q {
            value["q"] = json!(q);
            value["count"] = json!(class.point_count(q).to_string());
        }
        write_line(out, &value.to_string())?;
    } else if let Some(q) = q {
        write_line(out, &format!("{class} ; #_{q} = {}", class.point_count(q)))?;
    } else {
        write_line(out, &class.to_string())?;
    }
    Ok(EXIT_OK)
}

fn census_json(report: &CensusReport, kind: &str, extra: serde_json::Value) -> serde_json::Value {
    let mut value = json!({
        "schema": 1,
        "kind": kind,
        "q": report.q,
        "observed": report.observed.to_string(),
        "formula": report.formula.to_string(),
        "match": report.matched,
    });
    if let serde_json::Value::Object(extra) = extra {
        for (k, v) in extra {
            value[k] = v;
        }
    }
    if !report.strata.is_empty() {
        let rows: Vec<serde_json::Value> = report
            .strata
            .iter()
            .map(|r| {
                json!({
                    "d1": r.d1,
                    "d2": r.d2,
                    "pairs": r.pairs.to_string(),
                    "observed": r.observed.to_string(),
                    "formula": r.formula.to_string(),
                    "match": r.matched,
                })
            })
            .collect();
        value["strata"] = json!(rows);
    }
    value
}

fn census_csv(report: &CensusReport, params: &str, out: &mut dyn Write) -> Result<(), String> {
    write_line(out, "q,params,observed,formula,match,seconds")?;
    write_line(
        out,
        &csv_row(&[
            report.q.to_string(),
            params.to_string(),
            report.observed.to_string(),
            report.formula.to_string(),
            report.matched.to_string(),
            format!("{:.3}", report.elapsed.as_secs_f64()),
        ]),
    )
}

fn exit_for(matched: bool) -> i32 {
    if matched {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_poly_count(
    q: u64,
    d1: usize,
    d2: usize,
    oracle: bool,
    jobs: usize,
    budget: Option<u64>,
    fmt: Format,
    out: &mut dyn Write,
) -> Result<i32, String> {
    let field = field_from_q(q)?;
    let budget = resolve_budget(budget)?;
    let formula = crate::motive::poly_class(d1, d2)
        .point_count(q)
        .to_biguint()
        .expect("nonnegative");
    if !oracle {
        match fmt {
            Format::Json => write_line(
                out,
                &json!({"schema": 1, "q": q, "d1": d1, "d2": d2, "formula": formula.to_string()})
                    .to_string(),
            )?,
            Format::Csv => {
                write_line(out, "q,params,observed,formula,match,seconds")?;
                write_line(
                    out,
                    &csv_row(&[
                        q.to_string(),
                        format!("{d1}:{d2}"),
                        String::new(),
                        formula.to_string(),
                        String::new(),
                        String::new(),
                    ]),
                )?;
            }
            Format::Text => write_line(out, &format!("formula {formula}"))?,
        }
        return Ok(EXIT_OK);
    }
    let report = coprime_pair_report(&field, d1, d2, budget, jobs).map_err(|e| e.to_string())?;
    match fmt {
        Format::Json => {
            let value = census_json(&report, "poly-count", json!({"d1": d1, "d2": d2}));
            write_line(out, &value.to_string())?;
        }
        Format::Csv => census_csv(&report, &format!("{d1}:{d2}"), out)?,
        Format::Text => write_line(
            out,
            &format!(
                "observed {}, formula {}, {}",
                report.observed,
                report.formula,
                if report.matched { "match" } else { "MISMATCH" }
            ),
        )?,
    }
    Ok(exit_for(report.matched))
}

fn cmd_census_strata(
    q: u64,
    n: u32,
    jobs: usize,
    budget: Option<u64>,
    fmt: Format,
    out: &mut dyn Write,
) -> Result<i32, String> {
    if n == 0 {
        return Err("--n must be at least 1".to_string());
    }
    let field = moduli_field_from_q(q)?;
    let budget = resolve_budget(budget)?;
    let report = stratum_census(&field, n, budget, jobs).map_err(|e| e.to_string())?;
    match fmt {
        Format::Json => {
            let value = census_json(&report, "census-strata", json!({"n": n}));
            write_line(out, &value.to_string())?;
        }
        Format::Csv => census_csv(&report, &n.to_string(), out)?,
        Format::Text => {
            for row in &report.strata {
                write_line(
                    out,
                    &format!(
                        "stratum ({},{}): pairs {}, observed {}, formula {}, {}",
                        row.d1,
                        row.d2,
                        row.pairs,
                        row.observed,
                        row.formula,
                        if row.matched { "match" } else { "MISMATCH" }
                    ),
                )?;
            }
            write_line(
                out,
                &format!(
                    "total: observed {}, formula {}, {} ({} strata, {:.2}s)",
                    report.observed,
                    report.formula,
                    if report.matched { "match" } else { "MISMATCH" },
                    report.strata.len(),
                    report.elapsed.as_secs_f64()
                ),
            )?;
        }
    }
    Ok(exit_for(report.matched))
}

fn cmd_census_direct(
    q: u64,
    n: u32,
    force: bool,
    budget: Option<u64>,
    fmt: Format,
    out: &mut dyn Write,
) -> Result<i32, String> {
    if n == 0 {
        return Err("--n must be at least 1".to_string());
    }
    let field = moduli_field_from_q(q)?;
    let budget = if force { u64::MAX } else { resolve_budget(budget)? };
    let report = direct_coarse_census(&field, n, budget)
        .map_err(|e| format!("{e} (pass --force to waive the budget)"))?;
    match fmt {
        Format::Json => {
            let value = census_json(&report, "census-direct", json!({"n": n}));
            write_line(out, &value.to_string())?;
        }
        Format::Csv => census_csv(&report, &n.to_string(), out)?,
        Format::Text => write_line(
            out,
            &format!(
                "observed {} classes, formula {}, {} ({:.1}s)",
                report.observed,
                report.formula,
                if report.matched { "match" } else { "MISMATCH" },
                report.elapsed.as_secs_f64()
            ),
        )?,
    }
    Ok(exit_for(report.matched))
}

fn cmd_classify(
    q: u64,
    n: u32,
    a4: &str,
    a6: &str,
    seed: u64,
    out: &mut dyn Write,
) -> Result<i32, String> {
    if n == 0 {
        return Err("--n must be at least 1".to_string());
    }
    let field = moduli_field_from_q(q)?;
    let a4 = parse_poly(&field, a4, "--a4")?;
    let a6 = parse_poly(&field, a6, "--a6")?;
    let model = WeierstrassFibration::new(n, a4, a6).map_err(|e| e.to_string())?;
    match model.validate() {
        crate::weier::Validity::Valid => {}
        crate::weier::Validity::Invalid(witness) => {
            return Err(format!(
                "model is not a valid fibration: a4 and a6 vanish together ({witness})"
            ));
        }
    }
    let config = model.fiber_configuration_seeded(seed).map_err(|e| e.to_string())?;
    let places: Vec<serde_json::Value> = config
        .places
        .iter()
        .map(|fp| {
            let poly = match &fp.place {
                Place::Finite(p) => poly_to_coeff_string(p),
                Place::Infinity => "inf".to_string(),
            };
            json!({"poly": poly, "deg": fp.residue_degree, "k": fp.k})
        })
        .collect();
    let value = json!({
        "schema": 1,
        "q": q,
        "n": n,
        "places": places,
        "sum_check": 12 * n,
    });
    write_line(out, &value.to_string())?;
    Ok(EXIT_OK)
}

fn cmd_zfqt(q: u64, bound: &str, json: bool, out: &mut dyn Write) -> Result<i32, String> {
    parse_prime_power(q)?;
    warn_char_2_3(q);
    let bound: BigUint = bound
        .trim()
        .parse()
        .map_err(|_| format!("--B {bound:?}: expected a positive decimal integer"))?;
    if bound == BigUint::from(0u32) {
        return Err("--B must be at least 1".to_string());
    }
    let table = z_fqt(&HeightQuery { q, bound });
    if json {
        let rows: Vec<serde_json::Value> = table
            .rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "term": r.term.to_string(),
                    "cumulative": r.cumulative.to_string(),
                })
            })
            .collect();
        let value = json!({
            "schema": 1,
            "q": q,
            "B": table.bound.to_string(),
            "rows": rows,
            "total": table.total.to_string(),
            "bound": table.bound_value.to_string(),
            "equality": table.equality_case,
        });
        write_line(out, &value.to_string())?;
    } else {
        for r in &table.rows {
            write_line(
                out,
                &format!("n={}: term {}, cumulative {}", r.n, r.term, r.cumulative),
            )?;
        }
        write_line(out, &format!("Z_(F_{q}(t))({}) = {}", table.bound, table.total))?;
        write_line(
            out,
            &format!(
                "bound {} ({})",
                table.bound_value,
                if table.equality_case {
                    "exact equality: B is a 12th-step power of q"
                } else {
                    "strict upper bound, rounded up"
                }
            ),
        )?;
    }
    Ok(EXIT_OK)
}

fn cmd_zq(
    b_max: u64,
    grid: &str,
    per_decade: u32,
    jobs: usize,
    budget: Option<u64>,
    out: &mut dyn Write,
) -> Result<i32, String> {
    if grid != "log10" {
        return Err(format!("--grid {grid:?}: only \"log10\" is supported"));
    }
    if b_max == 0 {
        return Err("--Bmax must be at least 1".to_string());
    }
    if per_decade == 0 {
        return Err("--per-decade must be at least 1".to_string());
    }
    let budget = resolve_budget(budget)?;
    eprintln!(
        "note: away-from-6 proxy (ht6 = prime-to-6 part of |Delta|, 2-3 part capped); {ZQ_DISCLAIMER}"
    );
    let exp = z_q_experiment(b_max, per_decade, budget, jobs).map_err(|e| e.to_string())?;
    write_line(out, "B,count")?;
    for g in &exp.grid {
        write_line(out, &csv_row(&[g.bound.to_string(), g.count.to_string()]))?;
    }
    let summary = json!({
        "schema": 1,
        "slope": exp.slope,
        "window": [exp.slope_window.0, exp.slope_window.1],
        "curves": exp.curves.len(),
        "boundary_audit": exp.boundary_audit_pass,
        "sixpart_cap": exp.sixpart_cap,
        "disclaimer": ZQ_DISCLAIMER,
    });
    write_line(out, &summary.to_string())?;
    Ok(EXIT_OK)
}

fn cmd_repro(jobs: usize, force: bool, out: &mut dyn Write) -> Result<i32, String> {
    let mut outcomes = acceptance::run_default_sweep(jobs);
    for o in &outcomes {
        eprintln!("{}", o.summary_line());
    }
    if force {
        let o = acceptance::criterion_9_direct_census();
        eprintln!("{}", o.summary_line());
        outcomes.push(o);
    }
    let all_pass = outcomes.iter().all(|o| o.pass);
    let criteria: Vec<serde_json::Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "id": o.id,
                "name": o.name,
                "pass": o.pass,
                "detail": o.detail,
            })
        })
        .collect();
    let value = json!({
        "schema": 1,
        "criteria": criteria,
        "all_pass": all_pass,
    });
    write_line(out, &value.to_string())?;
    Ok(if all_pass { EXIT_OK } else { EXIT_MISMATCH })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_to_string(args: &[&str]) -> (i32, String) {
        let cli = Cli::try_parse_from(args).expect("arguments parse");
        let mut buf = Vec::new();
        let code = run(&cli, &mut buf);
        (code, String::from_utf8(buf).expect("utf-8 output"))
    }

    #[test]
    fn prime_power_parsing() {
        assert_eq!(parse_prime_power(5).unwrap(), (5, 1));
        assert_eq!(parse_prime_power(25).unwrap(), (5, 2));
        assert_eq!(parse_prime_power(49).unwrap(), (7, 2));
        assert_eq!(parse_prime_power(2).unwrap(), (2, 1));
        assert!(parse_prime_power(6).is_err());
        assert!(parse_prime_power(1).is_err());
        assert!(parse_prime_power(0).is_err());
    }

    #[test]
    fn motive_text_matches_interface() {
        let (code, out) = run_to_string(&["moduli", "motive", "--n", "1", "--q", "5"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "L^11 - L^9 ; #_5 = 46875000\n");
    }

    #[test]
    fn motive_json_shape() {
        let (code, out) = run_to_string(&["moduli", "motive", "--n", "1", "--q", "5", "--json"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["class"], serde_json::json!([[11, 1], [9, -1]]));
        assert_eq!(v["count"], "46875000");
    }

    #[test]
    fn poly_count_oracle_matches() {
        let (code, out) = run_to_string(&[
            "moduli", "poly-count", "--q", "5", "--d1", "2", "--d2", "2", "--oracle",
        ]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "observed 500, formula 500, match\n");
    }

    #[test]
    fn classify_worked_example() {
        let (code, out) = run_to_string(&[
            "moduli", "classify", "--q", "5", "--n", "1", "--a4", "1", "--a6",
            "0,0,0,0,0,0,1",
        ]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["sum_check"], 12);
        let places = v["places"].as_array().unwrap();
        let total: u64 = places
            .iter()
            .map(|p| p["deg"].as_u64().unwrap() * p["k"].as_u64().unwrap())
            .sum();
        assert_eq!(total, 12);
        assert!(places.iter().all(|p| p["k"] == 1));
    }

    #[test]
    fn classify_rejects_bad_polynomials() {
        let cli = Cli::try_parse_from([
            "moduli", "classify", "--q", "5", "--n", "1", "--a4", "1,x", "--a6", "1",
        ])
        .unwrap();
        let mut buf = Vec::new();
        assert_eq!(run(&cli, &mut buf), EXIT_USAGE);
        let cli = Cli::try_parse_from([
            "moduli", "classify", "--q", "5", "--n", "1", "--a4", "7", "--a6", "1",
        ])
        .unwrap();
        assert_eq!(run(&cli, &mut buf), EXIT_USAGE);
    }

    #[test]
    fn classify_rejects_invalid_models_and_bad_char() {
        let cli = Cli::try_parse_from([
            "moduli", "classify", "--q", "5", "--n", "1", "--a4", "0", "--a6", "1",
        ])
        .unwrap();
        let mut buf = Vec::new();
        assert_eq!(run(&cli, &mut buf), EXIT_USAGE);
        let cli = Cli::try_parse_from([
            "moduli", "classify", "--q", "9", "--n", "1", "--a4", "1", "--a6", "1",
        ])
        .unwrap();
        assert_eq!(run(&cli, &mut buf), EXIT_USAGE);
    }

    #[test]
    fn zfqt_equality_case() {
        let (code, out) =
            run_to_string(&["moduli", "zfqt", "--q", "5", "--B", "244140625", "--json"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["total"], "46875000");
        assert_eq!(v["bound"], "46875000");
        assert_eq!(v["equality"], true);
    }

    #[test]
    fn budget_errors_state_the_requirement() {
        let cli = Cli::try_parse_from([
            "moduli", "census-direct", "--q", "5", "--n", "1",
        ])
        .unwrap();
        let mut buf = Vec::new();
        // Without --force the 5^12-model run exceeds the default budget.
        assert_eq!(run(&cli, &mut buf), EXIT_USAGE);
    }

    #[test]
    fn json_output_is_byte_identical_across_runs() {
        for args in [
            vec!["moduli", "motive", "--n", "3", "--q", "7", "--json"],
            vec!["moduli", "poly-count", "--q", "5", "--d1", "2", "--d2", "1", "--oracle", "--json"],
            vec!["moduli", "zfqt", "--q", "7", "--B", "191581231380566414401", "--json"],
            vec!["moduli", "classify", "--q", "5", "--n", "1", "--a4", "1", "--a6", "0,0,0,0,0,0,1"],
            vec!["moduli", "zq", "--Bmax", "500", "--grid", "log10"],
        ] {
            let (c1, o1) = run_to_string(&args);
            let (c2, o2) = run_to_string(&args);
            assert_eq!(c1, c2);
            assert_eq!(o1, o2, "output differs across runs for {args:?}");
        }
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
