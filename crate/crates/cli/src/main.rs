//! Batch loan screening against interest-rate caps.
//!
//! Reads a loan document (JSON), screens it under a jurisdiction's cap —
//! and optionally floor — and reports the verdict with certified
//! witnesses. Reports go to standard output, diagnostics to standard
//! error. Exit codes: 0 legal, 2 input or configuration error, 3 usurious,
//! 4 approximate run that could not certify legality.

mod document;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::{Signed, ToPrimitive};

use ratecap_core::caps::{self, Decision, DecisionMode, Witness};
use ratecap_core::discounting::RateSpec;
use ratecap_core::irr::{self, IrrValue, Refinement};
use ratecap_core::oracle::{self, Direction, OracleVerdict, ScanConfig};

use document::{parse_percent, LoanDocument};
use report::Report;

#[derive(Parser)]
#[command(name = "ratecap", about = "Screen loan cash-flow streams against interest-rate caps", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full screening: class, rate, every cap rule, thresholds, witnesses.
    Classify {
        /// Path to the loan document (JSON).
        #[arg(long)]
        loan: PathBuf,
        /// Cap as an effective annual percent, e.g. "60%".
        #[arg(long)]
        cap: String,
        /// Optional floor percent; adds the two-party joint verdict.
        #[arg(long)]
        floor: Option<String>,
        /// Arithmetic mode for the rate comparison.
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Emit the machine-readable JSON report.
        #[arg(long)]
        json: bool,
    },
    /// Internal rate of return and the per-rule legality thresholds.
    Irr {
        /// Path to the loan document (JSON).
        #[arg(long)]
        loan: PathBuf,
        /// Emit the machine-readable JSON report.
        #[arg(long)]
        json: bool,
    },
    /// Two-party verdict under floor and cap, trying both orientations.
    Joint {
        /// Path to the loan document (JSON).
        #[arg(long)]
        loan: PathBuf,
        /// Cap as an effective annual percent.
        #[arg(long)]
        cap: String,
        /// Floor as an effective annual percent (0 ≤ floor ≤ cap).
        #[arg(long)]
        floor: String,
        /// Arithmetic mode for the rate comparisons.
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Emit the machine-readable JSON report.
        #[arg(long)]
        json: bool,
    },
    /// Brute-force float scan of the NPV sign over a rate grid.
    OracleCheck {
        /// Path to the loan document (JSON).
        #[arg(long)]
        loan: PathBuf,
        /// Optional cap percent; search for a violation at or above it.
        #[arg(long)]
        cap: Option<String>,
        /// Number of grid intervals across the scanned range.
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
        /// Upper end of the scanned logarithmic-rate range
        /// (default: max(10, 2 × cap log-rate)).
        #[arg(long)]
        s_max: Option<f64>,
        /// Emit the machine-readable JSON report.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Certified decisions in exact rational arithmetic.
    Exact,
    /// Fast float comparison; a "legal" answer is not a certificate.
    Float,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<u8, String> {
    match Cli::parse().command {
        Command::Classify { loan, cap, floor, mode, json } => {
            run_classify(&loan, &cap, floor.as_deref(), mode, json)
        }
        Command::Irr { loan, json } => run_irr(&loan, json),
        Command::Joint { loan, cap, floor, mode, json } => {
            run_joint(&loan, &cap, &floor, mode, json)
        }
        Command::OracleCheck { loan, cap, grid, s_max, json } => {
            run_oracle(&loan, cap.as_deref(), grid, s_max, json)
        }
    }
}

fn load_document(path: &PathBuf) -> Result<LoanDocument, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("malformed loan document: {e}"))
}

/// Turn a percent string into a rate for the requested arithmetic mode,
/// validating `0 ≤ floor ≤ cap` on the exact values when a floor is given.
fn jurisdiction(
    mode: Mode,
    cap: &str,
    floor: Option<&str>,
) -> Result<(RateSpec, Option<RateSpec>), String> {
    let cap_rho = parse_percent(cap)?;
    let floor_rho = floor.map(parse_percent).transpose()?;
    if let Some(f) = &floor_rho {
        if f.is_negative() || *f > cap_rho {
            return Err("floor must satisfy 0 <= floor <= cap".into());
        }
    }
    let spec = |rho: num::BigRational| -> Result<RateSpec, String> {
        match mode {
            Mode::Exact => Ok(RateSpec::Effective(rho)),
            Mode::Float => {
                let r = rho.to_f64().ok_or("rate does not fit in a float")?;
                Ok(RateSpec::LogFloat((1.0 + r).ln()))
            }
        }
    };
    Ok((spec(cap_rho)?, floor_rho.map(spec).transpose()?))
}

/// Exit code of a screening run, a pure function of the primary decision:
/// certified legal 0, any illegal 3, uncertified legal 4.
fn exit_for(d: &Decision) -> u8 {
    match (d.legal, d.mode) {
        (true, DecisionMode::Exact) => 0,
        (false, _) => 3,
        (true, DecisionMode::Approximate) => 4,
    }
}

fn run_classify(
    loan: &PathBuf,
    cap: &str,
    floor: Option<&str>,
    mode: Mode,
    json: bool,
) -> Result<u8, String> {
    let doc = load_document(loan)?;
    let x = doc.to_stream()?;
    let (cap_rate, floor_rate) = jurisdiction(mode, cap, floor)?;

    let class = irr::classify_stream(&x);
    let irr_v = irr::irr(&x);
    let cap_plus = caps::in_cap_plus(&x, &cap_rate);
    let cap_minus = caps::in_cap_minus(&x, &cap_rate);
    let weak_cap = caps::in_weak_cap(&x, &cap_rate);
    let refinement_minus = irr::refinement_minus(&x);
    let refinement_plus = irr::refinement_plus(&x);
    let joint = floor_rate
        .map(|f| caps::joint_classify(&x, &f, &cap_rate).map_err(|e| e.to_string()))
        .transpose()?;

    let code = exit_for(&cap_plus);
    if json {
        let value = Report {
            class,
            irr: irr_v.as_ref(),
            cap_plus: Some(&cap_plus),
            cap_minus: Some(&cap_minus),
            weak_cap: Some(&weak_cap),
            refinement_minus: Some(&refinement_minus),
            refinement_plus: Some(&refinement_plus),
            joint: joint.as_ref(),
            mode: cap_plus.mode,
        }
        .to_value();
        println!("{}", serde_json::to_string_pretty(&value).expect("report is valid JSON"));
    } else {
        print_header(&doc, class.label());
        println!("irr: {}", irr_text(irr_v.as_ref()));
        print_decision("cap_plus", &cap_plus, true);
        print_decision("cap_minus", &cap_minus, false);
        print_decision("weak_cap", &weak_cap, false);
        println!("refinement_minus: {}", refinement_text(&refinement_minus));
        println!("refinement_plus: {}", refinement_text(&refinement_plus));
        if let Some(j) = &joint {
            println!("joint: {}", joint_text(j));
        }
        println!("verdict: {}", verdict_text(code));
    }
    Ok(code)
}

fn run_irr(loan: &PathBuf, json: bool) -> Result<u8, String> {
    let doc = load_document(loan)?;
    let x = doc.to_stream()?;
    let class = irr::classify_stream(&x);
    let irr_v = irr::irr(&x);
    let refinement_minus = irr::refinement_minus(&x);
    let refinement_plus = irr::refinement_plus(&x);

    if json {
        let value = Report {
            class,
            irr: irr_v.as_ref(),
            cap_plus: None,
            cap_minus: None,
            weak_cap: None,
            refinement_minus: Some(&refinement_minus),
            refinement_plus: Some(&refinement_plus),
            joint: None,
            mode: DecisionMode::Exact,
        }
        .to_value();
        println!("{}", serde_json::to_string_pretty(&value).expect("report is valid JSON"));
    } else {
        print_header(&doc, class.label());
        println!("irr: {}", irr_text(irr_v.as_ref()));
        println!("refinement_minus: {}", refinement_text(&refinement_minus));
        println!("refinement_plus: {}", refinement_text(&refinement_plus));
    }
    Ok(0)
}

fn run_joint(loan: &PathBuf, cap: &str, floor: &str, mode: Mode, json: bool) -> Result<u8, String> {
    let doc = load_document(loan)?;
    let x = doc.to_stream()?;
    let (cap_rate, floor_rate) = jurisdiction(mode, cap, Some(floor))?;
    let floor_rate = floor_rate.expect("floor was provided");

    let class = irr::classify_stream(&x);
    let irr_v = irr::irr(&x);
    let joint = caps::joint_classify(&x, &floor_rate, &cap_rate).map_err(|e| e.to_string())?;

    // The joint rule is two-sided, so its verdict — not the one-sided cap
    // decision — drives the exit code; a float "legal" is still uncertified.
    let code = if !joint.legal {
        3
    } else if mode == Mode::Float {
        4
    } else {
        0
    };
    let decision_mode = match mode {
        Mode::Exact => DecisionMode::Exact,
        Mode::Float => DecisionMode::Approximate,
    };
    if json {
        let value = Report {
            class,
            irr: irr_v.as_ref(),
            cap_plus: None,
            cap_minus: None,
            weak_cap: None,
            refinement_minus: None,
            refinement_plus: None,
            joint: Some(&joint),
            mode: decision_mode,
        }
        .to_value();
        println!("{}", serde_json::to_string_pretty(&value).expect("report is valid JSON"));
    } else {
        print_header(&doc, class.label());
        println!("joint: {}", joint_text(&joint));
        println!("verdict: {}", verdict_text(code));
    }
    Ok(code)
}

fn run_oracle(
    loan: &PathBuf,
    cap: Option<&str>,
    grid: usize,
    s_max: Option<f64>,
    json: bool,
) -> Result<u8, String> {
    let doc = load_document(loan)?;
    let x = doc.to_stream()?;
    if grid < 2 {
        return Err("grid must be at least 2".into());
    }
    let cap_log = cap
        .map(|c| {
            let rho = parse_percent(c)?;
            let r = rho.to_f64().ok_or("rate does not fit in a float")?;
            Ok::<f64, String>((1.0 + r).ln())
        })
        .transpose()?;
    let s_hi = s_max.unwrap_or_else(|| cap_log.map_or(10.0, |r| (2.0 * r).max(10.0)));
    if !(s_hi > 0.0) {
        return Err("s-max must be positive".into());
    }
    let cfg = ScanConfig { s_lo: 0.0, s_hi, grid_points: grid, ..ScanConfig::default() };

    let class = irr::classify_stream(&x);
    let changes = oracle::scan_signs(&x, &cfg);
    let brackets = oracle::bracket_roots(&x, &cfg);
    let verdict = cap_log.map(|r| oracle::oracle_in_cap_plus(&x, r, &cfg));

    let code = match &verdict {
        Some(OracleVerdict::ViolationFound(_)) => 3,
        Some(OracleVerdict::NoViolationFound) => 4,
        None => 0,
    };
    if json {
        let value = report::oracle_report(class, &changes, &brackets, verdict.as_ref());
        println!("{}", serde_json::to_string_pretty(&value).expect("report is valid JSON"));
    } else {
        print_header(&doc, class.label());
        println!("sign changes: {}", changes.len());
        for c in &changes {
            let dir = match c.direction {
                Direction::Rising => "rising",
                Direction::Falling => "falling",
            };
            println!("  {dir} at s in ({}, {})", c.s_lo, c.s_hi);
        }
        println!("brackets: {}", brackets.len());
        for (lo, hi) in &brackets {
            println!("  ({lo}, {hi})");
        }
        match &verdict {
            Some(OracleVerdict::ViolationFound(s)) => println!("verdict: violation at s = {s}"),
            Some(OracleVerdict::NoViolationFound) => println!("verdict: no violation found"),
            None => {}
        }
    }
    Ok(code)
}

fn print_header(doc: &LoanDocument, class: &str) {
    println!("class: {class}");
    if let Some(c) = &doc.currency {
        println!("currency: {c}");
    }
}

fn rate_text(rate: &RateSpec) -> String {
    match rate {
        RateSpec::Effective(rho) => format!("{}/{} effective", rho.numer(), rho.denom()),
        RateSpec::LogFloat(s) => format!("log {s}"),
    }
}

fn irr_text(v: Option<&IrrValue>) -> String {
    match v {
        None => "none".into(),
        Some(IrrValue::Finite { log_rate, effective_rate, .. }) => {
            format!("log {log_rate}, effective {effective_rate}")
        }
        Some(IrrValue::PlusInfinity) => "+inf".into(),
        Some(IrrValue::MinusInfinity) => "-inf".into(),
    }
}

fn refinement_text(r: &Refinement) -> String {
    match r {
        Refinement::Finite { log_rate, .. } => format!("log {log_rate}"),
        Refinement::PlusInfinity => "+inf".into(),
    }
}

fn joint_text(j: &caps::JointDecision) -> String {
    let legal = if j.legal { "legal" } else { "illegal" };
    let side = match j.oriented_side {
        caps::OrientedSide::AsGiven => "as_given",
        caps::OrientedSide::Negated => "negated",
        caps::OrientedSide::Neither => "neither",
    };
    let fault = match j.at_fault {
        caps::Fault::PartyX => "party_x",
        caps::Fault::PartyY => "party_y",
        caps::Fault::Both => "both",
        caps::Fault::None => "none",
    };
    format!("{legal}, side {side}, fault {fault}")
}

fn print_decision(rule: &str, d: &Decision, with_witness: bool) {
    let legal = if d.legal { "legal" } else { "illegal" };
    println!("{rule} at {}: {legal} ({})", rate_text(&d.rate), report::mode_label(d.mode));
    if !with_witness {
        return;
    }
    match &d.witness {
        Witness::None => {}
        Witness::ViolatingRateBracket { s_lo, s_hi, sample_s, .. } => {
            println!("  violation band: s in ({s_lo}, {s_hi}), positive sample at s = {sample_s}");
        }
        Witness::DominatingPureLoan(loan) => {
            println!("  dominating pure loan with {} transactions", loan.transactions().len());
        }
    }
}

fn verdict_text(code: u8) -> &'static str {
    match code {
        0 => "legal",
        3 => "usurious",
        _ => "indeterminate (approximate run; legality not certified)",
    }
}
