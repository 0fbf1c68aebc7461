//! Machine-readable report construction.
//!
//! Every report is a JSON object with a fixed, versioned field order so
//! that identical inputs always produce byte-identical output. Exact
//! rationals are rendered as "numer/denom" strings (never floats); float
//! fields render infinities as the strings "inf" / "-inf" since JSON has
//! no literal for them.

use num::BigRational;
use serde_json::{json, Map, Value};

use ratecap_core::caps::{CapRule, Decision, DecisionMode, Fault, JointDecision, OrientedSide, Witness};
use ratecap_core::cashflow::CashFlowStream;
use ratecap_core::discounting::RateSpec;
use ratecap_core::irr::{IrrValue, Refinement, StreamClass};
use ratecap_core::oracle::{Direction, OracleVerdict, SignChange};

/// Current report schema version.
pub const SCHEMA: u32 = 1;

/// Exact rational as an unambiguous "numer/denom" string.
pub fn rational(r: &BigRational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

/// Float as a JSON number, with infinities spelled out as strings.
pub fn float(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v == f64::INFINITY {
        Value::String("inf".into())
    } else if v == f64::NEG_INFINITY {
        Value::String("-inf".into())
    } else {
        Value::String("nan".into())
    }
}

pub fn mode_label(mode: DecisionMode) -> &'static str {
    match mode {
        DecisionMode::Exact => "exact",
        DecisionMode::Approximate => "approximate",
    }
}

fn rule_label(rule: CapRule) -> &'static str {
    match rule {
        CapRule::CapPlus => "cap_plus",
        CapRule::CapMinus => "cap_minus",
        CapRule::WeakCap => "weak_cap",
        CapRule::Floor => "floor",
    }
}

fn fault_label(fault: Fault) -> &'static str {
    match fault {
        Fault::PartyX => "party_x",
        Fault::PartyY => "party_y",
        Fault::Both => "both",
        Fault::None => "none",
    }
}

fn side_label(side: OrientedSide) -> &'static str {
    match side {
        OrientedSide::AsGiven => "as_given",
        OrientedSide::Negated => "negated",
        OrientedSide::Neither => "neither",
    }
}

fn rate_value(rate: &RateSpec) -> Value {
    match rate {
        RateSpec::Effective(rho) => json!({ "effective": rational(rho) }),
        RateSpec::LogFloat(s) => json!({ "log": float(*s) }),
    }
}

pub fn stream_value(x: &CashFlowStream) -> Value {
    let txs: Vec<Value> = x
        .transactions()
        .iter()
        .map(|(t, a)| json!({ "t": rational(t), "amount": rational(a) }))
        .collect();
    Value::Array(txs)
}

pub fn witness_value(w: &Witness) -> Value {
    match w {
        Witness::None => Value::Null,
        Witness::ViolatingRateBracket { u_lo, u_hi, s_lo, s_hi, sample_u, sample_s } => json!({
            "type": "violating_rate_bracket",
            "u_lo": rational(u_lo),
            "u_hi": rational(u_hi),
            "s_lo": float(*s_lo),
            "s_hi": float(*s_hi),
            "sample_u": rational(sample_u),
            "sample_s": float(*sample_s),
        }),
        Witness::DominatingPureLoan(loan) => json!({
            "type": "dominating_pure_loan",
            "transactions": stream_value(loan),
        }),
    }
}

pub fn decision_value(d: &Decision) -> Value {
    json!({
        "legal": d.legal,
        "rule": rule_label(d.rule),
        "rate": rate_value(&d.rate),
        "witness": witness_value(&d.witness),
        "mode": mode_label(d.mode),
    })
}

pub fn irr_value(v: &IrrValue) -> Value {
    match v {
        IrrValue::Finite { q, u_bracket, log_rate, effective_rate } => json!({
            "log_rate": float(*log_rate),
            "effective_rate": float(*effective_rate),
            "q": q,
            "u_bracket": [rational(&u_bracket.0), rational(&u_bracket.1)],
        }),
        IrrValue::PlusInfinity => json!({ "log_rate": float(f64::INFINITY) }),
        IrrValue::MinusInfinity => json!({ "log_rate": float(f64::NEG_INFINITY) }),
    }
}

pub fn refinement_value(r: &Refinement) -> Value {
    match r {
        Refinement::Finite { q, u_bracket, exact_u, log_rate } => json!({
            "log_rate": float(*log_rate),
            "q": q,
            "u_bracket": [rational(&u_bracket.0), rational(&u_bracket.1)],
            "exact_u": exact_u.as_ref().map_or(Value::Null, rational),
        }),
        Refinement::PlusInfinity => json!({ "log_rate": float(f64::INFINITY) }),
    }
}

pub fn joint_value(j: &JointDecision) -> Value {
    json!({
        "legal": j.legal,
        "oriented_side": side_label(j.oriented_side),
        "at_fault": fault_label(j.at_fault),
    })
}

/// Ingredients of the standard report; fields a command did not compute
/// stay `None` and serialize as `null`.
pub struct Report<'a> {
    pub class: StreamClass,
    pub irr: Option<&'a IrrValue>,
    pub cap_plus: Option<&'a Decision>,
    pub cap_minus: Option<&'a Decision>,
    pub weak_cap: Option<&'a Decision>,
    pub refinement_minus: Option<&'a Refinement>,
    pub refinement_plus: Option<&'a Refinement>,
    pub joint: Option<&'a JointDecision>,
    pub mode: DecisionMode,
}

impl Report<'_> {
    /// Render with the fixed field order of schema 1. The top-level
    /// `witness` mirrors the primary (whole-NPV cap) decision's witness.
    pub fn to_value(&self) -> Value {
        fn opt<T>(v: Option<&T>, f: impl Fn(&T) -> Value) -> Value {
            v.map_or(Value::Null, f)
        }
        let mut m = Map::new();
        m.insert("stream_class".into(), json!(self.class.label()));
        m.insert("irr".into(), opt(self.irr, irr_value));
        m.insert("cap_plus".into(), opt(self.cap_plus, decision_value));
        m.insert("cap_minus".into(), opt(self.cap_minus, decision_value));
        m.insert("weak_cap".into(), opt(self.weak_cap, decision_value));
        m.insert("refinement_minus".into(), opt(self.refinement_minus, refinement_value));
        m.insert("refinement_plus".into(), opt(self.refinement_plus, refinement_value));
        m.insert("joint".into(), opt(self.joint, joint_value));
        m.insert(
            "witness".into(),
            opt(self.cap_plus, |d| witness_value(&d.witness)),
        );
        m.insert("mode".into(), json!(mode_label(self.mode)));
        m.insert("schema".into(), json!(SCHEMA));
        Value::Object(m)
    }
}

/// Report for the brute-force scan command; deliberately a different
/// shape, since nothing in it is certified.
pub fn oracle_report(
    class: StreamClass,
    changes: &[SignChange],
    brackets: &[(f64, f64)],
    verdict: Option<&OracleVerdict>,
) -> Value {
    let changes: Vec<Value> = changes
        .iter()
        .map(|c| {
            json!({
                "s_lo": float(c.s_lo),
                "s_hi": float(c.s_hi),
                "direction": match c.direction {
                    Direction::Rising => "rising",
                    Direction::Falling => "falling",
                },
            })
        })
        .collect();
    let brackets: Vec<Value> = brackets
        .iter()
        .map(|(lo, hi)| json!([float(*lo), float(*hi)]))
        .collect();
    let verdict = verdict.map_or(Value::Null, |v| match v {
        OracleVerdict::NoViolationFound => json!({ "violation": false }),
        OracleVerdict::ViolationFound(s) => json!({ "violation": true, "s": float(*s) }),
    });
    let mut m = Map::new();
    m.insert("stream_class".into(), json!(class.label()));
    m.insert("sign_changes".into(), Value::Array(changes));
    m.insert("brackets".into(), Value::Array(brackets));
    m.insert("verdict".into(), verdict);
    m.insert("mode".into(), json!("approximate"));
    m.insert("schema".into(), json!(SCHEMA));
    Value::Object(m)
}
