//! Stream classification and the certified internal rate of return.
//!
//! The internal rate only deserves its name on streams whose NPV crosses
//! zero exactly once as the discount rate grows. Classification sorts a
//! stream into a ladder of shapes — the empty stream, a plain
//! advance-and-repayment pair, pure loans whose running balance never goes
//! positive at the internal rate, conventional single-crossing loans,
//! crossings with tangential touches, one-signed NPV curves, and everything
//! else — and the rate itself is certified by an isolating bracket of the
//! unique essential root of the NPV polynomial.
//!
//! Two refinement thresholds bound where a stream starts passing the cap
//! tests: the weakest rate above which the whole-stream cap test passes,
//! and the corresponding threshold for the stronger running-balance test.
//! Both are computed exactly as first sign-change points of polynomials and
//! reported with certified brackets.

use num::{BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::cashflow::CashFlowStream;
use crate::expoly::{self, AlgebraicPoint, ExpPoly, Sign};
use crate::rat;

/// Shape of a stream's NPV curve over all discount rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamClass {
    /// The empty stream.
    Zero,
    /// Exactly two transactions: an advance followed by a larger-sign
    /// repayment (negative then positive amount).
    TwoTransaction,
    /// Pure loan: at the internal rate the discounted running balance
    /// stays nonpositive, so interest accrues only on outstanding debt.
    Pure,
    /// Conventional loan: the NPV crosses zero at exactly one rate, from
    /// lender profit at low rates to loss past the crossing.
    Conventional,
    /// One essential crossing plus tangential touches of zero; the
    /// internal rate is still unique.
    SingleCrossing,
    /// NPV nonnegative at every rate; the internal rate degenerates to +∞.
    NonnegativeNpv,
    /// NPV nonpositive at every rate; the internal rate degenerates to −∞.
    NonpositiveNpv,
    /// Several essential crossings; no usable internal rate exists.
    Irregular,
}

impl StreamClass {
    /// True when the class admits a unique finite internal rate.
    pub fn has_finite_irr(self) -> bool {
        matches!(
            self,
            StreamClass::TwoTransaction
                | StreamClass::Pure
                | StreamClass::Conventional
                | StreamClass::SingleCrossing
        )
    }

    /// Stable lower-case label for reports.
    pub fn label(self) -> &'static str {
        match self {
            StreamClass::Zero => "zero",
            StreamClass::TwoTransaction => "two_transaction",
            StreamClass::Pure => "pure",
            StreamClass::Conventional => "conventional",
            StreamClass::SingleCrossing => "single_crossing",
            StreamClass::NonnegativeNpv => "nonnegative_npv",
            StreamClass::NonpositiveNpv => "nonpositive_npv",
            StreamClass::Irregular => "irregular",
        }
    }
}

/// A certified internal rate.
#[derive(Debug, Clone, PartialEq)]
pub enum IrrValue {
    /// Unique finite rate: `log_rate = −q·ln u` for the essential root `u`
    /// of the NPV polynomial, bracketed to relative width `1e−12`.
    Finite {
        /// Denominator-clearing exponent scale of the polynomial encoding.
        q: u32,
        /// Isolating bracket of the essential root in the `u` variable.
        u_bracket: (BigRational, BigRational),
        /// Logarithmic (continuously compounded) rate.
        log_rate: f64,
        /// Effective per-period rate `e^log_rate − 1`.
        effective_rate: f64,
    },
    /// NPV never negative: any rate beats the stream.
    PlusInfinity,
    /// NPV never positive.
    MinusInfinity,
}

/// A certified legality threshold in `[0, +∞]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Refinement {
    Finite {
        /// Exponent scale of the underlying polynomial encoding.
        q: u32,
        /// Bracket of the threshold in the `u` variable (degenerate when
        /// the boundary is an exact rational).
        u_bracket: (BigRational, BigRational),
        /// Exact boundary value in `u`, when rational.
        exact_u: Option<BigRational>,
        /// Logarithmic rate of the threshold.
        log_rate: f64,
    },
    /// No finite rate makes the stream pass.
    PlusInfinity,
}

impl Refinement {
    /// Logarithmic rate, `+∞` when no finite threshold exists.
    pub fn log_rate(&self) -> f64 {
        match self {
            Refinement::Finite { log_rate, .. } => *log_rate,
            Refinement::PlusInfinity => f64::INFINITY,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IrrError {
    /// The rate of a non-pure stream is not a plain accrual rate.
    #[error("stream is not a pure loan")]
    NotPure,
}

/// Shared exact analysis of a stream: its polynomial encoding, positive
/// roots, and class.
pub(crate) struct Analysis {
    pub(crate) poly: ExpPoly,
    pub(crate) class: StreamClass,
    pub(crate) earliest: Sign,
    /// Distinct positive roots of the reduced polynomial, ascending, with
    /// multiplicities and pairwise-disjoint brackets.
    pub(crate) roots: Vec<(AlgebraicPoint, u32)>,
    /// Index into `roots` of the unique odd-multiplicity root for classes
    /// with a finite internal rate.
    pub(crate) essential: Option<usize>,
}

pub(crate) fn analyze(x: &CashFlowStream) -> Analysis {
    let poly = expoly::encode(x);
    if poly.is_zero() {
        return Analysis {
            poly,
            class: StreamClass::Zero,
            earliest: Sign::Zero,
            roots: Vec::new(),
            essential: None,
        };
    }
    let ip = poly.to_intpoly();
    let bound = ip.root_bound();
    let roots = expoly::isolate_in_interval(&ip, &BigRational::zero(), &bound);
    let odd: Vec<usize> = roots
        .iter()
        .enumerate()
        .filter(|(_, (_, m))| m % 2 == 1)
        .map(|(i, _)| i)
        .collect();
    let earliest = x.earliest_sign();
    let (class, essential) = match odd.len() {
        // Sign constant in u ∈ (0, ∞), equal to the sign of the earliest
        // amount (tangential touches do not flip it).
        0 => {
            if earliest == Sign::Positive {
                (StreamClass::NonnegativeNpv, None)
            } else {
                (StreamClass::NonpositiveNpv, None)
            }
        }
        // One essential crossing. It only counts as an internal rate when
        // oriented like a loan: NPV negative for small u (high rates),
        // positive for large u (low rates).
        1 if earliest == Sign::Negative => {
            let i = odd[0];
            let class = if roots.len() > 1 {
                StreamClass::SingleCrossing
            } else if is_two_transaction(x) {
                StreamClass::TwoTransaction
            } else if is_pure_at(x, &poly, &roots[i].0) {
                StreamClass::Pure
            } else {
                StreamClass::Conventional
            };
            (class, Some(i))
        }
        _ => (StreamClass::Irregular, None),
    };
    Analysis { poly, class, earliest, roots, essential }
}

fn is_two_transaction(x: &CashFlowStream) -> bool {
    let txs = x.transactions();
    txs.len() == 2 && txs[0].1.is_negative() && txs[1].1.is_positive()
}

/// Pure-loan test: every discounted partial sum at the internal rate is
/// nonpositive, i.e. each prefix polynomial is ≤ 0 at the essential root.
fn is_pure_at(x: &CashFlowStream, poly: &ExpPoly, root: &AlgebraicPoint) -> bool {
    prefix_polys(x, poly.q())
        .iter()
        .all(|pk| root.sign_of(&pk.to_intpoly()) <= 0)
}

/// Polynomial encodings of all transaction prefixes, shortest first, on the
/// same exponent scale as the full stream.
pub(crate) fn prefix_polys(x: &CashFlowStream, q: u32) -> Vec<ExpPoly> {
    let txs = x.transactions();
    (1..=txs.len())
        .map(|k| {
            let prefix = CashFlowStream::normalize(txs[..k].to_vec())
                .expect("prefix of a normalized stream is normalized");
            expoly::encode_with_q(&prefix, q)
        })
        .collect()
}

/// Classify the NPV shape of a stream.
pub fn classify_stream(x: &CashFlowStream) -> StreamClass {
    analyze(x).class
}

/// The certified internal rate, when the class defines one. `None` for the
/// empty stream and for streams with several essential crossings.
pub fn irr(x: &CashFlowStream) -> Option<IrrValue> {
    irr_from(&analyze(x))
}

pub(crate) fn irr_from(a: &Analysis) -> Option<IrrValue> {
    match a.class {
        StreamClass::Zero | StreamClass::Irregular => None,
        StreamClass::NonnegativeNpv => Some(IrrValue::PlusInfinity),
        StreamClass::NonpositiveNpv => Some(IrrValue::MinusInfinity),
        _ => {
            let (point, _) = &a.roots[a.essential.expect("finite-irr class has essential root")];
            // Relative bracket width ≤ 1e−12.
            refine_relative(point, 1_000_000_000_000u64);
            let (lo, hi) = point.bracket();
            let q = a.poly.q();
            let log_rate = -(q as f64) * point.to_f64().ln();
            Some(IrrValue::Finite {
                q,
                u_bracket: (lo, hi),
                log_rate,
                effective_rate: log_rate.exp_m1(),
            })
        }
    }
}

/// Shrink a positive point's bracket until `hi − lo ≤ lo / scale`.
fn refine_relative(point: &AlgebraicPoint, scale: u64) {
    let scale = BigRational::from_integer(scale.into());
    loop {
        let (lo, hi) = point.bracket();
        if lo.is_positive() && (&hi - &lo) * &scale <= lo {
            return;
        }
        point.refine_once();
    }
}

/// Weakest-cap threshold: the infimum of rates at which the whole-NPV cap
/// test passes, i.e. the first point in `u ∈ (0, 1]` where the NPV
/// polynomial turns positive. `+∞` exactly when the earliest payment is
/// positive (a sign-up gain survives every discount rate).
pub fn refinement_plus(x: &CashFlowStream) -> Refinement {
    refinement_plus_from(&analyze(x))
}

pub(crate) fn refinement_plus_from(a: &Analysis) -> Refinement {
    if a.poly.is_zero() {
        return exact_refinement(a.poly.q(), BigRational::one());
    }
    if a.earliest == Sign::Positive {
        return Refinement::PlusInfinity;
    }
    // Negative near u = 0; the sign first flips at the smallest
    // odd-multiplicity root, if it lies inside (0, 1).
    let first_odd = a
        .roots
        .iter()
        .find(|(_, m)| m % 2 == 1)
        .filter(|(pt, _)| pt.cmp_rational(&BigRational::one()) == std::cmp::Ordering::Less);
    match first_odd {
        None => exact_refinement(a.poly.q(), BigRational::one()),
        Some((pt, _)) => refinement_at_point(a.poly.q(), pt),
    }
}

/// Running-balance threshold: the infimum of rates at which every
/// discounted partial sum is nonpositive. Computed exactly as the smallest
/// first-positive point across all prefix polynomials, capped at `u = 1`.
/// `+∞` exactly when the earliest payment is positive.
pub fn refinement_minus(x: &CashFlowStream) -> Refinement {
    let txs = x.transactions();
    if txs.is_empty() {
        return exact_refinement(1, BigRational::one());
    }
    if x.earliest_sign() == Sign::Positive {
        return Refinement::PlusInfinity;
    }
    let poly = expoly::encode(x);
    let q = poly.q();
    let mut best: Option<AlgebraicPoint> = None;
    for pk in prefix_polys(x, q) {
        let ip = pk.to_intpoly();
        let roots = expoly::isolate_in_interval(&ip, &BigRational::zero(), &BigRational::one());
        if let Some((pt, _)) = roots.into_iter().find(|(_, m)| m % 2 == 1) {
            best = match best {
                None => Some(pt),
                Some(b) => {
                    if pt.cmp_point(&b) == std::cmp::Ordering::Less {
                        Some(pt)
                    } else {
                        Some(b)
                    }
                }
            };
        }
    }
    match best {
        None => exact_refinement(q, BigRational::one()),
        Some(pt) => refinement_at_point(q, &pt),
    }
}

fn exact_refinement(q: u32, u: BigRational) -> Refinement {
    let log_rate = -(q as f64) * rat::to_f64(&u).ln();
    Refinement::Finite {
        q,
        u_bracket: (u.clone(), u.clone()),
        exact_u: Some(u),
        log_rate,
    }
}

fn refinement_at_point(q: u32, pt: &AlgebraicPoint) -> Refinement {
    // Rate-bracket width q·ln(hi/lo) ≤ q·(hi−lo)/lo ≤ 1e−9.
    let billion = BigRational::from_integer(1_000_000_000u64.into());
    let qr = BigRational::from_integer(q.into());
    loop {
        let (lo, hi) = pt.bracket();
        if lo.is_positive() && (&hi - &lo) * &qr * &billion <= lo {
            break;
        }
        pt.refine_once();
    }
    let (lo, hi) = pt.bracket();
    Refinement::Finite {
        q,
        u_bracket: (lo, hi),
        exact_u: pt.exact_value(),
        log_rate: -(q as f64) * pt.to_f64().ln(),
    }
}

/// The accrual rate of a pure loan (including plain two-transaction
/// loans). Other shapes have no such rate.
pub fn pure_rate(x: &CashFlowStream) -> Result<IrrValue, IrrError> {
    let a = analyze(x);
    match a.class {
        StreamClass::TwoTransaction | StreamClass::Pure => {
            Ok(irr_from(&a).expect("pure classes have a finite internal rate"))
        }
        _ => Err(IrrError::NotPure),
    }
}
