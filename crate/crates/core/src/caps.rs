//! The legality rules: strong caps on the whole NPV and on the running
//! balance, the weak single-rate cap, the borrower-protecting floor, and
//! the joint floor-plus-cap classification with fault assignment.
//!
//! Every exact decision reduces to sign questions about the stream's NPV
//! polynomial on `u ∈ (0, 1]`, where `u = e^(−s/q)` and the cap rate `r`
//! maps to the algebraic cutoff `u* = (1+ρ)^(−1/q)`:
//!
//! * whole-NPV cap — the polynomial must be ≤ 0 on `(0, u*]`, i.e. at the
//!   cap rate and every rate above it;
//! * running-balance cap — every prefix polynomial must be ≤ 0 at `u*`,
//!   so the debt never flips to a deposit earning above the cap;
//! * weak cap — the full polynomial must be ≤ 0 at `u*` alone;
//! * floor — the polynomial must be ≥ 0 on `[u*, 1]`, protecting the
//!   borrower's side at every rate below the floor.
//!
//! Illegal whole-NPV decisions in exact mode carry a certified violating
//! rate band: an open `u`-interval on which the polynomial is strictly
//! positive, with a rational sample point whose sign is verified exactly.
//! Legal running-balance decisions on whole-period streams carry a
//! dominating pure-loan witness: an explicit pure loan at the cap rate
//! that gives the borrower at least as much at every moment.

use std::cmp::Ordering;

use num::{BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::cashflow::CashFlowStream;
use crate::discounting::{self, BenchmarkPath, DiscountError, RateSpec};
use crate::expoly::{self, AlgebraicCutoff, AlgebraicPoint, ExpPoly, Sign};
use crate::irr::{self, Analysis};
use crate::oracle::{self, OracleVerdict, ScanConfig};
use crate::rat;

/// Which legality rule a decision applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapRule {
    /// Whole-NPV cap: nonpositive NPV at the cap and all higher rates.
    CapPlus,
    /// Running-balance cap: nonpositive discounted partials at the cap.
    CapMinus,
    /// Weak cap: nonpositive NPV at the cap rate alone.
    WeakCap,
    /// Floor: nonnegative NPV at the floor and all lower rates.
    Floor,
}

/// Whether the answer is certified or merely the best a float rate allows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionMode {
    Exact,
    Approximate,
}

/// Supporting evidence attached to a decision.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    None,
    /// An open band `u ∈ (u_lo, u_hi)` — equivalently logarithmic rates
    /// `s ∈ (s_lo, s_hi)` — on which the NPV is strictly positive. For the
    /// whole-NPV cap the band lies above the cap rate; for the weak cap it
    /// is a neighborhood of the cap rate itself. `sample_u` is a rational
    /// point of the band where the positive sign is verified in exact
    /// arithmetic.
    ViolatingRateBracket {
        u_lo: BigRational,
        u_hi: BigRational,
        s_lo: f64,
        s_hi: f64,
        sample_u: BigRational,
        sample_s: f64,
    },
    /// A pure loan at the cap rate that dominates the judged stream: same
    /// payments except for one extra nonnegative final installment.
    DominatingPureLoan(CashFlowStream),
}

/// Outcome of a single-rule legality test.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub legal: bool,
    pub rule: CapRule,
    pub rate: RateSpec,
    pub witness: Witness,
    pub mode: DecisionMode,
}

/// Which orientation of a two-party contract is the lending side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrientedSide {
    AsGiven,
    Negated,
    Neither,
}

/// Who an illegal joint contract wrongs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// The party receiving the stream as given.
    PartyX,
    /// The counterparty (receiving the negated stream).
    PartyY,
    Both,
    None,
}

/// Outcome of the joint floor-plus-cap test over both orientations.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDecision {
    pub legal: bool,
    pub oriented_side: OrientedSide,
    pub at_fault: Fault,
}

#[derive(Debug, Error, PartialEq)]
pub enum CapsError {
    /// Floor and cap rates must satisfy `0 ≤ floor ≤ cap`.
    #[error("floor rate exceeds cap rate or is negative")]
    InvalidConfig,
    /// The dominating-loan witness exists only for streams that pass the
    /// running-balance cap.
    #[error("stream fails the running-balance cap at this rate")]
    NotInCapMinus,
    /// The compounding factor to the witness date is not rational.
    #[error("witness needs whole-period transaction times and an exact rate")]
    NonExactFactor,
    /// No witness is defined for this stream.
    #[error("no witness applies to this stream")]
    NotApplicable,
}

fn decision(legal: bool, rule: CapRule, rate: RateSpec, witness: Witness, mode: DecisionMode) -> Decision {
    Decision { legal, rule, rate, witness, mode }
}

/// Whole-NPV cap test: legal iff the NPV is ≤ 0 at the cap rate and every
/// higher rate. Exact for effective rational rates; a float log rate gets
/// an approximate oracle answer.
pub fn in_cap_plus(x: &CashFlowStream, r: &RateSpec) -> Decision {
    match r {
        RateSpec::Effective(rho) => in_cap_plus_exact(x, rho, r.clone()),
        RateSpec::LogFloat(s) => in_cap_plus_float(x, *s, r.clone()),
    }
}

fn in_cap_plus_exact(x: &CashFlowStream, rho: &BigRational, rate: RateSpec) -> Decision {
    let a = irr::analyze(x);
    if a.poly.is_zero() {
        return decision(true, CapRule::CapPlus, rate, Witness::None, DecisionMode::Exact);
    }
    let cutoff = AlgebraicCutoff::new(rho.clone(), a.poly.q());
    if a.earliest == Sign::Positive {
        // Positive sign immediately right of u = 0: every rate above some
        // finite level violates the cap, including rates above this one.
        let witness = first_band_witness(&a, &cutoff);
        return decision(false, CapRule::CapPlus, rate, witness, DecisionMode::Exact);
    }
    // Negative near 0; the sign first flips at the smallest odd root. The
    // polynomial stays ≤ 0 on (0, u*] iff that root is at or beyond u*.
    let first_odd = a.roots.iter().position(|(_, m)| m % 2 == 1);
    match first_odd {
        Some(i) if a.roots[i].0.cmp_point(cutoff.point()) == Ordering::Less => {
            let witness = band_above_root_witness(&a, i, &cutoff);
            decision(false, CapRule::CapPlus, rate, witness, DecisionMode::Exact)
        }
        _ => decision(true, CapRule::CapPlus, rate, Witness::None, DecisionMode::Exact),
    }
}

fn in_cap_plus_float(x: &CashFlowStream, s: f64, rate: RateSpec) -> Decision {
    match oracle::oracle_in_cap_plus(x, s, &ScanConfig::default()) {
        OracleVerdict::NoViolationFound => {
            decision(true, CapRule::CapPlus, rate, Witness::None, DecisionMode::Approximate)
        }
        OracleVerdict::ViolationFound(sv) => {
            let witness = certified_band_near(x, sv);
            decision(false, CapRule::CapPlus, rate, witness, DecisionMode::Approximate)
        }
    }
}

/// Running-balance cap test: legal iff every discounted partial sum is ≤ 0
/// at the cap rate, so the borrower's account never becomes a deposit
/// earning above the cap.
pub fn in_cap_minus(x: &CashFlowStream, r: &RateSpec) -> Decision {
    match r {
        RateSpec::Effective(rho) => in_cap_minus_exact(x, rho, r.clone()),
        RateSpec::LogFloat(s) => {
            let legal = discounting::discounted_partials_float(x, *s)
                .iter()
                .all(|p| *p <= 0.0);
            decision(legal, CapRule::CapMinus, r.clone(), Witness::None, DecisionMode::Approximate)
        }
    }
}

fn in_cap_minus_exact(x: &CashFlowStream, rho: &BigRational, rate: RateSpec) -> Decision {
    if x.transactions().is_empty() {
        return decision(true, CapRule::CapMinus, rate, Witness::None, DecisionMode::Exact);
    }
    let poly = expoly::encode(x);
    let q = poly.q();
    let cutoff = AlgebraicCutoff::new(rho.clone(), q);
    let legal = irr::prefix_polys(x, q)
        .iter()
        .all(|pk| expoly::sign_at_cutoff(pk, &cutoff).is_nonpositive());
    let witness = if legal && x.transactions().iter().all(|(t, _)| t.is_integer()) {
        Witness::DominatingPureLoan(dominator_from(x, rho))
    } else {
        Witness::None
    };
    decision(legal, CapRule::CapMinus, rate, witness, DecisionMode::Exact)
}

/// Weak cap test: legal iff the NPV at the cap rate itself is ≤ 0. At a
/// zero cap this is the classic rule that total repayments must not exceed
/// the amount lent.
pub fn in_weak_cap(x: &CashFlowStream, r: &RateSpec) -> Decision {
    match r {
        RateSpec::Effective(rho) => {
            let poly = expoly::encode(x);
            if poly.is_zero() {
                return decision(true, CapRule::WeakCap, r.clone(), Witness::None, DecisionMode::Exact);
            }
            let cutoff = AlgebraicCutoff::new(rho.clone(), poly.q());
            let sign = expoly::sign_at_cutoff(&poly, &cutoff);
            let witness = if sign == Sign::Positive {
                positive_band_around(&poly, cutoff.point())
            } else {
                Witness::None
            };
            decision(sign.is_nonpositive(), CapRule::WeakCap, r.clone(), witness, DecisionMode::Exact)
        }
        RateSpec::LogFloat(s) => {
            let legal = discounting::npv_float(x, *s) <= 0.0;
            decision(legal, CapRule::WeakCap, r.clone(), Witness::None, DecisionMode::Approximate)
        }
    }
}

/// Floor test: legal iff the NPV is ≥ 0 at the floor rate and every rate
/// below it, down to zero — the borrower must not be the net payer under
/// any discounting gentler than the floor.
pub fn in_floor(x: &CashFlowStream, r: &RateSpec) -> Decision {
    match r {
        RateSpec::Effective(rho) => in_floor_exact(x, rho, r.clone()),
        RateSpec::LogFloat(s) => {
            let n = 1000;
            let legal = (0..=n)
                .map(|i| discounting::npv_float(x, s * i as f64 / n as f64))
                .all(|v| v >= 0.0);
            decision(legal, CapRule::Floor, r.clone(), Witness::None, DecisionMode::Approximate)
        }
    }
}

fn in_floor_exact(x: &CashFlowStream, rho: &BigRational, rate: RateSpec) -> Decision {
    let a = irr::analyze(x);
    if a.poly.is_zero() {
        return decision(true, CapRule::Floor, rate, Witness::None, DecisionMode::Exact);
    }
    let one = BigRational::one();
    let q = a.poly.q();
    let cutoff = AlgebraicCutoff::new(rho.clone(), q);
    // A negative floor rate checks an empty rate range: vacuously legal.
    if cutoff.point().cmp_rational(&one) == Ordering::Greater {
        return decision(true, CapRule::Floor, rate, Witness::None, DecisionMode::Exact);
    }
    // Zero floor: the range collapses to the single rate 0, where the NPV
    // is the plain transaction total.
    if cutoff.exact_value().as_ref() == Some(&one) {
        let legal = expoly::sign_at_rational(&a.poly, &one).is_nonnegative();
        return decision(legal, CapRule::Floor, rate, Witness::None, DecisionMode::Exact);
    }
    let legal = floor_holds_on_interval(&a, &cutoff);
    decision(legal, CapRule::Floor, rate, Witness::None, DecisionMode::Exact)
}

/// Does the NPV polynomial stay ≥ 0 on `[u*, 1]` (with `u* < 1`)? Checked
/// as: both endpoint signs ≥ 0, no odd root strictly inside, and — since
/// the interior sign is then constant away from tangential touches — one
/// interior non-root sample ≥ 0.
fn floor_holds_on_interval(a: &Analysis, cutoff: &AlgebraicCutoff) -> bool {
    let one = BigRational::one();
    if expoly::sign_at_cutoff(&a.poly, cutoff) == Sign::Negative {
        return false;
    }
    if expoly::sign_at_rational(&a.poly, &one) == Sign::Negative {
        return false;
    }
    for (pt, m) in &a.roots {
        if m % 2 == 1
            && pt.cmp_point(cutoff.point()) == Ordering::Greater
            && pt.cmp_rational(&one) == Ordering::Less
        {
            return false;
        }
    }
    // Interior sample strictly between u* and 1, avoiding roots.
    let ip = a.poly.to_intpoly();
    let two = BigRational::from_integer(2.into());
    loop {
        let (_, hi) = cutoff.point().bracket();
        if hi < one {
            let mut gap = (&one - &hi) / &two;
            loop {
                let w = &hi + &gap;
                match ip.sign_at(&w) {
                    0 => gap /= &two, // landed on a root; move closer to u*
                    s => return s > 0,
                }
            }
        }
        cutoff.point().refine_once();
    }
}

/// Joint floor-plus-cap classification of a two-party contract. One party
/// receives `x`, the other `−x`; the contract is legal when either
/// orientation passes both its floor and its cap. When illegal, fault lies
/// with the party whose rights the stream respects: the side that passes
/// its floor but breaks the cap (or mirror-wise), and with both parties
/// when neither test passes either way.
pub fn joint_classify(
    x: &CashFlowStream,
    floor: &RateSpec,
    cap: &RateSpec,
) -> Result<JointDecision, CapsError> {
    validate_floor_cap(floor, cap)?;
    let neg = x.negate();
    let floor_given = in_floor(x, floor).legal;
    let cap_given = in_cap_plus(x, cap).legal;
    let floor_negated = in_floor(&neg, floor).legal;
    let cap_negated = in_cap_plus(&neg, cap).legal;
    if floor_given && cap_given {
        return Ok(JointDecision {
            legal: true,
            oriented_side: OrientedSide::AsGiven,
            at_fault: Fault::None,
        });
    }
    if floor_negated && cap_negated {
        return Ok(JointDecision {
            legal: true,
            oriented_side: OrientedSide::Negated,
            at_fault: Fault::None,
        });
    }
    let at_fault = if (floor_given && !cap_given) || (!floor_negated && cap_negated) {
        Fault::PartyX
    } else if (floor_negated && !cap_negated) || (!floor_given && cap_given) {
        Fault::PartyY
    } else {
        Fault::Both
    };
    Ok(JointDecision { legal: false, oriented_side: OrientedSide::Neither, at_fault })
}

fn validate_floor_cap(floor: &RateSpec, cap: &RateSpec) -> Result<(), CapsError> {
    match (floor, cap) {
        (RateSpec::Effective(f), RateSpec::Effective(c)) => {
            if f.is_negative() || f > c {
                return Err(CapsError::InvalidConfig);
            }
        }
        _ => {
            let f = floor.log_rate_f64();
            if f < 0.0 || f > cap.log_rate_f64() {
                return Err(CapsError::InvalidConfig);
            }
        }
    }
    Ok(())
}

/// Construct the dominating pure loan for a stream that passes the
/// running-balance cap: the same stream plus one final nonnegative
/// installment `−F_r(x)·(1+ρ)^(T+1)` one period after maturity. Needs
/// whole-period times and an exact rate so the factor stays rational.
pub fn pure_dominator_witness(
    x: &CashFlowStream,
    r: &RateSpec,
) -> Result<CashFlowStream, CapsError> {
    let rho = match r {
        RateSpec::Effective(rho) => rho,
        RateSpec::LogFloat(_) => return Err(CapsError::NonExactFactor),
    };
    if x.transactions().is_empty() {
        return Err(CapsError::NotApplicable);
    }
    if !x.transactions().iter().all(|(t, _)| t.is_integer()) {
        return Err(CapsError::NonExactFactor);
    }
    if !in_cap_minus(x, r).legal {
        return Err(CapsError::NotInCapMinus);
    }
    Ok(dominator_from(x, rho))
}

fn dominator_from(x: &CashFlowStream, rho: &BigRational) -> CashFlowStream {
    let growth = BigRational::one() + rho;
    let npv = discounting::discount_stream(x, rho)
        .expect("whole-period times checked by callers")
        .total();
    let t_final = x.maturity().expect("nonempty stream has a maturity") + BigRational::one();
    let periods: i64 = t_final
        .numer()
        .try_into()
        .expect("maturity plus one period stays in range");
    let installment = -npv * rat::pow_i(&growth, periods);
    let extra = CashFlowStream::normalize(vec![(t_final, installment)])
        .expect("single aligned transaction");
    let y = x.combine(&extra);
    debug_assert!(x.dominates(&y));
    y
}

/// Legality of a floating-rate contract judged through its fixed-rate
/// template: the realized payments are the template compounded along the
/// benchmark, so the contract is legal iff the template passes the cap.
/// The benchmark transform is run as an ex-post alignment audit.
pub fn relative_classify(
    x: &CashFlowStream,
    b: &BenchmarkPath,
    cap: &RateSpec,
) -> Result<Decision, DiscountError> {
    discounting::float_transform(x, b)?;
    Ok(in_cap_plus(x, cap))
}

// ---------------------------------------------------------------------------
// Witness construction.

fn band_witness(q: u32, poly: &ExpPoly, u_lo: BigRational, u_hi: BigRational) -> Witness {
    debug_assert!(u_lo < u_hi);
    let two = BigRational::from_integer(2.into());
    let sample_u = (&u_lo + &u_hi) / &two;
    debug_assert_eq!(expoly::sign_at_rational(poly, &sample_u), Sign::Positive);
    let qf = q as f64;
    let s_lo = -qf * rat::to_f64(&u_hi).ln();
    let s_hi = if u_lo.is_zero() {
        f64::INFINITY
    } else {
        -qf * rat::to_f64(&u_lo).ln()
    };
    let sample_s = -qf * rat::to_f64(&sample_u).ln();
    Witness::ViolatingRateBracket { u_lo, u_hi, s_lo, s_hi, sample_u, sample_s }
}

/// Violating band when the earliest amount is positive: the polynomial is
/// strictly positive from 0 up to its first root, so `(0, c)` works for
/// any `c` below both the first root and the cutoff.
fn first_band_witness(a: &Analysis, cutoff: &AlgebraicCutoff) -> Witness {
    let mut hi = cutoff.bracket().0;
    if let Some((pt, _)) = a.roots.first() {
        loop {
            let (lo, _) = pt.bracket();
            if lo.is_positive() {
                if lo < hi {
                    hi = lo;
                }
                break;
            }
            pt.refine_once();
        }
    }
    band_witness(a.poly.q(), &a.poly, BigRational::zero(), hi)
}

/// Violating band just above the first odd root `θ` when `θ < u*`: the
/// sign is positive on the whole gap between `θ` and the next root, and
/// the band is clipped at the cutoff to stay inside the forbidden region.
fn band_above_root_witness(a: &Analysis, i: usize, cutoff: &AlgebraicCutoff) -> Witness {
    let (pt, _) = &a.roots[i];
    if let Some((next, _)) = a.roots.get(i + 1) {
        while pt.bracket().1 >= next.bracket().0 {
            pt.refine_once();
            next.refine_once();
        }
    }
    while pt.bracket().1 >= cutoff.bracket().0 {
        pt.refine_once();
        cutoff.point().refine_once();
    }
    let lo = pt.bracket().1;
    let mut hi = cutoff.bracket().0;
    if let Some((next, _)) = a.roots.get(i + 1) {
        let n = next.bracket().0;
        if n < hi {
            hi = n;
        }
    }
    band_witness(a.poly.q(), &a.poly, lo, hi)
}

/// Tight positive band around a point where the polynomial is strictly
/// positive (used for weak-cap violations at the cap rate itself).
fn positive_band_around(poly: &ExpPoly, point: &AlgebraicPoint) -> Witness {
    let ip = poly.to_intpoly();
    let two = BigRational::from_integer(2.into());
    if let Some(v) = point.exact_value() {
        let mut eps = &v / BigRational::from_integer(4.into());
        loop {
            let lo = &v - &eps;
            let hi = &v + &eps;
            if lo.is_positive() && ip.eval_interval(&lo, &hi).0.is_positive() {
                return band_witness(poly.q(), poly, lo, hi);
            }
            eps /= &two;
        }
    }
    loop {
        let (lo, hi) = point.bracket();
        if lo.is_positive() && ip.eval_interval(&lo, &hi).0.is_positive() {
            return band_witness(poly.q(), poly, lo, hi);
        }
        point.refine_once();
    }
}

/// Best-effort exact certification of a float-mode violation at log rate
/// `sv`: map to `u`, verify the sign there in exact arithmetic, and widen
/// to the gap between neighboring roots (clipped at `u(sv)` so the band
/// stays above the cap). Returns no witness when certification fails.
fn certified_band_near(x: &CashFlowStream, sv: f64) -> Witness {
    let a = irr::analyze(x);
    let q = a.poly.q();
    let uv = match BigRational::from_float((-sv / q as f64).exp()) {
        Some(v) if v.is_positive() => v,
        _ => return Witness::None,
    };
    if expoly::sign_at_rational(&a.poly, &uv) != Sign::Positive {
        return Witness::None;
    }
    // Last root strictly below uv bounds the positive gap from the left.
    let mut lo = BigRational::zero();
    for (pt, _) in a.roots.iter().rev() {
        if pt.cmp_rational(&uv) == Ordering::Less {
            loop {
                let (_, hi) = pt.bracket();
                if hi < uv {
                    lo = hi;
                    break;
                }
                pt.refine_once();
            }
            break;
        }
    }
    band_witness(q, &a.poly, lo, uv)
}
