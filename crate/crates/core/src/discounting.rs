//! Rate specifications and the two NPV evaluation routes: floating-point
//! discounting (also used by the independent oracle) and exact rational
//! compounding for benchmark paths and discounted streams.
//!
//! The engine's canonical rate is the logarithmic (continuously compounded)
//! rate `s`; user-facing rates are effective per-period rates `ρ` with
//! `s = ln(1+ρ)`. Exact decisions need `ρ` rational — then the per-period
//! discount factor `1/(1+ρ)` is rational and the cutoff `(1+ρ)^(−1/q)` is
//! algebraic — while a raw float log rate only ever supports approximate,
//! flagged answers.

use num::{BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::cashflow::CashFlowStream;
use crate::rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiscountError {
    /// Exact compounding is only defined when every relevant time falls on
    /// a whole number of periods inside its benchmark segment.
    #[error("time is not aligned to whole compounding periods")]
    NotAligned,
    /// Benchmark segments must start at 0, strictly increase, and carry
    /// rates above −100%.
    #[error("invalid benchmark path: {0}")]
    InvalidPath(&'static str),
}

/// An interest rate, either exact or float.
#[derive(Debug, Clone, PartialEq)]
pub enum RateSpec {
    /// Effective per-period rate `ρ > −1`, exact. Denotes the logarithmic
    /// rate `ln(1+ρ)`.
    Effective(BigRational),
    /// Logarithmic rate as a float; consumers can only answer
    /// approximately and must flag it.
    LogFloat(f64),
}

impl RateSpec {
    /// The logarithmic rate as a float (exact rates are converted).
    pub fn log_rate_f64(&self) -> f64 {
        match self {
            RateSpec::Effective(rho) => (1.0 + rat::to_f64(rho)).ln(),
            RateSpec::LogFloat(s) => *s,
        }
    }

    /// The exact effective rate, when the rate is given exactly.
    pub fn effective(&self) -> Option<&BigRational> {
        match self {
            RateSpec::Effective(rho) => Some(rho),
            RateSpec::LogFloat(_) => None,
        }
    }
}

/// A realized benchmark-rate path: piecewise-constant effective per-period
/// rates with rational compound factors at aligned times.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkPath {
    segments: Vec<(BigRational, BigRational)>,
}

impl BenchmarkPath {
    /// Build a path from `(start_time, per_period_effective_rate)` segments.
    /// The first segment must start at 0, start times must strictly
    /// increase, and every rate must exceed −100%. The last segment extends
    /// indefinitely.
    pub fn new(segments: Vec<(BigRational, BigRational)>) -> Result<BenchmarkPath, DiscountError> {
        if segments.is_empty() {
            return Err(DiscountError::InvalidPath("no segments"));
        }
        if !segments[0].0.is_zero() {
            return Err(DiscountError::InvalidPath("first segment must start at 0"));
        }
        for w in segments.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(DiscountError::InvalidPath("start times must strictly increase"));
            }
        }
        for (_, rho) in &segments {
            if (BigRational::one() + rho).is_positive() {
                continue;
            }
            return Err(DiscountError::InvalidPath("rate at or below -100%"));
        }
        Ok(BenchmarkPath { segments })
    }

    /// Constant benchmark at a single effective rate.
    pub fn constant(rho: BigRational) -> Result<BenchmarkPath, DiscountError> {
        BenchmarkPath::new(vec![(BigRational::zero(), rho)])
    }

    pub fn segments(&self) -> &[(BigRational, BigRational)] {
        &self.segments
    }

    /// Exact accumulation factor from time 0 to `t`: the product over
    /// segments of `(1+ρᵢ)^(periods spent in segment i)`. Defined only when
    /// every segment span up to `t` covers a whole number of periods.
    pub fn compound_factor(&self, t: &BigRational) -> Result<BigRational, DiscountError> {
        if t.is_negative() {
            return Err(DiscountError::NotAligned);
        }
        let mut factor = BigRational::one();
        for (i, (start, rho)) in self.segments.iter().enumerate() {
            if t <= start {
                break;
            }
            let end = match self.segments.get(i + 1) {
                Some((next, _)) if next < t => next.clone(),
                _ => t.clone(),
            };
            if rho.is_zero() {
                continue; // factor 1 over any span, aligned or not
            }
            let span = &end - start;
            if !span.is_integer() {
                return Err(DiscountError::NotAligned);
            }
            let periods: i64 = (span.numer())
                .try_into()
                .map_err(|_| DiscountError::NotAligned)?;
            let growth = BigRational::one() + rho;
            factor *= rat::pow_i(&growth, periods);
        }
        Ok(factor)
    }

    /// Float accumulation factor for reporting: fractional spans allowed.
    pub fn compound_factor_f64(&self, t: f64) -> f64 {
        let mut factor = 1.0f64;
        for (i, (start, rho)) in self.segments.iter().enumerate() {
            let start = rat::to_f64(start);
            if t <= start {
                break;
            }
            let end = match self.segments.get(i + 1) {
                Some((next, _)) => rat::to_f64(next).min(t),
                None => t,
            };
            factor *= (1.0 + rat::to_f64(rho)).powf(end - start);
        }
        factor
    }
}

/// Net present value at logarithmic rate `s`: `Σ aₖ·e^(−s·tₖ)`, summed in
/// ascending time order. Overflow saturates to ±∞ per IEEE float rules.
pub fn npv_float(x: &CashFlowStream, s: f64) -> f64 {
    x.transactions()
        .iter()
        .map(|(t, a)| rat::to_f64(a) * (-s * rat::to_f64(t)).exp())
        .sum()
}

/// Cumulative discounted partial sums at rate `s`: entry `k` is
/// `Σ_{i≤k} aᵢ·e^(−s·tᵢ)`. The running balance of the lender's position;
/// its last entry equals [`npv_float`].
pub fn discounted_partials_float(x: &CashFlowStream, s: f64) -> Vec<f64> {
    let mut acc = 0.0f64;
    x.transactions()
        .iter()
        .map(|(t, a)| {
            acc += rat::to_f64(a) * (-s * rat::to_f64(t)).exp();
            acc
        })
        .collect()
}

/// Floating-rate transform: each amount is compounded by the realized
/// benchmark factor at its date, `xₖ ↦ xₖ·B(tₖ)`. Exact; every transaction
/// time must be aligned to whole periods of the path.
pub fn float_transform(
    x: &CashFlowStream,
    b: &BenchmarkPath,
) -> Result<CashFlowStream, DiscountError> {
    let mut txs = Vec::with_capacity(x.transactions().len());
    for (t, a) in x.transactions() {
        let factor = b.compound_factor(t)?;
        txs.push((t.clone(), a * factor));
    }
    Ok(CashFlowStream::normalize(txs).expect("times unchanged, factors positive"))
}

/// Reporting-only float variant of the transform; times need not be
/// aligned. Returns `(time, compounded amount)` pairs.
pub fn float_transform_f64(x: &CashFlowStream, b: &BenchmarkPath) -> Vec<(f64, f64)> {
    x.transactions()
        .iter()
        .map(|(t, a)| {
            let tf = rat::to_f64(t);
            (tf, rat::to_f64(a) * b.compound_factor_f64(tf))
        })
        .collect()
}

/// Exact discounted stream `x_ρ`: each amount divided by `(1+ρ)^tₖ`.
/// Requires integer transaction times so the factors stay rational.
pub fn discount_stream(
    x: &CashFlowStream,
    rho: &BigRational,
) -> Result<CashFlowStream, DiscountError> {
    let growth = BigRational::one() + rho;
    assert!(growth.is_positive(), "effective rate must exceed -100%");
    let mut txs = Vec::with_capacity(x.transactions().len());
    for (t, a) in x.transactions() {
        if !t.is_integer() {
            return Err(DiscountError::NotAligned);
        }
        let periods: i64 = t.numer().try_into().map_err(|_| DiscountError::NotAligned)?;
        txs.push((t.clone(), a * rat::pow_i(&growth, -periods)));
    }
    Ok(CashFlowStream::normalize(txs).expect("times unchanged, factors positive"))
}
