//! Input parsing: loan documents, exact number strings, and percent rates.
//!
//! Amounts and times are parsed as exact rationals — a decimal string like
//! "0.1" means one tenth, never the nearest binary float. Dates under the
//! ACT/365F convention map to rational years as (days since the earliest
//! date in the document) / 365.

use num::{BigInt, BigRational, One, Zero};
use serde::Deserialize;

use ratecap_core::cashflow::CashFlowStream;

/// A loan document as screened: a list of dated payments, positive toward
/// the holder of the stream.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoanDocument {
    /// Informational tag echoed in text output; no computational role.
    #[serde(default)]
    pub currency: Option<String>,
    /// How the `t` fields are written.
    #[serde(default)]
    pub convention: Convention,
    pub transactions: Vec<TransactionDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransactionDoc {
    /// Time of the payment: rational periods or a date, per the convention.
    pub t: String,
    /// Exact decimal or fraction amount; positive means money received.
    pub amount: String,
}

/// Time notation used by a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
pub enum Convention {
    /// `t` is a rational number of periods: "0", "1/2", "366/365", "0.25".
    #[default]
    RationalTimes,
    /// `t` is a calendar date "YYYY-MM-DD"; times become rational years
    /// as (days since the earliest date)/365.
    #[serde(rename = "ACT365F")]
    Act365F,
}

impl LoanDocument {
    /// Normalize the document into a cash-flow stream.
    pub fn to_stream(&self) -> Result<CashFlowStream, String> {
        let mut txs = Vec::with_capacity(self.transactions.len());
        match self.convention {
            Convention::RationalTimes => {
                for tx in &self.transactions {
                    txs.push((parse_exact(&tx.t)?, parse_exact(&tx.amount)?));
                }
            }
            Convention::Act365F => {
                let days: Vec<i64> = self
                    .transactions
                    .iter()
                    .map(|tx| parse_date(&tx.t))
                    .collect::<Result<_, _>>()?;
                let epoch = days.iter().copied().min().unwrap_or(0);
                for (tx, day) in self.transactions.iter().zip(&days) {
                    let t = BigRational::new(BigInt::from(day - epoch), BigInt::from(365));
                    txs.push((t, parse_exact(&tx.amount)?));
                }
            }
        }
        CashFlowStream::normalize(txs).map_err(|e| e.to_string())
    }
}

/// Parse an exact rational: a decimal string, optionally as a fraction
/// "numer/denom" of two decimal strings.
pub fn parse_exact(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_decimal(n)?;
        let d = parse_decimal(d)?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(n / d);
    }
    parse_decimal(s)
}

/// Parse a percent string like "60%", "7.5%", or "121/2%" into the exact
/// effective rate it denotes; a missing `%` suffix is tolerated. Rates at
/// or below −100% are rejected.
pub fn parse_percent(s: &str) -> Result<BigRational, String> {
    let trimmed = s.trim();
    let body = trimmed.strip_suffix('%').unwrap_or(trimmed);
    let rho = parse_exact(body)? / BigRational::from_integer(100.into());
    if rho <= -BigRational::one() {
        return Err(format!("rate {s:?} is not above -100%"));
    }
    Ok(rho)
}

fn parse_decimal(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("empty number in {s:?}"));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(format!("malformed number {s:?}"));
    }
    let digits: String = [int_part, frac_part].concat();
    let numer: BigInt = digits.parse().map_err(|_| format!("malformed number {s:?}"))?;
    let denom = BigInt::from(10u8).pow(frac_part.len() as u32);
    let v = BigRational::new(numer, denom);
    Ok(if negative { -v } else { v })
}

/// Day number of a proleptic-Gregorian "YYYY-MM-DD" date (epoch-agnostic:
/// only differences are used).
fn parse_date(s: &str) -> Result<i64, String> {
    let parts: Vec<&str> = s.trim().split('-').collect();
    let [y, m, d] = parts.as_slice() else {
        return Err(format!("malformed date {s:?}, want YYYY-MM-DD"));
    };
    let y: i64 = y.parse().map_err(|_| format!("malformed date {s:?}"))?;
    let m: u32 = m.parse().map_err(|_| format!("malformed date {s:?}"))?;
    let d: u32 = d.parse().map_err(|_| format!("malformed date {s:?}"))?;
    if !(1..=12).contains(&m) || d < 1 || d > days_in_month(y, m) {
        return Err(format!("invalid calendar date {s:?}"));
    }
    Ok(days_from_civil(y, m, d))
}

fn days_in_month(y: i64, m: u32) -> u32 {
    match m {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        _ => {
            if y % 4 == 0 && (y % 100 != 0 || y % 400 == 0) {
                29
            } else {
                28
            }
        }
    }
}

/// Days since 1970-01-01 for a civil date (standard era/year-of-era
/// decomposition of the Gregorian calendar).
fn days_from_civil(y: i64, m: u32, d: u32) -> i64 {
    let y = if m <= 2 { y - 1 } else { y };
    let era = if y >= 0 { y } else { y - 399 } / 400;
    let yoe = y - era * 400;
    let mp = i64::from((m + 9) % 12);
    let doy = (153 * mp + 2) / 5 + i64::from(d) - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}
