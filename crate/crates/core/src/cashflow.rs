//! Discrete cash-flow streams with exact rational times and amounts.
//!
//! A stream is a finite list of dated transactions `(t, amount)` with
//! `t ≥ 0`; positive amounts are inflows for the holder of the stream,
//! negative amounts are outflows. Streams form a rational vector space
//! (transaction-wise combination and positive scaling), and the cumulative
//! profile `x(t)` — everything dated at or before `t` — induces the
//! dominance order the cap rules are built on: `x ≤ y` when every cumulative
//! partial of `x − y` is nonpositive, i.e. `y` is never behind `x` in money
//! received.

use num::{BigRational, Signed, Zero};
use thiserror::Error;

use crate::expoly::Sign;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StreamError {
    /// Transaction times must be nonnegative rationals.
    #[error("transaction times must be nonnegative")]
    InvalidTime,
    /// Scaling is only defined for strictly positive factors (the dominance
    /// order and the legality cones are preserved only under those).
    #[error("scale factor must be strictly positive")]
    InvalidScale,
}

/// A normalized cash-flow stream: transactions sorted by time, times
/// pairwise distinct, amounts nonzero. The empty stream is the zero vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CashFlowStream {
    txs: Vec<(BigRational, BigRational)>,
}

impl CashFlowStream {
    /// The zero stream (no transactions).
    pub fn zero() -> Self {
        CashFlowStream { txs: Vec::new() }
    }

    /// Build a stream from raw `(time, amount)` pairs: sorts by time, merges
    /// transactions at equal times, and drops zero amounts. Fails if any
    /// time is negative.
    pub fn normalize(raw: Vec<(BigRational, BigRational)>) -> Result<Self, StreamError> {
        if raw.iter().any(|(t, _)| t.is_negative()) {
            return Err(StreamError::InvalidTime);
        }
        let mut entries = raw;
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut txs: Vec<(BigRational, BigRational)> = Vec::with_capacity(entries.len());
        for (t, a) in entries {
            match txs.last_mut() {
                Some((lt, la)) if *lt == t => *la += a,
                _ => txs.push((t, a)),
            }
        }
        txs.retain(|(_, a)| !a.is_zero());
        Ok(CashFlowStream { txs })
    }

    /// The normalized transactions, ascending by time.
    pub fn transactions(&self) -> &[(BigRational, BigRational)] {
        &self.txs
    }

    pub fn is_zero(&self) -> bool {
        self.txs.is_empty()
    }

    /// Transaction-wise sum of two streams.
    pub fn combine(&self, other: &CashFlowStream) -> CashFlowStream {
        let mut raw = self.txs.clone();
        raw.extend(other.txs.iter().cloned());
        // Inputs are valid streams, so renormalization cannot fail.
        CashFlowStream::normalize(raw).expect("combining valid streams")
    }

    /// Multiply every amount by a strictly positive rational factor.
    pub fn scale(&self, factor: &BigRational) -> Result<CashFlowStream, StreamError> {
        if !factor.is_positive() {
            return Err(StreamError::InvalidScale);
        }
        Ok(CashFlowStream {
            txs: self.txs.iter().map(|(t, a)| (t.clone(), a * factor)).collect(),
        })
    }

    /// Flip the sign of every amount (swap the two parties of the contract).
    pub fn negate(&self) -> CashFlowStream {
        CashFlowStream {
            txs: self.txs.iter().map(|(t, a)| (t.clone(), -a)).collect(),
        }
    }

    /// Cumulative value `x(t)`: the sum of all amounts dated `≤ t`.
    pub fn cumulative_at(&self, t: &BigRational) -> Result<BigRational, StreamError> {
        if t.is_negative() {
            return Err(StreamError::InvalidTime);
        }
        Ok(self
            .txs
            .iter()
            .take_while(|(tt, _)| tt <= t)
            .map(|(_, a)| a)
            .sum())
    }

    /// Dominance test `self ≤ other`: every cumulative partial of
    /// `self − other` is nonpositive, i.e. at every moment the holder of
    /// `self` has received at most what the holder of `other` has.
    pub fn dominates(&self, other: &CashFlowStream) -> bool {
        let diff = self.combine(&other.negate());
        let mut running = BigRational::zero();
        for (_, a) in diff.txs.iter() {
            running += a;
            if running.is_positive() {
                return false;
            }
        }
        true
    }

    /// Largest transaction time, or `None` for the zero stream.
    pub fn maturity(&self) -> Option<&BigRational> {
        self.txs.last().map(|(t, _)| t)
    }

    /// Sum of all amounts, `x(+∞)`.
    pub fn total(&self) -> BigRational {
        self.txs.iter().map(|(_, a)| a).sum()
    }

    /// Sign of the earliest payment; `Zero` for the zero stream. This is
    /// also the sign of the NPV as the discount rate goes to +∞, which is
    /// why several legality tests branch on it.
    pub fn earliest_sign(&self) -> Sign {
        match self.txs.first() {
            None => Sign::Zero,
            Some((_, a)) if a.is_positive() => Sign::Positive,
            Some(_) => Sign::Negative,
        }
    }
}
