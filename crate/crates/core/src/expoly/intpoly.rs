//! Dense primitive-integer polynomials: the arithmetic core of the exact
//! kernel.
//!
//! Rational-coefficient polynomials are cleared to integer coefficients once
//! on entry (sign questions are invariant under positive scaling), and all
//! remainder sequences keep coefficients primitive — divided by their
//! integer content — which is what makes Sturm chains on degree-hundreds
//! polynomials affordable.

use num::bigint::BigInt;
use num::{BigRational, Integer, One, Signed, Zero};

/// Coefficients ascend by exponent; the vector never ends in a zero, so the
/// zero polynomial is the empty vector and `coeffs.len() - 1` is the degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct IntPoly {
    pub(crate) coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Clear denominators of sparse rational terms `(exponent, coefficient)`
    /// and reduce to the primitive part. Sign is preserved.
    pub fn from_rational_terms(terms: &[(usize, BigRational)]) -> Self {
        if terms.is_empty() {
            return IntPoly::zero();
        }
        let mut lcm = BigInt::one();
        for (_, c) in terms {
            lcm = lcm.lcm(c.denom());
        }
        let deg = terms.iter().map(|(e, _)| *e).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for (e, c) in terms {
            coeffs[*e] += c.numer() * (&lcm / c.denom());
        }
        Self::from_coeffs(coeffs).primitive()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for constants and for the zero polynomial (callers guard
    /// with `is_zero` where the distinction matters).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    /// Number of trailing `u^k` factors: the multiplicity of the root at 0.
    pub fn order_at_zero(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divide out `u^k` (requires the low-order coefficients to be zero).
    pub fn shift_down(&self, k: usize) -> IntPoly {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        IntPoly { coeffs: self.coeffs[k.min(self.coeffs.len())..].to_vec() }
    }

    /// Multiply by `u^k`.
    pub fn shift_up(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] -= c;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn mul_int(&self, k: &BigInt) -> IntPoly {
        if k.is_zero() {
            return IntPoly::zero();
        }
        IntPoly { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Positive gcd of all coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide by the content, preserving sign.
    pub fn primitive(&self) -> IntPoly {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntPoly { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    /// Sign of `p(num/den)` for a reduced rational with `den > 0`, computed
    /// exactly as the sign of the integer `Σ c_i · num^i · den^(deg−i)`.
    pub fn sign_at(&self, v: &BigRational) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let num = v.numer();
        let den = v.denom();
        let n = self.coeffs.len() - 1;
        let mut acc = self.coeffs[n].clone();
        let mut den_pow = BigInt::one();
        for i in (0..n).rev() {
            den_pow *= den;
            acc = acc * num + &self.coeffs[i] * &den_pow;
        }
        match acc.sign() {
            num::bigint::Sign::Minus => -1,
            num::bigint::Sign::NoSign => 0,
            num::bigint::Sign::Plus => 1,
        }
    }

    /// Exact rational value `p(v)`.
    #[cfg(test)]
    pub fn eval(&self, v: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * v + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Interval extension of `p` over `[lo, hi]` (requires `lo ≤ hi`):
    /// a rational interval guaranteed to contain `p(v)` for every `v` in
    /// the box. Plain Horner with interval arithmetic; the width shrinks
    /// linearly with the box, which is all the cutoff-sign refinement needs.
    pub fn eval_interval(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        debug_assert!(lo <= hi);
        let mut alo = BigRational::zero();
        let mut ahi = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            let products = [&alo * lo, &alo * hi, &ahi * lo, &ahi * hi];
            let mut nlo = products[0].clone();
            let mut nhi = products[0].clone();
            for p in &products[1..] {
                if *p < nlo {
                    nlo = p.clone();
                }
                if *p > nhi {
                    nhi = p.clone();
                }
            }
            let c = BigRational::from_integer(c.clone());
            alo = nlo + &c;
            ahi = nhi + c;
        }
        (alo, ahi)
    }

    /// Cauchy-style bound: every real root lies in `(−M, M)` with
    /// `M = 1 + max_i |c_i| / |c_deg|`. Returns 1 for constants.
    pub fn root_bound(&self) -> BigRational {
        if self.coeffs.len() <= 1 {
            return BigRational::one();
        }
        let lead = self.leading().abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap();
        BigRational::one() + BigRational::new(max, lead)
    }
}

/// Remainder of `f` by `g` scaled by an unknown *positive* constant
/// (fraction-free pseudo-division with the multiplier sign corrected).
pub(crate) fn pseudo_rem(f: &IntPoly, g: &IntPoly) -> IntPoly {
    debug_assert!(!g.is_zero());
    let lg = g.leading().clone();
    let mut r = f.clone();
    let mut steps = 0u32;
    while !r.is_zero() && r.degree() >= g.degree() {
        let k = r.degree() - g.degree();
        let lr = r.leading().clone();
        r = r.mul_int(&lg).sub(&g.shift_up(k).mul_int(&lr));
        steps += 1;
    }
    // r now equals lg^steps · (f mod g); flip if the multiplier was negative.
    if lg.is_negative() && steps % 2 == 1 {
        r = r.neg();
    }
    r
}

/// Primitive polynomial gcd via the primitive pseudo-remainder sequence,
/// normalized to a positive leading coefficient.
pub(crate) fn gcd(f: &IntPoly, g: &IntPoly) -> IntPoly {
    let mut a = f.primitive();
    let mut b = g.primitive();
    while !b.is_zero() {
        let r = pseudo_rem(&a, &b).primitive();
        a = b;
        b = r;
    }
    if !a.is_zero() && a.leading().is_negative() {
        a = a.neg();
    }
    a
}

/// Exact quotient `f / g`; callers must guarantee divisibility (holds for
/// every division performed by the squarefree decomposition).
pub(crate) fn div_exact(f: &IntPoly, g: &IntPoly) -> IntPoly {
    debug_assert!(!g.is_zero());
    if f.is_zero() {
        return IntPoly::zero();
    }
    debug_assert!(f.degree() >= g.degree());
    let mut rem = f.clone();
    let mut q = vec![BigInt::zero(); f.degree() - g.degree() + 1];
    while !rem.is_zero() && rem.degree() >= g.degree() {
        let k = rem.degree() - g.degree();
        let (c, leftover) = rem.leading().div_rem(g.leading());
        debug_assert!(leftover.is_zero(), "inexact polynomial division");
        rem = rem.sub(&g.shift_up(k).mul_int(&c));
        q[k] = c;
    }
    debug_assert!(rem.is_zero(), "inexact polynomial division");
    IntPoly::from_coeffs(q)
}

/// Yun's squarefree decomposition: pairwise-coprime squarefree factors with
/// their multiplicities, multiplicity ascending. The product of
/// `factor^multiplicity` equals the input up to a positive rational
/// constant; factors are primitive with positive leading coefficient.
pub(crate) fn squarefree_decomposition(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    debug_assert!(!f.is_zero());
    let mut f = f.primitive();
    if f.leading().is_negative() {
        f = f.neg();
    }
    if f.degree() == 0 {
        return Vec::new();
    }
    let fp = f.derivative();
    let g = gcd(&f, &fp);
    if g.degree() == 0 {
        return vec![(f, 1)];
    }
    // The running values must satisfy Yun's derivative identity exactly, so
    // no content is stripped mid-loop. Every division below is exact over
    // the integers: the divisor is primitive and divides over the rationals
    // (Gauss's lemma). `a` stays primitive with positive leading
    // coefficient throughout ⇒ so does every emitted factor.
    let mut out = Vec::new();
    let mut a = div_exact(&f, &g);
    let mut b = div_exact(&fp, &g);
    let mut mult = 1u32;
    loop {
        let c = b.sub(&a.derivative());
        if c.is_zero() {
            if a.degree() >= 1 {
                out.push((a, mult));
            }
            break;
        }
        let d = gcd(&a, &c);
        if d.degree() >= 1 {
            out.push((d.clone(), mult));
        }
        a = div_exact(&a, &d);
        b = div_exact(&c, &d);
        mult += 1;
        if a.degree() == 0 {
            break;
        }
    }
    out
}
