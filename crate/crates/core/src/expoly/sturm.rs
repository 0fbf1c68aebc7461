//! Sturm chains and certified root isolation for squarefree integer
//! polynomials.
//!
//! The chain is the classic negated remainder sequence, kept primitive so
//! coefficients follow subresultant-size bounds instead of exploding. Sign
//! variation counts at two non-root points bound the number of distinct
//! roots between them; recursive bisection then produces disjoint open
//! brackets with exactly one root each, and plain sign bisection refines a
//! bracket to any requested width. Exact rational hits during bisection are
//! kept exact — the bracket is re-centered around the hit, never nudged by
//! an epsilon.

use num::BigRational;

use super::intpoly::{pseudo_rem, IntPoly};

/// Sturm chain of a squarefree polynomial.
#[derive(Debug, Clone)]
pub(crate) struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    /// Build the chain for a nonzero squarefree polynomial.
    pub fn new(sf: &IntPoly) -> Self {
        debug_assert!(!sf.is_zero());
        let mut chain = vec![sf.primitive()];
        let d = sf.derivative();
        if !d.is_zero() {
            chain.push(d.primitive());
            while chain.last().unwrap().degree() > 0 {
                let n = chain.len();
                let r = pseudo_rem(&chain[n - 2], &chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(r.neg().primitive());
            }
        }
        SturmChain { chain }
    }

    pub fn poly(&self) -> &IntPoly {
        &self.chain[0]
    }

    fn variations_at(&self, v: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0i32;
        for p in &self.chain {
            let s = p.sign_at(v);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct roots in the open interval `(a, b)`.
    /// Requires `a < b` and both endpoints non-roots.
    pub fn count_open(&self, a: &BigRational, b: &BigRational) -> usize {
        debug_assert!(a < b);
        debug_assert!(self.poly().sign_at(a) != 0 && self.poly().sign_at(b) != 0);
        self.variations_at(a) - self.variations_at(b)
    }

    /// Isolate every root in the open interval `(a, b)` (non-root
    /// endpoints): returns disjoint open brackets, ascending, with exactly
    /// one root each and a strict sign change across each bracket.
    pub fn isolate(&self, a: &BigRational, b: &BigRational) -> Vec<(BigRational, BigRational)> {
        let mut out = Vec::new();
        self.isolate_rec(a.clone(), b.clone(), &mut out);
        out
    }

    fn isolate_rec(
        &self,
        a: BigRational,
        b: BigRational,
        out: &mut Vec<(BigRational, BigRational)>,
    ) {
        let n = self.count_open(&a, &b);
        if n == 0 {
            return;
        }
        if n == 1 {
            out.push((a, b));
            return;
        }
        let mid = (&a + &b) / BigRational::from_integer(2.into());
        if self.poly().sign_at(&mid) == 0 {
            // The midpoint is an exact root: carve out a bracket around it
            // containing no other root, then recurse on both sides.
            let mut eps = (&b - &a) / BigRational::from_integer(4.into());
            loop {
                let lo = &mid - &eps;
                let hi = &mid + &eps;
                if self.poly().sign_at(&lo) != 0
                    && self.poly().sign_at(&hi) != 0
                    && self.count_open(&lo, &hi) == 1
                {
                    self.isolate_rec(a, lo.clone(), out);
                    out.push((lo, hi.clone()));
                    self.isolate_rec(hi, b, out);
                    return;
                }
                eps /= BigRational::from_integer(2.into());
            }
        }
        self.isolate_rec(a, mid.clone(), out);
        self.isolate_rec(mid, b, out);
    }
}

/// Shrink an isolating bracket of `sf` (squarefree; strict sign change
/// across the bracket) until `hi − lo ≤ width`, by sign bisection. An exact
/// rational hit re-centers the bracket around the root.
#[cfg(test)]
pub(crate) fn refine_bracket(
    sf: &IntPoly,
    bracket: (BigRational, BigRational),
    width: &BigRational,
) -> (BigRational, BigRational) {
    use num::Signed;
    debug_assert!(width.is_positive());
    let (mut lo, mut hi) = bracket;
    let s_lo = sf.sign_at(&lo);
    debug_assert!(s_lo != 0 && sf.sign_at(&hi) == -s_lo);
    let two = BigRational::from_integer(2.into());
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / &two;
        let s_mid = sf.sign_at(&mid);
        if s_mid == 0 {
            // Root found exactly at `mid`: re-center. Any eps below both the
            // target width and the distance to the old endpoints keeps the
            // bracket isolating with a strict sign change.
            let mut eps = width / &two;
            let quarter = (&hi - &lo) / BigRational::from_integer(4.into());
            if eps > quarter {
                eps = quarter;
            }
            return (&mid - &eps, mid + eps);
        }
        if s_mid == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
