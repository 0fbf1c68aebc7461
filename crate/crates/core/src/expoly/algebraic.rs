//! Exact arithmetic at algebraic points: real numbers represented by a
//! squarefree defining polynomial plus an isolating rational bracket.
//!
//! Two operations carry the whole decision engine: the exact sign of an
//! integer polynomial at such a point, and the exact comparison of two such
//! points. Zero/equality cases are settled algebraically through a gcd (a
//! shared root is a root of the gcd inside the bracket intersection); strict
//! cases are settled by refining brackets until interval arithmetic or
//! disjointness decides. No epsilon ever enters.

use std::cell::RefCell;
use std::cmp::Ordering;

use num::{BigRational, Signed};

use super::intpoly::{gcd, IntPoly};
use super::sturm::SturmChain;

/// A real algebraic number: either an exact rational, or the unique root of
/// a squarefree integer polynomial inside an open bracket with a strict
/// sign change. Brackets shrink lazily as comparisons demand; interior
/// mutability keeps the refinement cached across calls.
#[derive(Debug, Clone)]
pub(crate) struct AlgebraicPoint {
    poly: Option<IntPoly>,
    bracket: RefCell<(BigRational, BigRational)>,
    exact: RefCell<Option<BigRational>>,
}

impl AlgebraicPoint {
    pub fn from_rational(v: BigRational) -> Self {
        AlgebraicPoint {
            poly: None,
            bracket: RefCell::new((v.clone(), v.clone())),
            exact: RefCell::new(Some(v)),
        }
    }

    /// Wrap the unique root of squarefree `poly` inside `(lo, hi)`.
    pub fn from_root(poly: IntPoly, lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo < hi);
        debug_assert!(poly.sign_at(&lo) != 0 && poly.sign_at(&hi) == -poly.sign_at(&lo));
        AlgebraicPoint {
            poly: Some(poly),
            bracket: RefCell::new((lo, hi)),
            exact: RefCell::new(None),
        }
    }

    /// Exact rational value, if one is known (either by construction or
    /// because a bisection midpoint hit the root).
    pub fn exact_value(&self) -> Option<BigRational> {
        self.exact.borrow().clone()
    }

    /// Current enclosing interval; degenerate `(v, v)` for exact points.
    pub fn bracket(&self) -> (BigRational, BigRational) {
        if let Some(v) = self.exact_value() {
            return (v.clone(), v);
        }
        self.bracket.borrow().clone()
    }

    /// Halve the bracket once. An exact midpoint hit promotes the point to
    /// rational. No-op for already-exact points.
    pub fn refine_once(&self) {
        if self.exact.borrow().is_some() {
            return;
        }
        let poly = self.poly.as_ref().expect("non-exact point has a defining polynomial");
        let (lo, hi) = self.bracket.borrow().clone();
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        match poly.sign_at(&mid) {
            0 => {
                *self.exact.borrow_mut() = Some(mid);
            }
            s if s == poly.sign_at(&lo) => {
                *self.bracket.borrow_mut() = (mid, hi);
            }
            _ => {
                *self.bracket.borrow_mut() = (lo, mid);
            }
        }
    }

    /// Exact sign of `p` at this point.
    pub fn sign_of(&self, p: &IntPoly) -> i32 {
        if p.is_zero() {
            return 0;
        }
        if let Some(v) = self.exact_value() {
            return p.sign_at(&v);
        }
        let poly = self.poly.as_ref().unwrap();
        // Zero case exactly: p vanishes here iff the point is a shared root
        // of p and its defining polynomial, i.e. a root of their gcd inside
        // the bracket.
        let g = gcd(p, poly);
        if g.degree() >= 1 {
            let (lo, hi) = self.bracket();
            // Bracket endpoints are non-roots of the defining polynomial and
            // g divides it, so the endpoints are safe for a Sturm count.
            if SturmChain::new(&g).count_open(&lo, &hi) >= 1 {
                return 0;
            }
        }
        // Strictly nonzero: shrink the bracket until interval arithmetic
        // pins the sign.
        loop {
            let (lo, hi) = self.bracket();
            let (vlo, vhi) = p.eval_interval(&lo, &hi);
            if vlo.is_positive() {
                return 1;
            }
            if vhi.is_negative() {
                return -1;
            }
            self.refine_once();
            if let Some(v) = self.exact_value() {
                return p.sign_at(&v);
            }
        }
    }

    /// Exact comparison against a rational.
    pub fn cmp_rational(&self, v: &BigRational) -> Ordering {
        if let Some(e) = self.exact_value() {
            return e.cmp(v);
        }
        let poly = self.poly.as_ref().unwrap();
        let (lo, hi) = self.bracket();
        if *v <= lo {
            return Ordering::Greater;
        }
        if *v >= hi {
            return Ordering::Less;
        }
        match poly.sign_at(v) {
            0 => {
                // The unique root in the bracket is v itself.
                *self.exact.borrow_mut() = Some(v.clone());
                Ordering::Equal
            }
            s if s == poly.sign_at(&lo) => Ordering::Greater, // root is beyond v
            _ => Ordering::Less,
        }
    }

    /// Exact comparison of two algebraic points.
    pub fn cmp_point(&self, other: &AlgebraicPoint) -> Ordering {
        loop {
            if let Some(v) = self.exact_value() {
                return other.cmp_rational(&v).reverse();
            }
            if let Some(v) = other.exact_value() {
                return self.cmp_rational(&v);
            }
            let (alo, ahi) = self.bracket();
            let (blo, bhi) = other.bracket();
            if ahi <= blo {
                return Ordering::Less;
            }
            if bhi <= alo {
                return Ordering::Greater;
            }
            // Overlapping brackets: equal iff the two points are a common
            // root, i.e. the gcd of the defining polynomials has a root in
            // the bracket intersection. Intersection endpoints are endpoints
            // of one of the brackets, hence non-roots of the corresponding
            // defining polynomial, hence non-roots of the gcd.
            let pa = self.poly.as_ref().unwrap();
            let pb = other.poly.as_ref().unwrap();
            let g = gcd(pa, pb);
            if g.degree() >= 1 {
                let ilo = alo.clone().max(blo.clone());
                let ihi = ahi.clone().min(bhi.clone());
                if ilo < ihi && SturmChain::new(&g).count_open(&ilo, &ihi) >= 1 {
                    return Ordering::Equal;
                }
            }
            // Distinct points: refine both until the brackets separate.
            self.refine_once();
            other.refine_once();
        }
    }

    /// Float approximation for reporting: refine to ~60 bits of relative
    /// precision first.
    pub fn to_f64(&self) -> f64 {
        if let Some(v) = self.exact_value() {
            return crate::rat::to_f64(&v);
        }
        for _ in 0..220 {
            if self.exact.borrow().is_some() {
                break;
            }
            let (lo, hi) = self.bracket();
            let scale = lo.abs().max(hi.abs());
            if (&hi - &lo) * BigRational::from_integer(num::BigInt::from(2u8).pow(60)) <= scale {
                break;
            }
            self.refine_once();
        }
        let (lo, hi) = self.bracket();
        crate::rat::to_f64(&((lo + hi) / BigRational::from_integer(2.into())))
    }
}
