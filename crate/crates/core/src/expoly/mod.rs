//! Exact polynomial image of a cash-flow stream and the certified root
//! machinery used to decide sign questions about its NPV profile.
//!
//! For a stream with rational times, let `q` be the least common multiple of
//! the time denominators. The change of variable `u = e^(−s/q)` turns the
//! NPV function `s ↦ Σ x_k e^(−s·t_k)` into an ordinary polynomial
//! `P(u) = Σ x_k u^(t_k·q)` with the whole rate axis mapped to `u ∈ (0, ∞)`
//! (`s ∈ [0, ∞)` maps to `u ∈ (0, 1]`, rates grow as `u` shrinks). Rate-cap
//! questions become sign questions for `P` on `u`-intervals whose endpoint
//! `u* = (1+ρ)^(−1/q)` is algebraic; everything here — squarefree
//! decomposition, Sturm counts, isolating brackets, signs at the cutoff —
//! is decided in exact arithmetic with a certificate.

mod algebraic;
mod intpoly;
mod sturm;

pub(crate) use algebraic::AlgebraicPoint;
pub(crate) use intpoly::IntPoly;
pub(crate) use sturm::SturmChain;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use std::cmp::Ordering;
use thiserror::Error;

use crate::cashflow::CashFlowStream;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    /// Root operations are undefined for the zero polynomial.
    #[error("operation undefined for the zero polynomial")]
    ZeroPoly,
    /// Sturm counts need non-root endpoints; the caller can divide the
    /// offending linear factor out exactly (the public entry points do).
    #[error("interval endpoint is a root of the polynomial")]
    EndpointRoot,
}

/// Exact sign of an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn from_i32(s: i32) -> Sign {
        match s.cmp(&0) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn is_nonpositive(self) -> bool {
        !matches!(self, Sign::Positive)
    }

    pub fn is_nonnegative(self) -> bool {
        !matches!(self, Sign::Negative)
    }
}

/// Parity of a root's multiplicity: only odd-multiplicity roots flip the
/// sign of the polynomial, which is what the cap tests care about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// Polynomial image of a stream: sparse rational coefficients over integer
/// exponents `t_k · q`, together with the time scale `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpPoly {
    q: u32,
    terms: Vec<(u32, BigRational)>,
}

impl ExpPoly {
    /// Time scale: `u = e^(−s/q)`.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Nonzero terms `(exponent, coefficient)`, ascending by exponent.
    pub fn terms(&self) -> &[(u32, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|(e, _)| *e)
    }

    fn from_terms(q: u32, mut terms: Vec<(u32, BigRational)>) -> ExpPoly {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by_key(|(e, _)| *e);
        ExpPoly { q, terms }
    }

    pub(crate) fn to_intpoly(&self) -> IntPoly {
        let terms: Vec<(usize, BigRational)> = self
            .terms
            .iter()
            .map(|(e, c)| (*e as usize, c.clone()))
            .collect();
        IntPoly::from_rational_terms(&terms)
    }
}

/// Encode a stream as its polynomial image; `q` is the lcm of the time
/// denominators. The zero stream encodes as the zero polynomial with
/// `q = 1`.
///
/// Panics if the implied `q` or an exponent overflows `u32` — the time grid
/// of any sane contract is far below that.
pub fn encode(x: &CashFlowStream) -> ExpPoly {
    let mut q = BigInt::one();
    for (t, _) in x.transactions() {
        q = q.lcm(t.denom());
    }
    let q: u32 = (&q).try_into().expect("time denominator lcm overflows u32");
    encode_with_q(x, q)
}

/// Encode with a caller-chosen scale (must be a common multiple of the time
/// denominators). Used to keep prefix streams on the same exponent grid as
/// the full stream.
pub(crate) fn encode_with_q(x: &CashFlowStream, q: u32) -> ExpPoly {
    let terms = x
        .transactions()
        .iter()
        .map(|(t, a)| {
            let e = t.numer() * (BigInt::from(q) / t.denom());
            let e: u32 = (&e).try_into().expect("polynomial exponent overflows u32");
            (e, a.clone())
        })
        .collect();
    ExpPoly::from_terms(q, terms)
}

/// Squarefree decomposition: pairwise-coprime squarefree factors with their
/// multiplicities (ascending). Factors are primitive with positive leading
/// coefficients, so the product of `factor^multiplicity` reconstructs the
/// input up to a nonzero rational constant (negative exactly when the
/// input's leading coefficient is).
pub fn squarefree_decompose(p: &ExpPoly) -> Result<Vec<(ExpPoly, u32)>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPoly);
    }
    let ip = p.to_intpoly();
    // A power of u is part of the factorization too: root at 0.
    let ord = ip.order_at_zero();
    let mut out = Vec::new();
    for (factor, mult) in intpoly::squarefree_decomposition(&ip.shift_down(ord)) {
        out.push((intpoly_to_exppoly(&factor, p.q), mult));
    }
    if ord > 0 {
        let u = ExpPoly::from_terms(p.q, vec![(1, BigRational::one())]);
        out.push((u, ord as u32));
        out.sort_by_key(|(_, m)| *m);
    }
    Ok(out)
}

fn intpoly_to_exppoly(ip: &IntPoly, q: u32) -> ExpPoly {
    let terms = ip
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (e as u32, BigRational::from_integer(c.clone())))
        .collect();
    ExpPoly::from_terms(q, terms)
}

/// Primitive linear polynomial with root `v`: `den·u − num`.
pub(crate) fn linear_with_root(v: &BigRational) -> IntPoly {
    IntPoly::from_coeffs(vec![-v.numer().clone(), v.denom().clone()])
}

/// Divide out of `sf` every linear factor vanishing at `v` (for a
/// squarefree polynomial that is at most one), so interval endpoints become
/// non-roots without any epsilon perturbation.
fn clear_root_at(sf: &IntPoly, v: &BigRational) -> IntPoly {
    let mut sf = sf.clone();
    let lin = linear_with_root(v);
    while !sf.is_zero() && sf.degree() >= 1 && sf.sign_at(v) == 0 {
        sf = intpoly::div_exact(&sf, &lin).primitive();
    }
    sf
}

/// Count the distinct real roots of `p` in the open interval `(a, b)`.
/// Roots exactly at the endpoints are excluded (their linear factors are
/// divided out exactly before counting).
pub fn sturm_count(p: &ExpPoly, a: &BigRational, b: &BigRational) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPoly);
    }
    assert!(a < b, "sturm_count needs a < b");
    let ip = p.to_intpoly();
    let mut sf = squarefree_part(&ip);
    sf = clear_root_at(&sf, a);
    sf = clear_root_at(&sf, b);
    if sf.degree() == 0 {
        return Ok(0);
    }
    Ok(SturmChain::new(&sf).count_open(a, b))
}

fn squarefree_part(ip: &IntPoly) -> IntPoly {
    let ord = ip.order_at_zero();
    let core = ip.shift_down(ord);
    let mut sf = IntPoly::from_i64(&[1]);
    for (factor, _) in intpoly::squarefree_decomposition(&core) {
        sf = sf.mul(&factor);
    }
    if ord > 0 {
        sf = sf.shift_up(1);
    }
    sf
}

/// A certified isolated root: an open rational bracket containing exactly
/// one distinct root, its multiplicity, and the parity that decides whether
/// the polynomial changes sign there.
#[derive(Debug, Clone)]
pub struct RootEntry {
    pub bracket: (BigRational, BigRational),
    pub multiplicity: u32,
    pub parity: Parity,
}

/// Complete root isolation over an interval.
#[derive(Debug, Clone)]
pub struct RootReport {
    /// Disjoint brackets, ascending; together they contain every distinct
    /// root of the polynomial in the requested open interval.
    pub entries: Vec<RootEntry>,
    /// Cauchy bound used for the scan: all real roots lie in
    /// `(−scan_bound, scan_bound)`.
    pub scan_bound: BigRational,
}

/// Isolate all distinct roots of `p` in the open interval `(lo, hi)`.
pub fn isolate_roots(
    p: &ExpPoly,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<RootReport, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPoly);
    }
    assert!(lo < hi, "isolate_roots needs lo < hi");
    let ip = p.to_intpoly();
    let bound = ip.root_bound();
    let roots = isolate_in_interval(&ip, lo, hi);
    let entries = roots
        .into_iter()
        .map(|(point, mult)| {
            let bracket = point.bracket();
            let bracket = if bracket.0 == bracket.1 {
                // Exact rational root: widen to an honest open bracket that
                // still isolates it (stay inside the requested interval).
                widen_exact(&point, lo, hi)
            } else {
                bracket
            };
            RootEntry {
                bracket,
                multiplicity: mult,
                parity: if mult % 2 == 1 { Parity::Odd } else { Parity::Even },
            }
        })
        .collect();
    Ok(RootReport { entries, scan_bound: bound })
}

fn widen_exact(
    point: &AlgebraicPoint,
    lo: &BigRational,
    hi: &BigRational,
) -> (BigRational, BigRational) {
    let v = point.exact_value().expect("degenerate bracket implies exact value");
    let two = BigRational::from_integer(2.into());
    let mut eps = (hi - lo) / BigRational::from_integer(16.into());
    loop {
        let l = (&v - &eps).max(lo.clone());
        let h = (&v + &eps).min(hi.clone());
        if l < v && v < h {
            return (l, h);
        }
        eps /= &two;
    }
}

/// Distinct roots of `ip` in the open interval `(lo, hi)`, ascending, with
/// multiplicities; every point carries its squarefree defining factor and a
/// disjoint isolating bracket (or an exact rational value).
pub(crate) fn isolate_in_interval(
    ip: &IntPoly,
    lo: &BigRational,
    hi: &BigRational,
) -> Vec<(AlgebraicPoint, u32)> {
    debug_assert!(!ip.is_zero());
    let ord = ip.order_at_zero();
    let core = ip.shift_down(ord);
    let mut points: Vec<(AlgebraicPoint, u32)> = Vec::new();
    // Root at 0 contributed by the u^ord factor.
    if ord > 0 && lo.is_negative() && hi.is_positive() {
        points.push((AlgebraicPoint::from_rational(BigRational::zero()), ord as u32));
    }
    for (factor, mult) in intpoly::squarefree_decomposition(&core) {
        let mut f = clear_root_at(&factor, lo);
        f = clear_root_at(&f, hi);
        // Exact roots at the endpoints are outside the open interval; if the
        // endpoint value happens to be a root of the factor elsewhere it was
        // divided out above, which cannot remove interior roots (a
        // squarefree factor vanishes at most once at a given rational).
        if f.degree() == 0 {
            continue;
        }
        let chain = SturmChain::new(&f);
        for (blo, bhi) in chain.isolate(lo, hi) {
            points.push((AlgebraicPoint::from_root(f.clone(), blo, bhi), mult));
        }
    }
    sort_disjoint(&mut points);
    points
}

/// Refine brackets until pairwise disjoint (the underlying roots are
/// distinct), then sort ascending.
fn sort_disjoint(points: &mut [(AlgebraicPoint, u32)]) {
    loop {
        points.sort_by(|a, b| {
            let (alo, _) = a.0.bracket();
            let (blo, _) = b.0.bracket();
            alo.cmp(&blo)
        });
        let mut overlapped = false;
        for i in 1..points.len() {
            let (_, ahi) = points[i - 1].0.bracket();
            let (blo, _) = points[i].0.bracket();
            if ahi > blo {
                points[i - 1].0.refine_once();
                points[i].0.refine_once();
                overlapped = true;
            }
        }
        if !overlapped {
            return;
        }
    }
}

/// Cauchy root bound of the polynomial image: rational `M ≥ 1` with every
/// real root in `(−M, M)`.
pub fn cauchy_root_bound(p: &ExpPoly) -> BigRational {
    p.to_intpoly().root_bound()
}

/// Exact sign of `p(v)` at a rational point.
pub fn sign_at_rational(p: &ExpPoly, v: &BigRational) -> Sign {
    Sign::from_i32(p.to_intpoly().sign_at(v))
}

/// The algebraic cutoff `u* = (1+ρ)^(−1/q)`: the `u`-space image of an
/// effective cap rate `ρ`. Represented by its defining polynomial
/// `(1+ρ)·u^q − 1` together with an isolating bracket; when `(1+ρ)` happens
/// to be an exact q-th power of a rational the point degenerates to that
/// rational (always the case for integer-period streams, `q = 1`).
#[derive(Debug, Clone)]
pub struct AlgebraicCutoff {
    rho: BigRational,
    q: u32,
    defining: IntPoly,
    point: AlgebraicPoint,
}

impl AlgebraicCutoff {
    /// Build the cutoff for effective rate `rho > −1` at time scale `q ≥ 1`.
    pub fn new(rho: BigRational, q: u32) -> AlgebraicCutoff {
        assert!(q >= 1, "time scale q must be positive");
        let growth = BigRational::one() + &rho; // = a/b in lowest terms
        assert!(growth.is_positive(), "effective rate must exceed -100%");
        let a = growth.numer().clone();
        let b = growth.denom().clone();
        // defining: a·u^q − b (positive multiple of (1+ρ)u^q − 1).
        let mut coeffs = vec![BigInt::zero(); q as usize + 1];
        coeffs[0] = -b.clone();
        coeffs[q as usize] = a.clone();
        let defining = IntPoly::from_coeffs(coeffs);

        // u* = (b/a)^(1/q): exact when both sides are perfect q-th powers.
        let rn = b.nth_root(q);
        let rd = a.nth_root(q);
        let point = if rn.pow(q) == b && rd.pow(q) == a {
            AlgebraicPoint::from_rational(BigRational::new(rn, rd))
        } else {
            // The defining polynomial is strictly increasing on (0, ∞), so
            // a sign bracket is easy to grow.
            let two = BigRational::from_integer(2.into());
            let mut lo = BigRational::new(BigInt::one(), BigInt::from(2));
            while defining.sign_at(&lo) >= 0 {
                lo /= &two;
            }
            let mut hi = BigRational::one();
            while defining.sign_at(&hi) <= 0 {
                hi *= &two;
            }
            if lo >= hi {
                lo = &hi / &two;
            }
            AlgebraicPoint::from_root(defining.clone(), lo, hi)
        };
        AlgebraicCutoff { rho, q, defining, point }
    }

    /// The effective rate this cutoff encodes.
    pub fn rho(&self) -> &BigRational {
        &self.rho
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Defining polynomial `(1+ρ)·u^q − 1`, cleared to integers.
    pub fn defining(&self) -> ExpPoly {
        intpoly_to_exppoly(&self.defining, self.q)
    }

    /// Current isolating bracket; degenerate when `u*` is exactly rational.
    pub fn bracket(&self) -> (BigRational, BigRational) {
        self.point.bracket()
    }

    /// Exact rational value of `u*` when it has one.
    pub fn exact_value(&self) -> Option<BigRational> {
        self.point.exact_value()
    }

    pub(crate) fn point(&self) -> &AlgebraicPoint {
        &self.point
    }
}

/// Exact sign of `p(u*)` at the cutoff.
pub fn sign_at_cutoff(p: &ExpPoly, c: &AlgebraicCutoff) -> Sign {
    Sign::from_i32(c.point().sign_of(&p.to_intpoly()))
}

/// Exact comparison of an isolated root of `p` against the cutoff.
///
/// `bracket` must isolate exactly one distinct root of `p` with non-root
/// endpoints; returns how that root compares to `u*`.
pub fn compare_root_to_cutoff(
    p: &ExpPoly,
    bracket: &(BigRational, BigRational),
    c: &AlgebraicCutoff,
) -> Result<Ordering, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPoly);
    }
    let (lo, hi) = bracket;
    assert!(lo < hi, "root bracket must be a nonempty open interval");
    let sf = squarefree_part(&p.to_intpoly());
    if sf.sign_at(lo) == 0 || sf.sign_at(hi) == 0 {
        return Err(PolyError::EndpointRoot);
    }
    let count = SturmChain::new(&sf).count_open(lo, hi);
    assert!(count == 1, "bracket must isolate exactly one root (found {count})");
    let point = AlgebraicPoint::from_root(sf, lo.clone(), hi.clone());
    Ok(point.cmp_point(c.point()))
}
