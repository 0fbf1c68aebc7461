//! Acceptance suite: one check per shipping criterion, each printing a
//! single `acceptance N (...): PASS`/`FAIL` line. Tolerances and runtime
//! budgets are pinned in the code next to the checks they guard.
//!
//! The criteria run sequentially inside one test so the runtime budgets are
//! not distorted by parallel sibling tests, and so every criterion reports
//! even when an earlier one fails.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ratecap_core::caps::{self, Decision, Fault, Witness};
use ratecap_core::cashflow::CashFlowStream;
use ratecap_core::discounting::{self, BenchmarkPath, RateSpec};
use ratecap_core::expoly::{self, AlgebraicCutoff, Sign};
use ratecap_core::irr::{self, IrrValue, Refinement, StreamClass};
use ratecap_core::oracle::{self, OracleVerdict, ScanConfig};

/// Fall out of the current criterion with a diagnostic when a check fails.
macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !($cond) {
            return Err(format!($($arg)+));
        }
    };
}

#[test]
fn acceptance() {
    let criteria: [(u32, &str, fn() -> Result<(), String>); 8] = [
        (1, "two-payment loan: certified rate, cap boundary", criterion_plain_loan),
        (2, "application-fee loan: no conventional rate, every cap violated", criterion_application_fee),
        (3, "refund loan: irregular class, certified violation, dominance", criterion_refund_loan),
        (4, "line of credit: rates, root brackets, threshold, legality", criterion_line_of_credit),
        (5, "balanced swap: joint fault assignment", criterion_joint_fault),
        (6, "random streams: ordering, closure, stability, rate consistency", criterion_random_streams),
        (7, "root-isolation kernel against the float scan", criterion_sturm_kernel),
        (8, "floating-rate transform identity", criterion_float_transform),
    ];
    let mut failures = Vec::new();
    for (n, name, run) in criteria {
        match run() {
            Ok(()) => println!("acceptance {n} ({name}): PASS"),
            Err(why) => {
                println!("acceptance {n} ({name}): FAIL — {why}");
                failures.push(n);
            }
        }
    }
    assert!(failures.is_empty(), "failed acceptance criteria: {failures:?}");
}

fn br(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn stream(raw: Vec<(BigRational, BigRational)>) -> CashFlowStream {
    CashFlowStream::normalize(raw).unwrap()
}

fn istream(txs: &[(i64, i64)]) -> CashFlowStream {
    stream(txs.iter().map(|&(t, a)| (br(t, 1), br(a, 1))).collect())
}

/// Criterion 1: the two-payment loan −100 now / +170 in one period has the
/// exact certified rate 70% and flips from illegal to legal exactly at that
/// cap. Budget: 1 ms.
fn criterion_plain_loan() -> Result<(), String> {
    let loan = istream(&[(0, -100), (1, 170)]);
    // Warm pass so the budget measures the computation, not first-touch
    // allocation.
    let _ = irr::irr(&loan);

    let start = Instant::now();
    let rate = irr::irr(&loan);
    let at_60 = caps::in_cap_plus(&loan, &RateSpec::Effective(br(3, 5)));
    let at_70 = caps::in_cap_plus(&loan, &RateSpec::Effective(br(7, 10)));
    let elapsed = start.elapsed();

    let Some(IrrValue::Finite { u_bracket, effective_rate, .. }) = rate else {
        return Err(format!("expected a finite rate, got {rate:?}"));
    };
    let root = br(10, 17);
    ensure!(
        u_bracket.0 <= root && root <= u_bracket.1,
        "certified bracket {u_bracket:?} misses the exact root 10/17"
    );
    ensure!(
        (effective_rate - 0.70).abs() <= 1e-12,
        "effective rate {effective_rate} is not 0.70"
    );
    ensure!(!at_60.legal, "loan must be illegal under a 60% cap");
    ensure!(at_70.legal, "loan must be legal at its own 70% rate (boundary)");
    ensure!(
        elapsed < Duration::from_millis(1),
        "runtime {elapsed:?} exceeds the 1 ms budget"
    );
    Ok(())
}

/// Criterion 2: the application-fee loan (+1 fee now, −100 lent a day
/// later, +170 repaid a year after that) has no conventional rate, an
/// infinite weakest-cap threshold, and violates every cap. The exact
/// pipeline runs at polynomial degree 366. Budget: 1 s.
fn criterion_application_fee() -> Result<(), String> {
    let fee_loan = stream(vec![
        (br(0, 1), br(1, 1)),
        (br(1, 365), br(-100, 1)),
        (br(366, 365), br(170, 1)),
    ]);

    let start = Instant::now();
    let class = irr::classify_stream(&fee_loan);
    let threshold = irr::refinement_plus(&fee_loan);
    let caps_tried = [br(1, 10), br(3, 5), br(10, 1)];
    let mut verdicts = Vec::new();
    for rho in &caps_tried {
        verdicts.push(caps::in_cap_plus(&fee_loan, &RateSpec::Effective(rho.clone())));
    }
    let elapsed = start.elapsed();

    ensure!(
        class != StreamClass::Conventional,
        "fee loan must not have a conventional rate, classified {class:?}"
    );
    ensure!(
        threshold == Refinement::PlusInfinity,
        "weakest-cap threshold must be +∞, got {threshold:?}"
    );
    for (rho, verdict) in caps_tried.iter().zip(&verdicts) {
        ensure!(!verdict.legal, "fee loan must be illegal at cap {rho}");
    }
    ensure!(
        elapsed < Duration::from_secs(1),
        "runtime {elapsed:?} exceeds the 1 s budget"
    );
    Ok(())
}

/// Criterion 3: the refund loan (plain loan plus a 1-unit refund a day
/// after the year) has no internal rate at all, is still certifiably
/// illegal at 60% with an exact positive sample, and is dominated by the
/// plain loan.
fn criterion_refund_loan() -> Result<(), String> {
    let refund = stream(vec![
        (br(0, 1), br(-100, 1)),
        (br(1, 1), br(170, 1)),
        (br(366, 365), br(-1, 1)),
    ]);
    let plain = istream(&[(0, -100), (1, 170)]);

    let class = irr::classify_stream(&refund);
    ensure!(
        !class.has_finite_irr(),
        "refund loan must not have a unique rate, classified {class:?}"
    );
    ensure!(
        irr::irr(&refund).is_none(),
        "refund loan must have no internal rate"
    );

    let verdict = caps::in_cap_plus(&refund, &RateSpec::Effective(br(3, 5)));
    ensure!(!verdict.legal, "refund loan must be illegal at a 60% cap");
    let Witness::ViolatingRateBracket { u_lo, u_hi, sample_u, .. } = &verdict.witness else {
        return Err(format!("expected a violating rate band, got {:?}", verdict.witness));
    };
    ensure!(
        u_lo < sample_u && sample_u < u_hi,
        "witness sample must lie inside the band"
    );
    ensure!(
        expoly::sign_at_rational(&expoly::encode(&refund), sample_u) == Sign::Positive,
        "witness sample must have exactly positive NPV"
    );

    ensure!(
        refund.dominates(&plain),
        "the refund loan must dominate the plain loan"
    );
    Ok(())
}

/// Criterion 4: the line of credit pair — x = (−1, +5), y six periods later
/// = (−1000, +1500) — has part rates ln 5 and ln 1.5, three certified root
/// brackets for the sum near 0.44 / 1.11 / 1.55, a weakest-cap threshold at
/// the last of those, and every piece legal at a cap just above it.
/// Budget: 100 ms.
fn criterion_line_of_credit() -> Result<(), String> {
    let x = istream(&[(0, -1), (1, 5)]);
    let y = istream(&[(6, -1000), (7, 1500)]);
    let z = x.combine(&y);

    let start = Instant::now();
    let ix = finite_log_rate(&x)?;
    let iy = finite_log_rate(&y)?;
    let brackets = oracle::bracket_roots(&z, &ScanConfig::default());
    let threshold = irr::refinement_plus(&z);
    // 400.3% effective is a hair above e^1.61 − 1 ≈ 400.28%.
    let cap = RateSpec::Effective(br(4003, 1000));
    let verdicts = [
        caps::in_cap_plus(&x, &cap),
        caps::in_cap_plus(&y, &cap),
        caps::in_cap_plus(&z, &cap),
    ];
    let elapsed = start.elapsed();

    ensure!((ix - 5f64.ln()).abs() <= 1e-9, "rate of x must be ln 5, got {ix}");
    ensure!((iy - 1.5f64.ln()).abs() <= 1e-9, "rate of y must be ln 1.5, got {iy}");

    let expected_roots = [0.44, 1.11, 1.55];
    ensure!(
        brackets.len() == expected_roots.len(),
        "expected 3 sign-change brackets for the sum, got {}",
        brackets.len()
    );
    for ((lo, hi), want) in brackets.iter().zip(&expected_roots) {
        let mid = 0.5 * (lo + hi);
        ensure!(
            (mid - want).abs() <= 5e-3,
            "bracket midpoint {mid} is not within 5e-3 of {want}"
        );
    }

    let got = threshold.log_rate();
    ensure!(
        (got - 1.55).abs() <= 5e-3,
        "weakest-cap threshold {got} is not within 5e-3 of 1.55"
    );
    for verdict in &verdicts {
        ensure!(verdict.legal, "all pieces must be legal at a 400.3% cap");
    }
    ensure!(
        elapsed < Duration::from_millis(100),
        "runtime {elapsed:?} exceeds the 100 ms budget"
    );
    Ok(())
}

/// Criterion 5: the balanced swap +1 / −2 / +1 under floor 3% and cap 60%
/// is usurious with the fault on the receiving party, the fault swaps to
/// the counterparty when the stream is negated, and the class/rate pair is
/// "never negative NPV" with rate +∞.
fn criterion_joint_fault() -> Result<(), String> {
    let swap = istream(&[(0, 1), (1, -2), (2, 1)]);
    let floor = RateSpec::Effective(br(3, 100));
    let cap = RateSpec::Effective(br(3, 5));

    let given = caps::joint_classify(&swap, &floor, &cap)
        .map_err(|e| format!("joint test failed to run: {e}"))?;
    ensure!(!given.legal, "the swap must be usurious under floor 3% / cap 60%");
    ensure!(
        given.at_fault == Fault::PartyX,
        "fault must fall on the receiving party, got {:?}",
        given.at_fault
    );

    let negated = caps::joint_classify(&swap.negate(), &floor, &cap)
        .map_err(|e| format!("joint test failed to run: {e}"))?;
    ensure!(!negated.legal, "negation must stay usurious");
    ensure!(
        negated.at_fault == Fault::PartyY,
        "negating the stream must swap the fault, got {:?}",
        negated.at_fault
    );

    let class = irr::classify_stream(&swap);
    ensure!(
        class == StreamClass::NonnegativeNpv,
        "the swap must classify as never-negative NPV, got {class:?}"
    );
    let rate = irr::irr(&swap);
    ensure!(
        rate == Some(IrrValue::PlusInfinity),
        "the swap's rate must be +∞, got {rate:?}"
    );
    Ok(())
}

/// Criterion 6: 1000 random whole-period streams (≤ 8 transactions, times
/// ≤ 12, amounts with |numerator| ≤ 10⁴) uphold, with zero violations:
/// rule nesting at five shared caps, monotonicity in the cap, cone closure,
/// dominance, stability under discounting, agreement between cap decisions
/// and the certified rate, rate intermediacy under addition, threshold
/// consistency at exactly-decidable caps, and float-oracle agreement.
/// Budget: 60 s.
fn criterion_random_streams() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1CE_0006);

    // Five shared rational caps, ascending so monotonicity reads off the
    // legality flags directly.
    let mut cap_pool: Vec<BigRational> = (0..5)
        .map(|_| br(rng.gen_range(0..=50), rng.gen_range(1..=10)))
        .collect();
    cap_pool.sort();
    let zero_rate = RateSpec::Effective(BigRational::zero());

    let mut prev: Option<(CashFlowStream, [bool; 3])> = None;
    let mut intermediacy_pairs = 0usize;
    let mut rate_comparisons = 0usize;

    for round in 0..1000 {
        let x = random_stream(&mut rng);

        // Rule nesting and monotonicity across the shared caps.
        let mut plus_flags = [false; 5];
        let mut minus_flags = [false; 5];
        for (i, rho) in cap_pool.iter().enumerate() {
            let r = RateSpec::Effective(rho.clone());
            let minus = caps::in_cap_minus(&x, &r).legal;
            let plus = caps::in_cap_plus(&x, &r).legal;
            let weak = caps::in_weak_cap(&x, &r).legal;
            ensure!(!minus || plus, "round {round}: running-balance pass must imply whole-NPV pass at cap {rho}");
            ensure!(!plus || weak, "round {round}: whole-NPV pass must imply weak pass at cap {rho}");
            plus_flags[i] = plus;
            minus_flags[i] = minus;
        }
        for i in 1..5 {
            ensure!(
                !plus_flags[i - 1] || plus_flags[i],
                "round {round}: whole-NPV legality must be monotone in the cap"
            );
            ensure!(
                !minus_flags[i - 1] || minus_flags[i],
                "round {round}: running-balance legality must be monotone in the cap"
            );
        }

        // Cone closure at the smallest cap: positive scaling preserves the
        // decision, adding two legal streams stays legal.
        let r0 = RateSpec::Effective(cap_pool[0].clone());
        let weak0 = caps::in_weak_cap(&x, &r0).legal;
        let scaled = x.scale(&br(3, 2)).unwrap();
        ensure!(
            caps::in_cap_plus(&scaled, &r0).legal == plus_flags[0],
            "round {round}: scaling must not change the whole-NPV decision"
        );
        ensure!(
            caps::in_cap_minus(&scaled, &r0).legal == minus_flags[0],
            "round {round}: scaling must not change the running-balance decision"
        );
        if let Some((y, y_flags)) = &prev {
            let sum = x.combine(y);
            if plus_flags[0] && y_flags[0] {
                ensure!(
                    caps::in_cap_plus(&sum, &r0).legal,
                    "round {round}: sum of whole-NPV-legal streams turned illegal"
                );
            }
            if minus_flags[0] && y_flags[1] {
                ensure!(
                    caps::in_cap_minus(&sum, &r0).legal,
                    "round {round}: sum of running-balance-legal streams turned illegal"
                );
            }
            if weak0 && y_flags[2] {
                ensure!(
                    caps::in_weak_cap(&sum, &r0).legal,
                    "round {round}: sum of weakly legal streams turned illegal"
                );
            }

            // Rate intermediacy under addition, whenever all three streams
            // carry a finite rate.
            if irr::classify_stream(&x).has_finite_irr()
                && irr::classify_stream(y).has_finite_irr()
                && irr::classify_stream(&sum).has_finite_irr()
            {
                intermediacy_pairs += 1;
                let ix = finite_log_rate(&x)?;
                let iy = finite_log_rate(y)?;
                let isum = finite_log_rate(&sum)?;
                ensure!(
                    ix.min(iy) - 1e-9 <= isum && isum <= ix.max(iy) + 1e-9,
                    "round {round}: combined rate {isum} escapes [{}, {}]",
                    ix.min(iy),
                    ix.max(iy)
                );
            }
        }

        // Dominance: tacking on a never-ahead side stream keeps legality.
        let t0 = rng.gen_range(0..=6);
        let gap = rng.gen_range(1..=6);
        let a = rng.gen_range(1..=10_000);
        let back = rng.gen_range(0..=a);
        let side = stream(vec![(br(t0, 1), br(-a, 1)), (br(t0 + gap, 1), br(back, 1))]);
        let dominated = x.combine(&side);
        ensure!(dominated.dominates(&x), "round {round}: side stream construction broken");
        let r2 = RateSpec::Effective(cap_pool[2].clone());
        if plus_flags[2] {
            ensure!(
                caps::in_cap_plus(&dominated, &r2).legal,
                "round {round}: dominated stream turned illegal (whole-NPV cap)"
            );
        }
        if minus_flags[2] {
            ensure!(
                caps::in_cap_minus(&dominated, &r2).legal,
                "round {round}: dominated stream turned illegal (running-balance cap)"
            );
        }

        // Stability: judging at ρ equals discounting at ρ and judging at 0.
        let shifted = discounting::discount_stream(&x, &cap_pool[1]).unwrap();
        ensure!(
            caps::in_cap_plus(&shifted, &zero_rate).legal == plus_flags[1],
            "round {round}: discounting to rate zero changed the decision"
        );

        // Certified-rate consistency: for classes with a finite rate the
        // whole-NPV decision is exactly the rate-vs-cap comparison.
        if irr::classify_stream(&x).has_finite_irr() {
            let rate = irr::irr(&x);
            let Some(v) = rate else {
                return Err(format!("round {round}: finite class without a rate"));
            };
            if let Some(ord) = root_vs_cutoff(&x, &v, &cap_pool[3]) {
                rate_comparisons += 1;
                ensure!(
                    plus_flags[3] == (ord != Ordering::Less),
                    "round {round}: cap decision disagrees with the certified rate"
                );
            }
        }

        // Threshold consistency at a cap whose cutoff is exactly rational
        // (whole-period streams have time scale 1, so u* = j/m).
        let m = rng.gen_range(2i64..=9);
        let j = rng.gen_range(1..m);
        let probe = RateSpec::Effective(br(m - j, j));
        let u_star = br(j, m);
        let plus_probe = caps::in_cap_plus(&x, &probe).legal;
        if let Some(expected) = cutoff_at_or_above(&irr::refinement_plus(&x), &u_star) {
            ensure!(
                plus_probe == expected,
                "round {round}: whole-NPV cap disagrees with its threshold at u* = {j}/{m}"
            );
        }
        let minus_probe = caps::in_cap_minus(&x, &probe).legal;
        if let Some(expected) = cutoff_at_or_above(&irr::refinement_minus(&x), &u_star) {
            ensure!(
                minus_probe == expected,
                "round {round}: running-balance cap disagrees with its threshold at u* = {j}/{m}"
            );
        }

        // Float-oracle agreement at the largest cap.
        let plus4 = caps::in_cap_plus(&x, &RateSpec::Effective(cap_pool[4].clone()));
        oracle_agreement(&x, &plus4, &cap_pool[4])
            .map_err(|e| format!("round {round}: {e}"))?;

        prev = Some((x, [plus_flags[0], minus_flags[0], weak0]));
    }

    ensure!(
        intermediacy_pairs >= 10,
        "too few rate-intermediacy pairs exercised ({intermediacy_pairs})"
    );
    ensure!(
        rate_comparisons >= 100,
        "too few certified-rate comparisons exercised ({rate_comparisons})"
    );
    let elapsed = start.elapsed();
    ensure!(
        elapsed < Duration::from_secs(60),
        "runtime {elapsed:?} exceeds the 60 s budget"
    );
    Ok(())
}

/// Criterion 7: on 1000 random integer polynomials of degree ≤ 40 the
/// exact positive-root count matches an independent float grid scan, and
/// the squarefree decomposition reconstructs the input exactly.
/// Budget: 30 s.
fn criterion_sturm_kernel() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1CE_0007);

    for round in 0..1000 {
        let deg = rng.gen_range(1usize..=40);
        let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-10_000..=10_000)).collect();
        // Pin a nonzero constant term and leading coefficient so the degree
        // and the scan interval are what they claim to be.
        if coeffs[0] == 0 {
            coeffs[0] = 1;
        }
        if coeffs[deg] == 0 {
            coeffs[deg] = 1;
        }
        let poly = stream(
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(i, c)| (br(i as i64, 1), br(*c, 1)))
                .collect(),
        );
        let p = expoly::encode(&poly);

        let bound = expoly::cauchy_root_bound(&p);
        let exact = expoly::sturm_count(&p, &BigRational::zero(), &bound)
            .map_err(|e| format!("round {round}: sturm count failed: {e}"))?;

        // Independent float count, refining the grid on a miss; the exact
        // result never chooses the sample points.
        let mut float_count = positive_root_scan(&coeffs, 20_000);
        let mut tries = 0;
        while float_count != exact && tries < 2 {
            tries += 1;
            float_count = positive_root_scan(&coeffs, 20_000 * 16usize.pow(tries));
        }
        ensure!(
            float_count == exact,
            "round {round}: exact count {exact} vs float scan {float_count} for degree {deg}"
        );

        // Squarefree reconstruction: primitive positive-leading factors
        // multiplying back to the input up to one rational constant whose
        // sign is the input's leading sign, multiplicities covering the
        // degree.
        let factors = expoly::squarefree_decompose(&p)
            .map_err(|e| format!("round {round}: squarefree decomposition failed: {e}"))?;
        let mut product: Vec<(u32, BigRational)> = vec![(0, BigRational::one())];
        let mut degree_total = 0u32;
        for (factor, mult) in &factors {
            ensure!(
                is_primitive_positive(factor),
                "round {round}: factor not primitive with positive leading coefficient"
            );
            degree_total += factor.degree().unwrap_or(0) * mult;
            for _ in 0..*mult {
                product = mul_terms(&product, factor.terms());
            }
        }
        ensure!(
            Some(degree_total) == p.degree(),
            "round {round}: multiplicities cover degree {degree_total}, want {:?}",
            p.degree()
        );
        let terms = p.terms();
        ensure!(
            product.len() == terms.len(),
            "round {round}: reconstruction has {} terms, want {}",
            product.len(),
            terms.len()
        );
        let scale = &terms[terms.len() - 1].1 / &product[product.len() - 1].1;
        ensure!(
            scale.is_positive() == terms[terms.len() - 1].1.is_positive(),
            "round {round}: reconstruction constant has the wrong sign"
        );
        for ((e_got, c_got), (e_want, c_want)) in product.iter().zip(terms) {
            ensure!(
                e_got == e_want && &(&scale * c_got) == c_want,
                "round {round}: reconstruction differs at exponent {e_want}"
            );
        }
    }

    let elapsed = start.elapsed();
    ensure!(
        elapsed < Duration::from_secs(30),
        "runtime {elapsed:?} exceeds the 30 s budget"
    );
    Ok(())
}

/// Criterion 8: for 100 random whole-period streams and constant benchmark
/// rates 5% and 10%, the exact floating-rate transform equals per-amount
/// compounding, as rational equality.
fn criterion_float_transform() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1CE_0008);
    for round in 0..100 {
        let x = random_stream(&mut rng);
        for c in [br(1, 20), br(1, 10)] {
            let bench = BenchmarkPath::constant(c.clone())
                .map_err(|e| format!("round {round}: bad benchmark: {e}"))?;
            let got = discounting::float_transform(&x, &bench)
                .map_err(|e| format!("round {round}: transform failed: {e}"))?;
            // Independent expectation: multiply each amount by (1+c)^t with
            // plain repeated multiplication.
            let growth = BigRational::one() + &c;
            let expected: Vec<(BigRational, BigRational)> = x
                .transactions()
                .iter()
                .map(|(t, a)| {
                    let reps: u32 = t.to_integer().try_into().unwrap();
                    let mut factor = BigRational::one();
                    for _ in 0..reps {
                        factor *= &growth;
                    }
                    (t.clone(), a * factor)
                })
                .collect();
            ensure!(
                got.transactions() == expected.as_slice(),
                "round {round}: transform disagrees with direct compounding at rate {c}"
            );
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Shared helpers.

/// Random whole-period stream: ≤ 8 transactions, times ≤ 12, amounts with
/// |numerator| ≤ 10⁴ and small denominators.
fn random_stream(rng: &mut ChaCha8Rng) -> CashFlowStream {
    let n = rng.gen_range(1..=8);
    stream(
        (0..n)
            .map(|_| {
                (
                    br(rng.gen_range(0..=12), 1),
                    br(rng.gen_range(-10_000..=10_000), rng.gen_range(1..=4)),
                )
            })
            .collect(),
    )
}

fn finite_log_rate(x: &CashFlowStream) -> Result<f64, String> {
    match irr::irr(x) {
        Some(IrrValue::Finite { log_rate, .. }) => Ok(log_rate),
        other => Err(format!("expected a finite internal rate, got {other:?}")),
    }
}

/// Where the certified essential root sits relative to the cutoff `u*` of
/// rate `rho`: `Less` means the internal rate exceeds the cap. `None` when
/// the bracket straddles the cutoff undecidably.
fn root_vs_cutoff(x: &CashFlowStream, v: &IrrValue, rho: &BigRational) -> Option<Ordering> {
    let IrrValue::Finite { q, u_bracket, .. } = v else {
        return None;
    };
    let cutoff = AlgebraicCutoff::new(rho.clone(), *q);
    let (lo, hi) = u_bracket;
    if lo == hi {
        // Exact rational root: order it through the strictly increasing
        // defining polynomial of the cutoff.
        return Some(match expoly::sign_at_rational(&cutoff.defining(), lo) {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        });
    }
    expoly::compare_root_to_cutoff(&expoly::encode(x), u_bracket, &cutoff).ok()
}

/// Whether the exactly rational cutoff `u*` is at or above the threshold
/// boundary (in the `u` variable, lower rates sit at larger `u`). `None`
/// when the certified bracket straddles `u*`.
fn cutoff_at_or_above(threshold: &Refinement, u_star: &BigRational) -> Option<bool> {
    match threshold {
        Refinement::PlusInfinity => Some(false),
        Refinement::Finite { exact_u: Some(v), .. } => Some(u_star <= v),
        Refinement::Finite { u_bracket: (lo, hi), .. } => {
            if u_star <= lo {
                Some(true)
            } else if u_star >= hi {
                Some(false)
            } else {
                None
            }
        }
    }
}

/// Exact-vs-oracle agreement at cap `rho`, with two sanctioned excuses:
/// the violating band intersects the scan window below grid resolution, or
/// every value on it is under float noise (an exponentially small tail the
/// grid cannot see). Anything else is a real disagreement.
fn oracle_agreement(x: &CashFlowStream, exact: &Decision, rho: &BigRational) -> Result<(), String> {
    let r = (1.0 + rho.to_f64().unwrap()).ln();
    let cfg = ScanConfig::default();
    let step = 10.0 / cfg.grid_points as f64;
    let noise = 1e-9
        * (x.transactions()
            .iter()
            .map(|(_, a)| a.to_f64().unwrap().abs())
            .sum::<f64>()
            + 1.0);
    match (exact.legal, oracle::oracle_in_cap_plus(x, r, &cfg)) {
        (true, OracleVerdict::NoViolationFound) => Ok(()),
        (false, OracleVerdict::ViolationFound(_)) => Ok(()),
        (true, OracleVerdict::ViolationFound(s)) => {
            let v = discounting::npv_float(x, s);
            if v <= noise {
                Ok(())
            } else {
                Err(format!("oracle found NPV {v} at rate {s} on an exactly legal stream"))
            }
        }
        (false, OracleVerdict::NoViolationFound) => {
            let Witness::ViolatingRateBracket { s_lo, s_hi, .. } = &exact.witness else {
                return Err("illegal exact decision without a rate band".into());
            };
            let window_lo = s_lo.max(r);
            let window_hi = (r + 10.0).min(*s_hi);
            if window_hi - window_lo <= 2.0 * step {
                return Ok(());
            }
            let mut peak = f64::NEG_INFINITY;
            for k in 0..=64 {
                let s = window_lo + (window_hi - window_lo) * k as f64 / 64.0;
                peak = peak.max(discounting::npv_float(x, s));
            }
            if peak <= noise {
                Ok(())
            } else {
                Err(format!(
                    "oracle missed a band ({window_lo}, {window_hi}) peaking at {peak}"
                ))
            }
        }
    }
}

/// Distinct positive-root count of an integer polynomial by float grid
/// scanning: direct samples on (0, 2], then the reversed polynomial on
/// (0, 1/2] to cover roots beyond 2 with the same resolution.
fn positive_root_scan(coeffs: &[i64], n: usize) -> usize {
    let direct: Vec<f64> = coeffs.iter().map(|&c| c as f64).collect();
    let reversed: Vec<f64> = coeffs.iter().rev().map(|&c| c as f64).collect();
    sign_changes(&direct, 2.0, n) + sign_changes(&reversed, 0.5, n)
}

fn sign_changes(coeffs: &[f64], hi: f64, n: usize) -> usize {
    let mut count = 0usize;
    let mut last = 0.0f64;
    for k in 0..=n {
        let u = hi * k as f64 / n as f64;
        let mut v = 0.0f64;
        for c in coeffs.iter().rev() {
            v = v * u + c;
        }
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        if last != 0.0 && v.signum() != last {
            count += 1;
        }
        last = v.signum();
    }
    count
}

/// Integer coefficients with content 1 and a positive leading coefficient.
fn is_primitive_positive(f: &expoly::ExpPoly) -> bool {
    let terms = f.terms();
    let Some((_, lead)) = terms.last() else {
        return false;
    };
    if !lead.is_positive() {
        return false;
    }
    let mut content = BigInt::zero();
    for (_, c) in terms {
        if !c.denom().is_one() {
            return false;
        }
        content = num::Integer::gcd(&content, c.numer());
    }
    content.is_one()
}

/// Sparse polynomial product over `(exponent, coefficient)` term lists.
fn mul_terms(a: &[(u32, BigRational)], b: &[(u32, BigRational)]) -> Vec<(u32, BigRational)> {
    let mut acc: BTreeMap<u32, BigRational> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let entry = acc.entry(ea + eb).or_insert_with(BigRational::zero);
            *entry += ca * cb;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}
