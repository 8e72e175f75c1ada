//! Criterion runners for the acceptance sweep: each checks one verifiable
//! claim of the crate end to end (formula against exhaustive oracle,
//! symbolic identity, bookkeeping invariant) and reports pass/fail with
//! details. The `repro` CLI subcommand aggregates exactly these, and the
//! acceptance test target asserts each one.
//!
//! Every expected constant here is either a frozen value of an independent
//! computation (integer powers spelled out) or a cross-check between two
//! routes that must agree exactly. Time budgets are asserted only in
//! optimized builds.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::arith::{rational_curve, z_fqt, z_q_experiment, HeightQuery, ZQ_DISCLAIMER};
use crate::census::{
    coarse_canonical_form, count_coprime_pairs, direct_coarse_census, stratum_census,
};
use crate::gf::FieldSpec;
use crate::motive::{moduli_class_closed, moduli_class_stratified, poly_class, MotiveClass};
use crate::polyfq::{monic_polys, Poly};
use crate::weier::{Reduction, WeierstrassFibration};

/// Seed for the deterministic model sample of the fiber-bookkeeping sweep.
const SAMPLE_SEED: u64 = 0x6d6f_6475;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub seconds: f64,
    pub detail: String,
}

/// Wall-clock budgets per criterion, asserted in optimized builds only.
fn time_limit(id: u32) -> f64 {
    match id {
        2 | 4 | 6 => 1.0,
        3 | 8 => 600.0,
        9 => 3600.0,
        _ => 60.0,
    }
}

fn finish(
    id: u32,
    name: &'static str,
    start: Instant,
    mut violations: Vec<String>,
    summary: String,
) -> CriterionOutcome {
    let seconds = start.elapsed().as_secs_f64();
    if !cfg!(debug_assertions) && seconds > time_limit(id) {
        violations.push(format!(
            "elapsed {seconds:.1}s exceeds the {:.0}s budget",
            time_limit(id)
        ));
    }
    let pass = violations.is_empty();
    let detail = if pass {
        summary
    } else {
        format!("{summary}; VIOLATIONS: {}", violations.join("; "))
    };
    CriterionOutcome { id, name, pass, seconds, detail }
}

fn check(cond: bool, msg: impl FnOnce() -> String, violations: &mut Vec<String>) {
    // Cap the list so a systematic failure stays readable.
    if !cond && violations.len() < 20 {
        violations.push(msg());
    } else if !cond && violations.len() == 20 {
        violations.push("... further violations elided".to_string());
    }
}

fn biguint_pow(base: u64, exp: u32) -> BigUint {
    BigUint::from(base).pow(exp)
}

/// Criterion 1: the exhaustive coprime-pair count equals the closed-form
/// class specialized at q, for q in {5, 7} with degrees up to 4 and q = 25
/// with degrees up to 2. The expected value is also recomputed from the
/// piecewise power formula directly.
pub fn criterion_1_coprime_pair_oracle(jobs: usize) -> CriterionOutcome {
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut cases = 0u32;
    let fields = [
        (FieldSpec::new(5, 1).unwrap(), 4usize),
        (FieldSpec::new(7, 1).unwrap(), 4),
        (FieldSpec::new(5, 2).unwrap(), 2),
    ];
    for (field, dmax) in &fields {
        let q = field.order();
        for d1 in 0..=*dmax {
            for d2 in 0..=*dmax {
                cases += 1;
                let observed = match count_coprime_pairs(field, d1, d2, 10_000_000, jobs) {
                    Ok(c) => BigUint::from(c),
                    Err(e) => {
                        violations.push(format!("count failed at q={q} ({d1},{d2}): {e}"));
                        continue;
                    }
                };
                let class_value = poly_class(d1, d2)
                    .point_count(q)
                    .to_biguint()
                    .expect("nonnegative");
                let piecewise = if d1 > 0 && d2 > 0 {
                    biguint_pow(q, (d1 + d2) as u32) - biguint_pow(q, (d1 + d2 - 1) as u32)
                } else {
                    biguint_pow(q, (d1 + d2) as u32)
                };
                check(
                    observed == class_value && class_value == piecewise,
                    || format!("q={q} ({d1},{d2}): observed {observed}, class {class_value}, piecewise {piecewise}"),
                    &mut violations,
                );
            }
        }
    }
    finish(
        1,
        "coprime-pair-count-oracle",
        start,
        violations,
        format!("{cases} (q, d1, d2) cases, oracle = class = piecewise"),
    )
}

/// Criterion 2: the stratified assembly of the moduli class telescopes to
/// the closed form L^{10n+1} - L^{10n-1}, symbolically, for n = 1..20.
pub fn criterion_2_class_telescoping() -> CriterionOutcome {
    let start = Instant::now();
    let mut violations = Vec::new();
    for n in 1..=20u32 {
        let stratified = moduli_class_stratified(n);
        let closed = moduli_class_closed(n);
        let explicit = MotiveClass::lefschetz_pow(10 * n as usize + 1)
            .sub(&MotiveClass::lefschetz_pow(10 * n as usize - 1));
        check(
            stratified == closed && closed == explicit,
            || format!("n={n}: stratified {stratified}, closed {closed}"),
            &mut violations,
        );
    }
    finish(
        2,
        "moduli-class-telescoping",
        start,
        violations,
        "stratified = closed = L^(10n+1) - L^(10n-1) for n = 1..20".to_string(),
    )
}

/// Criterion 3: the full stratified census over F_5 and F_7 at n = 1
/// observes exactly q^11 - q^9.
pub fn criterion_3_moduli_census(jobs: usize) -> CriterionOutcome {
    let start = Instant::now();
    let mut violations = Vec::new();
    let expectations: [(u64, u64); 2] = [(5, 46_875_000), (7, 1_936_973_136)];
    let mut summaries = Vec::new();
    for (q, expected) in expectations {
        let field = FieldSpec::new(q, 1).unwrap();
        match stratum_census(&field, 1, 300_000_000, jobs) {
            Ok(report) => {
                let formula = moduli_class_closed(1)
                    .point_count(q)
                    .to_biguint()
                    .expect("nonnegative");
                check(
                    report.observed == BigUint::from(expected),
                    || format!("q={q}: observed {} != {expected}", report.observed),
                    &mut violations,
                );
                check(
                    report.observed == formula && report.matched,
                    || format!("q={q}: observed {} != formula {formula}", report.observed),
                    &mut violations,
                );
                for row in &report.strata {
                    check(
                        row.matched,
                        || format!("q={q} stratum ({},{}) mismatch", row.d1, row.d2),
                        &mut violations,
                    );
                }
                summaries.push(format!("q={q}: {} classes", report.observed));
            }
            Err(e) => violations.push(format!("census failed at q={q}: {e}")),
        }
    }
    finish(3, "moduli-count-census", start, violations, summaries.join("; "))
}

/// Criterion 4: the closed form of the coprime-pair class satisfies the
/// stripping recurrence [P^{(d1,d2)}] = L^{d1+d2} - sum_k [P^{(d1-k,d2-k)}] L^k
/// symbolically for all d1, d2 <= 12.
pub fn criterion_4_class_recurrence() -> CriterionOutcome {
    let start = Instant::now();
    let mut violations = Vec::new();
    for d1 in 0..=12usize {
        for d2 in 0..=12usize {
            let mut rhs = MotiveClass::lefschetz_pow(d1 + d2);
            for k in 1..=d1.min(d2) {
                rhs = rhs.sub(&poly_class(d1 - k, d2 - k).mul(&MotiveClass::lefschetz_pow(k)));
            }
            check(
                poly_class(d1, d2) == rhs,
                || format!("recurrence fails at ({d1}, {d2})"),
                &mut violations,
            );
        }
    }
    finish(
        4,
        "coprime-class-recurrence",
        start,
        violations,
        "closed form satisfies the recurrence for d1, d2 <= 12".to_string(),
    )
}

/// First-principles semistability-everywhere check used by criterion 5:
/// nonzero discriminant, no common factor of the discriminant with a4
/// (a finite additive place), and infinity either good or with a4 of full
/// degree.
fn semistable_everywhere(w: &WeierstrassFibration) -> bool {
    let delta = w.discriminant();
    let Some(deg_delta) = delta.degree() else {
        return false;
    };
    let finite_ok = if w.a4().is_zero() {
        deg_delta == 0
    } else {
        delta.gcd(w.a4()).expect("delta nonzero").degree() == Some(0)
    };
    let inf_bad = deg_delta < 12 * w.n() as usize;
    let inf_ok = !inf_bad || w.a4().degree() == Some(4 * w.n() as usize);
    finite_ok && inf_ok
}

/// Criterion 5: fiber bookkeeping over a deterministic sample of 10^4
/// valid models at (q, n) = (5, 1) plus the exhaustive low-degree slice
/// deg a4 <= 1, deg a6 <= 2: the degree-weighted Kodaira indices sum to
/// 12n, every bad place is multiplicative, and lambda-twists preserve the
/// configuration and the coarse encoding. Validity also agrees with the
/// semistable-everywhere characterization on the whole population.
pub fn criterion_5_fiber_bookkeeping() -> CriterionOutcome {
    let start = Instant::now();
    let mut violations = Vec::new();
    let f = FieldSpec::new(5, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut population: Vec<WeierstrassFibration> = Vec::new();
    let mut valid_count = 0u32;
    let mut attempts = 0u64;
    while valid_count < 10_000 {
        attempts += 1;
        assert!(attempts < 10_000_000, "sampling must terminate");
        let a4 = Poly::from_reps(&f, &(0..5).map(|_| rng.next_u64() % 5).collect::<Vec<_>>());
        let a6 = Poly::from_reps(&f, &(0..7).map(|_| rng.next_u64() % 5).collect::<Vec<_>>());
        let w = WeierstrassFibration::new(1, a4, a6).expect("degrees in bounds");
        if w.is_valid() {
            valid_count += 1;
            population.push(w);
        }
    }
    // Exhaustive low-degree slice, valid or not.
    for i4 in 0..25u64 {
        for i6 in 0..125u64 {
            let a4 = Poly::from_reps(&f, &[i4 % 5, i4 / 5]);
            let a6 = Poly::from_reps(&f, &[i6 % 5, (i6 / 5) % 5, i6 / 25]);
            population.push(WeierstrassFibration::new(1, a4, a6).expect("degrees in bounds"));
        }
    }
    let lambdas: Vec<_> = (2..5).map(|r| f.element(r).unwrap()).collect();
    let mut valid_checked = 0u32;
    for w in &population {
        check(
            w.is_valid() == semistable_everywhere(w),
            || format!("validity != semistability for a4={}, a6={}", w.a4(), w.a6()),
            &mut violations,
        );
        if !w.is_valid() {
            continue;
        }
        valid_checked += 1;
        let config = w.fiber_configuration().expect("valid");
        check(
            config.degree_weighted_sum() == 12,
            || format!("sum k*deg != 12 for a4={}, a6={}", w.a4(), w.a6()),
            &mut violations,
        );
        for fp in &config.places {
            let verdict = w.is_semistable_at(&fp.place).expect("valid model, real place");
            check(
                verdict == Reduction::Multiplicative,
                || format!("bad place {} not multiplicative for a4={}, a6={}", fp.place, w.a4(), w.a6()),
                &mut violations,
            );
        }
        // height_of_discriminant certifies prod ht(p)^k = q^{12n} internally.
        let height = crate::arith::height_of_discriminant(w).expect("valid");
        check(
            height == BigUint::from(5u64).pow(12),
            || format!("height != 5^12 for a4={}, a6={}", w.a4(), w.a6()),
            &mut violations,
        );
        let key = coarse_canonical_form(w).expect("valid");
        for &lam in &lambdas {
            let tw = w.lambda_twist(lam);
            check(
                tw.fiber_configuration().expect("twists stay valid") == config,
                || format!("twist changed the configuration of a4={}, a6={}", w.a4(), w.a6()),
                &mut violations,
            );
            check(
                coarse_canonical_form(&tw).expect("valid") == key,
                || format!("twist changed the encoding of a4={}, a6={}", w.a4(), w.a6()),
                &mut violations,
            );
        }
    }
    finish(
        5,
        "fiber-bookkeeping",
        start,
        violations,
        format!(
            "{valid_checked} valid models (10^4 sampled + slice) with 3 twists each, population {} total",
            population.len()
        ),
    )
}

/// Criterion 6: the function-field counting function. At B = q^{12m} the
/// table equals the independently computed prefix sum and the bound
/// expression exactly; off the powers the inequality is strict.
pub fn criterion_6_function_field_count() -> CriterionOutcome {
    let start = Instant::now();
    let mut violations = Vec::new();
    for q in [5u64, 7] {
        let mut prefix = BigUint::zero();
        for m in 1..=5u32 {
            prefix += biguint_pow(q, 10 * m + 1) - biguint_pow(q, 10 * m - 1);
            let z = z_fqt(&HeightQuery { q, bound: biguint_pow(q, 12 * m) });
            check(
                z.total == prefix,
                || format!("q={q}, m={m}: total {} != prefix {prefix}", z.total),
                &mut violations,
            );
            check(
                z.equality_case && z.bound_value == z.total,
                || format!("q={q}, m={m}: equality case not exact"),
                &mut violations,
            );
            check(
                z.rows.len() == m as usize,
                || format!("q={q}, m={m}: {} rows", z.rows.len()),
                &mut violations,
            );
        }
        // Ten non-power bounds per q: strict inequality.
        let non_powers: Vec<BigUint> = vec![
            BigUint::from(2u32),
            BigUint::from(3u32),
            BigUint::from(10u32),
            BigUint::from(4242u32),
            BigUint::from(1_000_000u64),
            biguint_pow(q, 12) - 1u32,
            biguint_pow(q, 12) + 1u32,
            biguint_pow(q, 24) - 1u32,
            biguint_pow(q, 24) + 1u32,
            biguint_pow(q, 36) + 17u32,
        ];
        for b in non_powers {
            let z = z_fqt(&HeightQuery { q, bound: b.clone() });
            check(
                !z.equality_case && z.total < z.bound_value,
                || format!("q={q}, B={b}: inequality not strict (Z={}, bound={})", z.total, z.bound_value),
                &mut violations,
            );
        }
    }
    finish(
        6,
        "function-field-counting",
        start,
        violations,
        "exact equality at B = q^(12m) for m = 1..5, strict bound at 20 other B".to_string(),
    )
}

/// Criterion 7: factorization round-trip on every monic polynomial of
/// degree <= 4 over F_5 (781 including degree 0) and 10^3 random
/// polynomials of degree <= 12 over each of F_7 and F_25, with the
/// irreducibility recheck on every listed factor.
pub fn criterion_7_factorization_round_trip() -> CriterionOutcome {
    let start = Instant::now();
    let mut violations = Vec::new();
    let f5 = FieldSpec::new(5, 1).unwrap();
    let mut exhaustive = 0u32;
    for d in 0..=4usize {
        for poly in monic_polys(&f5, d) {
            exhaustive += 1;
            match poly.factor() {
                Ok(fact) => {
                    check(
                        fact.product(&f5) == poly,
                        || format!("round trip fails for {poly}"),
                        &mut violations,
                    );
                    check(
                        fact.recheck_irreducible(),
                        || format!("irreducibility recheck fails for {poly}"),
                        &mut violations,
                    );
                }
                Err(e) => violations.push(format!("factor({poly}) failed: {e}")),
            }
        }
    }
    check(
        exhaustive == 781,
        || format!("exhaustive slice has {exhaustive} polynomials, expected 781"),
        &mut violations,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ 7);
    for field in [FieldSpec::new(7, 1).unwrap(), FieldSpec::new(5, 2).unwrap()] {
        let q = field.order();
        for _ in 0..1_000 {
            let d = (rng.next_u64() % 13) as usize;
            let mut reps: Vec<u64> = (0..=d).map(|_| rng.next_u64() % q).collect();
            if reps.iter().all(|&r| r == 0) {
                reps[0] = 1;
            }
            let poly = Poly::from_reps(&field, &reps);
            match poly.factor() {
                Ok(fact) => {
                    check(
                        fact.product(&field) == poly,
                        || format!("round trip fails for {poly} over F_{q}"),
                        &mut violations,
                    );
                    check(
                        fact.recheck_irreducible(),
                        || format!("irreducibility recheck fails for {poly} over F_{q}"),
                        &mut violations,
                    );
                }
                Err(e) => violations.push(format!("factor failed over F_{q}: {e}")),
            }
        }
    }
    finish(
        7,
        "factorization-round-trip",
        start,
        violations,
        "781 exhaustive + 2000 random factorizations reconstruct and recheck".to_string(),
    )
}

/// Criterion 8: the rational-curve explorer at B_max = 10^6 completes,
/// counts are monotone, every counted curve re-verifies its flags, the
/// boundary audit passes, and a slope is reported with the disclaimer.
/// The conjecture itself is never asserted.
pub fn criterion_8_rational_curve_explorer(jobs: usize) -> CriterionOutcome {
    let start = Instant::now();
    let mut violations = Vec::new();
    let summary = match z_q_experiment(1_000_000, 4, 100_000_000, jobs) {
        Ok(exp) => {
            for w in exp.grid.windows(2) {
                check(
                    w[0].count <= w[1].count,
                    || format!("count not monotone at B={}", w[1].bound),
                    &mut violations,
                );
            }
            for c in &exp.curves {
                let rc = rational_curve(c.a, c.b).expect("counted curves are nonsingular");
                check(
                    rc.semistable6 && rc.minimal6 && rc.ht6 as u64 == c.ht6 && c.ht6 <= exp.b_max,
                    || format!("re-verification fails for (A, B) = ({}, {})", c.a, c.b),
                    &mut violations,
                );
            }
            check(exp.boundary_audit_pass, || "boundary audit failed".to_string(), &mut violations);
            check(exp.slope.is_some(), || "no slope could be fitted".to_string(), &mut violations);
            format!(
                "{} curves counted up to 10^6, slope {} over B in [{}, {}] ({})",
                exp.curves.len(),
                exp.slope.map(|s| format!("{s:.3}")).unwrap_or_else(|| "n/a".into()),
                exp.slope_window.0,
                exp.slope_window.1,
                ZQ_DISCLAIMER,
            )
        }
        Err(e) => {
            violations.push(format!("experiment failed: {e}"));
            "experiment failed".to_string()
        }
    };
    finish(8, "rational-curve-explorer", start, violations, summary)
}

/// Criterion 9 (opt-in slow path, excluded from the default sweep): the
/// direct coarse-space census at (q, n) = (5, 1) deduplicates to exactly
/// 5^11 - 5^9 classes.
pub fn criterion_9_direct_census() -> CriterionOutcome {
    let start = Instant::now();
    let mut violations = Vec::new();
    let f = FieldSpec::new(5, 1).unwrap();
    let summary = match direct_coarse_census(&f, 1, 244_140_625) {
        Ok(report) => {
            check(
                report.observed == BigUint::from(46_875_000u64) && report.matched,
                || format!("direct census observed {}", report.observed),
                &mut violations,
            );
            format!("244140625 models deduplicated to {} classes", report.observed)
        }
        Err(e) => {
            violations.push(format!("direct census failed: {e}"));
            "direct census failed".to_string()
        }
    };
    finish(9, "direct-coarse-census", start, violations, summary)
}

/// The default acceptance sweep: criteria 1 through 8 (9 is opt-in).
pub fn run_default_sweep(jobs: usize) -> Vec<CriterionOutcome> {
    vec![
        criterion_1_coprime_pair_oracle(jobs),
        criterion_2_class_telescoping(),
        criterion_3_moduli_census(jobs),
        criterion_4_class_recurrence(),
        criterion_5_fiber_bookkeeping(),
        criterion_6_function_field_count(),
        criterion_7_factorization_round_trip(),
        criterion_8_rational_curve_explorer(jobs),
    ]
}

impl CriterionOutcome {
    /// One line per criterion, the format the sweep prints.
    pub fn summary_line(&self) -> String {
        format!(
            "[{}] {} {}: {} ({:.2}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}
