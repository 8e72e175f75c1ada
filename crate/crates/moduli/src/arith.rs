//! Global-field counting: heights of places and discriminants, the exact
//! function-field counting function Z_{F_q(t)}(B) with its upper bound, and
//! the empirical explorer for the analogous count over Q.
//!
//! The Q side works with short Weierstrass forms y^2 = x^3 + Ax + B, which
//! always have 16 | Delta, so minimality and semistability at 2 and 3 are
//! not honestly visible. Mirroring the function-field side's standing
//! char != 2, 3 restriction, the explorer uses away-from-6 notions
//! throughout: ht6 is the prime-to-6 part of |Delta|, semistable6 and
//! minimal6 quantify over primes p >= 5 only, and curves whose 2-3 part of
//! Delta exceeds a documented cap are outside the censused family. All of
//! this is a proxy for the true count; the explorer reports, it never
//! asserts the conjecture.

use std::thread;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::gf::FieldSpec;
use crate::motive::moduli_class_closed;
use crate::polyfq::Poly;
use crate::weier::{Place, WeierstrassFibration};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("place must be an irreducible polynomial")]
    Reducible,
    #[error("operation requires a valid model")]
    InvalidModel,
    #[error("curve is singular: the discriminant vanishes")]
    SingularCurve,
    #[error("budget exceeded: {required} enumeration steps needed, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
}

/// Height of a closed point: the cardinality q^{deg p} of its residue
/// field.
pub fn height_of_place(field: &FieldSpec, p: &Poly) -> Result<BigUint, ArithError> {
    if !p.is_irreducible() {
        return Err(ArithError::Reducible);
    }
    let deg = p.degree().expect("irreducible polynomials are nonconstant") as u32;
    Ok(BigUint::from(field.order()).pow(deg))
}

/// Height of the discriminant of a valid model: q^{12n}. Also certifies the
/// factorization identity prod ht(p_i)^{k_i} = q^{12n} over the fiber
/// configuration, the infinite place contributing q^{k_inf}.
pub fn height_of_discriminant(w: &WeierstrassFibration) -> Result<BigUint, ArithError> {
    if !w.is_valid() {
        return Err(ArithError::InvalidModel);
    }
    let q = BigUint::from(w.field().order());
    let height = q.pow(12 * w.n());
    let config = w.fiber_configuration().expect("model is valid");
    let mut product = BigUint::one();
    for fp in &config.places {
        let base = match &fp.place {
            Place::Finite(p) => q.pow(p.degree().expect("nonconstant") as u32),
            Place::Infinity => q.clone(),
        };
        product *= base.pow(fp.k as u32);
    }
    assert_eq!(product, height, "height factorization identity");
    Ok(height)
}

/// A height-bounded counting query over F_q(t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightQuery {
    pub q: u64,
    /// Height bound B >= 1.
    pub bound: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZRow {
    pub n: u32,
    /// q^{10n+1} - q^{10n-1}, the number of fibrations with ht(Delta) = q^{12n}.
    pub term: BigUint,
    pub cumulative: BigUint,
}

/// Exact table of Z_{F_q(t)}(B) with the counting bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZTable {
    pub q: u64,
    pub bound: BigUint,
    pub rows: Vec<ZRow>,
    pub total: BigUint,
    /// Upper bound (q^11 - q^9)(B^{5/6} - 1)/(q^10 - 1), evaluated exactly
    /// when B = q^{12m} and rounded up otherwise, so it is always valid.
    pub bound_value: BigUint,
    /// True iff B is a power q^{12m}; then bound_value equals total.
    pub equality_case: bool,
}

/// Z_{F_q(t)}(B): the number of semistable fibrations with
/// 0 < ht(Delta) = q^{12n} <= B, summed in exact integer arithmetic as the
/// prefix of the per-n counts. The largest n is found by integer
/// comparison of q^{12n} against B, never by floating logarithms.
pub fn z_fqt(query: &HeightQuery) -> ZTable {
    let q = query.q;
    assert!(q >= 2, "q must be at least 2");
    assert!(!query.bound.is_zero(), "height bound must be at least 1");
    let b = &query.bound;
    let step = BigUint::from(q).pow(12);
    let mut rows: Vec<ZRow> = Vec::new();
    let mut cumulative = BigUint::zero();
    let mut power = BigUint::one();
    let mut equality_case = *b == power;
    let mut n = 0u32;
    loop {
        let next = &power * &step;
        if next > *b {
            break;
        }
        power = next;
        n += 1;
        if power == *b {
            equality_case = true;
        }
        let term = moduli_class_closed(n)
            .point_count(q)
            .to_biguint()
            .expect("counts are nonnegative");
        cumulative += &term;
        rows.push(ZRow { n, term, cumulative: cumulative.clone() });
    }
    let total = cumulative;
    let bound_value = z_bound_ceiling(q, b);
    if equality_case {
        assert_eq!(bound_value, total, "equality case of the counting bound");
    }
    ZTable { q, bound: b.clone(), rows, total, bound_value, equality_case }
}

/// The bound (q^11 - q^9)(B^{5/6} - 1)/(q^10 - 1), with B^{5/6} taken as
/// the ceiling of the integer 6th root of B^5 and the final division also
/// rounded up. Every rounding goes upward, so the reported value is a true
/// upper bound for Z; when B = q^{12m} no rounding occurs and it equals Z.
fn z_bound_ceiling(q: u64, b: &BigUint) -> BigUint {
    let qb = BigUint::from(q);
    let b5 = b.pow(5);
    let mut root = b5.nth_root(6);
    if root.pow(6) < b5 {
        root += 1u32;
    }
    let numerator = (qb.pow(11) - qb.pow(9)) * (root - 1u32);
    let denominator = qb.pow(10) - 1u32;
    (&numerator + &denominator - 1u32) / denominator
}

/// A short Weierstrass curve y^2 = x^3 + Ax + B over Z with its
/// away-from-6 invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCurve {
    pub a: i64,
    pub b: i64,
    /// Delta = -16(4A^3 + 27B^2), nonzero.
    pub disc: i128,
    /// Prime-to-6 part of |Delta|.
    pub ht6: u128,
    /// 2^{v2} 3^{v3} with ht6 * six_part = |Delta|.
    pub six_part: u128,
    /// No prime p >= 5 divides c4 = -48A together with Delta.
    pub semistable6: bool,
    /// No prime p >= 5 has p^4 | A and p^6 | B.
    pub minimal6: bool,
}

/// Compute the away-from-6 invariants of y^2 = x^3 + Ax + B.
pub fn rational_curve(a: i64, b: i64) -> Result<RationalCurve, ArithError> {
    assert!(
        a.unsigned_abs() < 1 << 40 && b.unsigned_abs() < 1 << 40,
        "coefficients beyond 2^40 would overflow the discriminant"
    );
    let disc = discriminant_i128(a, b);
    if disc == 0 {
        return Err(ArithError::SingularCurve);
    }
    let (ht6, six_part) = strip_six(disc.unsigned_abs());
    let mut semistable6 = true;
    let mut minimal6 = true;
    for (p, _) in factor_u128(ht6) {
        // p >= 5 divides Delta exactly when it divides the prime-to-6 part.
        if a % p as i64 == 0 {
            semistable6 = false;
        }
        if divides_pow(p as i64, 4, a) && divides_pow(p as i64, 6, b) {
            minimal6 = false;
        }
    }
    Ok(RationalCurve { a, b, disc, ht6, six_part, semistable6, minimal6 })
}

/// The (p^4, p^6)-reduction at primes p >= 5, applied to a fixed point:
/// the canonical away-from-6 representative of the curve.
pub fn minimal6_reduce(mut a: i64, mut b: i64) -> (i64, i64) {
    assert!(a != 0 || b != 0, "the zero curve is singular");
    'restart: loop {
        // Candidate primes are bounded by p^4 <= |a| (or p^6 <= |b| when
        // a = 0, which division preserves).
        let mut p = 5i64;
        loop {
            let within = if a != 0 {
                p.checked_pow(4).is_some_and(|p4| p4 <= a.abs())
            } else {
                p.checked_pow(6).is_some_and(|p6| p6 <= b.abs())
            };
            if !within {
                return (a, b);
            }
            if crate::gf::is_prime(p as u64) && divides_pow(p, 4, a) && divides_pow(p, 6, b) {
                a /= p.pow(4);
                b /= p.pow(6);
                continue 'restart;
            }
            p += if p % 6 == 5 { 2 } else { 4 };
        }
    }
}

fn discriminant_i128(a: i64, b: i64) -> i128 {
    let a = a as i128;
    let b = b as i128;
    -16 * (4 * a * a * a + 27 * b * b)
}

/// True for p^k | x, with x = 0 divisible by everything.
fn divides_pow(p: i64, k: u32, x: i64) -> bool {
    match p.checked_pow(k) {
        Some(pk) => x % pk == 0,
        None => x == 0,
    }
}

/// Split a nonzero m as (prime-to-6 part, 2-3 part).
fn strip_six(mut m: u128) -> (u128, u128) {
    debug_assert!(m != 0);
    let mut six = 1u128;
    while m % 2 == 0 {
        m /= 2;
        six *= 2;
    }
    while m % 3 == 0 {
        m /= 3;
        six *= 3;
    }
    (m, six)
}

/// Trial-division factorization with a 2-3-5-7 wheel; fine for the sizes
/// the explorer produces (ht6 <= B_max).
pub fn factor_u128(mut m: u128) -> Vec<(u128, u32)> {
    assert!(m > 0, "factorization of 0 is undefined");
    let mut out = Vec::new();
    for p in [2u128, 3, 5, 7] {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let gaps = wheel_gaps();
    let mut d = 11u128;
    let mut gi = 0usize;
    while d * d <= m {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += gaps[gi] as u128;
        gi = (gi + 1) % gaps.len();
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Gaps between consecutive integers >= 11 coprime to 210, one full period.
fn wheel_gaps() -> Vec<u64> {
    let residues: Vec<u64> = (11..=221)
        .filter(|k| k % 2 != 0 && k % 3 != 0 && k % 5 != 0 && k % 7 != 0)
        .collect();
    residues.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Cap on the 2-3 part of Delta for a curve to belong to the censused
/// family: the away-from-6 proxy ignores curves with unusually large 2-3
/// valuations (and thereby also identifies the family's representative
/// uniquely, since rescaling by 2 or 3 multiplies the 2-3 part by 2^12 or
/// 3^12, far past the cap).
pub const SIXPART_CAP: u64 = 1296; // 6^4

/// Extra margin of the enumeration region past the largest discriminant
/// any counted curve can have: region cap 6^6 B against counted |Delta|
/// <= 6^4 B, a 36x cushion the boundary audit certifies.
pub const REGION_FACTOR: u128 = 46656; // 6^6

pub const ZQ_DISCLAIMER: &str =
    "conjecture-exploration only: away-from-6 proxy with 2-3 part capped, growth reported not asserted";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountedCurve {
    pub a: i64,
    pub b: i64,
    pub ht6: u64,
    pub abs_disc: u128,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZqGridPoint {
    pub bound: u64,
    pub count: u64,
}

/// Result of the empirical Q-side sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ZqExperiment {
    pub b_max: u64,
    pub sixpart_cap: u64,
    pub region_cap: u128,
    /// (A, B) pairs visited by the sweep.
    pub scanned: u128,
    pub grid: Vec<ZqGridPoint>,
    /// Every counted curve, sorted by (ht6, a, b); the same list for any
    /// worker count.
    pub curves: Vec<CountedCurve>,
    /// Least-squares slope of log count against log B over the top decade
    /// of the grid; None when fewer than two usable points exist.
    pub slope: Option<f64>,
    pub slope_window: (u64, u64),
    pub boundary_audit_pass: bool,
    pub max_abs_disc: u128,
    pub elapsed: Duration,
}

/// Count minimal6, semistable6 curves with 0 < ht6 <= B for B on a
/// logarithmic grid up to b_max, by sweeping the (A, B) region
/// |Delta| <= 6^6 b_max and filtering exactly. Counted curves keep their
/// 2-3 part within [`SIXPART_CAP`], which makes the region provably
/// complete for the censused family; the boundary audit then checks that
/// no counted discriminant comes near the region edge.
pub fn z_q_experiment(
    b_max: u64,
    per_decade: u32,
    budget: u64,
    jobs: usize,
) -> Result<ZqExperiment, ArithError> {
    assert!(b_max >= 1);
    assert!(per_decade >= 1);
    let start = Instant::now();
    let region_cap = REGION_FACTOR * b_max as u128;
    let a_max = icbrt(region_cap / 64);
    let b_bound = isqrt(region_cap / 432);
    let scanned = (2 * a_max as u128 + 1) * (2 * b_bound as u128 + 1);
    if scanned > budget as u128 {
        return Err(ArithError::BudgetExceeded { required: scanned, budget });
    }
    let jobs = jobs.max(1);
    let mut curves: Vec<CountedCurve> = if jobs == 1 {
        zq_sweep_worker(b_max, a_max, b_bound, 0, 1)
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs)
                .map(|s| scope.spawn(move || zq_sweep_worker(b_max, a_max, b_bound, s, jobs)))
                .collect();
            let mut all = Vec::new();
            for h in handles {
                all.extend(h.join().expect("sweep worker panicked"));
            }
            all
        })
    };
    curves.sort_by_key(|c| (c.ht6, c.a, c.b));
    let heights: Vec<u64> = curves.iter().map(|c| c.ht6).collect();
    let grid: Vec<ZqGridPoint> = log_grid(b_max, per_decade)
        .into_iter()
        .map(|bound| ZqGridPoint { bound, count: heights.partition_point(|&h| h <= bound) as u64 })
        .collect();
    let window_lo = b_max / 10;
    let window: Vec<&ZqGridPoint> =
        grid.iter().filter(|g| g.bound >= window_lo.max(1) && g.count > 0).collect();
    let slope = fit_loglog_slope(&window);
    let max_abs_disc = curves.iter().map(|c| c.abs_disc).max().unwrap_or(0);
    // Within 1% of the edge would mean the region might be clipping.
    let boundary_audit_pass = max_abs_disc * 100 <= region_cap * 99;
    Ok(ZqExperiment {
        b_max,
        sixpart_cap: SIXPART_CAP,
        region_cap,
        scanned,
        grid,
        curves,
        slope,
        slope_window: (window_lo.max(1), b_max),
        boundary_audit_pass,
        max_abs_disc,
        elapsed: start.elapsed(),
    })
}

fn zq_sweep_worker(
    b_max: u64,
    a_max: u64,
    b_bound: u64,
    start: usize,
    stride: usize,
) -> Vec<CountedCurve> {
    let mut out = Vec::new();
    let a_lo = -(a_max as i64);
    let mut idx = start as i64;
    let span = 2 * a_max as i64 + 1;
    while idx < span {
        let a = a_lo + idx;
        let a_cubed_4 = 4 * (a as i128) * (a as i128) * (a as i128);
        for b in -(b_bound as i64)..=b_bound as i64 {
            let raw = a_cubed_4 + 27 * (b as i128) * (b as i128);
            if raw == 0 {
                continue;
            }
            let abs_disc = 16 * raw.unsigned_abs();
            let (ht6_wide, six_part) = strip_six(abs_disc);
            if ht6_wide > b_max as u128 || six_part > SIXPART_CAP as u128 {
                continue;
            }
            let ht6 = ht6_wide as u64;
            let mut semistable6 = true;
            let mut minimal6 = true;
            for (p, _) in factor_u128(ht6 as u128) {
                if a % p as i64 == 0 {
                    semistable6 = false;
                    break;
                }
                if divides_pow(p as i64, 4, a) && divides_pow(p as i64, 6, b) {
                    minimal6 = false;
                    break;
                }
            }
            if semistable6 && minimal6 {
                out.push(CountedCurve { a, b, ht6, abs_disc });
            }
        }
        idx += stride as i64;
    }
    out
}

/// Logarithmic grid: round(10^{j/per_decade}) deduplicated, 1 through
/// b_max, with b_max always included.
fn log_grid(b_max: u64, per_decade: u32) -> Vec<u64> {
    let mut out = vec![1u64];
    let mut j = 1u32;
    loop {
        let value = 10f64.powf(j as f64 / per_decade as f64).round() as u64;
        if value >= b_max {
            break;
        }
        if value > *out.last().unwrap() {
            out.push(value);
        }
        j += 1;
    }
    if *out.last().unwrap() != b_max {
        out.push(b_max);
    }
    out
}

fn fit_loglog_slope(points: &[&ZqGridPoint]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| (p.bound as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.count as f64).ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

fn isqrt(n: u128) -> u64 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r as u64
}

fn icbrt(n: u128) -> u64 {
    let mut r = (n as f64).cbrt() as u128;
    while r * r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{FieldSpec, Fq};
    use crate::polyfq::Poly;

    fn f5() -> FieldSpec {
        FieldSpec::new(5, 1).unwrap()
    }

    #[test]
    fn heights_of_places() {
        let f = f5();
        let t = Poly::from_ints(&f, &[0, 1]);
        assert_eq!(height_of_place(&f, &t).unwrap(), BigUint::from(5u32));
        // t^2 + 2 has no root in F_5 (squares are 0, 1, 4), so it is an
        // irreducible quadratic: residue field F_25.
        let quad = Poly::from_ints(&f, &[2, 0, 1]);
        assert_eq!(height_of_place(&f, &quad).unwrap(), BigUint::from(25u32));
        let f7 = FieldSpec::new(7, 1).unwrap();
        let lin = Poly::from_ints(&f7, &[3, 1]);
        assert_eq!(height_of_place(&f7, &lin).unwrap(), BigUint::from(7u32));
        let sq = Poly::from_ints(&f, &[0, 0, 1]);
        assert_eq!(height_of_place(&f, &sq).unwrap_err(), ArithError::Reducible);
    }

    #[test]
    fn discriminant_height_and_factorization_identity() {
        let f = f5();
        let w = WeierstrassFibration::new(
            1,
            Poly::from_ints(&f, &[1]),
            Poly::monomial(&f, Fq::ONE, 6),
        )
        .unwrap();
        let h = height_of_discriminant(&w).unwrap();
        assert_eq!(h, BigUint::from(244_140_625u64)); // 5^12
        // Independent product over the fiber configuration.
        let config = w.fiber_configuration().unwrap();
        let mut product = BigUint::one();
        for fp in &config.places {
            product *= BigUint::from(5u64).pow((fp.residue_degree * fp.k) as u32);
        }
        assert_eq!(product, h);
        // Twisting does not change the height.
        let tw = w.lambda_twist(f.element(3).unwrap());
        assert_eq!(height_of_discriminant(&tw).unwrap(), h);
        // Invalid models are rejected.
        let bad = WeierstrassFibration::new(1, Poly::zero(&f), Poly::one(&f)).unwrap();
        assert_eq!(height_of_discriminant(&bad).unwrap_err(), ArithError::InvalidModel);
        // n = 2 over F_7: height 7^24.
        let f7 = FieldSpec::new(7, 1).unwrap();
        let w2 = WeierstrassFibration::new(
            2,
            Poly::one(&f7),
            Poly::monomial(&f7, Fq::ONE, 12),
        )
        .unwrap();
        assert_eq!(height_of_discriminant(&w2).unwrap(), BigUint::from(7u64).pow(24));
    }

    #[test]
    fn z_fqt_examples() {
        // B = 5^12: a single term 5^11 - 5^9 and the exact equality case.
        let z = z_fqt(&HeightQuery { q: 5, bound: BigUint::from(5u64).pow(12) });
        assert_eq!(z.total, BigUint::from(46_875_000u64));
        assert!(z.equality_case);
        assert_eq!(z.bound_value, z.total);
        assert_eq!(z.rows.len(), 1);

        // B = 5^11: no n fits, Z = 0.
        let z = z_fqt(&HeightQuery { q: 5, bound: BigUint::from(5u64).pow(11) });
        assert_eq!(z.total, BigUint::zero());
        assert!(!z.equality_case);
        assert!(z.rows.is_empty());

        // B = 5^24: two terms, again exact equality with the bound.
        let z = z_fqt(&HeightQuery { q: 5, bound: BigUint::from(5u64).pow(24) });
        let expected = (BigUint::from(5u64).pow(11) - BigUint::from(5u64).pow(9))
            + (BigUint::from(5u64).pow(21) - BigUint::from(5u64).pow(19));
        assert_eq!(z.total, expected);
        assert!(z.equality_case);
        assert_eq!(z.bound_value, z.total);
        assert_eq!(z.rows[1].cumulative, z.total);

        // B = 1 is the degenerate equality case: zero on both sides.
        let z = z_fqt(&HeightQuery { q: 5, bound: BigUint::one() });
        assert_eq!(z.total, BigUint::zero());
        assert!(z.equality_case);
        assert_eq!(z.bound_value, BigUint::zero());
    }

    #[test]
    fn z_fqt_strict_inequality_off_powers() {
        for q in [5u64, 7] {
            for b in [2u64, 100, 12_345] {
                let z = z_fqt(&HeightQuery { q, bound: BigUint::from(b) });
                assert!(!z.equality_case);
                assert!(z.total < z.bound_value, "q = {q}, B = {b}");
            }
            // Just off the exact powers.
            let power = BigUint::from(q).pow(12);
            for b in [&power - 1u32, &power + 1u32] {
                let z = z_fqt(&HeightQuery { q, bound: b.clone() });
                assert!(!z.equality_case);
                assert!(z.total < z.bound_value);
            }
        }
    }

    #[test]
    fn z_fqt_term_increments() {
        // Z(q^{12m}) - Z(q^{12(m-1)}) = q^{10m+1} - q^{10m-1}.
        for q in [5u64, 7] {
            for m in 1u32..=4 {
                let hi = z_fqt(&HeightQuery { q, bound: BigUint::from(q).pow(12 * m) });
                let lo = z_fqt(&HeightQuery { q, bound: BigUint::from(q).pow(12 * (m - 1)) });
                let diff = &hi.total - &lo.total;
                let expected = BigUint::from(q).pow(10 * m + 1) - BigUint::from(q).pow(10 * m - 1);
                assert_eq!(diff, expected, "q = {q}, m = {m}");
            }
        }
    }

    #[test]
    fn rational_curve_examples() {
        // (-1, 0): Delta = -16 * 4 * (-1)^3 = 64, so ht6 = 1 and
        // semistability is vacuous.
        let c = rational_curve(-1, 0).unwrap();
        assert_eq!(c.disc, 64);
        assert_eq!(c.ht6, 1);
        assert_eq!(c.six_part, 64);
        assert!(c.semistable6 && c.minimal6);

        // (1, 1): Delta = -496 = -2^4 * 31; 31 does not divide 48.
        let c = rational_curve(1, 1).unwrap();
        assert_eq!(c.disc, -496);
        assert_eq!(c.ht6, 31);
        assert!(c.semistable6 && c.minimal6);

        // (5^4, 5^6) is a non-minimal representative of (1, 1).
        let c = rational_curve(5i64.pow(4), 5i64.pow(6)).unwrap();
        assert!(!c.minimal6);
        assert_eq!(minimal6_reduce(5i64.pow(4), 5i64.pow(6)), (1, 1));

        // Singular: 4A^3 = -27B^2 at (-3, 2).
        assert_eq!(rational_curve(-3, 2).unwrap_err(), ArithError::SingularCurve);
    }

    #[test]
    fn reduction_reaches_the_same_fixed_point() {
        // The (p^4, p^6) step commutes with itself: starting from any
        // rescaling lands on the same representative, whose invariants are
        // therefore well defined.
        for (a, b) in [(1i64, 1i64), (-1, 0), (2, 3), (0, 1), (11, -7)] {
            let base = minimal6_reduce(a, b);
            for p in [5i64, 7, 11] {
                let scaled = minimal6_reduce(a * p.pow(4), b * p.pow(6));
                assert_eq!(scaled, base, "(a, b) = ({a}, {b}), p = {p}");
                let c0 = rational_curve(base.0, base.1).unwrap();
                let c1 = rational_curve(scaled.0, scaled.1).unwrap();
                assert_eq!(c0.ht6, c1.ht6);
                assert_eq!(c0.semistable6, c1.semistable6);
            }
        }
    }

    #[test]
    fn additive_reduction_detected() {
        // A = 5, B = 5: Delta = -16(500 + 675) = -16 * 1175 = -2^4 * 5^2 * 47;
        // 5 | Delta and 5 | A, an additive prime.
        let c = rational_curve(5, 5).unwrap();
        assert_eq!(c.ht6, 25 * 47);
        assert!(!c.semistable6);
    }

    #[test]
    fn factorization_helper() {
        assert_eq!(factor_u128(1), vec![]);
        assert_eq!(factor_u128(496), vec![(2, 4), (31, 1)]);
        assert_eq!(factor_u128(1175), vec![(5, 2), (47, 1)]);
        assert_eq!(
            factor_u128(2u128.pow(10) * 11 * 11 * 10_007),
            vec![(2, 10), (11, 2), (10_007, 1)]
        );
        // A large prime survives the wheel.
        assert_eq!(factor_u128(1_000_003), vec![(1_000_003, 1)]);
    }

    #[test]
    fn zq_experiment_small_run() {
        let exp = z_q_experiment(1_000, 4, 10_000_000, 2).unwrap();
        // Counts are monotone in B (nested height balls).
        for w in exp.grid.windows(2) {
            assert!(w[0].count <= w[1].count);
        }
        // (-1, 0) has ht6 = 1 and is counted at every bound.
        assert!(exp.curves.iter().any(|c| (c.a, c.b) == (-1, 0)));
        assert!(exp.grid.iter().all(|g| g.count >= 1));
        // Every counted curve re-verifies its flags through the standalone
        // constructor, and respects the documented caps.
        for c in &exp.curves {
            let rc = rational_curve(c.a, c.b).unwrap();
            assert!(rc.semistable6 && rc.minimal6);
            assert_eq!(rc.ht6 as u64, c.ht6);
            assert!(c.ht6 <= exp.b_max);
            assert!(rc.six_part <= exp.sixpart_cap as u128);
        }
        assert!(exp.boundary_audit_pass);
        // Determinism across worker counts.
        let exp1 = z_q_experiment(1_000, 4, 10_000_000, 1).unwrap();
        assert_eq!(exp1.curves, exp.curves);
        assert_eq!(exp1.grid, exp.grid);
    }

    #[test]
    fn zq_budget_gate() {
        let err = z_q_experiment(1_000_000, 4, 1_000, 1).unwrap_err();
        match err {
            ArithError::BudgetExceeded { required, budget } => {
                assert!(required > 1_000);
                assert_eq!(budget, 1_000);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn integer_roots() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert_eq!(icbrt(26), 2);
        assert_eq!(icbrt(27), 3);
        assert_eq!(icbrt(1_000_000), 100);
    }
}
