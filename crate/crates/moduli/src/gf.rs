//! Exact arithmetic in finite fields F_{p^e} with word-sized prime p.
//!
//! A [`FieldSpec`] fixes the field once and for all: primality of p is
//! certified by trial division, and for e > 1 the monic modulus is certified
//! irreducible (or generated deterministically as the lexicographically
//! smallest monic irreducible of degree e). Elements are plain [`Fq`] values
//! holding their canonical integer encoding; every operation takes the field
//! explicitly, so there is no hidden global state and exhaustive multi-field
//! loops stay trivially thread-safe.

use std::fmt;
use thiserror::Error;

/// Characteristic bound: p < 2^32 keeps all residue products inside u64.
const MAX_P: u64 = 1 << 32;
/// Field size bound: q < 2^63 keeps element encodings and counts in u64.
const MAX_Q: u64 = 1 << 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} exceeds the word-size bound 2^32")]
    PrimeTooLarge(u64),
    #[error("field size p^e = {p}^{e} exceeds the supported range")]
    FieldTooLarge { p: u64, e: u32 },
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("modulus degree {got} does not match extension degree {want}")]
    DegreeMismatch { want: u32, got: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element encoding {rep} does not belong to a field of {q} elements")]
    FieldMismatch { rep: u64, q: u64 },
}

/// An element of F_q, stored as the canonical integer encoding
/// `sum_i c_i p^i` of its power-basis coordinates (c_0, ..., c_{e-1}).
///
/// Equality of elements is equality of encodings; for prime fields the
/// encoding is simply the residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(pub(crate) u64);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    /// The canonical integer encoding in [0, q).
    pub fn rep(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A finite field F_{p^e}: prime characteristic p, extension degree e, and
/// for e > 1 the monic irreducible modulus of the power basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    e: u32,
    q: u64,
    /// Modulus coefficients, constant term first, length e + 1, leading 1.
    /// Empty exactly when e = 1.
    modulus: Vec<u64>,
}

impl FieldSpec {
    /// Build F_{p^e}. For e > 1 the modulus is generated deterministically:
    /// the lexicographically smallest monic irreducible of degree e over F_p
    /// (coefficient tuples compared from the t^{e-1} coefficient down), so
    /// the same (p, e) always yields the same field.
    pub fn new(p: u64, e: u32) -> Result<FieldSpec, GfError> {
        let q = Self::check_p_e(p, e)?;
        if e == 1 {
            return Ok(FieldSpec { p, e, q, modulus: Vec::new() });
        }
        let modulus = smallest_irreducible(p, e);
        Ok(FieldSpec { p, e, q, modulus })
    }

    /// Build F_{p^e} with an explicit modulus (constant term first). The
    /// modulus is reduced mod p, must have degree exactly e, and is
    /// normalized to be monic; irreducibility is certified by checking that
    /// gcd(m, x^{p^i} - x) is constant for all i <= e/2.
    pub fn with_modulus(p: u64, e: u32, modulus: &[u64]) -> Result<FieldSpec, GfError> {
        let q = Self::check_p_e(p, e)?;
        if e == 1 {
            return Err(GfError::DegreeMismatch { want: 1, got: modulus.len().saturating_sub(1) });
        }
        let mut m: Vec<u64> = modulus.iter().map(|&c| c % p).collect();
        fp_trim(&mut m);
        match fp_deg(&m) {
            Some(d) if d == e as usize => {}
            other => {
                return Err(GfError::DegreeMismatch { want: e, got: other.unwrap_or(0) });
            }
        }
        // A unit multiple generates the same ideal, so monic-normalize.
        let lead_inv = modpow(*m.last().unwrap(), p - 2, p);
        for c in m.iter_mut() {
            *c = mulmod(*c, lead_inv, p);
        }
        if !fp_is_irreducible(&m, p) {
            return Err(GfError::ReducibleModulus(p));
        }
        Ok(FieldSpec { p, e, q, modulus: m })
    }

    fn check_p_e(p: u64, e: u32) -> Result<u64, GfError> {
        if p >= MAX_P {
            return Err(GfError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        assert!(e >= 1, "extension degree must be at least 1");
        let q = p
            .checked_pow(e)
            .filter(|&q| q < MAX_Q)
            .ok_or(GfError::FieldTooLarge { p, e })?;
        Ok(q)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.e
    }

    /// Cardinality q = p^e.
    pub fn order(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients (constant first, monic), or None for e = 1.
    pub fn modulus(&self) -> Option<&[u64]> {
        if self.e == 1 {
            None
        } else {
            Some(&self.modulus)
        }
    }

    /// The validated element with the given canonical encoding.
    pub fn element(&self, rep: u64) -> Result<Fq, GfError> {
        if rep < self.q {
            Ok(Fq(rep))
        } else {
            Err(GfError::FieldMismatch { rep, q: self.q })
        }
    }

    /// Image of an integer under Z -> F_q (lands in the prime subfield).
    pub fn from_int(&self, k: i64) -> Fq {
        Fq(k.rem_euclid(self.p as i64) as u64)
    }

    /// Element from power-basis coordinates (entries reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fq, GfError> {
        if coeffs.len() > self.e as usize {
            return Err(GfError::DegreeMismatch { want: self.e, got: coeffs.len() });
        }
        let mut rep = 0u64;
        for &c in coeffs.iter().rev() {
            rep = rep * self.p + c % self.p;
        }
        Ok(Fq(rep))
    }

    /// Power-basis coordinates (c_0, ..., c_{e-1}) of an element.
    pub fn coeffs(&self, a: Fq) -> Vec<u64> {
        self.check(a);
        let mut v = Vec::with_capacity(self.e as usize);
        let mut r = a.0;
        for _ in 0..self.e {
            v.push(r % self.p);
            r /= self.p;
        }
        v
    }

    #[inline]
    fn check(&self, a: Fq) {
        assert!(
            a.0 < self.q,
            "element encoding {} does not belong to {self}",
            a.0
        );
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        self.check(a);
        self.check(b);
        if self.e == 1 {
            let s = a.0 + b.0;
            Fq(if s >= self.p { s - self.p } else { s })
        } else {
            let (x, y) = (self.decode(a), self.decode(b));
            let sum: Vec<u64> = x
                .iter()
                .zip(&y)
                .map(|(&u, &v)| {
                    let s = u + v;
                    if s >= self.p {
                        s - self.p
                    } else {
                        s
                    }
                })
                .collect();
            self.encode(&sum)
        }
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        self.check(a);
        if self.e == 1 {
            Fq(if a.0 == 0 { 0 } else { self.p - a.0 })
        } else {
            let x = self.decode(a);
            let neg: Vec<u64> = x.iter().map(|&u| if u == 0 { 0 } else { self.p - u }).collect();
            self.encode(&neg)
        }
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        self.check(a);
        self.check(b);
        if self.e == 1 {
            Fq(mulmod(a.0, b.0, self.p))
        } else {
            let (x, y) = (self.decode(a), self.decode(b));
            let mut prod = vec![0u64; 2 * self.e as usize - 1];
            for (i, &u) in x.iter().enumerate() {
                if u == 0 {
                    continue;
                }
                for (j, &v) in y.iter().enumerate() {
                    let acc = (u as u128 * v as u128 + prod[i + j] as u128) % self.p as u128;
                    prod[i + j] = acc as u64;
                }
            }
            fp_trim(&mut prod);
            let r = fp_rem(prod, &self.modulus, self.p);
            let mut padded = r;
            padded.resize(self.e as usize, 0);
            self.encode(&padded)
        }
    }

    pub fn pow(&self, a: Fq, mut k: u64) -> Fq {
        self.check(a);
        let mut base = a;
        let mut acc = Fq::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// Multiplicative inverse, via a^(q-2) (Lagrange).
    pub fn inv(&self, a: Fq) -> Result<Fq, GfError> {
        self.check(a);
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// All q elements in a fixed deterministic order: 0 first, 1 second,
    /// then ascending by canonical encoding.
    pub fn elements(&self) -> Elements {
        Elements { next: 0, q: self.q }
    }

    fn decode(&self, a: Fq) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.e as usize);
        let mut r = a.0;
        for _ in 0..self.e {
            v.push(r % self.p);
            r /= self.p;
        }
        v
    }

    fn encode(&self, coeffs: &[u64]) -> Fq {
        let mut rep = 0u64;
        for &c in coeffs.iter().rev() {
            rep = rep * self.p + c;
        }
        Fq(rep)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{} = F_{}[x]/({})", self.q, self.p, fp_display(&self.modulus))
        }
    }
}

/// Iterator over all elements of a field in canonical order.
pub struct Elements {
    next: u64,
    q: u64,
}

impl Iterator for Elements {
    type Item = Fq;

    fn next(&mut self) -> Option<Fq> {
        if self.next < self.q {
            let out = Fq(self.next);
            self.next += 1;
            Some(out)
        } else {
            None
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.q - self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

/// Deterministic primality by trial division; sufficient for p < 2^32.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    // a, b < p < 2^32, so the product fits in u64.
    (a * b) % p
}

pub(crate) fn modpow(mut a: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while k > 0 {
        if k & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        k >>= 1;
        if k > 0 {
            a = mulmod(a, a, p);
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Internal F_p[x] helpers (dense, constant term first, entries < p). These
// exist only to certify and generate moduli and to reduce extension-field
// products; general polynomial arithmetic over F_q lives in `polyfq`.

fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_deg(v: &[u64]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

/// Remainder of a modulo the monic polynomial m.
fn fp_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = fp_deg(m).expect("modulus is nonzero");
    while let Some(da) = fp_deg(&a) {
        if da < dm {
            break;
        }
        let lead = a[da];
        if lead != 0 {
            let shift = da - dm;
            for (i, &mc) in m.iter().enumerate() {
                let sub = mulmod(lead, mc, p);
                let idx = i + shift;
                a[idx] = (a[idx] + p - sub) % p;
            }
        }
        a.pop();
        fp_trim(&mut a);
    }
    a
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &u) in a.iter().enumerate() {
        if u == 0 {
            continue;
        }
        for (j, &v) in b.iter().enumerate() {
            let acc = (u as u128 * v as u128 + prod[i + j] as u128) % p as u128;
            prod[i + j] = acc as u64;
        }
    }
    fp_trim(&mut prod);
    fp_rem(prod, m, p)
}

/// h^k mod m by binary exponentiation.
fn fp_powmod(h: &[u64], mut k: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = h.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            acc = fp_mulmod(&acc, &base, m, p);
        }
        k >>= 1;
        if k > 0 {
            base = fp_mulmod(&base, &base, m, p);
        }
    }
    acc
}

/// Monic gcd over F_p.
fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut f = a.to_vec();
    let mut g = b.to_vec();
    fp_trim(&mut f);
    fp_trim(&mut g);
    while !g.is_empty() {
        let r = fp_rem_general(&f, &g, p);
        f = g;
        g = r;
    }
    if let Some(d) = fp_deg(&f) {
        let inv = modpow(f[d], p - 2, p);
        for c in f.iter_mut() {
            *c = mulmod(*c, inv, p);
        }
    }
    f
}

/// Remainder of a modulo an arbitrary nonzero b.
fn fp_rem_general(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = fp_deg(b).expect("divisor is nonzero");
    let lead_inv = modpow(b[db], p - 2, p);
    let mut r = a.to_vec();
    while let Some(dr) = fp_deg(&r) {
        if dr < db {
            break;
        }
        let c = mulmod(r[dr], lead_inv, p);
        if c != 0 {
            let shift = dr - db;
            for (i, &bc) in b.iter().enumerate() {
                let sub = mulmod(c, bc, p);
                let idx = i + shift;
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
        r.pop();
        fp_trim(&mut r);
    }
    r
}

/// Irreducibility over F_p: no factor of degree <= e/2, certified by
/// gcd(m, x^{p^i} - x) = 1 for i = 1..=e/2.
fn fp_is_irreducible(m: &[u64], p: u64) -> bool {
    let e = match fp_deg(m) {
        Some(0) | None => return false,
        Some(1) => return true,
        Some(e) => e,
    };
    let x = vec![0u64, 1];
    let mut h = x.clone();
    for _ in 1..=e / 2 {
        h = fp_powmod(&h, p, m, p);
        // h - x mod m
        let mut diff = h.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        fp_trim(&mut diff);
        let g = fp_gcd(&diff, m, p);
        if fp_deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree e over F_p,
/// comparing coefficient tuples (c_{e-1}, ..., c_0).
fn smallest_irreducible(p: u64, e: u32) -> Vec<u64> {
    let e = e as usize;
    let total = p.checked_pow(e as u32).expect("q fits u64");
    for m in 0..total {
        let mut coeffs = Vec::with_capacity(e + 1);
        let mut r = m;
        for _ in 0..e {
            coeffs.push(r % p);
            r /= p;
        }
        coeffs.push(1);
        if fp_is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

fn fp_display(v: &[u64]) -> String {
    if v.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (i, &c) in v.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (i, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        };
        parts.push(term);
    }
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldSpec {
        FieldSpec::new(5, 1).unwrap()
    }

    fn f25() -> FieldSpec {
        FieldSpec::new(5, 2).unwrap()
    }

    #[test]
    fn prime_field_construction() {
        let f = f5();
        assert_eq!(f.order(), 5);
        assert_eq!(f.modulus(), None);
        assert_eq!(FieldSpec::new(6, 1).unwrap_err(), GfError::NotPrime(6));
        assert_eq!(FieldSpec::new(1, 1).unwrap_err(), GfError::NotPrime(1));
    }

    #[test]
    fn deterministic_modulus_is_lex_smallest() {
        // Monic quadratics x^2 + bx + c over F_5 in lexicographic order on
        // (b, c): the first without a root is x^2 + 2 (squares are 0, 1, 4,
        // and -1, -2 are not among the negated constants' squares).
        let f = f25();
        assert_eq!(f.modulus(), Some(&[2, 0, 1][..]));
        // Same (p, e) twice yields the same field.
        assert_eq!(f, FieldSpec::new(5, 2).unwrap());
    }

    #[test]
    fn explicit_modulus_certification() {
        // x^2 + 1 = (x+2)(x+3) over F_5 is rejected.
        assert_eq!(
            FieldSpec::with_modulus(5, 2, &[1, 0, 1]).unwrap_err(),
            GfError::ReducibleModulus(5)
        );
        // x^2 + x + 1 over F_5: 1 + x + x^2 has discriminant -3 = 2, a
        // non-square mod 5, so it is irreducible.
        let f = FieldSpec::with_modulus(5, 2, &[1, 1, 1]).unwrap();
        assert_eq!(f.order(), 25);
        assert_eq!(
            FieldSpec::with_modulus(5, 2, &[1, 1]).unwrap_err(),
            GfError::DegreeMismatch { want: 2, got: 1 }
        );
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = f5();
        let three = f.element(3).unwrap();
        let four = f.element(4).unwrap();
        assert_eq!(f.add(three, four), f.element(2).unwrap());
        assert_eq!(f.inv(f.element(2).unwrap()).unwrap(), three);
        assert_eq!(f.inv(Fq::ZERO).unwrap_err(), GfError::DivisionByZero);
        assert_eq!(f.from_int(-16), four);
        assert_eq!(f.from_int(27), f.element(2).unwrap());
    }

    #[test]
    fn extension_inverse_of_generator() {
        // x * inv(x) = 1 in F_25 with the generated modulus.
        let f = f25();
        let x = f.from_coeffs(&[0, 1]).unwrap();
        let xi = f.inv(x).unwrap();
        assert_eq!(f.mul(x, xi), Fq::ONE);
        // Against the modulus x^2 + 2: x * (-x/2) = -x^2/2 = 1, i.e.
        // inv(x) = 2x since x^2 = -2 = 3 and 2x*x = 2*3 = 6 = 1.
        assert_eq!(xi, f.from_coeffs(&[0, 2]).unwrap());
    }

    #[test]
    fn elements_stream_order_and_cardinality() {
        let f = f5();
        let all: Vec<u64> = f.elements().map(Fq::rep).collect();
        assert_eq!(all, vec![0, 1, 2, 3, 4]);

        let f = f25();
        let all: Vec<Fq> = f.elements().collect();
        assert_eq!(all.len(), 25);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 25);
        assert_eq!(all[0], Fq::ZERO);
        assert_eq!(all[1], Fq::ONE);
    }

    #[test]
    fn element_sum_vanishes_for_q_gt_2() {
        // sum_{a in F_q} a = 0 for q > 2, by direct summation.
        for f in [f5(), f25(), FieldSpec::new(7, 1).unwrap()] {
            let total = f.elements().fold(Fq::ZERO, |acc, a| f.add(acc, a));
            assert_eq!(total, Fq::ZERO, "element sum in {f}");
        }
    }

    #[test]
    fn fermat_lagrange_exhaustive_small_fields() {
        // pow(a, q-1) = 1 for all a != 0, exhaustively for q <= 49.
        let fields = [
            FieldSpec::new(2, 1).unwrap(),
            FieldSpec::new(3, 1).unwrap(),
            FieldSpec::new(2, 2).unwrap(),
            FieldSpec::new(5, 1).unwrap(),
            FieldSpec::new(7, 1).unwrap(),
            FieldSpec::new(2, 3).unwrap(),
            FieldSpec::new(3, 2).unwrap(),
            FieldSpec::new(11, 1).unwrap(),
            FieldSpec::new(13, 1).unwrap(),
            FieldSpec::new(2, 4).unwrap(),
            FieldSpec::new(5, 2).unwrap(),
            FieldSpec::new(3, 3).unwrap(),
            FieldSpec::new(2, 5).unwrap(),
            FieldSpec::new(7, 2).unwrap(),
        ];
        for f in &fields {
            for a in f.elements().skip(1) {
                assert_eq!(f.pow(a, f.order() - 1), Fq::ONE, "a = {:?} in {f}", a);
            }
        }
    }

    #[test]
    fn ring_laws_exhaustive_tiny_fields() {
        // Associativity, distributivity and inverses, exhaustive for q <= 9.
        for f in [
            FieldSpec::new(2, 1).unwrap(),
            FieldSpec::new(5, 1).unwrap(),
            FieldSpec::new(7, 1).unwrap(),
            FieldSpec::new(2, 3).unwrap(),
            FieldSpec::new(3, 2).unwrap(),
        ] {
            for a in f.elements() {
                for b in f.elements() {
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                    assert_eq!(f.add(f.sub(a, b), b), a);
                }
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq::ONE);
                }
            }
        }
    }

    #[test]
    fn coeff_round_trip() {
        let f = f25();
        for a in f.elements() {
            let c = f.coeffs(a);
            assert_eq!(f.from_coeffs(&c).unwrap(), a);
        }
    }
}
