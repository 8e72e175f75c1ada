//! Univariate polynomial arithmetic over F_q: ring operations, gcd,
//! deterministic factorization into monic irreducibles, and enumeration
//! streams of monic polynomials.
//!
//! Factorization runs the classical pipeline: squarefree decomposition
//! (gcd with the derivative, with the char-p step extracting p-th-power
//! parts), distinct-degree splitting, then equal-degree splitting. The
//! equal-degree stage draws its splitting polynomials from a fixed-seed
//! ChaCha stream and the factor list is sorted canonically, so the output
//! is reproducible bit for bit.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigUint;
use num_traits::One;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::gf::{FieldSpec, Fq};

/// Seed for the equal-degree splitting stream when none is supplied.
pub const DEFAULT_FACTOR_SEED: u64 = 0x5eed_ca55;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
}

/// A dense univariate polynomial over F_q. Coefficient i multiplies t^i;
/// the highest-index coefficient is nonzero, so the zero polynomial is the
/// empty sequence and its degree is `None`, never a number.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Fq>,
}

impl Poly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<Fq>) -> Poly {
        while coeffs.last() == Some(&Fq::ZERO) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: &FieldSpec) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FieldSpec) -> Poly {
        Poly::constant(field, Fq::ONE)
    }

    pub fn constant(field: &FieldSpec, c: Fq) -> Poly {
        Poly::new(field.clone(), vec![c])
    }

    /// The monomial c * t^k.
    pub fn monomial(field: &FieldSpec, c: Fq, k: usize) -> Poly {
        if c.is_zero() {
            return Poly::zero(field);
        }
        let mut coeffs = vec![Fq::ZERO; k + 1];
        coeffs[k] = c;
        Poly { field: field.clone(), coeffs }
    }

    /// Build from canonical element encodings, constant term first.
    /// Panics if an encoding is out of range for the field.
    pub fn from_reps(field: &FieldSpec, reps: &[u64]) -> Poly {
        let coeffs = reps
            .iter()
            .map(|&r| field.element(r).expect("coefficient encoding in range"))
            .collect();
        Poly::new(field.clone(), coeffs)
    }

    /// Build from integers, each reduced into the prime subfield.
    pub fn from_ints(field: &FieldSpec, ints: &[i64]) -> Poly {
        let coeffs = ints.iter().map(|&k| field.from_int(k)).collect();
        Poly::new(field.clone(), coeffs)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [Fq::ONE]
    }

    /// Coefficient of t^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn leading(&self) -> Option<Fq> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(Fq::ONE)
    }

    fn same_field(&self, other: &Poly) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f.clone(), coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f.clone(), coeffs)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|&c| f.neg(c)).collect();
        Poly::new(f.clone(), coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut coeffs = vec![Fq::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Poly::new(f.clone(), coeffs)
    }

    pub fn scale(&self, c: Fq) -> Poly {
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|&a| f.mul(a, c)).collect();
        Poly::new(f.clone(), coeffs)
    }

    /// Quotient and remainder: f = s*g + r with deg r < deg g.
    pub fn divrem(&self, g: &Poly) -> Result<(Poly, Poly), PolyError> {
        self.same_field(g);
        let dg = g.degree().ok_or(PolyError::DivisionByZero)?;
        let f = &self.field;
        let lead_inv = f.inv(g.leading().unwrap()).expect("leading coefficient nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dg {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![Fq::ZERO; rem.len() - dg];
        while rem.len() > dg {
            let c = f.mul(*rem.last().unwrap(), lead_inv);
            let shift = rem.len() - 1 - dg;
            if !c.is_zero() {
                quot[shift] = c;
                for (i, &gc) in g.coeffs.iter().enumerate() {
                    rem[i + shift] = f.sub(rem[i + shift], f.mul(c, gc));
                }
            }
            rem.pop();
            while rem.last() == Some(&Fq::ZERO) {
                rem.pop();
            }
        }
        Ok((Poly::new(f.clone(), quot), Poly::new(f.clone(), rem)))
    }

    pub fn rem(&self, g: &Poly) -> Result<Poly, PolyError> {
        Ok(self.divrem(g)?.1)
    }

    /// Exact quotient; panics if g does not divide self.
    pub fn divexact(&self, g: &Poly) -> Poly {
        let (s, r) = self.divrem(g).expect("divisor nonzero");
        assert!(r.is_zero(), "divexact called with a non-divisor");
        s
    }

    /// True iff g divides self.
    pub fn divisible_by(&self, g: &Poly) -> bool {
        matches!(self.divrem(g), Ok((_, r)) if r.is_zero())
    }

    pub fn eval(&self, a: Fq) -> Fq {
        let f = &self.field;
        let mut acc = Fq::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, a), c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Poly::new(f.clone(), coeffs)
    }

    /// Monic normalization; the zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) if l == Fq::ONE => self.clone(),
            Some(l) => self.scale(self.field.inv(l).expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor; gcd(f, 0) is the monic form of f.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.same_field(other);
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::BothZero);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// self^exp modulo m, with an arbitrary-precision exponent.
    pub(crate) fn powmod(&self, exp: &BigUint, m: &Poly) -> Poly {
        let f = &self.field;
        let mut acc = Poly::one(f);
        let mut base = self.rem(m).expect("modulus nonzero");
        let bits = exp.bits();
        for i in 0..bits {
            if exp.bit(i) {
                acc = acc.mul(&base).rem(m).expect("modulus nonzero");
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(m).expect("modulus nonzero");
            }
        }
        acc
    }

    /// Irreducibility recheck: degree >= 1 and gcd(f, t^{q^i} - t) constant
    /// for all i <= deg/2.
    pub fn is_irreducible(&self) -> bool {
        let d = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(d) => d,
        };
        let f = self.monic();
        let field = &self.field;
        let q = BigUint::from(field.order());
        let t = Poly::monomial(field, Fq::ONE, 1);
        let mut h = t.clone();
        for _ in 1..=d / 2 {
            h = h.powmod(&q, &f);
            let g = h.sub(&t).gcd(&f).expect("f nonzero");
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// using the default equal-degree splitting seed.
    pub fn factor(&self) -> Result<Factorization, PolyError> {
        self.factor_seeded(DEFAULT_FACTOR_SEED)
    }

    /// As [`Poly::factor`], with an explicit seed for the equal-degree
    /// splitting stream. The factor list itself is independent of the seed
    /// because it is sorted canonically.
    pub fn factor_seeded(&self, seed: u64) -> Result<Factorization, PolyError> {
        let lead = self.leading().ok_or(PolyError::ZeroPolynomial)?;
        let f = self.monic();
        let mut factors: Vec<(Poly, usize)> = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (part, mult) in squarefree_decomposition(&f) {
            for (prod, d) in distinct_degree_split(&part) {
                let mut irreducibles = Vec::new();
                equal_degree_split(&prod, d, &mut rng, &mut irreducibles);
                for irr in irreducibles {
                    debug_assert!(irr.is_irreducible(), "equal-degree split output {irr}");
                    factors.push((irr, mult));
                }
            }
        }
        factors.sort_by(|(a, _), (b, _)| cmp_canonical(a, b));
        Ok(Factorization { unit: lead, factors })
    }
}

/// Canonical polynomial order: by degree, then lexicographic on coefficient
/// encodings from the top coefficient down. Used for factor lists and
/// anywhere a deterministic order of polynomials is needed.
pub fn cmp_canonical(a: &Poly, b: &Poly) -> std::cmp::Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::sub(self, rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.rep()) {
                (0, r) => write!(f, "{r}")?,
                (1, 1) => write!(f, "t")?,
                (1, r) => write!(f, "{r}t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, r) => write!(f, "{r}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// A complete factorization: unit * prod factors[i]^mult[i] reconstructs
/// the input exactly; factors are monic, irreducible, pairwise distinct,
/// and canonically ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fq,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    /// Multiply the factorization back out.
    pub fn product(&self, field: &FieldSpec) -> Poly {
        let mut acc = Poly::constant(field, self.unit);
        for (p, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(p);
            }
        }
        acc
    }

    /// Re-certify every listed factor irreducible and the multiplicities
    /// positive; the reconstruction check is separate (see `product`).
    pub fn recheck_irreducible(&self) -> bool {
        self.factors.iter().all(|(p, m)| *m >= 1 && p.is_irreducible())
    }
}

/// Squarefree decomposition of a monic f: pairwise coprime monic parts with
/// distinct multiplicities, f = prod part^mult. Char-p step: when the
/// derivative vanishes, f = g(t^p) and the p-th root is extracted by the
/// inverse Frobenius on coefficients.
fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    assert!(f.is_monic(), "squarefree decomposition expects monic input");
    let mut out = Vec::new();
    if f.degree() == Some(0) {
        return out;
    }
    let deriv = f.derivative();
    if deriv.is_zero() {
        for (part, mult) in squarefree_decomposition(&pth_root(f)) {
            out.push((part, mult * f.field().characteristic() as usize));
        }
        return out;
    }
    let mut c = f.gcd(&deriv).expect("f nonzero");
    let mut w = f.divexact(&c);
    let mut i = 1usize;
    while !w.is_one() {
        let y = w.gcd(&c).expect("w nonzero");
        let part = w.divexact(&y);
        if !part.is_one() {
            out.push((part, i));
        }
        c = c.divexact(&y);
        w = y;
        i += 1;
    }
    // What is left of c collects exactly the factors whose multiplicity is
    // divisible by p; it is a p-th power.
    if !c.is_one() {
        for (part, mult) in squarefree_decomposition(&pth_root(&c)) {
            out.push((part, mult * f.field().characteristic() as usize));
        }
    }
    out
}

/// p-th root of a polynomial of the form g(t^p): coefficient j*p maps to
/// its inverse Frobenius image c^{q/p}.
fn pth_root(f: &Poly) -> Poly {
    let field = f.field().clone();
    let p = field.characteristic() as usize;
    let root_exp = field.order() / field.characteristic();
    let d = f.degree().expect("nonzero");
    assert!(d % p == 0, "input is not a polynomial in t^p");
    for (j, c) in f.coeffs().iter().enumerate() {
        if j % p != 0 {
            assert!(c.is_zero(), "input is not a polynomial in t^p");
        }
    }
    let coeffs: Vec<Fq> = (0..=d / p).map(|j| field.pow(f.coeff(j * p), root_exp)).collect();
    Poly::new(field, coeffs)
}

/// Distinct-degree splitting of a squarefree monic polynomial: returns
/// (product of all irreducible factors of degree d, d) pairs.
fn distinct_degree_split(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field().clone();
    let q = BigUint::from(field.order());
    let t = Poly::monomial(&field, Fq::ONE, 1);
    let mut current = f.clone();
    let mut h = t.rem(&current).expect("f nonzero");
    let mut out = Vec::new();
    let mut d = 0usize;
    while let Some(dc) = current.degree() {
        if dc == 0 {
            break;
        }
        d += 1;
        if 2 * d > dc {
            out.push((current.clone(), dc));
            break;
        }
        h = h.powmod(&q, &current);
        let g = h.sub(&t).gcd(&current).expect("current nonzero");
        if g.degree() != Some(0) {
            current = current.divexact(&g);
            out.push((g, d));
            if current.degree() == Some(0) {
                break;
            }
            h = h.rem(&current).expect("current nonzero");
        }
    }
    out
}

/// Equal-degree splitting (Cantor-Zassenhaus) of a squarefree monic product
/// of irreducibles all of degree d. Odd q uses the quadratic-residue
/// splitter T^{(q^d-1)/2} - 1; q = 2^e uses the trace splitter
/// sum_{i < e*d} T^{2^i}.
fn equal_degree_split(f: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let deg = f.degree().expect("nonzero");
    if deg == d {
        out.push(f.clone());
        return;
    }
    let field = f.field().clone();
    let q = field.order();
    let split = loop {
        let t_poly = random_poly_below(&field, deg, rng);
        if t_poly.degree().is_none() {
            continue;
        }
        let g = if q % 2 == 1 {
            let exp = (BigUint::from(q).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            let h = t_poly.powmod(&exp, f);
            h.sub(&Poly::one(&field)).gcd(f).expect("f nonzero")
        } else {
            let e = field.extension_degree() as usize;
            let mut trace = t_poly.rem(f).expect("f nonzero");
            let mut cur = trace.clone();
            let two = BigUint::from(2u32);
            for _ in 1..e * d {
                cur = cur.powmod(&two, f);
                trace = trace.add(&cur);
            }
            trace.gcd(f).expect("f nonzero")
        };
        if let Some(dg) = g.degree() {
            if dg > 0 && dg < deg {
                break g;
            }
        }
    };
    equal_degree_split(&split, d, rng, out);
    equal_degree_split(&f.divexact(&split), d, rng, out);
}

/// Random polynomial of degree < bound from the seeded stream.
fn random_poly_below(field: &FieldSpec, bound: usize, rng: &mut ChaCha8Rng) -> Poly {
    let q = field.order();
    let coeffs: Vec<Fq> = (0..bound).map(|_| Fq(rng.next_u64() % q)).collect();
    Poly::new(field.clone(), coeffs)
}

// ---------------------------------------------------------------------------
// Enumeration streams

/// Number of monic polynomials of degree exactly d, i.e. q^d.
pub fn monic_poly_count(field: &FieldSpec, d: usize) -> u128 {
    (field.order() as u128)
        .checked_pow(d as u32)
        .expect("enumeration size fits u128")
}

/// The index-th monic polynomial of degree exactly d: coefficient of t^i is
/// the element encoded by the i-th base-q digit of the index. Index 0 is
/// t^d; the stream for d = 0 is the single polynomial 1.
pub fn monic_poly_at(field: &FieldSpec, d: usize, index: u64) -> Poly {
    let q = field.order();
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut r = index;
    for _ in 0..d {
        coeffs.push(Fq(r % q));
        r /= q;
    }
    assert!(r == 0, "index {index} out of range for degree {d} over {field}");
    coeffs.push(Fq::ONE);
    Poly::new(field.clone(), coeffs)
}

/// Deterministic stream of all q^d monic polynomials of degree exactly d.
/// Workers can partition the stream by (start, stride) over the index.
pub fn monic_polys(field: &FieldSpec, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let total = monic_poly_count(field, d);
    assert!(total <= u64::MAX as u128, "enumeration too large to index");
    (0..total as u64).map(move |i| monic_poly_at(field, d, i))
}
