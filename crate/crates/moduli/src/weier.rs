//! Weierstrass models y^2 = x^3 + a4 x + a6 of stable elliptic fibrations
//! over P^1, with a4, a6 polynomial representatives of sections of O(4n),
//! O(6n) in the affine chart x -> \[1:x\].
//!
//! A model is valid when a4 and a6 never vanish simultaneously on P^1:
//! no common irreducible factor over F_q (which covers the algebraic
//! closure), and not both degree-deficient at the infinite place, where a
//! section of O(m) represented by a polynomial of degree d vanishes to
//! order m - d. The discriminant -16(4 a4^3 + 27 a6^2) is a section of
//! O(12n); its divisor locates the nodal fibers, an order-k zero meaning a
//! fiber of type I_k.

use std::fmt;

use thiserror::Error;

use crate::gf::{FieldSpec, Fq};
use crate::polyfq::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeierError {
    #[error("characteristic {0} is not allowed (needs p != 2, 3)")]
    UnsupportedCharacteristic(u64),
    #[error("n must be positive")]
    NonPositiveN,
    #[error("deg {section} = {degree} exceeds the bound {max}")]
    DegreeBound { section: &'static str, degree: usize, max: usize },
    #[error("coefficient polynomials live over different fields")]
    FieldMismatch,
    #[error("operation requires a valid model")]
    InvalidModel,
    #[error("place must be a monic irreducible polynomial or infinity")]
    InvalidPlace,
}

/// A closed point of P^1 over F_q: a monic irreducible polynomial, or the
/// infinite place of the chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "({p})"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// A singular fiber: the place it sits over, the residue degree of that
/// place (1 for infinity), and the Kodaira index k of the I_k fiber, equal
/// to the order of vanishing of the discriminant there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberPlace {
    pub place: Place,
    pub residue_degree: usize,
    pub k: usize,
}

/// The multiset of singular fibers of a valid model; the Kodaira indices
/// weighted by residue degrees always sum to 12n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberConfiguration {
    pub n: u32,
    pub places: Vec<FiberPlace>,
}

impl FiberConfiguration {
    /// Number of distinct singular fibers (closed points).
    pub fn mu(&self) -> usize {
        self.places.len()
    }

    pub fn degree_weighted_sum(&self) -> usize {
        self.places.iter().map(|p| p.k * p.residue_degree).sum()
    }
}

/// Verdict of the common-vanishing check, with a witness on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid(InvalidWitness),
}

/// Where a4 and a6 vanish together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvalidWitness {
    /// A common irreducible factor (every factor of one side is common when
    /// the other side is identically zero).
    CommonFactor(Poly),
    /// Common vanishing at infinity: both sections degree-deficient.
    Infinity,
    /// Both sections vanish identically; no single zero to exhibit.
    A4Zero,
}

impl fmt::Display for InvalidWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidWitness::CommonFactor(p) => write!(f, "common factor {p}"),
            InvalidWitness::Infinity => write!(f, "inf"),
            InvalidWitness::A4Zero => write!(f, "a4 = 0"),
        }
    }
}

/// Reduction type of the fiber over a place.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    Good,
    Multiplicative,
    Additive,
}

/// Kodaira dimension of the total space for a given n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KodairaDimension {
    MinusInfinity,
    Zero,
    One,
}

impl fmt::Display for KodairaDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaDimension::MinusInfinity => write!(f, "-inf"),
            KodairaDimension::Zero => write!(f, "0"),
            KodairaDimension::One => write!(f, "1"),
        }
    }
}

/// Kodaira dimension by n: n = 1 is rational, n = 2 is a K3, n >= 3 is
/// properly elliptic.
pub fn kodaira_dimension(n: u32) -> Result<KodairaDimension, WeierError> {
    match n {
        0 => Err(WeierError::NonPositiveN),
        1 => Ok(KodairaDimension::MinusInfinity),
        2 => Ok(KodairaDimension::Zero),
        _ => Ok(KodairaDimension::One),
    }
}

/// A Weierstrass model (n, a4, a6) over a field of characteristic != 2, 3,
/// with deg a4 <= 4n and deg a6 <= 6n. The holomorphic Euler characteristic
/// of the fibration equals n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassFibration {
    n: u32,
    a4: Poly,
    a6: Poly,
}

impl WeierstrassFibration {
    pub fn new(n: u32, a4: Poly, a6: Poly) -> Result<WeierstrassFibration, WeierError> {
        if n == 0 {
            return Err(WeierError::NonPositiveN);
        }
        if a4.field() != a6.field() {
            return Err(WeierError::FieldMismatch);
        }
        let p = a4.field().characteristic();
        if p == 2 || p == 3 {
            return Err(WeierError::UnsupportedCharacteristic(p));
        }
        let (max4, max6) = (4 * n as usize, 6 * n as usize);
        if let Some(d) = a4.degree() {
            if d > max4 {
                return Err(WeierError::DegreeBound { section: "a4", degree: d, max: max4 });
            }
        }
        if let Some(d) = a6.degree() {
            if d > max6 {
                return Err(WeierError::DegreeBound { section: "a6", degree: d, max: max6 });
            }
        }
        Ok(WeierstrassFibration { n, a4, a6 })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a4(&self) -> &Poly {
        &self.a4
    }

    pub fn a6(&self) -> &Poly {
        &self.a6
    }

    pub fn field(&self) -> &FieldSpec {
        self.a4.field()
    }

    /// The common-vanishing check of the pair (a4, a6) on all of P^1.
    pub fn validate(&self) -> Validity {
        if self.a4.is_zero() && self.a6.is_zero() {
            return Validity::Invalid(InvalidWitness::A4Zero);
        }
        // gcd with a zero side is the monic form of the other side, so an
        // identically-zero section exhibits any factor of its partner.
        let g = self.a4.gcd(&self.a6).expect("not both zero");
        if g.degree().unwrap_or(0) >= 1 {
            let factor = g
                .factor()
                .expect("gcd nonzero")
                .factors
                .into_iter()
                .next()
                .expect("positive degree")
                .0;
            return Validity::Invalid(InvalidWitness::CommonFactor(factor));
        }
        if !self.full_degree_at_infinity() {
            return Validity::Invalid(InvalidWitness::Infinity);
        }
        Validity::Valid
    }

    /// Verdict only, skipping the witness extraction (census loops call
    /// this hundreds of millions of times).
    pub fn is_valid(&self) -> bool {
        if self.a4.is_zero() && self.a6.is_zero() {
            return false;
        }
        let g = self.a4.gcd(&self.a6).expect("not both zero");
        g.degree() == Some(0) && self.full_degree_at_infinity()
    }

    fn full_degree_at_infinity(&self) -> bool {
        self.a4.degree() == Some(4 * self.n as usize)
            || self.a6.degree() == Some(6 * self.n as usize)
    }

    /// Discriminant section Delta = -16(4 a4^3 + 27 a6^2), degree <= 12n.
    pub fn discriminant(&self) -> Poly {
        let f = self.field();
        let a4_cubed = self.a4.mul(&self.a4).mul(&self.a4);
        let a6_squared = self.a6.mul(&self.a6);
        a4_cubed
            .scale(f.from_int(4))
            .add(&a6_squared.scale(f.from_int(27)))
            .scale(f.from_int(-16))
    }

    /// Kodaira fiber configuration of a valid model, read off the
    /// factorization of the discriminant: an irreducible factor of
    /// multiplicity k carries an I_k fiber, and a degree deficiency of the
    /// discriminant puts an I_{12n - deg} fiber over infinity.
    pub fn fiber_configuration(&self) -> Result<FiberConfiguration, WeierError> {
        self.fiber_configuration_seeded(crate::polyfq::DEFAULT_FACTOR_SEED)
    }

    /// As [`WeierstrassFibration::fiber_configuration`], seeding the
    /// equal-degree splitting stream of the discriminant factorization.
    /// The configuration itself does not depend on the seed.
    pub fn fiber_configuration_seeded(&self, seed: u64) -> Result<FiberConfiguration, WeierError> {
        if !self.is_valid() {
            return Err(WeierError::InvalidModel);
        }
        let delta = self.discriminant();
        let twelve_n = 12 * self.n as usize;
        let fact = delta
            .factor_seeded(seed)
            .expect("valid model has nonzero discriminant");
        let mut places: Vec<FiberPlace> = fact
            .factors
            .into_iter()
            .map(|(p, k)| {
                let deg = p.degree().expect("irreducible factors are nonconstant");
                FiberPlace { place: Place::Finite(p), residue_degree: deg, k }
            })
            .collect();
        let deg_delta = delta.degree().expect("nonzero");
        if deg_delta < twelve_n {
            places.push(FiberPlace {
                place: Place::Infinity,
                residue_degree: 1,
                k: twelve_n - deg_delta,
            });
        }
        let config = FiberConfiguration { n: self.n, places };
        assert_eq!(
            config.degree_weighted_sum(),
            twelve_n,
            "degree bookkeeping: sum k * deg must be 12n"
        );
        Ok(config)
    }

    /// Order of vanishing of the discriminant at a place (the discriminant
    /// is a section of O(12n), so at infinity the order is 12n - deg).
    pub fn discriminant_order_at(&self, place: &Place) -> Result<usize, WeierError> {
        let delta = self.discriminant();
        if delta.is_zero() {
            return Err(WeierError::InvalidModel);
        }
        Ok(match place {
            Place::Finite(p) => multiplicity_in(&delta, p),
            Place::Infinity => 12 * self.n as usize - delta.degree().expect("nonzero"),
        })
    }

    /// Reduction type over a place of a valid model: good where the
    /// discriminant does not vanish, multiplicative where it vanishes but
    /// the a4 section does not. The additive verdict is unreachable for
    /// valid models, where a4 and a6 have no common zero.
    pub fn is_semistable_at(&self, place: &Place) -> Result<Reduction, WeierError> {
        if !self.is_valid() {
            return Err(WeierError::InvalidModel);
        }
        if let Place::Finite(p) = place {
            if !p.is_monic() || !p.is_irreducible() {
                return Err(WeierError::InvalidPlace);
            }
        }
        let r = self.reduction_at_raw(place);
        assert_ne!(
            r,
            Reduction::Additive,
            "internal consistency: a valid model cannot have an additive place"
        );
        Ok(r)
    }

    /// Reduction type with no validity gate; callers outside the module use
    /// [`WeierstrassFibration::is_semistable_at`]. Requires a nonzero
    /// discriminant.
    pub(crate) fn reduction_at_raw(&self, place: &Place) -> Reduction {
        let v = self
            .discriminant_order_at(place)
            .expect("raw reduction requires nonzero discriminant");
        if v == 0 {
            return Reduction::Good;
        }
        let a4_vanishes = match place {
            Place::Finite(p) => self.a4.is_zero() || self.a4.divisible_by(p),
            Place::Infinity => self.a4.degree() != Some(4 * self.n as usize),
        };
        if a4_vanishes {
            Reduction::Additive
        } else {
            Reduction::Multiplicative
        }
    }

    /// The twisted model (lambda^4 a4, lambda^6 a6), the same point of the
    /// moduli; lambda must be nonzero.
    pub fn lambda_twist(&self, lambda: Fq) -> WeierstrassFibration {
        assert!(!lambda.is_zero(), "twist scalar must be a unit");
        let f = self.field();
        let l4 = f.pow(lambda, 4);
        let l6 = f.pow(lambda, 6);
        WeierstrassFibration {
            n: self.n,
            a4: self.a4.scale(l4),
            a6: self.a6.scale(l6),
        }
    }
}

/// Multiplicity of a nonzero divisor p in a nonzero f, by repeated
/// division.
fn multiplicity_in(f: &Poly, p: &Poly) -> usize {
    debug_assert!(!f.is_zero() && !p.is_zero());
    let mut m = 0;
    let mut rest = f.clone();
    loop {
        let (s, r) = rest.divrem(p).expect("divisor nonzero");
        if !r.is_zero() {
            return m;
        }
        rest = s;
        m += 1;
    }
}
