//! Grothendieck-ring calculator on the subring Z\[L\] generated by the
//! Lefschetz motive L = \[A^1\].
//!
//! Every class manipulated here is an integer polynomial in L: the class of
//! a point, \[G_m\] = L - 1, the coprime-pair classes \[Poly_1^{(d1,d2)}\],
//! the strata \[F_{k,l}\] = \[G_m\]\[Poly_1^{(k,l)}\], and the moduli class
//! itself, assembled either stratum by stratum or directly from the closed
//! form L^{10n+1} - L^{10n-1}. The point-count homomorphism #_q is
//! evaluation at L = q.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// An element of Z\[L\]: coefficient i multiplies L^i, top coefficient
/// nonzero. Coefficients are arbitrary precision so specializations at
/// large q and n stay exact.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MotiveClass {
    coeffs: Vec<BigInt>,
}

impl MotiveClass {
    pub fn zero() -> MotiveClass {
        MotiveClass { coeffs: Vec::new() }
    }

    pub fn one() -> MotiveClass {
        MotiveClass::lefschetz_pow(0)
    }

    /// The Lefschetz motive L = [A^1].
    pub fn lefschetz() -> MotiveClass {
        MotiveClass::lefschetz_pow(1)
    }

    /// L^k, the class of affine k-space.
    pub fn lefschetz_pow(k: usize) -> MotiveClass {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        MotiveClass { coeffs }
    }

    /// \[G_m\] = L - 1.
    pub fn gm() -> MotiveClass {
        MotiveClass::lefschetz().sub(&MotiveClass::one())
    }

    pub fn from_int(k: i64) -> MotiveClass {
        MotiveClass::new(vec![BigInt::from(k)])
    }

    pub fn new(mut coeffs: Vec<BigInt>) -> MotiveClass {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        MotiveClass { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in L, or None for the zero class.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonzero terms as (exponent, coefficient), highest exponent first.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
    }

    pub fn add(&self, other: &MotiveClass) -> MotiveClass {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        MotiveClass::new(coeffs)
    }

    pub fn sub(&self, other: &MotiveClass) -> MotiveClass {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        MotiveClass::new(coeffs)
    }

    pub fn neg(&self) -> MotiveClass {
        MotiveClass::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &MotiveClass) -> MotiveClass {
        if self.is_zero() || other.is_zero() {
            return MotiveClass::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        MotiveClass::new(coeffs)
    }

    /// The point-count homomorphism #_q: evaluation at L = q. Well defined
    /// as a count of F_q-points for char(F_q) != 2, 3; the polynomial
    /// evaluation itself is exact for any q.
    pub fn point_count(&self, q: u64) -> BigInt {
        let q = BigInt::from(q);
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &q + c;
        }
        acc
    }
}

impl fmt::Display for MotiveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in self.terms() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (exp, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "L")?,
                (1, false) => write!(f, "{mag}L")?,
                (e, true) => write!(f, "L^{e}")?,
                (e, false) => write!(f, "{mag}L^{e}")?,
            }
        }
        Ok(())
    }
}

/// [Poly_1^{(d1,d2)}], the class of coprime monic pairs of degrees exactly
/// (d1, d2): L^{d1+d2} - L^{d1+d2-1} when both degrees are positive, and
/// L^{d1+d2} when either is zero.
pub fn poly_class(d1: usize, d2: usize) -> MotiveClass {
    if d1 > 0 && d2 > 0 {
        MotiveClass::lefschetz_pow(d1 + d2).sub(&MotiveClass::lefschetz_pow(d1 + d2 - 1))
    } else {
        MotiveClass::lefschetz_pow(d1 + d2)
    }
}

/// \[F_{k,l}\] = \[G_m\]\[F'_{k,l}\] with \[F'_{k,l}\] = \[Poly_1^{(k,l)}\]:
/// each stratum is a trivial G_m-bundle over its monic locus.
pub fn stratum_class(k: usize, l: usize) -> MotiveClass {
    MotiveClass::gm().mul(&poly_class(k, l))
}

/// The moduli class assembled stratum by stratum:
/// [F_{4n,6n}] + sum_{k<4n} [F_{k,6n}] + sum_{l<6n} [F_{4n,l}].
/// Deliberately re-derives the sum instead of calling the closed form, so
/// the identity between the two is a meaningful check.
pub fn moduli_class_stratified(n: u32) -> MotiveClass {
    assert!(n >= 1, "n must be positive");
    let (four_n, six_n) = (4 * n as usize, 6 * n as usize);
    let mut acc = stratum_class(four_n, six_n);
    for k in 0..four_n {
        acc = acc.add(&stratum_class(k, six_n));
    }
    for l in 0..six_n {
        acc = acc.add(&stratum_class(four_n, l));
    }
    acc
}

/// The closed form of the moduli class: L^{10n+1} - L^{10n-1}.
pub fn moduli_class_closed(n: u32) -> MotiveClass {
    assert!(n >= 1, "n must be positive");
    let n = n as usize;
    MotiveClass::lefschetz_pow(10 * n + 1).sub(&MotiveClass::lefschetz_pow(10 * n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn poly_class_branches() {
        assert_eq!(
            poly_class(4, 6),
            MotiveClass::lefschetz_pow(10).sub(&MotiveClass::lefschetz_pow(9))
        );
        assert_eq!(poly_class(0, 6), MotiveClass::lefschetz_pow(6));
        assert_eq!(poly_class(0, 0), MotiveClass::one());
    }

    #[test]
    fn poly_class_symmetric() {
        for d1 in 0..=8 {
            for d2 in 0..=8 {
                assert_eq!(poly_class(d1, d2), poly_class(d2, d1));
            }
        }
    }

    #[test]
    fn stratum_class_is_gm_bundle() {
        assert_eq!(stratum_class(4, 6), MotiveClass::gm().mul(&poly_class(4, 6)));
        assert_eq!(
            stratum_class(0, 6),
            MotiveClass::gm().mul(&MotiveClass::lefschetz_pow(6))
        );
        assert_eq!(stratum_class(0, 0), MotiveClass::gm());
    }

    #[test]
    fn moduli_class_examples() {
        let n1 = moduli_class_closed(1);
        assert_eq!(
            n1,
            MotiveClass::lefschetz_pow(11).sub(&MotiveClass::lefschetz_pow(9))
        );
        assert_eq!(n1.to_string(), "L^11 - L^9");
        assert_eq!(
            moduli_class_closed(3),
            MotiveClass::lefschetz_pow(31).sub(&MotiveClass::lefschetz_pow(29))
        );
        assert_eq!(
            moduli_class_closed(2).to_string(),
            "L^21 - L^19"
        );
    }

    #[test]
    fn telescoping_identity() {
        // The stratified sum equals the closed form, symbolically, 1..20.
        for n in 1..=20 {
            assert_eq!(moduli_class_stratified(n), moduli_class_closed(n), "n = {n}");
        }
    }

    #[test]
    fn closed_form_satisfies_recurrence() {
        // [Poly_1^{(d1,d2)}] = L^{d1+d2} - sum_{k>=1} [Poly_1^{(d1-k,d2-k)}] L^k,
        // the sum running while both degrees stay nonnegative.
        for d1 in 0..=12usize {
            for d2 in 0..=12usize {
                let mut rhs = MotiveClass::lefschetz_pow(d1 + d2);
                for k in 1..=d1.min(d2) {
                    rhs = rhs.sub(&poly_class(d1 - k, d2 - k).mul(&MotiveClass::lefschetz_pow(k)));
                }
                assert_eq!(poly_class(d1, d2), rhs, "(d1, d2) = ({d1}, {d2})");
            }
        }
    }

    #[test]
    fn point_count_examples() {
        let n1 = moduli_class_closed(1);
        assert_eq!(n1.point_count(5), BigInt::from(46_875_000u64));
        assert_eq!(
            n1.point_count(5),
            BigInt::from(48_828_125u64) - BigInt::from(1_953_125u64)
        );
        assert_eq!(MotiveClass::gm().point_count(11), BigInt::from(10));
        assert_eq!(MotiveClass::one().point_count(997), BigInt::from(1));
    }

    #[test]
    fn display_forms() {
        assert_eq!(MotiveClass::zero().to_string(), "0");
        assert_eq!(MotiveClass::one().to_string(), "1");
        assert_eq!(MotiveClass::gm().to_string(), "L - 1");
        assert_eq!(MotiveClass::lefschetz().to_string(), "L");
        assert_eq!(
            MotiveClass::gm().mul(&MotiveClass::from_int(2)).to_string(),
            "2L - 2"
        );
    }

    /// Small classes built from the constructors the library actually uses.
    fn class_strategy() -> impl Strategy<Value = MotiveClass> {
        (0usize..5, 0usize..5, -3i64..=3).prop_map(|(k, l, c)| {
            stratum_class(k, l).add(&MotiveClass::from_int(c))
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in class_strategy(), b in class_strategy(), c in class_strategy()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.sub(&a), MotiveClass::zero());
        }

        #[test]
        fn point_count_is_ring_homomorphism(
            a in class_strategy(),
            b in class_strategy(),
            q in 2u64..100,
        ) {
            prop_assert_eq!(
                a.mul(&b).point_count(q),
                a.point_count(q) * b.point_count(q)
            );
            prop_assert_eq!(
                a.add(&b).point_count(q),
                a.point_count(q) + b.point_count(q)
            );
        }
    }
}
