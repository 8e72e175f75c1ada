//! Exact-arithmetic toolkit for the moduli of semistable elliptic
//! fibrations over P^1.
//!
//! The library computes, verifies, and explores the point counts of these
//! moduli over finite fields:
//!
//! - [`gf`]: finite fields F_{p^e} with certified construction;
//! - [`polyfq`]: univariate polynomials over F_q, gcd, deterministic
//!   factorization into irreducibles, enumeration streams;
//! - [`weier`]: Weierstrass models of the fibrations, discriminants, and
//!   Kodaira fiber configurations read off the discriminant divisor;
//! - [`motive`]: Grothendieck-ring classes as polynomials in the Lefschetz
//!   motive L, the stratified and closed forms of the moduli class
//!   L^{10n+1} - L^{10n-1}, and the point-count specialization at L = q;
//! - [`census`]: exhaustive enumeration oracles that re-derive every
//!   counting formula by brute force;
//! - [`arith`]: discriminant heights and the global-field counting
//!   functions Z_{F_q(t)}(B) and the empirical Z_Q(B) explorer;
//! - [`cli`]: the `moduli` command-line front end;
//! - [`acceptance`]: the criterion runners behind `moduli repro` and the
//!   acceptance test suite.

pub mod acceptance;
pub mod arith;
pub mod census;
pub mod cli;
pub mod gf;
pub mod motive;
pub mod polyfq;
pub mod weier;
