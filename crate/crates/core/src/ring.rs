//! Residue rings `Q[x]/m(x)` and sums over nontrivial roots of unity.
//!
//! A [`ResidueElem`] carries a shared handle to its modulus; binary
//! operations check that both operands live in the same ring. Sums over the
//! nontrivial `n`-th roots of unity are evaluated in the étale algebra
//! `Q[x]/Ψ_n`, where `Ψ_n = 1 + x + ... + x^(n-1)`. Its trace functional is
//! closed form on the monomial basis: `Σ_{ζ≠1} ζ^k = n·[n | k] − 1`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{all_ones, ext_gcd, rat, PolyQ};

/// Monic modulus shared by all elements of one residue ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus(Arc<PolyQ>);

impl Modulus {
    pub fn new(m: PolyQ) -> Result<Self> {
        match m.degree() {
            Some(d) if d >= 1 => Ok(Modulus(Arc::new(m.monic()))),
            _ => Err(Error::InvalidParams(format!("modulus {m} must have degree >= 1"))),
        }
    }

    pub fn from_shared(m: Arc<PolyQ>) -> Result<Self> {
        if m.is_monic() && m.degree().is_some_and(|d| d >= 1) {
            Ok(Modulus(m))
        } else {
            Self::new((*m).clone())
        }
    }

    pub fn poly(&self) -> &PolyQ {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree().unwrap()
    }

    fn same(&self, other: &Modulus) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }

    /// Reduces `p` into this ring.
    pub fn elem(&self, p: &PolyQ) -> ResidueElem {
        let coeffs = p.rem(&self.0).expect("modulus is nonzero");
        ResidueElem { modulus: self.clone(), coeffs }
    }

    pub fn constant(&self, c: BigRational) -> ResidueElem {
        self.elem(&PolyQ::constant(c))
    }

    pub fn zero(&self) -> ResidueElem {
        ResidueElem { modulus: self.clone(), coeffs: PolyQ::zero() }
    }

    pub fn one(&self) -> ResidueElem {
        self.constant(BigRational::one())
    }

    /// The class of `x^k`.
    pub fn x_pow(&self, k: usize) -> ResidueElem {
        self.elem(&PolyQ::monomial(BigRational::one(), k))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct ResidueElem {
    modulus: Modulus,
    coeffs: PolyQ,
}

impl ResidueElem {
    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// Reduced representative, of degree below the modulus degree.
    pub fn coeffs(&self) -> &PolyQ {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == PolyQ::one()
    }

    /// The rational value if the representative is constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs.is_constant().then(|| self.coeffs.coeff(0))
    }

    fn check(&self, other: &ResidueElem) -> Result<()> {
        if self.modulus.same(&other.modulus) {
            Ok(())
        } else {
            Err(Error::ModulusMismatch)
        }
    }

    fn with(&self, coeffs: PolyQ) -> ResidueElem {
        ResidueElem { modulus: self.modulus.clone(), coeffs }
    }

    pub fn add(&self, other: &ResidueElem) -> Result<ResidueElem> {
        self.check(other)?;
        Ok(self.with(&self.coeffs + &other.coeffs))
    }

    pub fn sub(&self, other: &ResidueElem) -> Result<ResidueElem> {
        self.check(other)?;
        Ok(self.with(&self.coeffs - &other.coeffs))
    }

    pub fn mul(&self, other: &ResidueElem) -> Result<ResidueElem> {
        self.check(other)?;
        let prod = &self.coeffs * &other.coeffs;
        Ok(self.with(prod.rem(self.modulus.poly())?))
    }

    pub fn neg(&self) -> ResidueElem {
        self.with(-&self.coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> ResidueElem {
        self.with(self.coeffs.scale(c))
    }

    pub fn square(&self) -> ResidueElem {
        self.mul(self).expect("same ring")
    }

    pub fn pow(&self, mut e: u64) -> ResidueElem {
        let mut base = self.clone();
        let mut acc = self.modulus.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Multiplicative inverse via extended Euclid against the modulus.
    pub fn invert(&self) -> Result<ResidueElem> {
        if self.is_zero() {
            return Err(Error::NonInvertible);
        }
        let (g, s, _) = ext_gcd(&self.coeffs, self.modulus.poly())?;
        if g != PolyQ::one() {
            return Err(Error::NonInvertible);
        }
        Ok(self.with(s.rem(self.modulus.poly())?))
    }
}

impl fmt::Debug for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] mod ({})", self.coeffs, self.modulus.poly())
    }
}

/// `Σ_{ζ^n = 1, ζ ≠ 1} ζ^k`.
pub fn nontrivial_power_trace(n: u64, k: u64) -> BigInt {
    if k.is_multiple_of(n) {
        BigInt::from(n) - 1
    } else {
        BigInt::from(-1)
    }
}

/// The ring `Q[x]/Ψ_n` used for sums over nontrivial `n`-th roots of unity.
pub fn nontrivial_roots_ring(n: u64) -> Modulus {
    Modulus::new(all_ones(n)).expect("Ψ_n has degree n - 1 >= 1")
}

/// `Σ_{ζ^n = 1, ζ ≠ 1} f(ζ)` for `f` in `Q[x]/Ψ_n`.
pub fn trace_nontrivial(n: u64, f: &ResidueElem) -> Result<BigRational> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("trace over nontrivial roots needs n >= 2, got {n}")));
    }
    if *f.modulus().poly() != all_ones(n) {
        return Err(Error::ModulusMismatch);
    }
    Ok(f.coeffs()
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| c * BigRational::from_integer(nontrivial_power_trace(n, k as u64)))
        .fold(BigRational::zero(), |acc, t| acc + t))
}

/// Exact value of `Σ_{ζ^n = 1, ζ ≠ 1} ζ^(g-1) / (ζ - 1)^(2g-2)`.
pub fn nontrivial_root_sum(n: u64, g: u64) -> Result<BigRational> {
    if n < 2 || g < 1 {
        return Err(Error::InvalidParams(format!(
            "nontrivial root sum needs n >= 2 and g >= 1, got n={n}, g={g}"
        )));
    }
    let ring = nontrivial_roots_ring(n);
    let x_minus_one = ring.elem(&PolyQ::from_coeffs(vec![rat(-1), rat(1)]));
    let denom_inv = x_minus_one.pow(2 * g - 2).invert()?;
    let f = ring.x_pow(g as usize - 1).mul(&denom_inv)?;
    trace_nontrivial(n, &f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::cyclotomic;
    use num_complex::Complex64;

    fn p(c: &[i64]) -> PolyQ {
        PolyQ::from_ints(c)
    }

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn i_squared() {
        let ring = Modulus::new(p(&[1, 0, 1])).unwrap();
        let x = ring.x_pow(1);
        assert_eq!(x.mul(&x).unwrap(), ring.constant(rat(-1)));
    }

    #[test]
    fn reduction_contract() {
        let ring = nontrivial_roots_ring(6);
        let prod = ring.x_pow(1).mul(&ring.x_pow(5)).unwrap();
        assert!(prod.coeffs().degree().unwrap_or(0) < 5);
        // x^6 = 1 on the nontrivial 6th roots.
        assert!(prod.is_one());
    }

    #[test]
    fn product_mod_phi6() {
        let ring = Modulus::from_shared(cyclotomic(6)).unwrap();
        let a = ring.elem(&p(&[-1, 1]));
        let b = ring.elem(&p(&[1, 1]));
        assert_eq!(a.mul(&b).unwrap().coeffs(), &p(&[-2, 1]));
    }

    #[test]
    fn mismatched_moduli() {
        let a = nontrivial_roots_ring(6).one();
        let b = nontrivial_roots_ring(5).one();
        assert_eq!(a.add(&b), Err(Error::ModulusMismatch));
        assert_eq!(a.mul(&b), Err(Error::ModulusMismatch));
    }

    #[test]
    fn inverse_of_i() {
        let ring = Modulus::new(p(&[1, 0, 1])).unwrap();
        let inv = ring.x_pow(1).invert().unwrap();
        assert_eq!(inv.coeffs(), &p(&[0, -1]));
    }

    #[test]
    fn x_minus_one_invertible_mod_psi6() {
        let ring = nontrivial_roots_ring(6);
        let a = ring.elem(&p(&[-1, 1]));
        let inv = a.invert().unwrap();
        assert!(a.mul(&inv).unwrap().is_one());
    }

    #[test]
    fn zero_divisor_detected() {
        let ring = Modulus::new(p(&[-1, 0, 1])).unwrap();
        assert_eq!(ring.elem(&p(&[-1, 1])).invert(), Err(Error::NonInvertible));
        assert_eq!(ring.zero().invert(), Err(Error::NonInvertible));
    }

    #[test]
    fn constant_modulus_rejected() {
        assert!(Modulus::new(p(&[3])).is_err());
        assert!(Modulus::new(PolyQ::zero()).is_err());
    }

    #[test]
    fn trace_examples() {
        let ring = nontrivial_roots_ring(6);
        assert_eq!(trace_nontrivial(6, &ring.one()).unwrap(), rat(5));
        assert_eq!(trace_nontrivial(6, &ring.x_pow(1)).unwrap(), rat(-1));
        assert_eq!(trace_nontrivial(6, &ring.x_pow(3)).unwrap(), rat(-1));
        // Reduction of x^5 and x^6 goes through Ψ_6.
        assert_eq!(trace_nontrivial(6, &ring.x_pow(5)).unwrap(), rat(-1));
        assert_eq!(trace_nontrivial(6, &ring.x_pow(6)).unwrap(), rat(5));
        assert_eq!(trace_nontrivial(5, &ring.one()), Err(Error::ModulusMismatch));
    }

    #[test]
    fn x_cubed_trace_against_complex_sum() {
        let direct: f64 = (1..6)
            .map(|t| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t as f64 / 6.0).powu(3).re)
            .sum();
        assert!((direct + 1.0).abs() < 1e-12);
    }

    #[test]
    fn root_sum_examples() {
        assert_eq!(nontrivial_root_sum(2, 2).unwrap(), frac(-1, 4));
        assert_eq!(nontrivial_root_sum(6, 2).unwrap(), frac(-35, 12));
    }

    #[test]
    fn root_sum_n6_g2_by_sines() {
        // Each term is -1/(4 sin^2(πθ/6)).
        let s: f64 = (1..6)
            .map(|t| -1.0 / (4.0 * (std::f64::consts::PI * t as f64 / 6.0).sin().powi(2)))
            .sum();
        assert!((s + 35.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn root_sum_rejects_small_n() {
        assert!(nontrivial_root_sum(1, 2).is_err());
    }
}
