//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored low degree first and the vector never carries
//! trailing zeros, so the zero polynomial is the empty vector and
//! `degree == len - 1` otherwise. `BigRational` keeps every coefficient in
//! lowest terms after each operation.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use parking_lot::Mutex;

use crate::error::{Error, Result};

/// Shorthand for building an integral rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct PolyQ {
    coeffs: Vec<BigRational>,
}

impl PolyQ {
    pub fn zero() -> Self {
        PolyQ { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        PolyQ { coeffs }
    }

    /// Builds a polynomial from coefficients indexed by power, trimming
    /// trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PolyQ { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Divides through by the leading coefficient. The zero polynomial is
    /// returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, at: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * at + c)
    }

    /// Euclidean division: returns `(q, r)` with `self = q * divisor + r`
    /// and `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &PolyQ) -> Result<(PolyQ, PolyQ)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let lc = divisor.leading().unwrap();
        let lc_inv = (!lc.is_one()).then(|| lc.recip());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let q = match &lc_inv {
                Some(inv) => top * inv,
                None => top.clone(),
            };
            for (j, c) in divisor.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    rem[k + j] -= &q * c;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    pub fn rem(&self, divisor: &PolyQ) -> Result<PolyQ> {
        Ok(self.divmod(divisor)?.1)
    }
}

/// Extended Euclid: returns `(g, s, t)` with `g = s*a + t*b` and `g` the
/// monic gcd.
///
/// Remainders are made monic at every step so coefficient growth stays
/// bounded by the size of the inputs.
pub fn ext_gcd(a: &PolyQ, b: &PolyQ) -> Result<(PolyQ, PolyQ, PolyQ)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    let (mut r0, mut s0, mut t0) = (a.clone(), PolyQ::one(), PolyQ::zero());
    let (mut r1, mut s1, mut t1) = (b.clone(), PolyQ::zero(), PolyQ::one());
    while !r1.is_zero() {
        let (q, r) = r0.divmod(&r1)?;
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        let (r, s, t) = match r.leading() {
            Some(lc) => {
                let inv = lc.recip();
                (r.scale(&inv), s.scale(&inv), t.scale(&inv))
            }
            None => (r, s, t),
        };
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = r0.leading().unwrap().recip();
    Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
}

static CYCLOTOMIC_CACHE: Lazy<Mutex<HashMap<u64, Arc<PolyQ>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// The `n`-th cyclotomic polynomial, obtained by dividing `x^n - 1` by the
/// product of `Φ_d` over the proper divisors `d` of `n`. Results are cached
/// for the life of the process.
pub fn cyclotomic(n: u64) -> Arc<PolyQ> {
    assert!(n >= 1, "cyclotomic index must be positive");
    if let Some(hit) = CYCLOTOMIC_CACHE.lock().get(&n) {
        return hit.clone();
    }
    let mut divisor = PolyQ::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        divisor = &divisor * &*cyclotomic(d);
    }
    let (phi, rem) = x_pow_minus_one(n)
        .divmod(&divisor)
        .expect("product of cyclotomic polynomials is nonzero");
    debug_assert!(rem.is_zero());
    let phi = Arc::new(phi);
    CYCLOTOMIC_CACHE.lock().insert(n, phi.clone());
    phi
}

/// `Ψ_n = 1 + x + ... + x^(n-1)`, whose roots are the nontrivial `n`-th
/// roots of unity.
pub fn all_ones(n: u64) -> PolyQ {
    assert!(n >= 2, "all_ones requires n >= 2");
    PolyQ::from_coeffs(vec![BigRational::one(); n as usize])
}

/// `x^n - 1`.
pub fn x_pow_minus_one(n: u64) -> PolyQ {
    let mut coeffs = vec![BigRational::zero(); n as usize + 1];
    coeffs[0] = -BigRational::one();
    coeffs[n as usize] = BigRational::one();
    PolyQ::from_coeffs(coeffs)
}

fn add_coeffs(a: &[BigRational], b: &[BigRational], negate_b: bool) -> PolyQ {
    let len = a.len().max(b.len());
    let mut out = Vec::with_capacity(len);
    for k in 0..len {
        let c = match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) if negate_b => x - y,
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) if negate_b => -y,
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(c);
    }
    PolyQ::from_coeffs(out)
}

impl Add for &PolyQ {
    type Output = PolyQ;
    fn add(self, rhs: &PolyQ) -> PolyQ {
        add_coeffs(&self.coeffs, &rhs.coeffs, false)
    }
}

impl Sub for &PolyQ {
    type Output = PolyQ;
    fn sub(self, rhs: &PolyQ) -> PolyQ {
        add_coeffs(&self.coeffs, &rhs.coeffs, true)
    }
}

impl Mul for &PolyQ {
    type Output = PolyQ;
    fn mul(self, rhs: &PolyQ) -> PolyQ {
        if self.is_zero() || rhs.is_zero() {
            return PolyQ::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        PolyQ::from_coeffs(out)
    }
}

impl Neg for &PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        PolyQ { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for PolyQ {
            type Output = PolyQ;
            fn $f(self, rhs: PolyQ) -> PolyQ {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        -&self
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{k}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyQ({self})")
    }
}
