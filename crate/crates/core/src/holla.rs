//! Degrees of zero-dimensional Quot schemes of maximal subbundles.
//!
//! For a general stable bundle of rank `n` and degree `d` on a genus `g`
//! curve, rank-`r` subbundles of maximal degree form a Quot scheme of
//! dimension `eps`, where `eps` is the residue of
//! `d·r − r(n−r)(g−1)` modulo `n`. When `eps = 0` its length is
//!
//! ```text
//!   (−1)^((r−1)(br − (g−1)r²)/n) · n^(r(g−1)) / r!
//!       · Σ_{ζ_1..ζ_r distinct, ζ_i^n = 1} Π ζ_i^(b−g+1) / Π_{i≠j} (ζ_i − ζ_j)^(g−1)
//! ```
//!
//! with `d = a·n − b`, `0 ≤ b < n`. The sum is evaluated exactly in
//! `Q[x]/Φ_n`, mapping `ζ_i ↦ x^(k_i)`.

use itertools::Itertools;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::ComplexSum;
use crate::poly::{cyclotomic, rat};
use crate::ring::{Modulus, ResidueElem};

/// Default bound on `n` for [`brute_force_degree`].
pub const DEFAULT_BRUTE_FORCE_CAP: i64 = 64;

/// Largest rank accepted by [`QuotParams::derive`]; the exact engine works
/// in a field of degree `φ(n)`.
pub const MAX_RANK: i64 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuotParams {
    n: i64,
    d: i64,
    r: i64,
    g: i64,
    a: i64,
    b: i64,
    eps: i64,
    e_max: i64,
    s_r: i64,
}

impl QuotParams {
    /// Derives `(a, b, eps, e_max, s_r)` for a general stable bundle of rank
    /// `n`, degree `d` and rank-`r` subsheaves on a genus-`g` curve.
    pub fn derive(n: i64, d: i64, r: i64, g: i64) -> Result<Self> {
        if !(1..=MAX_RANK).contains(&n) {
            return Err(Error::InvalidParams(format!("rank n must satisfy 1 <= n <= {MAX_RANK}, got {n}")));
        }
        if !(1..=n).contains(&r) {
            return Err(Error::InvalidParams(format!("subsheaf rank must satisfy 1 <= r <= n, got r={r}, n={n}")));
        }
        if !(2..=1_000_000).contains(&g) {
            return Err(Error::InvalidParams(format!("genus must satisfy g >= 2, got {g}")));
        }
        let (n128, d128, r128, g128) = (n as i128, d as i128, r as i128, g as i128);
        let a = Integer::div_ceil(&d128, &n128);
        let b = a * n128 - d128;
        let generic = r128 * (n128 - r128) * (g128 - 1);
        let eps = (d128 * r128 - generic).rem_euclid(n128);
        let s_r = generic + eps;
        let (e_max, rem) = (d128 * r128 - s_r).div_rem(&n128);
        if rem != 0 {
            return Err(Error::Internal(format!("e_max is not integral for {n},{d},{r},{g}")));
        }
        let narrow = |v: i128| {
            i64::try_from(v).map_err(|_| Error::InvalidParams(format!("parameters overflow: {n},{d},{r},{g}")))
        };
        Ok(QuotParams {
            n,
            d,
            r,
            g,
            a: narrow(a)?,
            b: narrow(b)?,
            eps: narrow(eps)?,
            e_max: narrow(e_max)?,
            s_r: narrow(s_r)?,
        })
    }

    pub fn n(&self) -> i64 {
        self.n
    }
    pub fn d(&self) -> i64 {
        self.d
    }
    pub fn r(&self) -> i64 {
        self.r
    }
    pub fn g(&self) -> i64 {
        self.g
    }
    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn eps(&self) -> i64 {
        self.eps
    }
    pub fn e_max(&self) -> i64 {
        self.e_max
    }
    pub fn s_r(&self) -> i64 {
        self.s_r
    }

    /// Dimension of every component of the Quot scheme.
    pub fn quot_dim(&self) -> i64 {
        self.eps
    }

    pub fn is_zero_dimensional(&self) -> bool {
        self.eps == 0
    }

    /// Exponent of `−1` in the prefactor, `(r−1)(br − (g−1)r²)/n`.
    pub fn sign_exponent(&self) -> Result<BigInt> {
        let (n, r, b, g) = (BigInt::from(self.n), BigInt::from(self.r), BigInt::from(self.b), BigInt::from(self.g));
        let num = (&r - 1) * (&b * &r - (&g - 1) * &r * &r);
        let e = BigRational::new(num, n);
        if !e.is_integer() {
            return Err(Error::NonIntegerSign(e.to_string()));
        }
        Ok(e.to_integer())
    }

    fn prefactor(&self) -> Result<BigRational> {
        let sign = if self.sign_exponent()?.is_odd() { -1 } else { 1 };
        let power = BigInt::from(self.n).pow((self.r * (self.g - 1)) as u64);
        Ok(BigRational::from_integer(power * sign))
    }

    fn ensure_zero_dimensional(&self) -> Result<()> {
        if self.is_zero_dimensional() {
            Ok(())
        } else {
            Err(Error::DimensionPositive { eps: self.eps })
        }
    }
}

/// How the exact engine walks the root tuples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Enumeration {
    /// Unordered subsets `k_1 < ... < k_r`; the `r!` in the prefactor
    /// cancels against the symmetry of the summand.
    Subsets,
    /// Every ordered tuple of distinct exponents, each summand inverted on
    /// its own. Slow; kept as an independent check on small `n`.
    OrderedTuples,
}

/// Exact degree of the zero-dimensional Quot scheme.
pub fn holla_degree(params: &QuotParams) -> Result<BigInt> {
    holla_degree_with(params, Enumeration::Subsets)
}

pub fn holla_degree_with(params: &QuotParams, how: Enumeration) -> Result<BigInt> {
    params.ensure_zero_dimensional()?;
    let ring = Modulus::from_shared(cyclotomic(params.n as u64))?;
    let (sum, divisor) = match how {
        Enumeration::Subsets => (subset_sum(params, &ring)?, BigInt::one()),
        Enumeration::OrderedTuples => (ordered_sum(params, &ring)?, factorial(params.r)),
    };
    let constant = sum
        .as_rational()
        .ok_or_else(|| Error::NonRationalResult(format!("{sum:?}")))?;
    let degree = params.prefactor()? * constant / BigRational::from_integer(divisor);
    if !degree.is_integer() {
        return Err(Error::NonIntegralResult(degree.to_string()));
    }
    Ok(degree.to_integer())
}

fn factorial(r: i64) -> BigInt {
    (1..=r).map(BigInt::from).product()
}

/// Σ over subsets `{k_1 < ... < k_r}` of `0..n` of the summand.
///
/// For `k_i < k_j`, `(x^{k_i} − x^{k_j})^2 = x^{2k_i}(x^{k_j−k_i} − 1)^2`, so
/// with `w_δ = (x^δ − 1)^{−2(g−1)}` each summand is
/// `(−1)^{C(r,2)(g−1)} · x^E · Π_{i<j} w_{k_j−k_i}` where
/// `E = (b−g+1)Σk_i − 2(g−1)Σ_{i<j} k_i`. The product depends only on the
/// gaps between the `k_i`, so subsets are grouped by their translate to
/// `k_1 = 0` and the monomials `x^E` of each group are collected before a
/// single ring multiplication.
fn subset_sum(params: &QuotParams, ring: &Modulus) -> Result<ResidueElem> {
    let n = params.n as usize;
    let r = params.r as usize;
    let g = params.g;
    let num_exp = params.b - g + 1;
    let pair_exp = 2 * (g - 1);

    let x_pows: Vec<ResidueElem> = (0..n).map(|e| ring.x_pow(e)).collect();
    let weights: Vec<ResidueElem> = if r >= 2 {
        (0..n)
            .into_par_iter()
            .map(|delta| {
                if delta == 0 {
                    return Ok(ring.zero());
                }
                let base = x_pows[delta].sub(&ring.one())?;
                Ok(base.invert()?.pow(pair_exp as u64))
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let shapes: Vec<Vec<usize>> = (1..n).combinations(r - 1).collect();
    // Exponent of x contributed by translating every k_i by one.
    let shift_step = num_exp * r as i64 - pair_exp * (r * (r - 1) / 2) as i64;

    let total = shapes
        .par_iter()
        .map(|rest| -> Result<ResidueElem> {
            let span = rest.last().copied().unwrap_or(0);
            let ks: Vec<i64> = std::iter::once(0).chain(rest.iter().map(|&k| k as i64)).collect();
            let mut weight = ring.one();
            for j in 1..r {
                for i in 0..j {
                    weight = weight.mul(&weights[(ks[j] - ks[i]) as usize])?;
                }
            }
            let base_exp: i64 = num_exp * ks.iter().sum::<i64>()
                - pair_exp * ks.iter().enumerate().map(|(i, &k)| k * (r - 1 - i) as i64).sum::<i64>();
            let mut counts = vec![0i64; n];
            for t in 0..(n - span) as i64 {
                counts[(base_exp + t * shift_step).rem_euclid(n as i64) as usize] += 1;
            }
            let mut monos = ring.zero();
            for (e, &c) in counts.iter().enumerate().filter(|(_, &c)| c != 0) {
                monos = monos.add(&x_pows[e].scale(&rat(c)))?;
            }
            monos.mul(&weight)
        })
        .try_reduce(|| ring.zero(), |a, b| a.add(&b))?;

    let sign_odd = (r * (r - 1) / 2) as i64 * (g - 1) % 2 == 1;
    Ok(if sign_odd { total.neg() } else { total })
}

/// Σ over ordered tuples of distinct exponents, computing every summand
/// directly and inverting its denominator.
fn ordered_sum(params: &QuotParams, ring: &Modulus) -> Result<ResidueElem> {
    let n = params.n as usize;
    let r = params.r as usize;
    let g = params.g as u64;
    let num_exp = params.b - params.g + 1;
    let x = ring.x_pow(1);
    let x_inv = x.invert()?;
    let numerator_base = if num_exp >= 0 { x.clone() } else { x_inv };

    let mut acc = ring.zero();
    for ks in (0..n).permutations(r) {
        let numerator = ks
            .iter()
            .fold(ring.one(), |acc, &k| acc.mul(&numerator_base.pow(k as u64)).unwrap())
            .pow(num_exp.unsigned_abs());
        let mut denom = ring.one();
        for i in 0..r {
            for j in 0..r {
                if i != j {
                    let diff = ring.x_pow(ks[i]).sub(&ring.x_pow(ks[j]))?;
                    denom = denom.mul(&diff.pow(g - 1))?;
                }
            }
        }
        acc = acc.add(&numerator.mul(&denom.invert()?)?)?;
    }
    Ok(acc)
}

/// Floating-point evaluation of the degree formula by direct summation over
/// ordered tuples of explicit complex roots.
pub fn brute_force_degree(params: &QuotParams, cap: i64) -> Result<f64> {
    params.ensure_zero_dimensional()?;
    if params.n > cap {
        return Err(Error::CapExceeded { n: params.n, cap });
    }
    let n = params.n as usize;
    let r = params.r as usize;
    let g = params.g as i32;
    let num_exp = params.b - params.g + 1;
    let roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
        .collect();

    let mut acc = ComplexSum::default();
    for ks in (0..n).permutations(r) {
        let num_index = (num_exp * ks.iter().sum::<usize>() as i64).rem_euclid(n as i64) as usize;
        let mut denom = Complex64::one();
        for i in 0..r {
            for j in 0..r {
                if i != j {
                    denom *= (roots[ks[i]] - roots[ks[j]]).powi(g - 1);
                }
            }
        }
        acc.add(roots[num_index] / denom);
    }
    let pre = params.prefactor()?.to_f64().unwrap() / factorial(params.r).to_f64().unwrap();
    let z = acc.value() * pre;
    if z.im.abs() > 1e-6 * z.re.abs() {
        return Err(Error::ImaginaryResidue { real: z.re, imag: z.im });
    }
    Ok(z.re)
}
