//! Upper bound for the generic degree of the rank-2 generalized
//! Verschiebung.
//!
//! For a genus `g` curve in characteristic `p` with `p + 1 > g > 1`, the
//! push-forward `F_*(E)` of a general rank-2 bundle has rank `2p` and degree
//! `2(p−1)(g−1)`, and its maximal rank-2 subbundles have degree 0. The
//! degree of that Quot scheme bounds `p^g · deg(Ver²)`, which gives
//!
//! ```text
//!   deg(Ver²) ≤ p^(g−1) Σ_{θ=1}^{2p−1} sin^{−(2g−2)}(πθ/2p)
//!             = Σ_{ζ^{2p}=1, ζ≠1} (−4pζ)^(g−1) / (ζ−1)^(2g−2).
//! ```
//!
//! The root-of-unity form is evaluated exactly; the sine form is a float
//! cross-check only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::holla::{holla_degree, QuotParams};
use crate::numeric::{rel_err, NeumaierSum};
use crate::ring::nontrivial_root_sum;

/// Default relative tolerance for the sine-form cross-check.
pub const DEFAULT_TOL: f64 = 1e-9;

const HYPOTHESIS: &str = "p+1 > g > 1 and p ≠ 2";

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn odd_primes_up_to(max: u64) -> impl Iterator<Item = u64> {
    (3..=max).filter(|&p| is_prime(p))
}

/// A characteristic `p` and genus `g` satisfying the hypotheses of the bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerschParams {
    g: u64,
    p: u64,
}

impl VerschParams {
    pub fn new(g: u64, p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidParams(format!("p = 2 is excluded; need {HYPOTHESIS}")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} is not prime; need {HYPOTHESIS}")));
        }
        if !(g > 1 && g < p + 1) {
            return Err(Error::InvalidParams(format!("g = {g}, p = {p} violates {HYPOTHESIS}")));
        }
        Ok(VerschParams { g, p })
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

/// Quot-scheme data `(n, d, r) = (2p, 2(p−1)(g−1), 2)` for `F_*(E)`.
pub fn specialize(v: &VerschParams) -> Result<QuotParams> {
    let (g, p) = (v.g as i64, v.p as i64);
    let q = QuotParams::derive(2 * p, 2 * (p - 1) * (g - 1), 2, g)?;
    let expected = (g - 1, 2 * (g - 1), 0, 0);
    let got = (q.a(), q.b(), q.e_max(), q.eps());
    if got != expected {
        return Err(Error::Internal(format!(
            "specialization for g={g}, p={p} gave (a, b, e_max, eps) = {got:?}, expected {expected:?}"
        )));
    }
    Ok(q)
}

/// `B(g, m) = (−4m)^(g−1) · Σ_{ζ^{2m}=1, ζ≠1} ζ^(g−1)/(ζ−1)^(2g−2)`, defined
/// for any integer `m ≥ 1`.
pub fn bound_value(g: u64, m: u64) -> Result<BigRational> {
    let scale = BigRational::from_integer(BigInt::from(-4 * m as i64).pow(g as u32 - 1));
    Ok(scale * nontrivial_root_sum(2 * m, g)?)
}

/// Exact value of the bound on `deg(Ver²)`.
pub fn bound_exact(v: &VerschParams) -> Result<BigRational> {
    bound_value(v.g, v.p)
}

/// `p^(g−1) Σ_{θ=1}^{2p−1} sin(πθ/2p)^{−(2g−2)}` in double precision with
/// compensated summation.
pub fn bound_trig(v: &VerschParams) -> f64 {
    let two_p = 2.0 * v.p as f64;
    let power = 2 * v.g as i32 - 2;
    let sum: NeumaierSum = (1..2 * v.p)
        .map(|theta| (std::f64::consts::PI * theta as f64 / two_p).sin().powi(-power))
        .sum();
    (v.p as f64).powi(v.g as i32 - 1) * sum.value()
}

/// Bound on `deg(Q^{triv,F}/K)`, `p^g · bound_exact`. Also evaluated
/// independently as the Quot-scheme degree of the specialized data; the two
/// must agree exactly.
pub fn quot_f_degree_bound(v: &VerschParams) -> Result<BigRational> {
    let via_roots = BigRational::from_integer(BigInt::from(v.p).pow(v.g as u32)) * bound_exact(v)?;
    let via_quot = BigRational::from_integer(holla_degree(&specialize(v)?)?);
    if via_roots != via_quot {
        return Err(Error::CrossPathMismatch(format!(
            "g={}, p={}: p^g * bound = {via_roots} but Quot degree = {via_quot}",
            v.g, v.p
        )));
    }
    Ok(via_roots)
}

/// Riemann–Roch bookkeeping for `Hom(F, G)` where `G = F_*(E)/F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma4 {
    pub deg_pushforward: i64,
    pub deg_hom: i64,
    pub euler_diff: i64,
}

pub fn lemma4_arithmetic(v: &VerschParams) -> Result<Lemma4> {
    let (g, p) = (v.g as i64, v.p as i64);
    let chi_e = 2 * (1 - g);
    let rank_push = 2 * p;
    let deg_pushforward = chi_e - rank_push * (1 - g);

    // F has rank 2 and degree 0; G = F_*(E)/F has rank 2p − 2.
    let (rank_f, deg_f) = (2, 0);
    let rank_g = rank_push - rank_f;
    let deg_g = deg_pushforward - deg_f;
    let deg_hom = rank_f * deg_g - rank_g * deg_f;
    let rank_hom = rank_f * rank_g;
    let euler_diff = deg_hom + rank_hom * (1 - g);

    let specialized_d = specialize(v)?.d();
    if deg_pushforward != 2 * (p - 1) * (g - 1) || deg_pushforward != specialized_d {
        return Err(Error::Internal(format!("deg F_*(E) = {deg_pushforward}, specialized d = {specialized_d}")));
    }
    if deg_hom != 4 * (p - 1) * (g - 1) || euler_diff != 0 {
        return Err(Error::Internal(format!("deg Hom = {deg_hom}, Euler difference = {euler_diff}")));
    }
    Ok(Lemma4 { deg_pushforward, deg_hom, euler_diff })
}

/// Genus 2: the known degree `(p³ + 2p)/3` against the bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G2Comparison {
    pub exact: BigRational,
    pub bound: BigRational,
    pub gap: BigRational,
}

pub fn g2_comparison(p: u64) -> Result<G2Comparison> {
    let v = VerschParams::new(2, p)?;
    let pb = BigInt::from(p);
    let exact = BigRational::new(&pb * &pb * &pb + 2 * &pb, BigInt::from(3));
    let bound = bound_exact(&v)?;
    let gap = &bound - &exact;
    let expected = BigRational::from_integer(&pb * &pb * &pb - &pb);
    if gap != expected {
        return Err(Error::Internal(format!("p={p}: gap {gap} differs from p^3 - p = {expected}")));
    }
    Ok(G2Comparison { exact, bound, gap })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub params: VerschParams,
    pub bound_exact: BigRational,
    pub quot_f_degree_bound: BigRational,
    pub trig_value: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub lemma4: Lemma4,
    pub g2_comparison: Option<G2Comparison>,
}

impl BoundReport {
    pub fn trig_within_tol(&self) -> bool {
        self.rel_err < self.tol
    }

    pub fn bound_is_positive_integer(&self) -> bool {
        self.bound_exact.is_integer() && self.bound_exact > BigRational::from_integer(0.into())
    }
}

pub fn bound_report(v: &VerschParams, tol: f64) -> Result<BoundReport> {
    let bound = bound_exact(v)?;
    let quot_f = quot_f_degree_bound(v)?;
    let trig_value = bound_trig(v);
    let exact_f64 = bound.to_f64().unwrap_or(f64::NAN);
    Ok(BoundReport {
        params: *v,
        rel_err: rel_err(trig_value, exact_f64),
        bound_exact: bound,
        quot_f_degree_bound: quot_f,
        trig_value,
        tol,
        lemma4: lemma4_arithmetic(v)?,
        g2_comparison: if v.g == 2 { Some(g2_comparison(v.p)?) } else { None },
    })
}
