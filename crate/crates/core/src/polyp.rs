//! The Verschiebung bound as an exact polynomial in `p`.
//!
//! `B(g, m)` is a polynomial in `m` of degree `3g − 3`. It is recovered by
//! Newton interpolation over the rationals at integer nodes and checked at
//! three further nodes.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{rat, PolyQ};
use crate::versch::bound_value;

/// First interpolation node.
pub const FIRST_NODE: u64 = 2;
/// Extra nodes checked after interpolation.
pub const VERIFY_NODES: u64 = 3;

#[derive(Clone, PartialEq, Eq)]
pub struct PolynomialInP {
    g: u64,
    poly: PolyQ,
}

impl PolynomialInP {
    pub fn g(&self) -> u64 {
        self.g
    }

    pub fn poly(&self) -> &PolyQ {
        &self.poly
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    /// Coefficient of `p^k`.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.poly.coeff(k)
    }

    /// Powers of `p` with nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.poly
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| k)
            .collect()
    }

    /// Exact Horner evaluation at `p`.
    pub fn eval(&self, p: i64) -> BigRational {
        self.poly.eval(&rat(p))
    }
}

impl fmt::Display for PolynomialInP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.poly.to_string().replace('x', "p");
        f.write_str(&s)
    }
}

impl fmt::Debug for PolynomialInP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolynomialInP(g={}, {self})", self.g)
    }
}

pub fn eval_polynomial(poly: &PolynomialInP, p: i64) -> BigRational {
    poly.eval(p)
}

/// A node where the interpolant was compared against a fresh evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeCheck {
    pub m: u64,
    pub expected: BigRational,
    pub interpolated: BigRational,
}

impl NodeCheck {
    pub fn ok(&self) -> bool {
        self.expected == self.interpolated
    }
}

#[derive(Clone, Debug)]
pub struct PolyFit {
    pub poly: PolynomialInP,
    pub nodes: Vec<u64>,
    pub checks: Vec<NodeCheck>,
}

/// Newton divided differences through `(xs[i], ys[i])`, expanded to the
/// monomial basis.
pub fn newton_interpolate(xs: &[BigRational], ys: &[BigRational]) -> Result<PolyQ> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(Error::InvalidParams("interpolation needs equally many nodes and values".into()));
    }
    let mut table = ys.to_vec();
    for level in 1..xs.len() {
        for i in (level..xs.len()).rev() {
            let span = &xs[i] - &xs[i - level];
            if span.is_zero() {
                return Err(Error::InvalidParams("interpolation nodes must be distinct".into()));
            }
            table[i] = (&table[i] - &table[i - 1]) / span;
        }
    }
    let mut poly = PolyQ::constant(table.last().unwrap().clone());
    for i in (0..xs.len() - 1).rev() {
        let factor = PolyQ::from_coeffs(vec![-xs[i].clone(), BigRational::one()]);
        poly = &(&poly * &factor) + &PolyQ::constant(table[i].clone());
    }
    Ok(poly)
}

/// Expected support `{g−1, g+1, ..., 3g−3}`.
pub fn expected_support(g: u64) -> Vec<usize> {
    (g as usize - 1..=3 * g as usize - 3).step_by(2).collect()
}

/// Interpolates `B(g, ·)` on `3g − 2` consecutive nodes starting at
/// `first_node`, then checks the next three.
pub fn fit_bound_polynomial(g: u64, first_node: u64) -> Result<PolyFit> {
    if g < 2 {
        return Err(Error::InvalidParams(format!("genus must be at least 2, got {g}")));
    }
    if first_node < 1 {
        return Err(Error::InvalidParams("interpolation nodes start at m >= 1".into()));
    }
    let degree = 3 * g - 3;
    let nodes: Vec<u64> = (first_node..first_node + degree + 1).collect();
    let extra: Vec<u64> = (first_node + degree + 1..first_node + degree + 1 + VERIFY_NODES).collect();
    let values = nodes
        .par_iter()
        .chain(extra.par_iter())
        .map(|&m| bound_value(g, m))
        .collect::<Result<Vec<_>>>()?;
    let (at_nodes, at_extra) = values.split_at(nodes.len());

    let xs: Vec<BigRational> = nodes.iter().map(|&m| rat(m as i64)).collect();
    let poly = PolynomialInP { g, poly: newton_interpolate(&xs, at_nodes)? };

    let checks: Vec<NodeCheck> = extra
        .iter()
        .zip(at_extra)
        .map(|(&m, want)| NodeCheck { m, expected: want.clone(), interpolated: poly.eval(m as i64) })
        .collect();
    if let Some(bad) = checks.iter().find(|c| !c.ok()) {
        return Err(Error::VerificationFailed(format!(
            "g={g}: B({}) = {} but interpolant gives {}",
            bad.m, bad.expected, bad.interpolated
        )));
    }
    if poly.degree() != Some(degree as usize) {
        return Err(Error::VerificationFailed(format!("g={g}: degree {:?}, expected {degree}", poly.degree())));
    }
    let support = poly.support();
    if !support.iter().all(|k| expected_support(g).contains(k)) {
        return Err(Error::VerificationFailed(format!("g={g}: support {support:?} outside {:?}", expected_support(g))));
    }
    Ok(PolyFit { poly, nodes, checks })
}

/// The bound as a polynomial in `p` of degree `3g − 3`.
pub fn bound_polynomial(g: u64) -> Result<PolynomialInP> {
    Ok(fit_bound_polynomial(g, FIRST_NODE)?.poly)
}

/// Leading coefficient sign, for quick sanity checks.
pub fn leading_is_positive(poly: &PolynomialInP) -> bool {
    poly.poly.leading().is_some_and(|c| c.is_positive())
}
