//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion with its wall time, and exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Pow, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use quotdeg::holla::{brute_force_degree, holla_degree, QuotParams, DEFAULT_BRUTE_FORCE_CAP};
use quotdeg::numeric::{rel_err, ComplexSum};
use quotdeg::poly::{cyclotomic, ext_gcd, x_pow_minus_one, PolyQ};
use quotdeg::polyp::bound_polynomial;
use quotdeg::ring::{nontrivial_roots_ring, trace_nontrivial};
use quotdeg::versch::{
    bound_exact, bound_trig, g2_comparison, lemma4_arithmetic, odd_primes_up_to, specialize, VerschParams,
};

const TRIG_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-6;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Points `2 <= g <= 6`, `g < p + 1`, odd prime `p <= 13`.
fn cross_path_grid() -> Vec<VerschParams> {
    (2..=6)
        .flat_map(|g| odd_primes_up_to(13).filter_map(move |p| VerschParams::new(g, p).ok()))
        .collect()
}

fn closed_forms() -> Outcome {
    let g2 = bound_polynomial(2).map_err(|e| e.to_string())?;
    let want2 = PolyQ::from_coeffs(vec![int(0), frac(-1, 3), int(0), frac(4, 3)]);
    if g2.poly() != &want2 {
        return Err(format!("g=2 gave {g2}"));
    }
    let g3 = bound_polynomial(3).map_err(|e| e.to_string())?;
    let want3 = PolyQ::from_coeffs([0, 0, -11, 0, 40, 0, 16].iter().map(|&c| frac(c, 45)).collect());
    if g3.poly() != &want3 {
        return Err(format!("g=3 gave {g3}"));
    }
    Ok(format!("g=2: {g2}; g=3: {g3}"))
}

fn genus_two_comparison() -> Outcome {
    let mut count = 0;
    for p in odd_primes_up_to(50) {
        let c = g2_comparison(p).map_err(|e| e.to_string())?;
        let pb = BigInt::from(p);
        let exact = BigRational::new(&pb * &pb * &pb + 2 * &pb, 3.into());
        let law = int(&pb * &pb * &pb - &pb);
        if c.exact != exact || c.exact > c.bound || c.gap != law {
            return Err(format!("p={p}: exact {} bound {} gap {}", c.exact, c.bound, c.gap));
        }
        count += 1;
    }
    Ok(format!("{count} primes, gap = p^3 - p throughout"))
}

fn cross_path_agreement() -> Outcome {
    let grid = cross_path_grid();
    let mut worst = 0.0f64;
    for v in &grid {
        let bound = bound_exact(v).map_err(|e| e.to_string())?;
        let degree = holla_degree(&specialize(v).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let scaled = int(BigInt::from(v.p()).pow(v.g() as u32)) * &bound;
        if int(degree.clone()) != scaled {
            return Err(format!("g={}, p={}: Quot degree {degree} != p^g * {bound}", v.g(), v.p()));
        }
        let err = rel_err(bound_trig(v), bound.to_f64().unwrap());
        if err >= TRIG_TOL {
            return Err(format!("g={}, p={}: trig rel err {err:e}", v.g(), v.p()));
        }
        worst = worst.max(err);
    }
    Ok(format!("{} grid points, worst trig rel err {worst:.2e}", grid.len()))
}

fn brute_force_equivalence() -> Outcome {
    let mut packs = 0;
    let mut worst = 0.0f64;
    for n in 1..=14 {
        for r in 1..=n.min(3) {
            for g in 2..=4 {
                for d in 0..n {
                    let q = QuotParams::derive(n, d, r, g).map_err(|e| e.to_string())?;
                    if !q.is_zero_dimensional() {
                        continue;
                    }
                    let exact = holla_degree(&q).map_err(|e| format!("{n},{d},{r},{g}: {e}"))?;
                    let approx = brute_force_degree(&q, DEFAULT_BRUTE_FORCE_CAP)
                        .map_err(|e| format!("{n},{d},{r},{g}: {e}"))?;
                    let err = rel_err(approx, exact.to_f64().unwrap());
                    if err >= ORACLE_TOL {
                        return Err(format!("(n,d,r,g)=({n},{d},{r},{g}): exact {exact}, complex {approx}"));
                    }
                    worst = worst.max(err);
                    packs += 1;
                }
            }
        }
    }
    Ok(format!("{packs} eps=0 packs, worst rel err {worst:.2e}"))
}

fn classical_count() -> Outcome {
    for g in 2..=8i64 {
        let want = BigInt::from(2).pow(g as u32);
        for d in [g - 1, g + 1, 1 - g, g + 7] {
            let q = QuotParams::derive(2, d, 1, g).map_err(|e| e.to_string())?;
            let got = holla_degree(&q).map_err(|e| format!("g={g}, d={d}: {e}"))?;
            if got != want {
                return Err(format!("g={g}, d={d}: {got} != 2^{g}"));
            }
        }
    }
    Ok("2^g for g = 2..8".into())
}

fn random_poly(rng: &mut StdRng) -> PolyQ {
    let deg = rng.gen_range(0..=8);
    PolyQ::from_coeffs(
        (0..=deg)
            .map(|_| BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into()))
            .collect(),
    )
}

fn algebra_invariants() -> Outcome {
    for n in 1..=200u64 {
        let product = (1..=n)
            .filter(|d| n % d == 0)
            .fold(PolyQ::one(), |acc, d| &acc * &*cyclotomic(d));
        if product != x_pow_minus_one(n) {
            return Err(format!("product of Φ_d over d | {n} differs from x^{n} - 1"));
        }
        let phi = cyclotomic(n);
        let totient = (1..=n).filter(|k| k.gcd(&n) == 1).count();
        if phi.degree() != Some(totient) || !phi.has_integer_coeffs() {
            return Err(format!("Φ_{n} has wrong degree or non-integer coefficients"));
        }
    }

    for n in 2..=60u64 {
        let ring = nontrivial_roots_ring(n);
        for k in 0..3 * n {
            let exact = trace_nontrivial(n, &ring.x_pow(k as usize)).map_err(|e| e.to_string())?;
            let mut acc = ComplexSum::default();
            for t in 1..n {
                acc.add(Complex64::from_polar(1.0, std::f64::consts::TAU * ((t * k) % n) as f64 / n as f64));
            }
            let z = acc.value();
            if (z.re - exact.to_f64().unwrap()).abs() > 1e-9 || z.im.abs() > 1e-9 {
                return Err(format!("trace(x^{k}) mod Ψ_{n}: exact {exact}, complex {z}"));
            }
        }
    }

    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut pairs = 0;
    while pairs < 1000 {
        let (a, b) = (random_poly(&mut rng), random_poly(&mut rng));
        if a.is_zero() && b.is_zero() {
            continue;
        }
        let (g, s, t) = ext_gcd(&a, &b).map_err(|e| e.to_string())?;
        if &(&s * &a) + &(&t * &b) != g || !g.is_monic() {
            return Err(format!("Bezout fails for ({a}, {b})"));
        }
        for x in [&a, &b] {
            if !x.is_zero() && !x.divmod(&g).map_err(|e| e.to_string())?.1.is_zero() {
                return Err(format!("gcd {g} does not divide {x}"));
            }
        }
        pairs += 1;
    }
    Ok("Φ product n<=200, trace n<=60, 1000 Bezout pairs".into())
}

fn riemann_roch_identities() -> Outcome {
    let grid = cross_path_grid();
    for v in &grid {
        let (g, p) = (v.g() as i64, v.p() as i64);
        let l = lemma4_arithmetic(v).map_err(|e| e.to_string())?;
        if l.deg_pushforward != 2 * (p - 1) * (g - 1) || l.deg_hom != 4 * (p - 1) * (g - 1) || l.euler_diff != 0 {
            return Err(format!("g={g}, p={p}: {l:?}"));
        }
    }
    Ok(format!("{} grid points", grid.len()))
}

fn integrality_watchdog() -> Outcome {
    let grid = cross_path_grid();
    let mut findings = Vec::new();
    for v in &grid {
        let b = bound_exact(v).map_err(|e| e.to_string())?;
        if !b.is_integer() || !b.is_positive() || b.is_zero() {
            findings.push(format!("g={}, p={}: {b}", v.g(), v.p()));
        }
    }
    if findings.is_empty() {
        Ok(format!("{} grid points, all positive integers", grid.len()))
    } else {
        Err(format!("non-integral bound found: {}", findings.join("; ")))
    }
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "closed-form regression", budget: Some(Duration::from_secs(1)), run: closed_forms },
        Criterion { id: 2, name: "g=2 exact-degree comparison", budget: Some(Duration::from_secs(1)), run: genus_two_comparison },
        Criterion { id: 3, name: "cross-path agreement", budget: Some(Duration::from_secs(30)), run: cross_path_agreement },
        Criterion { id: 4, name: "brute-force oracle equivalence", budget: Some(Duration::from_secs(60)), run: brute_force_equivalence },
        Criterion { id: 5, name: "classical count 2^g", budget: None, run: classical_count },
        Criterion { id: 6, name: "algebra invariant suite", budget: Some(Duration::from_secs(30)), run: algebra_invariants },
        Criterion { id: 7, name: "Riemann-Roch identities", budget: None, run: riemann_roch_identities },
        Criterion { id: 8, name: "integrality watchdog", budget: None, run: integrality_watchdog },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let over_budget = c.budget.is_some_and(|b| elapsed > b);
        let (status, detail) = match (&outcome, over_budget) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; exceeded {:?} budget", c.budget.unwrap())),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("[{status}] criterion {}: {} ({:.2?}) {detail}", c.id, c.name, elapsed);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
