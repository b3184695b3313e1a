//! Compensated (Kahan–Neumaier) summation for the floating-point
//! cross-checks.

use std::iter::Sum;
use std::ops::AddAssign;

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl Sum<f64> for NeumaierSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::default();
        iter.for_each(|x| acc.add(x));
        acc
    }
}

/// Componentwise compensated sum of complex values.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `|approx - exact| / |exact|`, or the absolute error when `exact` is 0.
pub fn rel_err(approx: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        (approx - exact).abs()
    } else {
        ((approx - exact) / exact).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_sum() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        let naive: f64 = xs.iter().sum();
        let comp: NeumaierSum = xs.iter().copied().sum();
        assert_ne!(naive, 2.0);
        assert_eq!(comp.value(), 2.0);
    }

    #[test]
    fn complex_components_independent() {
        let mut acc = ComplexSum::default();
        acc.add(Complex64::new(1e16, 1.0));
        acc.add(Complex64::new(1.0, -1.0));
        acc.add(Complex64::new(-1e16, 0.5));
        assert_eq!(acc.value(), Complex64::new(1.0, 0.5));
    }

    #[test]
    fn relative_error() {
        assert_eq!(rel_err(2.0, 2.0), 0.0);
        assert!((rel_err(1.1, 1.0) - 0.1).abs() < 1e-12);
        assert_eq!(rel_err(0.5, 0.0), 0.5);
    }
}
