use crate::special::ln_gamma_real;

/// `a_{k,l} = Γ(k+l)/Γ(k)`, with `a_{0,0} = 1` and `a_{0,l} = 0` for `l >= 1`.
pub fn series_coefficient(k: usize, l: usize) -> f64 {
    ln_series_coefficient(k, l).map_or(0.0, f64::exp)
}

/// `ln a_{k,l}`, or `None` where the coefficient vanishes.
pub(crate) fn ln_series_coefficient(k: usize, l: usize) -> Option<f64> {
    match (k, l) {
        (0, 0) => Some(0.0),
        (0, _) => None,
        _ => Some(ln_gamma_real((k + l) as f64) - ln_gamma_real(k as f64)),
    }
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    if n <= 170 {
        (1..=n).map(|i| i as f64).product::<f64>().ln()
    } else {
        ln_gamma_real(n as f64 + 1.0)
    }
}

pub(crate) fn ln_binomial(k: usize, n: usize) -> f64 {
    ln_factorial(k) - ln_factorial(n) - ln_factorial(k - n)
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_cases() {
        assert_eq!(series_coefficient(0, 0), 1.0);
        assert_eq!(series_coefficient(0, 2), 0.0);
        assert!((series_coefficient(1, 1) - 1.0).abs() < 1e-14);
        // Γ(7)/Γ(3) = 720/2
        assert!((series_coefficient(3, 4) - 360.0).abs() < 1e-10);
    }

    #[test]
    fn binomials() {
        assert!((ln_binomial(10, 3).exp() - 120.0).abs() < 1e-10);
        assert_eq!(ln_binomial(5, 0), 0.0);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }
}
