//! Associated Laguerre polynomials by three-term recurrence.
//!
//! `(i+1) L_{i+1}^{(k)}(x) = (2i+1+k−x) L_i^{(k)}(x) − (i+k) L_{i−1}^{(k)}(x)`,
//! seeded with `L_0 = 1`, `L_1 = 1 + k − x`.

/// `L_n^{(k)}(x)` for real order `k > −1`.
pub fn laguerre(n: usize, k: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for i in 1..n {
        let fi = i as f64;
        let next = ((2.0 * fi + 1.0 + k - x) * cur - (fi + k) * prev) / (fi + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

const RESCALE_ABOVE: f64 = 1e200;
const LN_RESCALE: f64 = 460.517_018_598_809_1; // ln(1e200)

/// Iterator over `L_0^{(k)}(x), L_1^{(k)}(x), …` carrying a separate log scale.
///
/// Each item is `(mantissa, ln_scale)` with `L_i = mantissa · exp(ln_scale)`.
/// The running pair is rescaled whenever it grows past `1e200`, so degrees and
/// arguments of a few hundred stay representable.
#[derive(Debug, Clone)]
pub struct ScaledLaguerre {
    k: f64,
    x: f64,
    i: usize,
    prev: f64,
    cur: f64,
    ln_scale: f64,
}

impl ScaledLaguerre {
    pub fn new(k: f64, x: f64) -> Self {
        Self { k, x, i: 0, prev: 0.0, cur: 1.0, ln_scale: 0.0 }
    }
}

impl Iterator for ScaledLaguerre {
    type Item = (f64, f64);

    fn next(&mut self) -> Option<(f64, f64)> {
        let out = (self.cur, self.ln_scale);
        let fi = self.i as f64;
        let next = if self.i == 0 {
            1.0 + self.k - self.x
        } else {
            ((2.0 * fi + 1.0 + self.k - self.x) * self.cur - (fi + self.k) * self.prev) / (fi + 1.0)
        };
        self.prev = self.cur;
        self.cur = next;
        self.i += 1;
        if libm::fabs(self.cur) > RESCALE_ABOVE {
            self.cur /= RESCALE_ABOVE;
            self.prev /= RESCALE_ABOVE;
            self.ln_scale += LN_RESCALE;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Explicit sum `Σ_m (−1)^m C(n+k, n−m) x^m / m!` for integer k.
    fn explicit(n: usize, k: usize, x: f64) -> f64 {
        let binom = |a: usize, b: usize| -> f64 { (0..b).fold(1.0, |acc, i| acc * (a - i) as f64 / (i + 1) as f64) };
        let mut sum = 0.0;
        let mut fact = 1.0;
        for m in 0..=n {
            if m > 0 {
                fact *= m as f64;
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binom(n + k, n - m) * x.powi(m as i32) / fact;
        }
        sum
    }

    #[test]
    fn low_degree_closed_forms() {
        let x = 0.37;
        assert_eq!(laguerre(0, 3.0, x), 1.0);
        assert_relative_eq!(laguerre(1, 0.0, x), 1.0 - x);
        assert_relative_eq!(laguerre(1, 1.0, x), 2.0 - x);
        assert_relative_eq!(laguerre(2, 0.0, x), (x * x - 4.0 * x + 2.0) / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn matches_explicit_sum() {
        for n in 0..12 {
            for k in 0..4 {
                for x in [0.0, 0.0484, 0.5625, 2.0, 7.5] {
                    assert_relative_eq!(
                        laguerre(n, k as f64, x),
                        explicit(n, k, x),
                        epsilon = 1e-10,
                        max_relative = 1e-10
                    );
                }
            }
        }
    }

    #[test]
    fn value_at_origin_is_binomial() {
        // L_n^k(0) = C(n+k, n)
        assert_relative_eq!(laguerre(5, 2.0, 0.0), 21.0);
        assert_relative_eq!(laguerre(10, 0.0, 0.0), 1.0);
    }

    #[test]
    fn scaled_iterator_agrees() {
        for (i, (m, s)) in ScaledLaguerre::new(2.0, 3.3).take(30).enumerate() {
            assert_relative_eq!(m * s.exp(), laguerre(i, 2.0, 3.3), max_relative = 1e-12, epsilon = 1e-12);
        }
    }

    #[test]
    fn scaled_iterator_survives_large_degree() {
        // L_400^{(300)}(0) = C(700, 400) ≈ 1e203 overflows the first rescale threshold
        let (m, s) = ScaledLaguerre::new(300.0, 0.0).nth(400).unwrap();
        assert!(s > 0.0);
        let ln_binom = libm::lgamma(701.0) - libm::lgamma(401.0) - libm::lgamma(301.0);
        assert_relative_eq!(m.ln() + s, ln_binom, max_relative = 1e-12);
    }
}
