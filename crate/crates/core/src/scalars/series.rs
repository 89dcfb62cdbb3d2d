use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{C64, ONE, ZERO};

pub const DEFAULT_ORDER: usize = 40;

const SINGULAR_TOL: f64 = 1e-14;

/// A power series in `z` truncated after `z^order`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub coeffs: Vec<C64>,
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![ZERO; order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = ONE;
        s
    }

    pub fn from_coeffs(mut coeffs: Vec<C64>, order: usize) -> Self {
        coeffs.resize(order + 1, ZERO);
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> C64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    pub fn scale(&self, a: C64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * a).collect() }
    }

    /// The series of `f(a·z)`.
    pub fn subst_scale(&self, a: C64) -> Self {
        let mut p = ONE;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * p;
                p *= a;
                v
            })
            .collect();
        Self { coeffs }
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0.norm() < SINGULAR_TOL {
            return Err(Error::SingularParameter("reciprocal of a series with zero constant term".into()));
        }
        let n = self.order();
        let mut b = vec![ZERO; n + 1];
        b[0] = ONE / a0;
        for k in 1..=n {
            let s: C64 = (1..=k).map(|j| self.coeffs[j] * b[k - j]).sum();
            b[k] = -s / a0;
        }
        Ok(Self { coeffs: b })
    }

    pub fn exp(&self) -> Self {
        let n = self.order();
        let mut g = vec![ZERO; n + 1];
        g[0] = self.coeffs[0].exp();
        for k in 1..=n {
            let s: C64 = (1..=k).map(|j| self.coeffs[j] * g[k - j] * j as f64).sum();
            g[k] = s / k as f64;
        }
        Self { coeffs: g }
    }

    /// Principal logarithm of the constant term plus the formal log of the rest.
    pub fn ln(&self) -> Result<Self> {
        let f0 = self.coeffs[0];
        if f0.norm() < SINGULAR_TOL {
            return Err(Error::SingularParameter("log of a series with zero constant term".into()));
        }
        let n = self.order();
        let mut h = vec![ZERO; n + 1];
        h[0] = f0.ln();
        for k in 1..=n {
            let s: C64 = (1..k).map(|j| h[j] * self.coeffs[k - j] * j as f64).sum();
            h[k] = (self.coeffs[k] * k as f64 - s) / (f0 * k as f64);
        }
        Ok(Self { coeffs: h })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.order().max(other.order());
        (0..=n).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max)
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let n = self.order().min(rhs.order());
        Series { coeffs: (0..=n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect() }
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let n = self.order().min(rhs.order());
        Series { coeffs: (0..=n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect() }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(-ONE)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| (0..=k).map(|j| self.coeffs[j] * rhs.coeffs[k - j]).sum())
            .collect();
        Series { coeffs }
    }
}

fn require_q_ne_one(q: C64) -> Result<()> {
    if (q - ONE).norm() < SINGULAR_TOL {
        return Err(Error::SingularParameter("q = 1".into()));
    }
    Ok(())
}

/// `[n]_q = (1 − q^n)/(1 − q)`.
pub fn q_integer(n: usize, q: C64) -> Result<C64> {
    require_q_ne_one(q)?;
    Ok((ONE - q.powu(n as u32)) / (ONE - q))
}

/// `b_n = ∏_{k=1}^{n} (1 − q^k)/(1 − q)`.
pub fn q_factorial_b(n: usize, q: C64) -> Result<C64> {
    require_q_ne_one(q)?;
    (1..=n).try_fold(ONE, |acc, k| Ok(acc * q_integer(k, q)?))
}

/// Gaussian binomial `b_n / (b_k b_{n−k})`.
pub fn gaussian_binomial(n: usize, k: usize, q: C64) -> Result<C64> {
    if k > n {
        return Ok(ZERO);
    }
    Ok(q_factorial_b(n, q)? / (q_factorial_b(k, q)? * q_factorial_b(n - k, q)?))
}

/// Sum form `Σ_n (1−q)^n z^n / ((1−q)⋯(1−q^n))`.
pub fn series_f(q: C64, order: usize) -> Result<Series> {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = ONE;
    coeffs.push(c);
    let mut qk = ONE;
    for _ in 1..=order {
        qk *= q;
        let den = ONE - qk;
        if den.norm() < SINGULAR_TOL {
            return Err(Error::SingularParameter("q^k = 1 within the truncation order".into()));
        }
        c *= (ONE - q) / den;
        coeffs.push(c);
    }
    Ok(Series { coeffs })
}

/// Product form `∏_{n≥0} (1 − (1−q) z q^n)^{−1}`, expanded through its logarithm
/// `Σ_k (1−q)^k z^k / (k (1−q^k))`.
pub fn series_f_product(q: C64, order: usize) -> Result<Series> {
    let mut log = Series::zero(order);
    let a = ONE - q;
    for k in 1..=order {
        let den = ONE - q.powu(k as u32);
        if den.norm() < SINGULAR_TOL {
            return Err(Error::SingularParameter("q^k = 1 within the truncation order".into()));
        }
        log.coeffs[k] = a.powu(k as u32) / (den * k as f64);
    }
    Ok(log.exp())
}

/// Functional equation in both normalizations: `g(zq) = (1−z) g(z)` for
/// `g(z) = ∏_{n≥0} (1 − z q^n)^{−1} = f(z/(1−q); q)`, and the equivalent
/// `f(zq) = (1 − (1−q) z) f(z)` for the series of [`series_f`]. Returns the
/// larger of the two max coefficient moduli, each divided by
/// `max(1, max_n |coefficient|)`: the `g_n` grow like `1/(q;q)_n`, and the
/// `f_n` like `|1−q|^n` once `|1−q| > 1`.
pub fn check_f_functional(q: C64, order: usize) -> Result<f64> {
    let f = series_f(q, order)?;
    let a = ONE - q;
    let shifted = Series::from_coeffs(vec![ONE, -a], order);
    let res_f = f.subst_scale(q).max_abs_diff(&(&shifted * &f)) / coeff_scale(&f);
    if a.norm() < SINGULAR_TOL {
        return Ok(res_f);
    }
    let g = f.subst_scale(ONE / a);
    let one_minus_z = Series::from_coeffs(vec![ONE, -ONE], order);
    let res_g = g.subst_scale(q).max_abs_diff(&(&one_minus_z * &g)) / coeff_scale(&g);
    Ok(res_f.max(res_g))
}

fn coeff_scale(s: &Series) -> f64 {
    s.coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max)
}

/// Max coefficient modulus of the difference between the sum and product
/// forms, over `max(1, max_n |f_n|)`.
pub fn check_f_sum_vs_product(q: C64, order: usize) -> Result<f64> {
    let f = series_f(q, order)?;
    Ok(f.max_abs_diff(&series_f_product(q, order)?) / coeff_scale(&f))
}

/// `⟨X^n H^m, Y^{n'} H^{∨ m'}⟩ = δ_{nn'} δ_{mm'} n! b_m`.
pub fn pairing_monomial(n: usize, m: usize, n2: usize, m2: usize, q: C64) -> Result<C64> {
    require_q_ne_one(q)?;
    if n != n2 || m != m2 {
        return Ok(ZERO);
    }
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    Ok(q_factorial_b(m, q)? * fact)
}

/// Expands `(S₁ + S₂)^n v_0` for a q-commuting pair of shifts and compares the
/// coefficient with `∏_{j<n} (1 + q^j)`; also checks `b_n = [n]_q b_{n−1}` and
/// the q-binomial expansion of the same product. Returns the max residual.
pub fn q_shift_coefficient_check(n: usize, q: C64) -> Result<f64> {
    if n == 0 || n > 12 {
        return Err(Error::InvalidInput(format!("n = {n} outside 1..=12")));
    }
    let dim = n + 1;
    // S1 v_k = q^k v_{k+1}, S2 v_k = v_{k+1}; S1 S2 = q S2 S1
    let mut vec = vec![ZERO; dim];
    vec[0] = ONE;
    for _ in 0..n {
        let mut next = vec![ZERO; dim];
        for k in 0..dim - 1 {
            next[k + 1] += vec[k] * (q.powu(k as u32) + ONE);
        }
        vec = next;
    }
    let product: C64 = (0..n).map(|j| ONE + q.powu(j as u32)).product();
    let mut res = (vec[n] - product).norm() / product.norm().max(1.0);

    let via_binomial: C64 = (0..=n)
        .map(|k| Ok(gaussian_binomial(n, k, q)? * q.powu((k * k.saturating_sub(1) / 2) as u32)))
        .sum::<Result<C64>>()?;
    res = res.max((via_binomial - product).norm() / product.norm().max(1.0));

    for m in 1..=n {
        let b = q_factorial_b(m, q)?;
        let rec = q_integer(m, q)? * q_factorial_b(m - 1, q)?;
        res = res.max((b - rec).norm() / b.norm().max(1.0));
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn b_values() {
        assert_eq!(q_factorial_b(0, c(0.3, 0.2)).unwrap(), ONE);
        assert!((q_factorial_b(1, c(0.3, 0.2)).unwrap() - ONE).norm() < 1e-15);
        assert!((q_factorial_b(2, c(0.5, 0.0)).unwrap() - c(1.5, 0.0)).norm() < 1e-15);
        assert!(matches!(q_factorial_b(3, ONE), Err(Error::SingularParameter(_))));
    }

    #[test]
    fn f_low_coefficients() {
        let f = series_f(c(0.3, 0.0), 5).unwrap();
        assert_eq!(f.coeff(0), ONE);
        assert!((f.coeff(1) - ONE).norm() < 1e-15);
    }

    #[test]
    fn f_sum_equals_product() {
        assert!(check_f_sum_vs_product(c(0.3, 0.0), 30).unwrap() < 1e-12);
        assert!(check_f_sum_vs_product(c(0.5, 0.4), 30).unwrap() < 1e-12);
    }

    #[test]
    fn f_functional_equation() {
        assert_eq!(check_f_functional(ZERO, 20).unwrap(), 0.0);
        assert!(check_f_functional(c(0.5, 0.0), 25).unwrap() < 1e-12);
        assert!(check_f_functional(c(0.9, 0.0), 40).unwrap() < 1e-10);
    }

    #[test]
    fn f_singular_q() {
        let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!(matches!(series_f(w, 5), Err(Error::SingularParameter(_))));
    }

    #[test]
    fn pairing_values() {
        let q = c(0.5, 0.0);
        assert_eq!(pairing_monomial(0, 0, 0, 0, q).unwrap(), ONE);
        assert!((pairing_monomial(2, 1, 2, 1, q).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        assert_eq!(pairing_monomial(1, 2, 2, 1, q).unwrap(), ZERO);
    }

    #[test]
    fn q_shift_coefficients() {
        assert!(q_shift_coefficient_check(1, c(0.3, 0.0)).unwrap() < 1e-15);
        assert!(q_shift_coefficient_check(2, c(0.5, 0.0)).unwrap() < 1e-15);
        assert!(q_shift_coefficient_check(6, c(0.7, 0.1)).unwrap() < 1e-12);
    }

    #[test]
    fn exp_log_round_trip() {
        let s = Series::from_coeffs(vec![c(2.0, 1.0), c(0.3, 0.0), c(0.0, -0.7), c(0.1, 0.1)], 12);
        let back = s.ln().unwrap().exp();
        assert!(back.max_abs_diff(&s) < 1e-13);
        let r = s.reciprocal().unwrap();
        assert!((&r * &s).max_abs_diff(&Series::one(12)) < 1e-13);
    }
}
