use serde::{Deserialize, Serialize};

use super::root::RootContext;
use super::series::Series;
use crate::error::{Error, Result};
use crate::linalg::{C64, ONE};

/// Which step factor drives the orbit recursion of Φ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeqVariant {
    /// `Φ(ε²z) = (1 − z^ℓ)^{1/ℓ} (1 − ε²z)^{−1} Φ(z)`, from expanding the product.
    Derived,
    /// The same with `(1 − ε²z^{−1})^{−1}`.
    Printed,
}

impl DeqVariant {
    pub const ALL: [DeqVariant; 2] = [DeqVariant::Derived, DeqVariant::Printed];

    pub fn name(self) -> &'static str {
        match self {
            DeqVariant::Derived => "derived",
            DeqVariant::Printed => "printed",
        }
    }
}

/// Expansion of `Φ(z) = ∏_{m=1}^{ℓ} (1 − ε^{2m} z)^{−m/ℓ}` through
/// `exp((1/ℓ) Σ_m m Σ_k (ε^{2m} z)^k / k)`.
pub fn phi_series(ctx: &RootContext, order: usize) -> Series {
    let ell = ctx.ell as f64;
    let mut log = Series::zero(order);
    for k in 1..=order {
        let s: C64 = (1..=ctx.ell)
            .map(|m| ctx.pow((2 * m * k) as i64) * m as f64)
            .sum();
        log.coeffs[k] = s / (ell * k as f64);
    }
    log.exp()
}

/// `Φ(z)` from the product with principal powers; agrees with the series for `|z| < 1`.
pub fn phi_value(ctx: &RootContext, z: C64) -> C64 {
    let ell = ctx.ell as f64;
    let log: C64 = (1..=ctx.ell)
        .map(|m| (ONE - ctx.pow(2 * m as i64) * z).ln() * (-(m as f64) / ell))
        .sum();
    log.exp()
}

/// Values `φ_0..φ_{ℓ−1}` at the orbit points `z_k = s ε^{2k−2}` with `φ_0 = 1` and
/// `t = (1 − s^ℓ)^{1/ℓ}` principal.
pub fn phi_orbit(ctx: &RootContext, s: C64) -> Result<Vec<C64>> {
    let t = principal_step(ctx, s)?;
    phi_orbit_with(ctx, s, t, DeqVariant::Derived)
}

fn principal_step(ctx: &RootContext, s: C64) -> Result<C64> {
    let one_minus = ONE - s.powu(ctx.ell as u32);
    if one_minus.norm() < 1e-12 {
        return Err(Error::DegenerateSpectralParameter);
    }
    Ok(ctx.root(one_minus))
}

/// Orbit values for an explicit step `t` (any `ℓ`-th root of `1 − s^ℓ`) and a
/// chosen difference-equation variant.
pub fn phi_orbit_with(ctx: &RootContext, s: C64, t: C64, variant: DeqVariant) -> Result<Vec<C64>> {
    let ell = ctx.ell;
    if (ONE - s.powu(ell as u32)).norm() < 1e-12 {
        return Err(Error::DegenerateSpectralParameter);
    }
    let z = |k: usize| s * ctx.pow(2 * k as i64 - 2);
    let mut out = Vec::with_capacity(ell);
    out.push(ONE);
    for k in 0..ell - 1 {
        let factor = match variant {
            DeqVariant::Derived => ONE - z(k + 1),
            DeqVariant::Printed => {
                if z(k).norm() < 1e-300 {
                    return Err(Error::SingularParameter("printed step needs z ≠ 0".into()));
                }
                ONE - ctx.pow(2) / z(k)
            }
        };
        if factor.norm() < 1e-14 {
            return Err(Error::SingularParameter("orbit step factor vanishes".into()));
        }
        let prev = out[k];
        out.push(prev * t / factor);
    }
    Ok(out)
}

/// Product of the `ℓ` step factors around the orbit; equals 1 when the recursion closes.
pub fn orbit_closure(ctx: &RootContext, s: C64, t: C64) -> C64 {
    (1..=ctx.ell)
        .map(|k| t / (ONE - s * ctx.pow(2 * k as i64 - 2)))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::scalars::primitive_root;

    #[test]
    fn series_low_terms() {
        let ctx = primitive_root(5).unwrap();
        let p = phi_series(&ctx, 10);
        assert!((p.coeff(0) - ONE).norm() < 1e-15);
        let c1: C64 = (1..=5).map(|m| ctx.pow(2 * m) * m as f64).sum::<C64>() / 5.0;
        assert!((p.coeff(1) - c1).norm() < 1e-14);
    }

    #[test]
    fn orbit_at_zero_is_flat() {
        let ctx = primitive_root(7).unwrap();
        for v in phi_orbit(&ctx, C64::new(0.0, 0.0)).unwrap() {
            assert!((v - ONE).norm() < 1e-15);
        }
    }

    #[test]
    fn orbit_closes() {
        let ctx = primitive_root(5).unwrap();
        let s = c(0.31, -0.2);
        let t = ctx.root(ONE - s.powu(5));
        assert!((orbit_closure(&ctx, s, t) - ONE).norm() < 1e-12);
    }

    #[test]
    fn orbit_matches_series_ratios() {
        let ctx = primitive_root(3).unwrap();
        let s = c(0.1, 0.0);
        let ser = phi_series(&ctx, 60);
        let orbit = phi_orbit(&ctx, s).unwrap();
        let base = ser.eval(s * ctx.pow(-2));
        for (k, v) in orbit.iter().enumerate() {
            let want = ser.eval(s * ctx.pow(2 * k as i64 - 2)) / base;
            assert!((v - want).norm() < 1e-9);
        }
    }

    #[test]
    fn degenerate_spectral_parameter() {
        let ctx = primitive_root(3).unwrap();
        assert_eq!(phi_orbit(&ctx, ctx.eps), Err(Error::DegenerateSpectralParameter));
    }

    #[test]
    fn value_matches_series() {
        let ctx = primitive_root(5).unwrap();
        let z = c(0.2, 0.15);
        assert!((phi_value(&ctx, z) - phi_series(&ctx, 80).eval(z)).norm() < 1e-13);
    }
}
