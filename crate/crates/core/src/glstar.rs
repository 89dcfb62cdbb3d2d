//! Characters of the Frobenius center (points of `GL₂*`), their group law, the
//! braiding map and its matrix factorization route.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{C64, ONE, ZERO};

const SINGULAR: f64 = 1e-12;

/// Values `(κ, λ, η, φ)` of `(K^ℓ, L^ℓ, E^ℓ, F^ℓ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Z0Char {
    pub kappa: C64,
    pub lambda: C64,
    pub eta: C64,
    pub phi: C64,
}

impl Z0Char {
    pub const IDENTITY: Z0Char = Z0Char { kappa: ONE, lambda: ONE, eta: ZERO, phi: ZERO };

    pub fn new(kappa: C64, lambda: C64, eta: C64, phi: C64) -> Self {
        Self { kappa, lambda, eta, phi }
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.kappa, self.lambda, self.eta, self.phi]
    }

    /// Largest coordinate difference, relative to the larger of the two magnitudes.
    pub fn rel_dist(&self, other: &Z0Char) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).norm() / a.norm().max(b.norm()).max(1.0))
            .fold(0.0, f64::max)
    }

    fn check(&self) -> Result<()> {
        if self.kappa.norm() < SINGULAR || self.lambda.norm() < SINGULAR {
            return Err(Error::DegenerateCharacter("kappa and lambda must be nonzero".into()));
        }
        Ok(())
    }
}

/// Group law dual to the coproduct of the Frobenius center.
pub fn glstar_multiply(p: &Z0Char, q: &Z0Char) -> Z0Char {
    Z0Char {
        kappa: p.kappa * q.kappa,
        lambda: p.lambda * q.lambda,
        eta: p.eta * q.kappa + q.eta,
        phi: p.phi + q.phi / p.lambda,
    }
}

/// Sign inside `Ω` of the braiding map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaSign {
    /// `Ω = 1 − κ_x^{−1} η_x φ_y λ_y`, the `ℓ`-th power of the generator action.
    Minus,
    /// `Ω = 1 + κ_x^{−1} η_x φ_y λ_y`.
    Plus,
}

impl OmegaSign {
    pub const ALL: [OmegaSign; 2] = [OmegaSign::Minus, OmegaSign::Plus];

    fn sign(self) -> f64 {
        match self {
            OmegaSign::Minus => -1.0,
            OmegaSign::Plus => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OmegaSign::Minus => "minus",
            OmegaSign::Plus => "plus",
        }
    }
}

pub fn beta_forward(x: &Z0Char, y: &Z0Char) -> Result<(Z0Char, Z0Char)> {
    beta_forward_with(x, y, OmegaSign::Minus)
}

pub fn beta_inverse(x: &Z0Char, y: &Z0Char) -> Result<(Z0Char, Z0Char)> {
    beta_inverse_with(x, y, OmegaSign::Minus)
}

pub fn beta_forward_with(x: &Z0Char, y: &Z0Char, sign: OmegaSign) -> Result<(Z0Char, Z0Char)> {
    x.check()?;
    y.check()?;
    let omega = ONE + x.eta * y.phi * y.lambda / x.kappa * sign.sign();
    if omega.norm() < SINGULAR {
        return Err(Error::SingularBraiding(omega.norm()));
    }
    let kq = y.kappa / omega;
    let lq = y.lambda / omega;
    let fq = y.phi / x.kappa;
    let ep = x.eta * y.lambda;
    let kp = x.kappa * omega;
    let lp = x.lambda * omega;
    let eq = x.kappa * y.eta + x.eta - ep * kq;
    let fp = x.phi / y.lambda + y.phi - fq / lp;
    Ok((Z0Char::new(kp, lp, ep, fp), Z0Char::new(kq, lq, eq, fq)))
}

pub fn beta_inverse_with(x: &Z0Char, y: &Z0Char, sign: OmegaSign) -> Result<(Z0Char, Z0Char)> {
    x.check()?;
    y.check()?;
    let omega = ONE + x.eta * y.phi * sign.sign();
    if omega.norm() < SINGULAR {
        return Err(Error::SingularBraiding(omega.norm()));
    }
    let kp = x.kappa / omega;
    let lp = x.lambda / omega;
    let kq = y.kappa * omega;
    let lq = y.lambda * omega;
    let ep = x.eta / lq;
    let fq = y.phi * kp;
    let eq = (y.eta - ep + x.eta * y.kappa) / kp;
    let fp = (x.phi - fq + y.phi / x.lambda) * lq;
    Ok((Z0Char::new(kp, lp, ep, fp), Z0Char::new(kq, lq, eq, fq)))
}

/// `T = κ + λ^{−1} + ηφ` and `Dt = κ/λ`.
pub fn conserved_quantities(p: &Z0Char) -> (C64, C64) {
    (p.kappa + ONE / p.lambda + p.eta * p.phi, p.kappa / p.lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GL2Matrix {
    pub m11: C64,
    pub m12: C64,
    pub m21: C64,
    pub m22: C64,
}

impl GL2Matrix {
    pub fn new(m11: C64, m12: C64, m21: C64, m22: C64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn det(&self) -> C64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn mul(&self, o: &GL2Matrix) -> GL2Matrix {
        GL2Matrix::new(
            self.m11 * o.m11 + self.m12 * o.m21,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 + self.m22 * o.m22,
        )
    }

    pub fn inv(&self) -> Result<GL2Matrix> {
        let d = self.det();
        if d.norm() < SINGULAR {
            return Err(Error::NonFactorizable("singular 2x2 matrix".into()));
        }
        Ok(GL2Matrix::new(self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d))
    }

    pub fn max_diff(&self, o: &GL2Matrix) -> f64 {
        [self.m11 - o.m11, self.m12 - o.m12, self.m21 - o.m21, self.m22 - o.m22]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Borel factors `b_+ = [[1, b], [0, a]]`, `b_− = [[d, 0], [c, 1]]`
/// with `b_+ b_−^{−1} = M`.
pub fn refactor_gl2(m: &GL2Matrix) -> Result<(C64, C64, C64, C64)> {
    let det = m.det();
    if m.m22.norm() < SINGULAR || det.norm() < SINGULAR {
        return Err(Error::NonFactorizable(format!("M22 = {}, det = {}", m.m22, det)));
    }
    Ok((m.m22, m.m12, -m.m21 / det, m.m22 / det))
}

/// `(b_+, b_−)` of a character, calibrated so that the realization is a group
/// homomorphism for [`glstar_multiply`].
pub fn realization(p: &Z0Char) -> (GL2Matrix, GL2Matrix) {
    (
        GL2Matrix::new(ONE, -p.lambda * p.phi, ZERO, p.lambda),
        GL2Matrix::new(p.kappa, ZERO, p.eta, ONE),
    )
}

/// The factorization map `I(p) = b_+ b_−^{−1}`.
pub fn factorization(p: &Z0Char) -> Result<GL2Matrix> {
    let (bp, bm) = realization(p);
    Ok(bp.mul(&bm.inv()?))
}

/// Inverse of [`factorization`].
pub fn char_from_matrix(m: &GL2Matrix) -> Result<Z0Char> {
    let (a, b, c, d) = refactor_gl2(m)?;
    Ok(Z0Char::new(d, a, c, -b / a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixRouteVariant {
    /// `I(x_L) = x_− I(y) x_−^{−1}`, `I(x_R) = (x_L)_+^{−1} I(x) (x_L)_+`, returned as `(x_R, x_L)`.
    AsPrinted,
    /// `I(out₁) = y_− I(x) y_−^{−1}`, `I(out₂) = (out₁)_+^{−1} I(y) (out₁)_+`.
    RoleSwapped,
}

impl MatrixRouteVariant {
    pub const ALL: [MatrixRouteVariant; 2] = [MatrixRouteVariant::AsPrinted, MatrixRouteVariant::RoleSwapped];

    pub fn name(self) -> &'static str {
        match self {
            MatrixRouteVariant::AsPrinted => "as-printed",
            MatrixRouteVariant::RoleSwapped => "role-swapped",
        }
    }
}

pub fn matrix_route_beta(x: &Z0Char, y: &Z0Char, variant: MatrixRouteVariant) -> Result<(Z0Char, Z0Char)> {
    let (first, second) = match variant {
        MatrixRouteVariant::AsPrinted => (x, y),
        MatrixRouteVariant::RoleSwapped => (y, x),
    };
    // conjugate the second argument by the minus part of the first
    let (_, fm) = realization(first);
    let inner = char_from_matrix(&fm.mul(&factorization(second)?).mul(&fm.inv()?))?;
    let (ip, _) = realization(&inner);
    let outer = char_from_matrix(&ip.inv()?.mul(&factorization(first)?).mul(&ip))?;
    Ok(match variant {
        MatrixRouteVariant::AsPrinted => (outer, inner),
        MatrixRouteVariant::RoleSwapped => (inner, outer),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn sample() -> (Z0Char, Z0Char) {
        (
            Z0Char::new(c(1.2, 0.1), c(0.8, -0.2), c(0.3, 0.4), c(-0.2, 0.25)),
            Z0Char::new(c(0.9, -0.3), c(1.1, 0.05), c(0.5, -0.1), c(0.15, 0.3)),
        )
    }

    #[test]
    fn multiply_example_and_identity() {
        let p = Z0Char::new(c(2.0, 0.0), ONE, ONE, ZERO);
        let q = Z0Char::new(ONE, ONE, ONE, ZERO);
        assert_eq!(glstar_multiply(&p, &q), Z0Char::new(c(2.0, 0.0), ONE, c(2.0, 0.0), ZERO));
        let (x, _) = sample();
        assert!(glstar_multiply(&Z0Char::IDENTITY, &x).rel_dist(&x) < 1e-15);
        assert!(glstar_multiply(&x, &Z0Char::IDENTITY).rel_dist(&x) < 1e-15);
    }

    #[test]
    fn fixed_points() {
        let (x, y) = sample();
        let e = Z0Char::IDENTITY;
        let (p, q) = beta_forward(&x, &e).unwrap();
        assert!(p.rel_dist(&x) < 1e-15 && q.rel_dist(&e) < 1e-15);
        let (p, q) = beta_forward(&e, &y).unwrap();
        assert!(p.rel_dist(&e) < 1e-15 && q.rel_dist(&y) < 1e-15);
        let (p, q) = beta_inverse(&x, &e).unwrap();
        assert!(p.rel_dist(&x) < 1e-15 && q.rel_dist(&e) < 1e-15);
    }

    #[test]
    fn round_trip_and_product() {
        let (x, y) = sample();
        for sign in OmegaSign::ALL {
            let (p, q) = beta_inverse_with(&x, &y, sign).unwrap();
            let (a, b) = beta_forward_with(&p, &q, sign).unwrap();
            assert!(a.rel_dist(&x) < 1e-13 && b.rel_dist(&y) < 1e-13);
        }
        let (p, q) = beta_forward(&x, &y).unwrap();
        assert!(glstar_multiply(&p, &q).rel_dist(&glstar_multiply(&y, &x)) < 1e-13);
    }

    #[test]
    fn conserved_slot_wise() {
        let (x, y) = sample();
        let (p, q) = beta_inverse(&x, &y).unwrap();
        let (tx, dx) = conserved_quantities(&x);
        let (tp, dp) = conserved_quantities(&p);
        let (ty, dy) = conserved_quantities(&y);
        let (tq, dq) = conserved_quantities(&q);
        assert!((tx - tp).norm() < 1e-13 && (dx - dp).norm() < 1e-13);
        assert!((ty - tq).norm() < 1e-13 && (dy - dq).norm() < 1e-13);
        assert_eq!(conserved_quantities(&Z0Char::IDENTITY), (c(2.0, 0.0), ONE));
    }

    #[test]
    fn refactor_examples() {
        assert_eq!(refactor_gl2(&GL2Matrix::identity()).unwrap(), (ONE, ZERO, ZERO, ONE));
        let m = GL2Matrix::new(c(2.0, 0.0), ONE, ONE, ONE);
        let (a, b, cc, d) = refactor_gl2(&m).unwrap();
        assert_eq!((a, b, cc, d), (ONE, ONE, -ONE, ONE));
        let bp = GL2Matrix::new(ONE, b, ZERO, a);
        let bm = GL2Matrix::new(d, ZERO, cc, ONE);
        assert!(bp.mul(&bm.inv().unwrap()).max_diff(&m) < 1e-15);
        let bad = GL2Matrix::new(ONE, ONE, ZERO, ZERO);
        assert!(matches!(refactor_gl2(&bad), Err(Error::NonFactorizable(_))));
    }

    #[test]
    fn realization_is_multiplicative() {
        let (x, y) = sample();
        let (xp, xm) = realization(&x);
        let (yp, ym) = realization(&y);
        let (pp, pm) = realization(&glstar_multiply(&x, &y));
        assert!(xp.mul(&yp).max_diff(&pp) < 1e-14);
        assert!(xm.mul(&ym).max_diff(&pm) < 1e-14);
        assert!(char_from_matrix(&factorization(&x).unwrap()).unwrap().rel_dist(&x) < 1e-14);
    }

    #[test]
    fn matrix_route_reproduces_inverse_map() {
        let (x, y) = sample();
        let (p, q) = matrix_route_beta(&x, &y, MatrixRouteVariant::AsPrinted).unwrap();
        let (a, b) = beta_inverse(&x, &y).unwrap();
        assert!(p.rel_dist(&a) < 1e-12 && q.rel_dist(&b) < 1e-12);
        let (p, q) = matrix_route_beta(&x, &y, MatrixRouteVariant::RoleSwapped).unwrap();
        let (f1, f2) = beta_forward(&x, &y).unwrap();
        assert!(p.rel_dist(&a).max(q.rel_dist(&b)) > 1e-3);
        assert!(p.rel_dist(&f1).max(q.rel_dist(&f2)) > 1e-3);
    }

    #[test]
    fn matrix_route_with_identity_second() {
        let (x, _) = sample();
        let e = Z0Char::IDENTITY;
        for v in MatrixRouteVariant::ALL {
            let (p, q) = matrix_route_beta(&x, &e, v).unwrap();
            assert!(p.rel_dist(&x) < 1e-14 && q.rel_dist(&e) < 1e-14);
        }
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&Z0Char::IDENTITY).unwrap();
        assert_eq!(s, r#"{"kappa":[1.0,0.0],"lambda":[1.0,0.0],"eta":[0.0,0.0],"phi":[0.0,0.0]}"#);
    }
}
