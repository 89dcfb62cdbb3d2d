//! The holonomy Yang–Baxter equation on triples of cyclic representations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intertwiner::{braided_rep_pair, chi_data, closed_form_r, compare_up_to_scalar, solve_intertwiner, twist_d};
use crate::linalg::{embed, identity, inverse, kron, mat_pow, max_abs, CMat, C64};
use crate::rep::{gauge_u, shift, z0_character, RepParams};

/// Which construction supplies the R-matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Oracle,
    ClosedForm,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Oracle => "oracle",
            Route::ClosedForm => "closed-form",
        }
    }
}

/// Normalized R-matrix of a pair along a route.
pub fn r_matrix(p: &RepParams, q: &RepParams, route: Route) -> Result<CMat> {
    Ok(match route {
        Route::Oracle => solve_intertwiner(p, q)?.r,
        Route::ClosedForm => closed_form_r(p, q)?.r,
    })
}

/// Colorings along both sides of the triangle move.
///
/// Left: `(y₁, z₁) = B(y, z)`, `(x₁, z₂) = B(x, z₁)`, `(x₂, y₂) = B(x₁, y₁)`.
/// Right: `(x_a, y_a) = B(x, y)`, `(x_b, z_a) = B(x_a, z)`, `(y_b, z_b) = B(y_a, z_a)`.
#[derive(Debug, Clone, Serialize)]
pub struct Colorings {
    pub x: RepParams,
    pub y: RepParams,
    pub z: RepParams,
    pub y1: RepParams,
    pub z1: RepParams,
    pub x1: RepParams,
    pub z2: RepParams,
    pub x2: RepParams,
    pub y2: RepParams,
    pub xa: RepParams,
    pub ya: RepParams,
    pub xb: RepParams,
    pub za: RepParams,
    pub yb: RepParams,
    pub zb: RepParams,
}

impl Colorings {
    /// Largest character difference between the final triples of the two sides.
    pub fn set_ybe_residual(&self) -> f64 {
        [(&self.x2, &self.xb), (&self.y2, &self.yb), (&self.z2, &self.zb)]
            .iter()
            .map(|(a, b)| z0_character(a).rel_dist(&z0_character(b)))
            .fold(0.0, f64::max)
    }

    /// Largest difference of the lifted parameters `(v, y)` between the final triples.
    pub fn param_residual(&self) -> f64 {
        [(&self.x2, &self.xb), (&self.y2, &self.yb), (&self.z2, &self.zb)]
            .iter()
            .map(|(a, b)| (a.v - b.v).norm().max((a.y - b.y).norm()))
            .fold(0.0, f64::max)
    }

    /// Whether every coloring keeps the strand data `(u, x)` of its strand.
    pub fn strand_data_preserved(&self) -> bool {
        let same = |a: &RepParams, b: &RepParams| a.u == b.u && a.x == b.x;
        [&self.x1, &self.x2, &self.xa, &self.xb].iter().all(|p| same(p, &self.x))
            && [&self.y1, &self.y2, &self.ya, &self.yb].iter().all(|p| same(p, &self.y))
            && [&self.z1, &self.z2, &self.za, &self.zb].iter().all(|p| same(p, &self.z))
    }

    /// Recomputes the labelled list `z'' = x_L(y,z)`, `y'' = x_R(y,z)`,
    /// `x'' = x_R(x,z'')`, `x' = x_R(x,y)`, `y' = x_L(x,y)`, `z' = x_L(x',z)`
    /// with `x_R` the first and `x_L` the second output slot, and returns the
    /// largest character difference from the chained colorings.
    pub fn labelled_list_residual(&self) -> Result<f64> {
        let (yy, zz) = braided_rep_pair(&self.y, &self.z)?;
        let (xx, _) = braided_rep_pair(&self.x, &zz)?;
        let (xp, yp) = braided_rep_pair(&self.x, &self.y)?;
        let (_, zp) = braided_rep_pair(&xp, &self.z)?;
        let pairs = [(&zz, &self.z1), (&yy, &self.y1), (&xx, &self.x1), (&xp, &self.xa), (&yp, &self.ya), (&zp, &self.za)];
        Ok(pairs
            .iter()
            .map(|(a, b)| z0_character(a).rel_dist(&z0_character(b)))
            .fold(0.0, f64::max))
    }
}

pub fn derive_colorings(x: &RepParams, y: &RepParams, z: &RepParams) -> Result<Colorings> {
    let wrap = |e: Error| Error::RejectedTriple(e.to_string());
    let (y1, z1) = braided_rep_pair(y, z).map_err(wrap)?;
    let (x1, z2) = braided_rep_pair(x, &z1).map_err(wrap)?;
    let (x2, y2) = braided_rep_pair(&x1, &y1).map_err(wrap)?;
    let (xa, ya) = braided_rep_pair(x, y).map_err(wrap)?;
    let (xb, za) = braided_rep_pair(&xa, z).map_err(wrap)?;
    let (yb, zb) = braided_rep_pair(&ya, &za).map_err(wrap)?;
    Ok(Colorings {
        x: x.clone(),
        y: y.clone(),
        z: z.clone(),
        y1,
        z1,
        x1,
        z2,
        x2,
        y2,
        xa,
        ya,
        xb,
        za,
        yb,
        zb,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HybeResult {
    pub route: Route,
    /// Least-squares scalar with `LHS ≈ c · RHS`.
    pub c: C64,
    /// `c` from the ratio of the largest entries, as a cross-check.
    pub c_ratio: C64,
    /// `‖LHS − c RHS‖ / ‖LHS‖`.
    pub residual: f64,
    /// `arg(c) / 2π`, in `(−1/2, 1/2]`.
    pub arg_c_turns: f64,
    pub set_ybe_residual: f64,
}

/// Both sides of the triangle move from six pair R-matrices.
pub fn hybe_sides(ell: usize, r: [&CMat; 6]) -> Result<(CMat, CMat)> {
    // r = [R(x1,y1), R(x,z1), R(y,z), R(ya,za), R(xa,z), R(x,y)]
    let lhs = embed(r[0], ell, (1, 2))? * embed(r[1], ell, (1, 3))? * embed(r[2], ell, (2, 3))?;
    let rhs = embed(r[3], ell, (2, 3))? * embed(r[4], ell, (1, 3))? * embed(r[5], ell, (1, 2))?;
    Ok((lhs, rhs))
}

fn scalar_from_sides(lhs: &CMat, rhs: &CMat) -> Result<(C64, C64, f64)> {
    let (c, dev) = compare_up_to_scalar(lhs, rhs)?;
    let big = max_abs(rhs);
    let k = rhs.iter().position(|z| z.norm() >= big * (1.0 - 1e-9)).unwrap_or(0);
    let c_ratio = lhs.as_slice()[k] / rhs.as_slice()[k];
    Ok((c, c_ratio, dev))
}

pub fn hybe_residual(x: &RepParams, y: &RepParams, z: &RepParams, route: Route) -> Result<HybeResult> {
    let col = derive_colorings(x, y, z)?;
    let ell = x.ell();
    let rs = [
        r_matrix(&col.x1, &col.y1, route)?,
        r_matrix(&col.x, &col.z1, route)?,
        r_matrix(&col.y, &col.z, route)?,
        r_matrix(&col.ya, &col.za, route)?,
        r_matrix(&col.xa, &col.z, route)?,
        r_matrix(&col.x, &col.y, route)?,
    ];
    let (lhs, rhs) = hybe_sides(ell, [&rs[0], &rs[1], &rs[2], &rs[3], &rs[4], &rs[5]])?;
    let (c, c_ratio, residual) = scalar_from_sides(&lhs, &rhs)?;
    Ok(HybeResult {
        route,
        c,
        c_ratio,
        residual,
        arg_c_turns: c.arg() / (2.0 * std::f64::consts::PI),
        set_ybe_residual: col.set_ybe_residual(),
    })
}

/// The closed form with `R₁` replaced by the identity: `D(B^a ⊗ Ũ)(1 ⊗ U^{−1})`.
pub fn r0_matrix(p: &RepParams, q: &RepParams) -> Result<CMat> {
    let ctx = &p.ctx;
    let (q1, q2) = braided_rep_pair(p, q)?;
    let chi = chi_data(p, q, &q1, &q2)?;
    let (u, _) = gauge_u(q)?;
    let (ut, _) = gauge_u(&q2)?;
    let ba = mat_pow(&shift(ctx.ell), chi.a_exp as i64)?;
    Ok(twist_d(ctx, chi.chi1, chi.chi2) * kron(&ba, &ut) * kron(&identity(ctx.ell), &inverse(&u)?))
}

/// Up-to-scalar residual of the triangle move for the `s = 0` truncation along
/// the same chained colorings. Diagnostic only.
pub fn s0_diagnostic(x: &RepParams, y: &RepParams, z: &RepParams) -> Result<f64> {
    let col = derive_colorings(x, y, z)?;
    let rs = [
        r0_matrix(&col.x1, &col.y1)?,
        r0_matrix(&col.x, &col.z1)?,
        r0_matrix(&col.y, &col.z)?,
        r0_matrix(&col.ya, &col.za)?,
        r0_matrix(&col.xa, &col.z)?,
        r0_matrix(&col.x, &col.y)?,
    ];
    let (lhs, rhs) = hybe_sides(x.ell(), [&rs[0], &rs[1], &rs[2], &rs[3], &rs[4], &rs[5]])?;
    Ok(compare_up_to_scalar(&lhs, &rhs)?.1)
}
