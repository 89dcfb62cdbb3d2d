//! Cyclic irreducible representations at an odd root of unity.
//!
//! Basis vectors are `v_1..v_ℓ`, stored at indices `0..ℓ`, with `v_{ℓ+1} = v_1`.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::glstar::Z0Char;
use crate::linalg::{self, diag, fro, identity, inverse, mat_pow, off_scalar, CMat, SparseCols, C64, ONE, ZERO};
use crate::scalars::RootContext;

/// Clock `A v_n = ε^{2n} v_n` and shift `B v_n = v_{n+1}`.
#[derive(Debug, Clone)]
pub struct ClockShift {
    pub a: CMat,
    pub b: CMat,
}

pub fn clock_shift(ctx: &RootContext) -> ClockShift {
    let ell = ctx.ell;
    let a = diag(&(1..=ell).map(|n| ctx.pow(2 * n as i64)).collect::<Vec<_>>());
    ClockShift { a, b: shift(ell) }
}

pub fn shift(ell: usize) -> CMat {
    let mut b = CMat::zeros(ell, ell);
    for i in 0..ell {
        b[((i + 1) % ell, i)] = ONE;
    }
    b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    K,
    L,
    E,
    F,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::K, Generator::L, Generator::E, Generator::F];

    pub fn name(self) -> &'static str {
        match self {
            Generator::K => "K",
            Generator::L => "L",
            Generator::E => "E",
            Generator::F => "F",
        }
    }
}

/// Parameters `(u, v, x, y)` of a cyclic representation.
#[derive(Debug, Clone, PartialEq)]
pub struct RepParams {
    pub ctx: RootContext,
    pub u: C64,
    pub v: C64,
    pub x: C64,
    pub y: C64,
}

impl Serialize for RepParams {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RepParams", 5)?;
        st.serialize_field("ell", &self.ctx.ell)?;
        st.serialize_field("u", &self.u)?;
        st.serialize_field("v", &self.v)?;
        st.serialize_field("x", &self.x)?;
        st.serialize_field("y", &self.y)?;
        st.end()
    }
}

impl RepParams {
    pub fn new(ctx: &RootContext, u: C64, v: C64, x: C64, y: C64) -> Result<Self> {
        for (name, z) in [("u", u), ("v", v), ("x", x), ("y", y)] {
            if !(z.norm() > 1e-300) || !z.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {z} must be nonzero and finite")));
            }
        }
        Ok(Self { ctx: ctx.clone(), u, v, x, y })
    }

    pub fn ell(&self) -> usize {
        self.ctx.ell
    }

    /// `c_m = (x v^{−1} ε^{1−2m} − 1)(v ε^{2m−1} − x^{−1})`, `m = 1..ℓ`.
    pub fn c_m(&self, m: usize) -> C64 {
        let (v, x, ctx) = (self.v, self.x, &self.ctx);
        (x / v * ctx.pow(1 - 2 * m as i64) - ONE) * (v * ctx.pow(2 * m as i64 - 1) - ONE / x)
    }

    pub fn c_values(&self) -> Vec<C64> {
        (1..=self.ell()).map(|m| self.c_m(m)).collect()
    }

    /// The Casimir value `u(x + x^{−1})`.
    pub fn casimir(&self) -> C64 {
        self.u * (self.x + ONE / self.x)
    }
}

#[derive(Debug, Clone)]
pub struct RepMatrices {
    pub k: CMat,
    pub l: CMat,
    pub e: CMat,
    pub f: CMat,
    pub params: RepParams,
}

impl RepMatrices {
    pub fn get(&self, g: Generator) -> &CMat {
        match g {
            Generator::K => &self.k,
            Generator::L => &self.l,
            Generator::E => &self.e,
            Generator::F => &self.f,
        }
    }

    /// `EF + Kε^{−1} + L^{−1}ε`.
    pub fn casimir_matrix(&self) -> Result<CMat> {
        let ctx = &self.params.ctx;
        Ok(&self.e * &self.f + &self.k * ctx.pow(-1) + inverse(&self.l)? * ctx.pow(1))
    }

    pub fn dim(&self) -> usize {
        self.k.nrows()
    }
}

pub fn build_rep(p: &RepParams) -> RepMatrices {
    let ctx = &p.ctx;
    let ell = ctx.ell;
    let cs = clock_shift(ctx);
    let k = &cs.a * (p.u * p.v);
    let l = &cs.a * (p.v / p.u);
    let e = &cs.b * p.y;
    let mut f = CMat::zeros(ell, ell);
    let pref = p.u / p.y;
    for i in 0..ell {
        f[((i + ell - 1) % ell, i)] = pref * p.c_m(i + 1);
    }
    RepMatrices { k, l, e, f, params: p.clone() }
}

/// `(K^ℓ, L^ℓ, E^ℓ, F^ℓ)` scalars of the representation.
pub fn z0_character(p: &RepParams) -> Z0Char {
    let n = p.ell() as i32;
    let (u, v, x, y) = (p.u, p.v, p.x, p.y);
    Z0Char {
        kappa: (u * v).powi(n),
        lambda: (v / u).powi(n),
        eta: y.powi(n),
        phi: y.powi(-n) * u.powi(n) * (x.powi(n) + x.powi(-n) - v.powi(n) - v.powi(-n)),
    }
}

/// `F^ℓ` without the `y^{−ℓ}` factor, kept only for comparison.
pub fn f_power_without_y(p: &RepParams) -> C64 {
    let n = p.ell() as i32;
    p.u.powi(n) * (p.x.powi(n) * p.v.powi(-n) - ONE) * (p.v.powi(n) - p.x.powi(-n))
}

/// Rebuild `(u, v, x, y)` from a character and the strand data `(u, x)`.
pub fn lift_character(ctx: &RootContext, c: &Z0Char, u: C64, x: C64) -> Result<RepParams> {
    if c.eta.norm() < 1e-300 {
        return Err(Error::DegenerateCharacter("eta = 0 has no cyclic lift".into()));
    }
    if c.kappa.norm() < 1e-300 {
        return Err(Error::DegenerateCharacter("kappa = 0".into()));
    }
    let n = ctx.ell as i32;
    let v = ctx.root(c.kappa / u.powi(n));
    let y = ctx.root(c.eta);
    let p = RepParams::new(ctx, u, v, x, y)?;
    let back = z0_character(&p);
    let dl = (back.lambda - c.lambda).norm() / c.lambda.norm();
    let scale = c.phi.norm().max(back.phi.norm()).max(c.eta.norm().recip());
    let dphi = (back.phi - c.phi).norm() / scale;
    if dl > 1e-9 || dphi > 1e-9 {
        return Err(Error::InconsistentLift(format!("lambda mismatch {dl:e}, phi mismatch {dphi:e}")));
    }
    Ok(p)
}

/// How the diagonal gauge `U` is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeVariant {
    /// `U_nn = z^n ∏_{m≤n} c_m^{−1}` with `z^ℓ = ∏ c_m = (x^ℓ v^{−ℓ} − 1)(v^ℓ − x^{−ℓ})`.
    PowerZ,
    /// `U_nn = z ∏_{m≤n} c_m^{−1}` with `z^ℓ = (x^ℓ v^{−ℓ} − 1)(v^ℓ − x^ℓ)`.
    Printed,
}

/// Diagonal gauge conjugating the `F` shape to a pure shift, and its scalar `z`.
pub fn gauge_u(p: &RepParams) -> Result<(CMat, C64)> {
    gauge_u_variant(p, GaugeVariant::PowerZ)
}

pub fn gauge_u_variant(p: &RepParams, variant: GaugeVariant) -> Result<(CMat, C64)> {
    let ctx = &p.ctx;
    let cs = p.c_values();
    if let Some(m) = cs.iter().position(|c| c.norm() < 1e-12) {
        return Err(Error::NonGeneric(format!("c_{} vanishes", m + 1)));
    }
    let n = ctx.ell as i32;
    let z = match variant {
        GaugeVariant::PowerZ => ctx.root(cs.iter().product()),
        GaugeVariant::Printed => ctx.root((p.x.powi(n) * p.v.powi(-n) - ONE) * (p.v.powi(n) - p.x.powi(n))),
    };
    let mut entries = Vec::with_capacity(ctx.ell);
    let mut prod = ONE;
    let mut zn = ONE;
    for c in &cs {
        prod *= c;
        zn *= z;
        entries.push(match variant {
            GaugeVariant::PowerZ => zn / prod,
            GaugeVariant::Printed => z / prod,
        });
    }
    Ok((diag(&entries), z))
}

/// Residual of `U^{−1} F̂ U = z B^{−1}` (or `= B^{−1}` for the printed normalization),
/// where `F̂ = B^{−1} diag(c)` is `F` without its `y^{−1}u` prefactor.
pub fn gauge_residual(p: &RepParams, variant: GaugeVariant) -> Result<f64> {
    let (u, z) = gauge_u_variant(p, variant)?;
    let binv = shift(p.ell()).transpose();
    let fhat = &binv * diag(&p.c_values());
    let lhs = inverse(&u)? * fhat * &u;
    let rhs = match variant {
        GaugeVariant::PowerZ => &binv * z,
        GaugeVariant::Printed => binv,
    };
    Ok(linalg::rel_diff(&lhs, &rhs))
}

/// `P_n v_m = δ_{nm} v_m`, `n = 1..ℓ`.
pub fn projector(ell: usize, n: usize) -> CMat {
    let mut p = CMat::zeros(ell, ell);
    p[((n - 1) % ell, (n - 1) % ell)] = ONE;
    p
}

/// Relative residuals of the defining relations and center identities.
#[derive(Debug, Clone, Serialize)]
pub struct RelationResiduals {
    pub kl_commute: f64,
    pub ke: f64,
    pub kf: f64,
    pub le: f64,
    pub lf: f64,
    pub ef_commutator: f64,
    pub centrality: f64,
    pub casimir: f64,
    pub center_relation: f64,
}

impl RelationResiduals {
    pub fn max(&self) -> f64 {
        [
            self.kl_commute,
            self.ke,
            self.kf,
            self.le,
            self.lf,
            self.ef_commutator,
            self.centrality,
            self.casimir,
            self.center_relation,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn rel(a: &CMat, b: &CMat) -> f64 {
    fro(&(a - b)) / fro(a).max(fro(b)).max(f64::MIN_POSITIVE)
}

pub fn relation_residuals(r: &RepMatrices) -> Result<RelationResiduals> {
    let ctx = &r.params.ctx;
    let ell = ctx.ell;
    let (k, l, e, f) = (&r.k, &r.l, &r.e, &r.f);
    let q2 = ctx.pow(2);
    let qm2 = ctx.pow(-2);
    let linv = inverse(l)?;
    let ef = e * f - f * e;
    let ef_rhs = (k - &linv) * (ctx.pow(1) - ctx.pow(-1));

    let mut centrality: f64 = 0.0;
    for g in [k, l, e, f] {
        centrality = centrality.max(off_scalar(&mat_pow(g, ell as i64)?).1);
    }

    let cas = rel(&r.casimir_matrix()?, &(identity(ell) * r.params.casimir()));

    let cmat = identity(ell) * r.params.casimir();
    let mut lhs = identity(ell);
    for j in 0..ell as i64 {
        lhs = lhs * (&cmat - k * ctx.pow(j + 1) - &linv * ctx.pow(-j - 1));
    }
    let rhs = mat_pow(e, ell as i64)? * mat_pow(f, ell as i64)?;

    Ok(RelationResiduals {
        kl_commute: rel(&(k * l), &(l * k)),
        ke: rel(&(k * e), &(e * k * q2)),
        kf: rel(&(k * f), &(f * k * qm2)),
        le: rel(&(l * e), &(e * l * q2)),
        lf: rel(&(l * f), &(f * l * qm2)),
        ef_commutator: rel(&ef, &ef_rhs),
        centrality,
        casimir: cas,
        center_relation: rel(&lhs, &rhs),
    })
}

/// Dimension of the commutant of `{K, L, E, F}`; 1 for an irreducible representation.
pub fn commutant_dim(r: &RepMatrices) -> usize {
    let n = r.dim();
    let gens = [&r.k, &r.l, &r.e, &r.f];
    let mut cols = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // column of X ↦ (gX − Xg) for X = E_ij, stacked over generators
            let mut col = Vec::new();
            for (gi, g) in gens.iter().enumerate() {
                let off = gi * n * n;
                for row in 0..n {
                    let v = g[(row, i)];
                    if v != ZERO {
                        col.push((off + row * n + j, v));
                    }
                }
                for cc in 0..n {
                    let v = g[(j, cc)];
                    if v != ZERO {
                        col.push((off + i * n + cc, -v));
                    }
                }
            }
            cols.push(col);
        }
    }
    SparseCols { nrows: 4 * n * n, cols }.nullspace(1e-8).dim
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::scalars::primitive_root;

    fn params(ell: usize) -> RepParams {
        let ctx = primitive_root(ell).unwrap();
        RepParams::new(&ctx, c(1.1, 0.2), c(0.9, -0.1), c(1.05, 0.15), c(0.95, 0.05)).unwrap()
    }

    #[test]
    fn clock_shift_ell3() {
        let ctx = primitive_root(3).unwrap();
        let cs = clock_shift(&ctx);
        assert!((cs.a[(0, 0)] - ctx.pow(2)).norm() < 1e-15);
        assert!((cs.a[(1, 1)] - ctx.pow(4)).norm() < 1e-15);
        assert!((cs.a[(2, 2)] - ONE).norm() < 1e-15);
        assert_eq!(mat_pow(&cs.b, 3).unwrap(), identity(3));
    }

    #[test]
    fn clock_shift_commutation() {
        let ctx = primitive_root(5).unwrap();
        let cs = clock_shift(&ctx);
        let d = &cs.a * &cs.b - &cs.b * &cs.a * ctx.pow(2);
        assert!(fro(&d) < 1e-13);
    }

    #[test]
    fn u_v_one_collapses_diagonals() {
        let ctx = primitive_root(3).unwrap();
        let p = RepParams::new(&ctx, ONE, ONE, c(1.3, 0.0), c(0.7, 0.0)).unwrap();
        let r = build_rep(&p);
        let a = clock_shift(&ctx).a;
        assert!(fro(&(&r.k - &a)) < 1e-15 && fro(&(&r.l - &a)) < 1e-15);
    }

    #[test]
    fn relations_hold() {
        for ell in [3, 5, 7] {
            let res = relation_residuals(&build_rep(&params(ell))).unwrap();
            assert!(res.max() < 1e-11, "{res:?}");
        }
    }

    #[test]
    fn character_matches_matrix_powers() {
        let p = params(3);
        let r = build_rep(&p);
        let ch = z0_character(&p);
        let fl = mat_pow(&r.f, 3).unwrap();
        assert!((fl[(0, 0)] - ch.phi).norm() < 1e-11 * ch.phi.norm().max(1.0));
        assert!((mat_pow(&r.k, 3).unwrap()[(1, 1)] - ch.kappa).norm() < 1e-12);
        assert!((mat_pow(&r.e, 3).unwrap()[(2, 2)] - ch.eta).norm() < 1e-12);
    }

    #[test]
    fn character_special_values() {
        let ctx = primitive_root(3).unwrap();
        let p = RepParams::new(&ctx, ONE, ONE, ONE, ONE).unwrap();
        let ch = z0_character(&p);
        assert!((ch.kappa - ONE).norm() + (ch.lambda - ONE).norm() + (ch.eta - ONE).norm() + ch.phi.norm() < 1e-14);
        let q = RepParams::new(&ctx, c(1.2, 0.1), c(0.8, 0.3), c(0.8, 0.3), c(1.1, 0.0)).unwrap();
        assert!(z0_character(&q).phi.norm() < 1e-14);
    }

    #[test]
    fn lift_round_trip() {
        let p = params(5);
        let q = lift_character(&p.ctx, &z0_character(&p), p.u, p.x).unwrap();
        assert!((q.v - p.v).norm() < 1e-12 && (q.y - p.y).norm() < 1e-12);
        let ctx = primitive_root(3).unwrap();
        let e = Z0Char { kappa: ONE, lambda: ONE, eta: ONE, phi: ZERO };
        let q = lift_character(&ctx, &e, ONE, ONE).unwrap();
        assert!((q.v - ONE).norm() < 1e-15 && (q.y - ONE).norm() < 1e-15);
    }

    #[test]
    fn lift_rejects_eta_zero_and_wrong_strand() {
        let p = params(3);
        let mut ch = z0_character(&p);
        assert!(matches!(lift_character(&p.ctx, &ch, c(0.5, 0.0), p.x), Err(Error::InconsistentLift(_))));
        ch.eta = ZERO;
        assert!(matches!(lift_character(&p.ctx, &ch, p.u, p.x), Err(Error::DegenerateCharacter(_))));
    }

    #[test]
    fn gauge_conjugates_f_to_shift() {
        for ell in [3, 5] {
            let p = params(ell);
            assert!(gauge_residual(&p, GaugeVariant::PowerZ).unwrap() < 1e-11);
            assert!(gauge_residual(&p, GaugeVariant::Printed).unwrap() > 1e-3);
            let (u, _) = gauge_u(&p).unwrap();
            assert!((u[(ell - 1, ell - 1)] - ONE).norm() < 1e-12);
            let mut p2 = p.clone();
            p2.y *= 3.0;
            assert_eq!(gauge_u(&p2).unwrap().0, u);
        }
    }

    #[test]
    fn gauge_detects_vanishing_c() {
        let ctx = primitive_root(3).unwrap();
        let v = c(1.1, 0.2);
        let p = RepParams::new(&ctx, ONE, v, v * ctx.pow(1), ONE).unwrap();
        assert!(matches!(gauge_u(&p), Err(Error::NonGeneric(_))));
    }

    #[test]
    fn irreducible() {
        assert_eq!(commutant_dim(&build_rep(&params(3))), 1);
        assert_eq!(commutant_dim(&build_rep(&params(5))), 1);
    }

    #[test]
    fn projectors_sum_to_identity() {
        let s = (1..=5).fold(CMat::zeros(5, 5), |acc, n| acc + projector(5, n));
        assert_eq!(s, identity(5));
    }
}
