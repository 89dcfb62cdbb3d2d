//! Holonomy R-matrices of pairs of cyclic representations.
//!
//! Two independent constructions are provided: a brute-force solve of the
//! intertwining equations ([`solve_intertwiner`]) and the closed form built from
//! the diagonal gauges, the twist `D` and the Φ-function of `B ⊗ B^{−1}`
//! ([`closed_form_r`]). Both produce an operator `R` with
//! `N_g R = R M_g`, where `M_g` is the coproduct action on the input pair and
//! `N_g` the opposite coproduct action on the braided output pair.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::glstar::{beta_inverse, Z0Char};
use crate::linalg::{self, det, diag, fro, identity, inner, inverse, kron, mat_pow, rel_diff, CMat, SparseCols, C64, ONE, ZERO};
use crate::rep::{build_rep, gauge_u, lift_character, shift, z0_character, Generator, RepMatrices, RepParams};
use crate::scalars::{phi_orbit_with, phi_value, DeqVariant, RootContext};

/// Relative threshold below which a singular value counts as zero.
pub const KERNEL_REL_TOL: f64 = 1e-6;
/// Required ratio between the two smallest singular values for a unique solution.
pub const GAP_THRESHOLD: f64 = 1e6;

/// `(ρ₁ ⊗ ρ₂)(Δ g)`, or of `σ∘Δ g` when `opposite`.
pub fn coproduct_rep(r1: &RepMatrices, r2: &RepMatrices, g: Generator, opposite: bool) -> Result<CMat> {
    let ell = r1.dim();
    let id = identity(ell);
    Ok(match (g, opposite) {
        (Generator::K, _) => kron(&r1.k, &r2.k),
        (Generator::L, _) => kron(&r1.l, &r2.l),
        (Generator::E, false) => kron(&r1.e, &r2.k) + kron(&id, &r2.e),
        (Generator::E, true) => kron(&r1.k, &r2.e) + kron(&r1.e, &id),
        (Generator::F, false) => kron(&r1.f, &id) + kron(&inverse(&r1.l)?, &r2.f),
        (Generator::F, true) => kron(&id, &r2.f) + kron(&r1.f, &inverse(&r2.l)?),
    })
}

/// Output colorings: characters braided by the inverse map, lifted slot-wise
/// with the strand data `(u, x)` of the same slot.
pub fn braided_rep_pair(p1: &RepParams, p2: &RepParams) -> Result<(RepParams, RepParams)> {
    let ctx = &p1.ctx;
    let (o1, o2) = beta_inverse(&z0_character(p1), &z0_character(p2))?;
    let q1 = lift_character(ctx, &o1, p1.u, p1.x)?;
    let q2 = lift_character(ctx, &o2, p2.u, p2.x)?;
    Ok((q1, q2))
}

/// An R-matrix with its provenance and quality data.
#[derive(Debug, Clone, Serialize)]
pub struct Intertwiner {
    #[serde(skip)]
    pub r: CMat,
    /// Numerical kernel dimension when obtained by the linear solve.
    pub kernel_dim: Option<usize>,
    /// `max_g ‖N_g R − R M_g‖ / ‖R‖` over `g ∈ {K, L, E, F}`.
    pub residual: f64,
    /// Factor applied by the determinant normalization.
    pub scalar_gauge: C64,
    /// Two smallest singular values of the linear system, when solved.
    pub sigmas: Option<(f64, f64)>,
    pub in_params: (RepParams, RepParams),
    pub out_params: (RepParams, RepParams),
}

impl Intertwiner {
    pub fn ell(&self) -> usize {
        self.in_params.0.ell()
    }
}

type Equation = (CMat, CMat);

/// Equations `N R = R M` fixing the R-matrix: the four coproduct equations plus
/// `R(E⊗1) = (E⊗L) R` and `R(1⊗F) = (K^{−1}⊗F) R`.
fn system(in1: &RepMatrices, in2: &RepMatrices, out1: &RepMatrices, out2: &RepMatrices) -> Result<Vec<Equation>> {
    let id = identity(in1.dim());
    let mut eqs = Vec::with_capacity(6);
    for g in Generator::ALL {
        eqs.push((coproduct_rep(in1, in2, g, false)?, coproduct_rep(out1, out2, g, true)?));
    }
    eqs.push((kron(&in1.e, &id), kron(&out1.e, &out2.l)));
    eqs.push((kron(&id, &in2.f), kron(&inverse(&out1.k)?, &out2.f)));
    Ok(eqs)
}

/// Solves the stacked system. The `K⊗K` equation is diagonal, so it only
/// restricts which entries of `R` may be nonzero; the rest is a nullspace
/// problem on those entries.
fn solve_system(eqs: &[Equation]) -> (linalg::NullspaceInfo, Vec<(usize, usize)>) {
    let (mk, nk) = &eqs[0];
    let n = mk.nrows();
    let mut support = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (nk[(i, i)], mk[(j, j)]);
            if (a - b).norm() < 1e-8 * b.norm() {
                support.push((i, j));
            }
        }
    }
    let mut cols = Vec::with_capacity(support.len());
    for &(i, j) in &support {
        // column of X ↦ N X − X M at X = E_ij, stacked over the equations
        let mut col = Vec::new();
        for (e, (m, nn)) in eqs.iter().enumerate().skip(1) {
            let off = (e - 1) * n * n;
            for r in 0..n {
                let v = nn[(r, i)];
                if v != ZERO {
                    col.push((off + r * n + j, v));
                }
            }
            for c in 0..n {
                let v = m[(j, c)];
                if v != ZERO {
                    col.push((off + i * n + c, -v));
                }
            }
        }
        cols.push(col);
    }
    let a = SparseCols { nrows: (eqs.len() - 1) * n * n, cols };
    (a.nullspace(KERNEL_REL_TOL), support)
}

/// Kernel information of the system for explicit in/out pairs, without
/// requiring a unique solution. Used for negative controls.
pub fn oracle_kernel(p1: &RepParams, p2: &RepParams, q1: &RepParams, q2: &RepParams) -> Result<linalg::NullspaceInfo> {
    let eqs = system(&build_rep(p1), &build_rep(p2), &build_rep(q1), &build_rep(q2))?;
    Ok(solve_system(&eqs).0)
}

pub fn solve_intertwiner(p1: &RepParams, p2: &RepParams) -> Result<Intertwiner> {
    let (q1, q2) = braided_rep_pair(p1, p2)?;
    solve_intertwiner_between(p1, p2, &q1, &q2)
}

pub fn solve_intertwiner_between(p1: &RepParams, p2: &RepParams, q1: &RepParams, q2: &RepParams) -> Result<Intertwiner> {
    let (in1, in2, out1, out2) = (build_rep(p1), build_rep(p2), build_rep(q1), build_rep(q2));
    let eqs = system(&in1, &in2, &out1, &out2)?;
    let (ns, support) = solve_system(&eqs);
    let smax = ns.sigma_max();
    let sig0 = ns.sigmas.first().copied().unwrap_or(f64::INFINITY);
    if ns.dim == 0 {
        return Err(Error::NoIntertwiner { sigma_min: sig0, sigma_max: smax });
    }
    if ns.dim >= 2 || ns.gap() < GAP_THRESHOLD {
        return Err(Error::NonGeneric(format!("kernel dimension {} (gap {:e})", ns.dim, ns.gap())));
    }
    let n = in1.dim() * in2.dim();
    let mut r = CMat::zeros(n, n);
    for (&(i, j), v) in support.iter().zip(&ns.vector) {
        r[(i, j)] = *v;
    }
    let (r, gauge) = normalize_det(&r)?;
    let residual = intertwining_residual(&r, &in1, &in2, &out1, &out2)?;
    Ok(Intertwiner {
        r,
        kernel_dim: Some(ns.dim),
        residual,
        scalar_gauge: gauge,
        sigmas: Some((sig0, ns.sigmas.get(1).copied().unwrap_or(f64::INFINITY))),
        in_params: (p1.clone(), p2.clone()),
        out_params: (q1.clone(), q2.clone()),
    })
}

pub fn intertwining_residual(r: &CMat, in1: &RepMatrices, in2: &RepMatrices, out1: &RepMatrices, out2: &RepMatrices) -> Result<f64> {
    let nr = fro(r);
    let mut worst: f64 = 0.0;
    for g in Generator::ALL {
        let m = coproduct_rep(in1, in2, g, false)?;
        let nn = coproduct_rep(out1, out2, g, true)?;
        worst = worst.max(fro(&(nn * r - r * m)) / nr);
    }
    Ok(worst)
}

/// Scales `R` to determinant 1 with the principal root, then fixes the
/// remaining `ℓ²`-th root of unity by putting the largest entry's argument in
/// `[0, 2π/n)`. Returns the normalized matrix and the total factor applied.
pub fn normalize_det(r: &CMat) -> Result<(CMat, C64)> {
    let n = r.nrows();
    let d = det(r);
    if !(d.norm() > 0.0) || !d.is_finite() {
        return Err(Error::SingularParameter("R has zero determinant".into()));
    }
    let mut f = d.powf(-1.0 / n as f64);
    let scaled = r * f;
    let big = scaled.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = scaled
        .iter()
        .copied()
        .find(|z| z.norm() >= big * (1.0 - 1e-9))
        .unwrap_or(ONE);
    let wedge = 2.0 * std::f64::consts::PI / n as f64;
    let arg = pivot.arg().rem_euclid(2.0 * std::f64::consts::PI);
    let k = (arg / wedge).floor();
    f *= C64::from_polar(1.0, -k * wedge);
    Ok((r * f, f))
}

/// `scalar = ⟨R2, R1⟩ / ⟨R2, R2⟩`, `deviation = ‖R1 − scalar R2‖ / ‖R1‖`.
pub fn compare_up_to_scalar(r1: &CMat, r2: &CMat) -> Result<(C64, f64)> {
    let n2 = inner(r2, r2);
    if n2.norm() == 0.0 {
        return Err(Error::InvalidInput("comparison against the zero matrix".into()));
    }
    let s = inner(r2, r1) / n2;
    Ok((s, fro(&(r1 - r2 * s)) / fro(r1).max(f64::MIN_POSITIVE)))
}

/// Scalars entering the closed form.
#[derive(Debug, Clone, Serialize)]
pub struct ChiData {
    pub chi1: C64,
    pub chi2: C64,
    /// Exponent with `ε^{−2a} = ũ₁ṽ₁ũ₂ṽ₂ / (u₁v₁u₂v₂)`.
    pub a_exp: usize,
    pub a_mismatch: f64,
    /// Spectral parameter: `R₁ = Φ(s ε^{−2} B⊗B^{−1})`.
    pub s: C64,
    /// Orbit step `ũ₂ṽ₂ / (u₂v₂)`; an `ℓ`-th root of `1 − s^ℓ`.
    pub t: C64,
    /// Principal root `(1 − s^ℓ)^{1/ℓ}`.
    pub t_principal: C64,
    pub z2: C64,
    pub z2_tilde: C64,
}

impl ChiData {
    /// `|t^ℓ − (1 − s^ℓ)|`.
    pub fn t_residual(&self, ell: usize) -> f64 {
        let n = ell as u32;
        (self.t.powu(n) - (ONE - self.s.powu(n))).norm()
    }

    /// Largest of `|χ₁^ℓ − 1|`, `|χ₂^ℓ − 1|`.
    pub fn chi_root_residual(&self, ell: usize) -> f64 {
        let n = ell as u32;
        (self.chi1.powu(n) - ONE).norm().max((self.chi2.powu(n) - ONE).norm())
    }

    /// Whether the step agrees with the principal root.
    pub fn principal_branch(&self) -> bool {
        (self.t - self.t_principal).norm() < 1e-9
    }
}

pub fn chi_data(p1: &RepParams, p2: &RepParams, q1: &RepParams, q2: &RepParams) -> Result<ChiData> {
    let ctx = &p1.ctx;
    let (_, z2) = gauge_u(p2)?;
    let (_, zt) = gauge_u(q2)?;
    let mu = q1.u * q1.v * q2.u * q2.v / (p1.u * p1.v * p2.u * p2.v);
    let (a_exp, a_mismatch) = (0..ctx.ell)
        .map(|a| (a, (ctx.pow(-2 * a as i64) - mu).norm()))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("ell >= 3");
    if a_mismatch > 1e-8 * mu.norm().max(1.0) {
        return Err(Error::BranchMismatch(format!("no power of ε^-2 within {a_mismatch:e} of {mu}")));
    }
    let chi1 = p1.y * q2.u / (q1.y * q2.v);
    let chi2 = q1.u * q1.v * p2.u * z2 * q2.y / (p2.y * q2.u * zt);
    let s = ctx.pow(1) * p1.y * p2.u * z2 / p2.y;
    let t = q2.u * q2.v / (p2.u * p2.v);
    let one_minus = ONE - s.powu(ctx.ell as u32);
    if one_minus.norm() < 1e-12 {
        return Err(Error::DegenerateSpectralParameter);
    }
    Ok(ChiData { chi1, chi2, a_exp, a_mismatch, s, t, t_principal: ctx.root(one_minus), z2, z2_tilde: zt })
}

/// `W = B ⊗ B^{−1}` and its powers' coefficients for a function given by its
/// values on the eigenspaces `W = ε^{2k}`.
fn spectral_function(ctx: &RootContext, values: &[C64]) -> CMat {
    let ell = ctx.ell;
    let b = shift(ell);
    let binv = b.transpose();
    let mut out = CMat::zeros(ell * ell, ell * ell);
    let mut bj = identity(ell);
    let mut bmj = identity(ell);
    for j in 0..ell {
        let g: C64 = values
            .iter()
            .enumerate()
            .map(|(k, f)| f * ctx.pow(-2 * (k * j) as i64))
            .sum::<C64>()
            / ell as f64;
        out += kron(&bj, &bmj) * g;
        bj = &b * bj;
        bmj = &binv * bmj;
    }
    out
}

/// `R₁ = Σ_k φ_k Π_k` with `φ` the Φ-orbit values for spectral parameter `s`
/// and step `t`.
pub fn r1_matrix(ctx: &RootContext, s: C64, t: C64) -> Result<CMat> {
    Ok(spectral_function(ctx, &phi_orbit_with(ctx, s, t, DeqVariant::Derived)?))
}

/// `D(v_n ⊗ v_m) = ε^{2nm} χ₁^{−n} χ₂^m v_n ⊗ v_m`, `n, m = 1..ℓ`.
pub fn twist_d(ctx: &RootContext, chi1: C64, chi2: C64) -> CMat {
    let ell = ctx.ell;
    let mut d = Vec::with_capacity(ell * ell);
    for n in 1..=ell {
        for m in 1..=ell {
            d.push(ctx.pow(2 * (n * m) as i64) * chi1.powi(-(n as i32)) * chi2.powi(m as i32));
        }
    }
    diag(&d)
}

/// Closed form before normalization, with its scalar data.
pub fn closed_form_raw(p1: &RepParams, p2: &RepParams, q1: &RepParams, q2: &RepParams) -> Result<(CMat, ChiData)> {
    let ctx = &p1.ctx;
    let chi = chi_data(p1, p2, q1, q2)?;
    let (u, _) = gauge_u(p2)?;
    let (ut, _) = gauge_u(q2)?;
    let ba = mat_pow(&shift(ctx.ell), chi.a_exp as i64)?;
    let r1 = r1_matrix(ctx, chi.s, chi.t)?;
    let id = identity(ctx.ell);
    let r = twist_d(ctx, chi.chi1, chi.chi2) * kron(&ba, &ut) * r1 * kron(&id, &inverse(&u)?);
    Ok((r, chi))
}

pub fn closed_form_r(p1: &RepParams, p2: &RepParams) -> Result<Intertwiner> {
    let (q1, q2) = braided_rep_pair(p1, p2)?;
    closed_form_between(p1, p2, &q1, &q2)
}

pub fn closed_form_between(p1: &RepParams, p2: &RepParams, q1: &RepParams, q2: &RepParams) -> Result<Intertwiner> {
    let (raw, _) = closed_form_raw(p1, p2, q1, q2)?;
    let (r, gauge) = normalize_det(&raw)?;
    let residual = intertwining_residual(&r, &build_rep(p1), &build_rep(p2), &build_rep(q1), &build_rep(q2))?;
    Ok(Intertwiner {
        r,
        kernel_dim: None,
        residual,
        scalar_gauge: gauge,
        sigmas: None,
        in_params: (p1.clone(), p2.clone()),
        out_params: (q1.clone(), q2.clone()),
    })
}

/// One evaluated formula for the action `w ↦ R w R^{−1}`.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GeneratorCheck {
    pub formula: String,
    pub variant: String,
    pub residual: f64,
}

impl GeneratorCheck {
    fn new(formula: &str, variant: &str, residual: f64) -> Self {
        Self { formula: formula.into(), variant: variant.into(), residual }
    }
}

struct PairMats {
    k1: CMat,
    l1: CMat,
    e1: CMat,
    f1: CMat,
    k2: CMat,
    l2: CMat,
    e2: CMat,
    f2: CMat,
}

impl PairMats {
    fn new(p1: &RepParams, p2: &RepParams) -> Self {
        let (a, b) = (build_rep(p1), build_rep(p2));
        Self { k1: a.k, l1: a.l, e1: a.e, f1: a.f, k2: b.k, l2: b.l, e2: b.e, f2: b.f }
    }
}

/// Evaluates the action of `R` on generators, on `ℓ`-th powers and the
/// derived formulas for `F⊗1` and `1⊗E`, with every variant that is adjudicated.
/// A formula whose right-hand side needs a singular inverse reports `inf`.
pub fn check_generator_action(r: &Intertwiner) -> Result<Vec<GeneratorCheck>> {
    let ctx = &r.in_params.0.ctx;
    let ell = ctx.ell as i64;
    let n = (ell * ell) as usize;
    let id = identity(ctx.ell);
    let idn = identity(n);
    let rinv = inverse(&r.r)?;
    let i = PairMats::new(&r.in_params.0, &r.in_params.1);
    let o = PairMats::new(&r.out_params.0, &r.out_params.1);
    let conj = |w: &CMat| &r.r * w * &rinv;
    let res = |w: &CMat, rhs: Option<CMat>| rhs.map_or(f64::INFINITY, |rhs| rel_diff(&conj(w), &rhs));
    let inv = |m: &CMat| m.clone().try_inverse();

    let k1i = inverse(&o.k1)?;
    let l1i = inverse(&o.l1)?;
    let l2i = inverse(&o.l2)?;
    let x0 = kron(&(&k1i * &o.e1), &(&o.f2 * &o.l2));
    let taus = [("t", ctx.pow(1)), ("t^-1", ctx.pow(-1))];
    let mut out = Vec::new();

    for (name, tau) in taus {
        let x = &x0 * tau;
        let one_minus_inv = inv(&(&idn - &x));
        out.push(GeneratorCheck::new(
            "R(1xK)",
            name,
            res(&kron(&id, &i.k2), one_minus_inv.as_ref().map(|m| kron(&id, &o.k2) * m)),
        ));
        out.push(GeneratorCheck::new(
            "R(1xL)",
            name,
            res(&kron(&id, &i.l2), one_minus_inv.as_ref().map(|m| kron(&id, &o.l2) * m)),
        ));
        out.push(GeneratorCheck::new("R(Kx1)", name, res(&kron(&i.k1, &id), Some((&idn - &x) * kron(&o.k1, &id)))));
    }
    out.push(GeneratorCheck::new("R(Ex1)", "as-printed", res(&kron(&i.e1, &id), Some(kron(&o.e1, &o.l2)))));
    out.push(GeneratorCheck::new("R(1xF)", "as-printed", res(&kron(&id, &i.f2), Some(kron(&k1i, &o.f2)))));

    // ℓ-th powers
    let p = |m: &CMat| mat_pow(m, ell);
    let (ik1, il1, ie1, if1) = (p(&i.k1)?, p(&i.l1)?, p(&i.e1)?, p(&i.f1)?);
    let (ik2, il2, ie2, if2) = (p(&i.k2)?, p(&i.l2)?, p(&i.e2)?, p(&i.f2)?);
    let (ok1, _, oe1, of1) = (p(&o.k1)?, p(&o.l1)?, p(&o.e1)?, p(&o.f1)?);
    let (ok2, ol2, oe2, of2) = (p(&o.k2)?, p(&o.l2)?, p(&o.e2)?, p(&o.f2)?);
    let ok1i = inverse(&ok1)?;
    let xl = kron(&(&ok1i * &oe1), &(&of2 * &ol2));
    for (name, sign) in [("minus", -1.0), ("plus", 1.0)] {
        let m = inv(&(&idn + &xl * C64::new(sign, 0.0)));
        out.push(GeneratorCheck::new(
            "R(1xK^l)",
            name,
            res(&kron(&id, &ik2), m.as_ref().map(|m| kron(&id, &ok2) * m)),
        ));
        out.push(GeneratorCheck::new(
            "R(1xL^l)",
            name,
            res(&kron(&id, &il2), m.as_ref().map(|m| kron(&id, &ol2) * m)),
        ));
    }
    out.push(GeneratorCheck::new("R(E^lx1)", "as-printed", res(&kron(&ie1, &id), Some(kron(&oe1, &ol2)))));
    out.push(GeneratorCheck::new("R(1xF^l)", "as-printed", res(&kron(&id, &if2), Some(kron(&ok1i, &of2)))));
    out.push(GeneratorCheck::new("R(K^lxK^l)", "as-printed", res(&kron(&ik1, &ik2), Some(kron(&ok1, &ok2)))));
    out.push(GeneratorCheck::new(
        "R(COP)",
        "as-printed",
        res(&(kron(&ie1, &ik2) + kron(&id, &ie2)), Some(kron(&ok1, &oe2) + kron(&oe1, &id))),
    ));
    let il1i = inverse(&il1)?;
    let copp_rhs = kron(&of1, &inverse(&ol2)?) + kron(&id, &of2);
    out.push(GeneratorCheck::new(
        "R(COPP)",
        "F^l-first",
        res(&(kron(&if1, &id) + kron(&il1i, &if2)), Some(copp_rhs.clone())),
    ));
    out.push(GeneratorCheck::new(
        "R(COPP)",
        "as-printed",
        res(&(kron(&ie1, &id) + kron(&il1i, &if2)), Some(copp_rhs)),
    ));

    // derived actions on 1⊗E and F⊗1
    let e_lead_printed = kron(&id, &o.e2) + kron(&o.e1, &o.k2);
    let e_lead = kron(&o.k1, &o.e2) + kron(&o.e1, &id);
    let e_tail = kron(&o.e1, &(&o.k2 * &o.l2));
    let f_lead = kron(&o.f1, &l2i) + kron(&id, &o.f2);
    let f_pref_printed = kron(&(&o.k1 * &l1i), &o.f2);
    let f_pref = kron(&(&k1i * &l1i), &o.f2);
    for (name, tau) in taus {
        let m = inv(&(&idn - &x0 * tau));
        let w_e = kron(&id, &i.e2);
        let w_f = kron(&i.f1, &id);
        out.push(GeneratorCheck::new(
            "R(1xE)",
            &format!("as-printed,{name}"),
            res(&w_e, m.as_ref().map(|m| &e_lead_printed - m * &e_tail)),
        ));
        out.push(GeneratorCheck::new(
            "R(1xE)",
            &format!("opposite-lead,{name}"),
            res(&w_e, m.as_ref().map(|m| &e_lead - m * &e_tail)),
        ));
        out.push(GeneratorCheck::new(
            "R(Fx1)",
            &format!("as-printed,{name}"),
            res(&w_f, m.as_ref().map(|m| &f_lead - &f_pref_printed * m)),
        ));
        out.push(GeneratorCheck::new(
            "R(Fx1)",
            &format!("K^-1-prefactor,{name}"),
            res(&w_f, m.as_ref().map(|m| &f_lead - &f_pref * m)),
        ));
    }
    Ok(out)
}

/// Largest residual of `R w R^{−1} = w'` for the central elements
/// `c⊗1, 1⊗c, KL^{−1}⊗1, 1⊗KL^{−1}`.
pub fn central_invariance(r: &Intertwiner) -> Result<f64> {
    let (a, b) = (build_rep(&r.in_params.0), build_rep(&r.in_params.1));
    let (c, d) = (build_rep(&r.out_params.0), build_rep(&r.out_params.1));
    let id = identity(a.dim());
    let rinv = inverse(&r.r)?;
    let kl = |m: &RepMatrices| -> Result<CMat> { Ok(&m.k * inverse(&m.l)?) };
    let pairs = [
        (kron(&a.casimir_matrix()?, &id), kron(&c.casimir_matrix()?, &id)),
        (kron(&id, &b.casimir_matrix()?), kron(&id, &d.casimir_matrix()?)),
        (kron(&kl(&a)?, &id), kron(&kl(&c)?, &id)),
        (kron(&id, &kl(&b)?), kron(&id, &kl(&d)?)),
    ];
    Ok(pairs
        .iter()
        .map(|(w, w2)| rel_diff(&(&r.r * w * &rinv), w2))
        .fold(0.0, f64::max))
}

/// Conjugation identities of `R₁`: `A⊗A`, `1⊗B^{−1}`, `B⊗1` are fixed and
/// `1⊗A ↦ t(1⊗A)(1 − sW)^{−1}` for both readings of `W`.
pub fn r1_identities(ctx: &RootContext, s: C64, t: C64) -> Result<Vec<GeneratorCheck>> {
    let ell = ctx.ell;
    let cs = crate::rep::clock_shift(ctx);
    let (a, b) = (&cs.a, &cs.b);
    let binv = b.transpose();
    let id = identity(ell);
    let idn = identity(ell * ell);
    let r1 = r1_matrix(ctx, s, t)?;
    let r1i = inverse(&r1)?;
    let conj = |w: &CMat| &r1 * w * &r1i;
    let mut out = vec![
        GeneratorCheck::new("fix-AxA", "A(x)A", rel_diff(&conj(&kron(a, a)), &kron(a, a))),
        GeneratorCheck::new("fix-1xB^-1", "1(x)B^-1", rel_diff(&conj(&kron(&id, &binv)), &kron(&id, &binv))),
        GeneratorCheck::new("fix-Bx1", "B(x)1", rel_diff(&conj(&kron(b, &id)), &kron(b, &id))),
    ];
    for (name, w) in [("B(x)B^-1", kron(b, &binv)), ("B(x)B", kron(b, b))] {
        let rhs = kron(&id, a) * inverse(&(&idn - w * s))? * t;
        out.push(GeneratorCheck::new("shift-1xA", name, rel_diff(&conj(&kron(&id, a)), &rhs)));
    }
    Ok(out)
}

/// One determinant measurement for the exponent fit.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DetSample {
    pub s: C64,
    /// `log|1 − s^ℓ|`.
    pub log_one_minus: f64,
    /// `log|det|` of the Φ-valued spectral core `Σ_k Φ(s ε^{2k−2}) Π_k`.
    pub log_det_core: f64,
    /// `log|det|` of the assembled closed form before normalization.
    pub log_det_full: f64,
}

pub fn det_sample(p1: &RepParams, p2: &RepParams, q1: &RepParams, q2: &RepParams) -> Result<DetSample> {
    let ctx = &p1.ctx;
    let (raw, chi) = closed_form_raw(p1, p2, q1, q2)?;
    Ok(det_sample_from(ctx, chi.s, &raw))
}

pub fn det_sample_from(ctx: &RootContext, s: C64, full: &CMat) -> DetSample {
    let values: Vec<C64> = (0..ctx.ell).map(|k| phi_value(ctx, s * ctx.pow(2 * k as i64 - 2))).collect();
    let core = spectral_function(ctx, &values);
    DetSample {
        s,
        log_one_minus: (ONE - s.powu(ctx.ell as u32)).norm().ln(),
        log_det_core: det(&core).norm().ln(),
        log_det_full: det(full).norm().ln(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentFit {
    pub alpha: f64,
    pub intercept: f64,
    /// Largest absolute deviation of a sample from the fitted line.
    pub fit_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DetProbe {
    pub samples: usize,
    pub inconclusive: bool,
    pub core: Option<ExponentFit>,
    pub full: Option<ExponentFit>,
    /// `(label, value, |alpha_core − value| < 1e−6)` for the printed candidates.
    pub candidates: Vec<(String, f64, bool)>,
}

fn fit_line(xs: &[f64], ys: &[f64]) -> ExponentFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let alpha = sxy / sxx;
    let intercept = my - alpha * mx;
    let fit_residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - alpha * x - intercept).abs())
        .fold(0.0, f64::max);
    ExponentFit { alpha, intercept, fit_residual }
}

/// Least-squares fit of `log|det|` against `log|1 − s^ℓ|`.
pub fn det_exponent_probe(ell: usize, samples: &[DetSample]) -> DetProbe {
    let l = ell as f64;
    let candidates_base = [
        ("l(l+2)/2", l * (l + 2.0) / 2.0),
        ("-l(l+2)/2", -l * (l + 2.0) / 2.0),
        ("l(l+1)/2", l * (l + 1.0) / 2.0),
        ("-l(l+1)/2", -l * (l + 1.0) / 2.0),
    ];
    let xs: Vec<f64> = samples.iter().map(|s| s.log_one_minus).collect();
    let spread = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - xs.iter().cloned().fold(f64::INFINITY, f64::min);
    if samples.len() < 2 || !(spread > 1e-9) {
        return DetProbe {
            samples: samples.len(),
            inconclusive: true,
            core: None,
            full: None,
            candidates: candidates_base.iter().map(|(n, v)| (n.to_string(), *v, false)).collect(),
        };
    }
    let core = fit_line(&xs, &samples.iter().map(|s| s.log_det_core).collect::<Vec<_>>());
    let full = fit_line(&xs, &samples.iter().map(|s| s.log_det_full).collect::<Vec<_>>());
    let candidates = candidates_base
        .iter()
        .map(|(n, v)| (n.to_string(), *v, (core.alpha - v).abs() < 1e-6))
        .collect();
    DetProbe { samples: samples.len(), inconclusive: false, core: Some(core), full: Some(full), candidates }
}

/// Condition estimate `‖M‖_F ‖M^{−1}‖_F`.
fn condition(m: &CMat) -> f64 {
    m.clone().try_inverse().map_or(f64::INFINITY, |mi| fro(m) * fro(&mi))
}

/// Genericity predicate for a pair: nonvanishing `c_m` on both input and
/// output slots, nonzero `η`, `s^ℓ ≠ 1`, `Ω'` away from zero, and
/// well-conditioned inverses in the generator-action checks.
pub fn is_generic(p1: &RepParams, p2: &RepParams) -> bool {
    generic_reason(p1, p2).is_none()
}

/// `None` for a generic pair, otherwise a short reason.
pub fn generic_reason(p1: &RepParams, p2: &RepParams) -> Option<String> {
    const TOL: f64 = 1e-6;
    let ch1: Z0Char = z0_character(p1);
    let ch2: Z0Char = z0_character(p2);
    if ch1.eta.norm() < TOL || ch2.eta.norm() < TOL {
        return Some("eta vanishes".into());
    }
    if (ONE - ch1.eta * ch2.phi).norm() < TOL {
        return Some("Omega' vanishes".into());
    }
    let (q1, q2) = match braided_rep_pair(p1, p2) {
        Ok(q) => q,
        Err(e) => return Some(e.to_string()),
    };
    for p in [p1, p2, &q1, &q2] {
        if p.c_values().iter().any(|c| c.norm() < TOL) {
            return Some("some c_m vanishes".into());
        }
    }
    let chi = match chi_data(p1, p2, &q1, &q2) {
        Ok(c) => c,
        Err(e) => return Some(e.to_string()),
    };
    if (ONE - chi.s.powu(p1.ell() as u32)).norm() < TOL {
        return Some("s^l = 1".into());
    }
    let o1 = build_rep(&q1);
    let o2 = build_rep(&q2);
    let Ok(k1i) = inverse(&o1.k) else { return Some("K singular".into()) };
    let x0 = kron(&(&k1i * &o1.e), &(&o2.f * &o2.l));
    let idn = identity(x0.nrows());
    for tau in [p1.ctx.pow(1), p1.ctx.pow(-1)] {
        if condition(&(&idn - &x0 * tau)) > 1e8 {
            return Some("ill-conditioned 1 - tX".into());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::scalars::primitive_root;

    fn pair(ell: usize) -> (RepParams, RepParams) {
        let ctx = primitive_root(ell).unwrap();
        (
            RepParams::new(&ctx, c(1.1, 0.2), c(0.9, -0.1), c(1.05, 0.15), c(0.95, 0.05)).unwrap(),
            RepParams::new(&ctx, c(0.92, -0.12), c(1.08, 0.2), c(0.97, -0.22), c(1.15, -0.1)).unwrap(),
        )
    }

    #[test]
    fn coproduct_k_is_symmetric() {
        let (p1, p2) = pair(3);
        let (a, b) = (build_rep(&p1), build_rep(&p2));
        let k = kron(&a.k, &b.k);
        assert_eq!(coproduct_rep(&a, &b, Generator::K, false).unwrap(), k);
        assert_eq!(coproduct_rep(&a, &b, Generator::K, true).unwrap(), k);
    }

    #[test]
    fn coproduct_of_e_power_is_central() {
        let (p1, p2) = pair(3);
        let (a, b) = (build_rep(&p1), build_rep(&p2));
        let de = mat_pow(&coproduct_rep(&a, &b, Generator::E, false).unwrap(), 3).unwrap();
        let (c1, c2) = (z0_character(&p1), z0_character(&p2));
        let want = identity(9) * (c1.eta * c2.kappa + c2.eta);
        assert!(rel_diff(&de, &want) < 1e-10);
    }

    #[test]
    fn braided_pair_preserves_strand_data() {
        let (p1, p2) = pair(5);
        let (q1, q2) = braided_rep_pair(&p1, &p2).unwrap();
        assert_eq!((q1.u, q1.x, q2.u, q2.x), (p1.u, p1.x, p2.u, p2.x));
        let (o1, o2) = beta_inverse(&z0_character(&p1), &z0_character(&p2)).unwrap();
        assert!(z0_character(&q1).rel_dist(&o1) < 1e-10 && z0_character(&q2).rel_dist(&o2) < 1e-10);
    }

    #[test]
    fn oracle_unique_and_intertwining() {
        let (p1, p2) = pair(3);
        let r = solve_intertwiner(&p1, &p2).unwrap();
        assert_eq!(r.kernel_dim, Some(1));
        assert!(r.residual < 1e-10);
        assert!(central_invariance(&r).unwrap() < 1e-10);
        assert!((det(&r.r) - ONE).norm() < 1e-10);
    }

    #[test]
    fn negative_control_has_no_solution() {
        let (p1, p2) = pair(3);
        let ns = oracle_kernel(&p1, &p2, &p1, &p2).unwrap();
        assert_eq!(ns.dim, 0);
        assert!(matches!(solve_intertwiner_between(&p1, &p2, &p1, &p2), Err(Error::NoIntertwiner { .. })));
    }

    #[test]
    fn closed_form_matches_oracle() {
        for ell in [3, 5] {
            let (p1, p2) = pair(ell);
            let o = solve_intertwiner(&p1, &p2).unwrap();
            let cf = closed_form_r(&p1, &p2).unwrap();
            assert!(cf.residual < 1e-9);
            let (_, dev) = compare_up_to_scalar(&cf.r, &o.r).unwrap();
            assert!(dev < 1e-8, "ell {ell}: {dev}");
        }
    }

    #[test]
    fn chi_data_relations() {
        let (p1, p2) = pair(5);
        let (q1, q2) = braided_rep_pair(&p1, &p2).unwrap();
        let chi = chi_data(&p1, &p2, &q1, &q2).unwrap();
        assert!(chi.t_residual(5) < 1e-12);
        assert!(chi.chi_root_residual(5) < 1e-10);
        assert!(chi.a_mismatch < 1e-9);
        let e1 = z0_character(&p1).eta;
        let f2 = z0_character(&p2).phi;
        assert!((chi.s.powu(5) - e1 * f2).norm() < 1e-12);
    }

    #[test]
    fn r1_is_identity_at_zero() {
        let ctx = primitive_root(5).unwrap();
        assert!(rel_diff(&r1_matrix(&ctx, ZERO, ONE).unwrap(), &identity(25)) < 1e-14);
    }

    #[test]
    fn r1_identities_pick_the_b_binv_reading() {
        let ctx = primitive_root(3).unwrap();
        let s = c(0.2, 0.1);
        let t = ctx.root(ONE - s.powu(3));
        let checks = r1_identities(&ctx, s, t).unwrap();
        for ch in &checks {
            let pass = ch.residual < 1e-9;
            assert_eq!(pass, ch.variant != "B(x)B", "{ch:?}");
        }
    }

    #[test]
    fn compare_examples() {
        let (p1, p2) = pair(3);
        let r = solve_intertwiner(&p1, &p2).unwrap().r;
        let (s, d) = compare_up_to_scalar(&r, &r).unwrap();
        assert!((s - ONE).norm() < 1e-15 && d < 1e-15);
        let (s, d) = compare_up_to_scalar(&(&r * c(0.0, 2.0)), &r).unwrap();
        assert!((s - c(0.0, 2.0)).norm() < 1e-14 && d < 1e-14);
        assert!(compare_up_to_scalar(&r, &CMat::zeros(9, 9)).is_err());
    }

    #[test]
    fn generator_action_variants() {
        let (p1, p2) = pair(3);
        let r = solve_intertwiner(&p1, &p2).unwrap();
        let checks = check_generator_action(&r).unwrap();
        let pass = |f: &str, v: &str| {
            checks.iter().find(|c| c.formula == f && c.variant == v).unwrap().residual < 1e-8
        };
        assert!(pass("R(1xK)", "t") && !pass("R(1xK)", "t^-1"));
        assert!(pass("R(Ex1)", "as-printed") && pass("R(1xF)", "as-printed"));
        assert!(pass("R(1xK^l)", "minus") && !pass("R(1xK^l)", "plus"));
        assert!(pass("R(COPP)", "F^l-first") && !pass("R(COPP)", "as-printed"));
        assert!(pass("R(1xE)", "opposite-lead,t^-1") && !pass("R(1xE)", "opposite-lead,t"));
        assert!(!pass("R(1xE)", "as-printed,t") && !pass("R(1xE)", "as-printed,t^-1"));
        assert!(pass("R(Fx1)", "K^-1-prefactor,t") && !pass("R(Fx1)", "K^-1-prefactor,t^-1"));
    }

    #[test]
    fn normalization_is_deterministic() {
        let (p1, p2) = pair(3);
        let r = solve_intertwiner(&p1, &p2).unwrap().r;
        let (a, _) = normalize_det(&(&r * c(-0.3, 1.7))).unwrap();
        assert!(rel_diff(&a, &r) < 1e-12);
    }

    #[test]
    fn det_probe_core_exponent() {
        let ctx = primitive_root(3).unwrap();
        let samples: Vec<DetSample> = (0..12)
            .map(|k| {
                let s = c(0.05 + 0.03 * k as f64, 0.02 * k as f64);
                det_sample_from(&ctx, s, &identity(9))
            })
            .collect();
        let probe = det_exponent_probe(3, &samples);
        let core = probe.core.unwrap();
        assert!((core.alpha + 6.0).abs() < 1e-9 && core.fit_residual < 1e-9);
        let same = vec![samples[0]; 10];
        assert!(det_exponent_probe(3, &same).inconclusive);
    }

    #[test]
    fn generic_examples() {
        let (p1, p2) = pair(3);
        assert!(is_generic(&p1, &p2));
        let ctx = primitive_root(3).unwrap();
        let v = c(1.1, 0.2);
        let bad = RepParams::new(&ctx, ONE, v, v * ctx.pow(1), ONE).unwrap();
        assert!(!is_generic(&bad, &p2));
        // x = v kills the middle c_m, so the all-ones point is degenerate
        let ones = RepParams::new(&ctx, ONE, ONE, ONE, ONE).unwrap();
        assert!(ones.c_m(2).norm() < 1e-15);
        assert!(!is_generic(&ones, &p2));
    }
}
