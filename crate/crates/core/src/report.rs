//! Seeded sampling, suite orchestration, variant adjudication and JSON reports.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::glstar::{
    beta_forward, beta_inverse, beta_inverse_with, conserved_quantities, glstar_multiply,
    matrix_route_beta, MatrixRouteVariant, OmegaSign, Z0Char,
};
use crate::hybe::{derive_colorings, hybe_residual, s0_diagnostic, Route};
use crate::intertwiner::{
    central_invariance, check_generator_action, chi_data, closed_form_between, compare_up_to_scalar,
    det_exponent_probe, det_sample_from, closed_form_raw, generic_reason, oracle_kernel, r1_identities,
    solve_intertwiner_between, ChiData, DetProbe, DetSample, GeneratorCheck, Intertwiner,
};
use crate::linalg::{to_tsv, C64, ONE};
use crate::rep::{
    build_rep, commutant_dim, f_power_without_y, gauge_residual, gauge_u, relation_residuals, z0_character,
    GaugeVariant, RepParams,
};
use crate::scalars::{phi_orbit_with, phi_series, DeqVariant, RootContext};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "HOLOBRAID_THREADS";

const MAX_ATTEMPTS: usize = 100;

/// The unbraided negative-control system is solved on every this many trials.
pub const NEGATIVE_CONTROL_EVERY: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RouteChoice {
    Oracle,
    ClosedForm,
    Both,
}

impl RouteChoice {
    fn oracle(self) -> bool {
        matches!(self, RouteChoice::Oracle | RouteChoice::Both)
    }

    fn closed(self) -> bool {
        matches!(self, RouteChoice::ClosedForm | RouteChoice::Both)
    }

    fn primary(self) -> Route {
        match self {
            RouteChoice::ClosedForm => Route::ClosedForm,
            _ => Route::Oracle,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub ell: usize,
    pub trials: usize,
    pub seed: u64,
    /// Intertwining residual tolerance.
    pub tol: f64,
    /// Half-width of the sampling box in log coordinates.
    pub radius: f64,
    pub route: RouteChoice,
    /// Run a triple every this many trials; 0 disables triples.
    pub hybe_every: usize,
    #[serde(skip)]
    pub report_path: Option<PathBuf>,
    #[serde(skip)]
    pub dump_dir: Option<PathBuf>,
    /// Worker count; `None` reads the environment, then uses all cores.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl SuiteConfig {
    pub fn new(ell: usize) -> Self {
        Self {
            ell,
            trials: 20,
            seed: 42,
            tol: 1e-9,
            radius: 0.3,
            route: RouteChoice::Both,
            hybe_every: 5,
            report_path: None,
            dump_dir: None,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<RootContext> {
        let ctx = RootContext::new(self.ell)?;
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidInput("tol must be positive".into()));
        }
        if !(self.radius > 0.0 && self.radius <= 1.0) {
            return Err(Error::InvalidInput("radius must lie in (0, 1]".into()));
        }
        Ok(ctx)
    }
}

/// Worker count from the argument, else `HOLOBRAID_THREADS`, else all cores.
pub fn worker_count(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()))
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Independent stream per `(seed, trial_index, kind)`.
pub fn trial_rng(seed: u64, trial_index: usize, kind: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((trial_index as u64) << 2) | (kind & 3));
    rng
}

fn sample_exp(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    let re = rng.random_range(-radius..=radius);
    let im = rng.random_range(-radius..=radius);
    C64::new(re, im).exp()
}

/// `u, v, x, y = exp(δ)` with `δ` uniform in the box of half-width `radius`.
pub fn sample_one(ctx: &RootContext, rng: &mut ChaCha8Rng, radius: f64) -> Result<RepParams> {
    let u = sample_exp(rng, radius);
    let v = sample_exp(rng, radius);
    let x = sample_exp(rng, radius);
    let y = sample_exp(rng, radius);
    RepParams::new(ctx, u, v, x, y)
}

/// A single generic representation (its pair with itself is not required to be generic).
pub fn sample_params(ctx: &RootContext, config: &SuiteConfig, trial_index: usize) -> Result<RepParams> {
    let mut rng = trial_rng(config.seed, trial_index, 2);
    for _ in 0..MAX_ATTEMPTS {
        let p = sample_one(ctx, &mut rng, config.radius)?;
        if p.c_values().iter().all(|c| c.norm() > 1e-6) {
            return Ok(p);
        }
    }
    Err(Error::SamplingExhausted(MAX_ATTEMPTS))
}

/// A generic pair and the number of draws it took.
pub fn sample_pair(ctx: &RootContext, config: &SuiteConfig, trial_index: usize) -> Result<((RepParams, RepParams), usize)> {
    let mut rng = trial_rng(config.seed, trial_index, 0);
    for attempt in 1..=MAX_ATTEMPTS {
        let p1 = sample_one(ctx, &mut rng, config.radius)?;
        let p2 = sample_one(ctx, &mut rng, config.radius)?;
        if generic_reason(&p1, &p2).is_none() {
            return Ok(((p1, p2), attempt));
        }
    }
    Err(Error::SamplingExhausted(MAX_ATTEMPTS))
}

/// A triple whose six braided pairs are all generic.
pub fn sample_triple(
    ctx: &RootContext,
    config: &SuiteConfig,
    trial_index: usize,
) -> Result<((RepParams, RepParams, RepParams), usize)> {
    let mut rng = trial_rng(config.seed, trial_index, 1);
    for attempt in 1..=MAX_ATTEMPTS {
        let x = sample_one(ctx, &mut rng, config.radius)?;
        let y = sample_one(ctx, &mut rng, config.radius)?;
        let z = sample_one(ctx, &mut rng, config.radius)?;
        if triple_is_generic(&x, &y, &z) {
            return Ok(((x, y, z), attempt));
        }
    }
    Err(Error::SamplingExhausted(MAX_ATTEMPTS))
}

pub fn triple_is_generic(x: &RepParams, y: &RepParams, z: &RepParams) -> bool {
    let Ok(c) = derive_colorings(x, y, z) else { return false };
    [(&c.x1, &c.y1), (&c.x, &c.z1), (&c.y, &c.z), (&c.ya, &c.za), (&c.xa, &c.z), (&c.x, &c.y)]
        .iter()
        .all(|(a, b)| generic_reason(a, b).is_none())
}

/// A residual as a raw double plus a 3-significant-digit string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual(pub f64);

impl Residual {
    pub fn display(&self) -> String {
        if self.0.is_finite() {
            format!("{:.2e}", self.0)
        } else {
            format!("{}", self.0)
        }
    }
}

impl Serialize for Residual {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Residual", 2)?;
        st.serialize_field("value", &self.0)?;
        st.serialize_field("display", &self.display())?;
        st.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub residual: Residual,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    fn below(value: f64, threshold: f64) -> Self {
        Self { residual: Residual(value), threshold, pass: value < threshold }
    }
}

/// Acceptance criterion each check feeds into.
pub fn criterion_of(check: &str) -> &'static str {
    match check.split('.').next().unwrap_or("") {
        "rep" => "1-representation",
        "braid" => "2-braiding",
        "oracle" => "3-oracle",
        "closed" | "chi" | "r1" | "gen" => "4-closed-form",
        "hybe" => "5-hybe",
        _ => "other",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConservedDeltas {
    pub t_slot1: f64,
    pub t_slot2: f64,
    pub dt_slot1: f64,
    pub dt_slot2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RouteRecord {
    pub c: C64,
    pub abs_c: f64,
    pub arg_c_turns: f64,
    pub c_ratio: C64,
    pub residual: Residual,
}

#[derive(Debug, Clone, Serialize)]
pub struct HybeRecord {
    pub attempts: usize,
    pub colorings: [RepParams; 3],
    pub set_ybe_residual: Residual,
    pub labelled_list_residual: Residual,
    pub strand_data_preserved: bool,
    pub routes: BTreeMap<String, RouteRecord>,
    /// Diagnostic only.
    pub s0_residual: Option<Residual>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleRecord {
    pub kernel_dim: Option<usize>,
    pub sigma_min: Option<f64>,
    pub sigma_second: Option<f64>,
    pub negative_control_dim: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    pub trial_index: usize,
    pub attempts: usize,
    pub params: Vec<RepParams>,
    pub out_params: Vec<RepParams>,
    pub checks: BTreeMap<String, Check>,
    pub conserved: Option<ConservedDeltas>,
    /// formula → variant → residual, for formulas with competing readings.
    pub evidence: BTreeMap<String, BTreeMap<String, Residual>>,
    pub oracle: Option<OracleRecord>,
    pub comparison: Option<Comparison>,
    pub chi: Option<ChiData>,
    pub det_sample: Option<DetSample>,
    pub hybe: Option<HybeRecord>,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub scalar: C64,
    pub deviation: Residual,
}

fn add_evidence(t: &mut TrialReport, formula: &str, variant: &str, residual: f64) {
    t.evidence.entry(formula.to_string()).or_default().insert(variant.to_string(), Residual(residual));
}

fn check(t: &mut TrialReport, name: &str, value: f64, threshold: f64) {
    t.checks.insert(name.to_string(), Check::below(value, threshold));
}

/// Thresholds per formula for the adjudication evidence.
pub fn adjudication_threshold(formula: &str) -> f64 {
    match formula {
        "matrix-route" | "1xA-conjugation" => 1e-9,
        "omega-sign" | "trace-sign" | "F^l-prefactor" | "U-normalization" => 1e-10,
        _ => 1e-8,
    }
}

fn char_rel(a: &Z0Char, b: &Z0Char) -> f64 {
    a.rel_dist(b)
}

/// Braiding-map checks on a pair of characters; returns named residuals.
pub fn braiding_checks(x: &Z0Char, y: &Z0Char) -> Result<BTreeMap<&'static str, f64>> {
    let mut out = BTreeMap::new();
    let (p, q) = beta_inverse(x, y)?;
    let (a, b) = beta_forward(&p, &q)?;
    let (f1, f2) = beta_forward(x, y)?;
    let (c, d) = beta_inverse(&f1, &f2)?;
    out.insert("round_trip", char_rel(&a, x).max(char_rel(&b, y)).max(char_rel(&c, x)).max(char_rel(&d, y)));
    out.insert("product", char_rel(&glstar_multiply(&f1, &f2), &glstar_multiply(y, x)));
    let cons = |u: &Z0Char, v: &Z0Char| {
        let (tu, du) = conserved_quantities(u);
        let (tv, dv) = conserved_quantities(v);
        ((tu - tv).norm() / tv.norm().max(1.0)).max((du - dv).norm() / dv.norm().max(1.0))
    };
    out.insert(
        "conserved",
        cons(&p, x).max(cons(&q, y)).max(cons(&f1, x)).max(cons(&f2, y)),
    );
    let e = Z0Char::IDENTITY;
    let mut fixed: f64 = 0.0;
    for (u, v) in [(x, &e), (&e, y)] {
        let (g, h) = beta_forward(u, v)?;
        let (gi, hi) = beta_inverse(u, v)?;
        fixed = fixed.max(char_rel(&g, u)).max(char_rel(&h, v)).max(char_rel(&gi, u)).max(char_rel(&hi, v));
    }
    out.insert("fixed_points", fixed);
    Ok(out)
}

fn adjudication_evidence(t: &mut TrialReport, ctx: &RootContext, p1: &RepParams, p2: &RepParams, seed: u64, idx: usize) {
    let (c1, c2) = (z0_character(p1), z0_character(p2));
    let n = ctx.ell as i32;

    // Ω sign: slot-wise conservation of T under the inverse map
    for sign in OmegaSign::ALL {
        let r = beta_inverse_with(&c1, &c2, sign).map(|(a, b)| {
            let d1 = (conserved_quantities(&a).0 - conserved_quantities(&c1).0).norm();
            let d2 = (conserved_quantities(&b).0 - conserved_quantities(&c2).0).norm();
            d1.max(d2) / conserved_quantities(&c1).0.norm().max(1.0)
        });
        add_evidence(t, "omega-sign", sign.name(), r.unwrap_or(f64::INFINITY));
    }

    // trace of the factorized matrix: T = u^ℓ(x^ℓ ± x^{−ℓ})
    for (name, s) in [("plus", 1.0), ("minus", -1.0)] {
        let want = p1.u.powi(n) * (p1.x.powi(n) + p1.x.powi(-n) * s);
        let got = conserved_quantities(&c1).0;
        add_evidence(t, "trace-sign", name, (got - want).norm() / got.norm().max(1.0));
    }

    // F^ℓ value from the matrix power
    if let Ok(fl) = crate::linalg::mat_pow(&build_rep(p1).f, ctx.ell as i64) {
        let scalar = fl[(0, 0)];
        let scale = scalar.norm().max(1.0);
        add_evidence(t, "F^l-prefactor", "with-y^-l", (c1.phi - scalar).norm() / scale);
        add_evidence(t, "F^l-prefactor", "as-printed", (f_power_without_y(p1) - scalar).norm() / scale);
    }

    for (variant, name) in [(GaugeVariant::PowerZ, "z^n"), (GaugeVariant::Printed, "as-printed")] {
        let r = gauge_residual(p1, variant).unwrap_or(f64::INFINITY).max(gauge_residual(p2, variant).unwrap_or(f64::INFINITY));
        add_evidence(t, "U-normalization", name, r);
    }

    if let Ok((a, b)) = beta_inverse(&c1, &c2) {
        for v in MatrixRouteVariant::ALL {
            let r = matrix_route_beta(&c1, &c2, v).map_or(f64::INFINITY, |(p, q)| char_rel(&p, &a).max(char_rel(&q, &b)));
            add_evidence(t, "matrix-route", v.name(), r);
        }
    }

    // difference equation against the series at an independent small s
    let mut rng = trial_rng(seed, idx, 3);
    let s = C64::from_polar(rng.random_range(0.02..0.3), rng.random_range(0.0..std::f64::consts::TAU));
    let ser = phi_series(ctx, 60);
    let tp = ctx.root(ONE - s.powi(n));
    let base = ser.eval(s * ctx.pow(-2));
    for v in DeqVariant::ALL {
        let r = phi_orbit_with(ctx, s, tp, v).map_or(f64::INFINITY, |orbit| {
            orbit
                .iter()
                .enumerate()
                .map(|(k, val)| (val - ser.eval(s * ctx.pow(2 * k as i64 - 2)) / base).norm())
                .fold(0.0, f64::max)
        });
        add_evidence(t, "orbit-step", v.name(), r);
    }
}

fn generator_evidence(t: &mut TrialReport, checks: &[GeneratorCheck]) {
    for g in checks {
        let variants = checks.iter().filter(|h| h.formula == g.formula).count();
        if variants > 1 {
            add_evidence(t, &g.formula, &g.variant, g.residual);
        } else {
            check(t, &format!("gen.{}", g.formula), g.residual, 1e-8);
        }
    }
}

/// Runs one pair trial (and a triple when scheduled).
pub fn run_trial(ctx: &RootContext, config: &SuiteConfig, idx: usize) -> TrialReport {
    let mut t = TrialReport {
        trial_index: idx,
        attempts: 0,
        params: vec![],
        out_params: vec![],
        checks: BTreeMap::new(),
        conserved: None,
        evidence: BTreeMap::new(),
        oracle: None,
        comparison: None,
        chi: None,
        det_sample: None,
        hybe: None,
        errors: vec![],
    };
    let ((p1, p2), attempts) = match sample_pair(ctx, config, idx) {
        Ok(v) => v,
        Err(e) => {
            t.errors.push(e.to_string());
            return t;
        }
    };
    t.attempts = attempts;
    t.params = vec![p1.clone(), p2.clone()];

    // representations
    let mut rel: f64 = 0.0;
    let (mut centr, mut cas, mut center): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut irreducible = true;
    for p in [&p1, &p2] {
        let r = build_rep(p);
        match relation_residuals(&r) {
            Ok(res) => {
                rel = rel.max(res.kl_commute).max(res.ke).max(res.kf).max(res.le).max(res.lf).max(res.ef_commutator);
                centr = centr.max(res.centrality);
                cas = cas.max(res.casimir);
                center = center.max(res.center_relation);
            }
            Err(e) => t.errors.push(e.to_string()),
        }
        irreducible &= commutant_dim(&r) == 1;
    }
    check(&mut t, "rep.relations", rel, 1e-9);
    check(&mut t, "rep.centrality", centr, 1e-9);
    check(&mut t, "rep.casimir", cas, 1e-9);
    check(&mut t, "rep.center_relation", center, 1e-9);
    check(&mut t, "rep.irreducible", if irreducible { 0.0 } else { 1.0 }, 0.5);

    // braiding map on the characters
    let (c1, c2) = (z0_character(&p1), z0_character(&p2));
    match braiding_checks(&c1, &c2) {
        Ok(b) => {
            check(&mut t, "braid.round_trip", b["round_trip"], 1e-10);
            check(&mut t, "braid.product", b["product"], 1e-10);
            check(&mut t, "braid.conserved", b["conserved"], 1e-10);
            check(&mut t, "braid.fixed_points", b["fixed_points"], 1e-12);
        }
        Err(e) => t.errors.push(e.to_string()),
    }

    adjudication_evidence(&mut t, ctx, &p1, &p2, config.seed, idx);

    let (q1, q2) = match crate::intertwiner::braided_rep_pair(&p1, &p2) {
        Ok(q) => q,
        Err(e) => {
            t.errors.push(e.to_string());
            return t;
        }
    };
    t.out_params = vec![q1.clone(), q2.clone()];
    if let Ok((a, b)) = beta_inverse(&c1, &c2) {
        let d = |u: &Z0Char, v: &Z0Char| {
            let (tu, du) = conserved_quantities(u);
            let (tv, dv) = conserved_quantities(v);
            ((tu - tv).norm(), (du - dv).norm())
        };
        let (t1, d1) = d(&a, &c1);
        let (t2, d2) = d(&b, &c2);
        t.conserved = Some(ConservedDeltas { t_slot1: t1, t_slot2: t2, dt_slot1: d1, dt_slot2: d2 });
    }

    // oracle
    let mut oracle: Option<Intertwiner> = None;
    if config.route.oracle() {
        let neg = (idx % NEGATIVE_CONTROL_EVERY == 0)
            .then(|| oracle_kernel(&p1, &p2, &p1, &p2).map(|ns| ns.dim).unwrap_or(usize::MAX));
        if let Some(d) = neg {
            check(&mut t, "oracle.negative_control", d as f64, 0.5);
        }
        match solve_intertwiner_between(&p1, &p2, &q1, &q2) {
            Ok(r) => {
                check(&mut t, "oracle.residual", r.residual, config.tol);
                check(&mut t, "oracle.central", central_invariance(&r).unwrap_or(f64::INFINITY), 1e-9);
                t.oracle = Some(OracleRecord {
                    kernel_dim: r.kernel_dim,
                    sigma_min: r.sigmas.map(|s| s.0),
                    sigma_second: r.sigmas.map(|s| s.1),
                    negative_control_dim: neg,
                });
                oracle = Some(r);
            }
            Err(e) => {
                t.errors.push(format!("oracle: {e}"));
                t.oracle = Some(OracleRecord { kernel_dim: None, sigma_min: None, sigma_second: None, negative_control_dim: neg });
            }
        }
    }

    // closed form
    let mut closed: Option<Intertwiner> = None;
    match chi_data(&p1, &p2, &q1, &q2) {
        Ok(chi) => {
            check(&mut t, "chi.t_relation", chi.t_residual(ctx.ell), 1e-11);
            check(&mut t, "chi.roots_of_unity", chi.chi_root_residual(ctx.ell), 1e-9);
            check(&mut t, "chi.a_mismatch", chi.a_mismatch, 1e-8);
            if let Ok(ids) = r1_identities(ctx, chi.s, chi.t) {
                for g in ids {
                    if g.formula == "shift-1xA" {
                        add_evidence(&mut t, "1xA-conjugation", &g.variant, g.residual);
                    } else {
                        check(&mut t, &format!("r1.{}", g.formula), g.residual, 1e-9);
                    }
                }
            }
            if let Ok((raw, _)) = closed_form_raw(&p1, &p2, &q1, &q2) {
                t.det_sample = Some(det_sample_from(ctx, chi.s, &raw));
            }
            t.chi = Some(chi);
        }
        Err(e) => t.errors.push(format!("chi: {e}")),
    }
    if config.route.closed() {
        match closed_form_between(&p1, &p2, &q1, &q2) {
            Ok(r) => {
                check(&mut t, "closed.residual", r.residual, config.tol);
                closed = Some(r);
            }
            Err(e) => t.errors.push(format!("closed form: {e}")),
        }
    }
    if let (Some(o), Some(c)) = (&oracle, &closed) {
        if let Ok((scalar, dev)) = compare_up_to_scalar(&c.r, &o.r) {
            let thr = if ctx.ell <= 5 { 1e-8 } else { 1e-6 };
            check(&mut t, "closed.vs_oracle", dev, thr);
            t.comparison = Some(Comparison { scalar, deviation: Residual(dev) });
        }
    }
    let primary = match config.route.primary() {
        Route::Oracle => oracle.as_ref(),
        Route::ClosedForm => closed.as_ref(),
    };
    if let Some(r) = primary {
        match check_generator_action(r) {
            Ok(gs) => generator_evidence(&mut t, &gs),
            Err(e) => t.errors.push(format!("generator action: {e}")),
        }
    }

    if let Some(dir) = &config.dump_dir {
        if let Err(e) = dump_trial(dir, idx, &p1, oracle.as_ref(), closed.as_ref()) {
            t.errors.push(format!("dump: {e}"));
        }
    }

    if config.hybe_every > 0 && idx % config.hybe_every == 0 {
        t.hybe = run_hybe(ctx, config, idx, &mut t.errors);
        if let Some(h) = t.hybe.clone() {
            check(&mut t, "braid.set_ybe", h.set_ybe_residual.0, 1e-9);
            for (name, r) in h.routes {
                check(&mut t, &format!("hybe.{name}.residual"), r.residual.0, 1e-7);
                check(&mut t, &format!("hybe.{name}.abs_c"), (r.abs_c - 1.0).abs(), 1e-8);
            }
        }
    }
    t
}

fn run_hybe(ctx: &RootContext, config: &SuiteConfig, idx: usize, errors: &mut Vec<String>) -> Option<HybeRecord> {
    let ((x, y, z), attempts) = match sample_triple(ctx, config, idx) {
        Ok(v) => v,
        Err(e) => {
            errors.push(format!("triple: {e}"));
            return None;
        }
    };
    let col = match derive_colorings(&x, &y, &z) {
        Ok(c) => c,
        Err(e) => {
            errors.push(format!("triple: {e}"));
            return None;
        }
    };
    let mut routes = BTreeMap::new();
    let mut want = vec![];
    if config.route.oracle() {
        want.push(Route::Oracle);
    }
    if config.route.closed() {
        want.push(Route::ClosedForm);
    }
    for route in want {
        match hybe_residual(&x, &y, &z, route) {
            Ok(h) => {
                routes.insert(
                    route.name().to_string(),
                    RouteRecord {
                        c: h.c,
                        abs_c: h.c.norm(),
                        arg_c_turns: h.arg_c_turns,
                        c_ratio: h.c_ratio,
                        residual: Residual(h.residual),
                    },
                );
            }
            Err(e) => errors.push(format!("hybe {}: {e}", route.name())),
        }
    }
    Some(HybeRecord {
        attempts,
        colorings: [x.clone(), y.clone(), z.clone()],
        set_ybe_residual: Residual(col.set_ybe_residual()),
        labelled_list_residual: Residual(col.labelled_list_residual().unwrap_or(f64::INFINITY)),
        strand_data_preserved: col.strand_data_preserved(),
        routes,
        s0_residual: s0_diagnostic(&x, &y, &z).ok().map(Residual),
    })
}

fn dump_trial(dir: &std::path::Path, idx: usize, p: &RepParams, oracle: Option<&Intertwiner>, closed: Option<&Intertwiner>) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let r = build_rep(p);
    let pstr = |z: C64| format!("{},{}", z.re, z.im);
    let head = |kind: &str| {
        format!("ell={} kind={kind} u={} v={} x={} y={}", p.ell(), pstr(p.u), pstr(p.v), pstr(p.x), pstr(p.y))
    };
    for (kind, m) in [("K", &r.k), ("L", &r.l), ("E", &r.e), ("F", &r.f)] {
        std::fs::write(dir.join(format!("trial{idx:04}_{kind}.tsv")), to_tsv(&head(kind), m))?;
    }
    if let Ok((u, _)) = gauge_u(p) {
        std::fs::write(dir.join(format!("trial{idx:04}_U.tsv")), to_tsv(&head("U"), &u))?;
    }
    for (name, r) in [("oracle", oracle), ("closed", closed)] {
        if let Some(r) = r {
            let h = format!(
                "ell={} kind=R route={name} residual={:e} kernel_dim={}",
                p.ell(),
                r.residual,
                r.kernel_dim.map_or("na".to_string(), |d| d.to_string())
            );
            std::fs::write(dir.join(format!("trial{idx:04}_R_{name}.tsv")), to_tsv(&h, &r.r))?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct VariantEvidence {
    pub max_residual: Residual,
    pub trials: usize,
    pub passing_trials: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Adjudication {
    pub threshold: f64,
    pub variants: BTreeMap<String, VariantEvidence>,
    /// The single variant passing on every trial, if exactly one does.
    pub chosen: Option<String>,
    pub exactly_one: bool,
}

pub fn adjudicate(trials: &[TrialReport]) -> BTreeMap<String, Adjudication> {
    let mut acc: BTreeMap<String, BTreeMap<String, Vec<f64>>> = BTreeMap::new();
    for t in trials {
        for (f, vs) in &t.evidence {
            for (v, r) in vs {
                acc.entry(f.clone()).or_default().entry(v.clone()).or_default().push(r.0);
            }
        }
    }
    acc.into_iter()
        .map(|(f, vs)| {
            let thr = adjudication_threshold(&f);
            let variants: BTreeMap<String, VariantEvidence> = vs
                .into_iter()
                .map(|(v, rs)| {
                    let passing = rs.iter().filter(|&&r| r < thr).count();
                    let max = rs.iter().cloned().fold(0.0, |a: f64, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) });
                    let ev = VariantEvidence {
                        max_residual: Residual(max),
                        trials: rs.len(),
                        passing_trials: passing,
                        pass: passing == rs.len() && !rs.is_empty(),
                    };
                    (v, ev)
                })
                .collect();
            let passing: Vec<&String> = variants.iter().filter(|(_, e)| e.pass).map(|(v, _)| v).collect();
            let exactly_one = passing.len() == 1;
            let chosen = exactly_one.then(|| passing[0].clone());
            (f, Adjudication { threshold: thr, variants, chosen, exactly_one })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub max_residual: Residual,
    pub threshold: f64,
    pub evaluated: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub trials: usize,
    pub trials_with_errors: usize,
    pub rejected_draws: usize,
    pub oracle_solved: usize,
    pub kernel_dim_one: usize,
    pub kernel_dim_one_fraction: f64,
    pub principal_branch_mismatches: usize,
    pub checks: BTreeMap<String, CheckSummary>,
    pub hybe_triples: usize,
    pub hybe_arg_c_turns: BTreeMap<String, Vec<f64>>,
    pub det_probe: DetProbe,
    pub criteria: BTreeMap<String, bool>,
    pub all_pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub summary: Summary,
    pub adjudications: BTreeMap<String, Adjudication>,
    pub trials: Vec<TrialReport>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.summary.all_pass {
            0
        } else {
            1
        }
    }
}

pub fn summarize(config: &SuiteConfig, trials: &[TrialReport], adjudications: &BTreeMap<String, Adjudication>) -> Summary {
    let mut checks: BTreeMap<String, CheckSummary> = BTreeMap::new();
    for t in trials {
        for (name, c) in &t.checks {
            let e = checks.entry(name.clone()).or_insert(CheckSummary {
                max_residual: Residual(0.0),
                threshold: c.threshold,
                evaluated: 0,
                failures: 0,
            });
            e.evaluated += 1;
            if !c.pass {
                e.failures += 1;
            }
            let v = c.residual.0;
            if v.is_nan() || v > e.max_residual.0 {
                e.max_residual = Residual(v);
            }
        }
    }
    let oracle_attempted = trials.iter().filter(|t| t.oracle.is_some()).count();
    let oracle_solved = trials.iter().filter(|t| t.oracle.as_ref().is_some_and(|o| o.kernel_dim.is_some())).count();
    let kernel_one = trials.iter().filter(|t| t.oracle.as_ref().is_some_and(|o| o.kernel_dim == Some(1))).count();
    let frac = if oracle_attempted > 0 { kernel_one as f64 / oracle_attempted as f64 } else { 0.0 };
    let mut args: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for t in trials {
        if let Some(h) = &t.hybe {
            for (route, r) in &h.routes {
                args.entry(route.clone()).or_default().push(r.arg_c_turns);
            }
        }
    }
    let samples: Vec<DetSample> = trials.iter().filter_map(|t| t.det_sample).collect();
    let det_probe = det_exponent_probe(config.ell, &samples);

    let mut criteria: BTreeMap<String, bool> = BTreeMap::new();
    for (name, c) in &checks {
        let crit = criterion_of(name).to_string();
        let ok = if name == "oracle.kernel_dim" { true } else { c.failures == 0 };
        *criteria.entry(crit).or_insert(true) &= ok;
    }
    if config.route.oracle() {
        *criteria.entry("3-oracle".into()).or_insert(true) &= frac >= 0.99;
    }
    let adj_ok = adjudications.values().all(|a| a.exactly_one)
        && !det_probe.inconclusive
        && det_probe.core.as_ref().is_some_and(|f| f.fit_residual < 1e-6);
    criteria.insert("7-adjudication".into(), adj_ok);
    let errors = trials.iter().filter(|t| !t.errors.is_empty()).count();
    let all_pass = criteria.values().all(|&b| b) && trials.iter().all(|t| !t.params.is_empty());
    Summary {
        trials: trials.len(),
        trials_with_errors: errors,
        rejected_draws: trials.iter().map(|t| t.attempts.saturating_sub(1)).sum(),
        oracle_solved,
        kernel_dim_one: kernel_one,
        kernel_dim_one_fraction: frac,
        principal_branch_mismatches: trials.iter().filter(|t| t.chi.as_ref().is_some_and(|c| !c.principal_branch())).count(),
        checks,
        hybe_triples: trials.iter().filter(|t| t.hybe.is_some()).count(),
        hybe_arg_c_turns: args,
        det_probe,
        criteria,
        all_pass,
    }
}

/// Runs every trial on a pool of `worker_count(config.threads)` workers and
/// assembles the report in trial order.
pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    let ctx = config.validate()?;
    let threads = worker_count(config.threads);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let mut trials: Vec<TrialReport> =
        pool.install(|| (0..config.trials).into_par_iter().map(|i| run_trial(&ctx, config, i)).collect());
    trials.sort_by_key(|t| t.trial_index);
    let adjudications = adjudicate(&trials);
    let summary = summarize(config, &trials, &adjudications);
    let report = Report { config: config.clone(), summary, adjudications, trials };
    if let Some(path) = &config.report_path {
        std::fs::write(path, emit_report(&report)?).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    }
    Ok(report)
}

/// Pretty JSON with stable field order.
pub fn emit_report(report: &Report) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| Error::InvalidInput(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic() {
        let ctx = RootContext::new(3).unwrap();
        let cfg = SuiteConfig::new(3);
        let a = sample_pair(&ctx, &cfg, 7).unwrap();
        let b = sample_pair(&ctx, &cfg, 7).unwrap();
        assert_eq!(a.0, b.0);
        let c = sample_pair(&ctx, &cfg, 8).unwrap();
        assert_ne!(a.0 .0, c.0 .0);
        assert_eq!(sample_params(&ctx, &cfg, 3).unwrap(), sample_params(&ctx, &cfg, 3).unwrap());
    }

    #[test]
    fn residual_display() {
        assert_eq!(Residual(1.23456e-12).display(), "1.23e-12");
        let j = serde_json::to_string(&Residual(0.5)).unwrap();
        assert_eq!(j, r#"{"value":0.5,"display":"5.00e-1"}"#);
    }

    #[test]
    fn config_validation() {
        assert_eq!(SuiteConfig::new(4).validate().unwrap_err(), Error::InvalidDegree(4));
        let mut c = SuiteConfig::new(3);
        c.radius = 0.0;
        assert!(c.validate().is_err());
        c.radius = 0.2;
        c.trials = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn empty_trial_list_summarizes_to_zero() {
        let cfg = SuiteConfig::new(3);
        let adj = adjudicate(&[]);
        let s = summarize(&cfg, &[], &adj);
        assert_eq!(s.trials, 0);
        assert_eq!(s.hybe_triples, 0);
        let r = Report { config: cfg, summary: s, adjudications: adj, trials: vec![] };
        let text = emit_report(&r).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["summary"]["trials"], 0);
    }

    #[test]
    fn small_suite_passes() {
        let mut cfg = SuiteConfig::new(3);
        cfg.trials = 6;
        cfg.threads = Some(1);
        let r = run_suite(&cfg).unwrap();
        assert!(r.summary.all_pass, "{:#?}", r.summary.criteria);
        assert_eq!(r.trials.len(), 6);
        assert!(r.trials[0].hybe.is_some() && r.trials[1].hybe.is_none());
    }
}
