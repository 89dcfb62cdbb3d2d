//! Solves the intertwining system for one pair, builds the closed form, and
//! compares them up to a scalar.
use holobraid::intertwiner::{
    braided_rep_pair, central_invariance, check_generator_action, chi_data, closed_form_between,
    compare_up_to_scalar, solve_intertwiner_between,
};
use holobraid::linalg::c;
use holobraid::rep::RepParams;
use holobraid::RootContext;

fn main() -> holobraid::Result<()> {
    let ell = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let ctx = RootContext::new(ell)?;
    let p1 = RepParams::new(&ctx, c(1.1, 0.2), c(0.9, -0.1), c(1.05, 0.3), c(0.8, 0.15))?;
    let p2 = RepParams::new(&ctx, c(0.95, -0.2), c(1.2, 0.1), c(0.85, -0.25), c(1.1, 0.3))?;
    let (q1, q2) = braided_rep_pair(&p1, &p2)?;

    let oracle = solve_intertwiner_between(&p1, &p2, &q1, &q2)?;
    let (smin, s2) = oracle.sigmas.unwrap();
    println!("oracle: kernel dim {:?}, sigma_min {smin:.2e}, next {s2:.2e}", oracle.kernel_dim);
    println!("        residual {:.2e}, central {:.2e}", oracle.residual, central_invariance(&oracle)?);

    let chi = chi_data(&p1, &p2, &q1, &q2)?;
    println!("chi1 = {:.6}, chi2 = {:.6}, a = {}, s = {:.6}, t = {:.6}", chi.chi1, chi.chi2, chi.a_exp, chi.s, chi.t);

    let closed = closed_form_between(&p1, &p2, &q1, &q2)?;
    let (scalar, dev) = compare_up_to_scalar(&closed.r, &oracle.r)?;
    println!("closed form: residual {:.2e}, vs oracle {dev:.2e} (scalar {scalar:.6})", closed.residual);

    for g in check_generator_action(&oracle)? {
        println!("  {:<14} {:<24} {:.2e}", g.formula, g.variant, g.residual);
    }
    Ok(())
}
