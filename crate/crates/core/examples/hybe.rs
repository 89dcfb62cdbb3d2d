//! Holonomy Yang-Baxter check on a sampled triple, on both routes.
use holobraid::hybe::{derive_colorings, hybe_residual, s0_diagnostic, Route};
use holobraid::report::{sample_triple, SuiteConfig};

fn main() -> holobraid::Result<()> {
    let cfg = SuiteConfig::new(3);
    let ctx = cfg.validate()?;
    for trial in 0..3 {
        let ((x, y, z), _) = sample_triple(&ctx, &cfg, trial)?;
        let col = derive_colorings(&x, &y, &z)?;
        println!("triple {trial}: set-theoretic YBE {:.2e}", col.set_ybe_residual());
        for route in [Route::Oracle, Route::ClosedForm] {
            let h = hybe_residual(&x, &y, &z, route)?;
            println!(
                "  {:<12} residual {:.2e}  c = {:.6}  |c| - 1 = {:.1e}  arg/2pi = {:.4}",
                route.name(),
                h.residual,
                h.c,
                h.c.norm() - 1.0,
                h.arg_c_turns
            );
        }
        // the s = 0 truncation is not expected to satisfy the equation
        println!("  s = 0 truncation: {:.2e}", s0_diagnostic(&x, &y, &z)?);
    }
    Ok(())
}
