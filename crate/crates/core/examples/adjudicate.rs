//! Runs a short suite and prints which reading of each ambiguous formula
//! survives, plus the determinant exponent fit.
use holobraid::report::{run_suite, SuiteConfig};

fn main() -> holobraid::Result<()> {
    let ell = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let mut cfg = SuiteConfig::new(ell);
    cfg.trials = 10;
    cfg.hybe_every = 0;
    let report = run_suite(&cfg)?;
    for (formula, adj) in &report.adjudications {
        println!("{formula}:");
        for (variant, ev) in &adj.variants {
            let mark = if ev.pass { "pass" } else { "fail" };
            println!("  {variant:<24} {mark}  max {}", ev.max_residual.display());
        }
    }
    let probe = &report.summary.det_probe;
    if let (Some(core), Some(full)) = (&probe.core, &probe.full) {
        println!("log|det core| ~ {:.6} log|1 - s^l|  (fit residual {:.1e})", core.alpha, core.fit_residual);
        println!("log|det R|    ~ {:.6} log|1 - s^l|  (fit residual {:.1e})", full.alpha, full.fit_residual);
    }
    for (label, value, hit) in &probe.candidates {
        println!("  candidate {label:<10} = {value:>6}  {}", if *hit { "matches" } else { "-" });
    }
    Ok(())
}
