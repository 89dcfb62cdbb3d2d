//! Builds a cyclic representation, prints its Frobenius-center character and
//! the relation residuals.
use holobraid::linalg::c;
use holobraid::rep::{build_rep, commutant_dim, relation_residuals, z0_character, RepParams};
use holobraid::RootContext;

fn main() -> holobraid::Result<()> {
    let ctx = RootContext::new(5)?;
    let p = RepParams::new(&ctx, c(1.1, 0.2), c(0.9, -0.1), c(1.05, 0.3), c(0.8, 0.15))?;
    let r = build_rep(&p);
    let ch = z0_character(&p);
    println!("ell = {}, eps = {:.6}", ctx.ell, ctx.eps);
    for (name, v) in ["kappa", "lambda", "eta", "phi"].iter().zip(ch.as_array()) {
        println!("{name:>7} = {v:.6}");
    }
    println!("casimir scalar = {:.6}", p.casimir());

    let res = relation_residuals(&r)?;
    println!("relations: {res:#?}");
    println!("commutant dimension = {}", commutant_dim(&r));
    Ok(())
}
