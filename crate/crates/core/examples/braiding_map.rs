//! The birational braiding map on pairs of characters and its matrix route.
use holobraid::glstar::{
    beta_forward, beta_inverse, conserved_quantities, glstar_multiply, matrix_route_beta, MatrixRouteVariant,
};
use holobraid::intertwiner::braided_rep_pair;
use holobraid::linalg::c;
use holobraid::rep::{z0_character, RepParams};
use holobraid::RootContext;

fn main() -> holobraid::Result<()> {
    let ctx = RootContext::new(3)?;
    let p1 = RepParams::new(&ctx, c(1.1, 0.2), c(0.9, -0.1), c(1.05, 0.3), c(0.8, 0.15))?;
    let p2 = RepParams::new(&ctx, c(0.95, -0.2), c(1.2, 0.1), c(0.85, -0.25), c(1.1, 0.3))?;
    let (x, y) = (z0_character(&p1), z0_character(&p2));

    let (a, b) = beta_inverse(&x, &y)?;
    let (x2, y2) = beta_forward(&a, &b)?;
    println!("round trip: {:.2e} {:.2e}", x2.rel_dist(&x), y2.rel_dist(&y));

    let (f, g) = beta_forward(&x, &y)?;
    println!("product identity: {:.2e}", glstar_multiply(&f, &g).rel_dist(&glstar_multiply(&y, &x)));
    for (name, before, after) in [("slot 1", &x, &a), ("slot 2", &y, &b)] {
        let (t0, d0) = conserved_quantities(before);
        let (t1, d1) = conserved_quantities(after);
        println!("{name}: |dT| = {:.2e}, |dDt| = {:.2e}", (t0 - t1).norm(), (d0 - d1).norm());
    }

    for v in MatrixRouteVariant::ALL {
        let (m1, m2) = matrix_route_beta(&x, &y, v)?;
        println!("matrix route {:<12} vs map: {:.2e}", v.name(), m1.rel_dist(&a).max(m2.rel_dist(&b)));
    }

    // lift back to representation parameters, keeping (u, x) on each strand
    let (q1, q2) = braided_rep_pair(&p1, &p2)?;
    println!("lifted: v1 = {:.6}, y1 = {:.6}, v2 = {:.6}, y2 = {:.6}", q1.v, q1.y, q2.v, q2.y);
    Ok(())
}
