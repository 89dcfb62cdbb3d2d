//! q-series identities and the Φ function on its orbit.
use holobraid::linalg::c;
use holobraid::scalars::{
    check_f_functional, check_f_sum_vs_product, orbit_closure, phi_orbit, phi_series, q_factorial_b,
    q_shift_coefficient_check, RootContext,
};

fn main() -> holobraid::Result<()> {
    let q = c(0.5, 0.3);
    println!("f(zq) vs (1-z) f(z): {:.2e}", check_f_functional(q, 30)?);
    println!("sum vs product:      {:.2e}", check_f_sum_vs_product(q, 30)?);
    for n in [1, 4, 8, 12] {
        println!("b_{n} = {:.6}, q-shift check {:.2e}", q_factorial_b(n, q)?, q_shift_coefficient_check(n, q)?);
    }

    let ctx = RootContext::new(5)?;
    let ser = phi_series(&ctx, 40);
    println!("Phi series, first coefficients:");
    for n in 0..5 {
        println!("  {n}: {:.6}", ser.coeff(n));
    }
    let s = c(0.2, 0.1);
    let orbit = phi_orbit(&ctx, s)?;
    let base = ser.eval(s * ctx.pow(-2));
    for (k, v) in orbit.iter().enumerate() {
        let direct = ser.eval(s * ctx.pow(2 * k as i64 - 2)) / base;
        println!("  phi_{k} = {v:.8}  series {direct:.8}");
    }
    let t = ctx.root(c(1.0, 0.0) - s.powu(5));
    println!("orbit closure - 1 = {:.2e}", (orbit_closure(&ctx, s, t) - 1.0).norm());
    Ok(())
}
