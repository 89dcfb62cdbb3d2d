use holobraid::glstar::{beta_forward, beta_inverse, conserved_quantities, glstar_multiply, Z0Char};
use holobraid::rep::{build_rep, relation_residuals, z0_character, RepParams};
use holobraid::scalars::RootContext;
use holobraid::C64;
use proptest::prelude::*;

fn unit(re: f64, im: f64) -> C64 {
    C64::new(re, im).exp()
}

fn params(ell: usize, d: [f64; 8]) -> RepParams {
    let ctx = RootContext::new(ell).unwrap();
    RepParams::new(&ctx, unit(d[0], d[1]), unit(d[2], d[3]), unit(d[4], d[5]), unit(d[6], d[7])).unwrap()
}

fn box8() -> impl Strategy<Value = [f64; 8]> {
    prop::array::uniform8(-0.4f64..0.4)
}

fn close(a: &Z0Char, b: &Z0Char, tol: f64) -> bool {
    a.rel_dist(b) < tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relations_hold(d in box8(), ell in prop::sample::select(vec![3usize, 5, 7])) {
        let r = build_rep(&params(ell, d));
        prop_assert!(relation_residuals(&r).unwrap().max() < 1e-9);
    }

    #[test]
    fn braiding_round_trip_and_product(a in box8(), b in box8()) {
        let x = z0_character(&params(5, a));
        let y = z0_character(&params(5, b));
        let (p, q) = beta_inverse(&x, &y).unwrap();
        let (p2, q2) = beta_forward(&p, &q).unwrap();
        prop_assert!(close(&p2, &x, 1e-10) && close(&q2, &y, 1e-10));
        let (f, g) = beta_forward(&x, &y).unwrap();
        prop_assert!(close(&glstar_multiply(&f, &g), &glstar_multiply(&y, &x), 1e-10));
        let (t0, d0) = conserved_quantities(&x);
        let (t1, d1) = conserved_quantities(&p);
        prop_assert!((t0 - t1).norm() < 1e-10 * t0.norm().max(1.0));
        prop_assert!((d0 - d1).norm() < 1e-10 * d0.norm().max(1.0));
    }

    #[test]
    fn identity_is_fixed(a in box8()) {
        let x = z0_character(&params(3, a));
        let e = Z0Char::IDENTITY;
        let (p, q) = beta_forward(&x, &e).unwrap();
        prop_assert!(close(&p, &x, 1e-12) && close(&q, &e, 1e-12));
    }
}
