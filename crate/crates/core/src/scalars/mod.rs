//! Root-of-unity arithmetic, truncated power series and the Φ-function.

mod phi;
mod root;
mod series;

pub use phi::{orbit_closure, phi_orbit, phi_orbit_with, phi_series, phi_value, DeqVariant};
pub use root::{primitive_root, RootContext};
pub use series::{
    check_f_functional, check_f_sum_vs_product, gaussian_binomial, pairing_monomial,
    q_factorial_b, q_integer, q_shift_coefficient_check, series_f, series_f_product, Series,
    DEFAULT_ORDER,
};
