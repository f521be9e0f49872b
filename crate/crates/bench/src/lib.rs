//! Fixtures shared by the benchmarks.

use expobasis::theorems::{construct_thm_main, construct_thm_main_2, delta_range_thm_main, delta_range_thm_main_2};
use expobasis::{FrameCertificate, NodeMatrix, Rational};

/// Removed-interval certificate on `[0, N)` at the middle of its δ window.
pub fn removed_interval(n: i64) -> FrameCertificate {
    let (lower, upper) = delta_range_thm_main_2(n).expect("N > 2");
    let delta = Rational::from_f64(0.5 * (lower.to_f64() + upper)).expect("finite");
    construct_thm_main_2(n, 1, &delta).expect("admissible")
}

/// Perturbed two-interval certificate `[0,1) ∪ [3 + 1/3, 4 + 1/3)`.
pub fn perturbed_pair() -> FrameCertificate {
    let eps = [Rational::zero(), Rational::new(1, 3)];
    let range = delta_range_thm_main(2, &[0, 3], &eps).expect("nonempty window");
    let delta = Rational::from_f64(0.5 * (range.lower + range.upper)).expect("finite");
    construct_thm_main(2, &[0, 3], &eps, &delta).expect("admissible")
}

pub fn removed_interval_matrix(n: i64) -> NodeMatrix {
    removed_interval(n).matrix().expect("grid matrix")
}
