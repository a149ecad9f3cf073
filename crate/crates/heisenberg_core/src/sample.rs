//! Seeded sample points for residual checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::point::HPoint;
use crate::quad::polar_point;

/// `n` points with gauge log-uniform in `[rho_min, rho_max]` and angles
/// uniform in the polar chart; `|z|` and `t` are kept away from zero by
/// `margin` radians in the angle `a` so that fields singular on the axis or
/// on `{t = 0}` can be sampled too.
pub fn sample_points(seed: u64, n: usize, rho_min: f64, rho_max: f64, margin: f64) -> Vec<HPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = std::f64::consts::FRAC_PI_2;
    (0..n)
        .map(|_| {
            let rho = (rng.gen_range(rho_min.ln()..=rho_max.ln())).exp();
            let mut a = rng.gen_range(-half + margin..half - margin);
            if a.abs() < margin {
                a = if a < 0.0 { -margin } else { margin };
            }
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            polar_point(rho, a, phi)
        })
        .collect()
}
