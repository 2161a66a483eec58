use rand::Rng;
use rand_distr::{Distribution, Poisson};

/// Homogeneous PPP on the square `[−half, half]²`.
pub fn sample_ppp<R: Rng + ?Sized>(density: f64, half_width_m: f64, rng: &mut R) -> Vec<[f64; 2]> {
    let mean = density * 4.0 * half_width_m * half_width_m;
    if !(mean > 0.0) {
        return Vec::new();
    }
    let count = Poisson::new(mean).expect("positive finite mean").sample(rng) as usize;
    (0..count)
        .map(|_| {
            [
                rng.random_range(-half_width_m..half_width_m),
                rng.random_range(-half_width_m..half_width_m),
            ]
        })
        .collect()
}
