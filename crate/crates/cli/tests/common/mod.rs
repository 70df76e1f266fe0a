//! Seeded ensembles shared by the acceptance criteria.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use twomode::fock::{FockDensityMatrix, PureState};
use twomode::metrology::DirectionTriplet;
use twomode::Complex64;

pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Pure state with independent standard complex Gaussian amplitudes,
/// normalized.
pub fn random_pure(n_total: usize, rng: &mut ChaCha8Rng) -> PureState {
    loop {
        let amps: Vec<Complex64> = (0..=n_total)
            .map(|_| Complex64::new(standard_normal(rng), standard_normal(rng)))
            .collect();
        if let Ok(state) = PureState::from_amplitudes(n_total, amps) {
            return state;
        }
    }
}

/// Convex mixture of coherent states with Dirichlet-uniform weights,
/// rotated about a random axis.
pub fn random_mixture(n_total: usize, rng: &mut ChaCha8Rng) -> FockDensityMatrix {
    let count = rng.gen_range(2..=4);
    let components: Vec<(f64, PureState)> = (0..count)
        .map(|_| {
            let weight = -rng.gen_range(f64::MIN_POSITIVE..1.0f64).ln();
            let xi = rng.gen_range(0.0..=1.0);
            let phi = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            (weight, PureState::coherent(xi, phi, n_total).unwrap())
        })
        .collect();
    let mixed = FockDensityMatrix::mixture(&components).unwrap();
    let axis = random_unit_vector(rng);
    let angle = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    mixed.rotate(axis, angle).unwrap()
}

/// Fock-diagonal mixture: separable by construction.
pub fn random_diagonal(n_total: usize, rng: &mut ChaCha8Rng) -> FockDensityMatrix {
    let components: Vec<(f64, PureState)> = (0..=n_total)
        .map(|k| {
            let weight = -rng.gen_range(f64::MIN_POSITIVE..1.0f64).ln();
            (weight, PureState::fock(k, n_total).unwrap())
        })
        .collect();
    FockDensityMatrix::mixture(&components).unwrap()
}

pub fn random_unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [
            standard_normal(rng),
            standard_normal(rng),
            standard_normal(rng),
        ];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm > 0.1 {
            return [v[0] / norm, v[1] / norm, v[2] / norm];
        }
    }
}

pub fn random_triplet(rng: &mut ChaCha8Rng) -> DirectionTriplet {
    loop {
        let n3 = random_unit_vector(rng);
        let helper = random_unit_vector(rng);
        let d = n3[0] * helper[0] + n3[1] * helper[1] + n3[2] * helper[2];
        let mut n2 = [
            helper[0] - d * n3[0],
            helper[1] - d * n3[1],
            helper[2] - d * n3[2],
        ];
        let norm = (n2[0] * n2[0] + n2[1] * n2[1] + n2[2] * n2[2]).sqrt();
        if norm < 0.1 {
            continue;
        }
        for c in &mut n2 {
            *c /= norm;
        }
        if let Ok(t) = DirectionTriplet::from_pair(n2, n3) {
            return t;
        }
    }
}
