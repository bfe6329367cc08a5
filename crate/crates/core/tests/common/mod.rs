#![allow(dead_code)]

use modewit::fock::{CutoffSpec, ModeMonomial, PureState};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    (0..dim).map(|_| gaussian(rng)).collect()
}

/// Random pure state supported on occupations `<= d - 1 - headroom` in
/// every mode, so raising operators up to that order never meet the cutoff.
pub fn headroom_state(cutoff: &CutoffSpec, headroom: usize, rng: &mut ChaCha8Rng) -> PureState {
    let amps = cutoff
        .basis()
        .map(|occ| {
            if occ.iter().zip(cutoff.dims()).all(|(&n, &d)| n + headroom < d) {
                gaussian(rng)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    PureState::new(cutoff.clone(), amps).unwrap()
}

/// Monomial with per-mode `(raise, lower)` drawn so that the total degree is
/// at most `max_total`.
pub fn random_monomial(n_modes: usize, max_total: u32, rng: &mut ChaCha8Rng) -> ModeMonomial {
    let mut budget = rng.random_range(0..=max_total);
    let mut powers = vec![(0u32, 0u32); n_modes];
    while budget > 0 {
        let m = rng.random_range(0..n_modes);
        if rng.random_bool(0.5) {
            powers[m].0 += 1;
        } else {
            powers[m].1 += 1;
        }
        budget -= 1;
    }
    ModeMonomial::new(powers)
}

pub fn random_cutoff(n_modes: usize, max_d: usize, rng: &mut ChaCha8Rng) -> CutoffSpec {
    CutoffSpec::new((0..n_modes).map(|_| rng.random_range(1..=max_d)).collect()).unwrap()
}
