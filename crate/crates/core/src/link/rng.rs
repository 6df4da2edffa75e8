use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Experiment tag mixed into the per-trial stream key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Siso = 1,
    Mimo = 2,
    Doa = 3,
    Chain = 4,
}

/// Independent, reproducible generator for `(experiment, point, trial)`.
pub fn trial_rng(master_seed: u64, experiment: Experiment, point: u32, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed ^ ((experiment as u64) << 56));
    rng.set_stream(((point as u64) << 32) | trial as u64);
    rng
}
