//! Shared inputs for the kernel benchmarks under `benches/`.

use hydrolens::QuantumNumbers;

/// Ratios `a₀/b` on either side of and inside the ground-state blind band.
pub const RATIOS: [f64; 3] = [0.5, 1.5, 3.0];

/// One state per shell with the largest `l`, up to `n_max`.
pub fn shell_tops(n_max: u32) -> Vec<QuantumNumbers> {
    (1..=n_max)
        .map(|n| QuantumNumbers::new(n, n - 1, 0).expect("l = n - 1 is valid"))
        .collect()
}
