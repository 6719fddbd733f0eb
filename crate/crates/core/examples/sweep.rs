//! Parallel sweep with a deterministic merged CSV.

use limitgen::scenario::{preset_sweep, sweep, sweep_csv};

fn main() {
    let mut cfg = preset_sweep("alpha-weak").unwrap();
    cfg.horizons = vec![2_000, 10_000];
    cfg.seeds = vec![1, 2];
    let rows = sweep(&cfg, 4).unwrap();
    print!("{}", sweep_csv(&rows));
}
