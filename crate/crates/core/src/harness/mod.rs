//! Reproduction harness: seeded sampling, ratio minimization, the scatter
//! experiment, Monte-Carlo simulation of LHV models, and the CLI.

pub mod cli;
pub mod minimize;
pub mod sampling;
pub mod scatter;
pub mod simulate;
pub mod statespec;

pub use minimize::{fibonacci_sphere, min_ratio, RatioMinimum};
pub use sampling::{sample_entangled_gw, stream_rng, GwSample};
pub use scatter::{scatter_to_csv, ScatterRow, ScatterSummary};
pub use simulate::simulate_lhv;
pub use statespec::StateSpec;

/// Default seed for randomized commands.
pub const DEFAULT_SEED: u64 = 20100611;
