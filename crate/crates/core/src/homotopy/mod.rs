//! Numerical polynomial-system solving by homotopy continuation.

pub mod mpoly;
pub mod solve;
pub mod tracker;

pub use mpoly::{MPoly, PolySystem};
pub use solve::{distance, match_points, solve, total_degree_start, Solution, SolutionSet};
pub use tracker::{track, track_path, Homotopy, LinearHomotopy, PathResult, PathStatus, TrackerConfig};
