//! Numerical oracles on finite windows: the lambda-harmonic exhaustion, the
//! killed heat flow and random walk sampling. Frontier vertices carry the
//! boundary data.

mod elliptic;
mod heat;
mod linalg;
mod mc;

pub use elliptic::{elliptic_limit_scan, elliptic_window_solve, EllipticSolution, ScanConfig, ScanResult};
pub use heat::{dirichlet_heat_mass, heat_deficit_scan, HeatMassCurve};
pub use mc::{mc_explosion_estimate, McEstimate};
