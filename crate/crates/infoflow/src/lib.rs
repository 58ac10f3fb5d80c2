//! Information-theoretic numerics for deterministic dynamical systems under
//! discretization: KL divergence, mutual information, conditional mutual
//! information via Markovization, transfer and causation entropy, invariant
//! densities of interval maps, additive-noise blurring, and the relative
//! ambiguity that predicts discretized MI at finite mesh size.
//!
//! Everything is measured in nats. All estimators are plain plug-in
//! histograms; the library deliberately applies no smoothing or bias
//! correction.

pub mod ambiguity;
pub mod config;
pub mod discretize;
pub mod dynamics;
pub mod error;
pub mod flow;
pub mod noise;
pub mod prob;
pub mod report;
pub mod rng;
pub mod runner;

pub use discretize::{exact_bernoulli_joint, joint_from_samples, Mesh};
pub use dynamics::{estimate_acip, generate_trajectory, DensityEstimate, MapSpec, SourceDist};
pub use error::{Error, Result};
pub use prob::{
    conditional_mutual_information, disintegrate, disintegrated_cmi, kl_divergence, markovize,
    mutual_information, shannon_entropy, DiscreteDist, InfoValue, JointDist2, JointDist3,
};
