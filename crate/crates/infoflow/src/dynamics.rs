//! Deterministic interval maps on [0, 1), trajectory generation, and
//! invariant-density estimation by long-trajectory histograms.

use crate::discretize::Mesh;
use crate::error::{Error, Result};
use crate::prob::{kahan_sum, DiscreteDist};
use crate::rng::{derive_seed, SplitMix64};

/// Reduce to [0, 1), mapping the representation boundary 1.0 back to 0.0 so
/// the half-open-interval invariant is machine-checkable.
#[inline]
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// A piecewise-C1 self-map of [0, 1) with an evaluable derivative.
#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    /// x -> d x mod 1, slope d everywhere.
    Bernoulli(u32),
    /// x -> (1 + sin 2 pi n x) / 2.
    SineBox(u32),
    /// x -> x + alpha mod 1.
    Rotation(f64),
    /// Affine pieces v_i + s_i (x - b_i) on [b_i, b_{i+1}), reduced mod 1.
    PiecewiseLinear {
        /// Piece boundaries: 0 = b_0 < b_1 < ... < b_m = 1.
        breakpoints: Vec<f64>,
        slopes: Vec<f64>,
        /// Value at the left end of each piece.
        offsets: Vec<f64>,
    },
}

impl MapSpec {
    fn check_domain(x: f64) -> Result<()> {
        if (0.0..1.0).contains(&x) {
            Ok(())
        } else {
            Err(Error::Domain { value: x })
        }
    }

    /// Map image of `x`, reduced to [0, 1).
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        Self::check_domain(x)?;
        Ok(self.step(x))
    }

    /// Unchecked evaluation used inside iteration loops.
    #[inline]
    pub(crate) fn step(&self, x: f64) -> f64 {
        match self {
            MapSpec::Bernoulli(d) => frac(*d as f64 * x),
            MapSpec::SineBox(n) => {
                let s = 0.5 * (1.0 + (std::f64::consts::TAU * *n as f64 * x).sin());
                if s >= 1.0 {
                    0.0
                } else {
                    s
                }
            }
            MapSpec::Rotation(alpha) => frac(x + alpha),
            MapSpec::PiecewiseLinear {
                breakpoints,
                slopes,
                offsets,
            } => {
                let i = piece_index(breakpoints, x);
                frac(offsets[i] + slopes[i] * (x - breakpoints[i]))
            }
        }
    }

    /// Derivative T'(x). Errors on interior breakpoints of piecewise maps.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        Self::check_domain(x)?;
        match self {
            MapSpec::Bernoulli(d) => Ok(*d as f64),
            MapSpec::SineBox(n) => {
                let nf = *n as f64;
                Ok(std::f64::consts::PI * nf * (std::f64::consts::TAU * nf * x).cos())
            }
            MapSpec::Rotation(_) => Ok(1.0),
            MapSpec::PiecewiseLinear {
                breakpoints,
                slopes,
                ..
            } => {
                if breakpoints[1..breakpoints.len() - 1].contains(&x) {
                    return Err(Error::UndefinedDerivative { x });
                }
                Ok(slopes[piece_index(breakpoints, x)])
            }
        }
    }
}

fn piece_index(breakpoints: &[f64], x: f64) -> usize {
    // partition_point returns the count of boundaries <= x; the piece owning
    // x starts at the last such boundary.
    breakpoints.partition_point(|&b| b <= x).saturating_sub(1)
}

/// An orbit segment of a map, with the transient prefix discarded.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub seed_state: f64,
    pub discarded: usize,
    pub samples: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Iterate `map` from `x0`, discard the first `tau0` states, retain `tau`.
///
/// The retained samples are the iterates after the transient: bitwise
/// reproducible given (map, x0, tau0, tau).
pub fn generate_trajectory(map: &MapSpec, x0: f64, tau0: usize, tau: usize) -> Result<Trajectory> {
    MapSpec::check_domain(x0)?;
    let mut x = x0;
    for _ in 0..tau0 {
        x = map.step(x);
    }
    let mut samples = Vec::with_capacity(tau);
    samples.push(x);
    for _ in 1..tau {
        x = map.step(x);
        samples.push(x);
    }
    Ok(Trajectory {
        seed_state: x0,
        discarded: tau0,
        samples,
    })
}

/// Histogram approximation of a probability density on [0, 1).
#[derive(Debug, Clone)]
pub struct DensityEstimate {
    mesh: Mesh,
    weights: DiscreteDist,
}

impl DensityEstimate {
    pub fn new(mesh: Mesh, weights: DiscreteDist) -> Result<Self> {
        if weights.alphabet_size() != mesh.cells() {
            return Err(Error::DimensionMismatch {
                context: "DensityEstimate cells",
                left: weights.alphabet_size(),
                right: mesh.cells(),
            });
        }
        Ok(Self { mesh, weights })
    }

    /// Exactly uniform density.
    pub fn uniform(mesh: Mesh) -> Self {
        let weights = DiscreteDist::uniform(mesh.cells());
        Self { mesh, weights }
    }

    /// Normalized histogram of samples over the mesh.
    pub fn from_samples(mesh: Mesh, samples: &[f64]) -> Result<Self> {
        let mut counts = vec![0u64; mesh.cells()];
        for &x in samples {
            counts[mesh.bin(x)?] += 1;
        }
        Ok(Self {
            mesh,
            weights: DiscreteDist::from_counts(&counts)?,
        })
    }

    pub fn mesh(&self) -> Mesh {
        self.mesh
    }

    pub fn weights(&self) -> &DiscreteDist {
        &self.weights
    }
}

/// Normalized trajectory histogram: the empirical invariant density of the
/// map as seen from (x0, tau0, tau).
pub fn estimate_acip(
    map: &MapSpec,
    mesh: Mesh,
    x0: f64,
    tau0: usize,
    tau: usize,
) -> Result<DensityEstimate> {
    let mut x = x0;
    MapSpec::check_domain(x0)?;
    for _ in 0..tau0 {
        x = map.step(x);
    }
    let mut counts = vec![0u64; mesh.cells()];
    for _ in 0..tau {
        counts[mesh.bin(x)?] += 1;
        x = map.step(x);
    }
    Ok(DensityEstimate {
        mesh,
        weights: DiscreteDist::from_counts(&counts)?,
    })
}

/// Source distributions for i.i.d. sampling on [0, 1).
#[derive(Debug, Clone, PartialEq)]
pub enum SourceDist {
    Uniform,
    /// Gaussian with the given mean and variance, truncated to [0, 1) by
    /// rejection.
    TruncatedGaussian {
        mean: f64,
        variance: f64,
    },
    /// Draws with replacement from a stored trajectory of the map
    /// (x0 = 0.5, 1000 transients, 10^6 retained states by default).
    Acip(MapSpec),
}

/// Default trajectory length backing `SourceDist::Acip`.
pub const ACIP_TRAJECTORY_LEN: usize = 1_000_000;
/// Default transient count backing `SourceDist::Acip`.
pub const ACIP_TRANSIENTS: usize = 1000;
/// Default initial state backing `SourceDist::Acip`.
pub const ACIP_X0: f64 = 0.5;

/// Draw `count` pseudo-random samples, reproducible from `seed`.
pub fn sample_distribution(dist: &SourceDist, count: usize, seed: u64) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::Usage("sample count must be positive".into()));
    }
    let mut rng = SplitMix64::new(derive_seed(seed, 0x5a17));
    match dist {
        SourceDist::Uniform => Ok((0..count).map(|_| rng.uniform01()).collect()),
        SourceDist::TruncatedGaussian { mean, variance } => {
            if *variance <= 0.0 {
                return Err(Error::Usage("gaussian variance must be positive".into()));
            }
            let sigma = variance.sqrt();
            let mut out = Vec::with_capacity(count);
            while out.len() < count {
                let x = mean + sigma * rng.standard_normal();
                if (0.0..1.0).contains(&x) {
                    out.push(x);
                }
            }
            Ok(out)
        }
        SourceDist::Acip(map) => {
            let traj = generate_trajectory(map, ACIP_X0, ACIP_TRANSIENTS, ACIP_TRAJECTORY_LEN)?;
            Ok((0..count)
                .map(|_| traj.samples[rng.index(traj.samples.len())])
                .collect())
        }
    }
}

/// Total variation-style check used by tests: max per-cell deviation of a
/// density estimate from the exactly uniform density.
pub fn max_deviation_from_uniform(density: &DensityEstimate) -> f64 {
    let l = density.mesh().cells() as f64;
    density
        .weights()
        .mass()
        .iter()
        .map(|&w| (w - 1.0 / l).abs())
        .fold(0.0, f64::max)
}

/// Empirical mean of a sample set (test helper for distribution checks).
pub fn sample_mean(samples: &[f64]) -> f64 {
    kahan_sum(samples.iter().copied()) / samples.len() as f64
}
