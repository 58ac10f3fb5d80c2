//! Differential entropy, the expansion-rate integral, and the predicted
//! discretized mutual information for deterministically coupled pairs
//! X = T(Y). The prediction at mesh size L is
//! ln L + H(X) - integral of ln|T'| against the Y density; the finite offset
//! between ln L and the prediction is the relative ambiguity of (T, Y).

use crate::discretize::Mesh;
use crate::dynamics::{DensityEstimate, MapSpec};
use crate::error::Result;
use crate::prob::{kahan_sum, shannon_entropy, DiscreteDist};

/// Floor for ln|T'| when a mesh cell sits on a critical point of the map.
/// The total weight of clipped cells is reported alongside every estimate
/// that uses the floor.
pub const LOG_DERIVATIVE_FLOOR: f64 = -18.420680743952367; // ln(1e-8)

/// Number of stratified quantile points used when pushing a histogram
/// density through a map.
const PUSHFORWARD_POINTS: usize = 1 << 20;

/// Ambiguity summary for a map/density pair at a given mesh.
#[derive(Debug, Clone)]
pub struct AmbiguityReport {
    /// Plug-in differential entropy of X = T(Y) in nats.
    pub diff_entropy_x: f64,
    /// Integral of ln|T'| against the Y density, in nats.
    pub lyap_integral: f64,
    /// lyap_integral - diff_entropy_x.
    pub relative_ambiguity: f64,
    /// ln L - relative_ambiguity at the report's mesh.
    pub predicted_mi: f64,
    /// Total Y-weight of cells whose midpoint derivative was clipped at the
    /// floor (critical points and undefined-derivative breakpoints).
    pub clipped_weight: f64,
}

/// Histogram plug-in estimate of the differential entropy: Shannon entropy
/// of the cell weights plus ln Delta.
pub fn differential_entropy(density: &DensityEstimate) -> f64 {
    shannon_entropy(density.weights()) + density.mesh().width().ln()
}

/// Riemann-sum estimate of the integral of ln|T'| against the density,
/// evaluated at cell midpoints. Cells whose midpoint has |T'| below 1e-8
/// (or an undefined derivative) contribute the clipped floor value.
pub fn lyapunov_integral(map: &MapSpec, density: &DensityEstimate) -> f64 {
    lyapunov_integral_flagged(map, density).0
}

/// As `lyapunov_integral`, also returning the total weight of clipped cells.
pub fn lyapunov_integral_flagged(map: &MapSpec, density: &DensityEstimate) -> (f64, f64) {
    let mesh = density.mesh();
    let mut clipped = 0.0;
    let terms: Vec<f64> = density
        .weights()
        .mass()
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            if w == 0.0 {
                return 0.0;
            }
            let log_slope = match map.derivative(mesh.midpoint(i)) {
                Ok(t) => {
                    let a = t.abs().ln();
                    if a < LOG_DERIVATIVE_FLOOR {
                        clipped += w;
                        LOG_DERIVATIVE_FLOOR
                    } else {
                        a
                    }
                }
                Err(_) => {
                    clipped += w;
                    LOG_DERIVATIVE_FLOOR
                }
            };
            w * log_slope
        })
        .collect();
    (kahan_sum(terms), clipped)
}

/// Push a histogram density through a map deterministically: invert the
/// piecewise-linear CDF at stratified quantiles, apply the map, histogram
/// the images on the target mesh.
pub fn pushforward_density(
    map: &MapSpec,
    density: &DensityEstimate,
    mesh: Mesh,
) -> Result<DensityEstimate> {
    let src = density.mesh();
    let weights = density.weights().mass();
    let mut cum = Vec::with_capacity(weights.len() + 1);
    let mut acc = 0.0;
    cum.push(0.0);
    for &w in weights {
        acc += w;
        cum.push(acc);
    }
    // Guard the top end against rounding drift.
    let top = cum.len() - 1;
    cum[top] = cum[top].max(1.0);

    let q = PUSHFORWARD_POINTS;
    let mut counts = vec![0u64; mesh.cells()];
    let mut cell = 0usize;
    for step in 0..q {
        let u = (step as f64 + 0.5) / q as f64;
        while cum[cell + 1] <= u {
            cell += 1;
        }
        let w = weights[cell];
        let t = if w > 0.0 {
            ((u - cum[cell]) / w).clamp(0.0, 1.0 - 1e-12)
        } else {
            0.5
        };
        let y = (cell as f64 + t) * src.width();
        let x = map.step(y.min(1.0 - f64::EPSILON));
        counts[mesh.bin(x)?] += 1;
    }
    DensityEstimate::new(mesh, DiscreteDist::from_counts(&counts)?)
}

/// Predicted discretized mutual information of (X, Y) with X = T(Y), from
/// the Y density alone: ln L + H(X) - integral of ln|T'| f_Y.
pub fn predict_mi(
    map: &MapSpec,
    y_density: &DensityEstimate,
    mesh: Mesh,
) -> Result<AmbiguityReport> {
    let (lyap, clipped) = lyapunov_integral_flagged(map, y_density);
    let x_density = pushforward_density(map, y_density, mesh)?;
    let diff_entropy_x = differential_entropy(&x_density);
    let relative_ambiguity = lyap - diff_entropy_x;
    let predicted_mi = (mesh.cells() as f64).ln() - relative_ambiguity;
    Ok(AmbiguityReport {
        diff_entropy_x,
        lyap_integral: lyap,
        relative_ambiguity,
        predicted_mi,
        clipped_weight: clipped,
    })
}
