//! Uniform meshing of [0, 1), cell binning, and joint histograms from
//! paired samples or from the exact expanding-map pushforward.

use crate::dynamics::MapSpec;
use crate::error::{Error, Result};
use crate::prob::JointDist2;

/// Uniform partition of [0, 1) into L half-open cells [i/L, (i+1)/L).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mesh {
    cells: usize,
}

impl Mesh {
    pub fn new(cells: usize) -> Result<Mesh> {
        if cells == 0 {
            return Err(Error::Usage("mesh must have at least one cell".into()));
        }
        Ok(Mesh { cells })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Cell width Delta = 1/L.
    pub fn width(&self) -> f64 {
        1.0 / self.cells as f64
    }

    /// Midpoint of cell i.
    pub fn midpoint(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.width()
    }

    /// Cell index of a point: floor(x L), clamped to L-1 at the
    /// representation boundary.
    pub fn bin(&self, x: f64) -> Result<usize> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::Domain { value: x });
        }
        Ok(((x * self.cells as f64) as usize).min(self.cells - 1))
    }
}

/// Paired cell-index series over a common mesh.
#[derive(Debug, Clone)]
pub struct PairedSeries {
    pub mesh: Mesh,
    pub x_cells: Vec<usize>,
    pub y_cells: Vec<usize>,
}

impl PairedSeries {
    pub fn from_samples(mesh: Mesh, x_samples: &[f64], y_samples: &[f64]) -> Result<Self> {
        if x_samples.len() != y_samples.len() {
            return Err(Error::DimensionMismatch {
                context: "paired sample lengths",
                left: x_samples.len(),
                right: y_samples.len(),
            });
        }
        if x_samples.is_empty() {
            return Err(Error::Usage("paired series must be nonempty".into()));
        }
        let x_cells = x_samples
            .iter()
            .map(|&x| mesh.bin(x))
            .collect::<Result<_>>()?;
        let y_cells = y_samples
            .iter()
            .map(|&y| mesh.bin(y))
            .collect::<Result<_>>()?;
        Ok(Self {
            mesh,
            x_cells,
            y_cells,
        })
    }

    /// Normalized 2-D count histogram over the mesh.
    pub fn joint(&self) -> Result<JointDist2> {
        let l = self.mesh.cells();
        let mut counts = vec![0u64; l * l];
        for (&i, &j) in self.x_cells.iter().zip(&self.y_cells) {
            counts[i * l + j] += 1;
        }
        let total = self.x_cells.len() as f64;
        let mass = counts.iter().map(|&c| c as f64 / total).collect();
        JointDist2::new(mass, (l, l))
    }
}

/// Normalized joint histogram of paired samples over the mesh. The x and y
/// marginals equal the 1-D histograms of the respective series.
pub fn joint_from_samples(mesh: Mesh, x_samples: &[f64], y_samples: &[f64]) -> Result<JointDist2> {
    PairedSeries::from_samples(mesh, x_samples, y_samples)?.joint()
}

/// Image samples of a map: pairs (y, T(y)) ready for histogramming.
pub fn pairs_from_map(map: &MapSpec, y_samples: &[f64]) -> Result<Vec<f64>> {
    y_samples.iter().map(|&y| map.evaluate(y)).collect()
}

/// The exact discretized joint of (X, Y) with X = dY mod 1 and Y uniform on
/// [0, 1): for L > d, mass 1/(dL) sits on the dL pairs (d j + s mod L, j);
/// wrapped multiplicities accumulate when cells coincide. Axis order is
/// (x cell, y cell).
pub fn exact_bernoulli_joint(cells: usize, d: u32) -> Result<JointDist2> {
    if cells == 0 {
        return Err(Error::Usage("mesh must have at least one cell".into()));
    }
    if d < 2 {
        return Err(Error::Usage("expansion rate must be at least 2".into()));
    }
    let l = cells;
    let d = d as usize;
    let atom = 1.0 / (d * l) as f64;
    let mut mass = vec![0.0; l * l];
    for j in 0..l {
        for s in 0..d {
            let i = (d * j + s) % l;
            mass[i * l + j] += atom;
        }
    }
    JointDist2::new(mass, (l, l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{sample_distribution, SourceDist};
    use crate::prob::mutual_information;

    #[test]
    fn bin_edges_and_clamp() {
        let m = Mesh::new(300).unwrap();
        assert_eq!(m.bin(0.0).unwrap(), 0);
        assert_eq!(m.bin(0.999999).unwrap(), 299);
        assert!(m.bin(1.0).is_err());
        assert!(m.bin(-0.1).is_err());
        let m4 = Mesh::new(4).unwrap();
        assert_eq!(m4.bin(0.5).unwrap(), 2);
    }

    #[test]
    fn identity_pairs_build_diagonal_joint() {
        let m = Mesh::new(8).unwrap();
        let xs: Vec<f64> = (0..800).map(|i| (i % 8) as f64 / 8.0 + 0.01).collect();
        let j = joint_from_samples(m, &xs, &xs).unwrap();
        for i in 0..8 {
            for jj in 0..8 {
                let expected = if i == jj { 1.0 / 8.0 } else { 0.0 };
                assert!((j.at(i, jj) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let m = Mesh::new(4).unwrap();
        assert!(matches!(
            joint_from_samples(m, &[0.1, 0.2], &[0.3]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn joint_marginals_match_univariate_histograms() {
        let m = Mesh::new(16).unwrap();
        let y = sample_distribution(&SourceDist::Uniform, 20_000, 5).unwrap();
        let x = pairs_from_map(&MapSpec::Bernoulli(3), &y).unwrap();
        let j = joint_from_samples(m, &x, &y).unwrap();
        let hist_x = crate::dynamics::DensityEstimate::from_samples(m, &x).unwrap();
        let hist_y = crate::dynamics::DensityEstimate::from_samples(m, &y).unwrap();
        for (a, b) in j.marginal_x().mass().iter().zip(hist_x.weights().mass()) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in j.marginal_y().mass().iter().zip(hist_y.weights().mass()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn coarse_mesh_hides_the_expanding_map() {
        // With L <= d every (x, y) cell pair is charged uniformly, so the
        // discretized variables look independent.
        let y = sample_distribution(&SourceDist::Uniform, 200_000, 13).unwrap();
        let x = pairs_from_map(&MapSpec::Bernoulli(4), &y).unwrap();
        for l in [2usize, 4] {
            let j = joint_from_samples(Mesh::new(l).unwrap(), &x, &y).unwrap();
            let mi = mutual_information(&j).unwrap().expect_finite();
            assert!(mi < 0.005, "L={l}: MI={mi}");
        }
    }

    #[test]
    fn exact_joint_small_cases() {
        // L <= d: uniform over all pairs.
        let j = exact_bernoulli_joint(2, 2).unwrap();
        for v in j.mass() {
            assert!((v - 0.25).abs() < 1e-15);
        }
        assert!(mutual_information(&j).unwrap().expect_finite() < 1e-13);

        // L = 4, d = 2: eight charged cells at 1/8, MI = ln 2.
        let j = exact_bernoulli_joint(4, 2).unwrap();
        let charged = j.mass().iter().filter(|&&v| v > 0.0).count();
        assert_eq!(charged, 8);
        assert!(j
            .mass()
            .iter()
            .filter(|&&v| v > 0.0)
            .all(|&v| (v - 0.125).abs() < 1e-15));
        let mi = mutual_information(&j).unwrap().expect_finite();
        assert!((mi - 2f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn exact_joint_formula_case() {
        // ln 300 - ln 3 = ln 100 at the production mesh.
        let j = exact_bernoulli_joint(300, 3).unwrap();
        let mi = mutual_information(&j).unwrap().expect_finite();
        assert!((mi - 100f64.ln()).abs() < 1e-12);

        let j = exact_bernoulli_joint(300, 7).unwrap();
        let mi = mutual_information(&j).unwrap().expect_finite();
        assert!((mi - (300f64.ln() - 7f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn pairs_from_map_examples() {
        let y = [0.25, 0.75];
        let x = pairs_from_map(&MapSpec::Rotation(0.0), &y).unwrap();
        assert_eq!(x, vec![0.25, 0.75]);
        let x = pairs_from_map(&MapSpec::Bernoulli(2), &y).unwrap();
        assert_eq!(x, vec![0.5, 0.5]);
        let x = pairs_from_map(&MapSpec::SineBox(1), &[0.25]).unwrap();
        assert_eq!(x, vec![0.0]);
    }

    #[test]
    fn empirical_joint_support_subset_of_exact() {
        let l = 120;
        let d = 6;
        let y = sample_distribution(&SourceDist::Uniform, 500_000, 3).unwrap();
        let x = pairs_from_map(&MapSpec::Bernoulli(d), &y).unwrap();
        let emp = joint_from_samples(Mesh::new(l).unwrap(), &x, &y).unwrap();
        let exact = exact_bernoulli_joint(l, d).unwrap();
        for (e, t) in emp.mass().iter().zip(exact.mass()) {
            if *e > 0.0 {
                assert!(*t > 0.0, "empirical mass outside the exact support");
            }
        }
    }
}
