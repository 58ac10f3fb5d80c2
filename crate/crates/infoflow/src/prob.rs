//! Exact finite-alphabet probability: KL divergence, entropies, mutual
//! information and conditional mutual information via Markovization.
//!
//! All information quantities are in nats. Distributions are dense arrays
//! validated at construction; every operation below is a pure function of
//! immutable inputs.

use crate::error::{Error, Result};

/// Tolerance for sum-to-one validation and for clamping tiny negative
/// results of information quantities back to zero.
pub const MASS_TOL: f64 = 1e-12;

/// Compensated (Neumaier) summation. Keeps validation and the information
/// sums accurate even for tensors with ~10^6 cells.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn check_mass(mass: &[f64], what: &str) -> Result<()> {
    if mass.is_empty() {
        return Err(Error::InvalidDistribution(format!(
            "{what}: empty alphabet"
        )));
    }
    if let Some(bad) = mass
        .iter()
        .find(|&&m| m.is_nan() || m < 0.0 || !m.is_finite())
    {
        return Err(Error::InvalidDistribution(format!(
            "{what}: negative or non-finite mass {bad}"
        )));
    }
    let total = kahan_sum(mass.iter().copied());
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidDistribution(format!(
            "{what}: total mass {total} differs from 1 by more than {MASS_TOL}"
        )));
    }
    Ok(())
}

/// Probability mass function over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    mass: Vec<f64>,
}

impl DiscreteDist {
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        check_mass(&mass, "DiscreteDist")?;
        Ok(Self { mass })
    }

    /// Normalize nonnegative counts into a distribution.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidDistribution(
                "DiscreteDist: zero total count".into(),
            ));
        }
        let mass = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Self::new(mass)
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            mass: vec![1.0 / n as f64; n.max(1)],
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.mass.len()
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub(crate) fn from_mass_unchecked(mass: Vec<f64>) -> Self {
        Self { mass }
    }
}

/// Joint probability mass over a pair of finite alphabets, row-major in
/// (x, y): `mass[i * dims.1 + j]` is P(X = i, Y = j).
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist2 {
    mass: Vec<f64>,
    dims: (usize, usize),
}

impl JointDist2 {
    pub fn new(mass: Vec<f64>, dims: (usize, usize)) -> Result<Self> {
        if mass.len() != dims.0 * dims.1 {
            return Err(Error::DimensionMismatch {
                context: "JointDist2 storage",
                left: mass.len(),
                right: dims.0 * dims.1,
            });
        }
        check_mass(&mass, "JointDist2")?;
        Ok(Self { mass, dims })
    }

    pub(crate) fn from_mass_unchecked(mass: Vec<f64>, dims: (usize, usize)) -> Self {
        Self { mass, dims }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.mass[i * self.dims.1 + j]
    }

    /// Marginal distribution of the first (x) coordinate.
    pub fn marginal_x(&self) -> DiscreteDist {
        let (lx, ly) = self.dims;
        let m = (0..lx)
            .map(|i| kahan_sum(self.mass[i * ly..(i + 1) * ly].iter().copied()))
            .collect();
        DiscreteDist::from_mass_unchecked(m)
    }

    /// Marginal distribution of the second (y) coordinate.
    pub fn marginal_y(&self) -> DiscreteDist {
        let (lx, ly) = self.dims;
        let mut m = vec![0.0; ly];
        for i in 0..lx {
            for (j, out) in m.iter_mut().enumerate() {
                *out += self.mass[i * ly + j];
            }
        }
        DiscreteDist::from_mass_unchecked(m)
    }

    /// Transposed joint (swap x and y).
    pub fn transpose(&self) -> JointDist2 {
        let (lx, ly) = self.dims;
        let mut out = vec![0.0; lx * ly];
        for i in 0..lx {
            for j in 0..ly {
                out[j * lx + i] = self.mass[i * ly + j];
            }
        }
        JointDist2::from_mass_unchecked(out, (ly, lx))
    }

    /// Diagonal joint of a single distribution: P(X = i, Y = i) = p(i).
    pub fn diagonal(p: &DiscreteDist) -> JointDist2 {
        let n = p.alphabet_size();
        let mut mass = vec![0.0; n * n];
        for (i, &m) in p.mass().iter().enumerate() {
            mass[i * n + i] = m;
        }
        JointDist2::from_mass_unchecked(mass, (n, n))
    }

    /// Product joint of two independent marginals.
    pub fn product(p: &DiscreteDist, q: &DiscreteDist) -> JointDist2 {
        let (lx, ly) = (p.alphabet_size(), q.alphabet_size());
        let mut mass = vec![0.0; lx * ly];
        for i in 0..lx {
            for j in 0..ly {
                mass[i * ly + j] = p.mass()[i] * q.mass()[j];
            }
        }
        JointDist2::from_mass_unchecked(mass, (lx, ly))
    }
}

/// Joint probability mass over a triple of finite alphabets, stored as
/// `mass[(i * dims.1 + j) * dims.2 + k]` for (x, y, z) = (i, j, k).
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist3 {
    mass: Vec<f64>,
    dims: (usize, usize, usize),
}

impl JointDist3 {
    pub fn new(mass: Vec<f64>, dims: (usize, usize, usize)) -> Result<Self> {
        if mass.len() != dims.0 * dims.1 * dims.2 {
            return Err(Error::DimensionMismatch {
                context: "JointDist3 storage",
                left: mass.len(),
                right: dims.0 * dims.1 * dims.2,
            });
        }
        check_mass(&mass, "JointDist3")?;
        Ok(Self { mass, dims })
    }

    pub fn from_counts(counts: &[u64], dims: (usize, usize, usize)) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidDistribution(
                "JointDist3: zero total count".into(),
            ));
        }
        let mass = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Self::new(mass, dims)
    }

    pub(crate) fn from_mass_unchecked(mass: Vec<f64>, dims: (usize, usize, usize)) -> Self {
        Self { mass, dims }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.mass[(i * self.dims.1 + j) * self.dims.2 + k]
    }

    /// Marginal of the conditioning (z) coordinate.
    pub fn marginal_z(&self) -> DiscreteDist {
        let (lx, ly, lz) = self.dims;
        let mut m = vec![0.0; lz];
        let mut comp = vec![0.0; lz];
        for i in 0..lx {
            for j in 0..ly {
                let base = (i * ly + j) * lz;
                for k in 0..lz {
                    let v = self.mass[base + k];
                    let t = m[k] + v;
                    comp[k] += if m[k].abs() >= v.abs() {
                        (m[k] - t) + v
                    } else {
                        (v - t) + m[k]
                    };
                    m[k] = t;
                }
            }
        }
        for k in 0..lz {
            m[k] += comp[k];
        }
        DiscreteDist::from_mass_unchecked(m)
    }

    /// Pairwise (x, z) marginal, indexed `[i * lz + k]`.
    pub fn marginal_xz(&self) -> Vec<f64> {
        let (lx, ly, lz) = self.dims;
        let mut m = vec![0.0; lx * lz];
        for i in 0..lx {
            for j in 0..ly {
                let base = (i * ly + j) * lz;
                for k in 0..lz {
                    m[i * lz + k] += self.mass[base + k];
                }
            }
        }
        m
    }

    /// Pairwise (y, z) marginal, indexed `[j * lz + k]`.
    pub fn marginal_yz(&self) -> Vec<f64> {
        let (lx, ly, lz) = self.dims;
        let mut m = vec![0.0; ly * lz];
        for i in 0..lx {
            for j in 0..ly {
                let base = (i * ly + j) * lz;
                for k in 0..lz {
                    m[j * lz + k] += self.mass[base + k];
                }
            }
        }
        m
    }
}

/// An information quantity in nats, or the infinite branch of KL when the
/// left argument is not absolutely continuous with respect to the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InfoValue {
    Finite(f64),
    Infinite,
}

impl InfoValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, InfoValue::Infinite)
    }

    pub fn nats(&self) -> Option<f64> {
        match self {
            InfoValue::Finite(v) => Some(*v),
            InfoValue::Infinite => None,
        }
    }

    /// Unwrap a value known to be finite.
    pub fn expect_finite(&self) -> f64 {
        match self {
            InfoValue::Finite(v) => *v,
            InfoValue::Infinite => panic!("information value is infinite"),
        }
    }
}

/// Clamp a tiny negative rounding residue to zero; anything more negative
/// is a genuine bug in the caller and surfaces as an error.
fn clamp_nonnegative(value: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -MASS_TOL {
        Ok(0.0)
    } else {
        Err(Error::InternalConsistency(format!(
            "{what} came out negative: {value}"
        )))
    }
}

/// KL divergence of `p` with respect to `m` over a shared alphabet, with the
/// conventions 0 ln(0/0) = 0 and Infinite whenever some symbol has
/// p > 0 = m.
pub fn kl_divergence(p: &DiscreteDist, m: &DiscreteDist) -> Result<InfoValue> {
    if p.alphabet_size() != m.alphabet_size() {
        return Err(Error::DimensionMismatch {
            context: "kl_divergence alphabets",
            left: p.alphabet_size(),
            right: m.alphabet_size(),
        });
    }
    kl_divergence_mass(p.mass(), m.mass())
}

/// KL divergence over raw mass slices (both must sum to one).
pub(crate) fn kl_divergence_mass(p: &[f64], m: &[f64]) -> Result<InfoValue> {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for (&pa, &ma) in p.iter().zip(m) {
        if pa > 0.0 {
            if ma <= 0.0 {
                return Ok(InfoValue::Infinite);
            }
            let v = pa * (pa / ma).ln();
            let t = sum + v;
            comp += if sum.abs() >= v.abs() {
                (sum - t) + v
            } else {
                (v - t) + sum
            };
            sum = t;
        }
    }
    Ok(InfoValue::Finite(clamp_nonnegative(
        sum + comp,
        "KL divergence",
    )?))
}

/// Shannon entropy in nats.
pub fn shannon_entropy(p: &DiscreteDist) -> f64 {
    shannon_entropy_mass(p.mass())
}

pub(crate) fn shannon_entropy_mass(mass: &[f64]) -> f64 {
    let h = kahan_sum(mass.iter().filter(|&&m| m > 0.0).map(|&m| -m * m.ln()));
    // -p ln p >= 0 for p in (0, 1]; a tiny negative can only be rounding.
    h.max(0.0)
}

/// Mutual information of a joint: KL of the joint against the product of
/// its own marginals. Always finite on finite alphabets.
pub fn mutual_information(j: &JointDist2) -> Result<InfoValue> {
    let (lx, ly) = j.dims();
    let px = j.marginal_x();
    let py = j.marginal_y();
    let mut sum = 0.0;
    let mut comp = 0.0;
    for i in 0..lx {
        let pxi = px.mass()[i];
        for jj in 0..ly {
            let p = j.at(i, jj);
            if p > 0.0 {
                let v = p * (p / (pxi * py.mass()[jj])).ln();
                let t = sum + v;
                comp += if sum.abs() >= v.abs() {
                    (sum - t) + v
                } else {
                    (v - t) + sum
                };
                sum = t;
            }
        }
    }
    Ok(InfoValue::Finite(clamp_nonnegative(
        sum + comp,
        "mutual information",
    )?))
}

/// The conditionally independent model with the same z-marginal and the
/// same per-z conditionals as `j`: out(i,j,k) = P(X=i|Z=k) P(Y=j|Z=k) P(Z=k).
/// Slices with zero z-mass stay all-zero.
pub fn markovize(j: &JointDist3) -> JointDist3 {
    let (lx, ly, lz) = j.dims();
    let pz = j.marginal_z();
    let mxz = j.marginal_xz();
    let myz = j.marginal_yz();
    let mut out = vec![0.0; lx * ly * lz];
    for k in 0..lz {
        let zk = pz.mass()[k];
        if zk <= 0.0 {
            continue;
        }
        for i in 0..lx {
            let a = mxz[i * lz + k];
            if a == 0.0 {
                continue;
            }
            for jj in 0..ly {
                out[(i * ly + jj) * lz + k] = a * myz[jj * lz + k] / zk;
            }
        }
    }
    JointDist3::from_mass_unchecked(out, (lx, ly, lz))
}

/// Conditional mutual information I(X; Y | Z): KL of the joint from its
/// Markovization. Always finite on finite alphabets.
pub fn conditional_mutual_information(j: &JointDist3) -> Result<InfoValue> {
    let m = markovize(j);
    match kl_divergence_mass(j.mass(), m.mass())? {
        InfoValue::Finite(v) => Ok(InfoValue::Finite(v)),
        // p(i,j,k) > 0 forces both pairwise marginals positive, so the
        // Markovization covers the joint's support.
        InfoValue::Infinite => Err(Error::InternalConsistency(
            "Markovization failed to cover the joint support".into(),
        )),
    }
}

/// The conditioned pair (X_z, Y_z) at z-index `k`: the k-slice of the joint
/// renormalized by its z-mass.
pub fn disintegrate(j: &JointDist3, k: usize) -> Result<JointDist2> {
    let (lx, ly, lz) = j.dims();
    if k >= lz {
        return Err(Error::DimensionMismatch {
            context: "disintegrate z index",
            left: k,
            right: lz,
        });
    }
    let mut slice = vec![0.0; lx * ly];
    for i in 0..lx {
        for jj in 0..ly {
            slice[i * ly + jj] = j.at(i, jj, k);
        }
    }
    let zk = kahan_sum(slice.iter().copied());
    if zk <= 0.0 {
        return Err(Error::EmptySlice { index: k });
    }
    for v in &mut slice {
        *v /= zk;
    }
    Ok(JointDist2::from_mass_unchecked(slice, (lx, ly)))
}

/// Conditional mutual information computed the other way: the z-average of
/// per-slice mutual information over slices with positive z-mass.
pub fn disintegrated_cmi(j: &JointDist3) -> Result<InfoValue> {
    let pz = j.marginal_z();
    let mut terms = Vec::with_capacity(pz.alphabet_size());
    for (k, &zk) in pz.mass().iter().enumerate() {
        if zk <= 0.0 {
            continue;
        }
        let slice = disintegrate(j, k)?;
        match mutual_information(&slice)? {
            InfoValue::Finite(v) => terms.push(zk * v),
            InfoValue::Infinite => return Ok(InfoValue::Infinite),
        }
    }
    Ok(InfoValue::Finite(clamp_nonnegative(
        kahan_sum(terms),
        "disintegrated cMI",
    )?))
}
