//! Transfer entropy and causation entropy from time series and coupled-map
//! networks, built on the discretized conditional mutual information.

use crate::discretize::Mesh;
use crate::dynamics::frac;
use crate::error::{Error, Result};
use crate::prob::{conditional_mutual_information, InfoValue, JointDist3};
use crate::rng::{derive_seed, SplitMix64};

/// Default cap on the composite joint alphabet (product of the three block
/// alphabets) so the dense tensor representation stays viable.
pub const DEFAULT_ALPHABET_BUDGET: usize = 1_000_000;

/// Named scalar time series of equal length over a common mesh, with the
/// history lengths used when forming information-flow blocks.
#[derive(Debug, Clone)]
pub struct SeriesBundle {
    names: Vec<String>,
    cells: Vec<Vec<usize>>,
    mesh: Mesh,
    /// Target own-history length (k).
    pub own_history: usize,
    /// Source history length (l).
    pub source_history: usize,
    /// Composite alphabet budget.
    pub budget: usize,
}

impl SeriesBundle {
    pub fn new(
        named_series: Vec<(String, Vec<f64>)>,
        mesh: Mesh,
        own_history: usize,
        source_history: usize,
    ) -> Result<Self> {
        if named_series.is_empty() {
            return Err(Error::Usage("bundle needs at least one series".into()));
        }
        if own_history < 1 || source_history < 1 {
            return Err(Error::Usage("history lengths must be at least 1".into()));
        }
        let len = named_series[0].1.len();
        let min_len = own_history.max(source_history) + 2;
        if len < min_len {
            return Err(Error::DimensionMismatch {
                context: "series too short for requested histories",
                left: len,
                right: min_len,
            });
        }
        let mut names = Vec::with_capacity(named_series.len());
        let mut cells = Vec::with_capacity(named_series.len());
        for (name, series) in named_series {
            if series.len() != len {
                return Err(Error::DimensionMismatch {
                    context: "series lengths",
                    left: series.len(),
                    right: len,
                });
            }
            let binned = series
                .iter()
                .map(|&x| mesh.bin(x))
                .collect::<Result<Vec<_>>>()?;
            names.push(name);
            cells.push(binned);
        }
        Ok(Self {
            names,
            cells,
            mesh,
            own_history,
            source_history,
            budget: DEFAULT_ALPHABET_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn mesh(&self) -> Mesh {
        self.mesh
    }

    pub fn len(&self) -> usize {
        self.cells[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells[0].is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.cells.len()
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::SeriesNotFound(name.to_string()))
    }
}

fn checked_alphabet(l: usize, exponent: usize, budget: usize) -> Result<usize> {
    let mut size: usize = 1;
    for _ in 0..exponent {
        size = size
            .checked_mul(l)
            .filter(|&s| s <= budget)
            .ok_or(Error::CapacityExceeded {
                required: usize::MAX,
                budget,
            })?;
    }
    Ok(size)
}

fn check_budget(dims: (usize, usize, usize), budget: usize) -> Result<()> {
    dims.0
        .checked_mul(dims.1)
        .and_then(|v| v.checked_mul(dims.2))
        .filter(|&total| total <= budget)
        .map(|_| ())
        .ok_or(Error::CapacityExceeded {
            required: dims.0.saturating_mul(dims.1).saturating_mul(dims.2),
            budget,
        })
}

/// Mixed-radix code of the cells of several series at one time index.
#[inline]
fn encode_nodes(cells: &[Vec<usize>], nodes: &[usize], t: usize, l: usize) -> usize {
    let mut code = 0usize;
    for &v in nodes {
        code = code * l + cells[v][t];
    }
    code
}

/// Mixed-radix code of a single series' history block ending at time t.
#[inline]
fn encode_history(cells: &[usize], t: usize, len: usize, l: usize) -> usize {
    let mut code = 0usize;
    for &cell in &cells[(t + 1 - len)..=t] {
        code = code * l + cell;
    }
    code
}

/// Empirical joint of (target next state, source history block, target
/// history block) over all admissible times.
fn te_joint(bundle: &SeriesBundle, source: usize, target: usize) -> Result<JointDist3> {
    let l = bundle.mesh.cells();
    let k = bundle.own_history;
    let hl = bundle.source_history;
    let ly = checked_alphabet(l, hl, bundle.budget)?;
    let lz = checked_alphabet(l, k, bundle.budget)?;
    let dims = (l, ly, lz);
    check_budget(dims, bundle.budget)?;

    let tgt = &bundle.cells[target];
    let src = &bundle.cells[source];
    let start = k.max(hl) - 1;
    let mut counts = vec![0u64; dims.0 * dims.1 * dims.2];
    for t in start..bundle.len() - 1 {
        let x = tgt[t + 1];
        let y = encode_history(src, t, hl, l);
        let z = encode_history(tgt, t, k, l);
        counts[(x * ly + y) * lz + z] += 1;
    }
    JointDist3::from_counts(&counts, dims)
}

/// Transfer entropy from `source` to `target`: the conditional mutual
/// information of the target's next state and the source history given the
/// target's own history, on the bundle's mesh. Nats.
pub fn transfer_entropy(bundle: &SeriesBundle, source: &str, target: &str) -> Result<InfoValue> {
    let s = bundle.index_of(source)?;
    let t = bundle.index_of(target)?;
    conditional_mutual_information(&te_joint(bundle, s, t)?)
}

/// Causation entropy of node sets: cMI of the I-block's next state and the
/// J-block's current state given the K-block's current state (lag 1).
/// An empty K conditions on nothing.
pub fn causation_entropy(
    bundle: &SeriesBundle,
    i_set: &[usize],
    j_set: &[usize],
    k_set: &[usize],
) -> Result<InfoValue> {
    let n = bundle.node_count();
    for &v in i_set.iter().chain(j_set).chain(k_set) {
        if v >= n {
            return Err(Error::DimensionMismatch {
                context: "node index",
                left: v,
                right: n,
            });
        }
    }
    if i_set.is_empty() || j_set.is_empty() {
        return Err(Error::Usage("I and J node sets must be nonempty".into()));
    }
    let l = bundle.mesh.cells();
    let lx = checked_alphabet(l, i_set.len(), bundle.budget)?;
    let ly = checked_alphabet(l, j_set.len(), bundle.budget)?;
    let lz = checked_alphabet(l, k_set.len(), bundle.budget)?;
    let dims = (lx, ly, lz);
    check_budget(dims, bundle.budget)?;

    let mut counts = vec![0u64; lx * ly * lz];
    for t in 0..bundle.len() - 1 {
        let x = encode_nodes(&bundle.cells, i_set, t + 1, l);
        let y = encode_nodes(&bundle.cells, j_set, t, l);
        let z = encode_nodes(&bundle.cells, k_set, t, l);
        counts[(x * ly + y) * lz + z] += 1;
    }
    conditional_mutual_information(&JointDist3::from_counts(&counts, dims)?)
}

/// One node of a coupled-map network: the next state is an affine
/// combination of the node's own state and its neighbors', reduced mod 1.
#[derive(Debug, Clone)]
pub struct NodeRule {
    pub offset: f64,
    pub self_coeff: f64,
    /// (neighbor index, coupling weight) pairs.
    pub inputs: Vec<(usize, f64)>,
}

/// A network of coupled interval maps.
#[derive(Debug, Clone)]
pub struct NetworkSpec {
    rules: Vec<NodeRule>,
}

impl NetworkSpec {
    pub fn new(rules: Vec<NodeRule>) -> Result<Self> {
        let n = rules.len();
        if n == 0 {
            return Err(Error::Usage("network needs at least one node".into()));
        }
        for rule in &rules {
            for &(j, _) in &rule.inputs {
                if j >= n {
                    return Err(Error::DimensionMismatch {
                        context: "network adjacency",
                        left: j,
                        right: n,
                    });
                }
            }
        }
        Ok(Self { rules })
    }

    pub fn node_count(&self) -> usize {
        self.rules.len()
    }

    fn step(&self, state: &[f64], next: &mut [f64]) {
        for (i, rule) in self.rules.iter().enumerate() {
            let mut v = rule.offset + rule.self_coeff * state[i];
            for &(j, w) in &rule.inputs {
                v += w * state[j];
            }
            next[i] = frac(v);
        }
    }
}

/// Coupled trajectories from explicit initial states, transients discarded.
pub fn simulate_network_from(
    spec: &NetworkSpec,
    initial: &[f64],
    steps: usize,
    tau0: usize,
) -> Result<Vec<Vec<f64>>> {
    let n = spec.node_count();
    if initial.len() != n {
        return Err(Error::DimensionMismatch {
            context: "initial state count",
            left: initial.len(),
            right: n,
        });
    }
    for &x in initial {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::Domain { value: x });
        }
    }
    let mut state = initial.to_vec();
    let mut next = vec![0.0; n];
    for _ in 0..tau0 {
        spec.step(&state, &mut next);
        std::mem::swap(&mut state, &mut next);
    }
    let mut series = vec![Vec::with_capacity(steps); n];
    for _ in 0..steps {
        for (i, s) in series.iter_mut().enumerate() {
            s.push(state[i]);
        }
        spec.step(&state, &mut next);
        std::mem::swap(&mut state, &mut next);
    }
    Ok(series)
}

/// Coupled trajectories with initial states drawn reproducibly from `seed`.
pub fn simulate_network(
    spec: &NetworkSpec,
    steps: usize,
    tau0: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let mut rng = SplitMix64::new(derive_seed(seed, 0x6e37));
    let initial: Vec<f64> = (0..spec.node_count()).map(|_| rng.uniform01()).collect();
    simulate_network_from(spec, &initial, steps, tau0)
}

/// The directional two-node benchmark: an expanding autonomous driver
/// feeding a driven node. Node 1 receives node 0 with weight 0.7.
pub fn two_node_unidirectional() -> NetworkSpec {
    NetworkSpec::new(vec![
        NodeRule {
            offset: 0.0,
            self_coeff: 3.0,
            inputs: vec![],
        },
        NodeRule {
            offset: 0.0,
            self_coeff: 2.0,
            inputs: vec![(0, 0.7)],
        },
    ])
    .expect("static network")
}

/// The three-node chain benchmark 0 -> 1 -> 2: an expanding driver at the
/// root feeding contracting nodes dominated by their upstream input. The
/// contraction leaves the direct link visible without conditioning.
pub fn three_node_chain() -> NetworkSpec {
    NetworkSpec::new(vec![
        NodeRule {
            offset: 0.0,
            self_coeff: 3.0,
            inputs: vec![],
        },
        NodeRule {
            offset: 0.0,
            self_coeff: 0.5,
            inputs: vec![(0, 1.0)],
        },
        NodeRule {
            offset: 0.0,
            self_coeff: 0.5,
            inputs: vec![(1, 1.0)],
        },
    ])
    .expect("static network")
}

/// Bundle a node-series matrix under generated names n0, n1, ...
pub fn bundle_network_series(
    series: Vec<Vec<f64>>,
    mesh: Mesh,
    own_history: usize,
    source_history: usize,
) -> Result<SeriesBundle> {
    SeriesBundle::new(
        series
            .into_iter()
            .enumerate()
            .map(|(i, s)| (format!("n{i}"), s))
            .collect(),
        mesh,
        own_history,
        source_history,
    )
}
