//! Experiment orchestration: dispatch a parsed configuration, evaluate the
//! sweep (points run concurrently, rows ordered by sweep parameter), and
//! emit CSV plus optional SVG panels.

use crate::ambiguity::predict_mi;
use crate::config::{DistSpec, ExperimentConfig, ExperimentKind};
use crate::discretize::{joint_from_samples, Mesh};
use crate::dynamics::{
    generate_trajectory, sample_distribution, DensityEstimate, MapSpec, SourceDist,
};
use crate::error::Result;
use crate::flow::{
    bundle_network_series, causation_entropy, simulate_network, three_node_chain, transfer_entropy,
    two_node_unidirectional,
};
use crate::noise::{noise_experiment, NoiseSpec};
use crate::prob::{
    conditional_mutual_information, disintegrated_cmi, mutual_information, InfoValue,
};
use crate::report::{ExperimentReport, ReportMeta, ReportRow};
use crate::rng::{derive_seed, SplitMix64};
use rayon::prelude::*;
use std::path::PathBuf;
use std::time::Instant;

fn source_dist(dist: &DistSpec, map: &MapSpec) -> SourceDist {
    match dist {
        DistSpec::Uniform => SourceDist::Uniform,
        DistSpec::Gaussian { mean, variance } => SourceDist::TruncatedGaussian {
            mean: *mean,
            variance: *variance,
        },
        DistSpec::Acip => SourceDist::Acip(map.clone()),
    }
}

/// One sweep point of the map-discretization experiments: empirical MI of
/// (T(y), y) plus the ambiguity prediction from the y histogram.
fn sweep_point(
    map: &MapSpec,
    dist: &DistSpec,
    mesh: Mesh,
    samples: usize,
    tau0: usize,
    x0: f64,
    seed: u64,
) -> Result<ReportRow> {
    let (y, x): (Vec<f64>, Vec<f64>) = match dist {
        // The invariant-density case follows the trajectory itself, pairing
        // consecutive states (y_t, y_{t+1}).
        DistSpec::Acip => {
            let traj = generate_trajectory(map, x0, tau0, samples + 1)?;
            let y = traj.samples[..samples].to_vec();
            let x = traj.samples[1..].to_vec();
            (y, x)
        }
        _ => {
            let y = sample_distribution(&source_dist(dist, map), samples, seed)?;
            let x = crate::discretize::pairs_from_map(map, &y)?;
            (y, x)
        }
    };
    let joint = joint_from_samples(mesh, &x, &y)?;
    let empirical = mutual_information(&joint)?;
    let y_density = DensityEstimate::from_samples(mesh, &y)?;
    let prediction = predict_mi(map, &y_density, mesh)?;
    let mut row = ReportRow::new(String::new(), empirical, Some(prediction.predicted_mi));
    if prediction.clipped_weight > 0.0 {
        row = row.with_flag(format!("clipped-weight={:.3e}", prediction.clipped_weight));
    }
    Ok(row)
}

fn run_bernoulli(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let mesh = Mesh::new(config.delta_inv)?;
    let (lo, hi) = config.d_range;
    let ds: Vec<u32> = (lo.max(2)..=hi).collect();
    let mut rows: Vec<(u32, Result<ReportRow>)> = ds
        .par_iter()
        .map(|&d| {
            let map = MapSpec::Bernoulli(d);
            // The i.i.d. source distributions do not depend on d; keeping
            // one seed per sweep reuses the same draw noise across points.
            let seed = match config.dist {
                DistSpec::Acip => derive_seed(config.seed, d as u64),
                _ => config.seed,
            };
            let row = sweep_point(
                &map,
                &config.dist,
                mesh,
                config.samples,
                config.tau0,
                config.x0,
                seed,
            )
            .map(|mut r| {
                r.param = d.to_string();
                r
            });
            (d, row)
        })
        .collect();
    rows.sort_by_key(|(d, _)| *d);
    let mut report = ExperimentReport::new("discretized MI of expanding maps by rate");
    for (_, row) in rows {
        report.rows.push(row?);
    }
    Ok(report)
}

fn run_sinebox(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let mesh = Mesh::new(config.delta_inv)?;
    let (lo, hi) = config.n_range;
    let ns: Vec<u32> = (lo.max(1)..=hi).collect();
    let mut rows: Vec<(u32, Result<ReportRow>)> = ns
        .par_iter()
        .map(|&n| {
            let map = MapSpec::SineBox(n);
            let row = sweep_point(
                &map,
                &config.dist,
                mesh,
                config.samples,
                config.tau0,
                config.x0,
                config.seed,
            )
            .map(|mut r| {
                r.param = n.to_string();
                r
            });
            (n, row)
        })
        .collect();
    rows.sort_by_key(|(n, _)| *n);
    let mut report = ExperimentReport::new("discretized MI of sine box maps by frequency");
    for (_, row) in rows {
        report.rows.push(row?);
    }
    Ok(report)
}

/// The canonical blurred base maps compared at each amplitude.
type BaseMapCase = (&'static str, fn() -> MapSpec);
const NOISE_BASES: [BaseMapCase; 3] = [
    ("E2", || MapSpec::Bernoulli(2)),
    ("E10", || MapSpec::Bernoulli(10)),
    ("R0.37", || MapSpec::Rotation(0.37)),
];

fn run_noise(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("blurred-map MI against the amplitude law");
    for (i, &eps) in config.epsilons.iter().enumerate() {
        // An explicit per-amplitude mesh list wins over the global mesh, so
        // each amplitude can satisfy the band-resolution constraint.
        let cells = config.l_list.get(i).copied().unwrap_or(config.delta_inv);
        let mesh = Mesh::new(cells)?;
        for (label, base) in NOISE_BASES {
            let spec = NoiseSpec::new(eps, base())?;
            let sub = noise_experiment(&spec, mesh, config.samples, config.seed)?;
            let inner = &sub.rows[0];
            let mut row = ReportRow::new(
                format!("{label}:eps={eps}"),
                inner.empirical,
                inner.predicted,
            );
            for f in &inner.flags {
                row = row.with_flag(f.clone());
            }
            report.rows.push(row);
        }
    }
    Ok(report)
}

fn run_te(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let mesh = Mesh::new(config.delta_inv)?;
    let net = two_node_unidirectional();
    let series = simulate_network(&net, config.samples, config.tau0, config.seed)?;
    let bundle = bundle_network_series(series, mesh, 1, 1)?;
    let mut report = ExperimentReport::new("directional transfer entropy, two-node driver");
    for (param, src, tgt) in [("0->1", "n0", "n1"), ("1->0", "n1", "n0")] {
        let te = transfer_entropy(&bundle, src, tgt)?;
        report.rows.push(ReportRow::new(param, te, None));
    }
    Ok(report)
}

fn run_ce(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let mesh = Mesh::new(config.delta_inv)?;
    let net = three_node_chain();
    let series = simulate_network(&net, config.samples, config.tau0, config.seed)?;
    let bundle = bundle_network_series(series, mesh, 1, 1)?;
    let mut report = ExperimentReport::new("causation entropy over the three-node chain");
    type CeCase = (
        &'static str,
        &'static [usize],
        &'static [usize],
        &'static [usize],
    );
    let cases: [CeCase; 3] = [
        ("0->1|-", &[1], &[0], &[]),
        ("0->2|1", &[2], &[0], &[1]),
        ("1->2|-", &[2], &[1], &[]),
    ];
    for (param, i, j, k) in cases {
        let ce = causation_entropy(&bundle, i, j, k)?;
        report.rows.push(ReportRow::new(param, ce, None));
    }
    Ok(report)
}

fn run_cmi_check(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let trials = 1000;
    let dim = 4;
    let mut rng = SplitMix64::new(derive_seed(config.seed, 0xc41));
    let mut max_gap: f64 = 0.0;
    for _ in 0..trials {
        let joint = random_joint(&mut rng, (dim, dim, dim));
        let direct = conditional_mutual_information(&joint)?.expect_finite();
        let averaged = disintegrated_cmi(&joint)?.expect_finite();
        max_gap = max_gap.max((direct - averaged).abs());
    }
    let mut report = ExperimentReport::new("cMI equals the z-average of sliced MI");
    report.rows.push(ReportRow::new(
        format!("max-abs-gap over {trials} joints {dim}x{dim}x{dim}"),
        InfoValue::Finite(max_gap),
        Some(0.0),
    ));
    Ok(report)
}

/// Random joint with structural zeros, for self-check sweeps.
pub fn random_joint(rng: &mut SplitMix64, dims: (usize, usize, usize)) -> crate::prob::JointDist3 {
    let n = dims.0 * dims.1 * dims.2;
    let mut mass: Vec<f64> = (0..n)
        .map(|_| {
            let v = rng.uniform01();
            if v < 0.25 {
                0.0
            } else {
                v
            }
        })
        .collect();
    if mass.iter().all(|&v| v == 0.0) {
        mass[0] = 1.0;
    }
    let total = crate::prob::kahan_sum(mass.iter().copied());
    for v in &mut mass {
        *v /= total;
    }
    crate::prob::JointDist3::new(mass, dims).expect("normalized mass")
}

/// Run an experiment and write its artifacts. Returns the report and the
/// paths written.
pub fn run(config: &ExperimentConfig) -> Result<(ExperimentReport, Vec<PathBuf>)> {
    let started = Instant::now();
    let mut report = match config.kind {
        ExperimentKind::Bernoulli => run_bernoulli(config)?,
        ExperimentKind::SineBox => run_sinebox(config)?,
        ExperimentKind::Noise => run_noise(config)?,
        ExperimentKind::TransferEntropy => run_te(config)?,
        ExperimentKind::CausationEntropy => run_ce(config)?,
        ExperimentKind::CmiCheck => run_cmi_check(config)?,
    };
    report.meta = ReportMeta {
        seed: config.seed,
        samples: config.samples,
        mesh_cells: config.delta_inv,
        wall_ms: started.elapsed().as_millis(),
    };

    let mut written = Vec::new();
    let csv_path = config.out_dir.join(format!("{}.csv", config.kind.name()));
    report.write_csv(&csv_path)?;
    written.push(csv_path);
    if config.plot {
        let svg_path = config.out_dir.join(format!("{}.svg", config.kind.name()));
        report.write_svg(&svg_path)?;
        written.push(svg_path);
    }
    Ok((report, written))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn temp_out(tag: &str) -> String {
        let dir = std::env::temp_dir().join(format!("infoflow_runner_{tag}"));
        let _ = std::fs::remove_dir_all(&dir);
        dir.to_str().unwrap().to_string()
    }

    #[test]
    fn bernoulli_sweep_rows_and_reproducibility() {
        let out = temp_out("bern");
        let argv = args(&[
            "--experiment",
            "bernoulli",
            "--d-range",
            "2..6",
            "--samples",
            "50000",
            "--delta-inv",
            "60",
            "--seed",
            "3",
            "--out",
            &out,
        ]);
        let config = parse_config(&argv).unwrap();
        let (report, files) = run(&config).unwrap();
        assert_eq!(report.rows.len(), 5);
        let first = std::fs::read(&files[0]).unwrap();
        let (report2, _) = run(&config).unwrap();
        assert_eq!(report2.rows.len(), 5);
        let second = std::fs::read(&files[0]).unwrap();
        assert_eq!(
            first, second,
            "CSV must be byte-identical for a fixed config"
        );
    }

    #[test]
    fn sinebox_acip_smoke() {
        let out = temp_out("sine");
        let argv = args(&[
            "--experiment",
            "sinebox",
            "--n-range",
            "1..3",
            "--samples",
            "50000",
            "--delta-inv",
            "60",
            "--dist",
            "acip",
            "--out",
            &out,
        ]);
        let config = parse_config(&argv).unwrap();
        let (report, _) = run(&config).unwrap();
        assert_eq!(report.rows.len(), 3);
        for row in &report.rows {
            assert!(row.empirical.expect_finite() > 0.0);
        }
    }

    #[test]
    fn te_and_ce_reports() {
        let out = temp_out("tece");
        let config = parse_config(&args(&[
            "--experiment",
            "te",
            "--samples",
            "100000",
            "--out",
            &out,
        ]))
        .unwrap();
        let (report, _) = run(&config).unwrap();
        assert_eq!(report.rows.len(), 2);
        let forward = report.rows[0].empirical.expect_finite();
        let backward = report.rows[1].empirical.expect_finite();
        assert!(forward > backward);

        let config = parse_config(&args(&[
            "--experiment",
            "ce",
            "--samples",
            "100000",
            "--out",
            &out,
        ]))
        .unwrap();
        let (report, _) = run(&config).unwrap();
        assert_eq!(report.rows.len(), 3);
    }

    #[test]
    fn cmi_check_gap_is_tiny() {
        let out = temp_out("cmi");
        let config = parse_config(&args(&["--experiment", "cmi-check", "--out", &out])).unwrap();
        let (report, _) = run(&config).unwrap();
        assert!(report.rows[0].empirical.expect_finite() <= 1e-12);
    }

    #[test]
    fn plot_emits_svg() {
        let out = temp_out("plot");
        let config = parse_config(&args(&[
            "--experiment",
            "bernoulli",
            "--d-range",
            "2..4",
            "--samples",
            "20000",
            "--delta-inv",
            "40",
            "--plot",
            "--out",
            &out,
        ]))
        .unwrap();
        let (_, files) = run(&config).unwrap();
        assert_eq!(files.len(), 2);
        assert!(files[1].extension().unwrap() == "svg");
        assert!(std::fs::read_to_string(&files[1])
            .unwrap()
            .contains("</svg>"));
    }
}
