//! Experiment configuration: a flat JSON config file plus kebab-case CLI
//! flag mirrors. Flags override file values; both override the defaults
//! L = 300, N = 10^6, tau0 = 1000, seed = 0.

use crate::error::{Error, Result};
use serde_json::Value;
use std::path::PathBuf;

/// Which experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Bernoulli,
    SineBox,
    Noise,
    TransferEntropy,
    CausationEntropy,
    CmiCheck,
}

impl ExperimentKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "bernoulli" => Self::Bernoulli,
            "sinebox" => Self::SineBox,
            "noise" => Self::Noise,
            "te" => Self::TransferEntropy,
            "ce" => Self::CausationEntropy,
            "cmi-check" => Self::CmiCheck,
            other => {
                return Err(Error::Usage(format!(
                    "unknown experiment '{other}' (expected bernoulli, sinebox, noise, te, ce, cmi-check)"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Bernoulli => "bernoulli",
            Self::SineBox => "sinebox",
            Self::Noise => "noise",
            Self::TransferEntropy => "te",
            Self::CausationEntropy => "ce",
            Self::CmiCheck => "cmi-check",
        }
    }
}

/// Source-distribution grammar: `uniform`, `gaussian:MEAN,VARIANCE`, `acip`.
#[derive(Debug, Clone, PartialEq)]
pub enum DistSpec {
    Uniform,
    Gaussian { mean: f64, variance: f64 },
    Acip,
}

impl DistSpec {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "uniform" {
            return Ok(Self::Uniform);
        }
        if s == "acip" {
            return Ok(Self::Acip);
        }
        if let Some(rest) = s.strip_prefix("gaussian:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() == 2 {
                let mean = parse_f64("dist", parts[0])?;
                let variance = parse_f64("dist", parts[1])?;
                return Ok(Self::Gaussian { mean, variance });
            }
        }
        Err(Error::Usage(format!(
            "bad distribution '{s}' (expected uniform, gaussian:MEAN,VAR, acip)"
        )))
    }
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub delta_inv: usize,
    pub samples: usize,
    pub seed: u64,
    pub dist: DistSpec,
    pub d_range: (u32, u32),
    pub n_range: (u32, u32),
    pub epsilons: Vec<f64>,
    /// Optional per-amplitude mesh sizes for the noise sweep; must match
    /// the epsilon list in length when nonempty.
    pub l_list: Vec<usize>,
    pub tau0: usize,
    /// Initial state for trajectory-based sampling.
    pub x0: f64,
    pub out_dir: PathBuf,
    pub plot: bool,
}

/// Partial configuration prior to default resolution.
#[derive(Debug, Clone, Default)]
struct Partial {
    kind: Option<ExperimentKind>,
    delta_inv: Option<usize>,
    samples: Option<usize>,
    seed: Option<u64>,
    dist: Option<DistSpec>,
    d_range: Option<(u32, u32)>,
    n_range: Option<(u32, u32)>,
    epsilons: Option<Vec<f64>>,
    l_list: Option<Vec<usize>>,
    tau0: Option<usize>,
    x0: Option<f64>,
    out_dir: Option<PathBuf>,
    plot: Option<bool>,
}

const FILE_KEYS: &[&str] = &[
    "experiment",
    "delta_inv",
    "samples",
    "seed",
    "dist",
    "d_range",
    "n_range",
    "epsilon",
    "l_list",
    "tau0",
    "x0",
    "out",
    "plot",
];

fn parse_f64(key: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Usage(format!("malformed number for '{key}': '{s}'")))
}

fn parse_usize(key: &str, s: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Error::Usage(format!("malformed number for '{key}': '{s}'")))
}

fn parse_u64(key: &str, s: &str) -> Result<u64> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| Error::Usage(format!("malformed number for '{key}': '{s}'")))
}

fn parse_range(key: &str, s: &str) -> Result<(u32, u32)> {
    let parts: Vec<&str> = s.split("..").collect();
    if parts.len() == 2 {
        let lo = parts[0]
            .trim()
            .parse::<u32>()
            .map_err(|_| Error::Usage(format!("malformed number for '{key}': '{s}'")))?;
        let hi = parts[1]
            .trim()
            .parse::<u32>()
            .map_err(|_| Error::Usage(format!("malformed number for '{key}': '{s}'")))?;
        if lo > hi {
            return Err(Error::Usage(format!("empty range for '{key}': '{s}'")));
        }
        return Ok((lo, hi));
    }
    Err(Error::Usage(format!(
        "bad range for '{key}': '{s}' (expected LO..HI)"
    )))
}

fn parse_epsilons(key: &str, s: &str) -> Result<Vec<f64>> {
    let eps: Vec<f64> = s
        .split(',')
        .map(|p| parse_f64(key, p))
        .collect::<Result<_>>()?;
    if eps.is_empty() {
        return Err(Error::Usage(format!("empty list for '{key}'")));
    }
    Ok(eps)
}

fn json_u64(key: &str, v: &Value) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::Usage(format!("malformed number for '{key}': {v}")))
}

fn apply_file(partial: &mut Partial, text: &str) -> Result<()> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Usage(format!("config file is not valid JSON: {e}")))?;
    let map = value
        .as_object()
        .ok_or_else(|| Error::Usage("config file must hold a flat JSON object".into()))?;
    for (key, v) in map {
        match key.as_str() {
            "experiment" => {
                let s = v.as_str().ok_or_else(|| {
                    Error::Usage(format!("'experiment' must be a string, got {v}"))
                })?;
                partial.kind = Some(ExperimentKind::parse(s)?);
            }
            "delta_inv" => partial.delta_inv = Some(json_u64(key, v)? as usize),
            "samples" => partial.samples = Some(json_u64(key, v)? as usize),
            "seed" => partial.seed = Some(json_u64(key, v)?),
            "tau0" => partial.tau0 = Some(json_u64(key, v)? as usize),
            "x0" => {
                let x = v
                    .as_f64()
                    .ok_or_else(|| Error::Usage(format!("malformed number for 'x0': {v}")))?;
                partial.x0 = Some(x);
            }
            "dist" => {
                let s = v
                    .as_str()
                    .ok_or_else(|| Error::Usage(format!("'dist' must be a string, got {v}")))?;
                partial.dist = Some(DistSpec::parse(s)?);
            }
            "d_range" | "n_range" => {
                let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                    Error::Usage(format!("'{key}' must be a two-element array, got {v}"))
                })?;
                let lo = json_u64(key, &arr[0])? as u32;
                let hi = json_u64(key, &arr[1])? as u32;
                if lo > hi {
                    return Err(Error::Usage(format!("empty range for '{key}'")));
                }
                if key == "d_range" {
                    partial.d_range = Some((lo, hi));
                } else {
                    partial.n_range = Some((lo, hi));
                }
            }
            "epsilon" => {
                let arr = v
                    .as_array()
                    .ok_or_else(|| Error::Usage(format!("'epsilon' must be an array, got {v}")))?;
                let eps = arr
                    .iter()
                    .map(|e| {
                        e.as_f64().ok_or_else(|| {
                            Error::Usage(format!("malformed number for 'epsilon': {e}"))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                if eps.is_empty() {
                    return Err(Error::Usage("empty list for 'epsilon'".into()));
                }
                partial.epsilons = Some(eps);
            }
            "l_list" => {
                let arr = v
                    .as_array()
                    .ok_or_else(|| Error::Usage(format!("'l_list' must be an array, got {v}")))?;
                let ls = arr
                    .iter()
                    .map(|e| json_u64(key, e).map(|u| u as usize))
                    .collect::<Result<Vec<usize>>>()?;
                partial.l_list = Some(ls);
            }
            "out" => {
                let s = v
                    .as_str()
                    .ok_or_else(|| Error::Usage(format!("'out' must be a string, got {v}")))?;
                partial.out_dir = Some(PathBuf::from(s));
            }
            "plot" => {
                let b = v
                    .as_bool()
                    .ok_or_else(|| Error::Usage(format!("'plot' must be a boolean, got {v}")))?;
                partial.plot = Some(b);
            }
            other => {
                return Err(Error::Usage(format!(
                    "unknown config key '{other}' (valid keys: {})",
                    FILE_KEYS.join(", ")
                )))
            }
        }
    }
    Ok(())
}

const FLAG_HELP: &str = "--experiment, --config, --delta-inv, --samples, --seed, --dist, --d-range, --n-range, --epsilon, --l-list, --tau0, --x0, --out, --plot";

fn apply_flags(partial: &mut Partial, args: &[String]) -> Result<Option<PathBuf>> {
    let mut config_path = None;
    let mut it = args.iter().peekable();
    let take_value =
        |it: &mut std::iter::Peekable<std::slice::Iter<String>>, flag: &str| -> Result<String> {
            it.next()
                .cloned()
                .ok_or_else(|| Error::Usage(format!("flag '{flag}' needs a value")))
        };
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--config" => config_path = Some(PathBuf::from(take_value(&mut it, "--config")?)),
            "--experiment" => {
                partial.kind = Some(ExperimentKind::parse(&take_value(
                    &mut it,
                    "--experiment",
                )?)?)
            }
            "--delta-inv" => {
                partial.delta_inv = Some(parse_usize(
                    "delta-inv",
                    &take_value(&mut it, "--delta-inv")?,
                )?)
            }
            "--samples" => {
                partial.samples = Some(parse_usize("samples", &take_value(&mut it, "--samples")?)?)
            }
            "--seed" => partial.seed = Some(parse_u64("seed", &take_value(&mut it, "--seed")?)?),
            "--tau0" => partial.tau0 = Some(parse_usize("tau0", &take_value(&mut it, "--tau0")?)?),
            "--x0" => partial.x0 = Some(parse_f64("x0", &take_value(&mut it, "--x0")?)?),
            "--dist" => partial.dist = Some(DistSpec::parse(&take_value(&mut it, "--dist")?)?),
            "--d-range" => {
                partial.d_range = Some(parse_range("d-range", &take_value(&mut it, "--d-range")?)?)
            }
            "--n-range" => {
                partial.n_range = Some(parse_range("n-range", &take_value(&mut it, "--n-range")?)?)
            }
            "--epsilon" => {
                partial.epsilons = Some(parse_epsilons(
                    "epsilon",
                    &take_value(&mut it, "--epsilon")?,
                )?)
            }
            "--l-list" => {
                let raw = take_value(&mut it, "--l-list")?;
                let ls = raw
                    .split(',')
                    .map(|p| parse_usize("l-list", p))
                    .collect::<Result<Vec<usize>>>()?;
                partial.l_list = Some(ls);
            }
            "--out" => partial.out_dir = Some(PathBuf::from(take_value(&mut it, "--out")?)),
            "--plot" => partial.plot = Some(true),
            other => {
                return Err(Error::Usage(format!(
                    "unknown flag '{other}' (valid flags: {FLAG_HELP})"
                )))
            }
        }
    }
    Ok(config_path)
}

/// Parse a configuration from CLI arguments, reading `--config FILE` first
/// so that explicit flags override file values. The `INFOFLOW_OUT_DIR`
/// environment variable overrides the output directory when set.
pub fn parse_config(args: &[String]) -> Result<ExperimentConfig> {
    // First pass just to locate --config; flag values must win over file values.
    let mut probe = Partial::default();
    let config_path = apply_flags(&mut probe, args)?;

    let mut partial = Partial::default();
    if let Some(path) = &config_path {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
        apply_file(&mut partial, &text)?;
    }
    apply_flags(&mut partial, args)?;

    let kind = partial.kind.unwrap_or(ExperimentKind::Bernoulli);
    // te/ce joint tensors are cubic in the mesh, so their default mesh is
    // coarse; explicit --delta-inv always wins.
    let default_mesh = match kind {
        ExperimentKind::TransferEntropy => 8,
        ExperimentKind::CausationEntropy => 4,
        _ => 300,
    };
    let mut out_dir = partial.out_dir.unwrap_or_else(|| PathBuf::from("out"));
    if let Ok(env_dir) = std::env::var("INFOFLOW_OUT_DIR") {
        if !env_dir.is_empty() {
            out_dir = PathBuf::from(env_dir);
        }
    }
    let config = ExperimentConfig {
        kind,
        delta_inv: partial.delta_inv.unwrap_or(default_mesh),
        samples: partial.samples.unwrap_or(1_000_000),
        seed: partial.seed.unwrap_or(0),
        dist: partial.dist.unwrap_or(DistSpec::Uniform),
        d_range: partial.d_range.unwrap_or((2, 30)),
        n_range: partial.n_range.unwrap_or((1, 10)),
        epsilons: partial.epsilons.unwrap_or_else(|| vec![0.5, 0.1, 0.02]),
        l_list: partial.l_list.unwrap_or_default(),
        tau0: partial.tau0.unwrap_or(1000),
        x0: partial.x0.unwrap_or(0.5),
        out_dir,
        plot: partial.plot.unwrap_or(false),
    };
    if config.delta_inv == 0 || config.samples == 0 {
        return Err(Error::Usage("counts must be positive".into()));
    }
    if !(0.0..1.0).contains(&config.x0) {
        return Err(Error::Usage(format!(
            "x0 must lie in [0, 1), got {}",
            config.x0
        )));
    }
    if !config.l_list.is_empty() && config.l_list.len() != config.epsilons.len() {
        return Err(Error::Usage(format!(
            "l_list has {} entries but epsilon has {}",
            config.l_list.len(),
            config.epsilons.len()
        )));
    }
    if config.l_list.iter().any(|&l| l == 0) {
        return Err(Error::Usage("l_list entries must be positive".into()));
    }
    Ok(config)
}
