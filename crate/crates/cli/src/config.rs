use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qgraph_core::{Error as CoreError, Params};

pub const DEFAULT_K1: &str = "3/2";
pub const DEFAULT_K2: &str = "5/7";
pub const DEFAULT_C: &str = "2";
pub const DEFAULT_H: f64 = 1e-4;
pub const DEFAULT_SAMPLES: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Tsv,
    Pretty,
}

#[derive(Clone, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Dump the generators of a subbasis as coefficient TSV.
    Basis {
        /// smooth-symmetric, smooth-antisymmetric, nonsmooth-symmetric,
        /// nonsmooth-antisymmetric, cbas or dbas.
        #[arg(long)]
        kind: Option<String>,
    },
    /// List the three explicit solution families with their counts.
    Families,
    /// Kernel basis of the diagonal constraints over CBas ∪ DBas.
    Enumerate,
    /// Run every certificate.
    Certify,
    /// Residuals of every condition for the family members, or for the
    /// wave read from a coefficient TSV file.
    Check {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Defects of the continuous non-smooth vectors and the range analysis.
    Defects,
    /// Floating-point oracle: eigen-residual convergence order and sampled
    /// boundary conditions.
    NumericCheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Basis { .. } => "basis",
            Command::Families => "families",
            Command::Enumerate => "enumerate",
            Command::Certify => "certify",
            Command::Check { .. } => "check",
            Command::Defects => "defects",
            Command::NumericCheck => "numeric-check",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Basis { .. } | Command::Enumerate => Format::Tsv,
            _ => Format::Json,
        }
    }

    fn allows_range(&self) -> bool {
        !matches!(
            self,
            Command::Basis { .. } | Command::Enumerate | Command::Check { .. }
        )
    }

    fn allows_tsv(&self) -> bool {
        matches!(self, Command::Basis { .. } | Command::Enumerate)
    }
}

/// Flags shared by every subcommand. Each one overrides the config file.
#[derive(Clone, Debug, Default, Args)]
pub struct Flags {
    /// Number of edges of the star graph.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Inclusive range of graph sizes, e.g. `2..8`.
    #[arg(long, global = true)]
    pub n_range: Option<String>,
    /// First momentum, as `p/q`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k1: Option<String>,
    /// Second momentum, as `p/q`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k2: Option<String>,
    /// Coupling strength, as `p/q`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML file whose keys mirror these flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Step for the second-order one-sided differences of the sampled
    /// boundary checks.
    #[arg(long, global = true)]
    pub h: Option<f64>,
    /// Sample points per boundary for the sampled checks.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    n: Option<usize>,
    n_range: Option<String>,
    k1: Option<String>,
    k2: Option<String>,
    c: Option<String>,
    format: Option<Format>,
    h: Option<f64>,
    samples: Option<usize>,
}

fn read_file_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
}

/// Effective configuration after merging defaults, file and flags.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub n: Vec<usize>,
    pub k1: String,
    pub k2: String,
    pub c: String,
    pub format: Format,
    pub h: f64,
    pub samples: usize,
    #[serde(skip)]
    pub cmd: Command,
}

/// Invalid parameters; the process exits with status 2.
#[derive(Debug)]
pub struct InvalidParams(pub String);

impl std::fmt::Display for InvalidParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidParams {}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    InvalidParams(msg.into()).into()
}

pub fn parse_range(s: &str) -> Result<Vec<usize>> {
    let (lo, hi) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| invalid(format!("n-range must look like 2..8, got {s:?}")))?;
    let lo: usize = lo
        .trim()
        .parse()
        .map_err(|_| invalid(format!("bad n-range start in {s:?}")))?;
    let hi: usize = hi
        .trim()
        .parse()
        .map_err(|_| invalid(format!("bad n-range end in {s:?}")))?;
    if lo > hi {
        bail!(invalid(format!("empty n-range {s:?}")));
    }
    Ok((lo..=hi).collect())
}

impl RunConfig {
    pub fn resolve(cmd: Command, flags: &Flags) -> Result<Self> {
        let file = match &flags.config {
            Some(path) => read_file_config(path).map_err(|e| invalid(format!("{e:#}")))?,
            None => FileConfig::default(),
        };
        let n_single = flags.n.or(if flags.n_range.is_some() {
            None
        } else {
            file.n
        });
        let n_range = flags.n_range.clone().or(if flags.n.is_some() {
            None
        } else {
            file.n_range.clone()
        });
        let n = match (n_single, n_range) {
            (Some(_), Some(_)) => bail!(invalid("give either --n or --n-range, not both")),
            (Some(n), None) => vec![n],
            (None, Some(r)) => parse_range(&r)?,
            (None, None) => bail!(invalid("missing --n (or --n-range)")),
        };
        if n.len() > 1 && !cmd.allows_range() {
            bail!(invalid(format!("{} takes a single --n", cmd.name())));
        }
        let format = flags
            .format
            .or(file.format)
            .unwrap_or_else(|| cmd.default_format());
        if format == Format::Tsv && !cmd.allows_tsv() {
            bail!(invalid(format!(
                "tsv output is only for coefficient dumps (basis, enumerate), not {}",
                cmd.name()
            )));
        }
        let h = flags.h.or(file.h).unwrap_or(DEFAULT_H);
        if !(h > 0.0 && h.is_finite()) {
            bail!(invalid(format!("h must be positive, got {h}")));
        }
        let samples = flags.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            bail!(invalid("samples must be at least 1"));
        }
        let pick = |flag: &Option<String>, file: &Option<String>, default: &str| {
            flag.clone()
                .or_else(|| file.clone())
                .unwrap_or_else(|| default.to_string())
        };
        let cfg = RunConfig {
            command: cmd.name().to_string(),
            n,
            k1: pick(&flags.k1, &file.k1, DEFAULT_K1),
            k2: pick(&flags.k2, &file.k2, DEFAULT_K2),
            c: pick(&flags.c, &file.c, DEFAULT_C),
            format,
            h,
            samples,
            cmd,
        };
        // Validate every parameter set before any computation.
        for &n in &cfg.n {
            cfg.params(n)?;
        }
        Ok(cfg)
    }

    pub fn params(&self, n: usize) -> Result<Arc<Params>> {
        Params::parse(n, &self.k1, &self.k2, &self.c).map_err(|e: CoreError| invalid(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(n: Option<usize>) -> Flags {
        Flags {
            n,
            ..Flags::default()
        }
    }

    #[test]
    fn defaults_apply() {
        let cfg = RunConfig::resolve(Command::Certify, &flags(Some(3))).unwrap();
        assert_eq!(
            (cfg.k1.as_str(), cfg.k2.as_str(), cfg.c.as_str()),
            ("3/2", "5/7", "2")
        );
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.n, vec![3]);
        let cfg = RunConfig::resolve(Command::Enumerate, &flags(Some(3))).unwrap();
        assert_eq!(cfg.format, Format::Tsv);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..8").unwrap(), (2..=8).collect::<Vec<_>>());
        assert_eq!(parse_range("3..=4").unwrap(), vec![3, 4]);
        assert!(parse_range("5..3").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn invariant_violations_are_invalid_params() {
        let mut f = flags(Some(3));
        f.k1 = Some("1".into());
        f.k2 = Some("-1".into());
        let err = RunConfig::resolve(Command::Certify, &f).unwrap_err();
        assert!(err.downcast_ref::<InvalidParams>().is_some());
        assert!(err
            .to_string()
            .contains("momenta must differ in absolute value"));

        let err = RunConfig::resolve(Command::Certify, &flags(Some(1))).unwrap_err();
        assert!(err.downcast_ref::<InvalidParams>().is_some());

        let mut f = flags(Some(3));
        f.format = Some(Format::Tsv);
        assert!(RunConfig::resolve(Command::Certify, &f).is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("qgraph-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "n = 4\nk1 = \"7/3\"\nk2 = \"1/2\"\nc = \"-5/4\"\n").unwrap();
        let mut f = Flags {
            config: Some(path.clone()),
            ..Flags::default()
        };
        let cfg = RunConfig::resolve(Command::Certify, &f).unwrap();
        assert_eq!(cfg.n, vec![4]);
        assert_eq!(cfg.c, "-5/4");
        f.c = Some("3".into());
        f.n = Some(5);
        let cfg = RunConfig::resolve(Command::Certify, &f).unwrap();
        assert_eq!(cfg.n, vec![5]);
        assert_eq!(cfg.c, "3");
        assert_eq!(cfg.k1, "7/3");
        std::fs::remove_dir_all(dir).ok();
    }
}
