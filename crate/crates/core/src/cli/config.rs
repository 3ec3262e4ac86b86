//! Run configuration: command-line flags layered over an optional JSON file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::grid::parse_values;
use super::CliError;

/// A list of values, either as a spec string (`"0:1:11"`, `"70,90"`) or a JSON array.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ValuesSpec {
    Text(String),
    List(Vec<f64>),
}

impl ValuesSpec {
    pub fn resolve(&self) -> Result<Vec<f64>, CliError> {
        match self {
            ValuesSpec::Text(t) => parse_values(t).map_err(CliError::from),
            ValuesSpec::List(v) => {
                let joined: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                parse_values(&joined.join(",")).map_err(CliError::from)
            }
        }
    }
}

/// Every key is optional; flags given on the command line win.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub struct FileConfig {
    pub n: Option<u32>,
    pub e_gap: Option<f64>,
    pub beta: Option<ValuesSpec>,
    pub lambda_grid: Option<ValuesSpec>,
    pub lambda: Option<ValuesSpec>,
    pub method: Option<Method>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub threshold: Option<f64>,
    pub grid_points: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    All,
    Analytic,
    Peaks,
    Jumps,
    Ceq,
}

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n_particles: u32,
    pub e_gap: f64,
    pub beta: Option<Vec<f64>>,
    pub lambda: Option<Vec<f64>>,
    pub method: Method,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threshold: Option<f64>,
    pub grid_points: Option<usize>,
}

/// Raw flag values shared by every subcommand.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct CommonArgs {
    /// Number of particles N (multiplet J = N/2)
    #[arg(long = "n")]
    pub n: Option<u32>,

    /// Level splitting E
    #[arg(long = "e-gap")]
    pub e_gap: Option<f64>,

    /// Inverse temperatures: comma list or start:stop:count
    #[arg(long)]
    pub beta: Option<String>,

    /// Coupling grid start:stop:count (inclusive), or a comma list
    #[arg(long = "lambda-grid")]
    pub lambda_grid: Option<String>,

    /// Explicit coupling values, comma separated
    #[arg(long)]
    pub lambda: Option<String>,

    #[arg(long, value_enum)]
    pub method: Option<Method>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// JSON config file; flags override its keys
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Jump threshold for zero-temperature slope discontinuities
    #[arg(long)]
    pub threshold: Option<f64>,

    /// Grid density for peak and jump scans
    #[arg(long = "grid-points")]
    pub grid_points: Option<usize>,
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let flag = |s: &Option<String>| s.as_ref().map(|t| ValuesSpec::Text(t.clone()));

        let n_particles = self
            .n
            .or(file.n)
            .ok_or_else(|| CliError::Usage("--n is required".into()))?;
        if n_particles == 0 {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        let e_gap = self.e_gap.or(file.e_gap).unwrap_or(1.0);
        if !(e_gap > 0.0 && e_gap.is_finite()) {
            return Err(CliError::Usage(format!("--e-gap must be positive, got {e_gap}")));
        }

        let beta = flag(&self.beta).or(file.beta).map(|v| v.resolve()).transpose()?;
        if let Some(b) = &beta {
            if b.iter().any(|&x| x < 0.0) {
                return Err(CliError::Usage("--beta values must be non-negative".into()));
            }
        }

        let grid = flag(&self.lambda_grid).or(file.lambda_grid);
        let list = flag(&self.lambda).or(file.lambda);
        let lambda = match (grid, list) {
            (Some(_), Some(_)) if self.lambda_grid.is_some() == self.lambda.is_some() => {
                return Err(CliError::Usage(
                    "give either --lambda-grid or --lambda, not both".into(),
                ))
            }
            // a flag overrides the other key coming from the config file
            (Some(g), Some(_)) if self.lambda_grid.is_some() => Some(g.resolve()?),
            (Some(_), Some(l)) => Some(l.resolve()?),
            (Some(g), None) => Some(g.resolve()?),
            (None, Some(l)) => Some(l.resolve()?),
            (None, None) => None,
        };
        if let Some(l) = &lambda {
            if l.iter().any(|&x| x < 0.0) {
                return Err(CliError::Usage("coupling values must be non-negative".into()));
            }
        }

        let threshold = self.threshold.or(file.threshold);
        if let Some(t) = threshold {
            if t.is_nan() || t <= 0.0 {
                return Err(CliError::Usage("--threshold must be positive".into()));
            }
        }

        Ok(RunConfig {
            n_particles,
            e_gap,
            beta,
            lambda,
            method: self.method.or(file.method).unwrap_or(Method::All),
            format: self.format.or(file.format).unwrap_or(Format::Csv),
            out: self.out.clone().or(file.out),
            threshold,
            grid_points: self.grid_points.or(file.grid_points),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn flags_override_config_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(
            f,
            r#"{{"n": 8, "e_gap": 2.0, "beta": [70, 90], "lambda_grid": "0:1:5", "format": "json"}}"#
        )
        .unwrap();
        let args = CommonArgs {
            n: Some(4),
            beta: Some("110".into()),
            config: Some(f.path().to_path_buf()),
            ..Default::default()
        };
        let cfg = args.resolve().unwrap();
        assert_eq!(cfg.n_particles, 4);
        assert_eq!(cfg.e_gap, 2.0);
        assert_eq!(cfg.beta, Some(vec![110.0]));
        assert_eq!(cfg.lambda, Some(vec![0.0, 0.25, 0.5, 0.75, 1.0]));
        assert_eq!(cfg.format, Format::Json);

        let args = CommonArgs {
            lambda: Some("0.1,0.2".into()),
            config: Some(f.path().to_path_buf()),
            ..Default::default()
        };
        assert_eq!(args.resolve().unwrap().lambda, Some(vec![0.1, 0.2]));
    }

    #[test]
    fn validation_errors() {
        let base = CommonArgs::default();
        assert!(matches!(base.resolve(), Err(CliError::Usage(_))));
        let zero = CommonArgs { n: Some(0), ..Default::default() };
        assert!(matches!(zero.resolve(), Err(CliError::Usage(_))));
        let both = CommonArgs {
            n: Some(2),
            lambda: Some("0.1".into()),
            lambda_grid: Some("0:1:3".into()),
            ..Default::default()
        };
        assert!(both.resolve().is_err());
        let neg = CommonArgs { n: Some(2), beta: Some("-1,2".into()), ..Default::default() };
        assert!(neg.resolve().is_err());
    }

    #[test]
    fn unknown_config_keys_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, r#"{{"n": 2, "bogus": 1}}"#).unwrap();
        let args = CommonArgs { config: Some(f.path().to_path_buf()), ..Default::default() };
        assert!(matches!(args.resolve(), Err(CliError::Usage(_))));
    }
}
