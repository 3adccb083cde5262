//! System and run parameters shared by every subcommand.
//!
//! Values come from flags and, optionally, a flat `key=value` file whose keys
//! are the flag names without the leading dashes. Flags win over the file.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use nomasec_core::{db_to_linear, Mode, SystemConfig};

use crate::error::{CliError, Result};

pub const DEFAULT_ITERS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_QUAD_N: usize = 200;

pub fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    match s {
        "with-eve" => Ok(Mode::WithExternalEve),
        "no-eve" => Ok(Mode::NoExternalEve),
        other => Err(format!(
            "unknown mode {other:?}; expected with-eve or no-eve"
        )),
    }
}

#[derive(Args, Debug, Clone, Default, PartialEq)]
pub struct Params {
    /// BS transmit SNR in dB
    #[arg(long)]
    pub pbs_db: Option<f64>,
    /// Near-user power share a_m^2; the far user gets 1 - a_m^2
    #[arg(long)]
    pub am2: Option<f64>,
    /// Far-user target rate, bits/s/Hz
    #[arg(long)]
    pub rn: Option<f64>,
    /// Near-user target rate, bits/s/Hz
    #[arg(long)]
    pub rm: Option<f64>,
    /// Distance to the near user
    #[arg(long)]
    pub dm: Option<f64>,
    /// Distance to the far user
    #[arg(long)]
    pub dn: Option<f64>,
    /// Distance to the external eavesdropper
    #[arg(long)]
    pub de: Option<f64>,
    /// Fading rate parameter
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Path-loss exponent
    #[arg(long)]
    pub alpha: Option<f64>,
    /// with-eve or no-eve
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    /// Monte-Carlo draws per estimate [default: 100000]
    #[arg(long)]
    pub iters: Option<u64>,
    /// Monte-Carlo seed [default: 42]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Gauss-Chebyshev order for the with-eve SOP [default: 200]
    #[arg(long)]
    pub quad_n: Option<usize>,
    /// Read parameters from a key=value file; flags take precedence
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

impl Params {
    /// Fills unset fields from the `--config` file, if one was given.
    pub fn resolve(self) -> Result<Params> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = fs::read_to_string(&path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        let file = Params::from_file_text(&text, &path)?;
        Ok(self.or(file))
    }

    /// Parses `key=value` lines; blank lines and `#` comments are skipped.
    pub fn from_file_text(text: &str, path: &Path) -> Result<Params> {
        let mut p = Params::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| CliError::ConfigFile {
                path: path.to_path_buf(),
                line: idx + 1,
                msg,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let real = || value.parse::<f64>().map_err(|e| err(format!("{key}: {e}")));
            let int = || value.parse::<u64>().map_err(|e| err(format!("{key}: {e}")));
            match key {
                "pbs-db" => p.pbs_db = Some(real()?),
                "am2" => p.am2 = Some(real()?),
                "rn" => p.rn = Some(real()?),
                "rm" => p.rm = Some(real()?),
                "dm" => p.dm = Some(real()?),
                "dn" => p.dn = Some(real()?),
                "de" => p.de = Some(real()?),
                "lambda" => p.lambda = Some(real()?),
                "alpha" => p.alpha = Some(real()?),
                "mode" => p.mode = Some(parse_mode(value).map_err(err)?),
                "iters" => p.iters = Some(int()?),
                "seed" => p.seed = Some(int()?),
                "quad-n" => {
                    let n = usize::try_from(int()?).map_err(|e| err(format!("{key}: {e}")))?;
                    p.quad_n = Some(n);
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        Ok(p)
    }

    /// Field-wise `self` if set, otherwise `fallback`.
    pub fn or(self, fallback: Params) -> Params {
        Params {
            pbs_db: self.pbs_db.or(fallback.pbs_db),
            am2: self.am2.or(fallback.am2),
            rn: self.rn.or(fallback.rn),
            rm: self.rm.or(fallback.rm),
            dm: self.dm.or(fallback.dm),
            dn: self.dn.or(fallback.dn),
            de: self.de.or(fallback.de),
            lambda: self.lambda.or(fallback.lambda),
            alpha: self.alpha.or(fallback.alpha),
            mode: self.mode.or(fallback.mode),
            iters: self.iters.or(fallback.iters),
            seed: self.seed.or(fallback.seed),
            quad_n: self.quad_n.or(fallback.quad_n),
            config: self.config.or(fallback.config),
        }
    }

    /// Overlays the set fields onto `base`. dB is converted to linear here.
    pub fn apply(&self, mut base: SystemConfig) -> SystemConfig {
        if let Some(db) = self.pbs_db {
            base.p_bs = db_to_linear(db);
        }
        if let Some(a) = self.am2 {
            base = base.with_near_allocation(a);
        }
        let fields = [
            (self.rn, &mut base.r_n),
            (self.rm, &mut base.r_m),
            (self.dm, &mut base.d_m),
            (self.dn, &mut base.d_n),
            (self.de, &mut base.d_e),
            (self.lambda, &mut base.lambda),
            (self.alpha, &mut base.alpha),
        ];
        for (value, slot) in fields {
            if let Some(v) = value {
                *slot = v;
            }
        }
        if let Some(m) = self.mode {
            base.mode = m;
        }
        base
    }

    pub fn iters(&self) -> u64 {
        self.iters.unwrap_or(DEFAULT_ITERS)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn quad_n(&self) -> usize {
        self.quad_n.unwrap_or(DEFAULT_QUAD_N)
    }
}
