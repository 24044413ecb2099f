use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::config::Config;
use super::CliError;
use crate::spectral::CutoffProfile;

/// Hex SHA-256 of the cutoff and partition profile parameters.
pub fn profile_hash() -> String {
    let digest = Sha256::digest(CutoffProfile.describe().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Output directory of one run.
#[derive(Debug, Clone)]
pub struct RunDir {
    root: PathBuf,
}

impl RunDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(crate::Error::from)?;
        Ok(Self {
            root: root.to_path_buf(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn file(&self, name: &str) -> Result<BufWriter<File>, CliError> {
        Ok(BufWriter::new(File::create(self.path(name)).map_err(crate::Error::from)?))
    }

    /// Writes `manifest.txt`; it is itself a valid configuration file for
    /// the same subcommand.
    pub fn write_manifest(&self, command: &str, config: &Config, threads: usize) -> Result<(), CliError> {
        let mut f = self.file("manifest.txt")?;
        let text = format!(
            "# command = {command}\n# version = {}\n# profile_sha256 = {}\n# threads = {threads}\n{}",
            env!("CARGO_PKG_VERSION"),
            profile_hash(),
            config.render()
        );
        f.write_all(text.as_bytes()).map_err(crate::Error::from)?;
        f.flush().map_err(crate::Error::from)?;
        Ok(())
    }
}

/// One failed check in a machine-readable report.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub check: String,
    pub detail: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Failure {
    pub fn new(check: &str, detail: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            check: check.to_string(),
            detail: detail.into(),
            value,
            tolerance,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "FAIL check={} detail={} value={} tolerance={}",
            self.check, self.detail, self.value, self.tolerance
        )
    }
}

/// Writes `failures.csv` when any check failed.
pub fn write_failures(dir: &RunDir, failures: &[Failure]) -> Result<(), CliError> {
    let mut f = dir.file("failures.csv")?;
    writeln!(f, "# schema=1").map_err(crate::Error::from)?;
    let mut w = csv::Writer::from_writer(f);
    w.write_record(["check", "detail", "value", "tolerance"])
        .map_err(crate::Error::from)?;
    for x in failures {
        w.write_record([
            x.check.clone(),
            x.detail.clone(),
            x.value.to_string(),
            x.tolerance.to_string(),
        ])
        .map_err(crate::Error::from)?;
    }
    w.flush().map_err(crate::Error::from)?;
    Ok(())
}
