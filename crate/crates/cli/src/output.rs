//! Output directory handling: CSV and JSON artifacts plus a manifest.
//!
//! Everything except `timing.txt` is a pure function of the resolved config,
//! so replaying `config.json` reproduces the directory byte for byte.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use gup_jcm::constants;
use serde::Serialize;

use crate::config::{RunConfig, SCHEMA_VERSION};

pub const MANIFEST: &str = "manifest.json";
pub const CONFIG: &str = "config.json";
pub const TIMING: &str = "timing.txt";

#[derive(Debug, Serialize)]
struct FileEntry {
    name: String,
    bytes: u64,
}

#[derive(Debug, Serialize)]
struct Constants {
    hbar: f64,
    speed_of_light: f64,
    planck_mass: f64,
    planck_length: f64,
    gamma_conversion: f64,
    gamma0_electroweak_bound: f64,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    schema_version: u32,
    command: &'a str,
    versions: Versions,
    constants: Constants,
    config: &'a RunConfig,
    files: Vec<FileEntry>,
}

#[derive(Debug, Serialize)]
struct Versions {
    cli: &'static str,
    core: &'static str,
}

/// Collects the artifacts of one command run.
#[derive(Debug)]
pub struct Output {
    dir: PathBuf,
    files: Vec<FileEntry>,
}

impl Output {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(FileEntry {
            name: name.to_string(),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    /// One CSV row per item; the header comes from the row type's field names.
    pub fn csv<R: Serialize>(
        &mut self,
        name: &str,
        rows: impl IntoIterator<Item = R>,
    ) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in rows {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().context("flushing CSV")?;
        self.write(name, &bytes)
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value)? + "\n";
        self.write(name, text.as_bytes())
    }

    /// Write the resolved config, the manifest and the wall time.
    pub fn finish(mut self, command: &str, cfg: &RunConfig, elapsed: Duration) -> Result<PathBuf> {
        self.write(CONFIG, cfg.to_json()?.as_bytes())?;
        let files = std::mem::take(&mut self.files);
        let manifest = Manifest {
            schema_version: SCHEMA_VERSION,
            command,
            versions: Versions {
                cli: env!("CARGO_PKG_VERSION"),
                core: gup_jcm::VERSION,
            },
            constants: Constants {
                hbar: constants::HBAR,
                speed_of_light: constants::SPEED_OF_LIGHT,
                planck_mass: constants::PLANCK_MASS,
                planck_length: constants::PLANCK_LENGTH,
                gamma_conversion: constants::gamma_conversion(),
                gamma0_electroweak_bound: constants::GAMMA0_ELECTROWEAK_BOUND,
            },
            config: cfg,
            files,
        };
        self.write(
            MANIFEST,
            (serde_json::to_string_pretty(&manifest)? + "\n").as_bytes(),
        )?;
        let timing = format!(
            "command {command}\nwall_time_s {:.6}\n",
            elapsed.as_secs_f64()
        );
        fs::write(self.dir.join(TIMING), timing).context("writing timing.txt")?;
        Ok(self.dir)
    }
}
