//! Exit codes, per-run output directories and the run manifest.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_EMPTY_REGION: i32 = 3;
pub const EXIT_DOMINANCE: i32 = 4;
pub const EXIT_ORACLE: i32 = 5;
pub const EXIT_REFUSED: i32 = 6;
const EXIT_IO: i32 = 1;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Failure::new(EXIT_CONFIG, message)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_IO, format!("i/o: {e}"))
    }
}

pub type CliResult<T> = Result<T, Failure>;

/// FNV-1a, so default run directories are stable across builds.
pub fn fnv64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

#[derive(Debug, Clone, Serialize)]
pub struct WallClock {
    pub started_unix_ms: u128,
    pub elapsed_ms: u128,
}

/// Everything needed to reproduce the files of one run. Only `wall_clock` varies
/// between identical invocations.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub scenario: Value,
    pub strategies: Vec<String>,
    pub grid: String,
    pub dpc: String,
    pub masks: Vec<String>,
    pub parameters: Value,
    pub outputs: Vec<String>,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub wall_clock: WallClock,
}

/// One run's output directory and the files written into it.
pub struct RunDir {
    pub dir: PathBuf,
    outputs: Vec<String>,
    started: Instant,
    started_unix_ms: u128,
}

impl RunDir {
    /// Uses `out` when given, otherwise `ccifc-runs/<command>-<digest of key>`.
    pub fn create(out: Option<&Path>, command: &str, key: &Value) -> CliResult<RunDir> {
        let dir = match out {
            Some(p) => p.to_path_buf(),
            None => {
                let digest = fnv64(key.to_string().as_bytes());
                PathBuf::from("ccifc-runs").join(format!("{command}-{digest:016x}"))
            }
        };
        fs::create_dir_all(&dir)?;
        let started_unix_ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0);
        Ok(RunDir {
            dir,
            outputs: Vec::new(),
            started: Instant::now(),
            started_unix_ms,
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> CliResult<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, contents)?;
        if !self.outputs.iter().any(|o| o == name) {
            self.outputs.push(name.to_string());
        }
        Ok(path)
    }

    pub fn read(&self, name: &str) -> CliResult<String> {
        Ok(fs::read_to_string(self.dir.join(name))?)
    }

    /// Writes `manifest.json` listing every file written so far.
    #[allow(clippy::too_many_arguments)]
    pub fn finish(
        mut self,
        command: &str,
        scenario: Value,
        strategies: Vec<String>,
        grid: String,
        dpc: String,
        masks: Vec<String>,
        parameters: Value,
        seed: Option<u64>,
    ) -> CliResult<PathBuf> {
        let manifest = RunManifest {
            command: command.to_string(),
            scenario,
            strategies,
            grid,
            dpc,
            masks,
            parameters,
            outputs: self.outputs.clone(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock: WallClock {
                started_unix_ms: self.started_unix_ms,
                elapsed_ms: self.started.elapsed().as_millis(),
            },
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        self.write("manifest.json", &text)
    }
}
