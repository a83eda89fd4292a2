//! Spec files, run reports, the RK4 cross-check and the corpus runner behind
//! the `odeinv` binary.

pub mod report;
pub mod run;
pub mod spec;
pub mod verify;

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub use report::{NumericReport, Outcome, QueryResult, ReportContent, RunReport};
pub use run::{lie_chain, run, run_query};
pub use spec::{QuerySpec, System, SystemSpec, TemplateSpec};
pub use verify::{numeric_verify, verify_polynomials};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("spec syntax: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("spec syntax: {0}")]
    Json(#[from] serde_json::Error),
    #[error("spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Core(#[from] odeinv_core::Error),
}

impl CliError {
    /// Exit status for errors; verdicts use 0, 1 and 2.
    pub fn exit_code(&self) -> i32 {
        use odeinv_core::Error as E;
        match self {
            CliError::Core(E::ResourceCap { .. } | E::IterationCap(_)) => 4,
            CliError::Core(E::ModeViolation(_)) => 5,
            CliError::Core(E::Invariant(_)) => 6,
            _ => 3,
        }
    }
}

/// The bundled specs, sorted by file name.
pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn corpus_specs() -> Result<Vec<PathBuf>, CliError> {
    let dir = corpus_dir();
    let mut out: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| CliError::Io(dir.display().to_string(), e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    out.sort();
    Ok(out)
}

/// Runs several specs on worker threads. Data-only specs yield `None`.
pub fn run_many(paths: &[PathBuf], threads: usize) -> Vec<(PathBuf, Result<Option<RunReport>, CliError>)> {
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(paths.len()));
    std::thread::scope(|s| {
        for _ in 0..threads.clamp(1, paths.len().max(1)) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = paths.get(k) else { break };
                let r = SystemSpec::load(path).and_then(|spec| if spec.data_only { Ok(None) } else { run(&spec).map(Some) });
                results.lock().expect("results lock").push((k, r));
            });
        }
    });
    let mut results = results.into_inner().expect("results lock");
    results.sort_by_key(|(k, _)| *k);
    results.into_iter().map(|(k, r)| (paths[k].clone(), r)).collect()
}

/// Writes `text` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text).map_err(|e| CliError::Io(tmp.display().to_string(), e))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::Io(path.display().to_string(), e))
}
