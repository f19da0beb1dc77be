//! Configuration, verification suites and JSON reports for the `offshell`
//! command-line tool.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{parse_config, ConfigError, RunConfig};
pub use report::{run_suite, Report};
pub use suites::Suite;

/// Runs `f` on a dedicated pool of `threads` workers (rayon's default when
/// `None`).
pub fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, String> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    let pool = b.build().map_err(|e| e.to_string())?;
    Ok(pool.install(f))
}
