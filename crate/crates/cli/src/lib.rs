//! Reproduction harness: presets, runs, tables and comparison.

pub mod compare;
pub mod config;
pub mod run;
pub mod table;

/// Sizes the global rayon pool from `VARSPEC_THREADS` when set.
pub fn init_threads() -> Result<usize, String> {
    if let Ok(v) = std::env::var("VARSPEC_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| format!("VARSPEC_THREADS = `{v}` is not a thread count"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(rayon::current_num_threads())
}
