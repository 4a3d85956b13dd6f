pub mod calibrate;
pub mod figures;
pub mod power;
pub mod simulate;
pub mod test;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use gofsim::mc::CalibrationTable;

use crate::{CliError, Common};

/// Runs `f` on a pool with the requested number of threads.
pub fn with_threads(common: &Common, f: impl FnOnce() -> Result<(), CliError> + Send) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.threads)
        .build()
        .map_err(|e| CliError::config(format!("cannot start {} threads: {e}", common.threads)))?;
    pool.install(f)
}

pub fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::config(format!("cannot create {}: {e}", dir.display())))
}

/// Writes through `f` into `path`, reporting the file on stderr.
pub fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> gofsim::Result<()>) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.flush()
        .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

pub fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::config(format!("cannot open {}: {e}", path.display())))
}

/// Reads a calibration table; a missing flag means no calibration.
pub fn load_table(path: Option<&Path>, why: &str) -> Result<CalibrationTable, CliError> {
    match path {
        Some(p) => Ok(gofsim::io::read_calibration(open(p)?)?),
        None => Err(CliError::calibration(format!(
            "{why} needs thresholds; pass --table FILE from `gofsim calibrate`"
        ))),
    }
}
