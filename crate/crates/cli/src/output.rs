//! Writes a run's artifacts so that either all of them appear or none do.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};
use crate::run::Artifact;

fn temp_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!(".{name}.partial-{}", std::process::id()))
}

fn write_one(path: &Path, contents: &str) -> std::io::Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(contents.as_bytes())?;
    file.sync_all()
}

/// Stages every artifact next to its destination, then renames them into place.
/// Returns the final paths.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::with_capacity(artifacts.len());
    let cleanup = |staged: &[(PathBuf, PathBuf)]| {
        for (tmp, _) in staged {
            let _ = fs::remove_file(tmp);
        }
    };
    for a in artifacts {
        let tmp = temp_path(dir, &a.file_name);
        if let Err(e) = write_one(&tmp, &a.contents) {
            let _ = fs::remove_file(&tmp);
            cleanup(&staged);
            return Err(CliError::io(tmp, e));
        }
        staged.push((tmp, dir.join(&a.file_name)));
    }
    for (k, (tmp, dest)) in staged.iter().enumerate() {
        if let Err(e) = fs::rename(tmp, dest) {
            // undo the renames already done so nothing from this run remains
            for (_, done) in &staged[..k] {
                let _ = fs::remove_file(done);
            }
            cleanup(&staged[k..]);
            return Err(CliError::io(dest, e));
        }
    }
    Ok(staged.into_iter().map(|(_, dest)| dest).collect())
}
