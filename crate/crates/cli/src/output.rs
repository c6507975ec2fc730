//! Run directory with atomic (temp + rename) file writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliError;

pub struct RunOutput {
    dir: PathBuf,
    run_name: String,
    written: Vec<PathBuf>,
}

impl RunOutput {
    pub fn create(dir: &Path, run_name: &str) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            run_name: run_name.to_string(),
            written: Vec::new(),
        })
    }

    pub fn path(&self, suffix: &str) -> PathBuf {
        self.dir.join(format!("{}.{suffix}", self.run_name))
    }

    /// Writes `<run>.<suffix>` atomically.
    pub fn write(&mut self, suffix: &str, contents: &str) -> Result<PathBuf, CliError> {
        let target = self.path(suffix);
        let tmp = self.dir.join(format!(".{}.{suffix}.tmp", self.run_name));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(contents.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &target)?;
        self.written.push(target.clone());
        Ok(target)
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }
}
