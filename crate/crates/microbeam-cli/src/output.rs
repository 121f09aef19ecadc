//! Output sinks: stdout or a file path from the run configuration.

use crate::config::RunConfig;
use anyhow::{Context, Result};
use serde::Serialize;
use std::path::PathBuf;

pub enum Sink {
    Stdout,
    File(PathBuf),
}

impl Sink {
    pub fn stdout() -> Self {
        Sink::Stdout
    }

    pub fn from_config(cfg: &RunConfig) -> Self {
        match &cfg.output_path {
            Some(p) => Sink::File(p.clone()),
            None => Sink::Stdout,
        }
    }
}

pub fn write_text(sink: &Sink, text: &str) -> Result<()> {
    match sink {
        Sink::Stdout => {
            print!("{text}");
            Ok(())
        }
        Sink::File(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
    }
}

/// Canonical JSON rendering: pretty, stable field order, trailing newline.
/// Identical config + seed therefore yields byte-identical output.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
