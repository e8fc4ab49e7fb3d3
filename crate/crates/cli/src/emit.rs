//! Writing command results to stdout or an output directory.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct Output {
    /// Directory for artifacts; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Artifact format; each command has its own default
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// One result in whichever renderings the command supports.
#[derive(Default)]
pub struct Artifact {
    pub csv: Option<String>,
    pub json: Option<String>,
    pub svg: Option<String>,
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Spec(format!("cannot create {}: {e}", dir.display())))
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Spec(format!("cannot write {}: {e}", path.display())))
}

/// Print to stdout; a closed pipe (`| head`) is not an error.
pub fn print_out(text: &str) -> Result<(), CliError> {
    let mut o = io::stdout().lock();
    match o.write_all(text.as_bytes()).and_then(|_| o.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Spec(format!("cannot write to stdout: {e}"))),
        _ => Ok(()),
    }
}

impl Output {
    pub fn emit(&self, stem: &str, default: Format, a: Artifact) -> Result<(), CliError> {
        let fmt = self.format.unwrap_or(default);
        let text = match fmt {
            Format::Csv => a.csv,
            Format::Json => a.json,
            Format::Svg => a.svg,
        }
        .ok_or_else(|| CliError::Spec(format!("{stem} has no {} output", fmt.ext())))?;
        match &self.out {
            None => print_out(&text)?,
            Some(dir) => {
                ensure_dir(dir)?;
                let path = dir.join(format!("{stem}.{}", fmt.ext()));
                write_file(&path, &text)?;
                print_out(&format!("{}\n", path.display()))?;
            }
        }
        Ok(())
    }
}
