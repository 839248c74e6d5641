use std::fmt;
use std::fs;
use std::path::Path;

use ipr_core::coloring::Coloring;
use ipr_core::{FinMatrix, IprError};
use serde::de::DeserializeOwned;

pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_IO: u8 = 74;

/// A failure that ends the process with `code`.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Failure { code: EXIT_DATA, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Bad flag values are usage errors; everything else came from input data.
impl From<IprError> for Failure {
    fn from(e: IprError) -> Self {
        match e {
            IprError::InvalidArgument(_) => Failure::usage(e.to_string()),
            _ => Failure::data(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

pub fn json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

pub fn matrix(path: &Path) -> Result<FinMatrix, Failure> {
    FinMatrix::from_json(&read(path)?)
        .map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

pub fn coloring(path: &Path) -> Result<Coloring, Failure> {
    json(path)
}

pub fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) })
}
