//! Channels described as JSON:
//! `{"name": str, "dim": int, "operators": [[[ [re, im], ... ] per row ] per operator]}`.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use qdiscrim_core::channels::{KrausChannel, Validation};
use qdiscrim_core::matrix::ComplexMatrix;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub name: String,
    pub dim: usize,
    pub operators: Vec<Vec<Vec<[f64; 2]>>>,
}

impl ChannelFile {
    pub fn from_channel(channel: &KrausChannel) -> Self {
        let d = channel.dim();
        let operators = channel
            .operators()
            .iter()
            .map(|a| {
                (0..d)
                    .map(|r| (0..d).map(|c| [a[(r, c)].re, a[(r, c)].im]).collect())
                    .collect()
            })
            .collect();
        Self {
            name: channel.name().to_string(),
            dim: d,
            operators,
        }
    }

    /// Checks shapes only; completeness is left to the caller.
    pub fn to_channel_unchecked(&self) -> Result<KrausChannel, String> {
        if self.operators.is_empty() {
            return Err("no operators".into());
        }
        let d = self.dim;
        let mut ops = Vec::with_capacity(self.operators.len());
        for (k, op) in self.operators.iter().enumerate() {
            if op.len() != d || op.iter().any(|row| row.len() != d) {
                return Err(format!("operator {k} is not {d}x{d}"));
            }
            let data = op
                .iter()
                .flatten()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect();
            ops.push(ComplexMatrix::new(d, d, data).map_err(|e| e.to_string())?);
        }
        KrausChannel::unchecked(self.name.clone(), ops).map_err(|e| e.to_string())
    }
}

fn input_error(path: &Path, reason: impl Into<String>) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

/// Reads a channel file and reports its completeness residual without rejecting.
pub fn read_unchecked(path: &Path) -> Result<(KrausChannel, Validation), CliError> {
    let text = fs::read_to_string(path).map_err(|e| input_error(path, e.to_string()))?;
    let file: ChannelFile =
        serde_json::from_str(&text).map_err(|e| input_error(path, e.to_string()))?;
    let channel = file
        .to_channel_unchecked()
        .map_err(|reason| input_error(path, reason))?;
    let v = channel.validate();
    Ok((channel, v))
}

/// Reads a channel file, rejecting it when `sum A^H A` misses the identity by
/// more than the completeness tolerance.
pub fn load(path: &Path) -> Result<KrausChannel, CliError> {
    let (channel, v) = read_unchecked(path)?;
    if !v.passed {
        return Err(input_error(
            path,
            format!("completeness residual {:e} exceeds tolerance", v.residual),
        ));
    }
    Ok(channel)
}
