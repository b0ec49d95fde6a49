//! On-disk matrix and state format.
//!
//! ```json
//! {"type": "density", "rows": 2, "cols": 2, "re": [0.5, 0, 0, 0.5], "im": [0, 0, 0, 0]}
//! ```
//!
//! `re`/`im` are row-major. A `pure` state is a column (`cols = 1`); `im` may
//! be omitted for real data. Floats are written in shortest round-trip form,
//! so decode(encode(m)) is bit-exact.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sympovm::{CMatrix, Complex, DensityMatrix, PureState};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Density,
    Pure,
    Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonMatrix {
    #[serde(rename = "type")]
    pub kind: MatrixKind,
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

impl JsonMatrix {
    pub fn encode(kind: MatrixKind, m: &CMatrix) -> Self {
        JsonMatrix {
            kind,
            rows: m.rows(),
            cols: m.cols(),
            re: m.as_slice().iter().map(|z| z.re).collect(),
            im: m.as_slice().iter().map(|z| z.im).collect(),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self::encode(MatrixKind::Pure, &CMatrix::column(psi.amplitudes()))
    }

    pub fn decode(&self) -> Result<CMatrix, CliError> {
        let n = self.rows * self.cols;
        if self.re.len() != n {
            return Err(CliError::Usage(format!(
                "matrix declares {}x{} but has {} real parts",
                self.rows,
                self.cols,
                self.re.len()
            )));
        }
        if !self.im.is_empty() && self.im.len() != n {
            return Err(CliError::Usage(format!(
                "matrix declares {}x{} but has {} imaginary parts",
                self.rows,
                self.cols,
                self.im.len()
            )));
        }
        let data = (0..n)
            .map(|i| Complex::new(self.re[i], self.im.get(i).copied().unwrap_or(0.0)))
            .collect();
        Ok(CMatrix::from_vec(self.rows, self.cols, data)?)
    }
}

/// A state read from disk, validated at tolerance `eps`.
#[derive(Debug, Clone)]
pub enum StateInput {
    Density(DensityMatrix),
    Pure(PureState),
}

impl StateInput {
    pub fn dim(&self) -> usize {
        match self {
            StateInput::Density(rho) => rho.dim(),
            StateInput::Pure(psi) => psi.dim(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            StateInput::Density(rho) => rho.clone(),
            StateInput::Pure(psi) => psi.to_density(),
        }
    }

    pub fn kind(&self) -> MatrixKind {
        match self {
            StateInput::Density(_) => MatrixKind::Density,
            StateInput::Pure(_) => MatrixKind::Pure,
        }
    }
}

pub fn parse_state(text: &str, eps: f64) -> Result<StateInput, CliError> {
    let jm: JsonMatrix =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("state file is not a valid matrix: {e}")))?;
    let m = jm.decode()?;
    let reject = |e: sympovm::Error| CliError::Usage(format!("rejected state: {e}"));
    match jm.kind {
        MatrixKind::Pure => {
            if jm.cols != 1 {
                return Err(CliError::Usage(format!(
                    "pure state must be a column, got {} columns",
                    jm.cols
                )));
            }
            Ok(StateInput::Pure(
                PureState::new_with_eps(m.into_vec(), eps).map_err(reject)?,
            ))
        }
        MatrixKind::Density | MatrixKind::Matrix => Ok(StateInput::Density(
            DensityMatrix::new_with_eps(m, eps).map_err(reject)?,
        )),
    }
}

pub fn read_state(path: &Path, eps: f64) -> Result<StateInput, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_state(&text, eps)
}
