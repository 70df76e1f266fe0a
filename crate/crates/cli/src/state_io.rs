//! JSON state files.
//!
//! Schema:
//!
//! ```json
//! {
//!   "n_total": 2,
//!   "bipartition": "spatial",
//!   "entries": [[[re, im], ...], ...]
//! }
//! ```
//!
//! `bipartition` is `"spatial"`, `"energy"`, or a 2x2 mixing matrix as
//! nested arrays of `[re, im]` pairs. `entries` is the full
//! `(N+1) x (N+1)` density matrix. Loading re-validates every state
//! invariant and rejects violating files with a descriptive error.

use std::path::Path;

use serde::{Deserialize, Serialize};
use twomode::fock::{FockDensityMatrix, ModeBipartition};
use twomode::{CMatrix, Complex64};

use crate::export::atomic_write;
use crate::run::CliError;

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct StateFile {
    pub n_total: usize,
    pub bipartition: BipartitionField,
    pub entries: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(untagged)]
pub enum BipartitionField {
    Preset(String),
    Mixing([[[f64; 2]; 2]; 2]),
}

pub fn to_state_file(rho: &FockDensityMatrix) -> StateFile {
    let bipartition = match rho.bipartition().name() {
        Some("spatial") => BipartitionField::Preset("spatial".into()),
        Some("energy") => BipartitionField::Preset("energy".into()),
        _ => {
            let m = rho.bipartition().mixing();
            BipartitionField::Mixing([
                [[m[0][0].re, m[0][0].im], [m[0][1].re, m[0][1].im]],
                [[m[1][0].re, m[1][0].im], [m[1][1].re, m[1][1].im]],
            ])
        }
    };
    let dim = rho.dim();
    let entries = (0..dim)
        .map(|k| {
            (0..dim)
                .map(|l| {
                    let z = rho.entry(k, l);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect();
    StateFile {
        n_total: rho.n_total(),
        bipartition,
        entries,
    }
}

pub fn from_state_file(file: &StateFile) -> Result<FockDensityMatrix, CliError> {
    let bipartition = match &file.bipartition {
        BipartitionField::Preset(name) => match name.as_str() {
            "spatial" => ModeBipartition::spatial(),
            "energy" => ModeBipartition::energy(),
            other => {
                return Err(CliError::State(format!(
                    "unknown bipartition preset '{other}' (use \"spatial\", \"energy\" or a 2x2 matrix)"
                )))
            }
        },
        BipartitionField::Mixing(m) => {
            let mixing = [
                [
                    Complex64::new(m[0][0][0], m[0][0][1]),
                    Complex64::new(m[0][1][0], m[0][1][1]),
                ],
                [
                    Complex64::new(m[1][0][0], m[1][0][1]),
                    Complex64::new(m[1][1][0], m[1][1][1]),
                ],
            ];
            ModeBipartition::custom(mixing)
                .map_err(|e| CliError::State(format!("bipartition rejected: {e}")))?
        }
    };

    let dim = file.n_total + 1;
    if file.entries.len() != dim || file.entries.iter().any(|row| row.len() != dim) {
        return Err(CliError::State(format!(
            "entries must form a {dim}x{dim} matrix for n_total = {}",
            file.n_total
        )));
    }
    let entries = CMatrix::from_fn(dim, dim, |k, l| {
        Complex64::new(file.entries[k][l][0], file.entries[k][l][1])
    });
    FockDensityMatrix::new(file.n_total, entries, bipartition)
        .map_err(|e| CliError::State(format!("state invariants violated: {e}")))
}

pub fn save_state(path: &Path, rho: &FockDensityMatrix) -> Result<(), CliError> {
    let doc = serde_json::to_string_pretty(&to_state_file(rho))
        .map_err(|e| CliError::Io(format!("serializing state: {e}")))?;
    atomic_write(path, &(doc + "\n")).map_err(|e| CliError::Io(format!("writing state: {e}")))
}

pub fn load_state(path: &Path) -> Result<FockDensityMatrix, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::State(format!("reading {}: {e}", path.display())))?;
    let file: StateFile = serde_json::from_str(&raw)
        .map_err(|e| CliError::State(format!("parsing {}: {e}", path.display())))?;
    from_state_file(&file)
}
