//! JSON density-matrix documents:
//! `{"dim_a": 2, "dim_b": 2, "matrix": [[[re, im], ...], ...]}`.

use serde::{Deserialize, Serialize};

use super::{make_bipartite, BipartiteState};
use crate::error::{DiscordError, Result};
use crate::linalg::{c, CMatrix};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub dim_a: usize,
    pub dim_b: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

/// Serialises a complex matrix as rows of `[re, im]` pairs.
pub fn matrix_to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

impl StateDocument {
    pub fn from_state(state: &BipartiteState) -> Self {
        StateDocument {
            dim_a: state.dim_a(),
            dim_b: state.dim_b(),
            matrix: matrix_to_pairs(state.matrix()),
        }
    }

    /// Rejects ragged rows, then enforces every state invariant.
    pub fn into_state(self) -> Result<BipartiteState> {
        let rows = self.matrix.len();
        if let Some((i, row)) = self.matrix.iter().enumerate().find(|(_, r)| r.len() != rows) {
            return Err(DiscordError::Format(format!(
                "row {i} has {} entries, expected {rows}",
                row.len()
            )));
        }
        let m = CMatrix::from_fn(rows, rows, |i, j| {
            let [re, im] = self.matrix[i][j];
            c(re, im)
        });
        make_bipartite(m, self.dim_a, self.dim_b)
    }
}

pub fn parse_state(json: &str) -> Result<BipartiteState> {
    let doc: StateDocument =
        serde_json::from_str(json).map_err(|e| DiscordError::Format(e.to_string()))?;
    doc.into_state()
}

pub fn state_to_json(state: &BipartiteState) -> String {
    serde_json::to_string_pretty(&StateDocument::from_state(state))
        .expect("state documents always serialise")
}
