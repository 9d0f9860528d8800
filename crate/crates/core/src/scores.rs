use std::io::Write;

use crate::error::Result;
use crate::graph::IdMap;

/// Dense, vertex-indexed centrality values with a label naming the index they hold.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralityScores {
    pub label: String,
    pub values: Vec<f64>,
}

impl CentralityScores {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        CentralityScores { label: label.into(), values }
    }

    pub fn zeros(label: impl Into<String>, n: usize) -> Self {
        Self::new(label, vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> f64 {
        self.values[v]
    }

    /// CSV `external_id,score`, one row per vertex in ascending external id.
    pub fn write_csv<W: Write>(&self, ids: &IdMap, mut out: W) -> Result<()> {
        writeln!(out, "external_id,score")?;
        // dense ids are assigned in ascending external order
        for (v, score) in self.values.iter().enumerate() {
            writeln!(out, "{},{}", ids.external(v), score)?;
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for CentralityScores {
    type Output = f64;

    fn index(&self, v: usize) -> &f64 {
        &self.values[v]
    }
}
