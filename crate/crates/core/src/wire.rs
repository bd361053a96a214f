//! Stable JSON representations. Indices are 1-based on the wire, matching
//! the usual convention for rows and columns; the in-memory types are
//! 0-based. Schemas live under `schemas/` in the repository root.

use serde::{Deserialize, Serialize};

use crate::embed::BlockEmbedding;
use crate::pattern::Embedding;
use crate::sparsity::{DenseCertificate, SparsityBound};

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct EmbeddingWire {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl From<&Embedding> for EmbeddingWire {
    fn from(e: &Embedding) -> Self {
        EmbeddingWire {
            rows: e.row_map.iter().map(|&r| r + 1).collect(),
            cols: e.col_map.iter().map(|&c| c + 1).collect(),
        }
    }
}

impl From<&BlockEmbedding> for EmbeddingWire {
    fn from(e: &BlockEmbedding) -> Self {
        EmbeddingWire {
            rows: e.row_map.iter().map(|&r| r + 1).collect(),
            cols: e.col_map.iter().map(|&c| c + 1).collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Debug)]
pub struct BoundWire {
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl From<&SparsityBound> for BoundWire {
    fn from(b: &SparsityBound) -> Self {
        BoundWire {
            b: b.b(),
            c: b.c(),
            d: b.d(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(rename_all = "camelCase")]
pub struct CertificateWire {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub size: usize,
    pub weight: usize,
    pub threshold: f64,
    pub bound: BoundWire,
}

impl CertificateWire {
    pub fn from_certificate(cert: &DenseCertificate) -> Self {
        CertificateWire {
            rows: cert.rows.iter().map(|&r| r + 1).collect(),
            cols: cert.cols.iter().map(|&c| c + 1).collect(),
            size: cert.size(),
            weight: cert.weight,
            threshold: cert.threshold().unwrap_or(f64::NAN),
            bound: BoundWire::from(&cert.bound),
        }
    }
}
