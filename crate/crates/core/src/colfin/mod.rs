//! Column-finite `N x N` matrices over a ring, kept as structured forms and
//! evaluated lazily column by column.

mod dense;
mod index;
mod json;
mod matrix;

use std::sync::OnceLock;

use thiserror::Error;

use crate::ring::RingError;

pub use dense::Dense;
pub use index::{BlockPairing, IndexBijection, IndexSet, Side};
pub use json::{matrix_from_json, matrix_to_json, window_to_json, MatrixJson};
pub use matrix::{first_mismatch, ColFinMatrix, ElementaryForm, Form, InvertibleColFin, SparseCol};

#[derive(Debug, Error)]
pub enum ColFinError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("ring mismatch: {0} vs {1}")]
    Mismatch(String, String),
    #[error("block {block} is not invertible: {reason}")]
    NotInvertible { block: usize, reason: String },
    #[error("operand is not eventually periodic")]
    NotEventuallyPeriodic,
    #[error("invalid matrix: {0}")]
    Invalid(String),
}

/// Pool used for window evaluation. `COLIFT_THREADS` caps its size.
pub fn thread_pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var("COLIFT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
            b = b.num_threads(n.max(1));
        }
        b.build().expect("thread pool")
    })
}
