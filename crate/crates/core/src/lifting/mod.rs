//! Lifting invertible column-finite matrices along surjective ring maps:
//! unimodular column reduction, the Whitehead block word, the paired
//! diagonal factorization behind the swindle, the lifting driver and
//! certificate checking.

mod certificate;
mod lift;
mod swindle;
mod unimodular;
mod whitehead;
mod word;

use thiserror::Error;

use crate::colfin::ColFinError;
use crate::ring::RingError;

pub use certificate::{
    certificate_from_json, content_hash, verify_certificate, CertificateBody, CertificateJson,
    CheckResult, FactorJson, VerificationReport,
};
pub use lift::{gl_lift, target_word, LiftCertificate, LiftFactor};
pub use swindle::{paired_diag, swindle_factorization};
pub use unimodular::unimodular_reduce;
pub use whitehead::whitehead_word;
pub use word::{ElementaryWord, ProofStep, Sidedness, WordFactor};

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("no Bezout witness available for {0}")]
    MissingWitness(String),
    #[error("witness does not satisfy sum c_i a_i = 1")]
    BadWitness,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("malformed certificate: {0}")]
    Certificate(String),
    #[error(transparent)]
    ColFin(#[from] ColFinError),
    #[error(transparent)]
    Ring(#[from] RingError),
}
