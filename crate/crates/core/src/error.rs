use thiserror::Error;

use crate::cartan::DatumError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Datum(#[from] DatumError),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("relations violated: {}", .0.join("; "))]
    Relations(Vec<String>),

    #[error("modules are defined over different algebras")]
    AlgebraMismatch,

    #[error("module is not locally free")]
    NotLocallyFree,

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("Ext identities fail: hom(M,N)={hom_mn} ext(M,N)={ext_mn} hom(N,M)={hom_nm} ext(N,M)={ext_nm} form={form}")]
    ExtIdentity { hom_mn: usize, ext_mn: usize, hom_nm: usize, ext_nm: usize, form: i64 },

    #[error("self-extension space has odd dimension {0} for a crystal module")]
    OddSelfExtension(usize),

    #[error("isomorphism test inconclusive after {0} trials")]
    Inconclusive(usize),

    #[error("decomposition undecided after {0} attempts")]
    Undecided(usize),

    #[error("derivation does not satisfy the relations: {0}")]
    NotADerivation(String),

    #[error("division undefined ({0})")]
    DivisionUndefined(String),

    #[error("not certified: {0}")]
    NotCertified(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("catalog entry {label} failed certification: {reason}")]
    Certification { label: String, reason: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("field mode {0} cannot represent the input")]
    Field(String),
}

pub type Result<T> = std::result::Result<T, Error>;
