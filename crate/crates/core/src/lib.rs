//! Exact toolkit for the orthogonality graphs Ω_n.
//!
//! Vertices are `n`-bit words ([`VertexWord`]); two are adjacent when the
//! corresponding ±1-vectors are orthogonal. The crate computes the spectral
//! ratio bound, searches the tight independent sets of the quotient Y_n by
//! exact linear algebra, builds Hadamard-clique colourings and the recursive
//! Ψ_n colourings, measures the explicit independent-set families, and
//! packages everything as re-verifiable JSON certificates.

pub mod certificate;
pub mod colouring;
pub mod error;
pub mod families;
pub mod graph;
pub mod linalg;
pub mod search;
mod serde_util;
pub mod spectral;
pub mod word;

pub use certificate::{CertKind, Envelope, VerifyReport};
pub use colouring::{chi_status, ChiVerdict, CliqueCertificate, ColouringCertificate, Evidence, StatusReport};
pub use error::{Error, Result};
pub use families::{FamilyKind, FamilyReport};
pub use graph::{Canon, GraphKind, GraphStats, ParityClass};
pub use linalg::{EchelonResult, RationalMatrix};
pub use search::{IndSetCertificate, SearchConfig, SearchOutcome};
pub use spectral::{BoundReport, EigenspaceCheck, GramReport, NtnSpectrum};
pub use word::VertexWord;
