//! Exact verification kernels for rank-2 Kac-Moody groups over finite fields:
//! Cartan-matrix classification, real roots and Weyl words, small finite
//! fields, truncated power-series matrices, finite p-group closures, and the
//! rank-2 congruence-filtration checks built from them.

pub mod ffield;
pub mod gcm;
pub mod linalg;
pub mod par;
pub mod pgroup;
pub mod rank2;
pub mod report;
pub mod roots;
pub mod tseries;
