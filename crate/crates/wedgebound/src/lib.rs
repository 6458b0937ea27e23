//! Bound-state S-matrices, strip Hardy spaces, S-symmetric Fock space and
//! the wedge-local field operators built from them, with numerical checks of
//! the identities and inequalities they obey.

pub mod analytic;
pub mod boundstate;
pub mod fock;
pub mod hardy;
pub mod report;
pub mod smatrix;
