//! Library side of `cert-cli`: the analysis drivers and file formats,
//! kept separate from argument handling so integration tests can call
//! them directly.

pub mod analysis;
pub mod io;
