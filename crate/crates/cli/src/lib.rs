//! File formats, reports and command implementations behind the `masskit`
//! binary. The algorithms live in `masskit-core`; this crate owns
//! everything that touches the filesystem: contour CSV, PGM images,
//! feature-matrix CSV, vote matrices, JSON reports and model persistence.
//!
//! All writers go through [`io::write_atomic`] (temp file + rename), and
//! every output is byte-deterministic for a fixed seed and input set.

pub mod cmd;
pub mod io;
pub mod model;
pub mod report;
