//! IO, file formats, verification suite, and figure drivers for the
//! concentratable-entanglement toolkit. The algorithmic core lives in
//! `ce-core`; this crate adds everything that touches the filesystem plus the
//! `ce-lab` binary.

pub mod figure;
pub mod record;
pub mod result;
pub mod run;
pub mod verify;
