//! File formats for the conditional temporal network toolkit.
//!
//! The binary in this package wires these parsers and printers to the
//! decision procedure, the formula compiler, and the strategy verifier from
//! `cstn-core`. The formats live in the library so tests (and other tools)
//! can round-trip documents without spawning the binary.

pub mod format;
