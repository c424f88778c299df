//! Fault-tolerant decoding for qubit and qudit surface codes.
//!
//! This crate simulates active error correction on a distance-`L` planar
//! surface code with qudits of any dimension `d >= 2`, under uncorrelated
//! noise acting on both the physical qudits and the syndrome measurements.
//! The decoder is a hard-decision renormalization-group (HDRG) scheme over
//! the 3D history of syndrome changes, optionally preceded by an
//! initialization sweep that annihilates short neutral defect paths before
//! clustering begins.
//!
//! The pieces compose bottom-up:
//!
//! - [`lattice`]: code geometry, syndromes, charge transport, logical class;
//! - [`noise`]: the uncorrelated noise model and deterministic RNG streams;
//! - [`history`]: the syndrome-changes grid `S'` and correction projection;
//! - [`hdrg`]: the level-by-level cluster decoder;
//! - [`initstep`]: the enhanced-decoder initialization sweep;
//! - [`percolation`]: spanning-cluster detection in `S'`;
//! - [`montecarlo`]: full decoding trials and batched success estimates;
//! - [`fitting`]: finite-size-scaling threshold fits;
//! - [`cli`]: the `qudit-hdrg` command-line front end.
//!
//! The `examples/` directory has one runnable example per capability; the
//! binary exposes the same flows as subcommands (`trial`, `sweep`,
//! `percolation`, `fit`, `bench`).

pub mod cli;
pub mod fitting;
pub mod hdrg;
pub mod history;
pub mod initstep;
pub mod lattice;
pub mod montecarlo;
pub mod noise;
pub mod percolation;

pub use hdrg::{decode, decode_with_trace, DecoderConfig};
pub use history::{syndrome_changes, ChangesHistory, CorrectionHistory, Defect};
pub use lattice::{CodeGeometry, ErrorLayer, QuditDim, SyndromeLayer};
pub use montecarlo::{run_batch, run_trial, SuccessEstimate, TrialConfig, TrialOutcome};
