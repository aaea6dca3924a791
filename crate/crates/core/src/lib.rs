//! Inter-IXP multigraph toolkit.
//!
//! The substrate is a multigraph whose vertices are IXPs and client endpoints
//! and whose edges are *pathlets*: capacity- and latency-annotated segments
//! offered by an ISP, either between two IXPs (transit) or between an endpoint
//! and an IXP anchor (access). Several ISPs can connect the same pair of IXPs,
//! so parallel edges are the norm.
//!
//! On top of the model the crate provides:
//!
//! - [`ingest`]: synthesis of the multigraph from IXP membership tables.
//! - [`analytics`]: per-pair diversity distributions and IPv4 coverage of
//!   anchor deployments.
//! - [`engine`]: online sample-select embedding of QoS requests, hybrid
//!   re-embedding, failure recovery and an exhaustive offline oracle.
//! - [`sim`]: workload generation and a discrete-event admission simulator.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the CLI live
//! in the companion `cxp` crate.
#![no_std]
#![deny(missing_debug_implementations)]

extern crate alloc;

pub mod analytics;
pub mod engine;
pub mod fixtures;
pub mod graph;
pub mod ingest;
pub mod prefix;
pub mod rng;
pub mod sim;

pub use graph::{Multigraph, NodeIdx, NodeKind, Pathlet, PathletId, PathletKind, PathletSpec};

/// Autonomous system number.
pub type Asn = u32;
