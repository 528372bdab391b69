//! Exact combinatorial machinery for analyzing the distinguishing power of
//! K-hop message passing: hop-set extraction under shortest-path-distance and
//! graph-diffusion kernels, peripheral subgraph encodings, a general
//! schedule-driven color refinement engine with injective interning, a
//! folklore 2-WL upper-bound oracle, graph generators, and an experiment
//! layer that emits CSV/JSON/SVG.

pub mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod graph6;
pub mod khop;
pub mod peripheral;
pub mod refine;
pub mod wl3;

pub use error::{Error, Result};
pub use graph::Graph;
pub use khop::Kernel;
pub use refine::{Method, MethodSpec, Verdict};
