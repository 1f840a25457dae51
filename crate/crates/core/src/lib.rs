//! Bounded-width tree-depth for line graphs of trees and forests.
//!
//! An elimination forest of the line graph `L(G)` of a forest `G` is the
//! same thing as an edge ranking of `G`: every edge gets a positive level,
//! adjacent edges get distinct levels, and two edges on the same level are
//! separated by a strictly higher edge on the path between them. The height
//! is the largest level, the width the largest number of edges sharing a
//! level. `btd(G, b)` is the minimum height over rankings of width at most
//! `b`.
//!
//! Modules:
//! - [`forest`]: the graph model, parsers and generators.
//! - [`elim`]: rankings, validation, elimination forests, merge schedules.
//! - [`minrank`]: minimum-height rankings (unbounded width).
//! - [`exact`]: exhaustive solver for small instances.
//! - [`approx`]: the additive-`2b` approximation for trees.
//! - [`reduction`]: hitting-set hardness instances and gadgets.

pub mod approx;
pub mod elim;
pub mod error;
pub mod exact;
pub mod forest;
pub mod minrank;
pub mod reduction;

pub use elim::{EdgeRanking, EliminationForest, MergeSchedule, ValidationReport, Violation};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use forest::{EdgeId, Forest, PendantStar, TreeKind, VertexId};
