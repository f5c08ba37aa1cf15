//! Trivalent marked semi-graphs, their balanced edge numberings and strict
//! branch numberings, and the combinatorial Miura map between the two.
//!
//! Balanced `p`-edge numberings index dormant `sl2`-opers on a totally
//! degenerate curve whose dual graph is the given semi-graph; strict
//! `p`-branch numberings index dormant generic Miura `sl2`-opers. Counting
//! either family therefore gives the corresponding census.

pub mod builders;
pub mod cli;
pub mod error;
pub mod io;
pub mod miura;
pub mod numbering;
pub mod search;
pub mod semigraph;
pub mod verify;

pub use error::{Error, GraphError, Result};
pub use io::Numbering;
pub use numbering::{BranchNumbering, EdgeNumbering, ExponentVector, Kind, Prime};
pub use search::{CensusReport, EnumerationQuery, Method};
pub use semigraph::{Branch, GraphType, MarkedSemiGraph, SemiGraph};
