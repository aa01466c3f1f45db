//! Strong blocking sets built from unions of subgeometries, the equivalent
//! minimal linear codes, and the blocking-set bounds around them.

pub mod bounds;
pub mod budget;
pub mod cli;
pub mod code;
pub mod error;
pub mod field;
pub mod geometry;
pub mod independence;
pub mod partition;
pub mod strong;

pub use error::{Error, Result};
pub use field::{CoordinateMap, FieldDescription, FieldElem, FieldHandle, Subfield};
pub use geometry::{Hyperplane, Labels, PointSet, PointSetJson, ProjPoint, ProjSpace};
pub use budget::Budget;
pub use partition::{BSet, RGroup, SubgeometryPartition};
