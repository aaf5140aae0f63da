//! Typed feature structures over a type lattice.

mod dag;
mod descr;
mod error;
mod fs;
mod hierarchy;
mod lattice;
mod semantics;

pub use descr::{Description, Entry, Term as DescrTerm};
pub use error::{DescriptionError, FeatureError, HierarchyError, LatticeError};
pub use fs::{parse_path, FeatureStructure, Path};
pub use hierarchy::load_hierarchy;
pub use lattice::{FeatId, LatticeBuilder, TypeId, TypeLattice};
pub use semantics::{Predication, SemanticForm, Term};

pub(crate) use dag::Graph;
pub(crate) use hierarchy::logical_lines;
