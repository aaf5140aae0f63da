use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("hierarchy declares no types")]
    Empty,
    #[error("subtype cycle through `{0}` and `{1}`")]
    Cycle(String, String),
    #[error("hierarchy needs exactly one most general type, found {0:?}")]
    NoUniqueTop(Vec<String>),
    #[error("`{left}` and `{right}` have no unique greatest lower bound (candidates {candidates:?})")]
    AmbiguousGlb {
        left: String,
        right: String,
        candidates: Vec<String>,
    },
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("feature {feature} re-introduced at `{ty}` with an incompatible value restriction")]
    IncompatibleRestriction { feature: String, ty: String },
    #[error("feature {feature} introduced at unrelated types `{first}` and `{second}`")]
    UnrelatedIntroduction {
        feature: String,
        first: String,
        second: String,
    },
    #[error("constraint on `{0}` is inconsistent with the hierarchy")]
    InconsistentConstraint(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescriptionError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("list syntax needs types `e-list`, `ne-list` and features FIRST, REST")]
    NoListTypes,
    #[error("description is inconsistent (unification fails)")]
    Inconsistent,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeatureError {
    #[error("feature structures are typed against different lattices")]
    LatticeMismatch,
    #[error("bad path `{0}`")]
    BadPath(String),
}

#[derive(Debug, Error)]
pub enum HierarchyError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("line {line}: constraint on `{ty}`: {source}")]
    Constraint {
        line: usize,
        ty: String,
        source: DescriptionError,
    },
}
