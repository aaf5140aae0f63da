//! Lexical rules: slot-ordered transformations of signs that pair a
//! description edit with a suffix template and a logical-form action.
//!
//! Rule file lines (continuations indented):
//!
//! ```text
//! rule <id> slot=<SLOT> [val=<value>] [tmpl=<allomorphs>|0] [in=<descr>]
//!     [out=<edits>] [lf=<action>] [proc=<procedure>] [req=+f,...] [feeder=yes]
//! ```
//!
//! `out` is a description read as edits: a bare type retypes the sign,
//! `PATH: d` replaces the value at PATH. Tags bound in `in` can be reused
//! in `out` to carry values across. `tmpl` lists allomorphs as
//! `t/vowel|DIr`, first matching condition wins.

mod lf;
mod rule;
mod senses;
mod slot;
mod subcat;

pub use lf::{causer_var, LfAction, LfArg, MODIFIED_VAR};
pub use rule::{parse_rules, LexicalRule, RuleContext, RuleError, RuleFileError};
pub use senses::SenseTable;
pub use slot::{Slot, SlotState};
pub use subcat::{move_object, Procedure, SubcatFrame, SUBCAT_PATH};
