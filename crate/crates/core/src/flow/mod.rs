//! Radially symmetric Ricci–de Turck flow seeded by the negative mode.

pub mod deturck;
pub mod diagnostics;
pub mod rhs;
pub mod run;
pub mod sgrid;
pub mod stepper;

pub use rhs::{rhs, RhsForm};
pub use sgrid::{mode_on_sgrid, Background, BackgroundKind, FlowChart, SGrid};
