//! Cantor-type constructions on the β-shift: rate functions, the sparse
//! checkpoint schedule, forced-position index sets, the cylinder measure ν,
//! covering sums and dimension estimators.

pub mod phi;

pub use phi::{class_h_check, liminf_ratio, ClassHReport, LiminfValue, PhiForm, PhiFunction};
