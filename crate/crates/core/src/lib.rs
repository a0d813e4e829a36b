//! Exact-arithmetic workbench for online fractional matching on graphs of
//! maximum degree three under adversarial edge arrivals.

pub mod engine;
pub mod instances;
pub mod lp;
pub mod minindex;
pub mod numeric;
pub mod oracle;
