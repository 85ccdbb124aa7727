//! Certified numerics: dyadic reals, outward-rounded intervals, complex
//! intervals, and enclosed elementary functions.

pub mod complex;
pub mod dyadic;
pub mod elem;
pub mod interval;

pub use complex::CInterval;
pub use dyadic::{Dir, Dyadic};
pub use interval::{Interval, SignClass};
