//! Trait for certified univariate real functions.
//!
//! Root isolation, monotonicity partitions and norm certification all consume
//! this interface, so they work uniformly for Pfaffian functions, implicit
//! section functions and composed parameterizing maps.

use crate::chain::PfaffianFunction;
use crate::error::{Error, Result};
use crate::num::Interval;
use crate::ode;
use crate::Rat;
use std::fmt::Debug;
use std::sync::atomic::{AtomicI64, Ordering};
use std::sync::Arc;

/// Work budget shared across a recursive computation.
#[derive(Debug)]
pub struct Budget {
    remaining: AtomicI64,
}

impl Budget {
    pub fn new(units: i64) -> Budget {
        Budget { remaining: AtomicI64::new(units) }
    }

    /// Spends `units`; false when the budget is exhausted.
    pub fn spend(&self, units: i64) -> bool {
        self.remaining.fetch_sub(units, Ordering::Relaxed) > units
    }

    pub fn exhausted(&self) -> bool {
        self.remaining.load(Ordering::Relaxed) <= 0
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget::new(200_000)
    }
}

/// A certified univariate real function on a rational interval.
pub trait RealFn1: Debug + Send + Sync {
    /// Enclosure of f(x) at an exact rational point.
    fn eval_point(&self, x: &Rat, prec: u32) -> Result<Interval>;

    /// Enclosure of f over an interval box.
    fn eval_box(&self, x: &Interval, prec: u32) -> Result<Interval>;

    /// The derivative as a new certified function.
    fn differentiate(&self) -> Result<Arc<dyn RealFn1>>;

    /// True when the function is syntactically the zero function (used to cut
    /// derivative recursions short).
    fn is_zero_fn(&self) -> bool {
        false
    }
}

impl RealFn1 for PfaffianFunction {
    fn eval_point(&self, x: &Rat, prec: u32) -> Result<Interval> {
        if self.ambient_dim() != 1 {
            return Err(Error::BadInput("RealFn1 needs a univariate function".into()));
        }
        ode::eval_raw(self, std::slice::from_ref(x), prec)
    }

    fn eval_box(&self, x: &Interval, prec: u32) -> Result<Interval> {
        ode::eval_box1(self, x, prec)
    }

    fn differentiate(&self) -> Result<Arc<dyn RealFn1>> {
        Ok(Arc::new(self.derivative(0)))
    }

    fn is_zero_fn(&self) -> bool {
        self.top().is_zero()
    }
}

/// f shifted by an exact rational constant: x -> f(x) - c.
#[derive(Debug, Clone)]
pub struct ShiftedFn {
    pub f: Arc<dyn RealFn1>,
    pub minus: Rat,
}

impl RealFn1 for ShiftedFn {
    fn eval_point(&self, x: &Rat, prec: u32) -> Result<Interval> {
        let v = self.f.eval_point(x, prec)?;
        Ok(v.sub(&Interval::from_rat(&self.minus, prec), prec))
    }

    fn eval_box(&self, x: &Interval, prec: u32) -> Result<Interval> {
        let v = self.f.eval_box(x, prec)?;
        Ok(v.sub(&Interval::from_rat(&self.minus, prec), prec))
    }

    fn differentiate(&self) -> Result<Arc<dyn RealFn1>> {
        self.f.differentiate()
    }

    fn is_zero_fn(&self) -> bool {
        false
    }
}
