//! Numeric abstractions for score and weight arithmetic.

use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, Num};

/// Floating-point scalar used for similarity scores, aggregated edge
/// weights and modularity values: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + Sum<Self> + Debug {}

impl<T> Real for T where T: Float + FromPrimitive + Sum<T> + Debug {}

/// Scalar used for evaluation ratios (accuracy, recall, random-guess
/// accuracy). Only ring operations and division are required, so exact
/// rational types qualify alongside the floats.
pub trait Fraction: Num + FromPrimitive + PartialOrd + Clone + Debug {}

impl<T> Fraction for T where T: Num + FromPrimitive + PartialOrd + Clone + Debug {}
