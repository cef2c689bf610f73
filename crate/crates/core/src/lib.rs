//! Exact computation of multiclass learnability dimensions.
//!
//! The crate covers the Natarajan, graph, DS and Ψ-family dimensions of
//! finitely represented hypothesis classes, executable witness functions for
//! their computable counterparts, the No-Free-Lunch adversary used to turn a
//! learner into a witness, and the "good function" embedding that gives a
//! computable ERM for any class with a finite-order Natarajan or Ψ witness.
//!
//! Every decision procedure runs on exact rationals. Risk computations are
//! generic over [`Scalar`], so the same code paths serve floating-point
//! simulations; the aliases below fix the common instantiations.

pub mod combinatorics;
pub mod dimensions;
pub mod embedding;
mod error;
pub mod gallery;
pub mod model;
pub mod nfl;
pub mod psi;
mod scalar;
pub mod witnesses;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use dimensions::{exact_dimension, DimensionKind, DimensionResult, ShatterCertificate};
pub use model::{
    BehaviorSet, Domain, FiniteDistribution, Hypothesis, HypothesisClass, IndexSet, Label,
    LabeledSample, Labeling, Pattern, Point,
};
pub use nfl::{AdversaryReport, Learner};
pub use psi::{PsiFamily, PsiFunction, PsiValue};
pub use witnesses::{Flavor, Provenance, Witness, WitnessReport};

/// Arbitrary-precision rational used by every decision procedure.
pub type Rational = num_rational::BigRational;

/// Exact finite-support distribution over labelled points.
pub type ExactDistribution = FiniteDistribution<Rational>;

/// Floating-point distribution, for simulation only.
pub type FloatDistribution = FiniteDistribution<f64>;
