#![cfg_attr(not(test), no_std)]

//! Exact computational models of similarity iterated function systems and
//! the dynamics living on their fractal blowups.
//!
//! Everything is carried out in arbitrary-precision rational arithmetic, so
//! identities such as the groupoid axioms or the invariance of the bundle
//! measure are checked with `==`, never with a tolerance.
//!
//! The crate is organized bottom-up:
//!
//! - [`words`]: finite and eventually periodic infinite words, cylinders,
//!   the one-sided shift and tail equivalence.
//! - [`ifs`]: rational similarity systems, addresses of attractor points,
//!   finite nets approximating the attractor, open set condition and
//!   disconnectedness certificates.
//! - [`bundle`]: blowup patches and points of the fractafold bundle.
//! - [`groupoid`]: the Renault–Deaconu groupoid of the shift.
//! - [`action`]: its action on the bundle, the lifted shift, the
//!   isomorphism with the lifted groupoid, orbits and the correspondence
//!   inner product.
//! - [`measure`]: the self-similar measure, the Bernoulli measure on words,
//!   the bundle measure and the trace on simple functions.
//! - [`presets`]: the dyadic interval and simplex families with their closed
//!   forms.
//! - [`sample`] and [`sweep`]: seeded random generators and the randomized
//!   property sweeps shared by the test suites and the CLI self test.

extern crate alloc;

pub mod action;
pub mod arith;
pub mod bundle;
pub mod groupoid;
pub mod ifs;
pub mod measure;
pub mod presets;
pub mod sample;
pub mod sweep;
pub mod words;

pub use crate::action::{ActionElement, FinSuppFunction, LiftedElement, OrbitTarget};
pub use crate::arith::{Point, Rational};
pub use crate::bundle::{BlowupPatch, Bundle, BundlePoint, Hull};
pub use crate::groupoid::{Bisection, GroupoidElement, GroupoidError};
pub use crate::ifs::{
    AttractorNet, IfsError, KPoint, Region, SignedPermutation, SimilarityMap, SimilaritySystem,
};
pub use crate::measure::{CellSet, MeasureError, MeasureValue, Rectangle, SimpleFunction};
pub use crate::words::{Cylinder, FiniteWord, InfiniteWord, Symbol, WordError};
