//! Polytopal valuation laboratory: exact rational polytopes and subdivisions,
//! inclusion-exclusion measures, characteristic and normal cycles, and
//! valuation evaluators driven by quadrature over cycle chains.

pub mod angle;
pub mod cone;
pub mod convergence;
pub mod cycle;
pub mod exec;
pub mod form;
pub mod integrate;
pub mod linalg;
pub mod measure;
pub mod num;
pub mod polytope;
pub mod quadrature;
pub mod refine;
pub mod samples;
pub mod steiner;
pub mod subdivision;
pub mod valuation;

pub use linalg::{Point, Vector};
pub use num::{Rational, C64};
pub use polytope::{Halfspace, Polytope};
