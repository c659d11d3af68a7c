//! Exact computations around Lie algebras carrying ad-invariant Lorentz
//! forms: structure constants, the twisted Heisenberg family, Jordan
//! decompositions and curvature of reductive homogeneous spaces.

pub mod algebra_zoo;
pub mod cli;
pub mod forms;
pub mod homogeneous;
pub mod lie_core;
pub mod spectral;
pub mod twisted_model;
