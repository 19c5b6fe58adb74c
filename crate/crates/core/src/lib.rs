//! Exact decision procedures for observability and epimorphicity of subalgebras
//! of semisimple Lie algebras over ℚ.

pub mod algebra;
pub mod corpus;
pub mod criteria;
pub mod descent;
pub mod error;
pub mod grading;
pub mod linalg;
pub mod lp;
pub mod orbit;
pub mod overgroup;
pub mod poly;
pub mod problem;
pub mod rational;
pub mod report;
pub mod transcript;
pub mod verify;

pub use algebra::{Element, Family, LieAlgebra, Subalgebra};
pub use error::{Error, Result};
pub use rational::Q;
