//! Exact symbolic computations with Leavitt path algebras over finite graphs.

pub mod acceptance;
pub mod error;
pub mod chen;
pub mod connector;
pub mod expr;
pub mod ext;
pub mod fixture;
pub mod graph;
pub mod irreducible;
pub mod linalg;
pub mod lpa;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
