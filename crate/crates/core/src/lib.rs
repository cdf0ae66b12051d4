pub mod coefficient;
pub mod convex;
pub mod dykstra;
pub mod error;
pub mod fixtures;
pub mod grid;
pub mod integral;
pub mod linalg;
pub mod lp;
pub mod mapping;
pub mod path;
pub mod probe;
pub mod region;
pub mod regularity;
pub mod selection;
pub mod specfile;

pub use error::{Error, Result};
