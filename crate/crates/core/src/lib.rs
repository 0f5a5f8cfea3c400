//! Exact graded-dimension computations for cohomological Donaldson-Thomas
//! integrality of GL_n, SL_n and PGL_n local systems on the 3-torus.

pub mod complexes;
pub mod error;
pub mod exact;
pub mod exp_map;
pub mod group_data;
pub mod integrality;
pub mod moduli;
pub mod molien;

pub use error::{Error, Result};
