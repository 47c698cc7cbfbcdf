//! Exact computer algebra for the center-focus problem of planar polynomial
//! differential systems.

pub mod poly;

pub mod linalg;
pub mod system;
pub mod lie;
pub mod focal;
pub mod hilbert;
pub mod verify;
