//! The constructions: hat trees, jump inversion, index transformations, and
//! the towers of treemaps.

pub mod demos;
pub mod friedberg;
pub mod hat;
pub mod indices;
pub mod tower;
