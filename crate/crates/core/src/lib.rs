#![no_std]
extern crate alloc;

pub mod exterior;
pub mod fields;
pub mod genmat;
pub mod groebner;
pub mod idealmem;
pub mod linalg;
pub mod matrix;
pub mod orbits;
pub mod poly;
