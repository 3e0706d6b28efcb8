pub mod arith;
pub mod curve;
pub mod det;
pub mod cover;
pub mod jarnik;
pub mod experiments;
