pub mod error;
pub mod field;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod symfun;
pub mod lp;
pub mod polytope;
pub mod torus;
pub mod groebner;
pub mod classify;
pub mod param;
pub mod family;
pub mod cli;
