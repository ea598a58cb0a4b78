//! Exact algebra for lifting invertible column-finite matrices along ring
//! surjections, recovering conjugators of matrix-algebra automorphisms, and
//! checking positivity conditions for systems of line-bundle sums.

pub mod ring;
pub mod colfin;
pub mod lifting;
pub mod skolem;
pub mod cohomology;
