//! Exact computations for quantized enveloping algebras at roots of unity:
//! cyclotomic arithmetic, root data and intermediate lattices, PBW rewriting
//! systems, explicit representations and nilpotent-orbit bookkeeping.

pub mod cyclo;
pub mod lattice;
pub mod orbits;
pub mod pbw;
pub mod reps;
pub mod rootdata;
