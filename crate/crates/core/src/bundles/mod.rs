//! Bundles on the projective line as loop-group cocycles.
//!
//! A bundle is glued from the trivial bundle on `P^1 - {0}` (ring `k[t^-1]`) and on
//! the formal disc at `0` (ring `k[[t]]`) by an invertible matrix `g` over
//! `k((t))`. Global sections are pairs `(f_out, f_in)` with `f_out = g * f_in`, so
//! `g` and `X g Y` define isomorphic bundles for `X` over `k[t^-1]` and `Y` over
//! `k[[t]]`. Under this convention the line bundle glued by `t^c` is `O(-c)`.

mod birkhoff;
mod cech;
mod cocycle;
mod splitting;

pub use birkhoff::{birkhoff_factorize, birkhoff_matrix, splitting_type, BirkhoffFactorization};
pub use cech::{coboundary_split, cohomology_dims, h1_project, CohClass};
pub use cocycle::{Base, Group, LoopCocycle};
pub use splitting::{
    canonical_parabolic, polygons_between, CanonicalReductionData, SplittingType,
};
