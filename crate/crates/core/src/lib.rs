//! Exact counting, enumeration and analysis of binomial coefficient bisections.
//!
//! A bisection of row `n` of Pascal's triangle is a sign vector
//! `δ ∈ {−1,+1}^{n+1}` with `Σ δ_i C(n,i) = 0`, i.e. a split of the row into two
//! parts that each sum to `2^{n−1}`. The number of such vectors is written `J_n`.
//!
//! The crate is organised by concern:
//!
//! * [`exactcount`] exact counting (brute force and meet-in-the-middle),
//!   enumeration, classification and symmetry orbits;
//! * [`analytic`] the integral counting formulas and upper bounds;
//! * [`numtheory`] 2-adic valuations, Pell/Fibonacci solutions and the
//!   infinite families of nontrivial bisections;
//! * [`diffarrays`] the correspondence with 0/1 arrays of zero `n`-th difference;
//! * [`backmap`] the backward map to ternary identities of order `n − 1`.

pub mod analytic;
pub mod backmap;
mod bigutil;
pub mod diffarrays;
mod error;
pub mod exactcount;
pub mod numtheory;

pub use bigutil::{binomial, decimal, log2_biguint};
pub use error::{Error, Result};
pub use exactcount::{
    canonical_orbits, classify, count_bisections, enumerate_solutions, is_solution, pascal_row,
    prefix_partition, Classification, CountConfig, CountResult, OrbitSummary, PascalRow,
    SignVector, SolutionFilter, Strategy,
};
