//! Exact arithmetic in `q, t`: integer polynomials, rational functions with
//! `(1 - q^a t^b)` denominators, and monomial expansions in `x_1..x_n`.

mod poly;
mod rational;
mod xexp;

pub use poly::{Mono, QTPoly};
pub use rational::{Denominator, QTRational};
pub use xexp::{distinct_permutations, XExpansion};
