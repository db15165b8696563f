//! Exact computation of the class of the Hurwitz divisor of genus `2d-3`
//! curves with a degree-`d` pencil having two triple ramification points,
//! together with independent checks of every enumerative input.

pub mod abelian;
pub mod invariants;
pub mod oracle;
pub mod pic;
pub mod ratmaps;
pub mod scalar;
pub mod schubert;
pub mod solver;
