//! Information-theoretic lower bounds over finite discrete models.
//!
//! The crate computes exact f-divergences (KL, χ², squared Hellinger)
//! between finite distributions, scalar lower bounds between Bernoulli
//! parameters and their solved forms, Fano-type inequalities assembled
//! from weighted families, Birgé-type constants, and a handful of
//! application-level bounds (posterior-concentration constants, a
//! sparse-loss regret floor, exact binomial large-deviation rates).
//! Every inequality shipped here is also exercised by the brute-force
//! harness in [`verify`].

pub mod applications;
pub mod birge;
pub mod divergences;
pub mod extreal;
pub mod fano;
pub mod kl_bounds;
pub mod verify;

pub use extreal::ExtReal;
