//! Achievable rate regions and outer bounds for the Gaussian cognitive
//! interference channel with delayed generalized feedback, plus a finite-alphabet
//! engine for the discrete memoryless capacity results.

pub mod baselines;
pub mod dmc;
pub mod rate_terms;
pub mod region;
pub mod scenario;
