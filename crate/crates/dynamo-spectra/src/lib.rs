//! Spectral machinery for the smooth Ponomarenko kinematic dynamo at small
//! magnetic diffusivity.
//!
//! The flow u = r Ω(r) θ̂ + U(r) ẑ stretches a mode e^{i(mθ + kz)} b(r) at a
//! critical radius r₀ where the angular and vertical shears align. For
//! diffusivity ε → 0 and mode numbers m ~ M ε^{-1/3}, k ~ K ε^{-1/3} the
//! leading eigenvalue scales as λ = ε^{1/3} μ⋆, with μ⋆ computable in closed
//! form from the profile data at r₀. This crate provides
//!
//! * profile presets, the transport function T, and admissibility audits
//!   ([`profiles`]),
//! * the closed-form layer constants and growth rate ([`gilbert`]),
//! * the special functions the frozen-coefficient kernels need, with scaled
//!   values and honest error estimates ([`specfun`]),
//! * glued approximate Green's functions, the Neumann-series resolvent, and
//!   a contour-integral Riesz projector ([`greens`]),
//! * banded finite-difference operators, shift-invert eigensolves, and mode
//!   postprocessing ([`discrete`]),
//! * a config-driven command-line pipeline ([`cli`]).
//!
//! Everything is deterministic: randomized checks use fixed-seed ChaCha
//! streams and artifacts are written with fixed formatting.

pub mod cli;
pub mod discrete;
pub mod gilbert;
pub mod greens;
pub mod profiles;
pub mod specfun;

pub use gilbert::{gilbert_constants, growth_rate, GilbertData};
pub use profiles::{audit, select_integer_modes, DomainKind, VelocityProfile};
