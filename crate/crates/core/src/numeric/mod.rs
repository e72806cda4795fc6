//! Floating-point side: quadrature, transforms and estimate checks.
pub mod antiwick_bound;
pub mod bargmann;
pub mod certificate;
pub mod config;
pub mod detector;
pub mod garding;
pub mod hermite;
pub mod quadrature;
pub mod weight;
pub use config::Tolerances;
pub use weight::WeightSpec;
