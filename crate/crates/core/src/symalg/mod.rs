//! Exact polynomial symbol algebra over ℚ(i)[√2].

pub mod coeff;
pub mod gaussian;
pub mod multi_index;
pub mod poly;
pub mod serial;

pub use coeff::{rat, ExactCoeff, GaussRational};
pub use gaussian::{gaussian_moment, gaussian_reduce, GaussIntegrand};
pub use multi_index::MultiIndex;
pub use poly::{AntiWick, AwSymbol, Monomial, Poly, SymbolKind, Weyl, WeylSymbol, Wick, WickSymbol};
pub use serial::{AnySymbol, SymbolRecord, TermRecord};
