//! Integer domains and the discrete propagators.

pub mod alldiff;
mod domain;
mod element;
mod sum;

pub use alldiff::AllDifferent;
pub use domain::IntDomain;
pub use element::Element;
pub use sum::Sum;
