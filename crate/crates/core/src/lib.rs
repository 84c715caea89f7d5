//! Exact-arithmetic calculus for genus-indexed Gromov–Witten sequences in
//! real dimension six.
//!
//! * [`series`]: truncated even power series over [`Rational`].
//! * [`correspondence`]: triangular convolution systems and the blow-up
//!   coefficient families.
//! * [`degeneration`]: partitions, admissible triples, the dimension filter
//!   and evaluation of the degeneration sum against relative-invariant tables.
//! * [`bps`]: conversion between GW sequences and generalized BPS numbers.
//! * [`suite`]: the end-to-end verification run used by `gwcalc verify-paper`.

pub mod bps;
pub mod correspondence;
pub mod degeneration;
pub mod error;
pub mod rational;
pub mod series;
pub mod suite;

pub use correspondence::{CorrespondenceKind, GenusSequence};
pub use error::{Error, Result};
pub use rational::Rational;
pub use series::EvenSeries;
