//! Exact arithmetic for alternating Cantor series.
//!
//! Numbers are written as `sum (-1)^n e_n / (d_1 d_2 ... d_n)` over a basis
//! `(d_n)` of integers `d_n >= 2` with digits `0 <= e_n < d_n`.

pub mod basis;
pub mod codec;
pub mod digits;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod interval;
pub mod par;
pub mod rational;
pub mod series;
pub mod transforms;

pub use basis::{Basis, BasisKind, Elements, Periodicity, Rule};
pub use digits::{DigitSpec, DigitString, Kind, Tail};
pub use error::{Error, Result};
pub use interval::Interval;
pub use rational::Rational;
pub use series::{domain, evaluate, evaluate_exact, residual_bounds, tail_sum, Mode, Value};
pub use codec::{canonicalize, compare, encode, twin, Classification, EncodingResult};
pub use par::Execution;
