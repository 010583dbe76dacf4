//! `treepoly`: exact polytopes of exchangeable, finitely sampling consistent
//! distributions on rooted binary tree shapes.
//!
//! The crate is organised bottom-up:
//!
//! - [`shapes`]: canonical unlabeled tree shapes, enumeration, parsing,
//!   restriction to leaf subsets and induced-pattern counting.
//! - [`density`]: the marginalization map in shape coordinates (induced
//!   subtree densities and the density matrix whose columns span `EX_n^m`).
//! - [`models`]: Markov branching / beta-splitting and the multinomial model.
//! - [`geometry`]: exact rational LP, vertex certification and containment.
//! - [`experiments`]: claim-by-claim verification reports and figure data.
//!
//! All probabilities are exact [`Rational`]s; there is no floating point on
//! any path that produces a reported value.
//!
//! ```
//! use treepoly::{density::density_row, shapes::parse_shape, rational::format_rational};
//!
//! let t = parse_shape("((*,*),((*,*),*))").unwrap();
//! let row = density_row(&t, 4).unwrap();
//! let shown: Vec<String> = row.probs().iter().map(format_rational).collect();
//! assert_eq!(shown, ["2/5", "3/5"]);
//! ```

#![forbid(unsafe_code)]

pub mod caps;
pub mod density;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod models;
pub mod rational;
pub mod shapes;

pub use caps::Caps;
pub use error::{Error, Result};
pub use rational::Rational;
pub use shapes::{ShapeIndex, TreeShape};
