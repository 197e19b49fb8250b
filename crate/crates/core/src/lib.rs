//! Harder–Narasimhan filtrations and the skyscraper invariant of finitely
//! presented 2-parameter persistence modules over finite fields.
//!
//! A module is given as a [`GradedMatrix`] presentation. For a degree `α`
//! the submodule `<V_α>` generated at `α` has a Harder–Narasimhan
//! filtration with respect to the slope `dim_α / ∫ dim`. Three independent
//! routes compute it:
//!
//! * [`hn_core`] searches all subspaces of `V_α` by brute force,
//! * [`subdivision`] computes the filtration on a whole grid cell at once
//!   from lower envelopes of slope polynomials,
//! * [`cheng`] runs the randomized shrunk-subspace algorithm on a grid.
//!
//! The [`pipeline`] module assembles per-degree filtrations into skyscraper
//! invariant stores and landscapes.
//!
//! ```
//! use skyscraper_core::{fixtures, hn_core, grmat::{Degree, rat}};
//!
//! let cross = fixtures::cross();
//! let hn = hn_core::hn_filtration_at(&cross, &Degree::ints(0, 1)).unwrap();
//! let slopes: Vec<_> = hn.factors.iter().map(|f| f.slope).collect();
//! assert_eq!(slopes, vec![rat(1, 2), rat(1, 3)]);
//! ```

pub mod cheng;
pub mod field;
pub mod fixtures;
pub mod grmat;
pub mod hn_core;
pub mod invariants;
pub mod pipeline;
pub mod subdivision;

mod error;

pub use error::Error;
pub use field::{DenseMatrix, Elem, FieldExt, PrimeField};
pub use grmat::{Degree, GradedMatrix, Grid, Rat};
pub use invariants::{BettiTable, HNFactorList, HnFactor, SkyscraperQuery, SkyscraperStore, Staircase};
