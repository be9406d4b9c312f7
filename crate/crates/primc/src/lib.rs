//! Level-1 perfect crystals of affine type A, their energy function, the
//! associated coloured-partition classes, and exact verification of the
//! character formulas they satisfy.
//!
//! The crate is organised around five building blocks:
//!
//! - [`series`]: exact truncated formal series in q, the colour variables
//!   b_0..b_{n-1} and an auxiliary constant-term variable x, with
//!   arbitrary-precision integer coefficients;
//! - [`crystal`]: the cyclic vector-representation crystal, its dual, and
//!   tensor-product crystals with the full Kashiwara data;
//! - [`energy`]: the minimal-difference function on colour pairs, the
//!   graph-computed energy function on the box crystal, and their equality;
//! - [`partitions`]: grounded partitions, generalised Primc and Capparelli
//!   partitions, the path bijection and the staircase-splitting bijection;
//! - [`characters`]: evaluators for the constant-term, lattice-sum,
//!   theta-product, Kac-Peterson and manifestly-positive character formulas,
//!   plus the identity-verification suite that ties them to enumeration.
//!
//! All arithmetic is exact; identity checks compare truncated series
//! coefficient by coefficient.

pub mod characters;
pub mod crystal;
pub mod energy;
pub mod error;
pub mod partitions;
pub mod series;

pub use characters::{CharacterRequest, VerificationReport};
pub use crystal::{BoxVertex, ClassicalWeight, Crystal, PairVertex, VecVertex};
pub use energy::{Colour, EnergyTable};
pub use error::{Error, Result};
pub use partitions::{CapparelliSpec, ColouredPart, GroundedPartition, PrimcPartition};
pub use series::{AlphaConversion, AlphaMonomial, Monomial, Series};
