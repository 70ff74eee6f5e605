//! Algebraic Wasserstein distances between persistence modules over finite
//! linear quivers and two-parameter grids, computed exactly.

pub mod assignment;
pub mod coords;
pub mod decompose;
pub mod error;
pub mod field;
pub mod filtration;
pub mod interval;
pub mod io;
pub mod matching;
pub mod matrix;
pub mod measure;
pub mod module;
pub mod poset;
pub mod rational;
pub mod structure;
pub mod verify;
pub mod wasserstein;
pub mod zigzag;

pub use error::{Error, Result};
pub use field::Field;
pub use interval::{Barcode, Interval};
pub use matrix::Matrix;
pub use measure::Measure;
pub use module::{DimensionFunction, Morphism, PersistenceModule};
pub use poset::{GridPoset, LinearPoset, Orientation, Poset};
pub use rational::{Extended, Rational};
pub use zigzag::{Direction, Zigzag};
pub use decompose::{decompose, module_from_barcode, CoherentBasis};
pub use matching::{induced_matching, AlgebraicMatching, MatchKind};
pub use structure::{structure_from_interval, structure_to_interval, NestedChain};
pub use wasserstein::{Exponent, Wasserstein};
