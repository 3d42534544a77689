//! Topos-style semantics for finite-dimensional quantum systems.
//!
//! The crate builds a finite poset of abelian subalgebras ("contexts") of
//! `M_n(C)`, the spectral presheaf over it, inner and outer daseinisation of
//! self-adjoint operators, the induced arrow into the presheaf of
//! order-preserving/-reversing pairs, truth objects from pure states, and
//! sieve-valued (Heyting) truth values. A backtracking search for global
//! sections of the spectral presheaf exposes Kochen-Specker obstructions.
//!
//! All numerical code is generic over the real scalar type (`f32` or `f64`)
//! through [`Real`]. The aliases at the crate root fix the scalar to `f64`,
//! which is what most callers want.

pub mod context;
pub mod daseinisation;
pub mod error;
pub mod heyting;
pub mod ks;
pub mod linalg;
pub mod presheaf;
pub mod quantity;
pub mod truth;

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

pub use error::{Error, Result};
pub use heyting::HeytingAlgebra;
pub use linalg::Tolerances;
pub use context::ContextId;
pub use presheaf::{AtomSet, GelfandPoint};

/// Real scalar the whole crate is generic over.
pub trait Real: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Lossy conversion from an `f64` constant.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Complex = num_complex::Complex<f64>;
pub type Matrix = linalg::Matrix<f64>;
pub type Operator = linalg::Operator<f64>;
pub type Projection = linalg::Projection<f64>;
pub type StateVector = linalg::StateVector<f64>;
pub type SpectralDecomposition = linalg::SpectralDecomposition<f64>;
pub type SpectralFamily = linalg::SpectralFamily<f64>;
pub type Context = context::Context<f64>;
pub type ContextPoset = context::ContextPoset<f64>;
pub type DaseinisationTable = daseinisation::DaseinisationTable<f64>;
pub type OrderPair = quantity::OrderPair<f64>;
pub type IntervalWindow = quantity::IntervalWindow<f64>;
pub type QuantityArrow<'a> = quantity::QuantityArrow<'a, f64>;
pub type TruthObject<'a> = truth::TruthObject<'a, f64>;
pub type ClopenSubset = presheaf::ClopenSubset;
pub type ClopenSubobject = presheaf::ClopenSubobject;
pub type Sieve = presheaf::Sieve;
pub type OmegaElement = presheaf::OmegaElement;
pub type TruthValue = presheaf::OmegaElement;
pub type GlobalSection = ks::GlobalSection;
