//! Finite universal algebra: congruence lattices, Mal'tsev-style
//! conditions, abelianization and internal groupoids on finite models.

pub mod abelian;
pub mod algebra;
pub mod caps;
pub mod congruence;
pub mod connector;
pub mod corpus;
pub mod error;
pub mod gumm;
pub mod oracle;

pub use algebra::{FiniteAlgebra, Homomorphism, Operation, ReflexiveGraph, SplitEpi, Term};
pub use caps::Caps;
pub use congruence::{Congruence, Partition};
pub use error::{Error, Result};
