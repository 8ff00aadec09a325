//! Monodromic Hecke algebras of finite root data.
//!
//! The crate builds the algebra H_n on the basis T_w 1_λ (w in W, λ a
//! character of the n-torsion of the torus), its canonical basis, cells and
//! a-function, the asymptotic ring J, and the twisted-centre counting
//! pipeline on top of J.

pub mod canonical;
pub mod cells;
pub mod centre;
pub mod coxeter;
pub mod cyclotomic;
pub mod error;
pub mod group_algebra;
pub mod hecke;
pub mod kl;
pub mod laurent;
pub mod level;
pub mod root_datum;
pub mod torus;
pub mod twist;
pub mod weyl;

pub use canonical::{CanonicalTable, HTable};
pub use cells::{CellData, JElt, PropertyCheck, PsiReading};
pub use centre::{CentreReport, FactorBounds, GramMatrix, MultiplicityMatrix, Sl2Case};
pub use coxeter::{CoxeterGroup, Elt, Subgroup};
pub use error::{Error, Result};
pub use hecke::{HeckeAlgebra, HeckeElt};
pub use laurent::LaurentPoly;
pub use level::{CellRef, Level};
pub use root_datum::RootDatum;
pub use torus::{Block, CharId, CharSpace, Idx, LambdaData, TorusChar};
pub use twist::{Twist, TwistCase};
pub use weyl::{WeylElt, WeylGroup};
