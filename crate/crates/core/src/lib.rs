//! Arithmetic of global function fields F_q(t), their places and Kummer
//! towers, and cyclic algebras over them.

pub mod csa;
pub mod error;
pub mod ffield;
pub mod kochen;
pub mod laurent;
pub mod local;
pub mod parse;
pub mod places;
pub mod polyring;
pub mod tower;

pub use error::{Error, ParseError, Result};
pub use ffield::{Fe, Field};
pub use polyring::{Polynomial, RationalFunction};
