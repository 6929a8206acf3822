//! The form class group of a negative fundamental discriminant, standing in
//! for `Pic(O_K)`.

mod form;
mod structure;

use thiserror::Error;

pub use form::{class_number, compose, enumerate_reduced, power, principal_form, reduce, QuadraticForm};
pub use structure::{
    group_structure, order_of, p_torsion, prime_ideal_class, ClassGroupStructure, PTorsion, PrimeIdealClass,
    MAX_CLASS_NUMBER,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassGroupError {
    #[error("form ({0},{1},{2}) is not positive definite")]
    NotPositiveDefinite(i64, i64, i64),
    #[error("form ({0},{1},{2}) is not primitive")]
    NotPrimitive(i64, i64, i64),
    #[error("no integral form with a = {0}, b = {1} of discriminant {2}")]
    NoSuchForm(i64, i64, i64),
    #[error("cannot compose forms of discriminants {0} and {1}")]
    DiscriminantMismatch(i128, i128),
    #[error("class number {h} exceeds the supported bound {max}")]
    TooLarge { h: u64, max: u64 },
    #[error("internal error: {0}")]
    Internal(String),
}
