//! Certificates for the hypotheses of the class-invariant non-vanishing
//! theorem over imaginary quadratic fields.
//!
//! A certificate concerns a triple `(p, K, E)`: an odd prime `p`, an
//! imaginary quadratic field `K` given by its fundamental discriminant, and
//! an elliptic curve `E` over `Q` viewed over the Hilbert class field `K'`
//! of `K`. Each hypothesis is checked by one of the modules below.

pub mod arith;
pub mod certify;
pub mod classgroup;
pub mod cli;
pub mod cmfield;
pub mod elliptic;
pub mod json;
pub mod quadfield;
