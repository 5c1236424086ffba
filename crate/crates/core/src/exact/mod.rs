//! Exact arithmetic building blocks: big-integer matrices and their normal
//! forms, sparse multivariate polynomials, and univariate quotient rings.

pub mod gcd;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod quotient;
