//! Exact scalars and the Laurent-exponential function ring.

pub mod factor;
pub mod field;
pub mod func;
pub mod gauss;
pub mod linalg;
pub mod poly;
pub mod ratfunc;

pub use factor::{factor, real_norm, Factorization};
pub use field::{fmt_rat, parse_rat, rat, rat_int, Coeff, Field, Rat};
pub use func::{Elementary, Func, FuncMono, Mode};
pub use gauss::GaussRat;
pub use linalg::{Elimination, LinearSystem};
pub use poly::Poly;
pub use ratfunc::RatFunc;
