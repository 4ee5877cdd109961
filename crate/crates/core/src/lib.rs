//! Exact construction of the polynomial sequences `Q_n(x, y, λ)` and
//! `P_n(x, z)` together with machine checks of the Stirling-number
//! convolution identities they generate.
//!
//! All arithmetic is over arbitrary-precision rationals; identities are
//! verified by canonical polynomial equality, never by floating point.

pub mod combinatorics;
pub mod error;
pub mod exact;
pub mod identities;
pub mod poly;
pub mod sequences;
pub mod series;

pub use combinatorics::{
    binom_int, binom_poly, falling_poly, lah, rising_poly, stirling1, stirling2,
    stirling2_explicit, StirlingKind, StirlingTable,
};
pub use error::{Error, Result};
pub use exact::{rat, BigInt, Rational};
pub use identities::{IdentityId, ReportRecord, Status, VerificationReport};
pub use poly::{Assignment, Monomial, MultiPoly, Var};
pub use sequences::{SequenceRoute, Sequences};
pub use series::PowerSeries;
