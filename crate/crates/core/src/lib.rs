//! Integer group determinants of the generalized quaternion group
//! `Q16 = <X, Y | X^8 = 1, Y^2 = X^4, XY = YX^-1>`.
//!
//! The crate evaluates group determinants two independent ways (a direct
//! 16x16 fraction-free elimination and the representation-theoretic
//! factorization `A * B * C^2 * D^2`), decides which integers occur as
//! determinants, and builds explicit, re-verifiable witnesses for every
//! value that does.

pub mod analysis;
pub mod classifier;
pub mod document;
pub mod error;
pub mod exact_eval;
pub mod group_algebra;
pub mod primes;
pub mod quad_ring;
pub mod witness;

pub use classifier::{classify, classify_and_witness, Classification, NotAchievableReason, Recipe};
pub use error::{Error, Result};
pub use exact_eval::{factored_form, determinant_from_factored, FactoredForm, QuadraticSqrt2};
pub use group_algebra::{direct_determinant, GroupRingElement};
pub use witness::WitnessCertificate;
