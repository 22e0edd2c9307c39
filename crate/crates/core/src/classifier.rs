//! Membership in the set of Q16 integer group determinants.
//!
//! Even values are exactly the multiples of `2^10`. Odd values are those
//! `1 mod 8` together with the `5 mod 8` values divisible by `p^2` for some
//! prime `p = 7 mod 8`. Residues are taken in `0..8`, so negative integers
//! are classified by their residue class; every such verdict is backed by a
//! verified witness.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::{factorize, mod_floor_u64};
use crate::witness::{witness_even, witness_odd_1mod8, witness_odd_5mod8, WitnessCertificate};

pub use crate::primes::FactorizationResult;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "recipe", rename_all = "snake_case")]
pub enum Recipe {
    /// `t = n / 2^10 mod 4`.
    EvenFamily { t: u8 },
    Odd1Mod8,
    Odd5Mod8 { p: BigInt, m: BigInt },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NotAchievableReason {
    EvenNotMultipleOf1024,
    OddCongruent3Mod4,
    FiveMod8NoAdmissiblePrimeSquare,
}

impl fmt::Display for NotAchievableReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NotAchievableReason::EvenNotMultipleOf1024 => "even but not a multiple of 2^10",
            NotAchievableReason::OddCongruent3Mod4 => "odd and congruent to 3 mod 4",
            NotAchievableReason::FiveMod8NoAdmissiblePrimeSquare => {
                "5 mod 8 with no square of a prime p = 7 mod 8 dividing it"
            }
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Classification {
    Achievable { recipe: Recipe },
    NotAchievable { reason: NotAchievableReason },
}

impl Classification {
    pub fn is_achievable(&self) -> bool {
        matches!(self, Classification::Achievable { .. })
    }
}

/// Least prime `p = 7 mod 8` with `p^2 | n`, for nonzero `n`.
pub fn smallest_admissible_prime(n: &BigInt) -> Option<BigInt> {
    factorize(n)
        .factors
        .into_iter()
        .find(|(p, e)| *e >= 2 && mod_floor_u64(p, 8) == 7)
        .map(|(p, _)| p)
}

pub fn classify(n: &BigInt) -> Classification {
    use Classification::*;
    if n.is_even() {
        let (t, r) = n.div_mod_floor(&BigInt::from(1024));
        return if r.is_zero() {
            Achievable { recipe: Recipe::EvenFamily { t: mod_floor_u64(&t, 4) as u8 } }
        } else {
            NotAchievable { reason: NotAchievableReason::EvenNotMultipleOf1024 }
        };
    }
    match mod_floor_u64(n, 8) {
        1 => Achievable { recipe: Recipe::Odd1Mod8 },
        5 => match smallest_admissible_prime(n) {
            Some(p) => {
                let m = n / (&p * &p);
                Achievable { recipe: Recipe::Odd5Mod8 { p, m } }
            }
            None => NotAchievable { reason: NotAchievableReason::FiveMod8NoAdmissiblePrimeSquare },
        },
        _ => NotAchievable { reason: NotAchievableReason::OddCongruent3Mod4 },
    }
}

/// Classifies `n` and, when achievable, builds its verified certificate.
pub fn classify_and_witness(n: &BigInt) -> Result<std::result::Result<WitnessCertificate, NotAchievableReason>> {
    match classify(n) {
        Classification::NotAchievable { reason } => Ok(Err(reason)),
        Classification::Achievable { recipe } => {
            let cert = match recipe {
                Recipe::EvenFamily { .. } => witness_even(n)?,
                Recipe::Odd1Mod8 => witness_odd_1mod8(n)?,
                Recipe::Odd5Mod8 { p, .. } => witness_odd_5mod8(n, &p)?,
            };
            if !cert.verified {
                return Err(Error::InternalInconsistency(format!("certificate for {n} failed verification")));
            }
            Ok(Ok(cert))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn reason(n: i64) -> Option<NotAchievableReason> {
        match classify(&big(n)) {
            Classification::NotAchievable { reason } => Some(reason),
            _ => None,
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&big(17)), Classification::Achievable { recipe: Recipe::Odd1Mod8 });
        assert_eq!(reason(13), Some(NotAchievableReason::FiveMod8NoAdmissiblePrimeSquare));
        assert_eq!(
            classify(&big(245)),
            Classification::Achievable { recipe: Recipe::Odd5Mod8 { p: big(7), m: big(5) } }
        );
        assert_eq!(reason(512), Some(NotAchievableReason::EvenNotMultipleOf1024));
        assert_eq!(reason(3), Some(NotAchievableReason::OddCongruent3Mod4));
        assert_eq!(reason(7), Some(NotAchievableReason::OddCongruent3Mod4));
        assert_eq!(classify(&big(-7)), Classification::Achievable { recipe: Recipe::Odd1Mod8 });
        assert_eq!(classify(&big(0)), Classification::Achievable { recipe: Recipe::EvenFamily { t: 0 } });
        assert_eq!(classify(&big(-3)), Classification::NotAchievable {
            reason: NotAchievableReason::FiveMod8NoAdmissiblePrimeSquare
        });
    }

    #[test]
    fn smallest_prime_is_chosen() {
        // 5 * 23^2 * 7^2 = 129605, 129605 = 5 mod 8
        let n = big(5 * 23 * 23 * 49);
        assert_eq!(mod_floor_u64(&n, 8), 5);
        assert_eq!(
            classify(&n),
            Classification::Achievable { recipe: Recipe::Odd5Mod8 { p: big(7), m: big(5 * 23 * 23) } }
        );
    }

    #[test]
    fn classify_and_witness_examples() {
        let c = classify_and_witness(&big(17)).unwrap().unwrap();
        assert_eq!(c.n, big(17));
        assert!(c.verify());
        let c = classify_and_witness(&big(245)).unwrap().unwrap();
        assert!(c.verify());
        assert_eq!(classify_and_witness(&big(12)).unwrap(), Err(NotAchievableReason::EvenNotMultipleOf1024));
    }

    proptest! {
        #[test]
        fn cofactor_of_admissible_square_is_5_mod_8(k in -100_000i64..100_000, pi in 0usize..6) {
            let p = [7i64, 23, 31, 47, 71, 79][pi];
            let n = big(k) * 8 + 5;
            let p2 = big(p * p);
            // multiply by p^2 to force divisibility, keeping n = 5 mod 8
            let n = n * &p2;
            prop_assert_eq!(mod_floor_u64(&n, 8), 5);
            prop_assert_eq!(mod_floor_u64(&(n / p2), 8), 5);
        }
    }
}
