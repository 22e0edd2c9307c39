//! Primality and factorization for desk-scale integers.
//!
//! Miller-Rabin with the first thirteen prime bases is deterministic below
//! 3.3 * 10^24. Above that a fixed number of extra pseudorandom rounds runs
//! and results are flagged as probabilistic.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const DETERMINISTIC_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const EXTRA_ROUNDS: usize = 24;
const TRIAL_LIMIT: u32 = 10_000;

/// Sign and prime-power factors of a nonzero integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationResult {
    pub sign: i8,
    /// Ascending primes with exponents.
    pub factors: Vec<(BigInt, u32)>,
    /// Set when some factor exceeded the deterministic primality range.
    pub probabilistic: bool,
}

impl FactorizationResult {
    pub fn product(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc
    }

    pub fn exponent_of(&self, p: &BigInt) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }
}

fn deterministic_bound() -> BigInt {
    "3317044064679887385961981".parse().unwrap()
}

/// Returns `(is_prime, certain)`.
pub fn primality(n: &BigInt) -> (bool, bool) {
    if n < &BigInt::from(2) {
        return (false, true);
    }
    for &p in &DETERMINISTIC_BASES {
        let p = BigInt::from(p);
        if n == &p {
            return (true, true);
        }
        if (n % &p).is_zero() {
            return (false, true);
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let witness = |a: &BigInt| -> bool {
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };
    if DETERMINISTIC_BASES.iter().any(|&a| witness(&BigInt::from(a))) {
        return (false, true);
    }
    if n < &deterministic_bound() {
        return (true, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let span = n - BigInt::from(3);
    for _ in 0..EXTRA_ROUNDS {
        let raw = BigInt::from(rng.random::<u128>());
        let a = raw % &span + 2;
        if witness(&a) {
            return (false, true);
        }
    }
    (true, false)
}

pub fn is_prime(n: &BigInt) -> bool {
    primality(n).0
}

pub fn factorize(n: &BigInt) -> FactorizationResult {
    assert!(!n.is_zero(), "cannot factor zero");
    let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    let mut rest = n.abs();
    let mut primes: Vec<BigInt> = Vec::new();
    let mut probabilistic = false;

    let mut p = 2u32;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            primes.push(bp.clone());
        }
        p += if p == 2 { 1 } else { 2 };
    }

    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        let (prime, certain) = primality(&m);
        if prime {
            probabilistic |= !certain;
            primes.push(m);
            continue;
        }
        if let Some(r) = exact_root_square(&m) {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let d = pollard_brent(&m);
        stack.push(&m / &d);
        stack.push(d);
    }

    primes.sort();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for q in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => factors.push((q, 1)),
        }
    }
    FactorizationResult { sign, factors, probabilistic }
}

fn exact_root_square(m: &BigInt) -> Option<BigInt> {
    let r = m.sqrt();
    (&r * &r == *m).then_some(r)
}

/// A nontrivial factor of the odd composite `n`.
fn pollard_brent(n: &BigInt) -> BigInt {
    let one = BigInt::one();
    for c in 1u32.. {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut r: u64 = 1;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    q = q * (&x - &y).abs() % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
    unreachable!()
}

/// Modular reduction into `0..m`.
pub fn mod_floor_u64(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits")
}
