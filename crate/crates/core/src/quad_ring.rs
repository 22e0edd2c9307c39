//! Arithmetic in `Z[sqrt 2]` needed to realize values `m p^2`: square roots
//! of 2 modulo `p`, the splitting `X^2 - 2Y^2 = p`, adjustment by the unit
//! `3 + 2 sqrt 2`, and decompositions of `2(X + Y sqrt 2)` into four squares.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_eval::QuadraticSqrt2;
use crate::primes::{is_prime, mod_floor_u64};

/// A totally positive solution of `X^2 - 2Y^2 = p` with `X, Y > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitSolution {
    pub x: BigInt,
    pub y: BigInt,
    pub p: BigInt,
}

impl SplitSolution {
    pub fn element(&self) -> QuadraticSqrt2 {
        QuadraticSqrt2::new(self.x.clone(), self.y.clone())
    }

    pub fn is_valid(&self) -> bool {
        let z = self.element();
        z.norm() == self.p
            && self.x.is_positive()
            && self.y.is_positive()
            && z.is_totally_positive()
            && self.x.is_odd()
            && self.y.is_odd()
    }

    pub fn x_mod4(&self) -> u64 {
        mod_floor_u64(&self.x, 4)
    }
}

/// Four pairs `(alpha_j, beta_j)` with `sum (alpha_j + beta_j sqrt 2)^2 = 2(X + Y sqrt 2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FourSquares {
    pub pairs: [(BigInt, BigInt); 4],
}

impl FourSquares {
    pub fn from_i64(pairs: [(i64, i64); 4]) -> Self {
        Self { pairs: pairs.map(|(a, b)| (BigInt::from(a), BigInt::from(b))) }
    }

    /// `sum (alpha + beta sqrt 2)^2`.
    pub fn sum(&self) -> QuadraticSqrt2 {
        self.pairs.iter().fold(QuadraticSqrt2::default(), |acc, (a, b)| {
            let s = QuadraticSqrt2::new(a.clone(), b.clone());
            &acc + &(&s * &s)
        })
    }

    pub fn reconstructs(&self, s: &SplitSolution) -> bool {
        self.sum() == QuadraticSqrt2::new(&s.x * 2, &s.y * 2)
    }
}

impl fmt::Display for FourSquares {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Parity layout of a normalized decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    /// all alpha odd, only beta_1 odd
    Case1OneOddBeta,
    /// all alpha odd, beta_1..beta_3 odd
    Case1ThreeOddBeta,
    /// alpha_3, alpha_4 even with alpha_3 = alpha_4 mod 4
    Case2CongruentMod4,
    /// alpha_3, alpha_4 even with alpha_3 != alpha_4 mod 4
    Case2IncongruentMod4,
}

impl CaseLabel {
    /// Residue of `X` mod 4 forced by the layout.
    pub fn x_mod4(self) -> u64 {
        match self {
            CaseLabel::Case1OneOddBeta | CaseLabel::Case2CongruentMod4 => 3,
            CaseLabel::Case1ThreeOddBeta | CaseLabel::Case2IncongruentMod4 => 1,
        }
    }
}

/// The smaller square root of 2 modulo an odd prime `p = +-1 mod 8`.
pub fn sqrt2_mod_p(p: &BigInt) -> Result<BigInt> {
    let r8 = mod_floor_u64(p, 8);
    if !p.is_positive() || (r8 != 1 && r8 != 7) {
        return Err(Error::NonResidue(p.clone()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    let two = BigInt::from(2);
    let one = BigInt::one();
    let pm1 = p - &one;
    let s = pm1.trailing_zeros().unwrap_or(0);
    let q = &pm1 >> s;

    // Tonelli-Shanks; the quadratic non-residue search is deterministic.
    let mut z = BigInt::from(3);
    while z.modpow(&(&pm1 >> 1), p) != pm1 {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = two.modpow(&q, p);
    let mut r = two.modpow(&((&q + 1) >> 1), p);
    while !t.is_one() {
        let mut i = 0;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = &t2 * &t2 % p;
            i += 1;
            if i == m {
                return Err(Error::NonResidue(p.clone()));
            }
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        m = i;
        c = &b * &b % p;
        t = t * &c % p;
        r = r * b % p;
    }
    let other = p - &r;
    Ok(r.min(other))
}

/// Nearest integer to `num / den`, halves rounded up.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
    let twice: BigInt = num * 2 + &den;
    twice.div_floor(&(den * 2))
}

/// Euclidean division in `Z[sqrt 2]` with respect to `|N|`.
fn euclid_rem(a: &QuadraticSqrt2, b: &QuadraticSqrt2) -> QuadraticSqrt2 {
    let nb = b.norm();
    let num = a * &b.conj();
    let q = QuadraticSqrt2::new(round_div(&num.x, &nb), round_div(&num.y, &nb));
    a - &(&q * b)
}

fn gcd_sqrt2(a: &QuadraticSqrt2, b: &QuadraticSqrt2) -> QuadraticSqrt2 {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !(b.x.is_zero() && b.y.is_zero()) {
        let r = euclid_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn unit() -> QuadraticSqrt2 {
    QuadraticSqrt2::new(3, 2)
}

fn unit_inverse() -> QuadraticSqrt2 {
    QuadraticSqrt2::new(3, -2)
}

/// The totally positive solution of `X^2 - 2Y^2 = p` with least `Y > 0`.
///
/// A generator of a prime above `p` comes from the Euclidean gcd of `p` and
/// `r + sqrt 2`, `r^2 = 2 mod p`. Along the orbit `pi * (3 + 2 sqrt 2)^k` the
/// `Y` coordinate is strictly increasing in `k`, so the least positive `Y`
/// over the orbit and its conjugate sits at the sign change.
pub fn split_prime(p: &BigInt) -> Result<SplitSolution> {
    if mod_floor_u64(p, 8) != 7 || !p.is_positive() {
        return Err(Error::InvalidResidue(p.clone()));
    }
    let r = sqrt2_mod_p(p)?;
    let mut pi = gcd_sqrt2(&QuadraticSqrt2::new(p.clone(), 0), &QuadraticSqrt2::new(r, 1));
    let n = pi.norm();
    if n == -p {
        pi = &pi * &QuadraticSqrt2::new(1, 1);
    } else if &n != p {
        return Err(Error::InternalInconsistency(format!("gcd has norm {n}, expected +-{p}")));
    }
    if pi.x.is_negative() {
        pi = -pi;
    }
    while !pi.y.is_positive() {
        pi = &pi * &unit();
    }
    loop {
        let down = &pi * &unit_inverse();
        if down.y.is_positive() {
            pi = down;
        } else {
            break;
        }
    }
    let below = (&pi * &unit_inverse()).conj();
    let best = match below.y.cmp(&pi.y) {
        Ordering::Less => below,
        Ordering::Equal if below.x < pi.x => below,
        _ => pi,
    };
    let sol = SplitSolution { x: best.x, y: best.y, p: p.clone() };
    if !sol.is_valid() {
        return Err(Error::InternalInconsistency(format!("split of {p} invalid: {sol:?}")));
    }
    Ok(sol)
}

/// Returns a solution for the same `p` with `X = target (mod 4)`.
///
/// Multiplying by `3 +- 2 sqrt 2` sends `X` to `3X +- 4Y = -X (mod 4)`. The
/// inverse unit is used when it keeps `Y > 0`, otherwise the unit itself.
pub fn unit_adjust(s: &SplitSolution, target: u64) -> SplitSolution {
    assert!(target == 1 || target == 3, "target residue must be 1 or 3");
    if s.x_mod4() == target {
        return s.clone();
    }
    let z = s.element();
    let down = &z * &unit_inverse();
    let next = if down.y.is_positive() { down } else { &z * &unit() };
    SplitSolution { x: next.x, y: next.y, p: s.p.clone() }
}

const SEARCH_LIMIT: i128 = 1 << 60;

/// Single-square solutions of `rem = (alpha + beta sqrt 2)^2`, canonical sign.
fn square_roots(r0: i128, r1: i128) -> Vec<(i128, i128)> {
    if r0 < 0 || r1 % 2 != 0 {
        return Vec::new();
    }
    let disc = r0 * r0 - 2 * r1 * r1;
    if disc < 0 {
        return Vec::new();
    }
    let n = disc.sqrt();
    if n * n != disc {
        return Vec::new();
    }
    let half = r1 / 2; // alpha * beta
    let mut out = Vec::new();
    for twice_a2 in [r0 + n, r0 - n] {
        if twice_a2 % 2 != 0 {
            continue;
        }
        let a2 = twice_a2 / 2;
        let rest = r0 - a2;
        if a2 < 0 || rest < 0 || rest % 2 != 0 {
            continue;
        }
        let (a, b) = (a2.sqrt(), (rest / 2).sqrt());
        if a * a != a2 || b * b != rest / 2 {
            continue;
        }
        let b = if half < 0 { -b } else { b };
        if a * b != half {
            continue;
        }
        let pair = canonical(a, b);
        if !out.contains(&pair) {
            out.push(pair);
        }
    }
    out.sort_by_key(|p| std::cmp::Reverse(key(*p)));
    out
}

fn canonical(a: i128, b: i128) -> (i128, i128) {
    if a < 0 || (a == 0 && b < 0) {
        (-a, -b)
    } else {
        (a, b)
    }
}

/// Candidate order key; the search visits keys in descending order.
fn key((a, b): (i128, i128)) -> (i128, i128, bool) {
    (a.abs(), b.abs(), b > 0)
}

fn totally_nonnegative(x: i128, y: i128) -> bool {
    let sign = |x: i128, y: i128| -> Ordering {
        if x >= 0 && y >= 0 {
            (x + y).cmp(&0)
        } else if x <= 0 && y <= 0 {
            0.cmp(&-(x + y))
        } else if x > 0 {
            (x * x).cmp(&(2 * y * y))
        } else {
            (2 * y * y).cmp(&(x * x))
        }
    };
    sign(x, y) != Ordering::Less && sign(x, -y) != Ordering::Less
}

/// Step budget for one four-squares search.
const SEARCH_BUDGET: u64 = 50_000_000;

/// Lazy depth-first search. Candidates for each level are generated row by
/// row (fixed `alpha`), restricted to the interval of `beta` whose square
/// fits under the remainder in both embeddings.
struct Search {
    allow_zero: bool,
    steps: u64,
}

/// Square roots of both embeddings of `r0 + r1 sqrt 2`, with a slack that
/// covers the floating point error; every candidate is then checked exactly.
fn embedding_roots(r0: i128, r1: i128) -> (f64, f64, f64) {
    let (x, y) = (r0 as f64, r1 as f64 * std::f64::consts::SQRT_2);
    let slack = 2.0 + (r0.unsigned_abs() as f64 + y.abs()).sqrt() * 1e-6;
    ((x + y).max(0.0).sqrt(), (x - y).max(0.0).sqrt(), slack)
}

impl Search {
    fn run(&mut self, rem: (i128, i128), prev: Option<(i128, i128)>, left: usize, out: &mut Vec<(i128, i128)>) -> Result<bool> {
        if left == 1 {
            let bound = prev.map(key);
            for root in square_roots(rem.0, rem.1) {
                if !self.allow_zero && root == (0, 0) {
                    continue;
                }
                if bound.is_some_and(|b| key(root) <= b) {
                    out.push(root);
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        let (s1, s2, slack) = embedding_roots(rem.0, rem.1);
        let mut amax = ((s1 + s2) / 2.0 + slack).floor() as i128;
        if let Some((pa, _)) = prev {
            amax = amax.min(pa);
        }
        for a in (0..=amax).rev() {
            let af = a as f64;
            let lo = ((-s1 - af).max(af - s2) / std::f64::consts::SQRT_2 - slack).floor() as i128;
            let hi = ((s1 - af).min(af + s2) / std::f64::consts::SQRT_2 + slack).ceil() as i128;
            if lo > hi {
                continue;
            }
            let mut bm_max = lo.abs().max(hi.abs());
            let bm_min = if lo <= 0 && hi >= 0 { 0 } else { lo.abs().min(hi.abs()) };
            if let Some((pa, pb)) = prev {
                if a == pa {
                    bm_max = bm_max.min(pb.abs());
                }
            }
            for bm in (bm_min..=bm_max).rev() {
                let signs: &[i128] = if a == 0 || bm == 0 { &[1] } else { &[1, -1] };
                for &sign in signs {
                    let b = sign * bm;
                    if b < lo || b > hi || prev.is_some_and(|p| key((a, b)) > key(p)) {
                        continue;
                    }
                    if !self.allow_zero && a == 0 && b == 0 {
                        continue;
                    }
                    self.steps += 1;
                    if self.steps > SEARCH_BUDGET {
                        return Err(Error::TooLarge(format!(
                            "four-squares search exceeded {SEARCH_BUDGET} steps"
                        )));
                    }
                    let next = (rem.0 - a * a - 2 * b * b, rem.1 - 2 * a * b);
                    if !totally_nonnegative(next.0, next.1) {
                        continue;
                    }
                    out.push((a, b));
                    if self.run(next, Some((a, b)), left - 1, out)? {
                        return Ok(true);
                    }
                    out.pop();
                }
            }
        }
        Ok(false)
    }
}

/// Decomposes `t0 + t1 sqrt 2` into four squares of `Z[sqrt 2]`.
///
/// Depth-first over candidates `(alpha, beta)` with `alpha >= 0` (and
/// `beta >= 0` when `alpha = 0`), visited in descending `(|alpha|, |beta|)`
/// order with positive `beta` first; entries are non-increasing in that order.
/// Decompositions with four nonzero squares are preferred.
pub fn four_squares(target: &QuadraticSqrt2) -> Result<FourSquares> {
    let fail = || Error::NoDecomposition(format!("{} + {} sqrt2", target.x, target.y));
    if target.y.is_odd() || !target.is_totally_nonnegative() {
        return Err(fail());
    }
    let (t0, t1) = match (target.x.to_i128(), target.y.to_i128()) {
        (Some(a), Some(b)) if a < SEARCH_LIMIT && b.abs() < SEARCH_LIMIT => (a, b),
        _ => return Err(Error::TooLarge(format!("{} + {} sqrt2", target.x, target.y))),
    };
    for allow_zero in [false, true] {
        let mut search = Search { allow_zero, steps: 0 };
        let mut out = Vec::with_capacity(4);
        if search.run((t0, t1), None, 4, &mut out)? {
            let pairs: [(BigInt, BigInt); 4] =
                std::array::from_fn(|j| (BigInt::from(out[j].0), BigInt::from(out[j].1)));
            return Ok(FourSquares { pairs });
        }
    }
    Err(fail())
}

/// Four-square decomposition of `2(X + Y sqrt 2)`.
pub fn cohn_four_squares(s: &SplitSolution) -> Result<FourSquares> {
    let fs = four_squares(&QuadraticSqrt2::new(&s.x * 2, &s.y * 2))?;
    if !fs.reconstructs(s) {
        return Err(Error::InternalInconsistency(format!("{fs} does not sum to 2({} + {} sqrt2)", s.x, s.y)));
    }
    Ok(fs)
}

/// Parity layout reached by `pairs` as ordered, if any.
pub fn layout_case(pairs: &[(BigInt, BigInt); 4]) -> Option<CaseLabel> {
    let odd = |v: &BigInt| v.is_odd();
    let ao: Vec<bool> = pairs.iter().map(|(a, _)| odd(a)).collect();
    let bo: Vec<bool> = pairs.iter().map(|(_, b)| odd(b)).collect();
    if !(ao[0] && ao[1] && ao[2] == ao[3] && bo[0]) {
        return None;
    }
    if ao[2] {
        match bo.iter().filter(|&&b| b).count() {
            1 => Some(CaseLabel::Case1OneOddBeta),
            3 if !bo[3] => Some(CaseLabel::Case1ThreeOddBeta),
            _ => None,
        }
    } else if !bo[1] && bo[2] && !bo[3] {
        if mod_floor_u64(&(&pairs[2].0 - &pairs[3].0), 4) == 0 {
            Some(CaseLabel::Case2CongruentMod4)
        } else {
            Some(CaseLabel::Case2IncongruentMod4)
        }
    } else {
        None
    }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| p.contains(&i)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Reorders the pairs into the layout the coefficient assignment expects.
///
/// Permutations are scanned in lexicographic order and the first match wins.
/// Joint negation `(alpha, beta) -> (-alpha, -beta)` leaves every parity
/// unchanged, so permutations alone decide reachability.
pub fn normalize_decomposition(fs: &FourSquares) -> Result<(FourSquares, CaseLabel)> {
    for perm in permutations4() {
        let pairs: [(BigInt, BigInt); 4] = perm.map(|i| fs.pairs[i].clone());
        if let Some(label) = layout_case(&pairs) {
            return Ok((FourSquares { pairs }, label));
        }
    }
    Err(Error::NoValidArrangement)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Eager enumeration of every candidate in the search order, used as an
    /// oracle for the lazy search.
    fn reference_four_squares(t0: i128, t1: i128) -> Option<Vec<(i128, i128)>> {
        fn go(c: &[((i128, i128), (i128, i128))], rem: (i128, i128), start: usize, left: usize, zero: bool, out: &mut Vec<(i128, i128)>) -> bool {
            if left == 1 {
                let bound = key(c[start].0);
                for root in square_roots(rem.0, rem.1) {
                    if (zero || root != (0, 0)) && key(root) <= bound {
                        out.push(root);
                        return true;
                    }
                }
                return false;
            }
            for idx in start..c.len() {
                let (pair, sq) = c[idx];
                let next = (rem.0 - sq.0, rem.1 - sq.1);
                if !totally_nonnegative(next.0, next.1) {
                    continue;
                }
                out.push(pair);
                if go(c, next, idx, left - 1, zero, out) {
                    return true;
                }
                out.pop();
            }
            false
        }
        for zero in [false, true] {
            let mut c = Vec::new();
            for a in (0..=t0.sqrt()).rev() {
                for bm in (0..=((t0 - a * a) / 2).sqrt()).rev() {
                    let signs: &[i128] = if a == 0 || bm == 0 { &[1] } else { &[1, -1] };
                    for &s in signs {
                        let b = s * bm;
                        if !zero && a == 0 && b == 0 {
                            continue;
                        }
                        let sq = (a * a + 2 * b * b, 2 * a * b);
                        if totally_nonnegative(t0 - sq.0, t1 - sq.1) {
                            c.push(((a, b), sq));
                        }
                    }
                }
            }
            let mut out = Vec::new();
            if go(&c, (t0, t1), 0, 4, zero, &mut out) {
                return Some(out);
            }
        }
        None
    }

    #[test]
    fn lazy_search_matches_reference() {
        for t0 in 0..70i128 {
            for t1 in (-60..=60i128).step_by(2) {
                if !totally_nonnegative(t0, t1) {
                    continue;
                }
                let got = four_squares(&QuadraticSqrt2::new(t0, t1)).ok().map(|fs| {
                    fs.pairs.iter().map(|(a, b)| (a.to_i128().unwrap(), b.to_i128().unwrap())).collect::<Vec<_>>()
                });
                assert_eq!(got, reference_four_squares(t0, t1), "target {t0} + {t1} sqrt2");
            }
        }
    }

    #[test]
    fn lazy_search_handles_large_primes() {
        for p in ["1000000000039", "1000000000000000031"] {
            let s = split_prime(&p.parse().unwrap()).unwrap();
            for target in [1, 3] {
                let fs = cohn_four_squares(&unit_adjust(&s, target)).unwrap();
                assert!(fs.reconstructs(&unit_adjust(&s, target)));
            }
        }
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn split(p: i64) -> (i64, i64) {
        let s = split_prime(&big(p)).unwrap();
        (s.x.to_i64().unwrap(), s.y.to_i64().unwrap())
    }

    /// Least `Y > 0` with `p + 2 Y^2` a square.
    fn brute_split(p: i64) -> (i64, i64) {
        (1..)
            .find_map(|y: i64| {
                let t = p + 2 * y * y;
                let x = (t as f64).sqrt() as i64;
                (x - 1..=x + 1).find(|&x| x * x == t).map(|x| (x, y))
            })
            .unwrap()
    }

    fn sol(x: i64, y: i64, p: i64) -> SplitSolution {
        SplitSolution { x: big(x), y: big(y), p: big(p) }
    }

    #[test]
    fn sqrt2_examples() {
        assert_eq!(sqrt2_mod_p(&big(7)).unwrap(), big(3));
        assert_eq!(sqrt2_mod_p(&big(23)).unwrap(), big(5));
        assert_eq!(sqrt2_mod_p(&big(17)).unwrap(), big(6));
        assert_eq!(sqrt2_mod_p(&big(13)), Err(Error::NonResidue(big(13))));
        assert_eq!(sqrt2_mod_p(&big(11)), Err(Error::NonResidue(big(11))));
        assert_eq!(sqrt2_mod_p(&big(15)), Err(Error::NotPrime(big(15))));
        assert_eq!(sqrt2_mod_p(&big(2)), Err(Error::NonResidue(big(2))));
    }

    #[test]
    fn sqrt2_for_many_primes() {
        for p in (3..5000i64).filter(|&p| is_prime(&big(p)) && (p % 8 == 1 || p % 8 == 7)) {
            let r = sqrt2_mod_p(&big(p)).unwrap().to_i64().unwrap();
            assert!(0 < r && r <= p / 2, "{p}");
            assert_eq!(r * r % p, 2, "{p}");
        }
    }

    #[test]
    fn split_examples() {
        assert_eq!(split(7), (3, 1));
        assert_eq!(split(23), (5, 1));
        assert_eq!(split(31), (7, 3));
        assert_eq!(split_prime(&big(17)), Err(Error::InvalidResidue(big(17))));
        assert_eq!(split_prime(&big(15)), Err(Error::NotPrime(big(15))));
    }

    #[test]
    fn split_matches_enumeration() {
        for p in (7..3000i64).step_by(8).filter(|&p| is_prime(&big(p))) {
            assert_eq!(split(p), brute_split(p), "p = {p}");
        }
    }

    #[test]
    fn unit_adjust_examples() {
        assert_eq!(unit_adjust(&sol(3, 1, 7), 1), sol(13, 9, 7));
        assert_eq!(unit_adjust(&sol(3, 1, 7), 3), sol(3, 1, 7));
        assert_eq!(unit_adjust(&sol(13, 9, 7), 3), sol(3, 1, 7));
        for p in [7i64, 23, 31, 47, 71, 79, 103, 127, 1031] {
            let s = split_prime(&big(p)).unwrap();
            for target in [1, 3] {
                let t = unit_adjust(&s, target);
                assert!(t.is_valid(), "{t:?}");
                assert_eq!(t.x_mod4(), target);
            }
        }
    }

    #[test]
    fn four_squares_examples() {
        assert_eq!(
            cohn_four_squares(&sol(3, 1, 7)).unwrap(),
            FourSquares::from_i64([(1, 1), (1, 0), (1, 0), (1, 0)])
        );
        assert_eq!(
            cohn_four_squares(&sol(13, 9, 7)).unwrap(),
            FourSquares::from_i64([(3, 2), (1, 1), (1, 1), (1, 1)])
        );
        assert!(matches!(four_squares(&QuadraticSqrt2::new(6, 1)), Err(Error::NoDecomposition(_))));
        assert!(matches!(four_squares(&QuadraticSqrt2::new(2, 2)), Err(Error::NoDecomposition(_))));
    }

    #[test]
    fn four_squares_with_zero_fallback() {
        let fs = four_squares(&QuadraticSqrt2::new(1, 0)).unwrap();
        assert_eq!(fs, FourSquares::from_i64([(1, 0), (0, 0), (0, 0), (0, 0)]));
        let fs = four_squares(&QuadraticSqrt2::new(0, 0)).unwrap();
        assert_eq!(fs.sum(), QuadraticSqrt2::new(0, 0));
    }

    #[test]
    fn four_squares_reconstructs_even_b() {
        for x in 0..60i64 {
            for y in -40..=40i64 {
                let t = QuadraticSqrt2::new(x, 2 * y);
                if !t.is_totally_nonnegative() {
                    continue;
                }
                let fs = four_squares(&t).unwrap_or_else(|e| panic!("{x} + {} sqrt2: {e}", 2 * y));
                assert_eq!(fs.sum(), t);
            }
        }
    }

    #[test]
    fn normalize_examples() {
        let (fs, label) = normalize_decomposition(&FourSquares::from_i64([(1, 1), (1, 0), (1, 0), (1, 0)])).unwrap();
        assert_eq!(fs, FourSquares::from_i64([(1, 1), (1, 0), (1, 0), (1, 0)]));
        assert_eq!(label, CaseLabel::Case1OneOddBeta);

        let (fs, label) = normalize_decomposition(&FourSquares::from_i64([(3, 2), (1, 1), (1, 1), (1, 1)])).unwrap();
        assert_eq!(fs, FourSquares::from_i64([(1, 1), (1, 1), (1, 1), (3, 2)]));
        assert_eq!(label, CaseLabel::Case1ThreeOddBeta);

        // (3+sqrt2)^2 + (1+0)^2 + (2+sqrt2)^2 + 0 = 18 + 10 sqrt2 = 2(9 + 5 sqrt2)
        let fs = FourSquares::from_i64([(2, 1), (3, 1), (0, 0), (1, 0)]);
        assert_eq!(fs.sum(), QuadraticSqrt2::new(18, 10));
        let (fs, label) = normalize_decomposition(&fs).unwrap();
        assert_eq!(fs, FourSquares::from_i64([(3, 1), (1, 0), (2, 1), (0, 0)]));
        assert_eq!(label, CaseLabel::Case2IncongruentMod4);
        assert_eq!(label.x_mod4(), 9 % 4);

        // (1+sqrt2)^2 + (1+0)^2 + (2+sqrt2)^2 + (2+0)^2 = 14 + 6 sqrt2 = 2(7 + 3 sqrt2)
        let fs = FourSquares::from_i64([(1, 1), (1, 0), (2, 1), (2, 0)]);
        assert_eq!(fs.sum(), QuadraticSqrt2::new(14, 6));
        let (_, label) = normalize_decomposition(&fs).unwrap();
        assert_eq!(label, CaseLabel::Case2CongruentMod4);
        assert_eq!(label.x_mod4(), 7 % 4);

        assert_eq!(
            normalize_decomposition(&FourSquares::from_i64([(2, 0), (0, 1), (0, 0), (0, 0)])),
            Err(Error::NoValidArrangement)
        );
    }

    #[test]
    fn parity_census_and_case_residues() {
        for p in (7..2000i64).step_by(8).filter(|&p| is_prime(&big(p))) {
            let s = split_prime(&big(p)).unwrap();
            for target in [1, 3] {
                let t = unit_adjust(&s, target);
                let fs = cohn_four_squares(&t).unwrap();
                let odd_alpha = fs.pairs.iter().filter(|(a, _)| a.is_odd()).count();
                assert!(odd_alpha == 2 || odd_alpha == 4);
                assert!(fs.pairs.iter().any(|(a, b)| a.is_odd() && b.is_odd()));
                let (norm, label) = normalize_decomposition(&fs).unwrap();
                assert!(norm.reconstructs(&t));
                assert_eq!(label.x_mod4(), target, "p = {p}, {fs}");
            }
        }
    }
}
