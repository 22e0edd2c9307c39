//! Explicit elements realizing every achievable determinant.
//!
//! Even values and values `1 mod 8` come from six closed-form families in a
//! shift parameter `m`, all built around `h(x) = (x+1)(x^2+1)(x^4+1)`, which
//! vanishes at `-1`, `i` and `w` so that `m h` only moves `A`. Values `m p^2`
//! with `p = 7 mod 8` go through `Z[sqrt 2]`: split `p`, write
//! `2(X + Y sqrt 2)` as four squares, read off degree-3 polynomials with
//! `|f(w)|^2 + |g(w)|^2 = X + Y sqrt 2`, then pad with `(1 - x^4)` and `m h`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_eval::{factored_form, FactoredForm, QuadraticSqrt2};
use crate::group_algebra::{direct_determinant, swap_components, GroupRingElement};
use crate::primes::{is_prime, mod_floor_u64};
use crate::quad_ring::{
    cohn_four_squares, normalize_decomposition, split_prime, unit_adjust, CaseLabel, FourSquares, SplitSolution,
};

/// Construction families, named by the values they produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `2^10 (-3 + 4m)`
    EvenMinus3,
    /// `2^10 (-1 + 4m)`
    EvenMinus1,
    /// `2^11 (-1 + 2m)`
    Even2048,
    /// `2^12 m`
    Even4096,
    /// `1 + 16m`
    OddOnePlus16m,
    /// `-7 + 16m`
    OddMinusSevenPlus16m,
    /// `(16m - 3) p^2`
    PrimeSquareMinus3,
    /// `(5 - 16m) p^2`
    PrimeSquarePlus5,
}

impl Family {
    pub const CLOSED_FORM: [Family; 6] = [
        Family::EvenMinus3,
        Family::EvenMinus1,
        Family::Even2048,
        Family::Even4096,
        Family::OddOnePlus16m,
        Family::OddMinusSevenPlus16m,
    ];

    pub fn formula(self) -> &'static str {
        match self {
            Family::EvenMinus3 => "2^10(-3+4m)",
            Family::EvenMinus1 => "2^10(-1+4m)",
            Family::Even2048 => "2^11(-1+2m)",
            Family::Even4096 => "2^12m",
            Family::OddOnePlus16m => "1+16m",
            Family::OddMinusSevenPlus16m => "-7+16m",
            Family::PrimeSquareMinus3 => "(16m-3)p^2",
            Family::PrimeSquarePlus5 => "(5-16m)p^2",
        }
    }

    /// Value produced at shift `m` (and prime `p` for the two prime-square families).
    pub fn value(self, m: &BigInt, p: &BigInt) -> BigInt {
        let m16 = m * 16;
        match self {
            Family::EvenMinus3 => (m * 4 - 3) * 1024,
            Family::EvenMinus1 => (m * 4 - 1) * 1024,
            Family::Even2048 => (m * 2 - 1) * 2048,
            Family::Even4096 => m * 4096,
            Family::OddOnePlus16m => m16 + 1,
            Family::OddMinusSevenPlus16m => m16 - 7,
            Family::PrimeSquareMinus3 => (m16 - 3) * p * p,
            Family::PrimeSquarePlus5 => (BigInt::from(5) - m16) * p * p,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.formula())
    }
}

/// `h(x) = (x+1)(x^2+1)(x^4+1) = 1 + x + ... + x^7`.
pub fn poly_h() -> [BigInt; 8] {
    std::array::from_fn(|_| BigInt::one())
}

fn minus_mh(base: [i64; 8], m: &BigInt) -> [BigInt; 8] {
    std::array::from_fn(|j| BigInt::from(base[j]) - m)
}

fn plus_mh(base: [i64; 8], m: &BigInt) -> [BigInt; 8] {
    std::array::from_fn(|j| BigInt::from(base[j]) + m)
}

/// Element of one of the six closed-form families at shift `m`.
///
/// Panics for the two prime-square families, which are not closed-form.
pub fn family_element(family: Family, m: &BigInt) -> GroupRingElement {
    let (a, b) = match family {
        Family::EvenMinus3 => (
            std::array::from_fn(|_| BigInt::one() - m),
            minus_mh([1, 0, 1, 1, 1, 0, 0, 0], m),
        ),
        Family::EvenMinus1 => (minus_mh([1, 1, 0, 0, 1, 1, 0, 0], m), minus_mh([1, 1, 0, -1, 0, 0, 0, -1], m)),
        Family::Even2048 => (minus_mh([1, 1, 1, 1, 1, 1, 0, 0], m), minus_mh([1, 0, 0, 0, 1, 0, 0, 0], m)),
        Family::Even4096 => (minus_mh([1, 1, 0, 0, 1, 1, -1, -1], m), plus_mh([1, 1, 0, -1, 1, 1, 0, -1], m)),
        Family::OddOnePlus16m => (plus_mh([1, 0, 0, 0, 0, 0, 0, 0], m), plus_mh([0; 8], m)),
        Family::OddMinusSevenPlus16m => {
            (minus_mh([1, -1, 1, 1, 0, 0, 0, 1], m), minus_mh([1, 0, 0, 1, 1, 0, 0, 1], m))
        }
        Family::PrimeSquareMinus3 | Family::PrimeSquarePlus5 => {
            panic!("{family} has no closed-form element")
        }
    };
    GroupRingElement::new(a, b)
}

/// `f = u + 2k`, `g = v + 2s` on the low-degree pair, plus the shift `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPolynomials {
    pub u: [u8; 4],
    pub v: [u8; 4],
    pub k: [BigInt; 4],
    pub s: [BigInt; 4],
    pub m: BigInt,
}

const U_ONE_PLUS_X: [u8; 4] = [1, 1, 0, 0];
const U_X_PLUS_X2: [u8; 4] = [0, 1, 1, 0];
const U_ONE_X_X3: [u8; 4] = [1, 1, 0, 1];
const U_X_X2_X3: [u8; 4] = [0, 1, 1, 1];
const V_ONE: [u8; 4] = [1, 0, 0, 0];
const V_X: [u8; 4] = [0, 1, 0, 0];
const V_X2: [u8; 4] = [0, 0, 1, 0];
const V_ONE_PLUS_X: [u8; 4] = [1, 1, 0, 0];
const V_X_PLUS_X2: [u8; 4] = [0, 1, 1, 0];
const V_ONE_X_X2: [u8; 4] = [1, 1, 1, 0];

fn allowed_patterns(label: CaseLabel) -> (&'static [[u8; 4]], &'static [[u8; 4]]) {
    match label {
        CaseLabel::Case1OneOddBeta => (&[U_ONE_PLUS_X, U_X_PLUS_X2], &[V_ONE, V_X2]),
        CaseLabel::Case1ThreeOddBeta => (&[U_ONE_X_X3, U_X_X2_X3], &[V_ONE_PLUS_X, V_X_PLUS_X2]),
        // alpha_3 = alpha_4 = 0 or 2 mod 4 makes b_2 even, so v = x.
        CaseLabel::Case2CongruentMod4 => (&[U_ONE_PLUS_X, U_X_PLUS_X2], &[V_X]),
        CaseLabel::Case2IncongruentMod4 => (&[U_ONE_PLUS_X, U_X_PLUS_X2], &[V_ONE_X_X2]),
    }
}

fn half(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt)> {
    let diff = a - b;
    if diff.is_odd() {
        return Err(Error::ParityViolation(a.clone(), b.clone()));
    }
    Ok((diff / 2, (a + b) / 2))
}

/// Degree-3 coefficients `(a_0..a_3, b_0..b_3)` from a normalized decomposition.
pub fn build_low_degree_pair(fs: &FourSquares) -> Result<([BigInt; 4], [BigInt; 4])> {
    let [(al1, be1), (al2, be2), (al3, be3), (al4, be4)] = &fs.pairs;
    let (a0, a2) = half(al1, al2)?;
    let (b0, b2) = half(al3, al4)?;
    Ok(([a0, be1.clone(), a2, be2.clone()], [b0, be3.clone(), b2, be4.clone()]))
}

fn parity_split(c: &[BigInt; 4]) -> ([u8; 4], [BigInt; 4]) {
    let u = std::array::from_fn(|j| u8::from(c[j].is_odd()));
    let k = std::array::from_fn(|j| (&c[j] - BigInt::from(u[j])) / 2);
    (u, k)
}

/// Splits the low-degree pair into parity patterns and halves, checking the
/// patterns against those `label` allows. The shift `m` starts at zero.
pub fn extract_uvks(a: &[BigInt; 4], b: &[BigInt; 4], label: CaseLabel) -> Result<WitnessPolynomials> {
    let (u, k) = parity_split(a);
    let (v, s) = parity_split(b);
    let (us, vs) = allowed_patterns(label);
    if !us.contains(&u) || !vs.contains(&v) {
        return Err(Error::PatternMismatch);
    }
    Ok(WitnessPolynomials { u, v, k, s, m: BigInt::zero() })
}

/// `f = u + (1 - x^4) k - m h`, `g = v + (1 - x^4) s - m h`.
pub fn apply_shift(wp: &WitnessPolynomials) -> GroupRingElement {
    let lift = |base: &[u8; 4], low: &[BigInt; 4]| -> [BigInt; 8] {
        std::array::from_fn(|j| {
            let c = if j < 4 { BigInt::from(base[j]) + &low[j] } else { -&low[j - 4] };
            c - &wp.m
        })
    };
    GroupRingElement::new(lift(&wp.u, &wp.k), lift(&wp.v, &wp.s))
}

/// How a certificate's element was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Trace {
    ClosedForm {
        family: Family,
        m: BigInt,
    },
    PrimeSquare {
        family: Family,
        p: BigInt,
        m: BigInt,
        split: SplitSolution,
        four_squares: FourSquares,
        case: CaseLabel,
        polynomials: WitnessPolynomials,
        /// `f` and `g` exchanged after the shift
        swapped: bool,
    },
}

impl Trace {
    pub fn family(&self) -> Family {
        match self {
            Trace::ClosedForm { family, .. } | Trace::PrimeSquare { family, .. } => *family,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub n: BigInt,
    pub element: GroupRingElement,
    pub factored: FactoredForm,
    pub trace: Trace,
    pub verified: bool,
}

impl WitnessCertificate {
    /// Recomputes the direct determinant of the stored element.
    pub fn verify(&self) -> bool {
        direct_determinant(&self.element) == self.n
    }
}

fn certify(n: &BigInt, element: GroupRingElement, trace: Trace) -> Result<WitnessCertificate> {
    let det = direct_determinant(&element);
    if &det != n {
        return Err(Error::InternalInconsistency(format!(
            "{} construction gives {det}, expected {n}",
            trace.family()
        )));
    }
    let factored = factored_form(&element);
    Ok(WitnessCertificate { n: n.clone(), element, factored, trace, verified: true })
}

fn closed_form(n: &BigInt, family: Family, m: BigInt) -> Result<WitnessCertificate> {
    let element = family_element(family, &m);
    certify(n, element, Trace::ClosedForm { family, m })
}

/// Witness for a multiple of `2^10`, chosen by `t = n / 2^10 mod 4`.
pub fn witness_even(n: &BigInt) -> Result<WitnessCertificate> {
    let (t, r) = n.div_mod_floor(&BigInt::from(1024));
    if !r.is_zero() {
        return Err(Error::NotMultiple(n.clone()));
    }
    let four = BigInt::from(4);
    let (family, m) = match mod_floor_u64(&t, 4) {
        1 => (Family::EvenMinus3, (&t + 3) / &four),
        3 => (Family::EvenMinus1, (&t + 1) / &four),
        2 => (Family::Even2048, (&t + 2) / &four),
        _ => (Family::Even4096, &t / &four),
    };
    closed_form(n, family, m)
}

/// Witness for `n = 1 mod 8`.
pub fn witness_odd_1mod8(n: &BigInt) -> Result<WitnessCertificate> {
    match mod_floor_u64(n, 16) {
        1 => closed_form(n, Family::OddOnePlus16m, (n - 1) / 16),
        9 => closed_form(n, Family::OddMinusSevenPlus16m, (n + 7) / 16),
        _ => Err(Error::WrongResidue { n: n.clone(), expected: "1 mod 8" }),
    }
}

/// Witness for `n = m p^2` with `n = 5 mod 8` and `p = 7 mod 8` prime.
pub fn witness_odd_5mod8(n: &BigInt, p: &BigInt) -> Result<WitnessCertificate> {
    if mod_floor_u64(n, 8) != 5 {
        return Err(Error::BadInput(format!("{n} is not 5 mod 8")));
    }
    if mod_floor_u64(p, 8) != 7 || !is_prime(p) {
        return Err(Error::BadInput(format!("{p} is not a prime congruent to 7 mod 8")));
    }
    let p2 = p * p;
    let (m, r) = n.div_mod_floor(&p2);
    if !r.is_zero() {
        return Err(Error::BadInput(format!("{p}^2 does not divide {n}")));
    }
    let (target, family, shift): (u64, Family, BigInt) = match mod_floor_u64(&m, 16) {
        5 => (1, Family::PrimeSquarePlus5, (BigInt::from(5) - &m) / 16),
        13 => (3, Family::PrimeSquareMinus3, (&m + 3) / 16),
        other => return Err(Error::BadInput(format!("cofactor {m} is {other} mod 16"))),
    };

    let split = unit_adjust(&split_prime(p)?, target);
    let fs = cohn_four_squares(&split)?;
    let (fs, case) = normalize_decomposition(&fs)?;
    if case.x_mod4() != target {
        return Err(Error::InternalInconsistency(format!("{case:?} reached with X = {} mod 4", target)));
    }
    let (a, b) = build_low_degree_pair(&fs)?;
    let mut polynomials = extract_uvks(&a, &b, case)?;
    polynomials.m = shift.clone();
    let mut element = apply_shift(&polynomials);

    let z = factored_form(&element).z;
    if z != QuadraticSqrt2::new(split.x.clone(), split.y.clone()) {
        return Err(Error::InternalInconsistency(format!("shift moved z to {} + {} sqrt2", z.x, z.y)));
    }
    // In this layout f(1)^2 - g(1)^2 = 16m - 5; exchanging f and g flips the
    // signs of A, B, C together and lands on (5 - 16m, 1, -1, p).
    let swapped = case == CaseLabel::Case2IncongruentMod4;
    if swapped {
        element = swap_components(&element);
    }

    let cert = certify(
        n,
        element,
        Trace::PrimeSquare {
            family,
            p: p.clone(),
            m: shift.clone(),
            split,
            four_squares: fs,
            case,
            polynomials,
            swapped,
        },
    )?;
    let (ea, eb, ec) = expected_abc(family, &shift);
    let ff = &cert.factored;
    if (ff.a.clone(), ff.b.clone(), ff.c.clone(), &ff.d) != (ea, eb, ec, p) {
        return Err(Error::InternalInconsistency(format!(
            "factored form ({}, {}, {}, {}) off the expected quadruple",
            ff.a, ff.b, ff.c, ff.d
        )));
    }
    Ok(cert)
}

/// `(A, B, C)` of the prime-square families at shift `m`.
pub fn expected_abc(family: Family, m: &BigInt) -> (BigInt, BigInt, BigInt) {
    let m16 = m * 16;
    match family {
        Family::PrimeSquareMinus3 => (BigInt::from(3) - m16, BigInt::from(-1), BigInt::one()),
        Family::PrimeSquarePlus5 => (BigInt::from(5) - m16, BigInt::one(), BigInt::from(-1)),
        _ => panic!("{family} is not a prime-square family"),
    }
}
