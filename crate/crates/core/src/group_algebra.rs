//! The integer group ring `Z[Q16]` and the group determinant computed
//! straight from its definition, `det(a_{g h^-1})`.
//!
//! Group elements are indexed `0..8` for `X^j` and `8..16` for `Y X^j`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub const ORDER: usize = 16;

/// `sum a_j X^j + sum b_j Y X^j`, i.e. the pair of polynomials
/// `f(x) = sum a_j x^j` and `g(x) = sum b_j x^j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GroupRingElement {
    pub a: [BigInt; 8],
    pub b: [BigInt; 8],
}

impl GroupRingElement {
    pub fn new(a: [BigInt; 8], b: [BigInt; 8]) -> Self {
        Self { a, b }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The identity element of the group with coefficient one.
    pub fn identity() -> Self {
        let mut e = Self::zero();
        e.a[0] = BigInt::one();
        e
    }

    pub fn from_i64(a: [i64; 8], b: [i64; 8]) -> Self {
        Self {
            a: a.map(BigInt::from),
            b: b.map(BigInt::from),
        }
    }

    /// Builds an element from 16 coefficients ordered `a0..a7, b0..b7`.
    pub fn from_coeffs(coeffs: &[BigInt]) -> Option<Self> {
        if coeffs.len() != ORDER {
            return None;
        }
        let a = std::array::from_fn(|j| coeffs[j].clone());
        let b = std::array::from_fn(|j| coeffs[8 + j].clone());
        Some(Self { a, b })
    }

    /// Coefficient of group element `idx` under the fixed index convention.
    pub fn coeff(&self, idx: usize) -> &BigInt {
        if idx < 8 {
            &self.a[idx]
        } else {
            &self.b[idx - 8]
        }
    }

    pub fn coeffs(&self) -> impl Iterator<Item = &BigInt> {
        self.a.iter().chain(self.b.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().all(Zero::is_zero)
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f = {}, g = {}", format_poly(&self.a), format_poly(&self.b))
    }
}

/// Compact ascending-power rendering such as `1 - x + x^3`.
pub fn format_poly(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mono = match j {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{j}"),
        };
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Multiplication table of Q16 under the `X^j` / `Y X^j` index convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    pub table: [[u8; ORDER]; ORDER],
    pub inverse: [u8; ORDER],
}

impl CayleyTable {
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h] as usize
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g] as usize
    }
}

pub const IDENTITY: usize = 0;

pub fn x_pow(j: i64) -> usize {
    j.rem_euclid(8) as usize
}

pub fn y_x_pow(j: i64) -> usize {
    8 + j.rem_euclid(8) as usize
}

pub fn build_cayley_table() -> CayleyTable {
    let mut table = [[0u8; ORDER]; ORDER];
    for (g, row) in table.iter_mut().enumerate() {
        for (h, slot) in row.iter_mut().enumerate() {
            let (ga, ha) = ((g % 8) as i64, (h % 8) as i64);
            let prod = match (g < 8, h < 8) {
                (true, true) => x_pow(ga + ha),
                (true, false) => y_x_pow(ha - ga),
                (false, true) => y_x_pow(ga + ha),
                (false, false) => x_pow(4 + ha - ga),
            };
            *slot = prod as u8;
        }
    }
    let mut inverse = [0u8; ORDER];
    for g in 0..ORDER {
        let h = (0..ORDER)
            .find(|&h| table[g][h] as usize == IDENTITY)
            .expect("every row of a group table contains the identity");
        inverse[g] = h as u8;
    }
    CayleyTable { table, inverse }
}

pub(crate) fn cayley() -> &'static CayleyTable {
    static TABLE: OnceLock<CayleyTable> = OnceLock::new();
    TABLE.get_or_init(build_cayley_table)
}

/// The group matrix `M[g][h] = coeff(g h^-1)`.
pub fn group_matrix(e: &GroupRingElement) -> Vec<Vec<BigInt>> {
    let t = cayley();
    (0..ORDER)
        .map(|g| (0..ORDER).map(|h| e.coeff(t.mul(g, t.inv(h))).clone()).collect())
        .collect()
}

/// Exact group determinant via fraction-free (Bareiss) elimination.
pub fn direct_determinant(e: &GroupRingElement) -> BigInt {
    determinant(group_matrix(e))
}

/// Exact determinant of a square integer matrix.
///
/// Elimination runs in checked `i128` while the entries fit and continues in
/// `BigInt` from the exact point where a product first overflows.
pub fn determinant(m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let small: Option<Vec<Vec<i128>>> = m
        .iter()
        .map(|row| row.iter().map(ToPrimitive::to_i128).collect())
        .collect();
    let (big, cursor) = match small {
        Some(mut sm) => match eliminate(&mut sm, Cursor::start()) {
            Ok(det) => return BigInt::from(det),
            Err(cursor) => (
                sm.into_iter()
                    .map(|row| row.into_iter().map(BigInt::from).collect())
                    .collect(),
                cursor,
            ),
        },
        None => (m, Cursor::start()),
    };
    let mut big: Vec<Vec<BigInt>> = big;
    match eliminate(&mut big, cursor) {
        Ok(det) => det,
        Err(_) => unreachable!("BigInt elimination cannot overflow"),
    }
}

trait Scalar: Clone {
    fn s_zero() -> Self;
    fn s_is_zero(&self) -> bool;
    fn s_neg(self) -> Self;
    /// `(aij * akk - aik * akj) / prev`, exact.
    fn bareiss_update(aij: &Self, akk: &Self, aik: &Self, akj: &Self, prev: &Self) -> Option<Self>;
    fn s_one() -> Self;
}

impl Scalar for i128 {
    fn s_zero() -> Self {
        0
    }
    fn s_is_zero(&self) -> bool {
        *self == 0
    }
    fn s_neg(self) -> Self {
        -self
    }
    fn bareiss_update(aij: &i128, akk: &i128, aik: &i128, akj: &i128, prev: &i128) -> Option<i128> {
        let lhs = aij.checked_mul(*akk)?;
        let rhs = aik.checked_mul(*akj)?;
        Some(lhs.checked_sub(rhs)? / prev)
    }
    fn s_one() -> Self {
        1
    }
}

impl Scalar for BigInt {
    fn s_zero() -> Self {
        Zero::zero()
    }
    fn s_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn s_neg(self) -> Self {
        -self
    }
    fn bareiss_update(aij: &BigInt, akk: &BigInt, aik: &BigInt, akj: &BigInt, prev: &BigInt) -> Option<BigInt> {
        Some((aij * akk - aik * akj) / prev)
    }
    fn s_one() -> Self {
        One::one()
    }
}

/// Resume point of an interrupted elimination: step `k`, next row `i`.
#[derive(Debug, Clone, Copy)]
struct Cursor {
    k: usize,
    i: usize,
    negate: bool,
}

impl Cursor {
    fn start() -> Self {
        Cursor { k: 0, i: 1, negate: false }
    }
}

fn eliminate<T: Scalar>(m: &mut [Vec<T>], mut cur: Cursor) -> Result<T, Cursor> {
    let n = m.len();
    while cur.k + 1 < n {
        let k = cur.k;
        // Idempotent on resume: the pivot chosen earlier is nonzero.
        if m[k][k].s_is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].s_is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    cur.negate = !cur.negate;
                }
                None => return Ok(T::s_zero()),
            }
        }
        let prev = if k == 0 { T::s_one() } else { m[k - 1][k - 1].clone() };
        for i in cur.i..n {
            let mut row = Vec::with_capacity(n - k - 1);
            for j in k + 1..n {
                match T::bareiss_update(&m[i][j], &m[k][k], &m[i][k], &m[k][j], &prev) {
                    Some(v) => row.push(v),
                    None => return Err(Cursor { k, i, negate: cur.negate }),
                }
            }
            for (j, v) in (k + 1..n).zip(row) {
                m[i][j] = v;
            }
            m[i][k] = T::s_zero();
        }
        cur = Cursor { k: k + 1, i: k + 2, negate: cur.negate };
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if cur.negate { det.s_neg() } else { det })
}

/// `x -> -x` in both polynomials.
pub fn substitute_neg_x(e: &GroupRingElement) -> GroupRingElement {
    let flip = |c: &[BigInt; 8]| -> [BigInt; 8] {
        std::array::from_fn(|j| if j % 2 == 1 { -&c[j] } else { c[j].clone() })
    };
    GroupRingElement { a: flip(&e.a), b: flip(&e.b) }
}

/// Exchanges `f` and `g`.
pub fn swap_components(e: &GroupRingElement) -> GroupRingElement {
    GroupRingElement { a: e.b.clone(), b: e.a.clone() }
}

/// Group-ring product. Only used to check multiplicativity of the determinant.
pub fn convolve(lhs: &GroupRingElement, rhs: &GroupRingElement) -> GroupRingElement {
    let t = cayley();
    let mut out: [BigInt; ORDER] = Default::default();
    for g in 0..ORDER {
        let cg = lhs.coeff(g);
        if cg.is_zero() {
            continue;
        }
        for h in 0..ORDER {
            out[t.mul(g, h)] += cg * rhs.coeff(h);
        }
    }
    GroupRingElement::from_coeffs(&out).expect("16 coefficients")
}
