//! Exact evaluation of the factorization `det = A * B * C^2 * D^2`.
//!
//! `A` and `B` come from values at `x = 1, -1`; `C` from Gaussian norms at
//! `x = i`; `D` from the eighth cyclotomic ring `Z[w]`, `w^4 = -1`. The value
//! at `w^3` is never evaluated: it is the `Z[sqrt 2]` conjugate of the value at
//! `w`, so `D` is the norm of `z = |f(w)|^2 + |g(w)|^2`.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Num, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::group_algebra::GroupRingElement;

/// Integer types the evaluation formulas are written over.
pub(crate) trait Int: Clone + Num + Signed {}
impl<T: Clone + Num + Signed> Int for T {}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        Self { re: re.into(), im: im.into() }
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }
}

impl Mul for &GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

/// `x + y sqrt 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct QuadraticSqrt2 {
    pub x: BigInt,
    pub y: BigInt,
}

impl QuadraticSqrt2 {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        Self { x: x.into(), y: y.into() }
    }

    pub fn norm(&self) -> BigInt {
        &self.x * &self.x - BigInt::from(2) * &self.y * &self.y
    }

    pub fn conj(&self) -> Self {
        Self { x: self.x.clone(), y: -&self.y }
    }

    /// Sign of the real number `x + y sqrt 2`, decided without rounding.
    pub fn sign(&self) -> Ordering {
        real_sign(&self.x, &self.y)
    }

    /// Sign under the other real embedding, `x - y sqrt 2`.
    pub fn conj_sign(&self) -> Ordering {
        real_sign(&self.x, &-&self.y)
    }

    pub fn is_totally_positive(&self) -> bool {
        self.sign() == Ordering::Greater && self.conj_sign() == Ordering::Greater
    }

    pub fn is_totally_nonnegative(&self) -> bool {
        self.sign() != Ordering::Less && self.conj_sign() != Ordering::Less
    }
}

/// Sign of `x + y sqrt 2`.
pub fn real_sign(x: &BigInt, y: &BigInt) -> Ordering {
    match (x.sign(), y.sign()) {
        (num_bigint::Sign::NoSign, _) => y.sign_ord(),
        (_, num_bigint::Sign::NoSign) => x.sign_ord(),
        (sx, sy) if sx == sy => x.sign_ord(),
        _ => {
            // opposite signs: compare x^2 with 2 y^2
            let lhs = x * x;
            let rhs = BigInt::from(2) * y * y;
            if x.is_positive() {
                lhs.cmp(&rhs)
            } else {
                rhs.cmp(&lhs)
            }
        }
    }
}

trait SignOrd {
    fn sign_ord(&self) -> Ordering;
}

impl SignOrd for BigInt {
    fn sign_ord(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

impl Add for &QuadraticSqrt2 {
    type Output = QuadraticSqrt2;
    fn add(self, rhs: &QuadraticSqrt2) -> QuadraticSqrt2 {
        QuadraticSqrt2 { x: &self.x + &rhs.x, y: &self.y + &rhs.y }
    }
}

impl Sub for &QuadraticSqrt2 {
    type Output = QuadraticSqrt2;
    fn sub(self, rhs: &QuadraticSqrt2) -> QuadraticSqrt2 {
        QuadraticSqrt2 { x: &self.x - &rhs.x, y: &self.y - &rhs.y }
    }
}

impl Mul for &QuadraticSqrt2 {
    type Output = QuadraticSqrt2;
    fn mul(self, rhs: &QuadraticSqrt2) -> QuadraticSqrt2 {
        QuadraticSqrt2 {
            x: &self.x * &rhs.x + BigInt::from(2) * &self.y * &rhs.y,
            y: &self.x * &rhs.y + &self.y * &rhs.x,
        }
    }
}

impl Neg for QuadraticSqrt2 {
    type Output = QuadraticSqrt2;
    fn neg(self) -> QuadraticSqrt2 {
        QuadraticSqrt2 { x: -self.x, y: -self.y }
    }
}

/// `c0 + c1 w + c2 w^2 + c3 w^3` with `w = exp(2 pi i / 8)`, `w^4 = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CyclotomicZ8 {
    pub c: [BigInt; 4],
}

impl CyclotomicZ8 {
    pub fn new(c: [i64; 4]) -> Self {
        Self { c: c.map(BigInt::from) }
    }

    /// Complex conjugation `w -> w^-1 = -w^3`.
    pub fn conj(&self) -> Self {
        let c = &self.c;
        Self { c: [c[0].clone(), -&c[3], -&c[2], -&c[1]] }
    }
}

impl Mul for &CyclotomicZ8 {
    type Output = CyclotomicZ8;
    fn mul(self, rhs: &CyclotomicZ8) -> CyclotomicZ8 {
        let mut out: [BigInt; 4] = Default::default();
        for i in 0..4 {
            for j in 0..4 {
                let term = &self.c[i] * &rhs.c[j];
                let k = i + j;
                if k < 4 {
                    out[k] += term;
                } else {
                    out[k - 4] -= term;
                }
            }
        }
        CyclotomicZ8 { c: out }
    }
}

/// The integers `A, B, C, D` with `det = A B C^2 D^2`, and `z` with `D = N(z)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    pub z: QuadraticSqrt2,
}

pub(crate) fn value_at<T: Int>(p: &[T; 8], x: i8) -> T {
    p.iter().enumerate().fold(T::zero(), |acc, (j, c)| {
        if x < 0 && j % 2 == 1 {
            acc - c.clone()
        } else {
            acc + c.clone()
        }
    })
}

pub(crate) fn value_at_i<T: Int>(p: &[T; 8]) -> (T, T) {
    let mut re = T::zero();
    let mut im = T::zero();
    for (j, c) in p.iter().enumerate() {
        match j % 4 {
            0 => re = re + c.clone(),
            1 => im = im + c.clone(),
            2 => re = re - c.clone(),
            _ => im = im - c.clone(),
        }
    }
    (re, im)
}

pub(crate) fn fold_omega<T: Int>(p: &[T; 8]) -> [T; 4] {
    std::array::from_fn(|j| p[j].clone() - p[j + 4].clone())
}

/// `|c0 + c1 w + c2 w^2 + c3 w^3|^2` as `(X, Y)` meaning `X + Y sqrt 2`.
pub(crate) fn norm_sq_coords<T: Int>(c: &[T; 4]) -> (T, T) {
    let [c0, c1, c2, c3] = c.clone();
    let x = c0.clone() * c0.clone() + c1.clone() * c1.clone() + c2.clone() * c2.clone() + c3.clone() * c3.clone();
    let y = c0.clone() * c1.clone() - c0 * c3.clone() + c1 * c2.clone() + c2 * c3;
    (x, y)
}

/// `(A, B, C, X, Y, D)` for the pair `(f, g)`.
pub(crate) fn factor_parts<T: Int>(f: &[T; 8], g: &[T; 8]) -> [T; 6] {
    let sq = |v: T| v.clone() * v;
    let a = sq(value_at(f, 1)) - sq(value_at(g, 1));
    let b = sq(value_at(f, -1)) - sq(value_at(g, -1));
    let (fr, fi) = value_at_i(f);
    let (gr, gi) = value_at_i(g);
    let c = sq(fr) + sq(fi) - sq(gr) - sq(gi);
    let (fx, fy) = norm_sq_coords(&fold_omega(f));
    let (gx, gy) = norm_sq_coords(&fold_omega(g));
    let x = fx + gx;
    let y = fy + gy;
    let two = T::one() + T::one();
    let d = sq(x.clone()) - two * sq(y.clone());
    [a, b, c, x, y, d]
}

/// Factored determinant in `i128`. Callers must bound the coefficients so no
/// intermediate overflows (|coeff| <= 16 is safe).
pub(crate) fn factored_determinant_i128(f: &[i128; 8], g: &[i128; 8]) -> i128 {
    let [a, b, c, _, _, d] = factor_parts(f, g);
    a * b * c * c * d * d
}

/// `(f(1), g(1), f(-1), g(-1))`.
pub fn eval_at_pm1(e: &GroupRingElement) -> (BigInt, BigInt, BigInt, BigInt) {
    (value_at(&e.a, 1), value_at(&e.b, 1), value_at(&e.a, -1), value_at(&e.b, -1))
}

pub fn eval_at_i(poly: &[BigInt; 8]) -> GaussianInt {
    let (re, im) = value_at_i(poly);
    GaussianInt { re, im }
}

pub fn eval_at_omega(poly: &[BigInt; 8]) -> CyclotomicZ8 {
    CyclotomicZ8 { c: fold_omega(poly) }
}

pub fn norm_sq_omega(z: &CyclotomicZ8) -> QuadraticSqrt2 {
    let (x, y) = norm_sq_coords(&z.c);
    QuadraticSqrt2 { x, y }
}

pub fn factored_form(e: &GroupRingElement) -> FactoredForm {
    let [a, b, c, x, y, d] = factor_parts(&e.a, &e.b);
    FactoredForm { a, b, c, d, z: QuadraticSqrt2 { x, y } }
}

pub fn determinant_from_factored(ff: &FactoredForm) -> BigInt {
    &ff.a * &ff.b * &ff.c * &ff.c * &ff.d * &ff.d
}
