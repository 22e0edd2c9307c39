//! Executable necessity checks and brute-force oracles.
//!
//! * Chebyshev-basis coefficients of `F(x) = f(x) f(1/x)` and their value at
//!   `w`, giving a second route to `|f(w)|^2`.
//! * A parity audit of `c_0, c_1, d_0, d_1, X, Y, D` under the normalization
//!   `f(1), f(-1)` odd, `g(1) = 2 mod 4`, `g(-1) = 0 mod 4`.
//! * Exhaustive scans over a finite coefficient support, and seeded random
//!   cross-checks of the direct determinant against the factored one.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::classify;
use crate::error::{Error, Result};
use crate::exact_eval::{
    determinant_from_factored, eval_at_pm1, factored_determinant_i128, factored_form, QuadraticSqrt2,
};
use crate::group_algebra::{direct_determinant, substitute_neg_x, swap_components, GroupRingElement};
use crate::primes::mod_floor_u64;

/// `F(x) = sum c_j (x + 1/x)^j`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ChebyshevCoeffs {
    pub c: [BigInt; 8],
}

/// `x^k + x^-k` as a polynomial in `t = x + 1/x`, for `k = 0..8`.
fn power_sum_basis() -> [[i64; 8]; 8] {
    let mut p = [[0i64; 8]; 8];
    p[0][0] = 2;
    p[1][1] = 1;
    for k in 1..7 {
        for j in 0..8 {
            let shifted = if j > 0 { p[k][j - 1] } else { 0 };
            p[k + 1][j] = shifted - p[k - 1][j];
        }
    }
    p
}

/// Autocorrelation `r_k = sum_j a_j a_{j+k}`, the coefficient of `x^k` in `f(x) f(1/x)`.
pub fn autocorrelation(poly: &[BigInt; 8]) -> [BigInt; 8] {
    std::array::from_fn(|k| (0..8 - k).map(|j| &poly[j] * &poly[j + k]).sum())
}

pub fn chebyshev_coeffs(poly: &[BigInt; 8]) -> ChebyshevCoeffs {
    let r = autocorrelation(poly);
    let basis = power_sum_basis();
    let mut c: [BigInt; 8] = Default::default();
    c[0] = r[0].clone();
    for k in 1..8 {
        if r[k].is_zero() {
            continue;
        }
        for j in 0..8 {
            if basis[k][j] != 0 {
                c[j] += &r[k] * basis[k][j];
            }
        }
    }
    ChebyshevCoeffs { c }
}

/// Value at `t = w + 1/w = sqrt 2`.
pub fn chebyshev_eval_omega(cc: &ChebyshevCoeffs) -> QuadraticSqrt2 {
    let mut x = BigInt::zero();
    let mut y = BigInt::zero();
    for (j, c) in cc.c.iter().enumerate() {
        let scaled = c << (j / 2);
        if j % 2 == 0 {
            x += scaled;
        } else {
            y += scaled;
        }
    }
    QuadraticSqrt2 { x, y }
}

/// Which symmetries were applied to reach the audit normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub swapped: bool,
    pub negated_x: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditRecord {
    pub normalization: Normalization,
    pub element: GroupRingElement,
    pub c: ChebyshevCoeffs,
    pub d: ChebyshevCoeffs,
    pub z: QuadraticSqrt2,
    pub norm: BigInt,
    /// Names of the assertions that failed.
    pub failures: Vec<&'static str>,
}

impl AuditRecord {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn normalized(e: &GroupRingElement) -> bool {
    let (f1, g1, fm1, gm1) = eval_at_pm1(e);
    f1.is_odd() && fm1.is_odd() && mod_floor_u64(&g1, 4) == 2 && mod_floor_u64(&gm1, 4) == 0
}

/// Brings `e` into the audit normalization by swapping `f, g` and/or `x -> -x`.
pub fn normalize_for_audit(e: &GroupRingElement) -> Option<(GroupRingElement, Normalization)> {
    for (swapped, negated_x) in [(false, false), (false, true), (true, false), (true, true)] {
        let mut cand = if swapped { swap_components(e) } else { e.clone() };
        if negated_x {
            cand = substitute_neg_x(&cand);
        }
        if normalized(&cand) {
            return Some((cand, Normalization { swapped, negated_x }));
        }
    }
    None
}

pub fn parity_audit(e: &GroupRingElement) -> Result<AuditRecord> {
    let (el, normalization) = normalize_for_audit(e).ok_or(Error::PreconditionUnreachable)?;
    let c = chebyshev_coeffs(&el.a);
    let d = chebyshev_coeffs(&el.b);
    let z = &chebyshev_eval_omega(&c) + &chebyshev_eval_omega(&d);
    let norm = z.norm();
    let ff = factored_form(&el);

    let mut failures = Vec::new();
    let mut check = |ok: bool, name: &'static str| {
        if !ok {
            failures.push(name);
        }
    };
    check(c.c[0].is_odd(), "c0 odd");
    check(c.c[1].is_even(), "c1 even");
    check(d.c[0].is_even(), "d0 even");
    check(d.c[1].is_odd(), "d1 odd");
    check(z.x.is_odd(), "X odd");
    check(z.y.is_odd(), "Y odd");
    check(norm > BigInt::zero(), "D > 0");
    check(mod_floor_u64(&norm, 8) == 7, "D = 7 mod 8");
    check(ff.z == z, "Chebyshev z matches cyclotomic z");
    Ok(AuditRecord { normalization, element: el, c, d, z, norm, failures })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditSummary {
    pub seed: u64,
    pub height: i64,
    pub audited: u64,
    /// Random draws with no reachable normalization, skipped.
    pub rejected: u64,
    pub failures: Vec<AuditRecord>,
}

/// Audits `count` seeded random elements that admit the normalization.
pub fn random_audit(count: u64, height: i64, seed: u64) -> AuditSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = AuditSummary { seed, height, audited: 0, rejected: 0, failures: Vec::new() };
    while summary.audited < count {
        let e = random_element(&mut rng, height);
        match parity_audit(&e) {
            Ok(rec) => {
                summary.audited += 1;
                if !rec.passed() {
                    summary.failures.push(rec);
                }
            }
            Err(_) => summary.rejected += 1,
        }
    }
    summary
}

fn random_element(rng: &mut ChaCha8Rng, height: i64) -> GroupRingElement {
    let mut draw = || -> [i64; 8] { std::array::from_fn(|_| rng.random_range(-height..=height)) };
    let a = draw();
    let b = draw();
    GroupRingElement::from_i64(a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ViolationKind {
    EvenNotMultipleOf1024,
    OddCongruent3Mod4,
    RejectedByClassifier,
    /// Only with `direct`: the two determinant routes disagree.
    RouteMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub index: u64,
    pub coeffs: Vec<i64>,
    pub value: i128,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub support: Vec<i64>,
    pub workers: usize,
    /// Maximum number of elements a scan may enumerate.
    pub limit: u64,
    /// Compute every determinant by elimination and compare with the factored route.
    pub direct: bool,
    /// Achieved values with `|n| <= window` are recorded.
    pub window: i64,
}

impl ScanConfig {
    pub fn new(support: Vec<i64>) -> Self {
        ScanConfig { support, workers: 1, limit: DEFAULT_LIMIT, direct: false, window: 20_000 }
    }
}

pub const DEFAULT_LIMIT: u64 = 50_000_000;
pub const MAX_SUPPORT_ABS: i64 = 16;
const MAX_VIOLATIONS: usize = 100;
const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ScanReport {
    pub support: Vec<i64>,
    pub scanned: u64,
    pub zero: u64,
    pub even_nonzero: u64,
    /// Odd determinants tallied by residue mod 8: index 0..4 for 1, 3, 5, 7.
    pub odd_mod8: [u64; 4],
    pub window: i64,
    /// Achieved determinants with `|n| <= window`.
    pub achieved: BTreeSet<i64>,
    pub violation_count: u64,
    /// First violations by enumeration index.
    pub violations: Vec<Violation>,
}

impl ScanReport {
    fn merge(mut self, other: ScanReport) -> ScanReport {
        self.scanned += other.scanned;
        self.zero += other.zero;
        self.even_nonzero += other.even_nonzero;
        for (a, b) in self.odd_mod8.iter_mut().zip(other.odd_mod8) {
            *a += b;
        }
        self.achieved.extend(other.achieved);
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations);
        self.violations.sort_by_key(|v| v.index);
        self.violations.truncate(MAX_VIOLATIONS);
        self
    }
}

/// Enumerates every element with all 16 coefficients drawn from `support`.
pub fn exhaustive_scan(cfg: &ScanConfig) -> Result<ScanReport> {
    let mut support = cfg.support.clone();
    support.sort_unstable();
    support.dedup();
    if support.is_empty() || support.iter().any(|s| s.abs() > MAX_SUPPORT_ABS) {
        return Err(Error::BadInput(format!("support must be nonempty with entries in [-{MAX_SUPPORT_ABS}, {MAX_SUPPORT_ABS}]")));
    }
    let base = support.len() as u128;
    let total = base.checked_pow(16).unwrap_or(u128::MAX);
    if total > cfg.limit as u128 {
        return Err(Error::BudgetExceeded { requested: total, limit: cfg.limit as u128 });
    }
    let total = total as u64;
    let chunks = total.div_ceil(CHUNK);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| Error::BadInput(e.to_string()))?;
    let empty = || ScanReport { support: support.clone(), window: cfg.window, ..Default::default() };
    let report = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|ci| scan_range(&support, ci * CHUNK, ((ci + 1) * CHUNK).min(total), cfg, empty()))
            .reduce(empty, ScanReport::merge)
    });
    Ok(report)
}

fn scan_range(support: &[i64], start: u64, end: u64, cfg: &ScanConfig, mut rep: ScanReport) -> ScanReport {
    let base = support.len() as u64;
    let mut digits = [0usize; 16];
    let mut rest = start;
    for d in digits.iter_mut() {
        *d = (rest % base) as usize;
        rest /= base;
    }
    let mut verdicts: HashMap<i128, bool> = HashMap::new();
    for index in start..end {
        let coeffs: [i64; 16] = std::array::from_fn(|j| support[digits[j]]);
        let f: [i128; 8] = std::array::from_fn(|j| coeffs[j] as i128);
        let g: [i128; 8] = std::array::from_fn(|j| coeffs[8 + j] as i128);
        let value = factored_determinant_i128(&f, &g);
        let mut kind = None;
        if cfg.direct {
            let e = GroupRingElement::from_i64(
                std::array::from_fn(|j| coeffs[j]),
                std::array::from_fn(|j| coeffs[8 + j]),
            );
            if direct_determinant(&e).to_i128() != Some(value) {
                kind = Some(ViolationKind::RouteMismatch);
            }
        }
        rep.scanned += 1;
        if value == 0 {
            rep.zero += 1;
        } else if value % 2 == 0 {
            rep.even_nonzero += 1;
            if value % 1024 != 0 {
                kind = kind.or(Some(ViolationKind::EvenNotMultipleOf1024));
            }
        } else {
            let r = value.rem_euclid(8);
            rep.odd_mod8[(r / 2) as usize] += 1;
            if r % 4 == 3 {
                kind = kind.or(Some(ViolationKind::OddCongruent3Mod4));
            } else if r == 5 {
                let ok = *verdicts
                    .entry(value)
                    .or_insert_with(|| classify(&BigInt::from(value)).is_achievable());
                if !ok {
                    kind = kind.or(Some(ViolationKind::RejectedByClassifier));
                }
            }
        }
        if value.unsigned_abs() <= cfg.window.unsigned_abs() as u128 {
            rep.achieved.insert(value as i64);
        }
        if let Some(kind) = kind {
            rep.violation_count += 1;
            if rep.violations.len() < MAX_VIOLATIONS {
                rep.violations.push(Violation { index, coeffs: coeffs.to_vec(), value, kind });
            }
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < support.len() {
                break;
            }
            *d = 0;
        }
    }
    rep
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub count: u64,
    pub height: i64,
    pub seed: u64,
    pub mismatches: Vec<GroupRingElement>,
}

/// Compares direct and factored determinants on `count` seeded random elements
/// with coefficients in `[-height, height]`. The elements depend only on the seed.
pub fn random_crosscheck(count: u64, height: i64, seed: u64) -> Result<CrosscheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elements: Vec<GroupRingElement> = (0..count).map(|_| random_element(&mut rng, height)).collect();
    let mismatches: Vec<GroupRingElement> = elements
        .into_par_iter()
        .filter(|e| direct_determinant(e) != determinant_from_factored(&factored_form(e)))
        .collect();
    if !mismatches.is_empty() {
        return Err(Error::MismatchFound(mismatches.len()));
    }
    Ok(CrosscheckReport { count, height, seed, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_eval::{eval_at_omega, norm_sq_omega};
    use proptest::prelude::*;

    fn poly(c: [i64; 8]) -> [BigInt; 8] {
        c.map(BigInt::from)
    }

    fn cheb(c: [i64; 8]) -> Vec<i64> {
        chebyshev_coeffs(&poly(c)).c.iter().map(|v| v.to_i64().unwrap()).collect()
    }

    /// Expands `sum c_j (x + 1/x)^j` into Laurent coefficients `x^-7..x^7`.
    fn expand_laurent(c: &[BigInt; 8]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); 15];
        for (j, cj) in c.iter().enumerate() {
            // (x + 1/x)^j = sum_i binom(j, i) x^(j - 2i)
            let mut binom = BigInt::from(1);
            for i in 0..=j {
                out[7 + j - 2 * i] += cj * &binom;
                binom = binom * (j - i) / (i + 1);
            }
        }
        out
    }

    fn laurent_product(p: &[BigInt; 8]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); 15];
        for i in 0..8 {
            for j in 0..8 {
                out[7 + i - j] += &p[i] * &p[j];
            }
        }
        out
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(cheb([0, 1, 0, 0, 0, 0, 0, 0]), vec![1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(cheb([1, 1, 0, 0, 0, 0, 0, 0]), vec![2, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(cheb([1, 2, 3, 0, 0, 0, 0, 0]), vec![8, 8, 3, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn chebyshev_omega_examples() {
        let one = ChebyshevCoeffs { c: poly([1, 0, 0, 0, 0, 0, 0, 0]) };
        assert_eq!(chebyshev_eval_omega(&one), QuadraticSqrt2::new(1, 0));
        let p = poly([1, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(chebyshev_eval_omega(&chebyshev_coeffs(&p)), QuadraticSqrt2::new(2, 1));
        assert_eq!(norm_sq_omega(&eval_at_omega(&p)), QuadraticSqrt2::new(2, 1));
        let p = poly([0, 1, 1, 1, 0, 0, 0, 0]);
        assert_eq!(chebyshev_eval_omega(&chebyshev_coeffs(&p)), QuadraticSqrt2::new(3, 2));
        assert_eq!(norm_sq_omega(&eval_at_omega(&p)), QuadraticSqrt2::new(3, 2));
    }

    #[test]
    fn audit_examples() {
        let rec = parity_audit(&GroupRingElement::from_i64([1, 0, 0, 0, 0, 0, 0, 0], [1, 1, 0, 0, 0, 0, 0, 0])).unwrap();
        assert!(rec.passed(), "{:?}", rec.failures);
        assert_eq!(rec.c.c[0], BigInt::from(1));
        assert_eq!((rec.d.c[0].clone(), rec.d.c[1].clone()), (BigInt::from(2), BigInt::from(1)));
        assert_eq!(rec.z, QuadraticSqrt2::new(3, 1));
        assert_eq!(rec.norm, BigInt::from(7));

        let rec = parity_audit(&GroupRingElement::from_i64([0, 1, 1, 1, 0, 0, 0, 0], [0, 1, 1, 1, 1, 0, -1, -1])).unwrap();
        assert!(rec.passed(), "{:?}", rec.failures);
        assert_eq!(rec.norm, BigInt::from(7));

        let err = parity_audit(&GroupRingElement::from_i64([1, 0, 0, 0, 0, 0, 0, 0], [2, 0, 0, 0, 0, 0, 0, 0]));
        assert_eq!(err, Err(Error::PreconditionUnreachable));
    }

    #[test]
    fn audit_normalizes_by_swap_and_negation() {
        // f = 1 - x is even at 1 and -1, so f and g swap; x -> -x then turns g into 1 + x.
        let e = GroupRingElement::from_i64([1, -1, 0, 0, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0, 0, 0]);
        let rec = parity_audit(&e).unwrap();
        assert_eq!(rec.normalization, Normalization { swapped: true, negated_x: true });
        assert!(rec.passed());
    }

    #[test]
    fn scan_binary_support_small_budget() {
        let mut cfg = ScanConfig::new(vec![0, 1]);
        cfg.limit = 1000;
        assert_eq!(
            exhaustive_scan(&cfg),
            Err(Error::BudgetExceeded { requested: 65_536, limit: 1000 })
        );
        assert!(matches!(exhaustive_scan(&ScanConfig::new(vec![0, 17])), Err(Error::BadInput(_))));
    }

    #[test]
    fn scan_is_independent_of_worker_count() {
        let mut cfg = ScanConfig::new(vec![0, 1]);
        cfg.workers = 1;
        let one = exhaustive_scan(&cfg).unwrap();
        cfg.workers = 4;
        let four = exhaustive_scan(&cfg).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.scanned, 65_536);
        assert_eq!(one.violation_count, 0);
        assert!(one.achieved.contains(&17) || one.achieved.contains(&1));
    }

    #[test]
    fn scan_direct_mode_agrees_on_a_subset_support() {
        // {-1, 1} restricted to the first chunk keeps the direct route cheap.
        let support = vec![-1, 1];
        let cfg = ScanConfig { support: support.clone(), workers: 2, limit: DEFAULT_LIMIT, direct: true, window: 100 };
        let rep = scan_range(&support, 0, 2048, &cfg, ScanReport::default());
        assert_eq!(rep.scanned, 2048);
        assert_eq!(rep.violation_count, 0, "{:?}", rep.violations.first());
    }

    #[test]
    fn crosscheck_examples() {
        let rep = random_crosscheck(1, 0, 5).unwrap();
        assert_eq!(rep.count, 1);
        assert!(rep.mismatches.is_empty());
        let rep = random_crosscheck(1000, 1, 7).unwrap();
        assert!(rep.mismatches.is_empty());
    }

    #[test]
    fn random_audit_small() {
        let s = random_audit(500, 9, 3);
        assert_eq!(s.audited, 500);
        assert!(s.failures.is_empty(), "{:?}", s.failures.first());
        assert_eq!(random_audit(500, 9, 3), s);
    }

    proptest! {
        #[test]
        fn chebyshev_reconstructs_laurent_product(a in prop::array::uniform8(-20i64..=20)) {
            let p = poly(a);
            prop_assert_eq!(expand_laurent(&chebyshev_coeffs(&p).c), laurent_product(&p));
        }

        #[test]
        fn two_routes_to_norm_at_omega_agree(a in prop::array::uniform8(-20i64..=20)) {
            let p = poly(a);
            prop_assert_eq!(chebyshev_eval_omega(&chebyshev_coeffs(&p)), norm_sq_omega(&eval_at_omega(&p)));
        }
    }
}
