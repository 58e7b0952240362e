//! Exact truncated power series in x whose coefficients are polynomials in q
//! over arbitrary-precision integers, the closed-form generators they feed,
//! and reconciliation against enumerated distribution tables.
//!
//! Conventions: a `QPoly` is dense in ascending q-powers; a `SeriesQ` is
//! dense in x-degrees 0..=trunc. All arithmetic is exact; a reciprocal
//! requires constant term 1, which every denominator built here has.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::enumerate::DistributionTable;
use crate::numbers::factorial_int;
use crate::pattern::{parse_smp, Smp};
use crate::{Error, Result};

/// A polynomial in q with integer coefficients, stored dense and trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly(Vec<BigInt>);

impl QPoly {
    pub fn zero() -> Self {
        QPoly(vec![])
    }

    pub fn one() -> Self {
        QPoly(vec![BigInt::one()])
    }

    pub fn constant(c: BigInt) -> Self {
        QPoly::from_coeffs(vec![c])
    }

    /// The monomial q.
    pub fn q() -> Self {
        QPoly(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Coefficient of q^k.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.0.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let len = self.0.len().max(other.0.len());
        QPoly::from_coeffs((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let len = self.0.len().max(other.0.len());
        QPoly::from_coeffs((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &BigInt) -> QPoly {
        QPoly::from_coeffs(self.0.iter().map(|a| a * c).collect())
    }

    /// Value at q = 1 (the total mass of a distribution coefficient).
    pub fn eval_at_one(&self) -> BigInt {
        self.0.iter().sum()
    }
}

impl fmt::Display for QPoly {
    /// Descending powers, e.g. "q^3+6q^2+12q+17".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.0.len()).rev() {
            let c = &self.0[k];
            if c.is_zero() {
                continue;
            }
            if c < &BigInt::zero() {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let abs = c.magnitude();
            if k == 0 || !abs.is_one() {
                write!(f, "{abs}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{k}")?,
            }
        }
        Ok(())
    }
}

/// A power series in x truncated at degree `trunc`, with `QPoly` coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesQ {
    trunc: usize,
    coeffs: Vec<QPoly>,
}

impl SeriesQ {
    pub fn zero(trunc: usize) -> Self {
        SeriesQ {
            trunc,
            coeffs: vec![QPoly::zero(); trunc + 1],
        }
    }

    pub fn one(trunc: usize) -> Self {
        let mut s = SeriesQ::zero(trunc);
        s.coeffs[0] = QPoly::one();
        s
    }

    pub fn from_fn(trunc: usize, f: impl Fn(usize) -> QPoly) -> Self {
        SeriesQ {
            trunc,
            coeffs: (0..=trunc).map(f).collect(),
        }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Coefficient of x^n.
    pub fn coeff(&self, n: usize) -> &QPoly {
        &self.coeffs[n]
    }

    fn zip(&self, other: &SeriesQ, f: impl Fn(&QPoly, &QPoly) -> QPoly) -> SeriesQ {
        assert_eq!(self.trunc, other.trunc, "mismatched truncation orders");
        SeriesQ {
            trunc: self.trunc,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &SeriesQ) -> SeriesQ {
        self.zip(other, QPoly::add)
    }

    pub fn sub(&self, other: &SeriesQ) -> SeriesQ {
        self.zip(other, QPoly::sub)
    }

    pub fn mul(&self, other: &SeriesQ) -> SeriesQ {
        assert_eq!(self.trunc, other.trunc, "mismatched truncation orders");
        let mut out = SeriesQ::zero(self.trunc);
        for i in 0..=self.trunc {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=self.trunc - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        out
    }

    /// Multiplicative inverse modulo x^(trunc+1); the constant term must be
    /// the polynomial 1.
    pub fn reciprocal(&self) -> SeriesQ {
        assert!(
            self.coeffs[0] == QPoly::one(),
            "reciprocal requires constant term 1"
        );
        let mut inv = SeriesQ::zero(self.trunc);
        inv.coeffs[0] = QPoly::one();
        for n in 1..=self.trunc {
            let mut acc = QPoly::zero();
            for i in 1..=n {
                acc = acc.add(&self.coeffs[i].mul(&inv.coeffs[n - i]));
            }
            inv.coeffs[n] = acc.neg();
        }
        inv
    }

    pub fn div(&self, other: &SeriesQ) -> SeriesQ {
        self.mul(&other.reciprocal())
    }

    /// Multiply by x^k (shift), dropping overflowing degrees.
    pub fn shift_x(&self, k: usize) -> SeriesQ {
        let mut out = SeriesQ::zero(self.trunc);
        for n in 0..=self.trunc.saturating_sub(k) {
            out.coeffs[n + k] = self.coeffs[n].clone();
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&QPoly) -> QPoly) -> SeriesQ {
        SeriesQ {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Specialize q := 1.
    pub fn at_q_one(&self) -> SeriesQ {
        self.map_coeffs(|c| QPoly::constant(c.eval_at_one()))
    }
}

/// F_d(x) = Σ (n!)^(d-1) x^n, the generating function of all d-dimensional
/// permutations.
pub fn f_d(d: usize, trunc: usize) -> SeriesQ {
    SeriesQ::from_fn(trunc, |n| {
        QPoly::constant(factorial_int(n).pow((d - 1) as u32))
    })
}

/// The rising factorial q^(n) = q(q+1)…(q+n-1), with q^(0) = 1.
pub fn rising_factorial_poly(n: usize) -> QPoly {
    let mut acc = QPoly::one();
    for i in 0..n {
        acc = acc.mul(&QPoly::from_coeffs(vec![BigInt::from(i), BigInt::one()]));
    }
    acc
}

/// The five reference patterns whose distributions have closed forms, lifted
/// to dimension d by star rows.
pub fn case_pattern(case: usize, d: usize) -> Result<Smp> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let stars = |k: usize| "*".repeat(k);
    let text = match case {
        1 => format!("++{}", stars(d - 2)),
        2 => format!("+{}", stars(d - 1)),
        3 => format!("+-{s},-+{s}", s = stars(d - 2)),
        4 => format!("++{s},+-{s},--{s}", s = stars(d - 2)),
        5 => stars(d),
        other => return Err(Error::UnknownCase(other)),
    };
    parse_smp(&text)
}

/// Closed-form distribution for each reference case in dimension d.
pub fn case_formula(case: usize, d: usize, trunc: usize) -> Result<SeriesQ> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let lift = |n: usize| factorial_int(n).pow((d - 2) as u32);
    Ok(match case {
        // Σ (n!)^(d-2) x^n q^(n): the rising factorial, lifted
        1 => SeriesQ::from_fn(trunc, |n| rising_factorial_poly(n).scale(&lift(n))),
        // 1 + q(F_d - 1): exactly one occurrence in every nonempty permutation
        2 => SeriesQ::from_fn(trunc, |n| {
            if n == 0 {
                QPoly::one()
            } else {
                QPoly::q().scale(&factorial_int(n).pow((d - 1) as u32))
            }
        }),
        // Σ (n!)^(d-2) x^n [x^n] F_2/(1 + x(1-q)F_2)
        3 => {
            let f2 = f_d(2, trunc);
            let one_minus_q = QPoly::one().sub(&QPoly::q());
            let denom = SeriesQ::one(trunc).add(&f2.map_coeffs(|c| c.mul(&one_minus_q)).shift_x(1));
            let base = f2.div(&denom);
            SeriesQ::from_fn(trunc, |n| base.coeff(n).scale(&lift(n)))
        }
        // F_d + (q-1) Σ (n!)^(d-2) (n-1)! x^n
        4 => {
            let q_minus_one = QPoly::q().sub(&QPoly::one());
            let tail = SeriesQ::from_fn(trunc, |n| {
                if n == 0 {
                    QPoly::zero()
                } else {
                    q_minus_one.scale(&(lift(n) * factorial_int(n - 1)))
                }
            });
            f_d(d, trunc).add(&tail)
        }
        // (q-1)x + F_d: only the length-1 permutation has an occurrence
        5 => {
            let mut out = f_d(d, trunc);
            if trunc >= 1 {
                out.coeffs[1] = out.coeffs[1].add(&QPoly::q().sub(&QPoly::one()));
            }
            out
        }
        other => return Err(Error::UnknownCase(other)),
    })
}

/// The plus-antipodal pattern with 2^d - 2 columns, missing the pair
/// {+…+, -…-}.
pub fn plus_antipodal_pattern(d: usize) -> Result<Smp> {
    let full = Smp::full(d)?;
    let cols = full
        .columns()
        .iter()
        .filter(|c| {
            let code = c.code();
            code != 0 && code != (1u32 << d) - 1
        })
        .cloned()
        .collect();
    Smp::new(d, cols)
}

/// Avoider series A(x) and full distribution F_P(x,q) of the plus-antipodal
/// pattern with 2^d - 2 columns, both derived from the counting recurrence
/// a_{n+1} = ((n+1)!)^(d-1) - Σ a_i ((n-i)!)^(d-1) and the functional
/// equation F = A + xqAF.
pub fn plus_antipodal_series(d: usize, trunc: usize) -> (SeriesQ, SeriesQ) {
    let mut a = Vec::with_capacity(trunc + 1);
    a.push(BigInt::one());
    for n in 0..trunc {
        let mut next = factorial_int(n + 1).pow((d - 1) as u32);
        for (i, ai) in a.iter().enumerate() {
            next -= ai * factorial_int(n - i).pow((d - 1) as u32);
        }
        a.push(next);
    }
    let a_series = SeriesQ::from_fn(trunc, |n| QPoly::constant(a[n].clone()));
    // F = A / (1 - xqA)
    let xqa = a_series.map_coeffs(|c| c.mul(&QPoly::q())).shift_x(1);
    let f = a_series.div(&SeriesQ::one(trunc).sub(&xqa));
    (a_series, f)
}

/// The same two series from the closed forms A = F_d/(1 + x F_d) and
/// F = F_d/(1 + x(1-q) F_d); used to cross-check the recurrence route.
pub fn plus_antipodal_closed_forms(d: usize, trunc: usize) -> (SeriesQ, SeriesQ) {
    let fd = f_d(d, trunc);
    let a = fd.div(&SeriesQ::one(trunc).add(&fd.shift_x(1)));
    let one_minus_q = QPoly::one().sub(&QPoly::q());
    let denom = SeriesQ::one(trunc).add(&fd.map_coeffs(|c| c.mul(&one_minus_q)).shift_x(1));
    let f = fd.div(&denom);
    (a, f)
}

/// Distribution of the all-ascending pair pattern on length-3 permutations:
/// q^3 + 2(2^(d-1)-1) q^2 + (3^d - 2^(d+1) + 1) q + (6^(d-1) - 3^d + 2^d).
pub fn f3d_polynomial(d: usize) -> QPoly {
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let six = BigInt::from(6);
    let c2 = BigInt::from(2) * (two.pow((d - 1) as u32) - BigInt::one());
    let c1 = three.pow(d as u32) - two.pow((d + 1) as u32) + BigInt::one();
    let c0 = six.pow((d - 1) as u32) - three.pow(d as u32) + two.pow(d as u32);
    QPoly::from_coeffs(vec![c0, c1, c2, BigInt::one()])
}

/// 6^(d-1) - 3^d + 2^d: the number of length-3 permutations avoiding the
/// marked pattern (+,…,+ : at least 1).
pub fn smmp_avoider_count(d: usize) -> BigInt {
    f3d_polynomial(d).coeff(0)
}

/// One cell that disagrees between a closed form and an enumerated table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub n: usize,
    pub q_power: usize,
    pub expected: BigInt,
    pub actual: BigInt,
}

/// Outcome of comparing a formula against enumerated tables; empty means
/// every cell agreed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReconcileReport {
    pub mismatches: Vec<Mismatch>,
}

impl ReconcileReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare a closed-form series against enumerated distribution tables,
/// cell by cell, exactly.
pub fn reconcile(formula: &SeriesQ, tables: &[DistributionTable]) -> Result<ReconcileReport> {
    let mut report = ReconcileReport::default();
    for table in tables {
        if table.n > formula.trunc() {
            return Err(Error::TruncationTooShort {
                trunc: formula.trunc(),
                needed: table.n,
            });
        }
        let poly = formula.coeff(table.n);
        let width = table.counts.len().max(poly.degree().map_or(0, |d| d + 1));
        for k in 0..width {
            let expected = poly.coeff(k);
            let actual = table
                .counts
                .get(k)
                .map(|c| BigInt::from(c.clone()))
                .unwrap_or_else(BigInt::zero);
            if expected != actual {
                report.mismatches.push(Mismatch {
                    n: table.n,
                    q_power: k,
                    expected,
                    actual,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::stirling2;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn f_d_prefixes() {
        let f2 = f_d(2, 3);
        assert_eq!(f2.coeff(0), &QPoly::one());
        assert_eq!(f2.coeff(2), &QPoly::constant(int(2)));
        assert_eq!(f2.coeff(3), &QPoly::constant(int(6)));
        let f3 = f_d(3, 3);
        assert_eq!(f3.coeff(2), &QPoly::constant(int(4)));
        assert_eq!(f3.coeff(3), &QPoly::constant(int(36)));
    }

    #[test]
    fn rising_factorial_small() {
        assert_eq!(rising_factorial_poly(0), QPoly::one());
        assert_eq!(rising_factorial_poly(1), QPoly::q());
        // q(q+1)(q+2) = q^3 + 3q^2 + 2q
        assert_eq!(
            rising_factorial_poly(3),
            QPoly::from_coeffs(vec![int(0), int(2), int(3), int(1)])
        );
    }

    #[test]
    fn case_formula_examples() {
        let c1 = case_formula(1, 2, 4).unwrap();
        assert_eq!(c1.coeff(3), &rising_factorial_poly(3));
        let c2 = case_formula(2, 3, 4).unwrap();
        assert_eq!(c2.coeff(2), &QPoly::q().scale(&int(4)));
        assert_eq!(c2.coeff(0), &QPoly::one());
        // case 4, d = 3: [x^3] = 12q + 24
        let c4 = case_formula(4, 3, 4).unwrap();
        assert_eq!(c4.coeff(3), &QPoly::from_coeffs(vec![int(24), int(12)]));
        let c5 = case_formula(5, 3, 2).unwrap();
        assert_eq!(c5.coeff(1), &QPoly::q());
        assert!(matches!(case_formula(6, 2, 2), Err(Error::UnknownCase(6))));
    }

    #[test]
    fn case_patterns_expand_as_expected() {
        assert_eq!(case_pattern(1, 3).unwrap().to_string(), "+++,++-");
        assert_eq!(case_pattern(2, 2).unwrap().to_string(), "++,+-");
        assert_eq!(case_pattern(3, 2).unwrap().to_string(), "+-,-+");
        assert_eq!(case_pattern(5, 2).unwrap(), Smp::full(2).unwrap());
    }

    #[test]
    fn series_ring_identities() {
        let f = f_d(2, 6);
        let g = case_formula(1, 2, 6).unwrap();
        let h = case_formula(4, 2, 6).unwrap();
        assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        let denom = SeriesQ::one(6).add(&f.shift_x(1));
        assert_eq!(denom.mul(&denom.reciprocal()), SeriesQ::one(6));
    }

    #[test]
    fn plus_antipodal_recurrence_prefix() {
        let (a, f) = plus_antipodal_series(2, 7);
        let prefix: Vec<BigInt> = (0..=3).map(|n| a.coeff(n).coeff(0)).collect();
        assert_eq!(prefix, vec![int(1), int(0), int(1), int(3)]);
        // d = 2 specialization coincides with the case-3 closed form
        assert_eq!(f, case_formula(3, 2, 7).unwrap());
        // recurrence agrees with the corrected closed forms
        let (a2, f2) = plus_antipodal_closed_forms(2, 7);
        assert_eq!(a, a2);
        assert_eq!(f, f2);
        let (a3, f3) = plus_antipodal_series(3, 5);
        let (a3c, f3c) = plus_antipodal_closed_forms(3, 5);
        assert_eq!(a3, a3c);
        assert_eq!(f3, f3c);
        // at q = 1 every permutation is counted once
        assert_eq!(f3.at_q_one(), f_d(3, 5));
    }

    #[test]
    fn f3d_values() {
        assert_eq!(f3d_polynomial(2).to_string(), "q^3+2q^2+2q+1");
        assert_eq!(f3d_polynomial(3).to_string(), "q^3+6q^2+12q+17");
        assert_eq!(f3d_polynomial(4).to_string(), "q^3+14q^2+50q+151");
        assert_eq!(smmp_avoider_count(2), int(1));
        assert_eq!(smmp_avoider_count(3), int(17));
        assert_eq!(smmp_avoider_count(4), int(151));
    }

    #[test]
    fn q_coefficient_is_doubled_stirling() {
        let expected = [2i64, 12, 50, 180, 602];
        for (d, &e) in (2..=6).zip(&expected) {
            let c = f3d_polynomial(d).coeff(1);
            assert_eq!(c, int(e));
            assert_eq!(c, int(2) * stirling2(d + 1, 3));
        }
    }

    #[test]
    fn qpoly_display() {
        assert_eq!(QPoly::zero().to_string(), "0");
        assert_eq!(QPoly::from_coeffs(vec![int(-3), int(1)]).to_string(), "q-3");
        assert_eq!(
            QPoly::from_coeffs(vec![int(0), int(2), int(0), int(1)]).to_string(),
            "q^3+2q"
        );
    }

    #[test]
    fn reconcile_flags_perturbed_tables() {
        use num_bigint::BigUint;
        let formula = case_formula(1, 2, 3).unwrap();
        let good = DistributionTable {
            d: 2,
            n: 3,
            counts: vec![0u32, 2, 3, 1].into_iter().map(BigUint::from).collect(),
        };
        assert!(reconcile(&formula, std::slice::from_ref(&good))
            .unwrap()
            .passed());
        let mut bad = good;
        bad.counts[2] = BigUint::from(4u32);
        let report = reconcile(&formula, &[bad]).unwrap();
        assert_eq!(report.mismatches.len(), 1);
        let m = &report.mismatches[0];
        assert_eq!((m.n, m.q_power), (3, 2));
        assert_eq!(m.expected, int(3));
        assert_eq!(m.actual, int(4));
        // tables beyond the truncation order are rejected outright
        let far = DistributionTable {
            d: 2,
            n: 9,
            counts: vec![BigUint::from(1u32)],
        };
        assert!(matches!(
            reconcile(&formula, &[far]),
            Err(Error::TruncationTooShort {
                trunc: 3,
                needed: 9
            })
        ));
    }
}
