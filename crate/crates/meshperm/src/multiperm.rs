//! d-dimensional permutations in canonical form.
//!
//! A `MultiPerm` of length n stores the value rows π²..π^d; row 1 is always
//! the identity 1 2 … n and is kept implicit. Element i is the column
//! (i, π²_i, …, π^d_i). All operations are pure and return new values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::pattern::{Sign, SignVector};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPerm {
    n: usize,
    /// Rows π²..π^d, each a permutation of {1..n}.
    rows: Vec<Vec<u32>>,
}

fn check_permutation(row: &[u32], n: usize) -> Result<()> {
    if row.len() != n {
        return Err(Error::NotAPermutation(format!(
            "row has length {}, expected {}",
            row.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &v in row {
        if v == 0 || v as usize > n {
            return Err(Error::NotAPermutation(format!(
                "value {v} out of range 1..={n}"
            )));
        }
        if seen[v as usize - 1] {
            return Err(Error::NotAPermutation(format!("value {v} repeated")));
        }
        seen[v as usize - 1] = true;
    }
    Ok(())
}

impl MultiPerm {
    /// Build from the value rows π²..π^d (row 1 implicit). The dimension is
    /// `rows.len() + 1`.
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::DimensionTooSmall(1));
        }
        let n = rows[0].len();
        for row in &rows {
            check_permutation(row, n)?;
        }
        Ok(MultiPerm { n, rows })
    }

    /// Build from a full d×n matrix whose first row may be any permutation;
    /// columns are sorted so that row 1 becomes increasing and then dropped.
    pub fn from_matrix(all_rows: Vec<Vec<u32>>) -> Result<Self> {
        if all_rows.len() < 2 {
            return Err(Error::DimensionTooSmall(all_rows.len()));
        }
        let n = all_rows[0].len();
        for row in &all_rows {
            check_permutation(row, n)?;
        }
        // order[j] = column holding row-1 value j+1
        let mut order = vec![0usize; n];
        for (col, &v) in all_rows[0].iter().enumerate() {
            order[v as usize - 1] = col;
        }
        let rows = all_rows[1..]
            .iter()
            .map(|row| order.iter().map(|&c| row[c]).collect())
            .collect();
        Ok(MultiPerm { n, rows })
    }

    /// The all-identity permutation of the given dimension and length.
    pub fn identity(d: usize, n: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        let row: Vec<u32> = (1..=n as u32).collect();
        Ok(MultiPerm {
            n,
            rows: vec![row; d - 1],
        })
    }

    pub fn d(&self) -> usize {
        self.rows.len() + 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Value rows π²..π^d.
    pub fn value_rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Full d×n matrix including the identity first row.
    pub fn full_matrix(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(self.d());
        out.push((1..=self.n as u32).collect());
        out.extend(self.rows.iter().cloned());
        out
    }

    /// Element Π_i as a d-tuple, 1-based.
    pub fn element(&self, i: usize) -> Result<Vec<u32>> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: self.n,
            });
        }
        let mut e = Vec::with_capacity(self.d());
        e.push(i as u32);
        e.extend(self.rows.iter().map(|r| r[i - 1]));
        Ok(e)
    }

    /// sgn(Π_j − Π_i) as a sign vector; no coordinate is ever zero because
    /// all elements differ in every coordinate.
    pub fn sgn_between(&self, j: usize, i: usize) -> Result<SignVector> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: self.n,
            });
        }
        if j == 0 || j > self.n {
            return Err(Error::IndexOutOfRange {
                index: j,
                limit: self.n,
            });
        }
        if i == j {
            return Err(Error::SameIndex);
        }
        let mut signs = Vec::with_capacity(self.d());
        signs.push(if j > i { Sign::Plus } else { Sign::Minus });
        for row in &self.rows {
            signs.push(if row[j - 1] > row[i - 1] {
                Sign::Plus
            } else {
                Sign::Minus
            });
        }
        Ok(SignVector::new(signs))
    }

    /// Complement one coordinate of the point set. For i ≥ 2 the values of
    /// row i are replaced by n+1−v. For i = 1 the first coordinates are
    /// flipped, which after re-canonicalization reverses every value row as
    /// a sequence. Involution for every i.
    pub fn complement_row(&self, i: usize) -> Result<Self> {
        let d = self.d();
        if i == 0 || i > d {
            return Err(Error::IndexOutOfRange { index: i, limit: d });
        }
        let mut rows = self.rows.clone();
        if i == 1 {
            for row in &mut rows {
                row.reverse();
            }
        } else {
            for v in &mut rows[i - 2] {
                *v = (self.n as u32) + 1 - *v;
            }
        }
        Ok(MultiPerm { n: self.n, rows })
    }

    /// Inflation of element i by Σ: the element is replaced by a copy of Σ,
    /// order-isomorphically in every coordinate; result length n+m−1.
    pub fn inflate(&self, i: usize, sigma: &MultiPerm) -> Result<Self> {
        if self.d() != sigma.d() {
            return Err(Error::DimensionMismatch(self.d(), sigma.d()));
        }
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: self.n,
            });
        }
        let m = sigma.n;
        let shift = (m - 1) as u32;
        let rows = self
            .rows
            .iter()
            .zip(sigma.rows.iter())
            .map(|(row, srow)| {
                let pivot = row[i - 1];
                let mut out = Vec::with_capacity(self.n + m - 1);
                for (s, &v) in row.iter().enumerate() {
                    if s + 1 == i {
                        // values pivot..pivot+m-1, ordered like Σ
                        out.extend(srow.iter().map(|&sv| pivot - 1 + sv));
                    } else {
                        out.push(if v > pivot { v + shift } else { v });
                    }
                }
                out
            })
            .collect();
        Ok(MultiPerm {
            n: self.n + m - 1,
            rows,
        })
    }

    /// Inflation of every element by Σ; result length n·m. Block s of the
    /// result is the copy of Σ inflating element s.
    pub fn inflate_all(&self, sigma: &MultiPerm) -> Result<Self> {
        if self.d() != sigma.d() {
            return Err(Error::DimensionMismatch(self.d(), sigma.d()));
        }
        let m = sigma.n as u32;
        let rows = self
            .rows
            .iter()
            .zip(sigma.rows.iter())
            .map(|(row, srow)| {
                let mut out = Vec::with_capacity(self.n * sigma.n);
                for &v in row {
                    out.extend(srow.iter().map(|&sv| (v - 1) * m + sv));
                }
                out
            })
            .collect();
        Ok(MultiPerm {
            n: self.n * sigma.n,
            rows,
        })
    }
}

impl fmt::Display for MultiPerm {
    /// Text form: value rows separated by "; ", entries by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for MultiPerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<Vec<u32>> = s
            .split(';')
            .map(|row| {
                row.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse::<u32>()
                            .map_err(|_| Error::NotAPermutation(format!("bad entry {t:?}")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        MultiPerm::new(rows)
    }
}

#[derive(Serialize, Deserialize)]
struct MultiPermDto {
    d: usize,
    n: usize,
    rows: Vec<Vec<u32>>,
}

impl Serialize for MultiPerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MultiPermDto {
            d: self.d(),
            n: self.n,
            rows: self.rows.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPerm {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let dto = MultiPermDto::deserialize(de)?;
        let mp = MultiPerm::new(dto.rows).map_err(serde::de::Error::custom)?;
        if mp.d() != dto.d || mp.n() != dto.n {
            return Err(serde::de::Error::custom("d/n fields disagree with rows"));
        }
        Ok(mp)
    }
}

/// Parse a single one-line permutation like "471569283" (digits only, n ≤ 9)
/// into a 2-dimensional `MultiPerm`. Test and example helper.
pub fn from_one_line_digits(s: &str) -> Result<MultiPerm> {
    let row: Vec<u32> = s
        .chars()
        .map(|c| {
            c.to_digit(10)
                .ok_or(Error::NotAPermutation(format!("bad digit {c:?}")))
        })
        .collect::<Result<_>>()?;
    MultiPerm::new(vec![row])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(s: &str) -> MultiPerm {
        s.parse().unwrap()
    }

    #[test]
    fn figure_two_elements() {
        let p = mp("1 2 5 3 4; 5 1 2 4 3");
        assert_eq!(p.d(), 3);
        assert_eq!(p.n(), 5);
        assert_eq!(p.element(3).unwrap(), vec![3, 5, 2]);
        assert_eq!(p.element(1).unwrap(), vec![1, 1, 5]);
    }

    #[test]
    fn length_one_and_invalid() {
        let p = MultiPerm::new(vec![vec![1]]).unwrap();
        assert_eq!((p.d(), p.n()), (2, 1));
        assert!(matches!(
            MultiPerm::new(vec![vec![1, 1, 2]]),
            Err(Error::NotAPermutation(_))
        ));
        assert!(matches!(
            MultiPerm::new(vec![]),
            Err(Error::DimensionTooSmall(1))
        ));
    }

    #[test]
    fn empty_length_is_legal() {
        let p = MultiPerm::new(vec![vec![]]).unwrap();
        assert_eq!((p.d(), p.n()), (2, 0));
    }

    #[test]
    fn canonicalization_sorts_columns() {
        // rows (231; 213; 132) -> sort columns by first row
        let p = MultiPerm::from_matrix(vec![vec![2, 3, 1], vec![2, 1, 3], vec![1, 3, 2]]).unwrap();
        // column order becomes 3,1,2
        assert_eq!(p.value_rows(), &[vec![3, 2, 1], vec![2, 1, 3]]);
    }

    #[test]
    fn sgn_between_examples() {
        let p = mp("1 2 5 3 4; 5 1 2 4 3");
        assert_eq!(p.sgn_between(3, 2).unwrap().to_string(), "+++");
        assert_eq!(p.sgn_between(1, 2).unwrap().to_string(), "--+");
        let q = from_one_line_digits("471569283").unwrap();
        assert_eq!(q.sgn_between(8, 7).unwrap().to_string(), "++");
        assert!(matches!(q.sgn_between(3, 3), Err(Error::SameIndex)));
        assert!(matches!(
            q.sgn_between(0, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn complement_value_row() {
        let p = mp("2 1 3 4");
        assert_eq!(p.complement_row(2).unwrap(), mp("3 4 2 1"));
        // involution
        assert_eq!(p.complement_row(2).unwrap().complement_row(2).unwrap(), p);
    }

    #[test]
    fn complement_first_row_reverses() {
        let p = mp("1 2 5 3 4; 5 1 2 4 3");
        let r = p.complement_row(1).unwrap();
        assert_eq!(r, mp("4 3 5 2 1; 3 4 2 1 5"));
        assert_eq!(r.complement_row(1).unwrap(), p);
        assert!(matches!(
            p.complement_row(4),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn inflation_paper_example() {
        let p = mp("2 4 1 3; 1 2 4 3");
        let sigma = mp("2 1; 1 2");
        let inflated = p.inflate(2, &sigma).unwrap();
        assert_eq!(inflated, mp("2 5 4 1 3; 1 2 3 5 4"));
    }

    #[test]
    fn inflation_by_singleton_is_identity() {
        let p = mp("2 4 1 3; 1 2 4 3");
        let one = MultiPerm::identity(3, 1).unwrap();
        assert_eq!(p.inflate(3, &one).unwrap(), p);
    }

    #[test]
    fn inflation_small_cases() {
        let p = mp("1 2");
        let sigma = mp("2 1");
        assert_eq!(p.inflate(1, &sigma).unwrap(), mp("2 1 3"));
        assert_eq!(p.inflate_all(&mp("1 2")).unwrap(), mp("1 2 3 4"));
        let q = MultiPerm::new(vec![vec![1, 2], vec![1, 2]]).unwrap();
        let s2 = MultiPerm::new(vec![vec![2, 1], vec![2, 1]]).unwrap();
        assert_eq!(
            q.inflate(1, &s2).unwrap(),
            MultiPerm::new(vec![vec![2, 1, 3], vec![2, 1, 3]]).unwrap()
        );
    }

    #[test]
    fn inflate_dimension_mismatch() {
        let p = mp("1 2");
        let sigma = mp("1 2; 1 2");
        assert!(matches!(
            p.inflate(1, &sigma),
            Err(Error::DimensionMismatch(2, 3))
        ));
        assert!(matches!(
            p.inflate_all(&sigma),
            Err(Error::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn text_round_trip() {
        let p = mp("1 2 5 3 4; 5 1 2 4 3");
        assert_eq!(p.to_string(), "1 2 5 3 4; 5 1 2 4 3");
        assert_eq!(p.to_string().parse::<MultiPerm>().unwrap(), p);
        // commas are accepted as separators
        assert_eq!(mp("1,2,5,3,4; 5,1,2,4,3"), p);
    }

    #[test]
    fn json_round_trip() {
        let p = mp("1 2 5 3 4; 5 1 2 4 3");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"d":3,"n":5,"rows":[[1,2,5,3,4],[5,1,2,4,3]]}"#);
        assert_eq!(serde_json::from_str::<MultiPerm>(&json).unwrap(), p);
        assert!(serde_json::from_str::<MultiPerm>(r#"{"d":2,"n":2,"rows":[[1,1]]}"#).is_err());
    }
}
