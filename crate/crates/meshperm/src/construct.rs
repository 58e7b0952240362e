//! Constructive witnesses: permutations with a prescribed cyclic signature,
//! avoiders of finite-rank patterns, simultaneous avoiders via iterated
//! inflation, many-occurrence witnesses, and the {0,1,2}-string bijection
//! onto one-occurrence permutations of length 3.

use crate::multiperm::MultiPerm;
use crate::occurrence;
use crate::pattern::{Sign, SignVector, Smp};
use crate::rank::rank_with_witness;
use crate::{Error, Result};

/// The ascent/descent word of a permutation read cyclically: entry i < n
/// compares positions i and i+1, entry n compares position n with position 1
/// (+ when the former is smaller). Realizable exactly when both signs occur.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSignature(Vec<Sign>);

impl CyclicSignature {
    pub fn new(signs: Vec<Sign>) -> Self {
        CyclicSignature(signs)
    }

    pub fn of_perm(tau: &[u32]) -> Self {
        let n = tau.len();
        CyclicSignature(
            (0..n)
                .map(|i| {
                    if tau[i] < tau[(i + 1) % n] {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn is_realizable(&self) -> bool {
        self.0.contains(&Sign::Plus) && self.0.contains(&Sign::Minus)
    }
}

/// Realize a permutation with the given cyclic signature by peak insertion:
/// repeatedly place the largest unused value on a position whose incoming
/// arc is + and outgoing arc is -, then merge the two arcs. The merged sign
/// is forced when the remaining word would otherwise become constant and
/// defaults to - otherwise, which makes the output deterministic.
pub fn perm_from_cyclic_signature(sig: &CyclicSignature) -> Result<Vec<u32>> {
    let n = sig.len();
    if n < 2 || !sig.is_realizable() {
        return Err(Error::UnrealizableSignature);
    }
    let mut alive: Vec<usize> = (0..n).collect();
    // arcs[i] joins alive[i] to alive[(i+1) % len]
    let mut arcs: Vec<Sign> = sig.signs().to_vec();
    let mut values = vec![0u32; n];
    let mut next_value = n as u32;
    while alive.len() > 2 {
        let len = alive.len();
        let t = (0..len)
            .find(|&t| arcs[(t + len - 1) % len] == Sign::Plus && arcs[t] == Sign::Minus)
            .expect("a non-constant cyclic word has a peak");
        values[alive[t]] = next_value;
        next_value -= 1;
        let prev = (t + len - 1) % len;
        let others_plus = (0..len)
            .filter(|&a| a != prev && a != t)
            .all(|a| arcs[a] == Sign::Plus);
        let others_minus = (0..len)
            .filter(|&a| a != prev && a != t)
            .all(|a| arcs[a] == Sign::Minus);
        arcs[prev] = if others_minus && !others_plus {
            Sign::Plus
        } else {
            Sign::Minus
        };
        alive.remove(t);
        arcs.remove(t);
    }
    // two positions left with arc word {+,-}
    let (a, b) = (alive[0], alive[1]);
    debug_assert_eq!(next_value, 2);
    if arcs[0] == Sign::Plus {
        values[a] = 1;
        values[b] = 2;
    } else {
        values[a] = 2;
        values[b] = 1;
    }
    debug_assert_eq!(&CyclicSignature::of_perm(&values), sig);
    Ok(values)
}

/// A verified avoider of P with the requested length, built from a
/// rank-achieving sub-pattern: row i of the stacked matrix realizes the
/// periodic signature (p¹_i, …, p^k_i, p¹_i, …) truncated to n, so every
/// element is blocked by its cyclic successor.
pub fn build_avoider(p: &Smp, n: usize) -> Result<MultiPerm> {
    let (r, witness) = rank_with_witness(p)?.ok_or(Error::RankInfinite)?;
    if n < r {
        return Err(Error::LengthTooShort {
            requested: n,
            rank: r,
        });
    }
    let subset: Vec<&SignVector> = witness.iter().map(|&i| &p.columns()[i]).collect();
    let rows: Vec<Vec<u32>> = (1..=p.d())
        .map(|row| {
            let word: Vec<Sign> = (0..n).map(|t| subset[t % r].get(row)).collect();
            perm_from_cyclic_signature(&CyclicSignature::new(word))
        })
        .collect::<Result<_>>()?;
    let result = MultiPerm::from_matrix(rows)?;
    assert!(
        occurrence::avoids(&result, p)?,
        "avoider construction failed verification for {p} at length {n}"
    );
    Ok(result)
}

/// A verified simultaneous avoider of every pattern in the set, of length at
/// least `min_length`, built by iterated inflation of individual avoiders.
pub fn build_simultaneous_avoider(patterns: &[Smp], min_length: usize) -> Result<MultiPerm> {
    let first = patterns.first().ok_or(Error::DimensionTooSmall(0))?;
    let d = first.d();
    for p in patterns {
        if p.d() != d {
            return Err(Error::DimensionMismatch(p.d(), d));
        }
    }
    let mut ranks = Vec::with_capacity(patterns.len());
    for p in patterns {
        match rank_with_witness(p)? {
            Some((r, _)) => ranks.push(r),
            None => return Err(Error::SomePatternUnavoidable(p.to_string())),
        }
    }
    if patterns.len() == 1 {
        return build_avoider(&patterns[0], ranks[0].max(min_length));
    }
    // the innermost avoider absorbs the length requirement
    let outer_product: usize = ranks[1..].iter().product();
    let n1 = ranks[0].max(min_length.div_ceil(outer_product.max(1)));
    let mut acc = build_avoider(&patterns[0], n1)?;
    for (p, &r) in patterns.iter().zip(&ranks).skip(1) {
        let outer = build_avoider(p, r)?;
        acc = outer.inflate_all(&acc)?;
    }
    for p in patterns {
        assert!(
            occurrence::avoids(&acc, p)?,
            "simultaneous avoider failed verification for {p}"
        );
    }
    Ok(acc)
}

/// A permutation of length n with exactly n occurrences of P. Exists exactly
/// when P has no minus-antipodal subset: some antipodal pair is entirely
/// missing, and after complementing the rows where its +-leading
/// representative is negative, the all-increasing permutation works.
pub fn witness_n_occurrences(p: &Smp, n: usize) -> Result<MultiPerm> {
    if p.contains_minus_antipodal_subset() {
        return Err(Error::HasMinusAntipodalSubset);
    }
    let d = p.d();
    let mut keys: Vec<SignVector> = (0..1u32 << d)
        .map(|c| SignVector::from_code(c, d))
        .filter(|v| v.get(1) == Sign::Plus)
        .collect();
    keys.sort();
    let key = keys
        .into_iter()
        .find(|k| !p.contains(k) && !p.contains(&k.complement()))
        .expect("a pattern without a minus-antipodal subset misses a full pair");
    let increasing: Vec<u32> = (1..=n as u32).collect();
    let decreasing: Vec<u32> = (1..=n as u32).rev().collect();
    let rows: Vec<Vec<u32>> = (2..=d)
        .map(|row| match key.get(row) {
            Sign::Plus => increasing.clone(),
            Sign::Minus => decreasing.clone(),
        })
        .collect();
    let result = MultiPerm::new(rows)?;
    assert_eq!(
        occurrence::count_occurrences_smp(&result, p)?,
        n,
        "witness construction failed verification for {p} at length {n}"
    );
    Ok(result)
}

const ROW_123: [u32; 3] = [1, 2, 3];
const ROW_132: [u32; 3] = [1, 3, 2];
const ROW_213: [u32; 3] = [2, 1, 3];
const ROW_231: [u32; 3] = [2, 3, 1];
const ROW_312: [u32; 3] = [3, 1, 2];

/// Map a {0,1,2}-string with at least one 0 and one 1 to a length-3
/// permutation with exactly one occurrence of the all-ascending pair
/// pattern. The first symbol selects the letter-to-row dictionary.
pub fn string_to_one_occurrence_perm(s: &str) -> Result<MultiPerm> {
    let symbols: Vec<char> = s.chars().collect();
    let d = symbols.len();
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    for &c in &symbols {
        if !matches!(c, '0' | '1' | '2') {
            return Err(Error::BadAlphabet(c));
        }
    }
    if !symbols.contains(&'0') || !symbols.contains(&'1') {
        return Err(Error::MissingRequiredSymbol);
    }
    let dictionary = |c: char| -> [u32; 3] {
        match (symbols[0], c) {
            ('0', '0') => ROW_132,
            ('0', '1') => ROW_231,
            ('1', '0') => ROW_312,
            ('1', '1') => ROW_213,
            ('2', '0') => ROW_132,
            ('2', '1') => ROW_213,
            (_, _) => ROW_123,
        }
    };
    let rows: Vec<Vec<u32>> = symbols[1..]
        .iter()
        .map(|&c| dictionary(c).to_vec())
        .collect();
    MultiPerm::new(rows)
}

/// Invert the string bijection. Errors when the permutation is not in the
/// image (length 3 with exactly one ascending-pair occurrence).
pub fn one_occurrence_perm_to_string(mp: &MultiPerm) -> Result<String> {
    if mp.n() != 3 {
        return Err(Error::NotInBijectionImage);
    }
    let rows: Vec<&[u32]> = mp.value_rows().iter().map(|r| r.as_slice()).collect();
    let has = |row: &[u32; 3]| rows.iter().any(|r| *r == &row[..]);
    let all_in = |allowed: &[&[u32; 3]]| rows.iter().all(|r| allowed.iter().any(|a| *r == &a[..]));
    let (first, zero_row, one_row): (char, [u32; 3], [u32; 3]) =
        if all_in(&[&ROW_123, &ROW_132, &ROW_231]) && has(&ROW_231) {
            ('0', ROW_132, ROW_231)
        } else if all_in(&[&ROW_123, &ROW_213, &ROW_312]) && has(&ROW_312) {
            ('1', ROW_312, ROW_213)
        } else if all_in(&[&ROW_123, &ROW_132, &ROW_213]) && has(&ROW_132) && has(&ROW_213) {
            ('2', ROW_132, ROW_213)
        } else {
            return Err(Error::NotInBijectionImage);
        };
    let mut s = String::with_capacity(mp.d());
    s.push(first);
    for r in &rows {
        if *r == &zero_row[..] {
            s.push('0');
        } else if *r == &one_row[..] {
            s.push('1');
        } else {
            s.push('2');
        }
    }
    Ok(s)
}
