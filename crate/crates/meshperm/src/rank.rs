//! The rank invariant and the avoidability classifier.
//!
//! Rank is the minimum number of columns whose restriction still shows both
//! signs in every row; a pattern is avoidable exactly when its rank is
//! finite. Finding the rank is a set-cover instance over the 2d "needs"
//! (row i still missing a +, row i still missing a -), solved exactly by
//! branch and bound.

use std::collections::HashMap;

use crate::pattern::{Sign, Smp};
use crate::{Error, Result};

/// Practicality caps for the exponential solver.
const MAX_D: usize = 24;
const MAX_K: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AvoidabilityClass {
    StronglyUnavoidable,
    Avoidable { rank: usize },
}

/// O(d·k) avoidability test: one pass over the columns maintaining per-row
/// seen-plus / seen-minus flags. The empty pattern and single columns have a
/// sign missing in some row and are unavoidable.
pub fn avoidable(p: &Smp) -> bool {
    if p.k() == 0 {
        return false;
    }
    let d = p.d();
    let mut seen_plus = vec![false; d];
    let mut seen_minus = vec![false; d];
    for col in p.columns() {
        for (i, &s) in col.signs().iter().enumerate() {
            match s {
                Sign::Plus => seen_plus[i] = true,
                Sign::Minus => seen_minus[i] = true,
            }
        }
    }
    (0..d).all(|i| seen_plus[i] && seen_minus[i])
}

fn check_caps(p: &Smp) -> Result<()> {
    if p.d() > MAX_D {
        return Err(Error::CapacityExceeded(format!(
            "d = {} exceeds the solver cap {MAX_D}",
            p.d()
        )));
    }
    if p.k() > MAX_K {
        return Err(Error::CapacityExceeded(format!(
            "k = {} exceeds the solver cap {MAX_K}",
            p.k()
        )));
    }
    Ok(())
}

/// Coverage mask of a column: bit 2i when it shows + in row i+1, bit 2i+1
/// when it shows -.
fn coverage_mask(col: &crate::pattern::SignVector) -> u64 {
    col.signs()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, s)| match s {
            Sign::Plus => acc | (1 << (2 * i)),
            Sign::Minus => acc | (1 << (2 * i + 1)),
        })
}

struct Solver<'a> {
    masks: &'a [u64],
    best: usize,
    best_set: Vec<usize>,
    /// uncovered-state -> smallest depth at which it has been reached;
    /// a revisit at the same or greater depth cannot improve on the
    /// completions already explored.
    seen: HashMap<u64, usize>,
}

impl Solver<'_> {
    fn greedy(&self, mut uncovered: u64) -> Vec<usize> {
        let mut chosen = Vec::new();
        while uncovered != 0 {
            let (idx, _) = self
                .masks
                .iter()
                .enumerate()
                .max_by_key(|(i, m)| ((*m & uncovered).count_ones(), usize::MAX - i))
                .expect("feasible instance has columns");
            chosen.push(idx);
            uncovered &= !self.masks[idx];
        }
        chosen
    }

    fn dfs(&mut self, uncovered: u64, chosen: &mut Vec<usize>) {
        if uncovered == 0 {
            if chosen.len() < self.best {
                self.best = chosen.len();
                self.best_set = chosen.clone();
            }
            return;
        }
        if chosen.len() + 1 >= self.best {
            return;
        }
        // greedy lower bound: ceil(|uncovered| / best single-column coverage)
        let max_cover = self
            .masks
            .iter()
            .map(|m| (m & uncovered).count_ones())
            .max()
            .unwrap_or(0);
        if max_cover == 0 {
            return; // infeasible branch; cannot happen for finite-rank input
        }
        let need = uncovered.count_ones();
        let lower = need.div_ceil(max_cover);
        if chosen.len() + lower as usize >= self.best {
            return;
        }
        match self.seen.get(&uncovered) {
            Some(&depth) if depth <= chosen.len() => return,
            _ => {
                self.seen.insert(uncovered, chosen.len());
            }
        }
        // fail-first: branch on the need with the fewest covering columns
        let mut branch_bit = 0;
        let mut branch_count = usize::MAX;
        let mut bits = uncovered;
        while bits != 0 {
            let bit = bits & bits.wrapping_neg();
            let count = self.masks.iter().filter(|m| *m & bit != 0).count();
            if count < branch_count {
                branch_count = count;
                branch_bit = bit;
            }
            bits &= bits - 1;
        }
        for idx in 0..self.masks.len() {
            if self.masks[idx] & branch_bit != 0 {
                chosen.push(idx);
                self.dfs(uncovered & !self.masks[idx], chosen);
                chosen.pop();
            }
        }
    }
}

/// Exact rank with a witness sub-pattern achieving it (column indices into
/// the canonical column order). `None` when the rank is infinite.
pub fn rank_with_witness(p: &Smp) -> Result<Option<(usize, Vec<usize>)>> {
    check_caps(p)?;
    if !avoidable(p) {
        return Ok(None);
    }
    let masks: Vec<u64> = p.columns().iter().map(coverage_mask).collect();
    let all_needs = (1u64 << (2 * p.d())) - 1;
    let mut solver = Solver {
        masks: &masks,
        best: usize::MAX,
        best_set: Vec::new(),
        seen: HashMap::new(),
    };
    let greedy = solver.greedy(all_needs);
    solver.best = greedy.len();
    solver.best_set = greedy;
    let mut chosen = Vec::new();
    solver.dfs(all_needs, &mut chosen);
    let mut set = solver.best_set;
    set.sort_unstable();
    Ok(Some((solver.best, set)))
}

/// The rank: minimum cardinality of a sub-pattern showing both signs in
/// every row, or infinite when some row of T(P) is constant.
pub fn rank(p: &Smp) -> Result<Rank> {
    Ok(match rank_with_witness(p)? {
        Some((r, _)) => Rank::Finite(r),
        None => Rank::Infinite,
    })
}

/// The avoidability dichotomy: infinite rank means every permutation
/// contains the pattern; finite rank r means avoiders exist of every length
/// at least r (and none shorter).
pub fn classify(p: &Smp) -> Result<AvoidabilityClass> {
    Ok(match rank(p)? {
        Rank::Infinite => AvoidabilityClass::StronglyUnavoidable,
        Rank::Finite(r) => AvoidabilityClass::Avoidable { rank: r },
    })
}
