//! Smith normal form by sparse elimination.
//!
//! Unit entries are cancelled first (fewest column entries wins), which keeps
//! the integers at ±1 for as long as possible. What remains is reduced with
//! smallest-magnitude pivots and rounded Euclidean steps. The resulting
//! diagonal is then put into a divisibility chain with gcd/lcm swaps.

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::integer::Int;
use super::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    /// Positive invariant factors `d_1 | d_2 | … | d_r`.
    pub invariant_factors: Vec<Int>,
    pub rank: usize,
}

impl SmithForm {
    /// Factors greater than one: the torsion of the cokernel.
    pub fn torsion(&self) -> impl Iterator<Item = &Int> {
        self.invariant_factors.iter().filter(|d| !d.is_unit())
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut work = Work::new(m);
    let mut units = 0usize;
    let mut diagonal: Vec<Int> = Vec::new();

    loop {
        let mut progress = false;
        for r in 0..work.rows.len() {
            let best = work.rows[r]
                .iter()
                .filter(|(_, v)| v.is_unit())
                .min_by_key(|(c, _)| (work.cols[**c as usize].len(), **c))
                .map(|(c, v)| (*c, v.clone()));
            if let Some((c, u)) = best {
                work.eliminate_unit(r, c, &u);
                units += 1;
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }

    while let Some((r, c)) = work.smallest_entry() {
        let d = work.general_pivot(r, c);
        if d.is_unit() {
            units += 1;
        } else {
            diagonal.push(d);
        }
    }

    // divisibility chain
    for i in 0..diagonal.len() {
        for j in i + 1..diagonal.len() {
            let g = diagonal[i].gcd(&diagonal[j]);
            if g != diagonal[i] {
                let l = diagonal[i].lcm(&diagonal[j]);
                diagonal[i] = g;
                diagonal[j] = l;
            }
        }
    }
    let mut invariant_factors = vec![Int::ONE; units];
    for d in diagonal {
        invariant_factors.push(d);
    }
    invariant_factors.sort();
    SmithForm { rank: invariant_factors.len(), invariant_factors }
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank
}

struct Work {
    rows: Vec<FxHashMap<u32, Int>>,
    cols: Vec<FxHashSet<u32>>,
}

impl Work {
    fn new(m: &IntMatrix) -> Self {
        let mut rows: Vec<FxHashMap<u32, Int>> = vec![FxHashMap::default(); m.rows()];
        let mut cols: Vec<FxHashSet<u32>> = vec![FxHashSet::default(); m.cols()];
        for (r, c, v) in m.triplets() {
            rows[r].insert(c as u32, v.clone());
            cols[c].insert(r as u32);
        }
        Self { rows, cols }
    }

    /// `row[target] -= f * row[src]`.
    fn sub_row(&mut self, target: usize, src: usize, f: &Int) {
        let src_entries: Vec<(u32, Int)> =
            self.rows[src].iter().map(|(c, v)| (*c, v.clone())).collect();
        let row = &mut self.rows[target];
        for (c, v) in src_entries {
            let delta = f * &v;
            let old = row.get(&c).cloned().unwrap_or(Int::ZERO);
            let new = &old - &delta;
            if new.is_zero() {
                row.remove(&c);
                self.cols[c as usize].remove(&(target as u32));
            } else {
                if old.is_zero() {
                    self.cols[c as usize].insert(target as u32);
                }
                row.insert(c, new);
            }
        }
    }

    fn remove_row(&mut self, r: usize) {
        for (c, _) in self.rows[r].drain() {
            self.cols[c as usize].remove(&(r as u32));
        }
    }

    fn eliminate_unit(&mut self, r: usize, c: u32, u: &Int) {
        let others: Vec<u32> = self.cols[c as usize].iter().copied().filter(|&x| x as usize != r).collect();
        for r2 in others {
            // u is its own inverse
            let f = &self.rows[r2 as usize][&c] * u;
            self.sub_row(r2 as usize, r, &f);
        }
        self.remove_row(r);
    }

    fn smallest_entry(&self) -> Option<(usize, u32)> {
        let mut best: Option<(usize, u32, &Int, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                let fill = row.len() * self.cols[*c as usize].len();
                let better = match &best {
                    None => true,
                    Some((_, _, bv, bf)) => match v.cmp_abs(bv) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => fill < *bf,
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((r, *c, v, fill));
                }
            }
        }
        best.map(|(r, c, _, _)| (r, c))
    }

    /// Reduces until `(r, c)` is alone in its row and column; returns `|pivot|`.
    fn general_pivot(&mut self, mut r: usize, mut c: u32) -> Int {
        'outer: loop {
            let p = self.rows[r][&c].clone();
            let others: Vec<u32> =
                self.cols[c as usize].iter().copied().filter(|&x| x as usize != r).collect();
            for r2 in others {
                let e = self.rows[r2 as usize][&c].clone();
                let q = e.div_round(&p);
                if !q.is_zero() {
                    self.sub_row(r2 as usize, r, &q);
                }
                if self.rows[r2 as usize].contains_key(&c) {
                    r = r2 as usize;
                    continue 'outer;
                }
            }
            let row_others: Vec<u32> = self.rows[r].keys().copied().filter(|&x| x != c).collect();
            for c2 in row_others {
                // column c is clear below and above the pivot, so the column
                // operation only touches row r
                let e = self.rows[r][&c2].clone();
                let q = e.div_round(&p);
                let new = &e - &(&q * &p);
                if new.is_zero() {
                    self.rows[r].remove(&c2);
                    self.cols[c2 as usize].remove(&(r as u32));
                } else {
                    self.rows[r].insert(c2, new);
                    c = c2;
                    continue 'outer;
                }
            }
            self.remove_row(r);
            return p.abs();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(m: &IntMatrix) -> Vec<i64> {
        smith_normal_form(m).invariant_factors.iter().map(|d| d.to_i64().unwrap()).collect()
    }

    #[test]
    fn basic_forms() {
        assert_eq!(factors(&IntMatrix::zeros(3, 4)), Vec::<i64>::new());
        assert_eq!(factors(&IntMatrix::identity(3)), vec![1, 1, 1]);
        assert_eq!(factors(&IntMatrix::from_dense(&[vec![2, 0], vec![0, 3]])), vec![1, 6]);
        assert_eq!(factors(&IntMatrix::from_dense(&[vec![2, 0], vec![0, 4]])), vec![2, 4]);
        assert_eq!(factors(&IntMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]])), vec![2, 6, 12]);
        assert_eq!(rank(&IntMatrix::from_dense(&[vec![2, 4], vec![1, 2]])), 1);
        assert_eq!(rank(&IntMatrix::zeros(2, 2)), 0);
        assert_eq!(rank(&IntMatrix::identity(5)), 5);
        assert_eq!(factors(&IntMatrix::zeros(0, 3)), Vec::<i64>::new());
    }

    #[test]
    fn growing_entries_stay_exact() {
        // 2^k on the diagonal overflows i64 once multiplied through lcm
        let n = 70;
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Int::from(if i % 2 == 0 { 3 } else { 1i64 << 62 }));
        }
        let s = smith_normal_form(&m);
        assert_eq!(s.rank, n);
        assert!(s.invariant_factors.windows(2).all(|w| w[1].div_rem_euclid(&w[0]).1.is_zero()));
        let last = s.invariant_factors.last().unwrap();
        assert_eq!(last.to_big(), num_bigint::BigInt::from(3u128 << 62));
    }
}
