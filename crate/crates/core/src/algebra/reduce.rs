//! Gaussian cancellation on a chain complex.
//!
//! If `d(x) = u·y + …` with `u = ±1`, the pair `(x, y)` spans an acyclic
//! summand up to homotopy; deleting both and replacing every other component
//! `d(z) ∋ c·y` by `d(z) − c·u·d(x)` leaves a homotopy-equivalent complex.
//! Repeating until no unit entry remains typically shrinks a Khovanov complex
//! by orders of magnitude.

use std::mem::take;

use super::integer::Int;
use super::matrix::IntMatrix;

#[derive(Default)]
struct Node {
    alive: bool,
    /// Differential column, sorted by target index.
    out: Vec<(u32, Int)>,
    /// Sources one level up whose column contains this node.
    inc: Vec<u32>,
}

/// Result of [`reduce_chain`]: surviving generator indices per level and the
/// differential between survivors (re-indexed densely).
#[derive(Clone, Debug)]
pub struct ReducedChain {
    pub survivors: Vec<Vec<u32>>,
    pub maps: Vec<IntMatrix>,
    pub cancelled_pairs: usize,
}

/// `maps[l]` is the differential from level `l` to level `l - 1`; `maps[0]`
/// must have zero rows.
pub fn reduce_chain(maps: &[IntMatrix]) -> ReducedChain {
    for l in 1..maps.len() {
        assert_eq!(maps[l].rows(), maps[l - 1].cols(), "level {l} shape mismatch");
    }
    let mut levels: Vec<Vec<Node>> = maps
        .iter()
        .map(|m| {
            (0..m.cols())
                .map(|c| Node { alive: true, out: m.column(c).to_vec(), inc: Vec::new() })
                .collect()
        })
        .collect();
    for l in 1..levels.len() {
        let (lower, upper) = levels.split_at_mut(l);
        for (x, node) in upper[0].iter().enumerate() {
            for (y, _) in &node.out {
                lower[l - 1][*y as usize].inc.push(x as u32);
            }
        }
    }

    let mut cancelled = 0usize;
    loop {
        let mut progress = false;
        for l in (1..levels.len()).rev() {
            for x in 0..levels[l].len() {
                if !levels[l][x].alive {
                    continue;
                }
                let pick = {
                    let lower = &levels[l - 1];
                    levels[l][x]
                        .out
                        .iter()
                        .filter(|(_, v)| v.is_unit())
                        .min_by_key(|(y, _)| (lower[*y as usize].inc.len(), *y))
                        .map(|(y, v)| (*y, v.clone()))
                };
                if let Some((y, u)) = pick {
                    cancel(&mut levels, l, x as u32, y, &u);
                    cancelled += 1;
                    progress = true;
                }
            }
        }
        if !progress {
            break;
        }
    }

    let survivors: Vec<Vec<u32>> = levels
        .iter()
        .map(|nodes| {
            nodes
                .iter()
                .enumerate()
                .filter(|(_, n)| n.alive)
                .map(|(i, _)| i as u32)
                .collect()
        })
        .collect();
    let mut maps_out = Vec::with_capacity(levels.len());
    for l in 0..levels.len() {
        let new_index = |old: u32| -> u32 {
            survivors[l - 1].binary_search(&old).expect("targets of survivors survive") as u32
        };
        let rows = if l == 0 { 0 } else { survivors[l - 1].len() };
        let columns = survivors[l]
            .iter()
            .map(|&x| {
                levels[l][x as usize].out.iter().map(|(y, v)| (new_index(*y), v.clone())).collect()
            })
            .collect();
        maps_out.push(IntMatrix::from_columns(rows, columns));
    }
    ReducedChain { survivors, maps: maps_out, cancelled_pairs: cancelled }
}

fn remove_value(v: &mut Vec<u32>, x: u32) {
    if let Some(i) = v.iter().position(|&e| e == x) {
        v.swap_remove(i);
    }
}

fn remove_entry(col: &mut Vec<(u32, Int)>, y: u32) -> Option<Int> {
    col.binary_search_by_key(&y, |(r, _)| *r).ok().map(|i| col.remove(i).1)
}

/// Cancels `x` (level `l`) against `y` (level `l-1`) where `d(x)_y = u = ±1`.
fn cancel(levels: &mut [Vec<Node>], l: usize, x: u32, y: u32, u: &Int) {
    let (below, rest) = levels.split_at_mut(l);
    let lower = &mut below[l - 1];
    let (cur, above) = rest.split_at_mut(1);
    let cur = &mut cur[0];

    let col_x = take(&mut cur[x as usize].out);
    for (w, _) in &col_x {
        remove_value(&mut lower[*w as usize].inc, x);
    }
    let rest_x: Vec<(u32, Int)> = col_x.into_iter().filter(|(w, _)| *w != y).collect();

    let inc_y = take(&mut lower[y as usize].inc);
    for z in inc_y {
        if z == x {
            continue;
        }
        let zc = &mut cur[z as usize];
        let c = remove_entry(&mut zc.out, y).expect("incidence lists are consistent");
        // d(z) -= c·u·d(x)
        let f = -(&c * u);
        let old = take(&mut zc.out);
        zc.out = merge_axpy(old, &rest_x, &f, |w, change| match change {
            Change::Added => lower[w as usize].inc.push(z),
            Change::Removed => remove_value(&mut lower[w as usize].inc, z),
        });
    }

    // x leaves the image of level l+1
    for v in take(&mut cur[x as usize].inc) {
        remove_entry(&mut above[0][v as usize].out, x);
    }
    cur[x as usize].alive = false;

    // y leaves the domain of the level l-1 differential
    let col_y = take(&mut lower[y as usize].out);
    if l >= 2 {
        for (w, _) in col_y {
            remove_value(&mut below[l - 2][w as usize].inc, y);
        }
    }
    below[l - 1][y as usize].alive = false;
}

enum Change {
    Added,
    Removed,
}

fn merge_axpy(
    a: Vec<(u32, Int)>,
    b: &[(u32, Int)],
    f: &Int,
    mut notify: impl FnMut(u32, Change),
) -> Vec<(u32, Int)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ai = a.into_iter().peekable();
    let mut bi = b.iter().peekable();
    loop {
        match (ai.peek(), bi.peek()) {
            (None, None) => break,
            (Some(_), None) => out.push(ai.next().unwrap()),
            (Some((ra, _)), Some((rb, _))) if ra < rb => out.push(ai.next().unwrap()),
            (None, Some(_)) | (Some(_), Some(_)) => {
                let (rb, vb) = bi.next().unwrap();
                let scaled = f * vb;
                if matches!(ai.peek(), Some((ra, _)) if ra == rb) {
                    let (_, va) = ai.next().unwrap();
                    let sum = &va + &scaled;
                    if sum.is_zero() {
                        notify(*rb, Change::Removed);
                    } else {
                        out.push((*rb, sum));
                    }
                } else {
                    notify(*rb, Change::Added);
                    out.push((*rb, scaled));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::smith::smith_normal_form;

    fn homology_ranks(maps: &[IntMatrix]) -> Vec<(usize, Vec<Int>)> {
        (0..maps.len())
            .map(|l| {
                let dim = maps[l].cols();
                let out_rank = smith_normal_form(&maps[l]).rank;
                let (in_rank, tors) = if l + 1 < maps.len() {
                    let s = smith_normal_form(&maps[l + 1]);
                    (s.rank, s.torsion().cloned().collect())
                } else {
                    (0, vec![])
                };
                (dim - out_rank - in_rank, tors)
            })
            .collect()
    }

    #[test]
    fn single_unit_cancels_completely() {
        let maps = vec![IntMatrix::zeros(0, 1), IntMatrix::from_dense(&[vec![1]])];
        let r = reduce_chain(&maps);
        assert_eq!(r.cancelled_pairs, 1);
        assert!(r.survivors.iter().all(Vec::is_empty));
    }

    #[test]
    fn non_unit_complex_is_a_fixpoint() {
        let maps = vec![IntMatrix::zeros(0, 2), IntMatrix::from_dense(&[vec![2, 0], vec![0, 3]])];
        let r = reduce_chain(&maps);
        assert_eq!(r.cancelled_pairs, 0);
        assert_eq!(r.maps, maps);
    }

    #[test]
    fn preserves_homology_of_a_small_chain() {
        // Z^2 -> Z^3 -> Z^2 with d∘d = 0 and a Z/2 in the middle
        let d2 = IntMatrix::from_dense(&[vec![1, 0], vec![1, 2], vec![0, 0]]);
        let d1 = IntMatrix::from_dense(&[vec![0, 0, 1], vec![0, 0, 0]]);
        assert!(d1.mul(&d2).is_zero());
        let maps = vec![IntMatrix::zeros(0, 2), d1, d2];
        let before = homology_ranks(&maps);
        let r = reduce_chain(&maps);
        assert!(r.cancelled_pairs >= 1);
        assert_eq!(homology_ranks(&r.maps), before);
    }
}
