//! Brute-force reference implementation shared by the integration tests.
//!
//! Nothing here calls into the library's complex, algebra or polynomial
//! code: the closure, the smoothing, circle tracing, the differential and the
//! Smith form are all rebuilt from scratch in the most literal way.

#![allow(dead_code)]

use std::collections::BTreeMap;

pub type Table = BTreeMap<(i32, i32), (usize, Vec<u64>)>;

/// A crossing of a braid closure: the four arcs around it and its sign.
#[derive(Clone, Copy, Debug)]
pub struct Cross {
    pub bottom_left: usize,
    pub bottom_right: usize,
    pub top_left: usize,
    pub top_right: usize,
    pub positive: bool,
}

pub struct Pd {
    pub arcs: usize,
    pub crossings: Vec<Cross>,
}

/// Closure of a braid word; letters in order, arcs identified through the top.
pub fn closure(strands: usize, letters: &[i32]) -> Pd {
    // segment ids: position p before any crossing is p
    let mut column: Vec<usize> = (0..strands).collect();
    let mut fresh = strands;
    let mut raw = Vec::new();
    for &k in letters {
        let i = k.unsigned_abs() as usize - 1;
        let c = Cross {
            bottom_left: column[i],
            bottom_right: column[i + 1],
            top_left: fresh,
            top_right: fresh + 1,
            positive: k > 0,
        };
        fresh += 2;
        column[i] = c.top_left;
        column[i + 1] = c.top_right;
        raw.push(c);
    }
    // the top segment at position p is the bottom segment p
    let mut alias: Vec<usize> = (0..fresh).collect();
    for (p, &seg) in column.iter().enumerate() {
        alias[seg] = p;
    }
    let mut dense = BTreeMap::new();
    for seg in 0..fresh {
        let target = alias[seg];
        let next = dense.len();
        dense.entry(target).or_insert(next);
    }
    let id = |seg: usize| dense[&alias[seg]];
    let crossings = raw
        .iter()
        .map(|c| Cross {
            bottom_left: id(c.bottom_left),
            bottom_right: id(c.bottom_right),
            top_left: id(c.top_left),
            top_right: id(c.top_right),
            positive: c.positive,
        })
        .collect();
    Pd { arcs: dense.len(), crossings }
}

/// Arc pairs joined at one crossing. The A-smoothing is the vertical one at a
/// positive crossing and the horizontal one at a negative crossing.
fn joins(c: &Cross, b_marker: bool) -> [(usize, usize); 2] {
    let vertical = [(c.bottom_left, c.top_left), (c.bottom_right, c.top_right)];
    let horizontal = [(c.bottom_left, c.bottom_right), (c.top_left, c.top_right)];
    if c.positive != b_marker {
        vertical
    } else {
        horizontal
    }
}

/// Circles of a state as sorted arc lists, ordered by least arc; found by
/// walking the graph whose edges are the smoothing joins.
pub fn circles(pd: &Pd, state: u64) -> Vec<Vec<usize>> {
    let mut adjacent = vec![Vec::new(); pd.arcs];
    for (i, c) in pd.crossings.iter().enumerate() {
        for (p, q) in joins(c, state >> i & 1 == 1) {
            adjacent[p].push(q);
            adjacent[q].push(p);
        }
    }
    let mut seen = vec![false; pd.arcs];
    let mut out = Vec::new();
    for start in 0..pd.arcs {
        if seen[start] {
            continue;
        }
        let mut circle = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(a) = stack.pop() {
            circle.push(a);
            for &b in &adjacent[a] {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        circle.sort_unstable();
        out.push(circle);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Gen {
    state: u64,
    labels: Vec<i32>,
}

/// Homology in framed `(a, b)` gradings, straight from the definitions.
pub fn framed_homology(pd: &Pd) -> Table {
    let n = pd.crossings.len();
    assert!(n <= 16, "oracle is for small diagrams");
    let all_circles: Vec<Vec<Vec<usize>>> = (0..1u64 << n).map(|s| circles(pd, s)).collect();
    let mut groups: BTreeMap<(i32, i32), Vec<Gen>> = BTreeMap::new();
    for s in 0..1u64 << n {
        let m = all_circles[s as usize].len();
        let sigma = n as i32 - 2 * s.count_ones() as i32;
        for mask in 0..1u64 << m {
            let labels: Vec<i32> = (0..m).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
            let tau: i32 = labels.iter().sum();
            groups.entry((sigma, sigma + 2 * tau)).or_default().push(Gen { state: s, labels });
        }
    }

    let incidence = |x: &Gen, y: &Gen| -> i64 {
        let flipped = x.state ^ y.state;
        if flipped.count_ones() != 1 || y.state & flipped == 0 {
            return 0;
        }
        let c = flipped.trailing_zeros() as usize;
        let tau_x: i32 = x.labels.iter().sum();
        let tau_y: i32 = y.labels.iter().sum();
        if tau_y != tau_x + 1 {
            return 0;
        }
        let cx = &all_circles[x.state as usize];
        let cy = &all_circles[y.state as usize];
        let cross = &pd.crossings[c];
        let touched = [cross.bottom_left, cross.bottom_right, cross.top_left, cross.top_right];
        for (i, circle) in cx.iter().enumerate() {
            if circle.iter().any(|a| touched.contains(a)) {
                continue;
            }
            let j = cy.iter().position(|d| d == circle).expect("untouched circle survives");
            if x.labels[i] != y.labels[j] {
                return 0;
            }
        }
        let omega = (c + 1..n).filter(|&k| x.state >> k & 1 == 1).count();
        if omega % 2 == 0 {
            1
        } else {
            -1
        }
    };

    // dense differential out of each group
    let mut outgoing: BTreeMap<(i32, i32), Vec<Vec<i128>>> = BTreeMap::new();
    for (&(a, b), gens) in &groups {
        let Some(targets) = groups.get(&(a - 2, b)) else { continue };
        let matrix: Vec<Vec<i128>> = targets
            .iter()
            .map(|y| gens.iter().map(|x| i128::from(incidence(x, y))).collect())
            .collect();
        outgoing.insert((a, b), matrix);
    }

    let mut table = Table::new();
    for (&(a, b), gens) in &groups {
        let out_rank = outgoing.get(&(a, b)).map_or(0, |m| smith_diagonal(m).len());
        let (in_rank, torsion) = match outgoing.get(&(a + 2, b)) {
            Some(m) => {
                let d = smith_diagonal(m);
                let t = d.iter().filter(|&&x| x > 1).map(|&x| x as u64).collect();
                (d.len(), t)
            }
            None => (0, Vec::new()),
        };
        let free = gens.len() - out_rank - in_rank;
        if free > 0 || !torsion.is_empty() {
            table.insert((a, b), (free, torsion));
        }
    }
    table
}

pub fn to_classical(framed: &Table, writhe: i64) -> Table {
    let w = writhe as i32;
    framed
        .iter()
        .map(|(&(a, b), g)| {
            assert_eq!((w - a).rem_euclid(2), 0);
            assert_eq!((3 * w - b).rem_euclid(2), 0);
            (((w - a) / 2, (3 * w - b) / 2), g.clone())
        })
        .collect()
}

pub fn classical_homology(strands: usize, letters: &[i32]) -> Table {
    let writhe = letters.iter().map(|k| i64::from(k.signum())).sum();
    to_classical(&framed_homology(&closure(strands, letters)), writhe)
}

/// Nonzero diagonal of the Smith form (positive, each dividing the next),
/// by textbook elementary row and column operations.
pub fn smith_diagonal(m: &[Vec<i128>]) -> Vec<i128> {
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] = a[i][j].checked_sub(q * a[t][j]).expect("oracle overflow");
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for i in t..rows {
                        a[i][j] = a[i][j].checked_sub(q * a[i][t]).expect("oracle overflow");
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if !dirty {
                // pivot must divide the rest of the block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            a[t][j] += a[i][j];
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/column t onto the pivot
            let mut best = (t, t);
            for i in t..rows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Determinant by cofactor-free fraction-free elimination (Bareiss).
pub fn determinant(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| a[r][k] != 0) else { return 0 };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..1u32 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Invariant factors as ratios of determinantal divisors `D_k / D_{k-1}`,
/// `D_k` being the gcd of all `k × k` minors.
pub fn determinantal_invariants(m: &[Vec<i128>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut previous = 1i128;
    for k in 1..=rows.min(cols) {
        let mut d = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                d = gcd(d, determinant(&minor));
            }
        }
        if d == 0 {
            break;
        }
        out.push(d / previous);
        previous = d;
    }
    out
}

/// Unreduced bracket `Σ_s A^{σ(s)} (−A² − A⁻²)^{|circles|}` as exponent → coefficient.
pub fn bracket(pd: &Pd) -> BTreeMap<i32, i64> {
    let n = pd.crossings.len();
    let mut out: BTreeMap<i32, i64> = BTreeMap::new();
    for s in 0..1u64 << n {
        let sigma = n as i32 - 2 * s.count_ones() as i32;
        let m = circles(pd, s).len();
        // expand (−A² − A⁻²)^m by the binomial theorem
        let mut binom = 1i64;
        for k in 0..=m {
            let e = sigma + 2 * (m as i32 - k as i32) - 2 * k as i32;
            let sign = if m % 2 == 0 { 1 } else { -1 };
            *out.entry(e).or_insert(0) += sign * binom;
            binom = binom * (m - k) as i64 / (k + 1) as i64;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Converts the library's table into the oracle's shape.
pub fn from_library(t: &kh_core::HomologyTable) -> Table {
    t.groups.iter().map(|(k, g)| (*k, (g.free_rank, g.torsion.clone()))).collect()
}

/// Random braid words from a fixed seed.
pub fn random_corpus(seed: u64, count: usize, max_strands: usize, max_len: usize) -> Vec<(usize, Vec<i32>)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let strands = rng.gen_range(2..=max_strands);
            let len = rng.gen_range(1..=max_len);
            let letters = (0..len)
                .map(|_| {
                    let k = rng.gen_range(1..strands as i32);
                    if rng.gen_bool(0.5) {
                        k
                    } else {
                        -k
                    }
                })
                .collect();
            (strands, letters)
        })
        .collect()
}
