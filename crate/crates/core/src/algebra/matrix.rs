use serde::{Deserialize, Serialize};

use super::integer::Int;

/// Sparse integer matrix stored by columns; each column is sorted by row and
/// holds no zero entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(u32, Int)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.columns[i].push((i as u32, Int::ONE));
        }
        m
    }

    /// Builds from `(row, col, value)` triples; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Int)>,
    ) -> Self {
        let mut columns: Vec<Vec<(u32, Int)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            columns[c].push((r as u32, v));
        }
        for col in &mut columns {
            normalize_column(col);
        }
        Self { rows, cols, columns }
    }

    pub fn from_columns(rows: usize, mut columns: Vec<Vec<(u32, Int)>>) -> Self {
        for col in &mut columns {
            debug_assert!(col.iter().all(|(r, _)| (*r as usize) < rows));
            normalize_column(col);
        }
        Self { rows, cols: columns.len(), columns }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        Self::from_triplets(
            nrows,
            ncols,
            rows.iter().enumerate().flat_map(|(r, row)| {
                row.iter().enumerate().map(move |(c, &v)| (r, c, Int::from(v)))
            }),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(u32, Int)] {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[Vec<(u32, Int)>] {
        &self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> Int {
        let col = &self.columns[c];
        match col.binary_search_by_key(&(r as u32), |(row, _)| *row) {
            Ok(i) => col[i].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Int) {
        assert!(r < self.rows && c < self.cols);
        let col = &mut self.columns[c];
        match col.binary_search_by_key(&(r as u32), |(row, _)| *row) {
            Ok(i) if v.is_zero() => {
                col.remove(i);
            }
            Ok(i) => col[i].1 = v,
            Err(_) if v.is_zero() => {}
            Err(i) => col.insert(i, (r as u32, v)),
        }
    }

    /// Nonzero entries as `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Int)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r as usize, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Int>> {
        let mut out = vec![vec![Int::ZERO; self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.cols,
            self.rows,
            self.triplets().map(|(r, c, v)| (c, r, v.clone())),
        )
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut columns = Vec::with_capacity(rhs.cols);
        let mut acc: rustc_hash::FxHashMap<u32, Int> = Default::default();
        for col in &rhs.columns {
            acc.clear();
            for (k, b) in col {
                for (i, a) in &self.columns[*k as usize] {
                    let e = acc.entry(*i).or_insert(Int::ZERO);
                    *e = &*e + &(a * b);
                }
            }
            let mut out: Vec<(u32, Int)> = acc.drain().filter(|(_, v)| !v.is_zero()).collect();
            out.sort_unstable_by_key(|(r, _)| *r);
            columns.push(out);
        }
        IntMatrix { rows: self.rows, cols: rhs.cols, columns }
    }
}

fn normalize_column(col: &mut Vec<(u32, Int)>) {
    col.sort_by_key(|(r, _)| *r);
    let mut out: Vec<(u32, Int)> = Vec::with_capacity(col.len());
    for (r, v) in col.drain(..) {
        match out.last_mut() {
            Some((lr, lv)) if *lr == r => *lv = &*lv + &v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    *col = out;
}
