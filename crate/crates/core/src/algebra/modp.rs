use rustc_hash::FxHashMap;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat
    let mut result = 1u128;
    let mut base = u128::from(a % p);
    let mut e = p - 2;
    let m = u128::from(p);
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    result as u64
}

/// Rank of the matrix with entries reduced mod the prime `p`.
///
/// Columns are inserted one by one into an echelon basis keyed by leading row.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> Result<usize> {
    if !is_prime(p) || p > u64::from(u32::MAX) {
        return Err(Error::Domain(format!("{p} is not a supported prime")));
    }
    let mut basis: FxHashMap<u32, Vec<(u32, u64)>> = FxHashMap::default();
    for col in m.columns() {
        let mut v: Vec<(u32, u64)> = col
            .iter()
            .map(|(r, x)| (*r, x.rem_u64(p)))
            .filter(|(_, x)| *x != 0)
            .collect();
        while let Some(&(lead, coeff)) = v.first() {
            match basis.get(&lead) {
                Some(b) => {
                    // v -= coeff * b  (b is monic at its lead)
                    v = axpy(&v, b, p - coeff, p);
                }
                None => {
                    let inv = inv_mod(coeff, p);
                    for (_, x) in &mut v {
                        *x = *x * inv % p;
                    }
                    basis.insert(lead, v);
                    break;
                }
            }
        }
    }
    Ok(basis.len())
}

// a + f*b over sorted sparse vectors
fn axpy(a: &[(u32, u64)], b: &[(u32, u64)], f: u64, p: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, b[j].1 * f % p));
            j += 1;
        } else {
            let v = (a[i].1 + b[j].1 * f) % p;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
