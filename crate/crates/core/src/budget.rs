//! Memory accounting and up-front size estimates.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::Bigrading;
use crate::diagram::{LinkDiagram, Resolver};
use crate::error::{Error, Result};

/// Rough resident cost of one generator while its slice is built and reduced:
/// basis entry, differential column with about `n/2` entries, reducer node.
pub fn bytes_per_generator(crossings: usize) -> u64 {
    96 + 24 * crossings as u64
}

/// A process-wide byte budget shared by concurrent slice builders.
#[derive(Debug)]
pub struct MemoryBudget {
    limit: u64,
    used: AtomicU64,
}

impl MemoryBudget {
    pub fn new(limit_bytes: u64) -> Self {
        Self { limit: limit_bytes, used: AtomicU64::new(0) }
    }

    pub fn from_megabytes(mb: u64) -> Self {
        Self::new(mb.saturating_mul(1 << 20))
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::SeqCst)
    }

    /// Reserves `bytes` until the returned guard drops.
    pub fn reserve(&self, bytes: u64, grading: Bigrading, generators: u64) -> Result<Reservation<'_>> {
        let mut current = self.used.load(Ordering::SeqCst);
        loop {
            let next = current.saturating_add(bytes);
            if next > self.limit {
                return Err(Error::Budget {
                    a: grading.a,
                    b: grading.b,
                    generators,
                    needed_bytes: bytes,
                    budget_bytes: self.limit,
                });
            }
            match self.used.compare_exchange(current, next, Ordering::SeqCst, Ordering::SeqCst) {
                Ok(_) => return Ok(Reservation { budget: self, bytes }),
                Err(actual) => current = actual,
            }
        }
    }
}

#[derive(Debug)]
pub struct Reservation<'a> {
    budget: &'a MemoryBudget,
    bytes: u64,
}

impl Drop for Reservation<'_> {
    fn drop(&mut self) {
        self.budget.used.fetch_sub(self.bytes, Ordering::SeqCst);
    }
}

/// Size estimate for the complex of a diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub crossings: usize,
    /// Total generator count `Σ_s 2^{|cir(s)|}`.
    pub generators: f64,
    /// Largest single chain group and its (estimated) dimension.
    pub largest: (Bigrading, f64),
    /// Largest quantum slice, which bounds peak memory.
    pub largest_slice: (i32, f64),
    /// False when obtained by sampling states.
    pub exact: bool,
}

impl Estimate {
    /// Peak bytes: the state table plus the largest slice.
    pub fn peak_bytes(&self) -> f64 {
        let table = 2f64.powi(self.crossings as i32) * (2.0 * self.crossings as f64 + 8.0);
        table + self.largest_slice.1 * bytes_per_generator(self.crossings) as f64
    }

    pub fn check(&self, budget: &MemoryBudget) -> Result<()> {
        let peak = self.peak_bytes();
        if peak > budget.limit() as f64 || self.crossings > crate::complex::MAX_ENUMERATED_CROSSINGS {
            return Err(Error::Budget {
                a: self.largest.0.a,
                b: self.largest.0.b,
                generators: self.largest.1.min(u64::MAX as f64) as u64,
                needed_bytes: peak.min(u64::MAX as f64) as u64,
                budget_bytes: budget.limit(),
            });
        }
        Ok(())
    }
}

/// Number of states enumerated exactly before switching to sampling.
pub const EXACT_ESTIMATE_CROSSINGS: usize = 20;
pub const ESTIMATE_SAMPLES: usize = 1024;

pub fn estimate(diagram: &LinkDiagram) -> Estimate {
    let n = diagram.crossing_count();
    let mut resolver = Resolver::new(diagram);
    let mut scratch = vec![0u8; diagram.arc_count()];
    let mut buckets: BTreeMap<Bigrading, f64> = BTreeMap::new();
    let mut add_state = |bits: u64, weight: f64, buckets: &mut BTreeMap<Bigrading, f64>| {
        let m = resolver.resolve_into(bits, &mut scratch);
        let sigma = n as i32 - 2 * bits.count_ones() as i32;
        let mut binom = 1.0f64;
        for k in 0..=m {
            let tau = 2 * k as i32 - m as i32;
            *buckets.entry(Bigrading::new(sigma, sigma + 2 * tau)).or_insert(0.0) += binom * weight;
            binom = binom * (m - k) as f64 / (k + 1) as f64;
        }
    };
    let exact = n <= EXACT_ESTIMATE_CROSSINGS;
    if exact {
        for bits in 0..1u64 << n {
            add_state(bits, 1.0, &mut buckets);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6b68);
        let weight = 2f64.powi(n as i32) / ESTIMATE_SAMPLES as f64;
        let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        for _ in 0..ESTIMATE_SAMPLES {
            let bits = rng.gen::<u64>() & mask;
            add_state(bits, weight, &mut buckets);
        }
    }
    let generators = buckets.values().sum();
    let largest = buckets
        .iter()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .map(|(g, v)| (*g, *v))
        .unwrap_or((Bigrading::new(0, 0), 0.0));
    let mut slices: BTreeMap<i32, f64> = BTreeMap::new();
    for (g, v) in &buckets {
        *slices.entry(g.b).or_insert(0.0) += v;
    }
    let largest_slice = slices
        .iter()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .map(|(b, v)| (*b, *v))
        .unwrap_or((0, 0.0));
    Estimate { crossings: n, generators, largest, largest_slice, exact }
}
