//! Enhanced Kauffman states and the bigraded chain complex they generate.
//!
//! An enhanced state labels every circle of a Kauffman state with ±1. It sits
//! in bigrading `(a, b) = (σ, σ + 2τ)`, where `τ` is the label sum. The
//! differential `∂_{a,b}: C_{a,b} → C_{a-2,b}` sends `t` to every adjacent
//! `t'`: the states differ at one crossing (`A` in `t`, `B` in `t'`), labels
//! agree on every circle that the change leaves untouched, and `τ' = τ + 1`.
//! The coefficient is `(-1)^ω`, `ω` counting `B` markers of `t` after the
//! changed crossing.
//!
//! Because `b` is preserved, each quantum grading `b` is its own complex
//! (a *slice*); slices are built and reduced independently.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{reduce_chain, Int, IntMatrix};
use crate::budget::{bytes_per_generator, MemoryBudget};
use crate::diagram::{KauffmanState, LinkDiagram, Marker, Resolver};
use crate::error::{Error, Result};
use crate::par;

/// Largest crossing count whose full state table is built in memory.
pub const MAX_ENUMERATED_CROSSINGS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bigrading {
    pub a: i32,
    pub b: i32,
}

impl Bigrading {
    pub fn new(a: i32, b: i32) -> Self {
        Self { a, b }
    }
}

impl fmt::Display for Bigrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// A Kauffman state with a ±1 label per circle; bit `k` of the mask set means
/// circle `k` carries `+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnhancedState {
    state: KauffmanState,
    labels: u64,
    circles: u8,
}

impl EnhancedState {
    pub fn new(diagram: &LinkDiagram, state: KauffmanState, labels: &[i8]) -> Result<Self> {
        let count = diagram.resolve(&state)?.count();
        if labels.len() != count {
            return Err(Error::Domain(format!(
                "{} labels for {count} circles",
                labels.len()
            )));
        }
        let mut mask = 0u64;
        for (k, &l) in labels.iter().enumerate() {
            match l {
                1 => mask |= 1 << k,
                -1 => {}
                _ => return Err(Error::Domain(format!("label {l} is not ±1"))),
            }
        }
        Self::from_mask(state, count, mask)
    }

    pub fn from_mask(state: KauffmanState, circles: usize, labels: u64) -> Result<Self> {
        if circles > 64 {
            return Err(Error::TooLarge(circles));
        }
        if circles < 64 && labels >> circles != 0 {
            return Err(Error::Domain("label mask exceeds circle count".into()));
        }
        Ok(Self { state, labels, circles: circles as u8 })
    }

    pub fn state(&self) -> KauffmanState {
        self.state
    }

    pub fn circle_count(&self) -> usize {
        self.circles as usize
    }

    pub fn label_mask(&self) -> u64 {
        self.labels
    }

    pub fn label(&self, circle: usize) -> i8 {
        if self.labels >> circle & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn tau(&self) -> i32 {
        2 * self.labels.count_ones() as i32 - self.circles as i32
    }

    pub fn grading(&self) -> Bigrading {
        let sigma = self.state.sigma();
        Bigrading::new(sigma, sigma + 2 * self.tau())
    }
}

/// Incidence number `(t : t')` straight from the definition.
pub fn incidence(diagram: &LinkDiagram, t: &EnhancedState, target: &EnhancedState) -> Result<i8> {
    let (g, g2) = (t.grading(), target.grading());
    if g.a != g2.a + 2 || g.b != g2.b {
        return Ok(0);
    }
    let diff = t.state().bits() ^ target.state().bits();
    if diff.count_ones() != 1 {
        return Ok(0);
    }
    let c = diff.trailing_zeros() as usize;
    if t.state().marker(c) != Marker::A {
        return Ok(0);
    }
    let src = diagram.resolve(&t.state())?;
    let dst = diagram.resolve(&target.state())?;
    if src.count() != t.circle_count() || dst.count() != target.circle_count() {
        return Err(Error::Domain("labels do not match the diagram".into()));
    }
    let dst_circles = dst.circles();
    for (k, arcs) in src.circles().iter().enumerate() {
        let image = dst.circle_of(arcs[0]);
        if dst_circles[image] == *arcs && t.label(k) != target.label(image) {
            return Ok(0);
        }
    }
    let omega = t.state().b_after(c);
    Ok(if omega.is_multiple_of(2) { 1 } else { -1 })
}

/// One chain group `C_{a,b}` with its outgoing differential to `C_{a-2,b}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainGroup {
    pub basis: Vec<EnhancedState>,
    /// Columns indexed by `basis`, rows by the basis of `C_{a-2,b}`.
    pub differential: IntMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BigradedComplex {
    crossings: usize,
    writhe: i64,
    groups: BTreeMap<Bigrading, ChainGroup>,
}

impl BigradedComplex {
    pub fn new(crossings: usize, writhe: i64, groups: BTreeMap<Bigrading, ChainGroup>) -> Self {
        Self { crossings, writhe, groups }
    }

    pub fn crossings(&self) -> usize {
        self.crossings
    }

    pub fn writhe(&self) -> i64 {
        self.writhe
    }

    pub fn groups(&self) -> &BTreeMap<Bigrading, ChainGroup> {
        &self.groups
    }

    pub fn groups_mut(&mut self) -> &mut BTreeMap<Bigrading, ChainGroup> {
        &mut self.groups
    }

    pub fn group(&self, g: Bigrading) -> Option<&ChainGroup> {
        self.groups.get(&g)
    }

    pub fn dim(&self, g: Bigrading) -> usize {
        self.groups.get(&g).map_or(0, |c| c.basis.len())
    }

    pub fn total_dim(&self) -> usize {
        self.groups.values().map(|c| c.basis.len()).sum()
    }

    pub fn quantum_gradings(&self) -> Vec<i32> {
        let mut bs: Vec<i32> = self.groups.keys().map(|g| g.b).collect();
        bs.sort_unstable();
        bs.dedup();
        bs
    }

    /// Chain groups of one quantum grading as consecutive levels
    /// `a = a_min, a_min + 2, …`, ready for [`reduce_chain`].
    fn slice_maps(&self, b: i32) -> (i32, Vec<IntMatrix>) {
        let a_min = -(self.crossings as i32);
        let levels = self.crossings + 1;
        let mut maps = Vec::with_capacity(levels);
        for l in 0..levels {
            let a = a_min + 2 * l as i32;
            let rows = if l == 0 { 0 } else { self.dim(Bigrading::new(a - 2, b)) };
            match self.groups.get(&Bigrading::new(a, b)) {
                Some(g) => maps.push(g.differential.clone()),
                None => maps.push(IntMatrix::zeros(rows, 0)),
            }
        }
        (a_min, maps)
    }

    /// Merges another complex over the same diagram (distinct bigradings).
    pub fn absorb(&mut self, other: BigradedComplex) {
        self.groups.extend(other.groups);
    }

    /// JSON debug dump: per bigrading the dimension and nonzero `(row, col, value)` triples.
    pub fn to_debug_json(&self) -> serde_json::Value {
        let groups: Vec<serde_json::Value> = self
            .groups
            .iter()
            .map(|(g, c)| {
                let entries: Vec<(usize, usize, Int)> =
                    c.differential.triplets().map(|(r, col, v)| (r, col, v.clone())).collect();
                serde_json::json!({ "a": g.a, "b": g.b, "dim": c.basis.len(), "entries": entries })
            })
            .collect();
        serde_json::json!({ "crossings": self.crossings, "writhe": self.writhe, "groups": groups })
    }
}

/// A nonzero entry of some `∂_{a-2,b} ∘ ∂_{a,b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSquaredWitness {
    pub grading: Bigrading,
    pub row: usize,
    pub col: usize,
    pub value: Int,
}

impl fmt::Display for DSquaredWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d∘d ≠ 0 from {}: entry ({}, {}) = {}",
            self.grading, self.row, self.col, self.value
        )
    }
}

/// Checks that every composite of consecutive differentials vanishes.
pub fn verify_d_squared(c: &BigradedComplex) -> std::result::Result<(), DSquaredWitness> {
    for (g, group) in &c.groups {
        let Some(next) = c.groups.get(&Bigrading::new(g.a - 2, g.b)) else {
            continue;
        };
        let composite = next.differential.mul(&group.differential);
        let first = composite.triplets().next().map(|(row, col, value)| (row, col, value.clone()));
        if let Some((row, col, value)) = first {
            return Err(DSquaredWitness { grading: *g, row, col, value });
        }
    }
    Ok(())
}

/// Every enhanced state, bucketed by bigrading in canonical order.
pub fn enumerate_generators(diagram: &LinkDiagram) -> Result<BTreeMap<Bigrading, Vec<EnhancedState>>> {
    let builder = ComplexBuilder::new(diagram)?;
    let mut out = BTreeMap::new();
    for b in builder.quantum_gradings() {
        for (g, basis) in builder.slice_bases(b)? {
            out.insert(g, basis);
        }
    }
    Ok(out)
}

/// The whole bigraded complex with its differentials.
pub fn build_differentials(diagram: &LinkDiagram) -> Result<BigradedComplex> {
    ComplexBuilder::new(diagram)?.full()
}

/// Cancels unit entries slice by slice; homology is unchanged in every bigrading.
pub fn reduce_complex(c: &BigradedComplex) -> BigradedComplex {
    let mut groups = BTreeMap::new();
    for b in c.quantum_gradings() {
        let (a_min, maps) = c.slice_maps(b);
        let reduced = reduce_chain(&maps);
        for (l, (survivors, map)) in reduced.survivors.iter().zip(reduced.maps).enumerate() {
            if survivors.is_empty() {
                continue;
            }
            let g = Bigrading::new(a_min + 2 * l as i32, b);
            let basis_in = &c.groups[&g].basis;
            let basis = survivors.iter().map(|&i| basis_in[i as usize]).collect();
            groups.insert(g, ChainGroup { basis, differential: map });
        }
    }
    BigradedComplex { crossings: c.crossings, writhe: c.writhe, groups }
}

/// Circle data of every Kauffman state, computed once per diagram.
struct StateTable {
    arcs: usize,
    circle_of: Vec<u8>,
    counts: Vec<u8>,
}

impl StateTable {
    fn build(diagram: &LinkDiagram) -> Result<Self> {
        let n = diagram.crossing_count();
        if n > MAX_ENUMERATED_CROSSINGS {
            return Err(Error::TooLarge(n));
        }
        let arcs = diagram.arc_count();
        let total = 1usize << n;
        let chunk = 1usize << n.min(12);
        let starts: Vec<usize> = (0..total).step_by(chunk).collect();
        let pieces = par::map_collect(starts, |start| {
            let mut resolver = Resolver::new(diagram);
            let end = (start + chunk).min(total);
            let mut circle_of = vec![0u8; (end - start) * arcs];
            let mut counts = vec![0u8; end - start];
            for s in start..end {
                let i = s - start;
                let k = resolver.resolve_into(s as u64, &mut circle_of[i * arcs..(i + 1) * arcs]);
                counts[i] = k as u8;
            }
            (circle_of, counts)
        });
        let mut circle_of = Vec::with_capacity(total * arcs);
        let mut counts = Vec::with_capacity(total);
        for (c, k) in pieces {
            circle_of.extend_from_slice(&c);
            counts.extend_from_slice(&k);
        }
        if counts.iter().any(|&k| k > 64) {
            return Err(Error::TooLarge(n));
        }
        Ok(Self { arcs, circle_of, counts })
    }

    fn circles(&self, s: usize) -> &[u8] {
        &self.circle_of[s * self.arcs..(s + 1) * self.arcs]
    }

    fn count(&self, s: usize) -> usize {
        self.counts[s] as usize
    }
}

/// What happens to the circles when one `A` marker becomes `B`.
enum Surgery {
    Merge { first: u8, second: u8, into: u8 },
    Split { from: u8, first: u8, second: u8 },
}

struct Edge {
    surgery: Surgery,
    /// Image of each untouched source circle (`u8::MAX` for touched ones).
    image: Vec<u8>,
}

/// Builds chain groups and differentials from a precomputed state table.
pub struct ComplexBuilder<'d> {
    diagram: &'d LinkDiagram,
    table: StateTable,
    binom: Vec<Vec<u64>>,
    budget: Option<&'d MemoryBudget>,
}

impl<'d> ComplexBuilder<'d> {
    pub fn new(diagram: &'d LinkDiagram) -> Result<Self> {
        Ok(Self { diagram, table: StateTable::build(diagram)?, binom: binomials(65), budget: None })
    }

    pub fn with_budget(mut self, budget: &'d MemoryBudget) -> Self {
        self.budget = Some(budget);
        self
    }

    fn n(&self) -> usize {
        self.diagram.crossing_count()
    }

    /// Dimension of every nonzero chain group.
    pub fn bucket_sizes(&self) -> BTreeMap<Bigrading, u64> {
        let n = self.n();
        let mut sizes = BTreeMap::new();
        for s in 0..1usize << n {
            let sigma = n as i32 - 2 * s.count_ones() as i32;
            let m = self.table.count(s);
            for k in 0..=m {
                let tau = 2 * k as i32 - m as i32;
                *sizes.entry(Bigrading::new(sigma, sigma + 2 * tau)).or_insert(0) += self.binom[m][k];
            }
        }
        sizes
    }

    pub fn quantum_gradings(&self) -> Vec<i32> {
        let mut bs: Vec<i32> = self.bucket_sizes().keys().map(|g| g.b).collect();
        bs.sort_unstable();
        bs.dedup();
        bs
    }

    /// Number of `+1` labels a state needs to land in quantum grading `b`.
    fn plus_count(&self, s: usize, b: i32) -> Option<usize> {
        let sigma = self.n() as i32 - 2 * s.count_ones() as i32;
        let m = self.table.count(s) as i32;
        let twice_tau = b - sigma;
        if twice_tau % 2 != 0 {
            return None;
        }
        let tau = twice_tau / 2;
        if (tau + m) % 2 != 0 || tau.abs() > m {
            return None;
        }
        Some(((tau + m) / 2) as usize)
    }

    /// Offsets of each state's block inside its chain group, for slice `b`.
    fn slice_layout(&self, b: i32) -> (Vec<u32>, BTreeMap<i32, u64>) {
        let n = self.n();
        let mut offsets = vec![u32::MAX; 1 << n];
        let mut fill: BTreeMap<i32, u64> = BTreeMap::new();
        for s in 0..1usize << n {
            if let Some(k) = self.plus_count(s, b) {
                let sigma = n as i32 - 2 * s.count_ones() as i32;
                let f = fill.entry(sigma).or_insert(0);
                offsets[s] = *f as u32;
                *f += self.binom[self.table.count(s)][k];
            }
        }
        (offsets, fill)
    }

    fn check_budget(&self, b: i32, fill: &BTreeMap<i32, u64>) -> Result<Option<crate::budget::Reservation<'d>>> {
        let Some(budget) = self.budget else {
            return Ok(None);
        };
        let total: u64 = fill.values().sum();
        let (a, largest) = fill.iter().max_by_key(|(_, v)| **v).map(|(a, v)| (*a, *v)).unwrap_or((0, 0));
        let per = bytes_per_generator(self.n());
        budget
            .reserve(total.saturating_mul(per), Bigrading::new(a, b), largest)
            .map(Some)
    }

    fn slice_bases(&self, b: i32) -> Result<BTreeMap<Bigrading, Vec<EnhancedState>>> {
        let n = self.n();
        let mut out: BTreeMap<Bigrading, Vec<EnhancedState>> = BTreeMap::new();
        for s in 0..1usize << n {
            let Some(k) = self.plus_count(s, b) else { continue };
            let state = KauffmanState::new(s as u64, n)?;
            let m = self.table.count(s);
            let bucket = out.entry(Bigrading::new(state.sigma(), b)).or_default();
            for mask in masks_with_popcount(m, k) {
                bucket.push(EnhancedState::from_mask(state, m, mask)?);
            }
        }
        Ok(out)
    }

    fn edge(&self, s: usize, c: usize) -> Edge {
        let t = s | 1 << c;
        let crossing = &self.diagram.crossings()[c];
        let src = self.table.circles(s);
        let dst = self.table.circles(t);
        let [(p, _), (q, _)] = crossing.smoothed_arcs(Marker::A);
        let [(r, _), (u, _)] = crossing.smoothed_arcs(Marker::B);
        let (sa, sb) = (src[p as usize], src[q as usize]);
        let (da, db) = (dst[r as usize], dst[u as usize]);
        let surgery = if sa == sb {
            debug_assert_ne!(da, db);
            Surgery::Split { from: sa, first: da.min(db), second: da.max(db) }
        } else {
            debug_assert_eq!(da, db);
            Surgery::Merge { first: sa.min(sb), second: sa.max(sb), into: da }
        };
        let m = self.table.count(s);
        let mut image = vec![u8::MAX; m];
        for (arc, &k) in src.iter().enumerate() {
            let k = k as usize;
            if image[k] == u8::MAX && k != sa as usize && k != sb as usize {
                image[k] = dst[arc];
            }
        }
        Edge { surgery, image }
    }

    fn colex_rank(&self, mask: u64) -> u64 {
        let mut rank = 0;
        let mut bits = mask;
        let mut i = 1;
        while bits != 0 {
            let p = bits.trailing_zeros() as usize;
            rank += self.binom[p][i];
            i += 1;
            bits &= bits - 1;
        }
        rank
    }

    /// The complex of one quantum grading.
    pub fn slice(&self, b: i32) -> Result<BigradedComplex> {
        let n = self.n();
        let (offsets, fill) = self.slice_layout(b);
        let _reservation = self.check_budget(b, &fill)?;
        let bases = self.slice_bases(b)?;

        let mut columns: BTreeMap<i32, Vec<Vec<(u32, Int)>>> = BTreeMap::new();
        for s in 0..1usize << n {
            let Some(k) = self.plus_count(s, b) else { continue };
            let sigma = n as i32 - 2 * s.count_ones() as i32;
            let m = self.table.count(s);
            let edges: Vec<(usize, Edge, i64)> = (0..n)
                .filter(|c| s >> c & 1 == 0)
                .map(|c| {
                    let omega = (s >> (c + 1)).count_ones();
                    (c, self.edge(s, c), if omega % 2 == 0 { 1 } else { -1 })
                })
                .collect();
            let cols = columns.entry(sigma).or_default();
            for mask in masks_with_popcount(m, k) {
                let mut col: Vec<(u32, Int)> = Vec::new();
                for (c, edge, sign) in &edges {
                    let t = s | 1 << c;
                    let base = offsets[t];
                    let mut carried = 0u64;
                    for (src, &img) in edge.image.iter().enumerate() {
                        if img != u8::MAX && mask >> src & 1 == 1 {
                            carried |= 1 << img;
                        }
                    }
                    let bit = |k: u8| mask >> k & 1 == 1;
                    let mut push = |target: u64| {
                        debug_assert_ne!(base, u32::MAX);
                        let idx = base as u64 + self.colex_rank(target);
                        col.push((idx as u32, Int::from(*sign)));
                    };
                    match edge.surgery {
                        Surgery::Merge { first, second, into } => match (bit(first), bit(second)) {
                            (false, false) => push(carried),
                            (true, false) | (false, true) => push(carried | 1 << into),
                            (true, true) => {}
                        },
                        Surgery::Split { from, first, second } => {
                            if bit(from) {
                                push(carried | 1 << first | 1 << second);
                            } else {
                                push(carried | 1 << first);
                                push(carried | 1 << second);
                            }
                        }
                    }
                }
                cols.push(col);
            }
        }

        let mut groups = BTreeMap::new();
        for (g, basis) in bases {
            let cols = columns.remove(&g.a).unwrap_or_default();
            debug_assert_eq!(cols.len(), basis.len());
            let rows = fill.get(&(g.a - 2)).copied().unwrap_or(0) as usize;
            groups.insert(g, ChainGroup { basis, differential: IntMatrix::from_columns(rows, cols) });
        }
        Ok(BigradedComplex { crossings: n, writhe: self.diagram.writhe(), groups })
    }

    pub fn full(&self) -> Result<BigradedComplex> {
        let mut out = BigradedComplex {
            crossings: self.n(),
            writhe: self.diagram.writhe(),
            groups: BTreeMap::new(),
        };
        for b in self.quantum_gradings() {
            out.absorb(self.slice(b)?);
        }
        Ok(out)
    }
}

fn binomials(n: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; n + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for j in 1..=i {
            t[i][j] = t[i - 1][j - 1].saturating_add(t[i - 1][j]);
        }
    }
    t
}

/// All `m`-bit masks with `k` bits set, ascending.
fn masks_with_popcount(m: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit: u128 = 1u128 << m;
    let mut next: Option<u128> = if k > m { None } else { Some((1u128 << k) - 1) };
    std::iter::from_fn(move || {
        let cur = next?;
        if cur >= limit {
            return None;
        }
        // Gosper's hack
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some((((r ^ cur) >> 2) / c) | r)
        };
        Some(cur as u64)
    })
}
