//! Homology groups `H_{a,b} = ker ∂_{a,b} / im ∂_{a+2,b}` and their classical
//! regrading `H^{i,j} = H_{w-2i, 3w-2j}`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::algebra::{rank_mod_p, reduce_chain, smith_normal_form, Int, IntMatrix, SmithForm};
use crate::braid::BraidWord;
use crate::budget::MemoryBudget;
use crate::complex::{verify_d_squared, BigradedComplex, Bigrading, ComplexBuilder};
use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingMode {
    Framed,
    Classical,
}

impl fmt::Display for GradingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GradingMode::Framed => "framed",
            GradingMode::Classical => "classical",
        })
    }
}

/// `Z^free_rank ⊕ Z/t_1 ⊕ … ⊕ Z/t_k` with `t_1 | t_2 | …`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Invariant factors divisible by `p`.
    pub fn p_torsion_count(&self, p: u64) -> usize {
        self.torsion.iter().filter(|t| *t % p == 0).count()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        // group equal factors: Z_2^3
        let mut i = 0;
        while i < self.torsion.len() {
            let t = self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|&&x| x == t).count();
            parts.push(if run == 1 { format!("Z_{t}") } else { format!("Z_{t}^{run}") });
            i += run;
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorsionEntry {
    pub i: i32,
    pub j: i32,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub mode: GradingMode,
    pub writhe: i64,
    /// Nontrivial groups keyed by `(a, b)` (framed) or `(i, j)` (classical).
    pub groups: BTreeMap<(i32, i32), HomologyGroup>,
}

impl HomologyTable {
    pub fn get(&self, first: i32, second: i32) -> HomologyGroup {
        self.groups.get(&(first, second)).cloned().unwrap_or_default()
    }

    /// Framed `(a, b)` → classical `(i, j) = ((w − a)/2, (3w − b)/2)`.
    pub fn to_classical(&self) -> Result<HomologyTable> {
        match self.mode {
            GradingMode::Classical => Ok(self.clone()),
            GradingMode::Framed => {
                let w = self.writhe;
                let mut groups = BTreeMap::new();
                for (&(a, b), g) in &self.groups {
                    let (di, dj) = (w - i64::from(a), 3 * w - i64::from(b));
                    if di % 2 != 0 || dj % 2 != 0 {
                        return Err(Error::Internal(format!(
                            "framed grading ({a}, {b}) has the wrong parity for writhe {w}"
                        )));
                    }
                    groups.insert(((di / 2) as i32, (dj / 2) as i32), g.clone());
                }
                Ok(HomologyTable { mode: GradingMode::Classical, writhe: w, groups })
            }
        }
    }

    /// Classical `(i, j)` → framed `(a, b) = (w − 2i, 3w − 2j)`.
    pub fn to_framed(&self) -> HomologyTable {
        match self.mode {
            GradingMode::Framed => self.clone(),
            GradingMode::Classical => {
                let w = self.writhe as i32;
                let groups = self
                    .groups
                    .iter()
                    .map(|(&(i, j), g)| ((w - 2 * i, 3 * w - 2 * j), g.clone()))
                    .collect();
                HomologyTable { mode: GradingMode::Framed, writhe: self.writhe, groups }
            }
        }
    }

    pub fn in_mode(&self, mode: GradingMode) -> Result<HomologyTable> {
        match mode {
            GradingMode::Framed => Ok(self.to_framed()),
            GradingMode::Classical => self.to_classical(),
        }
    }

    /// One entry per invariant factor, sorted by `(i, j, order)`.
    pub fn torsion_summary(&self) -> Result<Vec<TorsionEntry>> {
        let classical = self.to_classical()?;
        let mut out: Vec<TorsionEntry> = classical
            .groups
            .iter()
            .flat_map(|(&(i, j), g)| g.torsion.iter().map(move |&order| TorsionEntry { i, j, order }))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Sum of free ranks.
    pub fn total_rank(&self) -> usize {
        self.groups.values().map(|g| g.free_rank).sum()
    }

    /// Grid rendering: columns are the first grading, rows the second (descending).
    pub fn render(&self) -> String {
        let (first, second) = match self.mode {
            GradingMode::Framed => ("a", "b"),
            GradingMode::Classical => ("i", "j"),
        };
        if self.groups.is_empty() {
            return format!("(trivial homology, {} gradings)\n", self.mode);
        }
        let mut cols: Vec<i32> = self.groups.keys().map(|k| k.0).collect();
        cols.sort_unstable();
        cols.dedup();
        let mut rows: Vec<i32> = self.groups.keys().map(|k| k.1).collect();
        rows.sort_unstable();
        rows.dedup();
        rows.reverse();
        // classical columns step by 1, framed by 2
        let step = if self.mode == GradingMode::Framed { 2 } else { 1 };
        let cols: Vec<i32> = (cols[0]..=*cols.last().unwrap()).step_by(step).collect();
        let header = format!("{second}\\{first}");
        let cells: Vec<Vec<String>> = rows
            .iter()
            .map(|&r| {
                cols.iter()
                    .map(|&c| self.groups.get(&(c, r)).map(|g| g.to_string()).unwrap_or_default())
                    .collect()
            })
            .collect();
        let label_w = rows.iter().map(|r| r.to_string().len()).max().unwrap_or(1).max(header.len());
        let widths: Vec<usize> = cols
            .iter()
            .enumerate()
            .map(|(ci, c)| {
                cells.iter().map(|row| row[ci].len()).max().unwrap_or(0).max(c.to_string().len())
            })
            .collect();
        let mut out = String::new();
        let _ = write!(out, "{header:>label_w$} |");
        for (c, w) in cols.iter().zip(&widths) {
            let _ = write!(out, " {c:>w$} |");
        }
        out.push('\n');
        for (r, row) in rows.iter().zip(&cells) {
            let _ = write!(out, "{r:>label_w$} |");
            for (cell, w) in row.iter().zip(&widths) {
                let _ = write!(out, " {cell:>w$} |");
            }
            out.push('\n');
        }
        out
    }
}

fn torsion_u64(s: &SmithForm) -> Result<Vec<u64>> {
    s.torsion()
        .map(|t| {
            t.to_i64()
                .and_then(|v| u64::try_from(v).ok())
                .ok_or_else(|| Error::Internal(format!("torsion coefficient {t} exceeds 64 bits")))
        })
        .collect()
}

/// `H_{a,b}` of a complex: free rank `dim C − rk ∂_{a,b} − rk ∂_{a+2,b}`,
/// torsion from the invariant factors of `∂_{a+2,b}`.
pub fn homology_at(c: &BigradedComplex, a: i32, b: i32) -> Result<HomologyGroup> {
    let dim = c.dim(Bigrading::new(a, b));
    let out_rank = c
        .group(Bigrading::new(a, b))
        .map_or(0, |g| smith_normal_form(&g.differential).rank);
    let (in_rank, torsion) = match c.group(Bigrading::new(a + 2, b)) {
        Some(g) => {
            let s = smith_normal_form(&g.differential);
            (s.rank, torsion_u64(&s)?)
        }
        None => (0, Vec::new()),
    };
    Ok(HomologyGroup { free_rank: dim - out_rank - in_rank, torsion })
}

/// Every nontrivial `H_{a,b}` of the complex.
pub fn framed_table(c: &BigradedComplex) -> Result<HomologyTable> {
    let mut groups = BTreeMap::new();
    let smith: BTreeMap<Bigrading, SmithForm> = c
        .groups()
        .iter()
        .map(|(g, grp)| (*g, smith_normal_form(&grp.differential)))
        .collect();
    for (g, grp) in c.groups() {
        let out_rank = smith[g].rank;
        let (in_rank, torsion) = match smith.get(&Bigrading::new(g.a + 2, g.b)) {
            Some(s) => (s.rank, torsion_u64(s)?),
            None => (0, Vec::new()),
        };
        let h = HomologyGroup { free_rank: grp.basis.len() - out_rank - in_rank, torsion };
        if !h.is_trivial() {
            groups.insert((g.a, g.b), h);
        }
    }
    Ok(HomologyTable { mode: GradingMode::Framed, writhe: c.writhe(), groups })
}

/// Framed homology of the complex, regraded to `(i, j)` with writhe `w`.
pub fn classical_table(c: &BigradedComplex, writhe: i64) -> Result<HomologyTable> {
    let mut t = framed_table(c)?;
    t.writhe = writhe;
    t.to_classical()
}

/// Dimension of `H_{a,b}(C ⊗ F_p)` for every bigrading with a nonzero chain group.
pub fn mod_p_dims(c: &BigradedComplex, p: u64) -> Result<BTreeMap<(i32, i32), usize>> {
    let mut ranks = BTreeMap::new();
    for (g, grp) in c.groups() {
        ranks.insert(*g, rank_mod_p(&grp.differential, p)?);
    }
    let mut out = BTreeMap::new();
    for (g, grp) in c.groups() {
        let in_rank = ranks.get(&Bigrading::new(g.a + 2, g.b)).copied().unwrap_or(0);
        let dim = grp.basis.len() - ranks[g] - in_rank;
        if dim > 0 {
            out.insert((g.a, g.b), dim);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ComputeOptions {
    pub reduce: bool,
    /// Check d∘d = 0 on every slice before taking homology.
    pub verify: bool,
    pub memory_limit_bytes: u64,
    /// Primes for the mod-p rank probe.
    pub mod_p: Vec<u64>,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        Self { reduce: true, verify: false, memory_limit_bytes: 4 << 30, mod_p: Vec::new() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub build_ms: f64,
    pub reduce_ms: f64,
    pub homology_ms: f64,
    pub total_ms: f64,
}

/// Output of the homology pipeline.
#[derive(Clone, Debug)]
pub struct Computation {
    /// Framed table.
    pub table: HomologyTable,
    pub timings: Timings,
    pub reduction_used: bool,
    pub generators: usize,
    pub generators_after_reduction: usize,
    /// Framed `dim H(C ⊗ F_p)` per requested prime.
    pub mod_p: BTreeMap<u64, BTreeMap<(i32, i32), usize>>,
}

struct SliceOutcome {
    groups: Vec<((i32, i32), HomologyGroup)>,
    mod_p: Vec<(u64, (i32, i32), usize)>,
    generators: usize,
    reduced_generators: usize,
    build: f64,
    reduce: f64,
    homology: f64,
}

#[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
mod clock {
    pub type Mark = std::time::Instant;

    pub fn now() -> Mark {
        Mark::now()
    }

    pub fn ms(t: Mark) -> f64 {
        (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
    }
}

/// Bare wasm has no monotonic clock; timings read zero there.
#[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
mod clock {
    pub type Mark = ();

    pub fn now() -> Mark {}

    pub fn ms(_: Mark) -> f64 {
        0.0
    }
}

use clock::ms;

/// Full pipeline: slices by quantum grading (in parallel), optional
/// cancellation, Smith forms.
pub fn compute(diagram: &LinkDiagram, opts: &ComputeOptions) -> Result<Computation> {
    let start = clock::now();
    for &p in &opts.mod_p {
        if !crate::algebra::is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
    }
    let budget = MemoryBudget::new(opts.memory_limit_bytes);
    let builder = ComplexBuilder::new(diagram)?.with_budget(&budget);
    let slices = builder.quantum_gradings();

    let outcomes = par::map_collect(slices, |b| -> Result<SliceOutcome> {
        let t0 = clock::now();
        let slice = builder.slice(b)?;
        if opts.verify {
            verify_d_squared(&slice).map_err(|w| Error::Internal(w.to_string()))?;
        }
        let generators = slice.total_dim();
        let build = ms(t0);
        let t1 = clock::now();
        let slice = if opts.reduce { crate::complex::reduce_complex(&slice) } else { slice };
        let reduce = ms(t1);
        let t2 = clock::now();
        let table = framed_table(&slice)?;
        let mut mod_p = Vec::new();
        for &p in &opts.mod_p {
            for (g, d) in mod_p_dims(&slice, p)? {
                mod_p.push((p, g, d));
            }
        }
        Ok(SliceOutcome {
            groups: table.groups.into_iter().collect(),
            mod_p,
            generators,
            reduced_generators: slice.total_dim(),
            build,
            reduce,
            homology: ms(t2),
        })
    });

    let mut groups = BTreeMap::new();
    let mut mod_p: BTreeMap<u64, BTreeMap<(i32, i32), usize>> =
        opts.mod_p.iter().map(|&p| (p, BTreeMap::new())).collect();
    let mut timings = Timings::default();
    let (mut generators, mut reduced) = (0, 0);
    for outcome in outcomes {
        let o = outcome?;
        groups.extend(o.groups);
        for (p, g, d) in o.mod_p {
            mod_p.entry(p).or_default().insert(g, d);
        }
        generators += o.generators;
        reduced += o.reduced_generators;
        timings.build_ms += o.build;
        timings.reduce_ms += o.reduce;
        timings.homology_ms += o.homology;
    }
    timings.total_ms = ms(start);
    Ok(Computation {
        table: HomologyTable { mode: GradingMode::Framed, writhe: diagram.writhe(), groups },
        timings,
        reduction_used: opts.reduce,
        generators,
        generators_after_reduction: reduced,
        mod_p,
    })
}

/// Convenience: classical table of a braid closure with default options.
pub fn khovanov_homology(word: &BraidWord) -> Result<HomologyTable> {
    compute(&word.closure(), &ComputeOptions::default())?.table.to_classical()
}

/// Homology of a graded chain of matrices `maps[l]: level l → level l−1`,
/// after cancellation. Used for quick checks outside the knot setting.
pub fn chain_homology(maps: &[IntMatrix]) -> Result<Vec<HomologyGroup>> {
    let reduced = reduce_chain(maps);
    let smith: Vec<SmithForm> = reduced.maps.iter().map(smith_normal_form).collect();
    (0..maps.len())
        .map(|l| {
            let (in_rank, torsion) = match smith.get(l + 1) {
                Some(s) => (s.rank, torsion_u64(s)?),
                None => (0, Vec::new()),
            };
            Ok(HomologyGroup {
                free_rank: reduced.survivors[l].len() - smith[l].rank - in_rank,
                torsion,
            })
        })
        .collect()
}

/// One row of the JSON result schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupEntry {
    pub i: i32,
    pub j: i32,
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

/// Machine-readable result of one computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KhResult {
    pub braid: Vec<i32>,
    pub strands: usize,
    pub writhe: i64,
    pub components: usize,
    pub mode: GradingMode,
    pub groups: Vec<GroupEntry>,
    pub timings: Timings,
    pub reduction_used: bool,
    /// Per prime, gradings where `dim H(C ⊗ F_p)` exceeds the rational rank.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub mod_p_excess: BTreeMap<String, Vec<GroupEntry>>,
}

impl KhResult {
    pub fn new(word: &BraidWord, computation: &Computation, mode: GradingMode) -> Result<Self> {
        let table = computation.table.in_mode(mode)?;
        let groups = table
            .groups
            .iter()
            .map(|(&(i, j), g)| GroupEntry { i, j, free_rank: g.free_rank, torsion: g.torsion.clone() })
            .collect();
        let mut mod_p_excess = BTreeMap::new();
        for (p, dims) in &computation.mod_p {
            let framed = HomologyTable {
                mode: GradingMode::Framed,
                writhe: computation.table.writhe,
                groups: dims
                    .iter()
                    .map(|(k, &d)| (*k, HomologyGroup { free_rank: d, torsion: vec![] }))
                    .collect(),
            };
            let regraded = framed.in_mode(mode)?;
            let rational = &table;
            let excess: Vec<GroupEntry> = regraded
                .groups
                .iter()
                .filter_map(|(&(i, j), g)| {
                    let free = rational.get(i, j).free_rank;
                    (g.free_rank > free).then(|| GroupEntry {
                        i,
                        j,
                        free_rank: g.free_rank - free,
                        torsion: vec![],
                    })
                })
                .collect();
            mod_p_excess.insert(p.to_string(), excess);
        }
        Ok(Self {
            braid: word.letters().to_vec(),
            strands: word.strands(),
            writhe: computation.table.writhe,
            components: word.components(),
            mode,
            groups,
            timings: computation.timings,
            reduction_used: computation.reduction_used,
            mod_p_excess,
        })
    }

    /// The same result with groups (and mod-p excess) regraded.
    pub fn in_mode(&self, mode: GradingMode) -> Result<KhResult> {
        let regrade = |entries: &[GroupEntry]| -> Result<Vec<GroupEntry>> {
            let table = HomologyTable {
                mode: self.mode,
                writhe: self.writhe,
                groups: entries
                    .iter()
                    .map(|e| ((e.i, e.j), HomologyGroup { free_rank: e.free_rank, torsion: e.torsion.clone() }))
                    .collect(),
            };
            Ok(table
                .in_mode(mode)?
                .groups
                .into_iter()
                .map(|((i, j), g)| GroupEntry { i, j, free_rank: g.free_rank, torsion: g.torsion })
                .collect())
        };
        let mut out = self.clone();
        out.mode = mode;
        out.groups = regrade(&self.groups)?;
        for (p, entries) in &self.mod_p_excess {
            out.mod_p_excess.insert(p.clone(), regrade(entries)?);
        }
        Ok(out)
    }

    pub fn table(&self) -> HomologyTable {
        HomologyTable {
            mode: self.mode,
            writhe: self.writhe,
            groups: self
                .groups
                .iter()
                .map(|e| ((e.i, e.j), HomologyGroup { free_rank: e.free_rank, torsion: e.torsion.clone() }))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }
}

/// Exact integer check used by tests and the CLI: invariant factors as `Int`.
pub fn invariant_factors(m: &IntMatrix) -> Vec<Int> {
    smith_normal_form(m).invariant_factors
}
