//! Link diagrams, Kauffman states and their smoothings.
//!
//! A crossing lists the four arcs meeting it counterclockwise, starting from
//! the incoming under-strand, so the under-strand runs slot 0 → slot 2 and the
//! over-strand occupies slots 1 and 3. Rotating the over-strand
//! counterclockwise sweeps the regions between slots 1–2 and 3–0; the
//! A-smoothing joins those two regions, which pairs the slots as (0,1)(2,3).
//! The B-smoothing pairs (1,2)(3,0). With the `mirror-smoothing` feature the
//! two are exchanged.
//!
//! In a closed braid (strands oriented upward) this makes the A-smoothing of a
//! positive crossing the vertical, orientation-respecting one.

use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Marker {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    /// Arcs counterclockwise from the incoming under-strand.
    pub slots: [u32; 4],
    /// Positive when the over-strand runs from slot 3 to slot 1.
    pub positive: bool,
}

impl Crossing {
    pub fn sign(&self) -> i64 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    /// The two slot pairs joined by the given smoothing.
    pub fn smoothing(&self, marker: Marker) -> [(usize, usize); 2] {
        const VERTICAL_PAIRS: [(usize, usize); 2] = [(0, 1), (2, 3)];
        const HORIZONTAL_PAIRS: [(usize, usize); 2] = [(1, 2), (3, 0)];
        let a_first = !cfg!(feature = "mirror-smoothing");
        match (marker, a_first) {
            (Marker::A, true) | (Marker::B, false) => VERTICAL_PAIRS,
            _ => HORIZONTAL_PAIRS,
        }
    }

    /// Arcs joined by the smoothing, as two arc pairs.
    pub fn smoothed_arcs(&self, marker: Marker) -> [(u32, u32); 2] {
        self.smoothing(marker).map(|(p, q)| (self.slots[p], self.slots[q]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkDiagram {
    arcs: usize,
    crossings: Vec<Crossing>,
}

impl LinkDiagram {
    /// Checks that every arc has exactly two crossing endpoints or none (a free loop).
    pub fn new(arcs: usize, crossings: Vec<Crossing>) -> Result<Self> {
        let mut ends = vec![0u8; arcs];
        for c in &crossings {
            for &a in &c.slots {
                let slot = ends
                    .get_mut(a as usize)
                    .ok_or_else(|| Error::Domain(format!("arc {a} out of range ({arcs} arcs)")))?;
                *slot += 1;
            }
        }
        if let Some(a) = ends.iter().position(|&e| e != 0 && e != 2) {
            return Err(Error::Domain(format!("arc {a} has {} endpoints", ends[a])));
        }
        Ok(Self { arcs, crossings })
    }

    /// Closure of a braid with all strands oriented upward.
    ///
    /// Crossings follow letter order. Bottom arcs are numbered `0..n` by
    /// position; the topmost arc on each position is glued back to them.
    pub fn braid_closure(word: &BraidWord) -> Self {
        let n = word.strands();
        let mut current: Vec<u32> = (0..n as u32).collect();
        let mut next = n as u32;
        let mut crossings = Vec::with_capacity(word.len());
        for &k in word.letters() {
            let i = k.unsigned_abs() as usize - 1;
            let (bl, br) = (current[i], current[i + 1]);
            let (tl, tr) = (next, next + 1);
            next += 2;
            // positive: over-strand bottom-left → top-right
            let slots = if k > 0 { [br, tr, tl, bl] } else { [bl, br, tr, tl] };
            crossings.push(Crossing { slots, positive: k > 0 });
            current[i] = tl;
            current[i + 1] = tr;
        }

        let mut rename: Vec<u32> = (0..next).collect();
        for (pos, &arc) in current.iter().enumerate() {
            rename[arc as usize] = pos as u32;
        }
        // compact the surviving ids, keeping their order
        let mut compact = vec![u32::MAX; next as usize];
        let mut arcs = 0u32;
        for id in 0..next as usize {
            if rename[id] as usize == id {
                compact[id] = arcs;
                arcs += 1;
            }
        }
        for c in &mut crossings {
            for a in &mut c.slots {
                *a = compact[rename[*a as usize] as usize];
            }
        }
        Self { arcs: arcs as usize, crossings }
    }

    pub fn arc_count(&self) -> usize {
        self.arcs
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(Crossing::sign).sum()
    }

    /// Number of link components, following strands straight through crossings.
    pub fn components(&self) -> usize {
        let mut dsu = Dsu::new(self.arcs);
        for c in &self.crossings {
            dsu.union(c.slots[0], c.slots[2]);
            dsu.union(c.slots[1], c.slots[3]);
        }
        dsu.count_roots()
    }

    pub fn resolve(&self, state: &KauffmanState) -> Result<CircleSet> {
        if state.len() != self.crossing_count() {
            return Err(Error::Domain(format!(
                "state has {} markers for {} crossings",
                state.len(),
                self.crossing_count()
            )));
        }
        let mut resolver = Resolver::new(self);
        let mut arc_circle = vec![0u8; self.arcs];
        let count = resolver.resolve_into(state.bits(), &mut arc_circle);
        Ok(CircleSet { arc_circle, count })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagram serializes")
    }
}

/// Assignment of `A`/`B` markers to crossings; bit `i` set means crossing `i` has `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KauffmanState {
    bits: u64,
    len: u8,
}

impl KauffmanState {
    pub const MAX_CROSSINGS: usize = 64;

    pub fn new(bits: u64, len: usize) -> Result<Self> {
        if len > Self::MAX_CROSSINGS {
            return Err(Error::TooLarge(len));
        }
        if len < 64 && bits >> len != 0 {
            return Err(Error::Domain(format!("state bits exceed {len} crossings")));
        }
        Ok(Self { bits, len: len as u8 })
    }

    pub fn all_a(len: usize) -> Result<Self> {
        Self::new(0, len)
    }

    pub fn all_b(len: usize) -> Result<Self> {
        let bits = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Self::new(bits, len)
    }

    pub fn from_markers(markers: &[Marker]) -> Result<Self> {
        let bits = markers
            .iter()
            .enumerate()
            .filter(|(_, m)| **m == Marker::B)
            .fold(0u64, |acc, (i, _)| acc | 1 << i);
        Self::new(bits, markers.len())
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn marker(&self, crossing: usize) -> Marker {
        if self.bits >> crossing & 1 == 1 {
            Marker::B
        } else {
            Marker::A
        }
    }

    pub fn flipped(&self, crossing: usize) -> Self {
        Self { bits: self.bits ^ (1 << crossing), len: self.len }
    }

    pub fn b_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Number of `A` markers minus number of `B` markers.
    pub fn sigma(&self) -> i32 {
        self.len as i32 - 2 * self.bits.count_ones() as i32
    }

    /// `B` markers strictly after the given crossing.
    pub fn b_after(&self, crossing: usize) -> u32 {
        if crossing + 1 >= 64 {
            0
        } else {
            (self.bits >> (crossing + 1)).count_ones()
        }
    }

    /// All `2^len` states in increasing bit order.
    pub fn all(len: usize) -> Result<impl Iterator<Item = KauffmanState>> {
        if len > 40 {
            return Err(Error::TooLarge(len));
        }
        Ok((0..1u64 << len).map(move |bits| KauffmanState { bits, len: len as u8 }))
    }
}

/// Circles of a smoothed diagram, numbered by their least arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleSet {
    arc_circle: Vec<u8>,
    count: usize,
}

impl CircleSet {
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn circle_of(&self, arc: u32) -> usize {
        self.arc_circle[arc as usize] as usize
    }

    pub fn arc_circles(&self) -> &[u8] {
        &self.arc_circle
    }

    /// Arcs of each circle, in circle order.
    pub fn circles(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.count];
        for (arc, &c) in self.arc_circle.iter().enumerate() {
            out[c as usize].push(arc as u32);
        }
        out
    }
}

/// Reusable buffers for smoothing many states of one diagram.
pub(crate) struct Resolver<'d> {
    diagram: &'d LinkDiagram,
    dsu: Dsu,
    label: Vec<u8>,
}

impl<'d> Resolver<'d> {
    pub(crate) fn new(diagram: &'d LinkDiagram) -> Self {
        Self { diagram, dsu: Dsu::new(diagram.arcs), label: vec![0; diagram.arcs] }
    }

    /// Writes the circle index of every arc into `out`; returns the circle count.
    pub(crate) fn resolve_into(&mut self, bits: u64, out: &mut [u8]) -> usize {
        self.dsu.reset();
        for (i, c) in self.diagram.crossings.iter().enumerate() {
            let marker = if bits >> i & 1 == 1 { Marker::B } else { Marker::A };
            for (p, q) in c.smoothed_arcs(marker) {
                self.dsu.union(p, q);
            }
        }
        const UNSEEN: u8 = u8::MAX;
        self.label.fill(UNSEEN);
        let mut count = 0usize;
        for arc in 0..self.diagram.arcs {
            let root = self.dsu.find(arc as u32) as usize;
            if self.label[root] == UNSEEN {
                self.label[root] = count as u8;
                count += 1;
            }
            out[arc] = self.label[root];
        }
        count
    }
}

#[derive(Clone, Debug)]
struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect() }
    }

    fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller root so roots stay canonical
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }

    fn count_roots(&mut self) -> usize {
        (0..self.parent.len() as u32).filter(|&x| self.find(x) == x).count()
    }
}
