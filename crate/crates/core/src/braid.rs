//! Braid words on `n` strands and the constructions used to build the
//! published torsion examples.
//!
//! Letters are nonzero integers: `k > 0` is the generator `σ_k`, `k < 0` is
//! `σ_{|k|}^{-1}`, and `1 ≤ |k| ≤ n - 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::MalformedWord("a braid needs at least one strand".into()));
        }
        for &k in &letters {
            if k == 0 {
                return Err(Error::MalformedWord("zero is not a generator".into()));
            }
            if k.unsigned_abs() as usize >= strands {
                return Err(Error::MalformedWord(format!(
                    "generator {k} out of range for {strands} strands"
                )));
            }
        }
        Ok(Self { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        Self { strands: strands.max(1), letters: Vec::new() }
    }

    /// Parses whitespace-separated signed generator indices.
    pub fn parse(text: &str, strands: usize) -> Result<Self> {
        let letters = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i32>()
                    .map_err(|_| Error::MalformedWord(format!("not an integer: {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of letter signs; the writhe of the closure.
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|&k| i64::from(k.signum())).sum()
    }

    pub fn concat(&self, other: &BraidWord) -> Result<Self> {
        if self.strands != other.strands {
            return Err(Error::Domain(format!(
                "cannot concatenate braids on {} and {} strands",
                self.strands, other.strands
            )));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Self { strands: self.strands, letters })
    }

    pub fn power(&self, k: usize) -> Self {
        Self { strands: self.strands, letters: self.letters.repeat(k) }
    }

    /// Adds `offset` to every generator index and moves the word to `new_strands`.
    pub fn shift(&self, offset: usize, new_strands: usize) -> Result<Self> {
        if self.strands + offset > new_strands {
            return Err(Error::Domain(format!(
                "shifting a {}-strand braid by {offset} does not fit in {new_strands} strands",
                self.strands
            )));
        }
        let off = offset as i32;
        let letters = self
            .letters
            .iter()
            .map(|&k| if k > 0 { k + off } else { k - off })
            .collect();
        Ok(Self { strands: new_strands, letters })
    }

    /// Same letters on more strands (extra strands close to split unknots).
    pub fn embed(&self, new_strands: usize) -> Result<Self> {
        self.shift(0, new_strands)
    }

    /// The group inverse: reversed order, inverted letters.
    pub fn inverse(&self) -> Self {
        Self {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|k| -k).collect(),
        }
    }

    /// Every crossing switched; the closure is the mirror image.
    pub fn mirror(&self) -> Self {
        Self { strands: self.strands, letters: self.letters.iter().map(|k| -k).collect() }
    }

    /// `σ_i ↦ σ_{n-i}`: the diagram turned over about the braid axis, so the
    /// closure is isotopic to the original. Strand `k` becomes strand `n + 1 - k`.
    pub fn flip(&self) -> Self {
        let n = self.strands as i32;
        Self {
            strands: self.strands,
            letters: self.letters.iter().map(|&k| k.signum() * (n - k.abs())).collect(),
        }
    }

    pub fn permutation(&self) -> BraidPermutation {
        BraidPermutation::of(self)
    }

    /// Number of link components of the closure.
    pub fn components(&self) -> usize {
        self.permutation().cycle_count()
    }

    pub fn closure(&self) -> LinkDiagram {
        LinkDiagram::braid_closure(self)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for k in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{k}")?;
            first = false;
        }
        Ok(())
    }
}

/// Strand permutation of a braid: `images[p]` is where the strand starting at
/// position `p` (0-based) ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidPermutation {
    images: Vec<usize>,
}

impl BraidPermutation {
    pub fn identity(strands: usize) -> Self {
        Self { images: (0..strands).collect() }
    }

    fn of(word: &BraidWord) -> Self {
        // at[pos] = strand currently at position pos
        let mut at: Vec<usize> = (0..word.strands).collect();
        for &k in &word.letters {
            let i = k.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        let mut images = vec![0; word.strands];
        for (pos, &strand) in at.iter().enumerate() {
            images[strand] = pos;
        }
        Self { images }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &BraidPermutation) -> Self {
        Self { images: self.images.iter().map(|&p| other.images[p]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.images.len()];
        let mut cycles = 0;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p];
            }
        }
        cycles
    }
}

/// The wrap word `w_{i,j}` (or its inverse) on `n` strands.
///
/// For `i < j`: `σ_i σ_{i+1} ⋯ σ_j σ_j σ_{j-1} ⋯ σ_i`; for `i > j` the indices
/// run downward first. Always a pure braid.
pub fn w_word(i: usize, j: usize, n: usize, inverted: bool) -> Result<BraidWord> {
    if i == j || i == 0 || j == 0 || i >= n || j >= n {
        return Err(Error::Domain(format!(
            "w({i},{j}) needs 1 <= i != j <= n-1 with n = {n}"
        )));
    }
    let run: Vec<i32> = if i < j {
        (i..=j).map(|k| k as i32).collect()
    } else {
        (j..=i).rev().map(|k| k as i32).collect()
    };
    let mut letters = run.clone();
    letters.extend(run.iter().rev());
    if inverted {
        letters.iter_mut().for_each(|k| *k = -*k);
    }
    BraidWord::new(n, letters)
}

/// `(σ_1 σ_2 ⋯ σ_{p-1})^q` in `B_p`; its closure is the torus link `T(p, q)`.
pub fn torus_word(p: usize, q: usize) -> Result<BraidWord> {
    if p < 2 {
        return Err(Error::Domain(format!("torus braid needs p >= 2, got {p}")));
    }
    let block: Vec<i32> = (1..p as i32).collect();
    BraidWord::new(p, block.repeat(q))
}

/// Braid connected sum on `m + n - 1` strands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectedSum {
    pub word: BraidWord,
    /// Set when a summand closes to a link with several components, in which
    /// case the result depends on which components get joined.
    pub warning: bool,
}

pub fn connected_sum(w1: &BraidWord, w2: &BraidWord) -> ConnectedSum {
    let m = w1.strands();
    let n = w2.strands();
    let total = m + n - 1;
    let left = w1.embed(total).expect("embedding into more strands");
    let right = w2.shift(m - 1, total).expect("shift stays within total");
    ConnectedSum {
        word: left.concat(&right).expect("equal strand counts"),
        warning: w1.components() > 1 || w2.components() > 1,
    }
}

/// Disjoint union: `w2` placed on fresh strands to the right of `w1`.
pub fn split_union(w1: &BraidWord, w2: &BraidWord) -> BraidWord {
    let total = w1.strands() + w2.strands();
    let left = w1.embed(total).expect("embedding into more strands");
    let right = w2.shift(w1.strands(), total).expect("shift stays within total");
    left.concat(&right).expect("equal strand counts")
}

/// `c` copies of the torus block `(σ_s ⋯ σ_{s+p-2})^q`, successive blocks
/// sharing one generator index; block starts are `1, p-1, 2(p-1)-1, …`.
///
/// `overlapping_sum(5, 6, 3)` is `(σ1σ2σ3σ4)^6 (σ4σ5σ6σ7)^6 (σ7σ8σ9σ10)^6`.
pub fn overlapping_sum(p: usize, q: usize, copies: usize) -> Result<BraidWord> {
    if p < 2 || copies == 0 {
        return Err(Error::Domain(format!(
            "overlapping sum needs p >= 2 and at least one copy (p={p}, copies={copies})"
        )));
    }
    let step = if p > 2 { p - 2 } else { 1 };
    let strands = 1 + (p - 1) + (copies - 1) * step;
    let mut letters = Vec::with_capacity(copies * q * (p - 1));
    for copy in 0..copies {
        let start = 1 + copy * step;
        let block: Vec<i32> = (start..start + p - 1).map(|k| k as i32).collect();
        for _ in 0..q {
            letters.extend_from_slice(&block);
        }
    }
    BraidWord::new(strands, letters)
}

/// `w_{1,n-1}` paired with its torus-power expansion
/// `(σ_1⋯σ_{n-1})^n · (σ_1⋯σ_{n-2})^{-(n-1)}` (the full twist on `n` strands
/// times the inverse full twist on the first `n-1`).
///
/// Both words have identity permutation and exponent sum `2(n-1)`, and their
/// closures are isotopic.
pub fn expansion_identity(n: usize) -> Result<(BraidWord, BraidWord)> {
    if n < 3 {
        return Err(Error::Domain(format!("expansion identity needs n >= 3, got {n}")));
    }
    let wrap = w_word(1, n - 1, n, false)?;
    let full = torus_word(n, n)?;
    let inner = torus_word(n - 1, n - 1)?.inverse().embed(n)?;
    Ok((wrap, full.concat(&inner)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_words() {
        assert_eq!(BraidWord::parse("1 1 1", 2).unwrap().letters(), &[1, 1, 1]);
        let id = BraidWord::parse("", 3).unwrap();
        assert!(id.is_empty());
        assert_eq!(id.strands(), 3);
        assert!(matches!(BraidWord::parse("3", 3), Err(Error::MalformedWord(_))));
        assert!(matches!(BraidWord::parse("1 0", 3), Err(Error::MalformedWord(_))));
        assert!(matches!(BraidWord::parse("1 x", 3), Err(Error::MalformedWord(_))));
        assert_eq!(BraidWord::parse(" -2\t1\n", 3).unwrap().letters(), &[-2, 1]);
    }

    #[test]
    fn wrap_words() {
        assert_eq!(w_word(1, 4, 5, false).unwrap().letters(), &[1, 2, 3, 4, 4, 3, 2, 1]);
        assert_eq!(w_word(1, 3, 4, true).unwrap().letters(), &[-1, -2, -3, -3, -2, -1]);
        assert_eq!(w_word(3, 1, 4, false).unwrap().letters(), &[3, 2, 1, 1, 2, 3]);
        assert!(w_word(2, 2, 4, false).is_err());
        assert!(w_word(0, 2, 4, false).is_err());
        assert!(w_word(1, 4, 4, false).is_err());
    }

    #[test]
    fn wrap_words_are_pure() {
        for n in 2..=8 {
            for i in 1..n {
                for j in 1..n {
                    if i == j {
                        continue;
                    }
                    for inv in [false, true] {
                        let w = w_word(i, j, n, inv).unwrap();
                        assert_eq!(w.len(), 2 * (i.abs_diff(j) + 1));
                        assert!(w.permutation().is_identity(), "w({i},{j}) in B_{n}");
                    }
                }
            }
        }
    }

    #[test]
    fn torus_words() {
        assert_eq!(torus_word(2, 3).unwrap().letters(), &[1, 1, 1]);
        assert_eq!(torus_word(3, 4).unwrap().letters(), &[1, 2, 1, 2, 1, 2, 1, 2]);
        let t67 = torus_word(6, 7).unwrap();
        assert_eq!(t67.len(), 35);
        assert_eq!(t67.letters()[..5], [1, 2, 3, 4, 5]);
        assert!(torus_word(1, 3).is_err());
        assert!(torus_word(4, 0).unwrap().is_empty());
    }

    #[test]
    fn composition() {
        let block = BraidWord::new(5, vec![1, 2, 3, 4]).unwrap();
        let w = w_word(1, 4, 5, false).unwrap();
        let thm = block.power(5).concat(&w.power(5)).unwrap();
        assert_eq!(thm.len(), 60);
        assert_eq!(thm.strands(), 5);
        let s = BraidWord::new(3, vec![1, 2]).unwrap().shift(3, 6).unwrap();
        assert_eq!(s.letters(), &[4, 5]);
        assert_eq!(s.strands(), 6);
        assert!(block.power(0).is_empty());
        assert!(BraidWord::new(3, vec![1, 2]).unwrap().shift(4, 6).is_err());
        assert!(block.concat(&BraidWord::identity(3)).is_err());
    }

    #[test]
    fn connected_sums() {
        let t = torus_word(2, 3).unwrap();
        let granny = connected_sum(&t, &t);
        assert_eq!(granny.word.letters(), &[1, 1, 1, 2, 2, 2]);
        assert_eq!(granny.word.strands(), 3);
        assert_eq!(granny.word.components(), 1);
        assert!(!granny.warning);

        let t56 = torus_word(5, 6).unwrap();
        let s = connected_sum(&t56, &t56).word;
        assert_eq!(s.strands(), 9);
        assert_eq!(s.len(), 48);
        assert_eq!(&s.letters()[24..28], &[5, 6, 7, 8]);

        let unchanged = connected_sum(&t, &BraidWord::identity(1));
        assert_eq!(unchanged.word, t);

        let hopf = BraidWord::new(2, vec![1, 1]).unwrap();
        assert!(connected_sum(&hopf, &t).warning);
    }

    #[test]
    fn overlapping_sums() {
        let w = overlapping_sum(5, 6, 3).unwrap();
        let mut expected = Vec::new();
        for block in [[1, 2, 3, 4], [4, 5, 6, 7], [7, 8, 9, 10]] {
            for _ in 0..6 {
                expected.extend_from_slice(&block);
            }
        }
        assert_eq!(w.letters(), &expected[..]);
        assert_eq!(w.strands(), 11);

        assert_eq!(overlapping_sum(5, 6, 1).unwrap(), torus_word(5, 6).unwrap());
        let two = overlapping_sum(5, 6, 2).unwrap();
        assert_eq!(two.strands(), 8);
        assert_eq!(&two.letters()[24..28], &[4, 5, 6, 7]);
    }

    #[test]
    fn closure_counts() {
        assert_eq!(BraidWord::identity(1).components(), 1);
        let hopf = BraidWord::new(2, vec![1, 1]).unwrap();
        assert_eq!(hopf.components(), 2);
        assert_eq!(hopf.exponent_sum(), 2);
        let thm2 = torus_word(6, 7).unwrap().concat(&w_word(1, 5, 6, false).unwrap()).unwrap();
        assert_eq!(thm2.len(), 45);
        assert_eq!(thm2.exponent_sum(), 45);
        assert_eq!(thm2.components(), 1);
    }

    #[test]
    fn expansion_identity_small() {
        let (wrap, expanded) = expansion_identity(3).unwrap();
        assert_eq!(wrap.letters(), &[1, 2, 2, 1]);
        assert_eq!(expanded.letters(), &[1, 2, 1, 2, 1, 2, -1, -1]);
        assert_eq!(wrap.exponent_sum(), 4);
        assert_eq!(expanded.exponent_sum(), 4);
        for n in 3..=6 {
            let (wrap, expanded) = expansion_identity(n).unwrap();
            assert_eq!(wrap.permutation(), expanded.permutation());
            assert_eq!(wrap.exponent_sum(), expanded.exponent_sum());
            assert_eq!(wrap.exponent_sum(), 2 * (n as i64 - 1));
        }
        assert!(expansion_identity(2).is_err());
    }

    fn word_strategy() -> impl Strategy<Value = BraidWord> {
        (2usize..=6).prop_flat_map(|n| {
            let letter = (1..n as i32).prop_flat_map(|k| prop_oneof![Just(k), Just(-k)]);
            proptest::collection::vec(letter, 0..12)
                .prop_map(move |letters| BraidWord::new(n, letters).unwrap())
        })
    }

    proptest! {
        #[test]
        fn inverse_permutation_cancels(w in word_strategy()) {
            prop_assert!(w.permutation().then(&w.inverse().permutation()).is_identity());
        }

        #[test]
        fn exponent_sum_is_additive(a in word_strategy(), b in word_strategy(), k in 0usize..4) {
            let n = a.strands().max(b.strands());
            let a = a.embed(n).unwrap();
            let b = b.embed(n).unwrap();
            prop_assert_eq!(a.concat(&b).unwrap().exponent_sum(), a.exponent_sum() + b.exponent_sum());
            prop_assert_eq!(a.power(k).exponent_sum(), a.exponent_sum() * k as i64);
            prop_assert_eq!(a.shift(2, n + 2).unwrap().exponent_sum(), a.exponent_sum());
            let cs = connected_sum(&a, &b).word;
            prop_assert_eq!(cs.strands(), 2 * n - 1);
            prop_assert_eq!(cs.exponent_sum(), a.exponent_sum() + b.exponent_sum());
        }

        #[test]
        fn flip_is_an_involution(w in word_strategy()) {
            prop_assert_eq!(w.flip().flip(), w.clone());
            prop_assert_eq!(w.flip().components(), w.components());
            prop_assert_eq!(w.flip().exponent_sum(), w.exponent_sum());
        }

        #[test]
        fn components_match_diagram(w in word_strategy()) {
            let d = w.closure();
            prop_assert_eq!(d.components(), w.components());
            prop_assert_eq!(d.writhe(), w.exponent_sum());
        }
    }
}
