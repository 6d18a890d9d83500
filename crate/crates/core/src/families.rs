//! Named braids with published odd torsion, and their expected torsion.
//!
//! Most of these are far beyond what a global-complex computation handles on
//! a desk machine (40 to 72 crossings); they carry `Scale::Integration` so
//! that default test runs never try them.

use serde::{Deserialize, Serialize};

use crate::braid::{connected_sum, overlapping_sum, torus_word, w_word, BraidWord};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Desk,
    Integration,
}

/// How a published bigrading pair should be read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reading {
    Classical,
    Framed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingClaim {
    pub reading: Reading,
    pub first: i32,
    pub second: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedTorsion {
    /// Invariant factor that should appear somewhere in the table.
    pub order: u64,
    /// Alternative locations; empty when no bigrading was published.
    pub at: Vec<GradingClaim>,
    /// Location not yet confirmed by a computation.
    pub pending: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Family {
    pub name: String,
    pub summary: String,
    pub word: BraidWord,
    pub scale: Scale,
    pub expected: Vec<ExpectedTorsion>,
}

impl Family {
    pub fn crossings(&self) -> usize {
        self.word.len()
    }

    pub fn writhe(&self) -> i64 {
        self.word.exponent_sum()
    }

    pub fn components(&self) -> usize {
        self.word.components()
    }
}

fn somewhere(order: u64) -> ExpectedTorsion {
    ExpectedTorsion { order, at: Vec::new(), pending: false }
}

/// `(σ1σ2σ3)^4 σ1σ2` in `B_4`, the repeated summand of the `conj4` ladder.
pub fn ladder_summand() -> BraidWord {
    let mut letters = [1, 2, 3].repeat(4);
    letters.extend([1, 2]);
    BraidWord::new(4, letters).expect("valid 4-braid")
}

/// `T(2,3)` followed by `m` connected summands of [`ladder_summand`].
///
/// The summand closes to a two-component link: a 3-strand component and a
/// single strand winding once around it. Each new copy is joined through its
/// single-strand component to the last strand of the word so far, so the
/// trefoil meets the first copy's single strand and each later copy meets the
/// previous copy's 3-strand component.
pub fn conj4_word(m: usize) -> BraidWord {
    let summand = ladder_summand().flip();
    let mut word = torus_word(2, 3).expect("valid torus braid");
    for _ in 0..m {
        word = connected_sum(&word, &summand).word;
    }
    word
}

pub fn conj4(m: usize) -> Family {
    let word = conj4_word(m);
    let scale = if m == 0 { Scale::Desk } else { Scale::Integration };
    Family {
        name: format!("conj4({m})"),
        summary: format!("T(2,3) # {m} copies of (s1s2s3)^4 s1s2; expected Z_3, Z_9, ..., Z_3^m"),
        word,
        scale,
        expected: (1..=m as u32).map(|k| somewhere(3u64.pow(k))).collect(),
    }
}

fn w_power(i: usize, j: usize, n: usize, k: usize) -> BraidWord {
    w_word(i, j, n, false).expect("valid wrap word").power(k)
}

fn cat(a: &BraidWord, b: &BraidWord) -> BraidWord {
    a.concat(b).expect("equal strand counts")
}

/// The fixed-name entries (the `conj4` ladder is listed for `m = 1..=4`).
pub fn registry() -> Vec<Family> {
    let t67_w15 = cat(&torus_word(6, 7).unwrap(), &w_power(1, 5, 6, 1));
    let claim = |reading, first, second| GradingClaim { reading, first, second };
    let seven_at = |first, second| ExpectedTorsion {
        order: 7,
        at: vec![claim(Reading::Classical, first, second), claim(Reading::Framed, first, second)],
        pending: true,
    };
    let t56 = torus_word(5, 6).unwrap();
    let t66_tail = {
        let mut letters = [1, 2, 3, 4, 5].repeat(6);
        letters.extend([1, 2, 3, 4]);
        BraidWord::new(6, letters).unwrap()
    };
    let mut out = vec![
        Family {
            name: "thm2".into(),
            summary: "(s1s2s3s4s5)^7 w_{1,5} in B_6; a knot with Z_7 torsion".into(),
            word: t67_w15,
            scale: Scale::Integration,
            expected: vec![seven_at(23, 71), seven_at(24, 75)],
        },
        Family {
            name: "remark".into(),
            summary: "(s1s2s3s4)^5 w_{1,4}^6 in B_5; a link with Z_7 torsion".into(),
            word: cat(&torus_word(5, 5).unwrap(), &w_power(1, 4, 5, 6)),
            scale: Scale::Integration,
            expected: vec![somewhere(7)],
        },
        Family {
            name: "thm3-1a".into(),
            summary: "(s1s2s3s4)^5 w_{1,4}^5 in B_5; Z_9 torsion".into(),
            word: cat(&torus_word(5, 5).unwrap(), &w_power(1, 4, 5, 5)),
            scale: Scale::Integration,
            expected: vec![somewhere(9)],
        },
        Family {
            name: "thm3-1b".into(),
            summary: "T(5,6) # T(5,6) in B_9; Z_9 torsion".into(),
            word: connected_sum(&t56, &t56).word,
            scale: Scale::Integration,
            expected: vec![somewhere(9)],
        },
        Family {
            name: "thm3-2".into(),
            summary: "(s1s2s3s4)^6 (s4s5s6s7)^6 (s7s8s9s10)^6 in B_11; Z_27 torsion".into(),
            word: overlapping_sum(5, 6, 3).unwrap(),
            scale: Scale::Integration,
            expected: vec![somewhere(27)],
        },
        Family {
            name: "thm3-3".into(),
            summary: "closure of (s1s2s3s4s5)^6 s1s2s3s4 summed with itself, B_11; Z_25 torsion".into(),
            word: connected_sum(&t66_tail, &t66_tail).word,
            scale: Scale::Integration,
            expected: vec![somewhere(25)],
        },
        Family {
            name: "conj4-base".into(),
            summary: "(s1s2s3)^4 s1s2 in B_4, the ladder summand alone".into(),
            word: ladder_summand(),
            scale: Scale::Integration,
            expected: Vec::new(),
        },
    ];
    out.extend((1..=4).map(conj4));
    out
}

/// Looks up a fixed name, or `conj4(m)` for any `m`.
pub fn lookup(name: &str) -> Result<Family> {
    let name = name.trim();
    if let Some(m) = name.strip_prefix("conj4(").and_then(|r| r.strip_suffix(')')) {
        let m: usize = m
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("bad ladder index in {name:?}")))?;
        return Ok(conj4(m));
    }
    registry()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::Domain(format!("unknown family {name:?}")))
}
