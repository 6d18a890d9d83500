//! Laurent polynomials in `A`, the Kauffman bracket and the graded Euler
//! characteristic of a framed homology table.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::MAX_ENUMERATED_CROSSINGS;
use crate::diagram::{LinkDiagram, Resolver};
use crate::error::{Error, Result};
use crate::homology::{GradingMode, HomologyTable};

/// Exact Laurent polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly {
    coefficients: BTreeMap<i32, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c·A^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c.into());
        p
    }

    /// `δ = −A² − A⁻²`, the value of one circle.
    pub fn delta() -> Self {
        Self::monomial(-1, 2) + Self::monomial(-1, -2)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficient(&self, e: i32) -> BigInt {
        self.coefficients.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> {
        self.coefficients.iter().map(|(e, c)| (*e, c))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    fn add_term(&mut self, e: i32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coefficients.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coefficients.remove(&e);
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coefficients {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coefficients: self.coefficients.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.coefficients {
            for (e2, c2) in &rhs.coefficients {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

/// Descending exponents, e.g. `-A^2 - A^-2`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.coefficients.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = c.abs();
            let unit = magnitude.is_one();
            if !unit || *e == 0 {
                write!(f, "{magnitude}")?;
            }
            match *e {
                0 => {}
                1 => f.write_str("A")?,
                e => write!(f, "A^{e}")?,
            }
        }
        Ok(())
    }
}

/// Unreduced Kauffman bracket `Σ_s A^{σ(s)} δ^{|cir(s)|}`.
pub fn bracket(diagram: &LinkDiagram) -> Result<LaurentPoly> {
    let n = diagram.crossing_count();
    if n > MAX_ENUMERATED_CROSSINGS {
        return Err(Error::TooLarge(n));
    }
    // histogram over (σ, circle count), then one multiplication per bucket
    let mut resolver = Resolver::new(diagram);
    let mut scratch = vec![0u8; diagram.arc_count()];
    let mut histogram: BTreeMap<(i32, usize), u64> = BTreeMap::new();
    for bits in 0..1u64 << n {
        let circles = resolver.resolve_into(bits, &mut scratch);
        let sigma = n as i32 - 2 * bits.count_ones() as i32;
        *histogram.entry((sigma, circles)).or_insert(0) += 1;
    }
    let delta = LaurentPoly::delta();
    let mut powers: Vec<LaurentPoly> = vec![LaurentPoly::one()];
    let mut out = LaurentPoly::zero();
    for ((sigma, circles), count) in histogram {
        while powers.len() <= circles {
            let next = powers.last().unwrap() * &delta;
            powers.push(next);
        }
        out = out + &LaurentPoly::monomial(count, sigma) * &powers[circles];
    }
    Ok(out)
}

/// `Σ_{a,b} (−1)^{(b−a)/2} · rk H_{a,b} · A^b`; torsion contributes nothing.
pub fn graded_euler(table: &HomologyTable) -> Result<LaurentPoly> {
    if table.mode != GradingMode::Framed {
        return Err(Error::Domain("graded Euler characteristic needs a framed table".into()));
    }
    let mut out = LaurentPoly::zero();
    for (&(a, b), g) in &table.groups {
        if (b - a) % 2 != 0 {
            return Err(Error::Internal(format!("framed grading ({a}, {b}) has odd b - a")));
        }
        let sign: i64 = if ((b - a) / 2).rem_euclid(2) == 0 { 1 } else { -1 };
        out.add_term(b, BigInt::from(sign * g.free_rank as i64));
    }
    Ok(out)
}
