//! Monomials, homogeneous polynomials and square polynomial maps.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{pow, Rat};

/// A monomial `x_1^{e_1} ... x_n^{e_n}`.
///
/// Ordered graded-lexicographically with `x_1 > x_2 > ... > x_n`, so the
/// greatest monomial of degree `p` is `x_1^p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Self { exps, degree }
    }

    /// The constant monomial `1` in `n` variables.
    pub fn one(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    /// The single variable `x_{index+1}`.
    pub fn var(n: usize, index: usize) -> Self {
        let mut exps = vec![0; n];
        exps[index] = 1;
        Self::new(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.nvars(), other.nvars(), "monomials in different rings");
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        self.exps
            .iter()
            .zip(point)
            .filter(|(e, _)| **e > 0)
            .fold(Rat::one(), |acc, (e, x)| acc * pow(x, *e))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of degree `p` in `n` variables, greatest first.
pub fn monomials_of_degree(n: usize, p: u32) -> Vec<Monomial> {
    fn fill(rest: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if rest == 1 {
            prefix.push(left);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            fill(rest - 1, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if p == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return out;
    }
    fill(n, p, &mut Vec::with_capacity(n), &mut out);
    out
}

/// A homogeneous polynomial of fixed degree. The zero polynomial keeps its
/// degree tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPoly {
    n: usize,
    degree: u32,
    terms: BTreeMap<Monomial, Rat>,
}

impl HPoly {
    pub fn zero(n: usize, degree: u32) -> Self {
        Self {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, summing
    /// repeats and dropping zeros.
    pub fn new(
        n: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, Rat)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n, degree);
        for (m, c) in terms {
            if m.nvars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: m.nvars(),
                });
            }
            if m.degree() != degree {
                return Err(Error::InvalidInput(format!(
                    "term of degree {} in a polynomial of degree {degree}",
                    m.degree()
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Coefficients listed against [`monomials_of_degree`]`(n, degree)`.
    /// For `n = 2` this is `c_0 x^r + c_1 x^{r-1} y + ... + c_r y^r`.
    pub fn from_dense(n: usize, degree: u32, coeffs: &[Rat]) -> Result<Self> {
        let basis = monomials_of_degree(n, degree);
        if basis.len() != coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: coeffs.len(),
            });
        }
        Self::new(n, degree, basis.into_iter().zip(coeffs.iter().cloned()))
    }

    /// Dense coefficient vector in [`monomials_of_degree`] order.
    pub fn to_dense(&self) -> Vec<Rat> {
        monomials_of_degree(self.n, self.degree)
            .iter()
            .map(|m| self.coeff(m))
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Nonzero terms, greatest monomial first.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .fold(Rat::zero(), |acc, (m, c)| acc + c * m.eval(point)))
    }

    pub fn scale(&self, lambda: &Rat) -> HPoly {
        if lambda.is_zero() {
            return HPoly::zero(self.n, self.degree);
        }
        HPoly {
            n: self.n,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * lambda))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> HPoly {
        assert_eq!(self.n, m.nvars(), "monomial in a different ring");
        HPoly {
            n: self.n,
            degree: self.degree + m.degree(),
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.mul(m), c.clone()))
                .collect(),
        }
    }

    fn check_same_space(&self, other: &HPoly) {
        assert_eq!(self.n, other.n, "polynomials in different rings");
        assert_eq!(self.degree, other.degree, "polynomials of different degree");
    }
}

impl Add for &HPoly {
    type Output = HPoly;
    fn add(self, rhs: &HPoly) -> HPoly {
        self.check_same_space(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &HPoly {
    type Output = HPoly;
    fn neg(self) -> HPoly {
        self.scale(&-Rat::one())
    }
}

impl Sub for &HPoly {
    type Output = HPoly;
    fn sub(self, rhs: &HPoly) -> HPoly {
        self + &(-rhs)
    }
}

/// A square system of `n` homogeneous polynomials of common degree `r` in
/// `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    n: usize,
    r: u32,
    polys: Vec<HPoly>,
}

impl PolyMap {
    pub fn new(polys: Vec<HPoly>) -> Result<Self> {
        let n = polys.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty polynomial system".into()));
        }
        let r = polys[0].degree();
        for p in &polys {
            if p.nvars() != n {
                return Err(Error::InvalidInput(format!(
                    "system of {n} polynomials must use {n} variables, found {}",
                    p.nvars()
                )));
            }
            if p.degree() != r {
                return Err(Error::InvalidInput(format!(
                    "polynomials of degrees {r} and {} in one system",
                    p.degree()
                )));
            }
        }
        Ok(Self { n, r, polys })
    }

    /// Builds a map from dense coefficient rows (see [`HPoly::from_dense`]).
    pub fn from_dense(n: usize, r: u32, rows: &[Vec<Rat>]) -> Result<Self> {
        rows.iter()
            .map(|row| HPoly::from_dense(n, r, row))
            .collect::<Result<Vec<_>>>()
            .and_then(Self::new)
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    pub fn polys(&self) -> &[HPoly] {
        &self.polys
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Vec<Rat>> {
        self.polys.iter().map(|p| p.eval(point)).collect()
    }

    pub fn scale(&self, lambda: &Rat) -> PolyMap {
        PolyMap {
            n: self.n,
            r: self.r,
            polys: self.polys.iter().map(|p| p.scale(lambda)).collect(),
        }
    }

    /// Scales only the polynomial at `index`.
    pub fn scale_one(&self, index: usize, lambda: &Rat) -> PolyMap {
        let mut out = self.clone();
        out.polys[index] = self.polys[index].scale(lambda);
        out
    }
}

/// Multiplies every coefficient of `f` by `lambda`.
pub fn scale_map(f: &PolyMap, lambda: &Rat) -> PolyMap {
    f.scale(lambda)
}

pub fn mul_monomial(p: &HPoly, m: &Monomial) -> HPoly {
    p.mul_monomial(m)
}

pub fn eval(p: &HPoly, point: &[Rat]) -> Result<Rat> {
    p.eval(point)
}
