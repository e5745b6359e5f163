//! Graded spaces Ω(p,q) of polynomials in commuting `x` and anticommuting
//! `θ` variables, and the Koszul differential `Σ f_j ∂/∂θ_j` between them.
//!
//! Basis conventions (fixed here, relied on everywhere downstream):
//! - monomials in graded-lex order, `x_1 > ... > x_n`, greatest first;
//! - θ-words of length `q` ordered by their complementary index set,
//!   ascending lexicographically (for `n = 3`: `θ2θ3, θ1θ3, θ1θ2` and
//!   `θ3, θ2, θ1`);
//! - in Ω(p,q) the monomial is the outer index and the θ-word the inner one.

use std::collections::HashMap;
use std::fmt;

use num_traits::One;

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::poly::{monomials_of_degree, Monomial, PolyMap};
use crate::rat::Rat;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// A product `θ_{i_1} ... θ_{i_q}` with strictly increasing 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThetaWord(Vec<usize>);

impl ThetaWord {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!(
                "theta indices must be strictly increasing: {indices:?}"
            )));
        }
        Ok(Self(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `∂/∂θ_j` applied from the left: removes `j` with sign `(-1)^k`, where
    /// `k` is the 0-based position of `j`. `None` if `j` is absent.
    pub fn derive(&self, j: usize) -> Option<(bool, ThetaWord)> {
        let k = self.0.iter().position(|&i| i == j)?;
        let mut rest = self.0.clone();
        rest.remove(k);
        Some((k % 2 == 1, ThetaWord(rest)))
    }
}

impl fmt::Display for ThetaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.0 {
            write!(f, "θ{}", i + 1)?;
        }
        Ok(())
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets_of(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// θ-words of length `q` in basis order.
pub fn theta_words(n: usize, q: usize) -> Vec<ThetaWord> {
    if q > n {
        return Vec::new();
    }
    subsets_of(n, n - q)
        .into_iter()
        .map(|missing| ThetaWord((0..n).filter(|i| !missing.contains(i)).collect()))
        .collect()
}

/// `dim Ω(p,q) = C(p+n-1, p) · C(n, q)`; zero when `q > n`.
pub fn omega_dim(n: usize, p: usize, q: usize) -> usize {
    if q > n || n == 0 {
        return usize::from(n == 0 && p == 0 && q == 0);
    }
    binomial(p + n - 1, p) * binomial(n, q)
}

/// Ordered basis of Ω(p,q).
#[derive(Clone, Debug)]
pub struct OmegaBasis {
    n: usize,
    p: usize,
    q: usize,
    monomials: Vec<Monomial>,
    words: Vec<ThetaWord>,
    monomial_index: HashMap<Monomial, usize>,
    word_index: HashMap<ThetaWord, usize>,
}

impl OmegaBasis {
    pub fn new(n: usize, p: usize, q: usize) -> Self {
        let monomials = if q > n {
            Vec::new()
        } else {
            monomials_of_degree(n, p as u32)
        };
        let words = theta_words(n, q);
        let monomial_index = monomials.iter().cloned().zip(0..).collect();
        let word_index = words.iter().cloned().zip(0..).collect();
        Self {
            n,
            p,
            q,
            monomials,
            words,
            monomial_index,
            word_index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.monomials.len() * self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn element(&self, index: usize) -> (&Monomial, &ThetaWord) {
        let w = self.words.len();
        (&self.monomials[index / w], &self.words[index % w])
    }

    pub fn elements(&self) -> impl Iterator<Item = (&Monomial, &ThetaWord)> + '_ {
        self.monomials
            .iter()
            .flat_map(move |m| self.words.iter().map(move |w| (m, w)))
    }

    pub fn index_of(&self, m: &Monomial, w: &ThetaWord) -> Option<usize> {
        let mi = self.monomial_index.get(m)?;
        let wi = self.word_index.get(w)?;
        Some(mi * self.words.len() + wi)
    }

    /// Human-readable element, e.g. `x1^2*θ3`, using the given variable names.
    pub fn describe(&self, index: usize, names: &[String]) -> String {
        let (m, w) = self.element(index);
        let mono = format_monomial(m, names);
        match (mono.is_empty(), w.is_empty()) {
            (true, true) => "1".to_string(),
            (false, true) => mono,
            (true, false) => w.to_string(),
            (false, false) => format!("{mono}*{w}"),
        }
    }
}

/// `x1^2*x3` style rendering; empty string for the unit monomial.
pub fn format_monomial(m: &Monomial, names: &[String]) -> String {
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(i, e)| {
            if *e == 1 {
                names[i].clone()
            } else {
                format!("{}^{}", names[i], e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

pub fn default_var_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

pub fn omega_basis(n: usize, p: usize, q: usize) -> OmegaBasis {
    OmegaBasis::new(n, p, q)
}

/// The chain `Ω(R - q_max·r, q_max) → ... → Ω(R - r, 1) → Ω(R, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulSpec {
    pub n: usize,
    pub r: usize,
    pub big_r: usize,
    /// `(p, q)` gradings, leftmost first.
    pub terms: Vec<(usize, usize)>,
}

impl KoszulSpec {
    pub fn dims(&self) -> Vec<usize> {
        self.terms
            .iter()
            .map(|&(p, q)| omega_dim(self.n, p, q))
            .collect()
    }

    /// Alternating sum of dimensions with the rightmost term positive.
    pub fn euler_char(&self) -> i64 {
        alternating_sum_from_right(&self.dims())
    }
}

pub(crate) fn alternating_sum_from_right(dims: &[usize]) -> i64 {
    dims.iter()
        .rev()
        .enumerate()
        .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

fn check_map_type(n: usize, r: usize) -> Result<()> {
    if n == 0 || r == 0 {
        return Err(Error::InvalidInput(format!(
            "map type {n}|{r}: need n >= 1 and r >= 1"
        )));
    }
    Ok(())
}

pub fn koszul_spec(n: usize, r: usize, big_r: usize) -> Result<KoszulSpec> {
    check_map_type(n, r)?;
    let q_max = (big_r / r).min(n);
    let terms = (0..=q_max).rev().map(|i| (big_r - i * r, i)).collect();
    Ok(KoszulSpec { n, r, big_r, terms })
}

pub fn euler_char(n: usize, r: usize, big_r: usize) -> Result<i64> {
    Ok(koszul_spec(n, r, big_r)?.euler_char())
}

/// Coefficients of `((1 - t^r) / (1 - t))^n = (1 + t + ... + t^{r-1})^n`
/// up to `t^{r_max}`.
pub fn euler_genfunc(n: usize, r: usize, r_max: usize) -> Result<Vec<i64>> {
    check_map_type(n, r)?;
    let mut poly = vec![0i64; r_max + 1];
    poly[0] = 1;
    for _ in 0..n {
        let mut next = vec![0i64; r_max + 1];
        for (i, c) in poly.iter().enumerate().filter(|(_, c)| **c != 0) {
            for j in 0..r {
                if i + j <= r_max {
                    next[i + j] += c;
                }
            }
        }
        poly = next;
    }
    Ok(poly)
}

/// Smallest `R` whose Koszul complex has zero Euler characteristic.
pub fn min_exact_r(n: usize, r: usize) -> usize {
    n * (r - 1) + 1
}

/// Matrix of `d: Ω(p,q) → Ω(p+r, q-1)`, rows indexed by the source basis.
pub fn build_differential(f: &PolyMap, source: (usize, usize)) -> Result<ExactMatrix> {
    let (p, q) = source;
    let n = f.nvars();
    let r = f.degree() as usize;
    if q == 0 {
        return Err(Error::InvalidInput("no differential out of Ω(p,0)".into()));
    }
    if q > n {
        return Err(Error::InvalidInput(format!(
            "θ-degree {q} exceeds the number of variables {n}"
        )));
    }
    let src = OmegaBasis::new(n, p, q);
    let dst = OmegaBasis::new(n, p + r, q - 1);
    let mut d = ExactMatrix::zeros(src.len(), dst.len());
    let minus_one = -Rat::one();
    for (row, (m, w)) in src.elements().enumerate() {
        for &j in w.indices() {
            let (negate, rest) = w.derive(j).expect("index taken from the word");
            let shifted = f.polys()[j].mul_monomial(m);
            for (t, c) in shifted.terms() {
                let col = dst
                    .index_of(t, &rest)
                    .ok_or_else(|| Error::Anomaly(format!("{t:?} missing from target basis")))?;
                if negate {
                    d.add_at(row, col, &(c * &minus_one));
                } else {
                    d.add_at(row, col, c);
                }
            }
        }
    }
    Ok(d)
}

/// The Koszul complex of `f` whose rightmost space is Ω(R,0).
pub fn build_complex(f: &PolyMap, big_r: usize) -> Result<ChainComplex> {
    let spec = koszul_spec(f.nvars(), f.degree() as usize, big_r)?;
    let diffs = spec.terms[..spec.terms.len() - 1]
        .iter()
        .map(|&src| build_differential(f, src))
        .collect::<Result<Vec<_>>>()?;
    ChainComplex::new(spec.dims(), diffs).map_err(|e| match e {
        Error::NotNilpotent { .. } => Error::Anomaly(format!("Koszul complex not nilpotent: {e}")),
        other => other,
    })
}

/// One row of a Koszul tower table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerRow {
    pub big_r: usize,
    pub terms: Vec<(usize, usize)>,
    pub dims: Vec<usize>,
    pub chi: i64,
}

pub fn tower(n: usize, r: usize, max_r: usize) -> Result<Vec<TowerRow>> {
    (0..=max_r)
        .map(|big_r| {
            let spec = koszul_spec(n, r, big_r)?;
            Ok(TowerRow {
                big_r,
                dims: spec.dims(),
                chi: spec.euler_char(),
                terms: spec.terms,
            })
        })
        .collect()
}

/// Renders a tower as a table with columns R, (Spaces,) Dimensions, χ.
pub fn render_tower(n: usize, r: usize, rows: &[TowerRow], with_spaces: bool) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            let mut c = vec![row.big_r.to_string()];
            if with_spaces {
                c.push(
                    row.terms
                        .iter()
                        .map(|(p, q)| format!("Ω({p},{q})"))
                        .collect::<Vec<_>>()
                        .join(" → "),
                );
            }
            c.push(
                row.dims
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" → "),
            );
            c.push(row.chi.to_string());
            c
        })
        .collect();
    let mut header = vec!["R".to_string()];
    if with_spaces {
        header.push("Spaces".into());
    }
    header.push("Dimensions".into());
    header.push("χ".into());
    let widths: Vec<usize> = (0..header.len())
        .map(|k| {
            std::iter::once(&header)
                .chain(&cells)
                .map(|row| row[k].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |row: &[String]| {
        row.iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s}{}", " ".repeat(w - s.chars().count())))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = format!("{n}|{r}\n{}\n", line(&header));
    for row in &cells {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}
