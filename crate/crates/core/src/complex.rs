//! Finite chain complexes of rational matrices, their cohomology, and the
//! determinant of a complex as an alternating ratio of minors.
//!
//! Differentials act on row vectors: `d_i` is an `l_i x l_{i+1}` matrix and
//! nilpotency reads `d_i · d_{i+1} = 0`.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::koszul::alternating_sum_from_right;
use crate::matrix::ExactMatrix;
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    diffs: Vec<ExactMatrix>,
}

impl ChainComplex {
    /// Checks shapes and nilpotency.
    pub fn new(dims: Vec<usize>, diffs: Vec<ExactMatrix>) -> Result<Self> {
        let c = Self::with_shapes(dims, diffs)?;
        match verify_nilpotent(&c) {
            Nilpotency::Ok => Ok(c),
            Nilpotency::Fails { diff, row, col } => Err(Error::NotNilpotent { diff, row, col }),
        }
    }

    /// Checks shapes only; the result may violate nilpotency.
    pub fn with_shapes(dims: Vec<usize>, diffs: Vec<ExactMatrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidInput("a complex needs at least one term".into()));
        }
        if diffs.len() + 1 != dims.len() {
            return Err(Error::DimensionMismatch {
                expected: dims.len() - 1,
                got: diffs.len(),
            });
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.rows() != dims[i] || d.cols() != dims[i + 1] {
                return Err(Error::InvalidInput(format!(
                    "d{} is {}x{}, expected {}x{}",
                    i + 1,
                    d.rows(),
                    d.cols(),
                    dims[i],
                    dims[i + 1]
                )));
            }
        }
        Ok(Self { dims, diffs })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn diffs(&self) -> &[ExactMatrix] {
        &self.diffs
    }

    /// Number of terms `p`.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn euler_char(&self) -> i64 {
        alternating_sum_from_right(&self.dims)
    }

    /// Multiplies every differential by `lambda`.
    pub fn scale(&self, lambda: &Rat) -> Self {
        Self {
            dims: self.dims.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(lambda)).collect(),
        }
    }
}

/// Outcome of a nilpotency check. Positions are 1-based: the product
/// `d_diff · d_{diff+1}` has a nonzero entry at `(row, col)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    Ok,
    Fails { diff: usize, row: usize, col: usize },
}

pub fn verify_nilpotent(c: &ChainComplex) -> Nilpotency {
    for (i, pair) in c.diffs.windows(2).enumerate() {
        let prod = pair[0].mul(&pair[1]).expect("shapes checked at construction");
        for row in 0..prod.rows() {
            if let Some(col) = prod.row(row).iter().position(|v| !v.is_zero()) {
                return Nilpotency::Fails {
                    diff: i + 1,
                    row: row + 1,
                    col: col + 1,
                };
            }
        }
    }
    Nilpotency::Ok
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub ranks: Vec<usize>,
    pub h: Vec<usize>,
    pub chi: i64,
    pub exact: bool,
}

/// Cohomology dimensions `h_i = dim ker(d_i) - rank(d_{i-1})` at every term.
pub fn cohomology(c: &ChainComplex) -> CohomologyReport {
    let ranks: Vec<usize> = c.diffs.iter().map(ExactMatrix::rank).collect();
    let h: Vec<usize> = (0..c.dims.len())
        .map(|i| {
            let out = ranks.get(i).copied().unwrap_or(0);
            let inc = if i == 0 { 0 } else { ranks[i - 1] };
            c.dims[i] - out - inc
        })
        .collect();
    let exact = h.iter().all(|&x| x == 0);
    CohomologyReport {
        chi: c.euler_char(),
        ranks,
        h,
        exact,
    }
}

/// Sizes `|σ_1|, ..., |σ_p|` with `|σ_1| = 0` and
/// `|σ_{i+1}| = l_i - |σ_i|`; requires every size to be non-negative and
/// the Euler characteristic to vanish.
pub fn sigma_sizes(dims: &[usize]) -> Result<Vec<usize>> {
    let mut sizes = Vec::with_capacity(dims.len());
    let mut k: i64 = 0;
    for (i, &l) in dims.iter().enumerate() {
        sizes.push(k as usize);
        k = l as i64 - k;
        if k < 0 && i + 1 < dims.len() {
            return Err(Error::NegativePartialSum {
                dims: dims.to_vec(),
                term: i + 1,
            });
        }
    }
    if k != 0 {
        return Err(Error::NonZeroEuler {
            chi: alternating_sum_from_right(dims),
        });
    }
    Ok(sizes)
}

/// Index subsets `σ_2, ..., σ_{p-1}` (0-based, sorted). `σ_1` is empty and
/// `σ_p` is all of `L_p`, so neither is stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinorSelection {
    pub sigmas: Vec<Vec<usize>>,
}

impl MinorSelection {
    /// 1-based copy for display.
    pub fn one_based(&self) -> Vec<Vec<usize>> {
        self.sigmas
            .iter()
            .map(|s| s.iter().map(|i| i + 1).collect())
            .collect()
    }
}

fn complement(len: usize, subset: &[usize]) -> Vec<usize> {
    (0..len).filter(|i| !subset.contains(i)).collect()
}

fn greedy_selection(
    c: &ChainComplex,
    mut column_order: impl FnMut(usize) -> Vec<usize>,
) -> Result<MinorSelection> {
    let sizes = sigma_sizes(&c.dims)?;
    let p = c.dims.len();
    let mut prev: Vec<usize> = Vec::new();
    let mut sigmas = Vec::with_capacity(p.saturating_sub(2));
    for (i, d) in c.diffs.iter().enumerate() {
        let rows = complement(c.dims[i], &prev);
        let need = sizes[i + 1];
        debug_assert_eq!(rows.len(), need);
        let all_cols: Vec<usize> = (0..d.cols()).collect();
        let sub = d.submatrix(&rows, &all_cols);
        let mut pivots = sub.pivot_columns_in_order(&column_order(d.cols()));
        if pivots.len() < need {
            return Err(Error::Degenerate { stage: i + 1 });
        }
        pivots.sort_unstable();
        if i + 2 < p {
            sigmas.push(pivots.clone());
        }
        prev = pivots;
    }
    Ok(MinorSelection { sigmas })
}

/// Picks subsets whose denominator minors are all nonzero by sweeping the
/// differentials left to right: the columns `σ_{i+1}` are the first pivot
/// columns of `d_i` restricted to the rows `σ̃_i`.
pub fn select_minors(c: &ChainComplex) -> Result<MinorSelection> {
    greedy_selection(c, |cols| (0..cols).collect())
}

/// Same sweep with a seeded random column scan order at every stage.
pub fn select_minors_shuffled(c: &ChainComplex, seed: u64) -> Result<MinorSelection> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    greedy_selection(c, |cols| {
        let mut order: Vec<usize> = (0..cols).collect();
        order.shuffle(&mut rng);
        order
    })
}

/// Every admissible choice of `σ_2, ..., σ_{p-1}` with the right sizes,
/// regardless of whether its minors vanish.
pub fn enumerate_selections(dims: &[usize]) -> Result<Vec<MinorSelection>> {
    let sizes = sigma_sizes(dims)?;
    let p = dims.len();
    let mut out = vec![Vec::new()];
    for i in 1..p.saturating_sub(1) {
        let choices = crate::koszul::subsets_of(dims[i], sizes[i]);
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Vec<usize>>| {
                choices.iter().map(move |s| {
                    let mut v = prefix.clone();
                    v.push(s.clone());
                    v
                })
            })
            .collect();
    }
    Ok(out
        .into_iter()
        .map(|sigmas| MinorSelection { sigmas })
        .collect())
}

/// The minors `M_1, ..., M_{p-1}` of a selection: `M_i` sits in rows
/// `σ̃_i` and columns `σ_{i+1}` of `d_i`.
pub fn selection_minors(c: &ChainComplex, sel: &MinorSelection) -> Result<Vec<Rat>> {
    let sizes = sigma_sizes(&c.dims)?;
    let p = c.dims.len();
    if sel.sigmas.len() != p.saturating_sub(2) {
        return Err(Error::InvalidInput(format!(
            "a {p}-term complex needs {} subsets, got {}",
            p.saturating_sub(2),
            sel.sigmas.len()
        )));
    }
    for (k, s) in sel.sigmas.iter().enumerate() {
        let index = k + 2;
        if s.len() != sizes[index - 1] {
            return Err(Error::SelectionSize {
                index,
                expected: sizes[index - 1],
                got: s.len(),
            });
        }
        if s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&j| j >= c.dims[index - 1]) {
            return Err(Error::InvalidInput(format!(
                "σ{index} must be sorted distinct indices below {}",
                c.dims[index - 1]
            )));
        }
    }
    let empty = Vec::new();
    (0..c.diffs.len())
        .map(|i| {
            let sigma_i = if i == 0 { &empty } else { &sel.sigmas[i - 1] };
            let rows = complement(c.dims[i], sigma_i);
            let cols: Vec<usize> = if i + 2 < p {
                sel.sigmas[i].clone()
            } else {
                (0..c.dims[i + 1]).collect()
            };
            c.diffs[i].minor(&rows, &cols)
        })
        .collect()
}

/// `DET = Π M_i^{(-1)^{p+i+1}}`: the rightmost minor is in the numerator and
/// the exponents alternate leftwards. Defined up to sign.
pub fn det_complex(c: &ChainComplex, sel: &MinorSelection) -> Result<Rat> {
    let minors = selection_minors(c, sel)?;
    let p = c.dims.len();
    let mut num = Rat::one();
    let mut den = Rat::one();
    for (k, m) in minors.into_iter().enumerate() {
        let i = k + 1;
        if (p + i + 1).is_multiple_of(2) {
            num *= m;
        } else {
            if m.is_zero() {
                return Err(Error::ZeroDenominator { index: i });
            }
            den *= m;
        }
    }
    Ok(num / den)
}

/// Total degree of DET in the matrix entries:
/// `Σ_{i=1}^{p-1} i (-1)^{i-1} l_{p-i}`.
pub fn det_degree(dims: &[usize]) -> Result<i64> {
    sigma_sizes(dims)?;
    let p = dims.len();
    Ok((1..p)
        .map(|i| {
            let term = (i * dims[p - i - 1]) as i64;
            if i % 2 == 1 {
                term
            } else {
                -term
            }
        })
        .sum())
}
