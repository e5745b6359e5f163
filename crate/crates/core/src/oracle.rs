//! Independent checks: seeded random systems and complexes, systems with a
//! planted common root, the floating-point Poisson product for two
//! variables, and a driver that runs every method on one system.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::koszul::{euler_char, min_exact_r};
use crate::matrix::ExactMatrix;
use crate::poly::{monomials_of_degree, HPoly, PolyMap};
use crate::rat::{to_f64, Rat};
use crate::resultant::{
    resultant_koszul_with, resultant_sylvester, ResultantResult, SelectionStrategy,
};

/// Coefficient bound used for the random part of planted systems.
pub const PLANT_BOUND: i64 = 10;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_rat(rng: &mut ChaCha8Rng, bound: i64) -> Rat {
    Rat::from_integer(rng.gen_range(-bound..=bound).into())
}

/// Square `n|r` system with integer coefficients uniform in `[-bound, bound]`.
pub fn random_system(n: usize, r: usize, bound: i64, seed: u64) -> PolyMap {
    let mut rng = rng(seed);
    let size = monomials_of_degree(n, r as u32).len();
    let rows: Vec<Vec<Rat>> = (0..n)
        .map(|_| (0..size).map(|_| random_rat(&mut rng, bound)).collect())
        .collect();
    PolyMap::from_dense(n, r as u32, &rows).expect("dense rows have basis length")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantSpec {
    pub n: usize,
    pub r: usize,
    pub root: Vec<Rat>,
    pub seed: u64,
}

/// A random system adjusted so that every polynomial vanishes at
/// `spec.root`. One coefficient per polynomial is shifted, on a monomial
/// chosen at random among those not vanishing at the root.
pub fn plant_common_root(spec: &PlantSpec) -> Result<PolyMap> {
    if spec.root.len() != spec.n {
        return Err(Error::DimensionMismatch {
            expected: spec.n,
            got: spec.root.len(),
        });
    }
    if spec.root.iter().all(Zero::is_zero) {
        return Err(Error::InvalidInput("planted root must be nonzero".into()));
    }
    let mut rng = rng(spec.seed);
    let basis = monomials_of_degree(spec.n, spec.r as u32);
    let values: Vec<Rat> = basis.iter().map(|m| m.eval(&spec.root)).collect();
    let adjustable: Vec<usize> = (0..basis.len()).filter(|&i| !values[i].is_zero()).collect();
    let mut rows = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let mut coeffs: Vec<Rat> = (0..basis.len())
            .map(|_| random_rat(&mut rng, PLANT_BOUND))
            .collect();
        let at_root: Rat = coeffs.iter().zip(&values).map(|(c, v)| c * v).sum();
        let k = adjustable[rng.gen_range(0..adjustable.len())];
        coeffs[k] -= at_root / &values[k];
        rows.push(coeffs);
    }
    let f = PolyMap::from_dense(spec.n, spec.r as u32, &rows)?;
    let residual = f.eval(&spec.root)?;
    if residual.iter().any(|v| !v.is_zero()) {
        return Err(Error::Anomaly("planted root is not a root".into()));
    }
    Ok(f)
}

fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> ExactMatrix {
    let entries = (0..rows * cols).map(|_| random_rat(rng, bound)).collect();
    ExactMatrix::new(rows, cols, entries).expect("sized")
}

fn random_full_row_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> ExactMatrix {
    loop {
        let m = random_int_matrix(rng, rows, cols, bound);
        if m.rank() == rows {
            return m;
        }
    }
}

/// Random nilpotent complex with minor sizes `ks = (k_1, ..., k_{p-1})`, so
/// `dims = (k_1, k_1+k_2, ..., k_{p-2}+k_{p-1}, k_{p-1})`.
///
/// Each differential is `K · B` with `K` a kernel basis of the previous one
/// and `B` random of full row rank, which makes the complex exact. With
/// `deficient = Some(i)` the `B` factor of `d_i` (1-based) loses one rank,
/// so the complex is nilpotent but not exact.
pub fn random_complex(
    ks: &[usize],
    bound: i64,
    seed: u64,
    deficient: Option<usize>,
) -> Result<ChainComplex> {
    if ks.is_empty() || ks.contains(&0) {
        return Err(Error::InvalidInput(format!("minor sizes must be positive: {ks:?}")));
    }
    let mut rng = rng(seed);
    let p = ks.len() + 1;
    let mut dims = Vec::with_capacity(p);
    dims.push(ks[0]);
    for w in ks.windows(2) {
        dims.push(w[0] + w[1]);
    }
    dims.push(ks[ks.len() - 1]);

    let mut diffs: Vec<ExactMatrix> = Vec::with_capacity(p - 1);
    for (i, &k) in ks.iter().enumerate() {
        let cols = dims[i + 1];
        let mut b = random_full_row_rank(&mut rng, k, cols, bound);
        if deficient == Some(i + 1) {
            let mut rows = b.to_rows();
            let copy = if k > 1 {
                rows[0].clone()
            } else {
                vec![Rat::zero(); cols]
            };
            rows[k - 1] = copy;
            b = ExactMatrix::from_rows(rows)?;
        }
        let d = match diffs.last() {
            None => b,
            Some(prev) => {
                let kernel = prev.nullspace();
                let columns: Vec<Vec<Rat>> = kernel.into_iter().take(k).collect();
                if columns.len() < k {
                    return Err(Error::Anomaly("kernel smaller than requested".into()));
                }
                let kmat = ExactMatrix::from_rows(columns)?.transpose();
                kmat.mul(&b)?
            }
        };
        diffs.push(d);
    }
    ChainComplex::new(dims, diffs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PoissonStatus {
    Match { relative_error: f64 },
    Mismatch { relative_error: f64, reason: String },
    Inconclusive { reason: String },
    Unsupported { reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoissonOutcome {
    pub estimate: Option<Complex64>,
    pub exact: Rat,
    pub status: PoissonStatus,
}

fn horner(coeffs: &[f64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::zero(), |acc, &c| acc * x + Complex64::new(c, 0.0))
}

/// Roots of `c_0 x^r + ... + c_r` (with `c_0 != 0`) as eigenvalues of the
/// companion matrix, each polished by a few Newton steps.
pub fn polynomial_roots(coeffs: &[f64]) -> Option<Vec<Complex64>> {
    let r = coeffs.len() - 1;
    if r == 0 {
        return Some(Vec::new());
    }
    let lead = coeffs[0];
    let mut companion = DMatrix::<f64>::zeros(r, r);
    for j in 0..r {
        companion[(0, j)] = -coeffs[j + 1] / lead;
    }
    for i in 1..r {
        companion[(i, i - 1)] = 1.0;
    }
    let schur = Schur::try_new(companion, f64::EPSILON, 10_000)?;
    let derivative: Vec<f64> = coeffs[..r]
        .iter()
        .enumerate()
        .map(|(k, c)| c * (r - k) as f64)
        .collect();
    let roots = schur
        .complex_eigenvalues()
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..8 {
                let dz = horner(&derivative, z);
                if dz.norm() == 0.0 {
                    break;
                }
                let next = z - horner(coeffs, z) / dz;
                if !next.is_finite() || horner(coeffs, next).norm() >= horner(coeffs, z).norm() {
                    break;
                }
                z = next;
            }
            z
        })
        .collect();
    Some(roots)
}

/// `(-1)^{r^2} g_0^r Π f(β_i, 1)` over the roots `β_i` of `g(x, 1)`,
/// compared with the exact Sylvester determinant.
pub fn poisson_product_2(f: &HPoly, g: &HPoly, tol: f64) -> Result<PoissonOutcome> {
    let exact = resultant_sylvester(f, g)?.value;
    let gc: Vec<f64> = g.to_dense().iter().map(to_f64).collect();
    let fc: Vec<f64> = f.to_dense().iter().map(to_f64).collect();
    let r = g.degree() as i32;
    if gc[0] == 0.0 {
        return Ok(PoissonOutcome {
            estimate: None,
            exact,
            status: PoissonStatus::Unsupported {
                reason: "leading coefficient g0 is zero".into(),
            },
        });
    }
    let Some(roots) = polynomial_roots(&gc) else {
        return Ok(PoissonOutcome {
            estimate: None,
            exact,
            status: PoissonStatus::Inconclusive {
                reason: "companion eigenvalue iteration did not converge".into(),
            },
        });
    };
    let product = roots
        .iter()
        .fold(Complex64::one(), |acc, &beta| acc * horner(&fc, beta));
    let sign = if (r * r) % 2 == 0 { 1.0 } else { -1.0 };
    let estimate = product * (sign * gc[0].powi(r));
    let exact_f = to_f64(&exact);
    let scale = exact_f.abs().max(1.0);
    let relative_error = (estimate.re - exact_f).abs() / scale;
    let status = if estimate.im.abs() > tol * (1.0 + estimate.norm()) {
        PoissonStatus::Mismatch {
            relative_error,
            reason: format!("imaginary part {:e} above tolerance", estimate.im),
        }
    } else if relative_error <= tol {
        PoissonStatus::Match { relative_error }
    } else {
        PoissonStatus::Mismatch {
            relative_error,
            reason: "real part differs from the Sylvester determinant".into(),
        }
    };
    Ok(PoissonOutcome {
        estimate: Some(estimate),
        exact,
        status,
    })
}

#[derive(Clone, Debug)]
pub struct CrossCheckOptions {
    pub seed: u64,
    pub tol: f64,
    /// Number of admissible `R` values to run the Koszul method at.
    pub koszul_levels: usize,
}

impl Default for CrossCheckOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            tol: 1e-9,
            koszul_levels: 2,
        }
    }
}

/// One method's result inside a cross-check.
#[derive(Clone, Debug, Serialize)]
pub struct MethodValue {
    pub method: String,
    /// Exact value as `p/q`, absent for the floating-point oracle or on error.
    pub value: Option<String>,
    pub approx: Option<f64>,
    pub error: Option<String>,
    pub degenerate: bool,
}

/// Agreement between two methods, compared in absolute value.
#[derive(Clone, Debug, Serialize)]
pub struct PairRecord {
    pub a: String,
    pub b: String,
    pub a_value: Option<String>,
    pub b_value: Option<String>,
    pub agree: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckReport {
    pub n: usize,
    pub r: usize,
    pub methods: Vec<MethodValue>,
    pub pairs: Vec<PairRecord>,
}

impl CrossCheckReport {
    pub fn all_agree(&self) -> bool {
        self.methods.iter().all(|m| m.error.is_none()) && self.pairs.iter().all(|p| p.agree)
    }

    /// Human-readable table.
    pub fn summary(&self) -> String {
        let mut out = format!("cross-check {}|{}\n", self.n, self.r);
        for m in &self.methods {
            let shown = match (&m.value, m.approx, &m.error) {
                (_, _, Some(e)) => format!("error: {e}"),
                (Some(v), _, _) => v.clone(),
                (None, Some(x), _) => format!("{x:.12e}"),
                _ => "-".into(),
            };
            let tag = if m.degenerate { "  (degenerate)" } else { "" };
            out.push_str(&format!("  {:<24} {}{}\n", m.method, shown, tag));
        }
        for p in &self.pairs {
            out.push_str(&format!(
                "  {:<24} vs {:<24} {}\n",
                p.a,
                p.b,
                if p.agree { "agree" } else { "DISAGREE" }
            ));
        }
        let verdict = if self.all_agree() { "all methods agree" } else { "disagreement found" };
        out.push_str(verdict);
        out.push('\n');
        out
    }
}

/// Runs every applicable method on `f` and compares them pairwise.
pub fn cross_check(f: &PolyMap, options: &CrossCheckOptions) -> CrossCheckReport {
    let n = f.nvars();
    let r = f.degree() as usize;
    let mut exact: Vec<(String, std::result::Result<ResultantResult, Error>)> = Vec::new();

    if n == 2 {
        exact.push((
            "sylvester".into(),
            resultant_sylvester(&f.polys()[0], &f.polys()[1]),
        ));
    }
    if r >= 1 {
        let first = min_exact_r(n, r);
        let levels: Vec<usize> = (first..)
            .filter(|&big_r| euler_char(n, r, big_r) == Ok(0))
            .take(options.koszul_levels.max(1))
            .collect();
        for &big_r in &levels {
            exact.push((
                format!("koszul R={big_r}"),
                resultant_koszul_with(f, Some(big_r), SelectionStrategy::Sweep),
            ));
        }
        exact.push((
            format!("koszul R={first} shuffled"),
            resultant_koszul_with(f, Some(first), SelectionStrategy::Shuffled(options.seed)),
        ));
    }

    let mut methods: Vec<MethodValue> = exact
        .iter()
        .map(|(name, res)| match res {
            Ok(v) => MethodValue {
                method: name.clone(),
                value: Some(v.value.to_string()),
                approx: None,
                error: None,
                degenerate: v.degeneracy.is_some(),
            },
            Err(e) => MethodValue {
                method: name.clone(),
                value: None,
                approx: None,
                error: Some(e.to_string()),
                degenerate: false,
            },
        })
        .collect();

    let mut pairs = Vec::new();
    for i in 0..exact.len() {
        for j in i + 1..exact.len() {
            let (a, ra) = &exact[i];
            let (b, rb) = &exact[j];
            let (agree, detail) = match (ra, rb) {
                (Ok(x), Ok(y)) => (x.value.abs() == y.value.abs(), None),
                _ => (false, Some("method failed".to_string())),
            };
            pairs.push(PairRecord {
                a: a.clone(),
                b: b.clone(),
                a_value: methods[i].value.clone(),
                b_value: methods[j].value.clone(),
                agree,
                detail,
            });
        }
    }

    if n == 2 {
        let outcome = poisson_product_2(&f.polys()[0], &f.polys()[1], options.tol);
        let (approx, error, agree, detail) = match outcome {
            Ok(o) => {
                let approx = o.estimate.map(|z| z.re);
                match o.status {
                    PoissonStatus::Match { relative_error } => {
                        (approx, None, true, Some(format!("relative error {relative_error:e}")))
                    }
                    PoissonStatus::Mismatch { relative_error, reason } => (
                        approx,
                        None,
                        false,
                        Some(format!("{reason}; relative error {relative_error:e}")),
                    ),
                    // the oracle is advisory: an inapplicable oracle is not a disagreement
                    PoissonStatus::Inconclusive { reason } | PoissonStatus::Unsupported { reason } => {
                        (approx, None, true, Some(format!("oracle skipped: {reason}")))
                    }
                }
            }
            Err(e) => (None, Some(e.to_string()), false, None),
        };
        methods.push(MethodValue {
            method: "poisson".into(),
            value: None,
            approx,
            error,
            degenerate: false,
        });
        pairs.push(PairRecord {
            a: "sylvester".into(),
            b: "poisson".into(),
            a_value: methods[0].value.clone(),
            b_value: approx.map(|x| format!("{x:e}")),
            agree,
            detail,
        });
    }

    CrossCheckReport {
        n,
        r,
        methods,
        pairs,
    }
}
