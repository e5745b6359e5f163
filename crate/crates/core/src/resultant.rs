//! Resultants of square homogeneous systems: Sylvester determinants for two
//! variables and determinants of Koszul complexes in general.
//!
//! Values are defined up to sign.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::complex::{
    cohomology, det_complex, select_minors, select_minors_shuffled, CohomologyReport,
    MinorSelection,
};
use crate::error::{Error, Result};
use crate::koszul::{build_complex, euler_char, min_exact_r};
use crate::matrix::{bareiss_det, ExactMatrix};
use crate::poly::{HPoly, PolyMap};
use crate::rat::{denominator_lcm, Rat};

/// Shuffled re-selections tried when the left-to-right sweep fails on a
/// complex that cohomology says is exact.
const RESELECT_ATTEMPTS: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Sylvester,
    Koszul,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Sylvester => "sylvester",
            Method::Koszul => "koszul",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evidence that the Koszul complex is not exact, so the resultant is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degeneracy {
    /// 1-based differential at which no nonzero minor could be found.
    pub stage: usize,
    pub cohomology: CohomologyReport,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultantResult {
    pub value: Rat,
    pub method: Method,
    pub r_used: Option<usize>,
    pub selection: Option<MinorSelection>,
    pub degree_expected: usize,
    pub degeneracy: Option<Degeneracy>,
}

#[derive(Clone, Debug, Default)]
pub struct ResultantOptions {
    pub method: Option<Method>,
    pub big_r: Option<usize>,
}

/// `n · r^{n-1}`, the total degree of the resultant in the coefficients.
pub fn resultant_degree(n: usize, r: usize) -> usize {
    n * r.pow(n as u32 - 1)
}

fn require_binary(p: &HPoly) -> Result<()> {
    if p.nvars() != 2 {
        return Err(Error::Unsupported(format!(
            "Sylvester matrices need 2 variables, got {}",
            p.nvars()
        )));
    }
    Ok(())
}

/// The `2r x 2r` matrix with `r` shifted copies of f's coefficient row
/// `(f_0, ..., f_r)` above `r` shifted copies of g's.
pub fn sylvester_matrix(f: &HPoly, g: &HPoly) -> Result<ExactMatrix> {
    require_binary(f)?;
    require_binary(g)?;
    if f.degree() != g.degree() {
        return Err(Error::InvalidInput(format!(
            "degrees {} and {} differ",
            f.degree(),
            g.degree()
        )));
    }
    let r = f.degree() as usize;
    let mut m = ExactMatrix::zeros(2 * r, 2 * r);
    for (block, p) in [f, g].into_iter().enumerate() {
        let coeffs = p.to_dense();
        for shift in 0..r {
            for (k, c) in coeffs.iter().enumerate() {
                m.set(block * r + shift, shift + k, c.clone());
            }
        }
    }
    Ok(m)
}

pub fn resultant_sylvester(f: &HPoly, g: &HPoly) -> Result<ResultantResult> {
    let m = sylvester_matrix(f, g)?;
    Ok(ResultantResult {
        value: bareiss_det(&m)?,
        method: Method::Sylvester,
        r_used: None,
        selection: None,
        degree_expected: resultant_degree(2, f.degree() as usize),
        degeneracy: None,
    })
}

/// Determinant of the Koszul complex ending in Ω(R,0); `R` defaults to the
/// smallest admissible value `n(r-1)+1`.
///
/// Each polynomial is first scaled to integer coefficients by the lcm `D_i`
/// of its denominators. The determinant of the integral complex must itself
/// be an integer (an `Anomaly` otherwise), and the returned value divides
/// out `Π D_i^{r^{n-1}}`.
pub fn resultant_koszul(f: &PolyMap, big_r: Option<usize>) -> Result<ResultantResult> {
    resultant_koszul_with(f, big_r, SelectionStrategy::Sweep)
}

/// How the minors of the Koszul complex are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectionStrategy {
    /// Left-to-right sweep taking the first pivot columns.
    Sweep,
    /// The same sweep with a seeded random column order.
    Shuffled(u64),
}

pub fn resultant_koszul_with(
    f: &PolyMap,
    big_r: Option<usize>,
    strategy: SelectionStrategy,
) -> Result<ResultantResult> {
    let n = f.nvars();
    let r = f.degree() as usize;
    if r == 0 {
        return Err(Error::InvalidInput("degree-0 systems have no Koszul complex".into()));
    }
    let big_r = big_r.unwrap_or_else(|| min_exact_r(n, r));
    let chi = euler_char(n, r, big_r)?;
    if chi != 0 {
        return Err(Error::NonZeroEuler { chi });
    }

    let mut integral = f.clone();
    let mut clearing = Rat::one();
    let per_equation = r.pow(n as u32 - 1);
    for (i, p) in f.polys().iter().enumerate() {
        let coeffs: Vec<Rat> = p.terms().map(|(_, c)| c.clone()).collect();
        let l = denominator_lcm(&coeffs);
        if l != BigInt::one() {
            let l = Rat::from_integer(l);
            integral = integral.scale_one(i, &l);
            clearing *= num_traits::pow(l, per_equation);
        }
    }

    let complex = build_complex(&integral, big_r)?;
    let degree_expected = resultant_degree(n, r);
    let first_try = match strategy {
        SelectionStrategy::Sweep => select_minors(&complex),
        SelectionStrategy::Shuffled(seed) => select_minors_shuffled(&complex, seed),
    };
    let selection = match first_try {
        Ok(sel) => sel,
        Err(Error::Degenerate { stage }) => {
            let coh = cohomology(&complex);
            if !coh.exact {
                return Ok(ResultantResult {
                    value: Rat::zero(),
                    method: Method::Koszul,
                    r_used: Some(big_r),
                    selection: None,
                    degree_expected,
                    degeneracy: Some(Degeneracy {
                        stage,
                        cohomology: coh,
                    }),
                });
            }
            (1..=RESELECT_ATTEMPTS)
                .find_map(|seed| select_minors_shuffled(&complex, seed).ok())
                .ok_or_else(|| {
                    Error::Anomaly(format!(
                        "exact complex (R={big_r}) but no nonzero minors found after {RESELECT_ATTEMPTS} re-selections"
                    ))
                })?
        }
        Err(e) => return Err(e),
    };
    let det = det_complex(&complex, &selection)?;
    if !det.is_integer() {
        return Err(Error::Anomaly(format!(
            "determinant of an integral Koszul complex is not an integer: {det}"
        )));
    }
    Ok(ResultantResult {
        value: det / clearing,
        method: Method::Koszul,
        r_used: Some(big_r),
        selection: Some(selection),
        degree_expected,
        degeneracy: None,
    })
}

/// Sylvester for two variables unless Koszul is requested (explicitly or by
/// passing `R`); Koszul otherwise.
pub fn resultant(f: &PolyMap, options: &ResultantOptions) -> Result<ResultantResult> {
    let method = options.method.unwrap_or(if f.nvars() == 2 && options.big_r.is_none() {
        Method::Sylvester
    } else {
        Method::Koszul
    });
    match method {
        Method::Sylvester => {
            if options.big_r.is_some() {
                return Err(Error::InvalidInput("R applies to the Koszul method only".into()));
            }
            match f.polys() {
                [p, q] => resultant_sylvester(p, q),
                _ => Err(Error::Unsupported(format!(
                    "Sylvester method needs n = 2, got n = {}",
                    f.nvars()
                ))),
            }
        }
        Method::Koszul => resultant_koszul(f, options.big_r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    fn binary(coeffs: &[i64]) -> HPoly {
        let c: Vec<Rat> = coeffs.iter().map(|&v| rat(v)).collect();
        HPoly::from_dense(2, coeffs.len() as u32 - 1, &c).unwrap()
    }

    fn system(rows: &[&[i64]]) -> PolyMap {
        PolyMap::new(rows.iter().map(|r| binary(r)).collect()).unwrap()
    }

    #[test]
    fn sylvester_layouts() {
        let m = sylvester_matrix(&binary(&[1, 2]), &binary(&[3, 4])).unwrap();
        assert_eq!(m, ExactMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]));
        let m = sylvester_matrix(&binary(&[1, 2, 3]), &binary(&[4, 5, 6])).unwrap();
        assert_eq!(
            m,
            ExactMatrix::from_i64_rows(&[&[1, 2, 3, 0], &[0, 1, 2, 3], &[4, 5, 6, 0], &[0, 4, 5, 6]])
        );
        let m = sylvester_matrix(&binary(&[1, 2, 3, 4]), &binary(&[5, 6, 7, 8])).unwrap();
        assert_eq!(m.row(2), ExactMatrix::from_i64_rows(&[&[0, 0, 1, 2, 3, 4]]).row(0));
        assert_eq!(m.row(3), ExactMatrix::from_i64_rows(&[&[5, 6, 7, 8, 0, 0]]).row(0));
    }

    #[test]
    fn sylvester_values() {
        let r = resultant_sylvester(&binary(&[2, 3]), &binary(&[5, 7])).unwrap();
        assert_eq!(r.value, rat(2 * 7 - 3 * 5));
        let r = resultant_sylvester(&binary(&[1, -3, 2]), &binary(&[1, -7, 12])).unwrap();
        assert_eq!(r.value, rat(12));
        assert_eq!(r.degree_expected, 4);
        let f = binary(&[3, -1, 4, 1]);
        assert_eq!(resultant_sylvester(&f, &f).unwrap().value, rat(0));
    }

    #[test]
    fn sylvester_rejects_three_variables() {
        let p = HPoly::from_dense(3, 1, &[rat(1), rat(0), rat(0)]).unwrap();
        assert!(matches!(resultant_sylvester(&p, &p), Err(Error::Unsupported(_))));
    }

    #[test]
    fn koszul_fixture() {
        let f = system(&[&[1, -3, 2], &[1, -7, 12]]);
        let r = resultant_koszul(&f, None).unwrap();
        assert_eq!(r.r_used, Some(3));
        assert_eq!(r.value.clone() * r.value, rat(144));
        assert!(matches!(resultant_koszul(&f, Some(2)), Err(Error::NonZeroEuler { chi: 1 })));
    }

    #[test]
    fn koszul_three_term_linear() {
        let f = system(&[&[2, 3], &[5, 7]]);
        for big_r in 1..=4 {
            let r = resultant_koszul(&f, Some(big_r)).unwrap();
            assert_eq!(r.value.clone() * r.value, rat(1), "R={big_r}");
        }
    }

    #[test]
    fn koszul_rational_coefficients() {
        let f = PolyMap::from_dense(
            2,
            2,
            &[vec![ratio(1, 2), rat(-3), rat(2)], vec![rat(1), ratio(-7, 3), rat(12)]],
        )
        .unwrap();
        let exact = resultant_sylvester(&f.polys()[0], &f.polys()[1]).unwrap().value;
        let k = resultant_koszul(&f, Some(4)).unwrap().value;
        assert_eq!(k.clone() * k, exact.clone() * exact);
    }

    #[test]
    fn degree_formula() {
        assert_eq!(resultant_degree(2, 2), 4);
        assert_eq!(resultant_degree(3, 2), 12);
        for n in 1..6 {
            assert_eq!(resultant_degree(n, 1), n);
        }
    }

    #[test]
    fn dispatch() {
        let f = system(&[&[1, 0, 0, 1], &[0, 1, 1, 0]]);
        let r = resultant(&f, &ResultantOptions::default()).unwrap();
        assert_eq!(r.method, Method::Sylvester);
        assert_eq!(r.degree_expected, 6);
        let k = resultant(
            &f,
            &ResultantOptions {
                method: Some(Method::Koszul),
                big_r: None,
            },
        )
        .unwrap();
        assert_eq!(k.value.clone() * k.value, r.value.clone() * r.value);
    }

    #[test]
    fn monomial_system_has_unit_resultant() {
        let polys = (0..3)
            .map(|i| {
                let mut e = vec![0; 3];
                e[i] = 2;
                HPoly::new(3, 2, [(crate::poly::Monomial::new(e), rat(1))]).unwrap()
            })
            .collect();
        let f = PolyMap::new(polys).unwrap();
        let r = resultant(&f, &ResultantOptions::default()).unwrap();
        assert_eq!(r.method, Method::Koszul);
        assert_eq!(r.r_used, Some(4));
        assert_eq!(r.degree_expected, 12);
        assert_eq!(r.value.clone() * r.value, rat(1));
    }
}
