use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use koszul_core::complex::selection_minors;
use koszul_core::format::{complex_from_json, complex_to_json, emit_matrix, resultant_to_json, MatrixFormat};
use koszul_core::koszul::{default_var_names, koszul_spec};
use koszul_core::oracle::{cross_check, CrossCheckOptions};
use koszul_core::{
    build_complex, cohomology, det_complex, det_degree, omega_basis, parse_system, render_tower, resultant,
    select_minors, tower, verify_nilpotent, CohomologyReport, Error, Method, Nilpotency, PolyMap,
    ResultantOptions,
};

#[derive(Parser)]
#[command(name = "koszul", version, about = "Exact resultants via Sylvester matrices and Koszul complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resultant of a square system read from a file
    Resultant {
        file: PathBuf,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        /// Degree of the rightmost Koszul space
        #[arg(long = "R")]
        big_r: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Koszul complex utilities
    Koszul {
        #[command(subcommand)]
        command: KoszulCommand,
    },
    /// Chain complexes stored as JSON
    Complex {
        #[command(subcommand)]
        command: ComplexCommand,
    },
    /// Independent checks
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Subcommand)]
enum KoszulCommand {
    /// Dimensions and Euler characteristics of the complexes for n|r
    Tower {
        n: usize,
        r: usize,
        #[arg(long = "max-R")]
        max_r: Option<usize>,
        /// Also print the graded spaces
        #[arg(long)]
        spaces: bool,
    },
    /// Differential matrices of the Koszul complex of a system
    Matrices {
        file: PathBuf,
        #[arg(long = "R")]
        big_r: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Ordered basis of Ω(p,q) in n variables
    Basis { n: usize, p: usize, q: usize },
}

#[derive(Subcommand)]
enum ComplexCommand {
    /// Determinant of an exact complex
    Det { file: PathBuf },
    /// Nilpotency, cohomology and Euler characteristic
    Check { file: PathBuf },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Compare every applicable method on one system
    CrossCheck {
        file: PathBuf,
        /// Seed for the shuffled minor selection
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative tolerance for the floating-point oracle
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// One JSON object per line instead of a table
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Sylvester,
    Koszul,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

enum Failure {
    /// Bad input: unreadable file, parse error, invalid arguments.
    Input(String),
    /// A result that contradicts an invariant of the computation.
    Anomaly(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Anomaly(_) => Failure::Anomaly(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type CliResult = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<PolyMap, Failure> {
    let text = read(path)?;
    let doc = parse_system(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(doc.to_map()?)
}

fn tuple(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn describe_cohomology(rep: &CohomologyReport) -> String {
    format!(
        "χ={}, h={}, {}",
        rep.chi,
        tuple(&rep.h),
        if rep.exact { "exact" } else { "not exact" }
    )
}

fn run_resultant(file: &Path, method: Option<MethodArg>, big_r: Option<usize>, json: bool) -> CliResult {
    let f = load_system(file)?;
    let options = ResultantOptions {
        method: method.map(|m| match m {
            MethodArg::Sylvester => Method::Sylvester,
            MethodArg::Koszul => Method::Koszul,
        }),
        big_r,
    };
    let res = resultant(&f, &options)?;
    if json {
        return Ok(resultant_to_json(&res) + "\n");
    }
    let mut out = format!("resultant: {}\n", res.value);
    out.push_str(&format!("method: {}\n", res.method));
    if let Some(r) = res.r_used {
        out.push_str(&format!("R: {r}\n"));
    }
    out.push_str(&format!("degree: {}\n", res.degree_expected));
    if let Some(sel) = &res.selection {
        for (k, sigma) in sel.one_based().iter().enumerate() {
            out.push_str(&format!("σ{}: {}\n", k + 2, set(sigma)));
        }
    }
    if let Some(d) = &res.degeneracy {
        out.push_str(&format!(
            "degenerate: no nonzero minor at d{}; {}\n",
            d.stage,
            describe_cohomology(&d.cohomology)
        ));
    }
    out.push_str("sign: selection-dependent\n");
    Ok(out)
}

fn set(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn run_tower(n: usize, r: usize, max_r: Option<usize>, spaces: bool) -> CliResult {
    let max_r = max_r.unwrap_or(n * r + 1);
    let rows = tower(n, r, max_r)?;
    Ok(render_tower(n, r, &rows, spaces))
}

fn run_matrices(file: &Path, big_r: usize, format: FormatArg) -> CliResult {
    let f = load_system(file)?;
    let complex = build_complex(&f, big_r)?;
    match format {
        FormatArg::Json => Ok(complex_to_json(&complex) + "\n"),
        FormatArg::Csv => {
            let spec = koszul_spec(f.nvars(), f.degree() as usize, big_r)?;
            let mut out = String::new();
            for (i, d) in complex.diffs().iter().enumerate() {
                let (p0, q0) = spec.terms[i];
                let (p1, q1) = spec.terms[i + 1];
                if i > 0 {
                    out.push('\n');
                }
                out.push_str(&format!(
                    "# d{}: Ω({p0},{q0}) → Ω({p1},{q1}), {}x{}\n",
                    i + 1,
                    d.rows(),
                    d.cols()
                ));
                out.push_str(&emit_matrix(d, MatrixFormat::Csv));
            }
            Ok(out)
        }
    }
}

fn run_basis(n: usize, p: usize, q: usize) -> CliResult {
    let basis = omega_basis(n, p, q);
    let names = default_var_names(n);
    let mut out = format!("Ω({p},{q}) in {n} variables: dimension {}\n", basis.len());
    for i in 0..basis.len() {
        out.push_str(&format!("{}: {}\n", i + 1, basis.describe(i, &names)));
    }
    Ok(out)
}

fn load_complex(file: &Path) -> Result<koszul_core::ChainComplex, Failure> {
    let c = complex_from_json(&read(file)?)?;
    if let Nilpotency::Fails { diff, row, col } = verify_nilpotent(&c) {
        return Err(Failure::Input(format!(
            "not a complex: (d{diff}·d{})[{row},{col}] ≠ 0",
            diff + 1
        )));
    }
    Ok(c)
}

fn run_complex_det(file: &Path) -> CliResult {
    let c = load_complex(file)?;
    let chi = c.euler_char();
    if chi != 0 {
        return Err(Error::NonZeroEuler { chi }.into());
    }
    let degree = det_degree(c.dims())?;
    match select_minors(&c) {
        Ok(sel) => {
            let value = det_complex(&c, &sel)?;
            let minors = selection_minors(&c, &sel)?;
            let mut out = format!("det: {value}\n");
            out.push_str(&format!("dims: {}\n", tuple(c.dims())));
            out.push_str(&format!("degree: {degree}\n"));
            for (k, sigma) in sel.one_based().iter().enumerate() {
                out.push_str(&format!("σ{}: {}\n", k + 2, set(sigma)));
            }
            let shown: Vec<String> = minors.iter().map(ToString::to_string).collect();
            out.push_str(&format!("minors: {}\n", shown.join(", ")));
            Ok(out)
        }
        Err(Error::Degenerate { stage }) => {
            let rep = cohomology(&c);
            Err(Failure::Anomaly(format!(
                "determinant vanishes: no nonzero minor at d{stage}; {}",
                describe_cohomology(&rep)
            )))
        }
        Err(e) => Err(e.into()),
    }
}

fn run_complex_check(file: &Path) -> CliResult {
    let c = load_complex(file)?;
    Ok(format!("nilpotent: ok, {}\n", describe_cohomology(&cohomology(&c))))
}

fn run_cross_check(file: &Path, seed: u64, tol: f64, json: bool) -> CliResult {
    let f = load_system(file)?;
    let report = cross_check(
        &f,
        &CrossCheckOptions {
            seed,
            tol,
            ..CrossCheckOptions::default()
        },
    );
    let out = if json {
        let mut out = String::new();
        for m in &report.methods {
            out.push_str(&serde_json::to_string(m).expect("serializable"));
            out.push('\n');
        }
        for p in &report.pairs {
            out.push_str(&serde_json::to_string(p).expect("serializable"));
            out.push('\n');
        }
        out.push_str(&serde_json::json!({ "all_agree": report.all_agree() }).to_string());
        out.push('\n');
        out
    } else {
        report.summary()
    };
    if report.all_agree() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Anomaly("methods disagree".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Resultant { file, method, big_r, json } => run_resultant(&file, method, big_r, json),
        Command::Koszul { command } => match command {
            KoszulCommand::Tower { n, r, max_r, spaces } => run_tower(n, r, max_r, spaces),
            KoszulCommand::Matrices { file, big_r, format } => run_matrices(&file, big_r, format),
            KoszulCommand::Basis { n, p, q } => run_basis(n, p, q),
        },
        Command::Complex { command } => match command {
            ComplexCommand::Det { file } => run_complex_det(&file),
            ComplexCommand::Check { file } => run_complex_check(&file),
        },
        Command::Oracle { command } => match command {
            OracleCommand::CrossCheck { file, seed, tol, json } => run_cross_check(&file, seed, tol, json),
        },
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Anomaly(msg)) => {
            eprintln!("anomaly: {msg}");
            ExitCode::from(3)
        }
    }
}
