use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use homchain::complex::check_manifold;
use homchain::desingularize::{desingularize_1, desingularize_2};
use homchain::homology::{homology as homology_group, longitude as find_longitude};
use homchain::io::{write_off, ComplexDocument};
use homchain::solver::{
    solve_obcp, solve_ohcp, solve_relative_obcp, verify_certificate, Method, Mode, OptimalChain, SolveOptions, Solved,
};
use homchain::spanning::spanning_area;
use homchain::{Error, Rational, Subcomplex};
use log::info;

use crate::{DesingularizeArgs, ModeArg, Problem, SolveArgs, SpanningArgs};

pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_INTERNAL: u8 = 1;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExhausted { .. } => EXIT_BUDGET,
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        CliError { code, message: e.to_string() }
    }
}

pub type CliResult = Result<ExitCode, CliError>;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn load(path: &Path) -> Result<ComplexDocument, CliError> {
    let text = read_text(path)?;
    ComplexDocument::from_json(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn check_dim(doc: &ComplexDocument, n: usize) -> Result<(), CliError> {
    let hi = doc.complex.dim();
    if n > hi {
        return Err(Error::DimensionOutOfRange { got: n, lo: 0, hi }.into());
    }
    Ok(())
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Lp => "lp",
        Method::Ilp => "ilp",
    }
}

fn report(c: &OptimalChain, verified: bool, threshold: Option<&Rational>) {
    println!(
        "optimum {}, {}, method {}",
        c.norm,
        if c.integral { "integral" } else { "fractional" },
        method_name(c.method)
    );
    println!("relaxation {}, nodes {}, pivots {}", c.relaxation, c.nodes, c.pivots);
    if c.integral {
        println!("support {} simplices", c.chain.len());
        println!("certificate {}", if verified { "verified" } else { "FAILED" });
    } else {
        println!("fractional vertex with {} nonzero entries", c.values.len());
    }
    if let Some(t) = threshold {
        println!("{} (threshold {})", if c.meets(t) { "YES" } else { "NO" }, t);
    }
}

pub fn solve(args: SolveArgs) -> CliResult {
    let doc = load(&args.input)?;
    check_dim(&doc, args.dim)?;
    let source = doc.chain(&args.chain)?.clone();
    let w = doc.weights_or_unit(args.dim);
    let opts = SolveOptions {
        mode: match args.mode {
            ModeArg::Lp => Mode::LpOnly,
            ModeArg::Ilp => Mode::LpThenIlp,
        },
        node_limit: args.node_limit,
    };
    let x = &doc.complex;
    let (solved, sub): (Solved, Option<Subcomplex>) = match args.problem {
        Problem::Ohcp => (Solved::Optimal(solve_ohcp(x, &w, &source, args.dim, &opts)?), None),
        Problem::Obcp => (solve_obcp(x, &w, &source, args.dim, &opts)?, None),
        Problem::RelativeObcp => {
            let name = args
                .subcomplex
                .as_deref()
                .ok_or_else(|| CliError::input("relative-obcp needs --subcomplex"))?;
            let a = doc.subcomplex(name)?.clone();
            (solve_relative_obcp(x, &a, &w, &source, args.dim, &opts)?, Some(a))
        }
    };
    let c = match solved {
        Solved::Optimal(c) => c,
        Solved::Infeasible => {
            println!("infeasible: not a boundary");
            if let Some(t) = &args.threshold {
                println!("NO (threshold {t})");
            }
            return Ok(ExitCode::from(EXIT_INFEASIBLE));
        }
    };
    let verified = c.integral && verify_certificate(x, sub.as_ref(), &source, &c)?;
    info!("solved {:?} in dimension {}", args.problem, args.dim);
    let threshold = args.threshold.clone().or_else(|| doc.meta_rational("threshold"));
    report(&c, verified, threshold.as_ref());
    if let Some(out) = &args.out {
        if !c.integral {
            return Err(CliError::input("--out needs an integral optimum; rerun with --mode ilp"));
        }
        let doc = doc.clone().with_chain("optimal", c.chain.clone()).with_meta("optimum", c.norm.to_string());
        write_text(out, &doc.to_json())?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn desingularize(args: DesingularizeArgs) -> CliResult {
    let doc = load(&args.input)?;
    let c = doc.chain(&args.chain)?.clone();
    check_dim(&doc, c.dim())?;
    match c.dim() {
        1 => {
            let a = match &args.subcomplex {
                Some(name) => doc.subcomplex(name)?.clone(),
                None => Subcomplex::empty(&doc.complex),
            };
            let fam = desingularize_1(&doc.complex, &c, &a)?;
            println!("{} loop(s), {} arc(s)", fam.loops().count(), fam.arcs().count());
            for comp in &fam.components {
                let labels: Vec<String> =
                    comp.vertices.iter().map(|&v| doc.complex.labels()[v].to_string()).collect();
                println!("{} {}", if comp.closed { "loop" } else { "arc " }, labels.join(" "));
            }
        }
        2 => {
            let w = doc.weights_or_unit(2);
            let s = desingularize_2(&doc.complex, &c, Some(&w))?;
            println!(
                "area {}, χ {}, {} component(s)",
                s.area,
                s.stats.euler_characteristic,
                s.stats.components.len()
            );
            println!("component  faces  χ  boundary  genus");
            for (i, k) in s.stats.components.iter().enumerate() {
                println!(
                    "{:>9}  {:>5}  {:>1}  {:>8}  {:>5}",
                    i, k.faces, k.euler_characteristic, k.boundary_curves, k.genus
                );
            }
            if let Some(path) = &args.off {
                let coords = doc.coords.as_ref().ok_or_else(|| CliError::input("--off needs coordinates"))?;
                write_text(path, &write_off(&s, &doc.complex, coords))?;
            }
        }
        d => return Err(CliError::input(format!("cannot desingularize a {d}-chain"))),
    }
    Ok(ExitCode::SUCCESS)
}

pub fn homology(input: PathBuf, dim: Option<usize>) -> CliResult {
    let doc = load(&input)?;
    let dims: Vec<usize> = match dim {
        Some(n) => {
            check_dim(&doc, n)?;
            vec![n]
        }
        None => (0..=doc.complex.dim()).collect(),
    };
    for n in dims {
        println!("H{} = {}", n, homology_group(&doc.complex, n)?);
    }
    Ok(ExitCode::SUCCESS)
}

pub fn longitude(input: PathBuf, out: Option<PathBuf>) -> CliResult {
    let doc = load(&input)?;
    let boundary = match doc.subcomplex("boundary") {
        Ok(b) => b.clone(),
        Err(_) => check_manifold(&doc.complex)
            .boundary
            .ok_or_else(|| CliError::input("complex has no boundary"))?,
    };
    let lambda = find_longitude(&doc.complex, &boundary)?;
    println!("longitude with {} edges", lambda.len());
    for (&e, v) in lambda.iter() {
        let s = doc.complex.simplex(1, e);
        let l = doc.complex.labels();
        println!("{:>3} [{} {}]", v, l[s[0]], l[s[1]]);
    }
    if let Some(out) = &out {
        write_text(out, &doc.clone().with_chain("longitude", lambda).to_json())?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn spanning(args: SpanningArgs) -> CliResult {
    let doc = load(&args.input)?;
    check_dim(&doc, 2)?;
    let curve_name = args.chain.clone().or_else(|| {
        doc.metadata.get("curve").and_then(|v| v.as_str()).map(str::to_string)
    });
    let curve = match &curve_name {
        Some(name) => Some(doc.chain(name)?.clone()),
        None => None,
    };
    let w = doc.weights_or_unit(2);
    let opts = SolveOptions { node_limit: args.node_limit, ..SolveOptions::default() };
    let s = spanning_area(&doc.complex, &w, curve.as_ref(), &opts)?;
    println!(
        "area {}, χ {}, {} component(s), method {}",
        s.area(),
        s.surface.stats.euler_characteristic,
        s.surface.stats.components.len(),
        method_name(s.optimum.method)
    );
    println!(
        "curve {} ({} edges, {} loop(s))",
        curve_name.as_deref().unwrap_or("longitude"),
        s.curve.len(),
        s.curve_loops
    );
    for (i, k) in s.surface.stats.components.iter().enumerate() {
        println!(
            "component {}: {} faces, χ {}, {} boundary curve(s), genus {}",
            i, k.faces, k.euler_characteristic, k.boundary_curves, k.genus
        );
    }
    if let Some(t) = &args.threshold {
        println!("{} (threshold {})", if s.meets(t) { "YES" } else { "NO" }, t);
    }
    if let Some(path) = &args.off {
        let coords = doc.coords.as_ref().ok_or_else(|| CliError::input("--off needs coordinates"))?;
        write_text(path, &write_off(&s.surface, &doc.complex, coords))?;
    }
    if let Some(out) = &args.out {
        let d = doc
            .clone()
            .with_chain("curve", s.curve.clone())
            .with_chain("surface", s.optimum.chain.clone())
            .with_meta("area", s.area().to_string());
        write_text(out, &d.to_json())?;
    }
    Ok(ExitCode::SUCCESS)
}
