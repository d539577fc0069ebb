use std::path::{Path, PathBuf};
use std::process::ExitCode;

use homchain::complex::check_manifold;
use homchain::gadgets::{
    gen_cone_ohcp, gen_cube_knot, gen_grid, gen_moebius_cube, gen_sat_complex, solid_torus, thickened_torus, Fixture,
    GadgetInstance, Literal, SatInstance,
};
use homchain::io::ComplexDocument;
use homchain::Subcomplex;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::{read_text, write_text, CliError, CliResult};
use crate::GenKind;

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sat_doc(g: GadgetInstance, chain: &str, problem: &str) -> ComplexDocument {
    ComplexDocument::new(g.complex)
        .with_weights(g.weights)
        .with_chain(chain, g.input)
        .with_meta("problem", problem)
        .with_meta("dim", 2)
        .with_meta("threshold", g.threshold.to_string())
}

fn fixture_doc(f: Fixture) -> ComplexDocument {
    let boundary = f
        .boundary
        .clone()
        .or_else(|| check_manifold(&f.complex).boundary)
        .unwrap_or_else(|| Subcomplex::empty(&f.complex));
    let mut doc = ComplexDocument::new(f.complex).with_subcomplex("boundary", boundary);
    if let Some(c) = f.coords {
        doc = doc.with_coords(c);
    }
    doc
}

fn parse_corners(text: &str) -> Result<Vec<[usize; 3]>, CliError> {
    let mut corners = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::input(format!("line {}: {e}", i + 1)))?;
        match nums[..] {
            [x, y, z] => corners.push([x, y, z]),
            _ => return Err(CliError::input(format!("line {}: expected three coordinates", i + 1))),
        }
    }
    Ok(corners)
}

pub fn random_sat(vars: usize, clauses: usize, seed: u64) -> Result<SatInstance, CliError> {
    if vars < 2 && clauses > 0 {
        return Err(CliError::input("need at least 2 variables for a clause of 3 distinct literals"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cs = (0..clauses)
        .map(|_| {
            let idx = sample(&mut rng, 2 * vars, 3);
            let lit = |i: usize| if i % 2 == 1 { Literal::neg(i / 2) } else { Literal::pos(i / 2) };
            let mut c = [lit(idx.index(0)), lit(idx.index(1)), lit(idx.index(2))];
            if rng.gen_bool(0.5) {
                c.swap(0, 1);
            }
            c
        })
        .collect();
    Ok(SatInstance::new(vars, cs)?)
}

pub fn gen(kind: GenKind, out: Option<PathBuf>) -> CliResult {
    let out = out.as_deref();
    let doc = match kind {
        GenKind::Grid { n } => {
            let g = gen_grid(n)?;
            ComplexDocument::new(g.complex)
                .with_chain("b", g.input)
                .with_subcomplex("A", g.subcomplex)
                .with_subcomplex("L", g.left)
                .with_subcomplex("R", g.right)
                .with_coords(g.coords)
                .with_meta("problem", "relative-obcp")
                .with_meta("dim", 1)
                .with_meta("threshold", n.to_string())
        }
        GenKind::Sat { file } => {
            let sat = SatInstance::parse(&read_text(&file)?)?;
            sat_doc(gen_sat_complex(&sat)?, "b", "obcp")
        }
        GenKind::Cone { file } => {
            let sat = SatInstance::parse(&read_text(&file)?)?;
            sat_doc(gen_cone_ohcp(&sat)?, "a", "ohcp")
        }
        GenKind::CubeKnot { n, cyclefile } => {
            let corners = parse_corners(&read_text(&cyclefile)?)?;
            let k = gen_cube_knot(n, &corners)?;
            let mut doc = ComplexDocument::new(k.complex)
                .with_weights(k.weights)
                .with_chain("b", k.input)
                .with_subcomplex("boundary", k.boundary)
                .with_coords(k.coords)
                .with_meta("problem", "obcp")
                .with_meta("dim", 2)
                .with_meta("curve", "b");
            for (key, value) in k.metadata {
                doc = doc.with_meta(&key, value);
            }
            doc
        }
        GenKind::Moebius => {
            let f = gen_moebius_cube()?;
            ComplexDocument::new(f.complex)
                .with_chain("b", f.input)
                .with_subcomplex("strip", f.strip_subcomplex)
                .with_coords(f.coords)
                .with_meta("problem", "obcp")
                .with_meta("dim", 2)
        }
        GenKind::SolidTorus => fixture_doc(solid_torus()),
        GenKind::ThickenedTorus => fixture_doc(thickened_torus()),
        GenKind::RandomSat { vars, clauses, seed } => {
            emit(out, &random_sat(vars, clauses, seed)?.to_string())?;
            return Ok(ExitCode::SUCCESS);
        }
    };
    emit(out, &doc.to_json())?;
    Ok(ExitCode::SUCCESS)
}
