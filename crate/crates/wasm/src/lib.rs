//! Browser bindings: generate an instance, compute homology, solve it.

use homchain::gadgets::{gen_grid, gen_sat_complex, SatInstance};
use homchain::homology::homology;
use homchain::io::ComplexDocument;
use homchain::solver::{solve_obcp, solve_ohcp, solve_relative_obcp, verify_certificate, SolveOptions, Solved};
use wasm_bindgen::prelude::*;

fn text_err(e: homchain::Error) -> String {
    e.to_string()
}

/// Grid document for `n`, or a SAT gadget document when `sat` is non-empty.
pub fn generate(n: usize, sat: &str) -> Result<String, String> {
    if sat.trim().is_empty() {
        let g = gen_grid(n).map_err(text_err)?;
        let doc = ComplexDocument::new(g.complex)
            .with_chain("b", g.input)
            .with_subcomplex("A", g.subcomplex)
            .with_coords(g.coords)
            .with_meta("problem", "relative-obcp")
            .with_meta("dim", 1);
        return Ok(doc.to_json());
    }
    let sat = SatInstance::parse(sat).map_err(text_err)?;
    let g = gen_sat_complex(&sat).map_err(text_err)?;
    let doc = ComplexDocument::new(g.complex)
        .with_weights(g.weights)
        .with_chain("b", g.input)
        .with_meta("problem", "obcp")
        .with_meta("dim", 2)
        .with_meta("threshold", g.threshold.to_string());
    Ok(doc.to_json())
}

pub fn homology_text(doc: &str) -> Result<String, String> {
    let doc = ComplexDocument::from_json(doc).map_err(text_err)?;
    let x = &doc.complex;
    let mut out = String::new();
    for n in 0..=x.dim() {
        out.push_str(&format!("H{n} = {}\n", homology(x, n).map_err(text_err)?));
    }
    Ok(out)
}

/// Solves the problem named in the document's metadata.
pub fn solve_text(doc: &str) -> Result<String, String> {
    let doc = ComplexDocument::from_json(doc).map_err(text_err)?;
    let problem = doc.metadata.get("problem").and_then(|v| v.as_str()).unwrap_or("obcp").to_string();
    let n = doc.metadata.get("dim").and_then(|v| v.as_u64()).ok_or("document has no dim metadata")? as usize;
    if n > doc.complex.dim() {
        return Err(format!("dimension {n} exceeds the complex"));
    }
    let x = &doc.complex;
    let w = doc.weights_or_unit(n);
    let opts = SolveOptions::default();
    let (source, sub, solved) = match problem.as_str() {
        "ohcp" => {
            let a = doc.chain("a").map_err(text_err)?;
            (a, None, Solved::Optimal(solve_ohcp(x, &w, a, n, &opts).map_err(text_err)?))
        }
        "relative-obcp" => {
            let b = doc.chain("b").map_err(text_err)?;
            let a = doc.subcomplex("A").map_err(text_err)?;
            (b, Some(a), solve_relative_obcp(x, a, &w, b, n, &opts).map_err(text_err)?)
        }
        _ => {
            let b = doc.chain("b").map_err(text_err)?;
            (b, None, solve_obcp(x, &w, b, n, &opts).map_err(text_err)?)
        }
    };
    let c = match solved {
        Solved::Optimal(c) => c,
        Solved::Infeasible => return Ok("infeasible: not a boundary\n".into()),
    };
    let ok = verify_certificate(x, sub, source, &c).map_err(text_err)?;
    let mut out = format!(
        "{problem}: optimum {}, {}, {} simplices, certificate {}\n",
        c.norm,
        if c.integral { "integral" } else { "fractional" },
        c.chain.len(),
        if ok { "verified" } else { "FAILED" }
    );
    if let Some(t) = doc.meta_rational("threshold") {
        out.push_str(&format!("{} (threshold {t})\n", if c.meets(&t) { "YES" } else { "NO" }));
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn generate_instance(n: usize, sat: &str) -> Result<String, JsValue> {
    generate(n, sat).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn homology_groups(doc: &str) -> Result<String, JsValue> {
    homology_text(doc).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn solve_instance(doc: &str) -> Result<String, JsValue> {
    solve_text(doc).map_err(|e| JsValue::from_str(&e))
}
