//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes a graph spec as JSON (the same shape the CLI accepts
//! in spec lists, e.g. `{"family":"cycle","n":12,"seed":0}`) and returns a
//! JSON string. The plain functions below carry the logic so they can be
//! tested natively.

use num_rational::Ratio;
use serde::Serialize;
use unravel_core::bounds::{alon_boppana_classic_rhs, lemma_lb3_rhs, theorem8_rhs};
use unravel_core::generators::{generate, GenSpec};
use unravel_core::harness::{converge_table, cover_table};
use unravel_core::spectral::EigenConfig;
use unravel_core::Graph;
use wasm_bindgen::prelude::*;

/// Largest graph the page will build.
pub const MAX_VERTICES: usize = 5000;
pub const MAX_RADIUS: usize = 64;
pub const MAX_WALK_LENGTH: usize = 400;

fn build(spec_json: &str) -> Result<(String, Graph), String> {
    let spec: GenSpec = serde_json::from_str(spec_json).map_err(|e| format!("bad spec: {e}"))?;
    let graph = generate(&spec).map_err(|e| e.to_string())?;
    if graph.vertex_count() > MAX_VERTICES {
        return Err(format!(
            "{} vertices; the demo stops at {MAX_VERTICES}",
            graph.vertex_count()
        ));
    }
    Ok((spec.name(), graph))
}

fn to_json(value: &impl Serialize) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn cover_sequence_json(spec_json: &str, r_max: usize) -> Result<String, String> {
    if !(1..=MAX_RADIUS).contains(&r_max) {
        return Err(format!("r_max must lie in 1..={MAX_RADIUS}"));
    }
    let (id, graph) = build(spec_json)?;
    let table = cover_table(&id, &graph, r_max, 1e-10).map_err(|e| e.to_string())?;
    to_json(&table)
}

#[derive(Serialize)]
struct CurveRow {
    r: usize,
    average_degree: f64,
    robust_degree: f64,
    /// Only for integer `d >= 2`.
    classic: Option<f64>,
}

#[derive(Serialize)]
struct Curves {
    d: f64,
    limit: f64,
    rows: Vec<CurveRow>,
}

/// Bound values for average degree `num / den` and `r = 1..=r_max`.
pub fn bound_curves_json(num: u64, den: u64, r_max: usize) -> Result<String, String> {
    if den == 0 || num < den {
        return Err("the average degree must be at least 1".into());
    }
    if !(1..=MAX_RADIUS).contains(&r_max) {
        return Err(format!("r_max must lie in 1..={MAX_RADIUS}"));
    }
    let d = Ratio::new(num, den);
    let integer = d.is_integer().then(|| d.to_integer() as usize);
    let rows = (1..=r_max)
        .map(|r| {
            Ok(CurveRow {
                r,
                average_degree: lemma_lb3_rhs(d, r).map_err(|e| e.to_string())?,
                robust_degree: theorem8_rhs(d, r).map_err(|e| e.to_string())?,
                classic: integer.and_then(|d| alon_boppana_classic_rhs(d, r).ok()),
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    let d = num as f64 / den as f64;
    to_json(&Curves {
        d,
        limit: 2.0 * (d - 1.0).sqrt(),
        rows,
    })
}

pub fn converge_json(spec_json: &str, vertex: usize, max_length: usize) -> Result<String, String> {
    if !(2..=MAX_WALK_LENGTH).contains(&max_length) {
        return Err(format!("walk length must lie in 2..={MAX_WALK_LENGTH}"));
    }
    let (id, graph) = build(spec_json)?;
    let table = converge_table(&id, &graph, vertex, max_length, &EigenConfig::default())
        .map_err(|e| e.to_string())?;
    to_json(&table)
}

/// Largest unraveled ball for each radius next to the degree-sum bound.
#[wasm_bindgen]
pub fn cover_sequence(spec_json: &str, r_max: usize) -> Result<String, JsError> {
    cover_sequence_json(spec_json, r_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bound_curves(num: u32, den: u32, r_max: usize) -> Result<String, JsError> {
    bound_curves_json(num.into(), den.into(), r_max).map_err(|e| JsError::new(&e))
}

/// Closed-walk growth estimates at `vertex`.
#[wasm_bindgen]
pub fn converge(spec_json: &str, vertex: usize, max_length: usize) -> Result<String, JsError> {
    converge_json(spec_json, vertex, max_length).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn cover_sequence_on_a_cycle() {
        let v = parse(cover_sequence_json(r#"{"family":"cycle","n":20}"#, 4).unwrap());
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 4);
        // The ball is a path on 2r + 1 = 9 vertices.
        let want = 2.0 * (std::f64::consts::PI / 10.0).cos();
        assert!((rows[3]["lower"].as_f64().unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn curves_include_the_classic_form_for_integer_degree() {
        let v = parse(bound_curves_json(3, 1, 3).unwrap());
        let classic = v["rows"][2]["classic"].as_f64().unwrap();
        assert!((classic - (2.0 * (2.0 / 3.0) * 2f64.sqrt() + 1.0 / 3.0)).abs() < 1e-12);
        let v = parse(bound_curves_json(5, 2, 3).unwrap());
        assert!(v["rows"][0]["classic"].is_null());
        assert!(bound_curves_json(1, 2, 3).is_err());
    }

    #[test]
    fn converge_on_petersen() {
        let v = parse(converge_json(r#"{"family":"petersen"}"#, 0, 20).unwrap());
        assert_eq!(v["lambda1"].as_f64().unwrap().round(), 3.0);
        assert_eq!(v["rows"][0]["closed_walks"], "3");
        assert_eq!(v["rows"][1]["closed_walks"], "15");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(cover_sequence_json("{", 3).is_err());
        assert!(cover_sequence_json(r#"{"family":"path","n":6001}"#, 3).is_err());
        assert!(converge_json(r#"{"family":"petersen"}"#, 0, 1).is_err());
    }
}
