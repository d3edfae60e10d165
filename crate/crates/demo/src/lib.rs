//! WebAssembly bindings for the browser demo in `www/`.
//!
//! The plain functions return `Result<_, String>` and are tested natively;
//! the `#[wasm_bindgen]` wrappers only convert errors into JS values.

use fermat_core::algebra::cplx;
use fermat_core::families::{draw, CaseLabel};
use fermat_core::parser::{parse_manifest, print_manifest, ManifestDocument};
use fermat_core::systems::{residual_at, verify, VerifyOptions};
use wasm_bindgen::prelude::*;

/// Every case label, space separated.
pub fn labels() -> String {
    CaseLabel::all()
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Draws a solution for `label` and returns its manifest text, with the
/// enforced relations listed in the header comments.
pub fn construct(label: &str, seed: u64) -> Result<String, String> {
    let label: CaseLabel = label.parse().map_err(|e| format!("{e}"))?;
    let c = draw(label, seed).map_err(|e| e.to_string())?;
    let mut doc = ManifestDocument::new(c.manifest.clone());
    doc.comments.push(format!("{label}, parameter seed {seed}"));
    doc.comments.extend(c.relation_lines());
    Ok(print_manifest(&doc))
}

/// Verifies manifest text and returns the report text.
pub fn verify_text(text: &str) -> Result<String, String> {
    let doc = parse_manifest(text).map_err(|e| e.to_string())?;
    let report = verify(&doc.manifest, &doc.options(&VerifyOptions::default()))
        .map_err(|e| e.to_string())?;
    Ok(report.to_text())
}

/// `log10` of the relative residual of one equation on a `grid x grid`
/// lattice in the `z1` plane, `|Re z1|, |Im z1| <= radius`, other
/// coordinates zero. Row-major with `Im z1` decreasing; overflowing points
/// are `NaN`.
pub fn field(text: &str, equation: usize, grid: usize, radius: f64) -> Result<Vec<f64>, String> {
    if grid == 0 || grid > 512 {
        return Err("grid must be between 1 and 512".into());
    }
    let doc = parse_manifest(text).map_err(|e| e.to_string())?;
    let m = &doc.manifest;
    let step = if grid == 1 {
        0.0
    } else {
        2.0 * radius / (grid - 1) as f64
    };
    let mut z = vec![cplx(0.0, 0.0); m.dim];
    let mut out = Vec::with_capacity(grid * grid);
    for row in 0..grid {
        for col in 0..grid {
            z[0] = cplx(-radius + col as f64 * step, radius - row as f64 * step);
            out.push(match residual_at(m, equation, &z) {
                Ok(r) => r.max(1e-18).log10(),
                Err(fermat_core::Error::Overflow { .. }) => f64::NAN,
                Err(e) => return Err(e.to_string()),
            });
        }
    }
    Ok(out)
}

fn js<T>(r: Result<T, String>) -> Result<T, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn case_labels() -> String {
    labels()
}

#[wasm_bindgen]
pub fn construct_case(label: &str, seed: u32) -> Result<String, JsValue> {
    js(construct(label, seed as u64))
}

#[wasm_bindgen]
pub fn verify_manifest(text: &str) -> Result<String, JsValue> {
    js(verify_text(text))
}

#[wasm_bindgen]
pub fn residual_field(
    text: &str,
    equation: usize,
    grid: usize,
    radius: f64,
) -> Result<Vec<f64>, JsValue> {
    js(field(text, equation, grid, radius))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructed_manifest_verifies() {
        let text = construct("t2.iii.c", 7).unwrap();
        assert!(text.contains("e^{L1(c)}"));
        let report = verify_text(&text).unwrap();
        assert!(report.ends_with("result: PASS\n"), "{report}");
    }

    #[test]
    fn unknown_label_is_an_error() {
        assert!(construct("t4.i", 1)
            .unwrap_err()
            .contains("unknown case label"));
    }

    #[test]
    fn field_is_tiny_for_a_solution() {
        let text = construct("t3.even", 3).unwrap();
        let f = field(&text, 1, 9, 0.5).unwrap();
        assert_eq!(f.len(), 81);
        assert!(f.iter().all(|v| *v < -9.0), "{f:?}");
    }

    #[test]
    fn field_shows_the_erratum() {
        let text = fermat_core::fixtures::require("example6_as_printed")
            .unwrap()
            .text;
        let f = field(text, 1, 5, 0.5).unwrap();
        assert!(f.iter().any(|v| *v > -3.0));
    }

    #[test]
    fn bad_grid_rejected() {
        let text = construct("t1.i", 1).unwrap();
        assert!(field(&text, 1, 0, 0.5).is_err());
        assert!(field(&text, 3, 4, 0.5).is_err());
    }
}
