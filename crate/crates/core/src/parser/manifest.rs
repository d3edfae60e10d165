//! Flat `key=value` manifest files describing one candidate solution.
//!
//! ```text
//! # comment lines
//! system=pdd
//! provenance=t2.i
//! expected=pass
//! n=2
//! k=1
//! c=(0.5, 0)
//! f1=...
//! f2=...
//! g1=...
//! g2=...
//! tol=1e-9
//! seed=1729
//! points=200
//! radius=0.5
//! ```

use std::fmt::Write as _;

use super::expr::{parse_constant_at, parse_expr_at, parse_poly_at, Bindings};
use super::printer::{format_complex, format_real, print_expr, print_poly};
use crate::algebra::ComplexScalar;
use crate::error::{Error, Result};
use crate::systems::{Sampling, SolutionManifest, SystemKind, VerifyOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    Pass,
    Fail,
}

impl Expected {
    pub fn as_str(&self) -> &'static str {
        match self {
            Expected::Pass => "pass",
            Expected::Fail => "fail",
        }
    }

    pub fn matches(&self, passed: bool) -> bool {
        passed == (*self == Expected::Pass)
    }
}

/// A manifest together with its optional verification settings and comments.
#[derive(Clone, Debug, PartialEq)]
pub struct ManifestDocument {
    /// Comment lines without the leading `#`, printed before the keys.
    pub comments: Vec<String>,
    pub manifest: SolutionManifest,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub points: Option<usize>,
    pub radius: Option<f64>,
    pub expected: Option<Expected>,
}

impl ManifestDocument {
    pub fn new(manifest: SolutionManifest) -> Self {
        ManifestDocument {
            comments: Vec::new(),
            manifest,
            tol: None,
            seed: None,
            points: None,
            radius: None,
            expected: None,
        }
    }

    /// Verification options from the document, falling back to `base` for
    /// anything the file leaves unset.
    pub fn options(&self, base: &VerifyOptions) -> VerifyOptions {
        VerifyOptions {
            tol: self.tol.unwrap_or(base.tol),
            sampling: Sampling {
                seed: self.seed.unwrap_or(base.sampling.seed),
                num_points: self.points.unwrap_or(base.sampling.num_points),
                radius: self.radius.unwrap_or(base.sampling.radius),
            },
        }
    }
}

const KEYS: [&str; 14] = [
    "system",
    "provenance",
    "expected",
    "n",
    "k",
    "c",
    "f1",
    "f2",
    "g1",
    "g2",
    "tol",
    "seed",
    "points",
    "radius",
];

struct Entry {
    value: String,
    line: usize,
    col: usize,
}

pub fn parse_manifest(text: &str) -> Result<ManifestDocument> {
    let mut comments = Vec::new();
    let mut entries: Vec<(String, Entry)> = Vec::new();
    for (ln0, raw) in text.lines().enumerate() {
        let line = ln0 + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(c) = trimmed.strip_prefix('#') {
            comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
            continue;
        }
        let eq = raw.find('=').ok_or_else(|| Error::Parse {
            line,
            col: 1,
            msg: "expected `key=value`".into(),
        })?;
        let key = raw[..eq].trim().to_string();
        if key.is_empty() || !KEYS.contains(&key.as_str()) {
            return Err(Error::Parse {
                line,
                col: 1,
                msg: format!("unknown key `{key}`"),
            });
        }
        if entries.iter().any(|(k, _)| *k == key) {
            return Err(Error::Parse {
                line,
                col: 1,
                msg: format!("duplicate key `{key}`"),
            });
        }
        let after = &raw[eq + 1..];
        let lead = after.len() - after.trim_start().len();
        entries.push((
            key,
            Entry {
                value: after.trim().to_string(),
                line,
                col: raw[..eq + 1 + lead].chars().count() + 1,
            },
        ));
    }
    let get = |k: &str| entries.iter().find(|(key, _)| key == k).map(|(_, e)| e);
    let require = |k: &str| get(k).ok_or_else(|| Error::Manifest(format!("missing key `{k}`")));
    let bad = |e: &Entry, msg: String| Error::Parse {
        line: e.line,
        col: e.col,
        msg,
    };

    let n_entry = require("n")?;
    let n: usize = n_entry
        .value
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| bad(n_entry, "n must be a positive integer".into()))?;

    let sys = require("system")?;
    let k = match get("k") {
        Some(e) => Some(
            e.value
                .parse::<u32>()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or_else(|| bad(e, "k must be a positive integer".into()))?,
        ),
        None => None,
    };
    let kind = match (sys.value.as_str(), k) {
        ("difference", None) => SystemKind::Difference,
        ("difference", Some(_)) => {
            return Err(bad(
                get("k").unwrap(),
                "difference systems take no k".into(),
            ))
        }
        ("pdd", Some(k)) => SystemKind::Pdd { k },
        ("diffpdd", Some(k)) => SystemKind::DiffPdd { k },
        ("pdd" | "diffpdd", None) => {
            return Err(Error::Manifest(format!("{} systems need k", sys.value)))
        }
        (other, _) => {
            return Err(bad(
                sys,
                format!("unknown system `{other}` (expected difference, pdd or diffpdd)"),
            ))
        }
    };

    let bindings = Bindings::new();
    let c_entry = require("c")?;
    let c = parse_vector(&c_entry.value, &bindings, c_entry.line, c_entry.col)?;
    if c.len() != n {
        return Err(bad(
            c_entry,
            format!("c has {} entries, expected n={n}", c.len()),
        ));
    }

    let expr = |key: &str| -> Result<_> {
        let e = require(key)?;
        parse_expr_at(&e.value, n, &bindings, e.line, e.col)
    };
    let poly = |key: &str| -> Result<_> {
        match get(key) {
            Some(e) => parse_poly_at(&e.value, n, &bindings, e.line, e.col).map(Some),
            None => Ok(None),
        }
    };
    let manifest = SolutionManifest {
        kind,
        dim: n,
        c,
        f1: expr("f1")?,
        f2: expr("f2")?,
        g1: poly("g1")?,
        g2: poly("g2")?,
        provenance: get("provenance").map(|e| e.value.clone()),
    };
    manifest.validate()?;

    fn num<T: std::str::FromStr>(e: Option<&Entry>, what: &str) -> Result<Option<T>> {
        match e {
            None => Ok(None),
            Some(e) => e.value.parse().map(Some).map_err(|_| Error::Parse {
                line: e.line,
                col: e.col,
                msg: format!("invalid {what} `{}`", e.value),
            }),
        }
    }
    let expected = match get("expected") {
        None => None,
        Some(e) => Some(match e.value.as_str() {
            "pass" => Expected::Pass,
            "fail" => Expected::Fail,
            _ => return Err(bad(e, "expected must be `pass` or `fail`".into())),
        }),
    };
    Ok(ManifestDocument {
        comments,
        manifest,
        tol: num(get("tol"), "tolerance")?,
        seed: num(get("seed"), "seed")?,
        points: num(get("points"), "point count")?,
        radius: num(get("radius"), "radius")?,
        expected,
    })
}

/// Parses `(a, b, ...)` into constants.
pub fn parse_vector(
    text: &str,
    bindings: &Bindings,
    line: usize,
    col: usize,
) -> Result<Vec<ComplexScalar>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse {
            line,
            col,
            msg: "expected a parenthesized list `(a, b, ...)`".into(),
        })?;
    let lead = text.len() - text.trim_start().len();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let base = col + lead + 1;
    for (pos, ch) in inner
        .char_indices()
        .chain(std::iter::once((inner.len(), ',')))
    {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                let piece = &inner[start..pos];
                let ws = piece.len() - piece.trim_start().len();
                out.push(parse_constant_at(piece, bindings, line, base + start + ws)?);
                start = pos + 1;
            }
            _ => {}
        }
    }
    Ok(out)
}

pub fn format_vector(v: &[ComplexScalar]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| format_complex(x)).collect();
    format!("({})", parts.join(", "))
}

pub fn print_manifest(doc: &ManifestDocument) -> String {
    let m = &doc.manifest;
    let mut s = String::new();
    for c in &doc.comments {
        if c.is_empty() {
            s.push_str("#\n");
        } else {
            let _ = writeln!(s, "# {c}");
        }
    }
    let _ = writeln!(s, "system={}", m.kind.tag());
    if let Some(p) = &m.provenance {
        let _ = writeln!(s, "provenance={p}");
    }
    if let Some(e) = doc.expected {
        let _ = writeln!(s, "expected={}", e.as_str());
    }
    let _ = writeln!(s, "n={}", m.dim);
    if m.kind != SystemKind::Difference {
        let _ = writeln!(s, "k={}", m.kind.k());
    }
    let _ = writeln!(s, "c={}", format_vector(&m.c));
    let _ = writeln!(s, "f1={}", print_expr(&m.f1));
    let _ = writeln!(s, "f2={}", print_expr(&m.f2));
    if let Some(g) = &m.g1 {
        let _ = writeln!(s, "g1={}", print_poly(g));
    }
    if let Some(g) = &m.g2 {
        let _ = writeln!(s, "g2={}", print_poly(g));
    }
    if let Some(t) = doc.tol {
        let _ = writeln!(s, "tol={t:e}");
    }
    if let Some(v) = doc.seed {
        let _ = writeln!(s, "seed={v}");
    }
    if let Some(v) = doc.points {
        let _ = writeln!(s, "points={v}");
    }
    if let Some(v) = doc.radius {
        let _ = writeln!(s, "radius={}", format_real(v));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# a comment
system=pdd
provenance=demo
expected=pass
n=2
k=1
c=((1 + 2*i), 0)
f1=exp(z1)
f2=-1.25*i*exp(z1 + z2)
g1=2*z1
g2=2*z1 + z2
tol=1e-9
seed=5
points=10
radius=0.5
";

    #[test]
    fn round_trip_is_byte_identical() {
        let doc = parse_manifest(SAMPLE).unwrap();
        assert_eq!(doc.manifest.kind, SystemKind::Pdd { k: 1 });
        assert_eq!(doc.expected, Some(Expected::Pass));
        assert_eq!(print_manifest(&doc), SAMPLE);
    }

    #[test]
    fn unknown_and_duplicate_keys() {
        let bad = SAMPLE.replace("seed=5", "colour=red");
        assert!(matches!(
            parse_manifest(&bad),
            Err(Error::Parse { line: 13, .. })
        ));
        let dup = format!("{SAMPLE}seed=6\n");
        assert!(parse_manifest(&dup).is_err());
    }

    #[test]
    fn expression_errors_point_into_the_file() {
        let bad = SAMPLE.replace("f1=exp(z1)", "f1=exp(z3)");
        match parse_manifest(&bad) {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (8, 8)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_k_for_pdd() {
        let bad = SAMPLE.replace("k=1\n", "");
        assert!(matches!(parse_manifest(&bad), Err(Error::Manifest(_))));
    }
}
