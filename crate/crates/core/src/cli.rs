//! The `fermat` command-line driver. [`run`] takes the argument list and
//! output streams so it can be exercised in-process.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::families::{resolve, CaseLabel, Overrides};
use crate::fixtures::{self, FIXTURES};
use crate::parser::{parse_manifest, print_manifest, ManifestDocument};
use crate::systems::{verify, ResidualReport, VerifyOptions, DEFAULT_SEED};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable holding the default sampling seed.
pub const SEED_ENV: &str = "FERMAT_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "fermat",
    version,
    about = "Construct and verify exponential-sum solutions of Fermat-type systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Verify a manifest symbolically and at seeded sample points.
    Verify(VerifyArgs),
    /// Build a solution for a case label and write its manifest.
    Construct(ConstructArgs),
    /// Run the built-in example fixtures.
    Examples(ExamplesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct SamplingArgs {
    /// Pass threshold for coefficient defects and relative residuals.
    #[arg(long)]
    tol: Option<f64>,
    /// Sampling seed [default: manifest value, then $FERMAT_SEED, then 1729].
    #[arg(long)]
    seed: Option<u64>,
    /// Number of sample points.
    #[arg(long)]
    points: Option<usize>,
    /// Polydisc radius for sampling.
    #[arg(long)]
    radius: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    path: PathBuf,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    /// t1.i, t1.ii.a-d, t1.iii.a-d, t2.i, t2.ii.a-d, t2.iii.a-d, t3.odd or t3.even
    label: String,
    /// File of `name=value` parameter lines; inline flags take precedence.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Write the manifest here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for parameters that are not given [default: $FERMAT_SEED, then 1729].
    #[arg(long)]
    seed: Option<u64>,
    /// Extra `name=value` parameter, repeatable.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
    #[command(flatten)]
    p: ParamFlags,
}

/// One flag per family parameter. Values use the expression syntax of the
/// manifest format; vectors are written `(a, b, ...)`.
#[derive(Args, Debug, Default)]
struct ParamFlags {
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    xi1: Option<String>,
    #[arg(long)]
    xi2: Option<String>,
    #[arg(long = "L", alias = "l")]
    l: Option<String>,
    #[arg(long = "L1", alias = "l1")]
    l1: Option<String>,
    #[arg(long = "L2", alias = "l2")]
    l2: Option<String>,
    #[arg(long)]
    phi: Option<String>,
    #[arg(long)]
    psi: Option<String>,
    #[arg(long = "H", alias = "h")]
    h: Option<String>,
    #[arg(long = "H1", alias = "h1")]
    h1: Option<String>,
    #[arg(long = "H2", alias = "h2")]
    h2: Option<String>,
    #[arg(long = "B1", alias = "b1")]
    b1: Option<String>,
    #[arg(long = "B2", alias = "b2")]
    b2: Option<String>,
    #[arg(long = "B3", alias = "b3")]
    b3: Option<String>,
    #[arg(long = "B4", alias = "b4")]
    b4: Option<String>,
    #[arg(long)]
    alpha1: Option<String>,
    #[arg(long)]
    alpha2: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    direction: Option<String>,
    #[arg(long)]
    branch: Option<String>,
    #[arg(long)]
    m1: Option<String>,
    #[arg(long)]
    m2: Option<String>,
}

impl ParamFlags {
    fn overrides(&self) -> Result<Overrides> {
        let pairs = [
            ("n", &self.n),
            ("k", &self.k),
            ("xi1", &self.xi1),
            ("xi2", &self.xi2),
            ("L", &self.l),
            ("L1", &self.l1),
            ("L2", &self.l2),
            ("phi", &self.phi),
            ("psi", &self.psi),
            ("H", &self.h),
            ("H1", &self.h1),
            ("H2", &self.h2),
            ("B1", &self.b1),
            ("B2", &self.b2),
            ("B3", &self.b3),
            ("B4", &self.b4),
            ("alpha1", &self.alpha1),
            ("alpha2", &self.alpha2),
            ("beta", &self.beta),
            ("eta", &self.eta),
            ("c", &self.c),
            ("direction", &self.direction),
            ("branch", &self.branch),
            ("m1", &self.m1),
            ("m2", &self.m2),
        ];
        let mut ov = Overrides::new();
        for (name, value) in pairs {
            if let Some(v) = value {
                ov.set(name, v)?;
            }
        }
        Ok(ov)
    }
}

#[derive(Args, Debug)]
struct ExamplesArgs {
    /// Run a single fixture by name.
    #[arg(long)]
    only: Option<String>,
    /// Also write the fixture files into this directory.
    #[arg(long, value_name = "DIR")]
    emit: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Construct(a) => cmd_construct(&a, out),
        Command::Examples(a) => cmd_examples(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            Error::params(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))
        }),
        Err(_) => Ok(None),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Manifest(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| Error::Manifest(format!("cannot write {}: {e}", path.display())))
}

fn io(r: std::io::Result<()>) -> Result<()> {
    r.map_err(|e| Error::Manifest(format!("write failed: {e}")))
}

/// Flag, then manifest value, then environment, then built-in default.
fn verify_options(doc: &ManifestDocument, s: &SamplingArgs) -> Result<VerifyOptions> {
    let mut base = VerifyOptions::default();
    base.sampling.seed = env_seed()?.unwrap_or(DEFAULT_SEED);
    let mut opts = doc.options(&base);
    if let Some(t) = s.tol {
        opts.tol = t;
    }
    if let Some(seed) = s.seed {
        opts.sampling.seed = seed;
    }
    if let Some(p) = s.points {
        opts.sampling.num_points = p;
    }
    if let Some(r) = s.radius {
        opts.sampling.radius = r;
    }
    if !(opts.tol > 0.0) || !(opts.sampling.radius > 0.0) || opts.sampling.num_points == 0 {
        return Err(Error::params("tol, radius and points must be positive"));
    }
    Ok(opts)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let doc = parse_manifest(&read(&a.path)?)
        .map_err(|e| Error::Manifest(format!("{}: {e}", a.path.display())))?;
    let opts = verify_options(&doc, &a.sampling)?;
    let report = verify(&doc.manifest, &opts)?;
    let text = match a.format {
        Format::Text => {
            let mut t = report.to_text();
            if let Some(exp) = doc.expected {
                let verdict = if exp.matches(report.pass) {
                    "matches"
                } else {
                    "differs"
                };
                let _ = writeln!(t, "expected: {} ({verdict})", exp.as_str());
            }
            t
        }
        Format::Json => {
            let mut v = serde_json::to_value(&report)
                .map_err(|e| Error::Manifest(format!("cannot serialize report: {e}")))?;
            v["max_rel_residual"] = report.max_rel_residual().into();
            v["symbolic_zero"] = report.symbolic_zero().into();
            v["expected"] = doc.expected.map(|e| e.as_str()).into();
            let mut t = serde_json::to_string_pretty(&v)
                .map_err(|e| Error::Manifest(format!("cannot serialize report: {e}")))?;
            t.push('\n');
            t
        }
    };
    io(out.write_all(text.as_bytes()))?;
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_construct(a: &ConstructArgs, out: &mut dyn Write) -> Result<i32> {
    let label: CaseLabel = a.label.parse()?;
    let mut ov = match &a.params {
        Some(path) => Overrides::parse(&read(path)?)?,
        None => Overrides::new(),
    };
    for entry in &a.set {
        let (k, v) = entry
            .split_once('=')
            .ok_or_else(|| Error::params(format!("--set expects NAME=VALUE, got `{entry}`")))?;
        ov.set(k.trim(), v)?;
    }
    ov.merge(&a.p.overrides()?);
    let seed = match a.seed {
        Some(s) => s,
        None => env_seed()?.unwrap_or(DEFAULT_SEED),
    };
    let construction = resolve(label, &ov, seed)?.construct()?;
    let report = verify(&construction.manifest, &VerifyOptions::default())?;

    let relations = construction.relation_lines();
    let mut doc = ManifestDocument::new(construction.manifest.clone());
    doc.comments
        .push(format!("constructed {label} with parameter seed {seed}"));
    doc.comments.push("enforced relations:".into());
    doc.comments
        .extend(relations.iter().map(|l| format!("  {l}")));
    let text = print_manifest(&doc);

    match &a.out {
        Some(path) => {
            let mut s = String::new();
            for l in &relations {
                let _ = writeln!(s, "relation {l}");
            }
            let _ = writeln!(
                s,
                "verify: {} max_rel_residual={:.3e}",
                if report.pass { "PASS" } else { "FAIL" },
                report.max_rel_residual()
            );
            write_file(path, &text)?;
            let _ = writeln!(s, "wrote {}", path.display());
            io(out.write_all(s.as_bytes()))?;
        }
        None => io(out.write_all(text.as_bytes()))?,
    }
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}

/// One row of the `examples` table.
#[derive(Clone, Debug, PartialEq)]
pub struct ExampleOutcome {
    pub name: &'static str,
    pub expected_pass: bool,
    pub report: ResidualReport,
}

impl ExampleOutcome {
    pub fn matches(&self) -> bool {
        self.report.pass == self.expected_pass
    }
}

/// Parses and verifies one shipped fixture with its own settings.
pub fn run_fixture(f: &fixtures::Fixture) -> Result<ExampleOutcome> {
    let doc = f.parse()?;
    let report = verify(&doc.manifest, &doc.options(&VerifyOptions::default()))?;
    Ok(ExampleOutcome {
        name: f.name,
        expected_pass: doc.expected.is_none_or(|e| e.matches(true)),
        report,
    })
}

fn cmd_examples(a: &ExamplesArgs, out: &mut dyn Write) -> Result<i32> {
    let selected: Vec<&fixtures::Fixture> = match &a.only {
        Some(name) => vec![fixtures::require(name)?],
        None => FIXTURES.iter().collect(),
    };
    if let Some(dir) = &a.emit {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Manifest(format!("cannot create {}: {e}", dir.display())))?;
        for f in &selected {
            write_file(&dir.join(format!("{}.fde", f.name)), f.text)?;
        }
    }

    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<22} {:<8} {:<8} {:<16} {:<8} note",
        "fixture", "expected", "symbolic", "max_rel_residual", "outcome"
    );
    let mut all_match = true;
    for f in selected {
        let o = run_fixture(f)?;
        all_match &= o.matches();
        let _ = writeln!(
            s,
            "{:<22} {:<8} {:<8} {:<16} {:<8} {}",
            o.name,
            if o.expected_pass { "pass" } else { "fail" },
            if o.report.symbolic_zero() {
                "yes"
            } else {
                "no"
            },
            format!("{:.3e}", o.report.max_rel_residual()),
            match (o.report.pass, o.matches()) {
                (true, true) => "PASS",
                (false, true) => "FAIL(ok)",
                (_, false) => "MISMATCH",
            },
            f.note
        );
    }
    let _ = writeln!(s, "result: {}", if all_match { "PASS" } else { "FAIL" });
    io(out.write_all(s.as_bytes()))?;
    Ok(if all_match { EXIT_PASS } else { EXIT_FAIL })
}
