//! Rewrites `crates/core/fixtures/*.fde` from the builders and reports
//! each verification outcome.
use fermat_core::{fixtures, parser::parse_manifest, systems::verify};

fn main() {
    for (name, text) in fixtures::render_all().unwrap() {
        std::fs::write(format!("crates/core/fixtures/{name}.fde"), &text).unwrap();
        let doc = parse_manifest(&text).unwrap();
        let rep = verify(&doc.manifest, &doc.options(&Default::default())).unwrap();
        println!(
            "{name:22} pass={} symbolic={} residual={:.2e}",
            rep.pass,
            rep.symbolic_zero(),
            rep.max_rel_residual()
        );
    }
}
