//! Text formats: expressions, polynomials and manifest files.

mod expr;
mod lexer;
mod manifest;
mod printer;

pub use expr::{parse_constant_with, parse_expr, parse_expr_with, parse_poly_with, Bindings};
pub use manifest::{
    format_vector, parse_manifest, parse_vector, print_manifest, Expected, ManifestDocument,
};
pub use printer::{format_complex, format_real, print_expr, print_poly};
