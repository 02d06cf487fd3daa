//! Type checks every corpus spec and prints its diagnostics or Σ summary.

use act::{parser, typing};

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
    let mut paths: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    for path in paths {
        let file = path.file_name().unwrap().to_string_lossy().to_string();
        let src = std::fs::read_to_string(&path).unwrap();
        match parser::parse_spec(&src).and_then(|s| typing::check_spec(&s)) {
            Ok(c) => println!(
                "{}: ok, {} constructors, {} obligations",
                file,
                c.sigma.cnstr.len(),
                c.obligations.len()
            ),
            Err(diags) => {
                for d in diags {
                    println!("{}", d.render(&file));
                }
            }
        }
    }
}
