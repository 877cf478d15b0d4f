//! Writes every built-in fixture as an instance file.
//!
//! cargo run -p bicotwist-core --example export_instances -- instances

use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "instances".into()));
    std::fs::create_dir_all(&dir)?;
    for name in bicotwist::BUILTINS {
        let spec = bicotwist::builtin(name)?;
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, spec.to_json_string() + "\n")?;
        println!("{}", path.display());
    }
    Ok(())
}
