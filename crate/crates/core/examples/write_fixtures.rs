//! Regenerates the checked-in fixture files.
//!
//! cargo run --example write_fixtures [-- <dir>]

use std::path::PathBuf;

fn main() -> std::io::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures"));
    std::fs::create_dir_all(&dir)?;
    for (name, text) in attrvote::instances::fixtures() {
        std::fs::write(dir.join(&name), text)?;
        println!("wrote {}", dir.join(name).display());
    }
    Ok(())
}
