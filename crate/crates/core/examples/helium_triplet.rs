//! Desk-scale run for the helium 2³S state with the shipped `fn5-desk`
//! config, writing the table, plot data, summary and manifest.
//!
//! ```text
//! cargo run --release --example helium_triplet -- [output-dir] [workers]
//! ```

use std::path::PathBuf;

use gfk::run::{self, RunConfig};

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/fn5-desk.toml");
    let mut config = RunConfig::load(&path)?;
    if let Some(dir) = args.next() {
        config.output_dir = dir.into();
    }
    if let Some(w) = args.next() {
        config.workers = w.parse()?;
    }

    let outcome = run::run(&config)?;
    print!("{}", std::fs::read_to_string(&outcome.files[0])?);
    for f in &outcome.files[1..] {
        println!("wrote {}", f.display());
    }
    Ok(())
}
