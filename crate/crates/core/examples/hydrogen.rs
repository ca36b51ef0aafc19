//! Hydrogen ground state from an imperfect guide.
//!
//! The trial function `exp(-0.8 r)` has variational energy -0.48; the
//! path integral recovers the exact -0.5. Run with
//!
//! ```text
//! cargo run --release --example hydrogen
//! ```

use gfk::run::{self, RunConfig};

fn main() -> anyhow::Result<()> {
    let config = RunConfig::from_toml_str(
        r#"
        nuclear_charge = 1
        electrons = 1
        trial = "slater"
        exponents = [0.8]
        lambda0 = -0.48
        scale = 20
        checkpoints = [4, 8, 12, 16]
        paths = 10000
        seed = 1
        "#,
        "hydrogen",
    )?;
    let traces = run::simulate(&config)?;
    let analysis = run::analyse(&config, &traces)?;
    print!("{}", run::emit_table(&analysis.stats, config.lambda0, &analysis.fits)?);

    let fit = analysis.primary_fit().expect("linear fit");
    println!("\nexact -0.5, error {:+.5}", fit.lambda1 + 0.5);
    Ok(())
}
