//! Shipped trial functions: value, drift, local energy and nodes at a
//! fixed two-electron configuration.

use gfk::system::{AtomSpec, Walker};
use gfk::trialfn::{TrialFunction, TrialFunctionSpec};

fn main() -> anyhow::Result<()> {
    let he = AtomSpec::helium();
    let w = Walker::from_electrons(&[[0.6, 0.1, -0.3], [-0.9, 1.2, 0.4]])?;
    println!("r1 = {:.4}  r2 = {:.4}  r12 = {:.4}\n", w.radius(0), w.radius(1), w.separation(0, 1));

    let mut specs: Vec<(String, TrialFunctionSpec)> = TrialFunctionSpec::PRESETS
        .iter()
        .map(|name| (name.to_string(), TrialFunctionSpec::preset(name).unwrap()))
        .collect();
    specs.push((
        "pz (a1 = 2, a2 = 0.6)".into(),
        TrialFunctionSpec::PzProduct { alpha1: 2.0, alpha2: 0.6 },
    ));

    println!("{:<22} {:>14} {:>12} {:>8}  |drift|", "function", "value", "E_local", "nodes");
    for (name, spec) in specs {
        let phi = TrialFunction::new(spec)?;
        let drift = phi.drift(&w)?;
        let speed = drift.iter().map(|v| v * v).sum::<f64>().sqrt();
        println!(
            "{name:<22} {:>14.6e} {:>12.6} {:>8}  {speed:.4}",
            phi.value(&w)?,
            phi.local_energy(&w, &he)?,
            phi.has_nodes()
        );
    }

    // Swapping the electrons flips the sign of the triplet functions.
    let fn3 = TrialFunction::new(TrialFunctionSpec::fn3())?;
    let swapped = w.swapped(0, 1);
    println!("\nfn3: phi(1,2) = {:.6e}, phi(2,1) = {:.6e}", fn3.value(&w)?, fn3.value(&swapped)?);
    println!("fn3 crosses its node between them: {}", fn3.crossed_node(&w, &swapped)?);

    let on_node = Walker::from_electrons(&[[1.0, 0.0, 0.0], [0.0, 0.0, -1.0]])?;
    println!("fn3 at r1 = r2: {:e}", fn3.value(&on_node)?);
    Ok(())
}
