//! The lattice walk against exact enumeration.
//!
//! For a short walk every sign sequence is equally likely, so the expected
//! weight can be computed exactly by listing all `2^steps` paths. Any
//! model implementing [`PathModel`] can be plugged into the propagator.

use gfk::propagator::{run_replication, PathConfig, PathModel};
use gfk::rng::substream;
use gfk::system::Walker;

/// One coordinate in the potential `2 sin(3x)`.
struct Sine;

impl PathModel for Sine {
    type Site = ();

    fn dim(&self) -> usize {
        1
    }

    fn new_site(&self) {}

    fn evaluate(&self, _x: &Walker, _site: &mut ()) -> gfk::Result<()> {
        Ok(())
    }

    fn drift(&self, _site: &(), _out: &mut [f64]) -> gfk::Result<bool> {
        Ok(false)
    }

    fn potential(&self, x: &Walker, _site: &()) -> gfk::Result<f64> {
        Ok(2.0 * (3.0 * x.coords()[0]).sin())
    }
}

fn main() -> anyhow::Result<()> {
    let scale = 2;
    let n = f64::from(scale * scale);
    let cfg = PathConfig::new(scale, vec![1.0, 2.0, 3.0])?;
    let steps = cfg.total_steps() as usize;
    let x0 = 0.3;

    let mut exact = [0.0; 3];
    for mask in 0u32..(1 << steps) {
        let (mut m, mut sum) = (0i32, 0.0);
        for s in 0..steps {
            m += if mask >> s & 1 == 1 { 1 } else { -1 };
            sum += 2.0 * (3.0 * (x0 + f64::from(m) / f64::from(scale))).sin();
            if (s + 1) % n as usize == 0 {
                exact[s / n as usize] += (-sum / n).exp();
            }
        }
    }
    exact.iter_mut().for_each(|e| *e /= f64::from(1u32 << steps));

    let paths = 50_000u64;
    let mut mean = [0.0; 3];
    let mut square = [0.0; 3];
    for k in 0..paths {
        let mut rng = substream(17, k);
        for (j, (_, z)) in run_replication(&Sine, &cfg, Walker::new(vec![x0])?, &mut rng)?.into_iter().enumerate() {
            mean[j] += z / paths as f64;
            square[j] += z * z / paths as f64;
        }
    }
    println!(" t   exact        monte carlo  |diff|/SE");
    for j in 0..3 {
        let se = ((square[j] - mean[j] * mean[j]) / (paths as f64 - 1.0)).sqrt();
        println!(" {}   {:.8}   {:.8}   {:.2}", j + 1, exact[j], mean[j], (mean[j] - exact[j]).abs() / se);
    }
    Ok(())
}
