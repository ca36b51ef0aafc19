use std::path::PathBuf;

use gfk::run::{FitSelection, Mode, RunConfig, DEFAULT_CHECKPOINTS};
use gfk::Error;

const BASE: &str = "trial = \"fn5\"\nlambda0 = -2.1742305\npaths = 100";

fn field_of(text: &str) -> String {
    match RunConfig::from_toml_str(text, "t") {
        Err(Error::Config { field, .. }) => field,
        other => panic!("expected a config error for\n{text}\ngot {other:?}"),
    }
}

#[test]
fn defaults() {
    let c = RunConfig::from_toml_str(BASE, "named").unwrap();
    assert_eq!(c.name, "named");
    assert_eq!(c.atom.nuclear_charge, 2.0);
    assert_eq!(c.atom.n_electrons, 2);
    assert!(c.atom.electron_repulsion);
    assert_eq!(c.mode, Mode::Gfk);
    assert_eq!(c.scale, 30);
    assert_eq!(c.checkpoints, DEFAULT_CHECKPOINTS);
    assert_eq!(c.seed, 1);
    assert_eq!(c.fit, FitSelection::Linear);
    assert_eq!(c.output_dir, PathBuf::from("runs/named"));
    assert_eq!(c.trial_label(), "fn5");
}

#[test]
fn full_precision_numbers() {
    let c = RunConfig::from_toml_str("trial = \"node-polynomial\"\nr0 = 0.73351723\nalpha1 = 0.636748\nalpha2 = 2.002777\nlambda0 = -2.1742305\npaths = 10", "t").unwrap();
    assert_eq!(c.lambda0, -2.1742305);
    let spec = c.trial.unwrap().function.spec().clone();
    assert_eq!(spec, gfk::trialfn::TrialFunctionSpec::fn5());
}

#[test]
fn field_level_errors() {
    let cases = [
        (format!("{BASE}\ncolour = 3"), "colour"),
        ("trial = \"fn5\"\nlambda0 = -2.17".to_string(), "paths"),
        (format!("{BASE}\npaths = 1").replace("paths = 100\n", ""), "paths"),
        ("trial = \"fn5\"\npaths = 10".to_string(), "lambda0"),
        ("lambda0 = -2\npaths = 10".to_string(), "trial"),
        (format!("{BASE}\ncheckpoints = [16, 8]"), "checkpoints"),
        (format!("{BASE}\ncheckpoints = []"), "checkpoints"),
        (format!("{BASE}\nscale = 30\ncheckpoints = [0.001, 1, 2]"), "checkpoints"),
        (format!("{BASE}\nscale = 0"), "scale"),
        (format!("{BASE}\nworkers = 0"), "workers"),
        (format!("{BASE}\nnuclear_charge = 0"), "nuclear_charge"),
        (format!("{BASE}\nelectrons = 0"), "electrons"),
        (format!("{BASE}\nelectrons = 1"), "trial"),
        (format!("{BASE}\nr0 = 1.0"), "r0"),
        (format!("{BASE}\nfit = \"nonlinear\"\ncheckpoints = [8, 16, 24]"), "fit"),
        (format!("{BASE}\ncheckpoints = [8, 16]"), "fit"),
        (BASE.replace("fn5", "fn9"), "trial"),
        ("trial = \"slater\"\nr0 = 1\nexponents = [1, 1]\nlambda0 = -2\npaths = 10".to_string(), "r0"),
        ("trial = \"node-polynomial\"\nr0 = 1\nalpha1 = 1\nlambda0 = -2\npaths = 10".to_string(), "alpha2"),
        ("trial = \"pz-product\"\nalpha2 = 1\nlambda0 = -2\npaths = 10".to_string(), "alpha1"),
        ("trial = \"node-polynomial\"\nr0 = 1\nalpha1 = -1\nalpha2 = 2\nlambda0 = -2\npaths = 10".to_string(), "trial"),
        ("trial = \"goldman-ci\"\nsymmetry = \"antisymmetric\"\nterms = [[1.0, 1.0, 2.0, 0, 0]]\nlambda0 = -2\npaths = 10".to_string(), "trial"),
        ("trial = \"pade-exp\"\nnumerator = [[0, 0, 1, 0.5]]\ndenominator = [[0, 0, 0, 1.0]]\nalpha = 2\nbeta = 1\nlambda0 = -2\npaths = 10".to_string(), "symmetry"),
        ("alpha1 = 2\nlambda0 = -2\npaths = 10".to_string(), "alpha1"),
        ("mode = \"fk\"\ntrial = \"fn5\"\npaths = 10".to_string(), "trial"),
        ("mode = \"fk\"\nlambda0 = -2\npaths = 10".to_string(), "lambda0"),
        (format!("{BASE}\nname = \"a/b\""), "name"),
    ];
    for (text, field) in cases {
        assert_eq!(field_of(&text), field, "config:\n{text}");
    }
}

#[test]
fn explicit_families_parse() {
    let goldman = RunConfig::from_toml_str(
        "trial = \"goldman-ci\"\nterms = [[77.457638, 1.216604, 1.920647, 0, 0], [-5.671781, 1.994090, 2.070513, 1, 1]]\nlambda0 = -2.8765193\npaths = 10",
        "t",
    )
    .unwrap();
    assert_eq!(
        goldman.trial.unwrap().function.spec(),
        &gfk::trialfn::TrialFunctionSpec::goldman_ground()
    );
    let pade = RunConfig::from_toml_str(
        "trial = \"pade-exp\"\nsymmetry = \"antisymmetric\"\nnumerator = [[0, 0, 1, 0.5]]\ndenominator = [[0, 0, 0, 1.0], [0, 0, 1, 0.3]]\nalpha = 2.1\nbeta = 1.1\nlambda0 = -2.17\npaths = 10",
        "t",
    )
    .unwrap();
    assert!(pade.trial.unwrap().function.has_nodes());
    let h = RunConfig::from_toml_str(
        "nuclear_charge = 1\nelectrons = 1\nmode = \"fk\"\nscale = 10\ncheckpoints = [1, 2, 3]\npaths = 10",
        "t",
    )
    .unwrap();
    assert_eq!(h.lambda0, 0.0);
    assert!(h.trial.is_none());
}

#[test]
fn shipped_configs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let result = RunConfig::load(&path);
        if path.file_stem().unwrap() == "pz" {
            assert!(matches!(result, Err(Error::Config { ref field, .. }) if field == "alpha1"));
        } else {
            let c = result.unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(c.name, path.file_stem().unwrap().to_str().unwrap());
        }
        seen += 1;
    }
    assert!(seen >= 9);
}

#[test]
fn edited_configs_are_revalidated() {
    let mut c = RunConfig::from_toml_str(BASE, "t").unwrap();
    c.paths = 1;
    assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "paths"));
    assert!(gfk::run::simulate(&c).is_err());
}
