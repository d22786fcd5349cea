use std::fs;
use std::path::Path;
use std::process::Command;

use rabi_cat::hilbert::AtomFieldVector;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rabi-cat"))
}

fn run_in(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = bin().current_dir(dir).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn read_rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(|r| r.unwrap()).collect()
}

#[test]
fn figures_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = run_in(dir.path(), &["figures", "--out", "a", "--svg"]);
    assert_eq!(code, 0, "{err}");
    let (code, _, _) = run_in(dir.path(), &["figures", "--out", "b"]);
    assert_eq!(code, 0);
    for f in ["fig1.csv", "fig2.csv"] {
        let a = fs::read(dir.path().join("a").join(f)).unwrap();
        let b = fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
    assert!(dir.path().join("a/fig1.svg").exists() && dir.path().join("a/fig2.svg").exists());
    assert!(!dir.path().join("b/fig1.svg").exists());

    let text = fs::read_to_string(dir.path().join("a/fig1.csv")).unwrap();
    assert!(text.starts_with("panel,omega_a_t_over_2,alpha,p_plus,p_minus\n"));
    let rows = read_rows(&dir.path().join("a/fig1.csv"));
    assert_eq!(rows.len(), 4 * 301);
    let first: f64 = rows[0][3].parse().unwrap();
    assert!((first - 1f64.cos().powi(2)).abs() < 1e-15);
    // 17 significant digits
    assert_eq!(rows[0][3].split('e').next().unwrap().len(), 18);
    let text = fs::read_to_string(dir.path().join("a/fig2.csv")).unwrap();
    assert!(text.starts_with("panel,alpha,omega_a_t_over_2,p_plus,p_minus\n"));
}

#[test]
fn spectrum_agrees_where_closed_form_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c.toml", "[model]\nomega_a = 0.0\nomega_f = 1.0\nlambda = 0.1\nalpha = \"auto\"\n");
    let (code, stdout, err) = run_in(dir.path(), &["spectrum", "--config", "c.toml", "--out", "o"]);
    assert_eq!(code, 0, "{err}");
    assert!(stdout.contains("alpha = -0.1"));
    let rows = read_rows(&dir.path().join("o/spectrum.csv"));
    assert_eq!(rows.len(), 2);
    for r in &rows {
        let e: f64 = r[3].parse().unwrap();
        let o: f64 = r[4].parse().unwrap();
        let res: f64 = r[8].parse().unwrap();
        assert!((e - o).abs() <= 1e-8 && res <= 1e-8);
    }

    write(dir.path(), "gap.toml", "[model]\nomega_a = 1.0\nomega_f = 1.0\nlambda = 0.5\nalpha = \"auto\"\n");
    let (code, _, _) = run_in(dir.path(), &["spectrum", "--config", "gap.toml", "--out", "g"]);
    assert_eq!(code, 0);
    let rows = read_rows(&dir.path().join("g/spectrum.csv"));
    assert!(rows.iter().all(|r| r[8].parse::<f64>().unwrap() > 1e-3));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "typo.toml", "[model]\nomgea_a = 1.0\n");
    assert_eq!(run_in(dir.path(), &["spectrum", "--config", "typo.toml"]).0, 2);
    write(dir.path(), "auto.toml", "[model]\nalpha = \"auto\"\n");
    assert_eq!(run_in(dir.path(), &["spectrum", "--config", "auto.toml"]).0, 2);
    assert_eq!(run_in(dir.path(), &["spectrum", "--config", "missing.toml"]).0, 4);
    assert_eq!(run_in(dir.path(), &["frobnicate"]).0, 2);
    assert_eq!(run_in(dir.path(), &["--help"]).0, 0);

    write(dir.path(), "ground.toml", "[model]\nlambda = 0.2\n[state]\npreset = \"ground\"\n");
    let (code, _, err) = run_in(dir.path(), &["pipeline", "--config", "ground.toml", "--out", "o"]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("outside span"));
    let (code, _, _) = run_in(dir.path(), &["pipeline", "--config", "ground.toml", "--out", "o", "--engine", "oracle"]);
    assert_eq!(code, 0);

    fs::write(dir.path().join("blocker"), "").unwrap();
    assert_eq!(run_in(dir.path(), &["figures", "--out", "blocker/sub"]).0, 4);
}

#[test]
fn pipeline_outputs_and_state_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "p.toml",
        "[model]\nlambda = 0.2\nalpha = 1.5\n[run]\ninteraction_time = 2.0\nshots = 500\nseed = 11\n\
         [output]\nexport_state = \"final.amp\"\nwigner_resolution = 21\n",
    );
    let (code, stdout, err) = run_in(dir.path(), &["pipeline", "--config", "p.toml", "--out", "o", "--svg"]);
    assert_eq!(code, 0, "{err}");
    assert!(stdout.contains("seed 11"));
    let rows = read_rows(&dir.path().join("o/pipeline.csv"));
    assert_eq!(rows.len(), 2);
    let total: f64 = rows.iter().map(|r| r[1].parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    let counts: u64 = rows.iter().map(|r| r[10].parse::<u64>().unwrap()).sum();
    assert_eq!(counts, 500);
    for tag in ["g", "e"] {
        assert!(dir.path().join(format!("o/wigner_{tag}.svg")).exists());
        assert_eq!(read_rows(&dir.path().join(format!("o/wigner_{tag}.csv"))).len(), 21 * 21);
    }
    let summary = fs::read_to_string(dir.path().join("o/pipeline_summary.csv")).unwrap();
    assert!(summary.contains("residual_weight,"));

    let exported = fs::read_to_string(dir.path().join("final.amp")).unwrap();
    let state = AtomFieldVector::from_amplitude_text(&exported).unwrap();
    assert_eq!(state.to_amplitude_text(), exported);

    // feed the exported state back in as the initial state
    write(dir.path(), "q.toml", "[model]\nlambda = 0.2\nalpha = 1.5\n[state]\nfile = \"final.amp\"\n[run]\ninteraction_time = 0.0\nengine = \"oracle\"\n");
    let (code, _, err) = run_in(dir.path(), &["pipeline", "--config", "q.toml", "--out", "q"]);
    assert_eq!(code, 0, "{err}");
    let a = read_rows(&dir.path().join("o/pipeline.csv"));
    let b = read_rows(&dir.path().join("q/pipeline.csv"));
    for (x, y) in a.iter().zip(&b) {
        let (px, py): (f64, f64) = (x[1].parse().unwrap(), y[1].parse().unwrap());
        assert!((px - py).abs() < 1e-12);
    }
}

#[test]
fn evolve_both_engines_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "e.toml",
        "[model]\nomega_a = 0.0\nlambda = 0.3\nomega_f = 1.0\nalpha = \"auto\"\n[grids]\ntime = { start = 0.0, stop = 5.0, steps = 10 }\n",
    );
    for out in ["x", "y"] {
        let (code, _, err) = run_in(dir.path(), &["evolve", "--config", "e.toml", "--engine", "both", "--out", out]);
        assert_eq!(code, 0, "{err}");
    }
    let x = fs::read(dir.path().join("x/evolve.csv")).unwrap();
    assert_eq!(x, fs::read(dir.path().join("y/evolve.csv")).unwrap());
    let rows = read_rows(&dir.path().join("x/evolve.csv"));
    assert_eq!(rows.len(), 11);
    for r in rows {
        assert!((r[3].parse::<f64>().unwrap() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn residuals_and_convergence_reports() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "r.toml",
        "[model]\nomega_a = 0.5\nlambda = 0.3\n[grids]\nalpha = { start = 0.0, stop = 1.0, steps = 4 }\ncutoffs = [8, 16, 32]\n",
    );
    let (code, _, err) = run_in(dir.path(), &["residuals", "--config", "r.toml", "--out", "o"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(read_rows(&dir.path().join("o/residuals.csv")).len(), 10);
    let (code, _, err) = run_in(dir.path(), &["convergence", "--config", "r.toml", "--out", "o"]);
    assert_eq!(code, 0, "{err}");
    let rows = read_rows(&dir.path().join("o/convergence.csv"));
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| &r[4] == "true"));
}

#[test]
fn in_process_entry_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s");
    let code = rabi_cat::cli::main_with_args(["rabi-cat", "spectrum", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.join("spectrum.csv").exists());
}
