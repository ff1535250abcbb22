use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn catmetro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catmetro")).args(args).output().expect("spawn catmetro")
}

fn stdout_of(args: &[&str]) -> String {
    let out = catmetro(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn parse(text: &str) -> Csv {
        assert!(!text.contains('\r'));
        let mut lines = text.lines();
        let header = lines.next().unwrap().split(',').map(String::from).collect();
        let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
        Csv { header, rows }
    }

    fn col(&self, name: &str) -> usize {
        self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
    }

    fn f(&self, row: usize, name: &str) -> f64 {
        self.rows[row][self.col(name)].parse().unwrap()
    }
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn figure1_default_matches_golden_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("fig1.csv");
    let status = catmetro(&["figure1", "--out", out.to_str().unwrap()]).status;
    assert_eq!(status.code(), Some(0));
    let got = Csv::parse(&read(&out));
    let want = Csv::parse(include_str!("golden/figure1_default.csv"));
    assert_eq!(got.header, want.header);
    assert_eq!(got.rows.len(), 200);
    // last-bit libm differences are tolerated across platforms
    for (g, w) in got.rows.iter().zip(&want.rows) {
        for (a, b) in g.iter().zip(w) {
            let (a, b): (f64, f64) = (a.parse().unwrap(), b.parse().unwrap());
            assert!((a - b).abs() <= 1e-12 * b.abs(), "{a} vs {b}");
        }
    }
}

#[test]
fn figure1_values_at_ten_photons() {
    let csv = Csv::parse(&stdout_of(&["figure1", "--points", "4"]));
    assert_eq!(csv.header, ["n_tot", "eps_entangled", "eps_separable", "eps_single_cat", "alpha_entangled"]);
    assert_eq!(csv.f(2, "n_tot"), 10.0);
    assert!((csv.f(2, "eps_entangled") - 0.0493864797828243).abs() < 1e-10);
    assert!((csv.f(2, "eps_separable") - 0.1414213562373095).abs() < 1e-12);
    assert!((csv.f(2, "eps_single_cat") - 0.15617376188860607).abs() < 1e-12);
    assert!((csv.f(2, "alpha_entangled") - 1.0000000020611535).abs() < 1e-9);
}

#[test]
fn figure1_single_mode_limit() {
    let csv = Csv::parse(&stdout_of(&["figure1", "--N", "1", "--points", "4"]));
    let last = csv.rows.len() - 1;
    assert_eq!(csv.f(last, "n_tot"), 100.0);
    let ratio = csv.f(last, "eps_entangled") / csv.f(last, "eps_single_cat");
    assert!((ratio - 1.0).abs() <= 2e-3, "ratio {ratio}");
}

#[test]
fn figure1_two_points() {
    let text = stdout_of(&["figure1", "--points", "2", "--ntot-min", "1", "--ntot-max", "10"]);
    assert_eq!(text.lines().count(), 3);
    assert!(text.ends_with('\n'));
}

#[test]
fn figure1_writes_svg() {
    let dir = TempDir::new().unwrap();
    let svg = dir.path().join("fig1.svg");
    stdout_of(&["figure1", "--points", "20", "--svg", svg.to_str().unwrap()]);
    let text = read(&svg);
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<polyline").count(), 3);
    assert!(text.contains("entangled cat"));
}

#[test]
fn cells_have_seventeen_significant_digits() {
    let csv = Csv::parse(&stdout_of(&["figure1", "--points", "5"]));
    for row in &csv.rows {
        for cell in row {
            let mantissa = cell.split('e').next().unwrap();
            assert_eq!(mantissa.replace(['.', '-'], "").len(), 17, "{cell}");
        }
    }
}

#[test]
fn runs_are_bit_identical() {
    for args in [
        &["figure1"][..],
        &["ramsey", "--shots", "2000", "--replications", "50"],
        &["montecarlo", "--shots", "10000"],
    ] {
        assert_eq!(stdout_of(args), stdout_of(args), "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(catmetro(&["figure1", "--out", "/nonexistent-dir/fig1.csv"]).status.code(), Some(2));
    let out = catmetro(&["figure1", "--out", "/nonexistent-dir/fig1.csv"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir/fig1.csv"));
    assert_eq!(catmetro(&["figure1", "--points", "1"]).status.code(), Some(1));
    assert_eq!(catmetro(&["figure1", "--ntot-min", "5", "--ntot-max", "1"]).status.code(), Some(1));
    assert_eq!(catmetro(&["figure1", "--ntot-min", "0", "--spacing", "log"]).status.code(), Some(1));
    assert_eq!(catmetro(&["figure1", "--spacing", "cubic"]).status.code(), Some(1));
    assert_eq!(catmetro(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(catmetro(&["--help"]).status.code(), Some(0));
    assert_eq!(catmetro(&["qfi-check", "--N-list", "4", "--alpha-list", "0.5"]).status.code(), Some(3));
    assert_eq!(catmetro(&["figure1", "--config", "/nonexistent-dir/c.toml"]).status.code(), Some(2));
}

#[test]
fn qfi_check_default_grid_passes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.csv");
    let status = catmetro(&["qfi-check", "--grid", "default", "--out", out.to_str().unwrap()]).status;
    assert_eq!(status.code(), Some(0));
    let csv = Csv::parse(&read(&out));
    assert_eq!(csv.rows.len(), 12);
    for i in 0..12 {
        assert_eq!(csv.rows[i][csv.col("pass")], "1");
    }
    let row = csv
        .rows
        .iter()
        .position(|r| r[0] == "1" && r[1].parse::<f64>().unwrap() == 1.0)
        .unwrap();
    assert!((csv.f(row, "qfi_analytic") - 18.092753247646126).abs() < 1e-9);
    assert!((csv.f(row, "qfi_pure") - 18.092753247646126).abs() < 1e-9);
}

#[test]
fn qfi_check_vacuum_row() {
    let csv = Csv::parse(&stdout_of(&["qfi-check", "--N-list", "2", "--alpha-list", "0"]));
    assert_eq!(csv.f(0, "generator_variance"), 2.0);
    assert_eq!(csv.f(0, "qfi_analytic"), 8.0);
    assert!((csv.f(0, "qfi_pure") - 8.0).abs() < 1e-12);
}

#[test]
fn qfi_check_tolerance_failure_exits_3() {
    let out = catmetro(&["qfi-check", "--N-list", "1", "--alpha-list", "1", "--fd-tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(3));
    let csv = Csv::parse(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(csv.rows[0][csv.col("pass")], "0");
}

#[test]
fn ramsey_table() {
    let csv = Csv::parse(&stdout_of(&["ramsey", "--N-list", "1,2,4,8,16", "--shots", "100000", "--seed", "42"]));
    assert_eq!(csv.rows.len(), 10);
    for pair in csv.rows.chunks(2).enumerate() {
        let (i, rows) = pair;
        let n: f64 = rows[0][0].parse().unwrap();
        assert_eq!(rows[0][1], "product");
        assert_eq!(rows[1][1], "ghz");
        let ratio = csv.f(2 * i + 1, "FI") / csv.f(2 * i, "FI");
        assert_eq!(ratio, n * n);
        for r in [2 * i, 2 * i + 1] {
            let rel = csv.f(r, "empirical_stderr") / csv.f(r, "delta_theta");
            assert!((rel - 1.0).abs() < 0.1, "row {r}: {rel}");
        }
    }
}

#[test]
fn montecarlo_recovers_displacement() {
    let csv = Csv::parse(&stdout_of(&[
        "montecarlo", "--probe", "coherent", "--eps", "0.3", "--shots", "1000000", "--seed", "7",
    ]));
    assert_eq!(csv.rows.len(), 1);
    let (hat, se) = (csv.f(0, "eps_hat"), csv.f(0, "stderr"));
    assert!((hat - 0.3).abs() < 4.0 * se);
    assert!((se / 5e-4 - 1.0).abs() < 0.01);

    let csv = Csv::parse(&stdout_of(&["montecarlo", "--probe", "squeezed", "--r", "1", "--shots", "100000"]));
    assert!((csv.f(0, "eps_hat") - 0.3).abs() < 4.0 * csv.f(0, "stderr"));
    assert_eq!(catmetro(&["montecarlo", "--probe", "thermal"]).status.code(), Some(1));
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "points = 3\nntot_min = 1.0\nntot_max = 10.0\nspacing = \"linear\"\n").unwrap();
    let c = cfg.to_str().unwrap();

    let csv = Csv::parse(&stdout_of(&["figure1", "--config", c]));
    assert_eq!(csv.rows.len(), 3);
    assert_eq!(csv.f(1, "n_tot"), 5.5);

    let csv = Csv::parse(&stdout_of(&["figure1", "--config", c, "--points", "2", "--ntot-max", "4"]));
    assert_eq!(csv.rows.len(), 2);
    assert_eq!(csv.f(1, "n_tot"), 4.0);

    std::fs::write(&cfg, "pointz = 3\n").unwrap();
    assert_eq!(catmetro(&["figure1", "--config", c]).status.code(), Some(1));
}

#[test]
fn bounds_for_every_family() {
    for family in ["coherent", "squeezed", "single_cat", "separable_cats", "entangled_cat"] {
        let csv = Csv::parse(&stdout_of(&["bounds", "--family", family, "--N", "3", "--points", "3"]));
        assert_eq!(csv.header, ["family", "N", "n_tot", "alpha", "eps_min", "qfi"]);
        assert_eq!(csv.rows.len(), 3);
        assert!(csv.rows.iter().all(|r| r[0] == family));
        for i in 0..3 {
            let (eps, qfi) = (csv.f(i, "eps_min"), csv.f(i, "qfi"));
            assert!((qfi * eps * eps - 1.0).abs() < 1e-12);
        }
    }
}
