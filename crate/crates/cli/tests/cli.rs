use std::io::Write;
use std::process::{Command, Output};

fn bhkernel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhkernel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn parse(bytes: &[u8]) -> Self {
        let mut r = csv::Reader::from_reader(bytes);
        let header = r.headers().unwrap().iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.unwrap().iter().map(String::from).collect())
            .collect();
        Self { header, rows }
    }

    fn col(&self, name: &str) -> Vec<f64> {
        let i = self
            .header
            .iter()
            .position(|h| h == name)
            .unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[i].parse().unwrap()).collect()
    }

    fn assert_no_nan(&self) {
        for r in &self.rows {
            assert!(
                r.iter().all(|v| v.parse::<f64>().is_ok_and(|f| !f.is_nan())),
                "{r:?}"
            );
        }
    }
}

fn run_csv(args: &[&str]) -> Csv {
    let o = bhkernel(args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let c = Csv::parse(&o.stdout);
    c.assert_no_nan();
    c
}

#[test]
fn eval_phihat_at_origin() {
    let c = run_csv(&[
        "eval",
        "--case",
        "quartic",
        "--function",
        "phi",
        "--x",
        "0",
        "--digits",
        "25",
    ]);
    assert_eq!(c.header, ["x", "exact_phihat", "exact_phihat_err"]);
    // 1/(2Γ(3/4)), mpmath at 30 digits.
    assert!(
        c.rows[0][1].starts_with("4.080244695491314905385430"),
        "{}",
        c.rows[0][1]
    );
}

#[test]
fn eval_psihat_two_methods_agree() {
    let c = run_csv(&[
        "eval",
        "--function",
        "psi",
        "--x",
        "1",
        "--methods",
        "exact,quadrature",
        "--digits",
        "30",
    ]);
    assert_eq!(
        c.header,
        [
            "x",
            "exact_psihat",
            "exact_psihat_err",
            "quadrature_psihat",
            "quadrature_psihat_err"
        ]
    );
    let (a, b) = (c.col("exact_psihat")[0], c.col("quadrature_psihat")[0]);
    assert!((a - b).abs() <= 1e-15 * a.abs());
    assert!(c.col("quadrature_psihat_err")[0] <= 1e-20);
}

#[test]
fn eval_sextic_every_method() {
    let c = run_csv(&[
        "eval",
        "--case",
        "sextic",
        "--function",
        "phi",
        "--xmin",
        "0.5",
        "--xmax",
        "1.5",
        "--step",
        "0.5",
        "--methods",
        "exact,quadrature,mellin-barnes,asymptotic-small",
    ]);
    assert_eq!(c.col("x"), [0.5, 1.0, 1.5]);
    let exact = c.col("exact_phi");
    for m in ["quadrature_phi", "mellin-barnes_phi", "asymptotic-small_phi"] {
        for (a, b) in exact.iter().zip(c.col(m)) {
            assert!((a - b).abs() < 1e-15, "{m}");
        }
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["eval", "--xmin", "0", "--xmax", "1", "--step", "0"][..],
        &["eval", "--xmin", "1", "--xmax", "0", "--step", "0.1"],
        &[
            "eval",
            "--x",
            "1",
            "--methods",
            "quadrature",
            "--function",
            "density",
        ],
        &[
            "eval",
            "--x",
            "1",
            "--case",
            "quartic",
            "--methods",
            "asymptotic-small",
        ],
        &["eval", "--x", "1", "--function", "kernel"],
        &["eval", "--x", "0", "--methods", "asymptotic-large"],
        &["eval", "--x", "1", "--digits", "0"],
        &["eval", "--function", "phi"],
        &["eval", "--x", "1", "--methods", "simpson"],
        &["figure", "10"],
        &["figure", "0"],
        &["precision-study", "--p", "0"],
        &["frobnicate"],
    ] {
        let o = bhkernel(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn io_errors_exit_four() {
    let o = bhkernel(&[
        "figure",
        "1",
        "--xmax",
        "0.1",
        "--out",
        "/nonexistent-dir/fig.csv",
    ]);
    assert_eq!(code(&o), 4);
    let o = bhkernel(&["--config", "/nonexistent-dir/run.cfg", "eval", "--x", "1"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn config_file_with_flag_override() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(
        f,
        "# sextic psi\ncase = sextic\nfunction = psi\nx = 1\ndigits = 12"
    )
    .unwrap();
    let path = f.path().to_str().unwrap();
    let c = run_csv(&["--config", path, "eval"]);
    assert_eq!(c.header[1], "exact_psi");
    assert_eq!(
        c.rows[0][1].trim_start_matches('-').len(),
        "1.23456789012e-1".len()
    );
    let c = run_csv(&["--config", path, "eval", "--digits", "20", "--function", "phi"]);
    assert_eq!(c.header[1], "exact_phi");
    assert_eq!(
        c.rows[0][1].trim_start_matches('-').len(),
        "1.2345678901234567890e-1".len()
    );

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "colour = blue").unwrap();
    let o = bhkernel(&["--config", bad.path().to_str().unwrap(), "eval", "--x", "1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.csv");
    let o = bhkernel(&[
        "figure",
        "1",
        "--xmax",
        "1",
        "--step",
        "0.25",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let c = Csv::parse(&std::fs::read(&path).unwrap());
    assert_eq!(
        c.header,
        [
            "x",
            "exact_phihat",
            "exact_phihat_err",
            "exact_phi",
            "exact_phi_err"
        ]
    );
    assert_eq!(c.col("x"), [0.0, 0.25, 0.5, 0.75, 1.0]);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "figure", "4", "--xmin", "-2", "--xmax", "2", "--step", "0.1", "--digits", "25",
    ];
    let a = bhkernel(&args);
    let b = bhkernel(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn figure_column_structure() {
    let small = ["--xmax", "3", "--step", "0.25"];
    let f2 = run_csv(&[&["figure", "2"][..], &small].concat());
    assert_eq!(f2.header[1], "exact_psihat");
    assert_eq!(f2.header[3], "exact_psi");

    let f3 = run_csv(&[&["figure", "3"][..], &small].concat());
    let sections: Vec<&String> = f3
        .header
        .iter()
        .filter(|h| h.starts_with("exact_khat") && !h.ends_with("_err"))
        .collect();
    assert_eq!(
        sections,
        [
            "exact_khat_y0.5",
            "exact_khat_y1",
            "exact_khat_y1.5",
            "exact_khat_y2",
            "exact_khat_y2.5"
        ]
    );

    let f5 = run_csv(&["figure", "5", "--xmin", "1", "--xmax", "50", "--step", "7"]);
    for (x, v) in f5.col("x").iter().zip(f5.col("asymptotic-large_rhohat")) {
        assert!((v - 0.276 * x.powf(1.0 / 3.0)).abs() < 1e-12);
    }
    for (x, v) in f5.col("x").iter().zip(f5.col("asymptotic-large_rho")) {
        assert!((v - 0.270 * x.powf(0.2)).abs() < 1e-12);
    }
    assert!(f5.header.contains(&"exact_rhohat".to_string()) && f5.header.contains(&"exact_rho".to_string()));

    for (id, col) in [("6", "exact_neg_rhohat_c"), ("7", "exact_neg_rho_c")] {
        let f = run_csv(&["figure", id, "--step", "0.1"]);
        assert_eq!(f.rows.len(), 101);
        assert!(f.col(col).iter().all(|v| *v >= 0.0), "figure {id}");
    }
}

#[test]
fn precision_study_high_precision_is_sufficient_on_small_x() {
    let c = run_csv(&["precision-study", "--p", "50", "--xmax", "5", "--step", "0.25"]);
    assert_eq!(
        c.header,
        [
            "x",
            "reference_khat",
            "reference_khat_err",
            "p50_khat",
            "p50_khat_err"
        ]
    );
    assert!(c.col("p50_khat_err").iter().all(|d| *d < 1e-30));
}

#[test]
fn precision_study_agreement_widens_with_precision() {
    let c = run_csv(&[
        "precision-study",
        "--y0",
        "0.16666666666666666",
        "--p",
        "10,15",
        "--step",
        "0.1",
    ]);
    let xs = c.col("x");
    let (d10, d15) = (c.col("p10_khat_err"), c.col("p15_khat_err"));
    assert!(xs
        .iter()
        .zip(&d10)
        .any(|(x, d)| (8.0..=16.0).contains(x) && *d > 1e-2));
    let extent = |d: &[f64]| d.iter().position(|v| *v > 1e-4).expect("breaks down on the grid");
    let (e10, e15) = (extent(&d10), extent(&d15));
    assert!(e10 > 0 && e15 > e10, "{} vs {}", xs[e10], xs[e15]);
}

#[test]
fn figures_eight_and_nine_use_their_sections() {
    for (id, y0) in [("8", "0.16666666666666666"), ("9", "6")] {
        let fig = bhkernel(&["figure", id, "--xmax", "2", "--step", "0.5"]);
        let study = bhkernel(&["precision-study", "--y0", y0, "--xmax", "2", "--step", "0.5"]);
        assert_eq!(code(&fig), 0);
        assert_eq!(fig.stdout, study.stdout, "figure {id}");
    }
}

#[test]
fn selfcheck_passes_on_a_fresh_build() {
    let o = bhkernel(&["selfcheck"]);
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    assert_eq!(code(&o), 0, "{text}");
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() >= 10);
    assert!(lines.iter().all(|l| l.starts_with("PASS ")));
}
