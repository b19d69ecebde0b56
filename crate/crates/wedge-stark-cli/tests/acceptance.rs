//! Acceptance suite. One test per criterion; each prints a `PASS` line with
//! the measured numbers (visible with `--nocapture`), and the harness prints
//! its own ok/FAILED line per criterion.
//!
//! Run: cargo test -p wedge-stark-cli --test acceptance -- --nocapture

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use rayon::prelude::*;

use wedge_stark::energy::{evaluate_trial, ground_state, TrialEnergy};
use wedge_stark::model::{validate_geometry, FieldSpec, WedgeGeometry};
use wedge_stark::oracle::{fd_ground_energy, PolarGrid};
use wedge_stark::specfun::{bessel_j, first_zero, BesselOrder};
use wedge_stark::sweep::{compare_apertures, run_sweep, FixedParams, SweepAxis, SweepSpec};
use wedge_stark::variational::{stark_shift, VariationalResult};

const QUAD: usize = 96;
const BETA_TOL: f64 = 1e-8;
const EIGEN_TOL: f64 = 1e-10;

fn geometry(d: f64, theta0: f64, l: f64) -> WedgeGeometry {
    validate_geometry(d, theta0, l).expect("valid geometry")
}

fn field(f: f64) -> FieldSpec {
    FieldSpec::new(f).expect("valid field")
}

fn shift_at(d: f64, theta0: f64, l: f64, f: f64) -> VariationalResult {
    stark_shift(geometry(d, theta0, l), field(f), QUAD, QUAD, BETA_TOL).expect("stark shift")
}

#[test]
fn criterion_01_field_free_exactness() {
    let start = Instant::now();
    let r = shift_at(1.0, PI, 1.0, 0.0);
    let elapsed = start.elapsed();
    assert!(
        r.stark_shift.abs() < 1e-8,
        "field-free shift {:e} exceeds 1e-8 R*",
        r.stark_shift
    );
    assert_eq!(r.beta_star, 0.0, "beta* must be 0 at zero field");
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    println!(
        "[acceptance] criterion 01 PASS field-free exactness: |dE| = {:e} R*, beta* = {}, {:?}",
        r.stark_shift.abs(),
        r.beta_star,
        elapsed
    );
}

#[test]
fn criterion_02_fd_oracle_converges_to_e0() {
    let start = Instant::now();
    let g = geometry(1.0, PI, 1.0);
    let alpha = first_zero(BesselOrder::new(1.0).unwrap()).unwrap();
    let exact = alpha * alpha;
    let energies: Vec<f64> = [48, 96, 192]
        .iter()
        .map(|&n| {
            fd_ground_energy(&PolarGrid::new(n, n, g).unwrap(), 0.0, EIGEN_TOL)
                .unwrap()
                .energy
        })
        .collect();
    let errors: Vec<f64> = energies.iter().map(|e| (e - exact).abs()).collect();
    let order_48_96 = (errors[0] / errors[1]).log2();
    let order_96_192 = (errors[1] / errors[2]).log2();
    let final_rel = errors[2] / exact;
    let elapsed = start.elapsed();
    assert!(
        order_48_96 >= 1.9 && order_96_192 >= 1.9,
        "observed orders {order_48_96:.3}, {order_96_192:.3} below 1.9 (errors {errors:?})"
    );
    assert!(final_rel < 5e-3, "relative error {final_rel:e} at 192^2");
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60 s");
    println!(
        "[acceptance] criterion 02 PASS fd convergence: orders {order_48_96:.3}/{order_96_192:.3}, \
         rel err {final_rel:.2e} at 192^2, {elapsed:?}"
    );
}

#[test]
fn criterion_03_shift_is_thickness_independent() {
    let shifts: Vec<f64> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&l| shift_at(10.0, PI / 20.0, l, 1.0).stark_shift)
        .collect();
    let spread = shifts
        .iter()
        .flat_map(|a| shifts.iter().map(move |b| (a - b).abs()))
        .fold(0.0, f64::max);
    assert!(spread < 1e-10, "shift spread {spread:e} across L in {{0.5, 1, 2}}");
    println!(
        "[acceptance] criterion 03 PASS L-independence: spread {spread:e} R* (shifts {shifts:?})"
    );
}

fn field_sweep_values() -> Vec<f64> {
    (0..=8).map(|k| 0.25 * k as f64).collect()
}

#[test]
fn criterion_04_shift_increases_with_field() {
    let spec = SweepSpec {
        axis: SweepAxis::Field,
        values: field_sweep_values(),
        fixed: FixedParams::default(),
        with_oracle: false,
    };
    let table = run_sweep(&spec).unwrap();
    let shifts: Vec<f64> = table.records.iter().map(|r| r.delta_e).collect();
    assert!(shifts.iter().all(|&s| s >= 0.0), "negative shift in {shifts:?}");
    for pair in shifts.windows(2) {
        assert!(pair[1] > pair[0], "not strictly increasing: {shifts:?}");
    }
    println!(
        "[acceptance] criterion 04 PASS field monotonicity: dE(0) = {:e}, dE(2) = {:.6e}",
        shifts[0],
        shifts.last().unwrap()
    );
}

#[test]
fn criterion_05_shift_grows_with_radius() {
    let spec = SweepSpec {
        axis: SweepAxis::Radius,
        values: vec![4.0, 8.0, 12.0, 16.0, 20.0],
        fixed: FixedParams::default(),
        with_oracle: false,
    };
    let table = run_sweep(&spec).unwrap();
    let shifts: Vec<f64> = table.records.iter().map(|r| r.delta_e).collect();
    for pair in shifts.windows(2) {
        assert!(pair[1] >= pair[0], "radius monotonicity broken: {shifts:?}");
    }
    println!("[acceptance] criterion 05 PASS radius monotonicity: {shifts:?}");
}

#[test]
fn criterion_06_smaller_aperture_gives_larger_shift() {
    let table = compare_apertures(10.0, 1.0, &[PI / 20.0, PI / 10.0], 1.0).unwrap();
    let narrow = table.records[0].delta_e;
    let wide = table.records[1].delta_e;
    assert!(
        narrow >= wide,
        "dE(pi/20) = {narrow} should dominate dE(pi/10) = {wide}"
    );
    println!(
        "[acceptance] criterion 06 PASS aperture ordering: dE(pi/20) = {narrow:.6e} >= dE(pi/10) = {wide:.6e}"
    );
}

#[test]
fn criterion_07_variational_bound_against_fd_oracle() {
    let start = Instant::now();
    // Every (d, theta0, F) point exercised by criteria 4-6.
    let mut points: Vec<(f64, f64, f64)> = field_sweep_values()
        .into_iter()
        .map(|f| (10.0, PI / 20.0, f))
        .collect();
    points.extend([4.0, 8.0, 12.0, 16.0, 20.0].iter().map(|&d| (d, PI / 20.0, 1.0)));
    points.extend([(10.0, PI / 20.0, 1.0), (10.0, PI / 10.0, 1.0)]);

    let reports: Vec<String> = points
        .par_iter()
        .map(|&(d, theta0, f)| {
            let g = geometry(d, theta0, 1.0);
            let gs = ground_state(g).unwrap();
            let r = stark_shift(g, field(f), QUAD, QUAD, BETA_TOL).unwrap();
            let planar_min = r.energy - gs.axial_energy();

            let coarse = fd_ground_energy(&PolarGrid::new(96, 96, g).unwrap(), f, EIGEN_TOL)
                .unwrap()
                .energy;
            let fine = fd_ground_energy(&PolarGrid::new(192, 192, g).unwrap(), f, EIGEN_TOL)
                .unwrap()
                .energy;
            let eps_disc = 4.0 / 3.0 * (fine - coarse).abs() + 1e-9;
            assert!(
                planar_min >= coarse - eps_disc,
                "variational energy {planar_min} under FD floor {coarse} - {eps_disc} \
                 at (d = {d}, theta0 = {theta0}, F = {f})"
            );

            let te = TrialEnergy::new(&gs, QUAD, QUAD).unwrap();
            let first_order = f * te.evaluate(0.0, field(f)).unwrap().dipole_mean();
            assert!(
                r.stark_shift <= first_order + 1e-12,
                "shift {} above first-order bound {first_order} at (d = {d}, theta0 = {theta0}, F = {f})",
                r.stark_shift
            );
            format!("(d={d}, t0={theta0:.4}, F={f}): E {planar_min:.6} >= {coarse:.6} - {eps_disc:.1e}")
        })
        .collect();
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "took {elapsed:?}, budget 10 min");
    println!(
        "[acceptance] criterion 07 PASS variational bound on {} points in {elapsed:?}; e.g. {}",
        reports.len(),
        reports[0]
    );
}

#[test]
fn criterion_08_special_function_accuracy() {
    // Half-integer closed forms on (0, 20].
    let mut worst = 0.0f64;
    for i in 1..=400 {
        let x = 20.0 * i as f64 / 400.0;
        let pref = (2.0 / (PI * x)).sqrt();
        let closed = [
            pref * x.sin(),
            pref * (x.sin() / x - x.cos()),
            pref * ((3.0 / (x * x) - 1.0) * x.sin() - 3.0 * x.cos() / x),
        ];
        for (k, expect) in closed.iter().enumerate() {
            let nu = k as f64 + 0.5;
            let got = bessel_j(BesselOrder::new(nu).unwrap(), x).unwrap();
            worst = worst.max((got - expect).abs());
        }
    }
    assert!(worst < 1e-9, "closed-form deviation {worst:e}");

    let z_half = first_zero(BesselOrder::new(0.5).unwrap()).unwrap();
    assert!((z_half - PI).abs() < 1e-10, "first zero of J_1/2: {z_half}");

    // Recurrence residual on a 100-point (nu, x) sample.
    let mut worst_rec = 0.0f64;
    let nus = [1.0_f64, 1.5, 2.5, 4.0, 7.0, 12.0, 20.0, 30.0, 45.0, 59.0];
    for &nu in &nus {
        let z = first_zero(BesselOrder::new(nu.min(60.0)).unwrap()).unwrap();
        for i in 1..=10 {
            let x = 0.3 + (z + 2.0 - 0.3) * i as f64 / 10.0;
            let lhs = bessel_j(BesselOrder::new(nu - 1.0).unwrap(), x).unwrap()
                + bessel_j(BesselOrder::new(nu + 1.0).unwrap(), x).unwrap();
            let rhs = (2.0 * nu / x) * bessel_j(BesselOrder::new(nu).unwrap(), x).unwrap();
            worst_rec = worst_rec.max((lhs - rhs).abs());
        }
    }
    assert!(worst_rec < 1e-9, "recurrence residual {worst_rec:e}");
    println!(
        "[acceptance] criterion 08 PASS special functions: closed-form dev {worst:.2e}, \
         |j_1/2,1 - pi| = {:.2e}, recurrence residual {worst_rec:.2e}",
        (z_half - PI).abs()
    );
}

#[test]
fn criterion_09_quadrature_self_consistency() {
    let g = geometry(10.0, PI / 20.0, 1.0);
    let gs = ground_state(g).unwrap();
    let r = shift_at(10.0, PI / 20.0, 1.0, 1.0);
    let coarse = evaluate_trial(&gs, field(1.0), r.beta_star, QUAD, QUAD).unwrap().e;
    let fine = evaluate_trial(&gs, field(1.0), r.beta_star, 2 * QUAD, 2 * QUAD).unwrap().e;
    let rel = (fine - coarse).abs() / fine.abs();
    assert!(rel < 1e-8, "doubling the rule moves E(beta*) by {rel:e} relative");
    println!("[acceptance] criterion 09 PASS quadrature self-consistency: rel change {rel:.2e}");
}

#[test]
fn criterion_10_csv_contract_and_reproducibility() {
    let dir = std::env::temp_dir().join("wedge_stark_acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let first = dir.join("sweep_a.csv");
    let second = dir.join("sweep_b.csv");
    let args = |out: &std::path::Path| {
        vec![
            "sweep".to_string(),
            "--axis".into(),
            "field".into(),
            "--values".into(),
            "0,0.5,1.0".into(),
            "--d".into(),
            "10".into(),
            "--theta0".into(),
            "0.15707963267948966".into(),
            "--L".into(),
            "1".into(),
            "--nr".into(),
            QUAD.to_string(),
            "--nt".into(),
            QUAD.to_string(),
            "--out".into(),
            out.to_string_lossy().into_owned(),
        ]
    };
    let run = |out: &std::path::Path| {
        let status = Command::new(env!("CARGO_BIN_EXE_wedge-stark"))
            .args(args(out))
            .status()
            .expect("binary runs");
        assert!(status.success());
    };
    run(&first);
    run(&second);

    let text = std::fs::read_to_string(&first).unwrap();
    let header = text
        .lines()
        .find(|l| !l.starts_with('#'))
        .expect("header line");
    assert_eq!(
        header, "axis_value,delta_e_ry,beta_star,e_min_ry,e0_ry,evals,oracle_delta_e_ry",
        "header contract broken"
    );

    // Bit-exact float round-trip of every populated field.
    let data_rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty() && *l != header)
        .collect();
    assert_eq!(data_rows.len(), 3);
    for row in &data_rows {
        for (i, cell) in row.split(',').enumerate() {
            if cell.is_empty() || i == 5 {
                continue; // oracle column off; evals is an integer
            }
            let value: f64 = cell.parse().expect("parsable float");
            assert_eq!(format!("{value:e}"), *cell, "lossy float field '{cell}'");
        }
    }

    // The emitted shifts equal an in-process run of the same spec, bitwise.
    let spec = SweepSpec {
        axis: SweepAxis::Field,
        values: vec![0.0, 0.5, 1.0],
        fixed: FixedParams::default(),
        with_oracle: false,
    };
    let table = run_sweep(&spec).unwrap();
    for (row, record) in data_rows.iter().zip(&table.records) {
        let emitted: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(
            emitted.to_bits(),
            record.delta_e.to_bits(),
            "CSV shift differs from library value"
        );
    }

    // Re-running the identical command reproduces the file byte for byte.
    let text_again = std::fs::read_to_string(&second).unwrap();
    assert_eq!(text, text_again, "identical command produced different output");

    std::fs::remove_dir_all(&dir).ok();
    println!("[acceptance] criterion 10 PASS csv contract: header exact, round-trip bit-exact, reruns identical");
}
