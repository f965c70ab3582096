//! One test per acceptance criterion. Each prints a PASS/FAIL line before
//! asserting, so a failing run still shows every verdict.

mod common;

use std::time::Instant;

use common::{characteristic_polynomial, durand_kerner, report};
use pt_star::cryptoherm::{
    assemble_metric, build_h4, convergence_study, metric_component, solve_metric_space, spectrum_reality,
    FdStarOperator,
};
use pt_star::linalg::{eigenvalues, is_positive_definite, DEFAULT_RANK_TOL};
use pt_star::roots::{
    compare_closed_form, count_real_roots, find_exceptional_point, gap_exponent, locate_complex_roots, scan_real_roots,
    ContourOptions, EpOptions, Interval, Rect, ScanOptions,
};
use pt_star::stargraph::StarGraphSpec;

const ALPHA_STAR: f64 = 0.786_280_629_8;

fn window() -> Interval {
    Interval::new(0.05, 2.0).unwrap()
}

fn six(alpha: f64) -> StarGraphSpec {
    StarGraphSpec::new(6, alpha).unwrap()
}

#[test]
fn criterion_01_exceptional_point() {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = pt_star::cli::run(
        ["pt-star", "ep", "--q", "6", "--alpha-bracket", "0.7,1.0", "--window", "0.05,2"],
        &mut out,
        &mut err,
    );
    let secs = start.elapsed().as_secs_f64();
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap_or_default();
    let alpha = v["alpha_star"].as_f64().unwrap_or(f64::NAN);
    let pass = code == 0 && (alpha - ALPHA_STAR).abs() <= 1e-6 && secs < 10.0;
    report(1, "exceptional point", pass, &format!("alpha* = {alpha:.10}, exit {code}, {secs:.2} s"));
    assert!(pass);
}

#[test]
fn criterion_02_root_counts() {
    let mut pass = true;
    let mut detail = Vec::new();
    for (alpha, want) in [(0.7, 4), (1.0, 2)] {
        let start = Instant::now();
        let n = count_real_roots(&six(alpha), window(), &ScanOptions::default()).unwrap();
        let secs = start.elapsed().as_secs_f64();
        pass &= n == want && secs < 1.0;
        detail.push(format!("alpha {alpha}: {n} (want {want}, {secs:.3} s)"));
    }
    report(2, "real root counts", pass, &detail.join("; "));
    assert!(pass);
}

#[test]
fn criterion_03_complexification() {
    let spec = six(1.0);
    let rect = Rect::new(Interval::new(0.0, 2.0).unwrap(), Interval::new(0.01, 1.0).unwrap());
    let roots = locate_complex_roots(&spec, rect, &ContourOptions::default()).unwrap();
    let real = count_real_roots(&spec, window(), &ScanOptions::default()).unwrap();
    let complex: usize = roots.iter().map(|r| r.multiplicity).sum();
    let residual_ok = roots.iter().all(|r| r.residual <= 1e-10);
    let pass = complex == 1 && residual_ok && real + 2 * complex == 4;
    let found: Vec<String> = roots.iter().map(|r| format!("{:.10} (|det| {:.1e})", r.k, r.residual)).collect();
    report(
        3,
        "complexification",
        pass,
        &format!("{complex} root(s) in box [{}], real + 2 complex = {}", found.join(", "), real + 2 * complex),
    );
    assert!(pass);
}

#[test]
fn criterion_04_oracle_equivalence() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    for alpha in [0.3, 0.7, 1.0] {
        let a = compare_closed_form(alpha, 1.0, Interval::new(0.05, 6.0).unwrap(), 6000).unwrap();
        pass &= a.agrees(1e-9) && !a.determinant.is_empty();
        detail.push(format!("alpha {alpha}: {} roots, max dev {:.1e}", a.determinant.len(), a.max_deviation));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 5.0;
    report(4, "determinant vs closed form", pass, &format!("{}; {secs:.2} s", detail.join("; ")));
    assert!(pass);
}

#[test]
fn criterion_05_metric_family_exactness() {
    let mut worst = 0.0_f64;
    for lambda in [-0.9, -0.5, 0.0, 0.3, 0.7, 0.99] {
        let h = build_h4(lambda);
        for mask in 0..16u32 {
            let alphas: [f64; 4] = std::array::from_fn(|j| ((mask >> j) & 1) as f64);
            let c = assemble_metric(lambda, alphas).unwrap();
            let scale = h.matrix().max_abs() * c.theta.max_abs();
            if scale > 0.0 {
                worst = worst.max(c.residual / scale);
            } else {
                assert_eq!(c.residual, 0.0);
            }
        }
    }
    let pass = worst <= 1e-13;
    report(5, "metric family exactness", pass, &format!("max residual / scale = {worst:.2e}"));
    assert!(pass);
}

#[test]
fn criterion_06_metric_space_dimension() {
    let mut pass = true;
    let mut worst = 0.0_f64;
    let mut dims = Vec::new();
    for lambda in [-0.99, -0.9, -0.5, -0.1, 0.0, 0.3, 0.5, 0.7, 0.9, 0.99] {
        let space = solve_metric_space(&build_h4(lambda), DEFAULT_RANK_TOL).unwrap();
        pass &= space.dimension() == 4;
        dims.push(space.dimension());
        for j in 1..=4 {
            let r = space.project(&metric_component(j, lambda).unwrap()).unwrap().relative_residual;
            worst = worst.max(r);
        }
    }
    pass &= worst <= 1e-10;
    report(6, "metric space dimension", pass, &format!("dimensions {dims:?}, worst projection residual {worst:.1e}"));
    assert!(pass);
}

#[test]
fn criterion_07_positivity_boundary() {
    let pd = |l: f64| is_positive_definite(&metric_component(1, l).unwrap(), 1e-12, 0.0).unwrap();
    let inside = [0.999, -0.999].map(|l| pd(l).is_positive_definite);
    let outside = [1.001, -1.001].map(|l| pd(l).is_positive_definite);
    let pass = inside.iter().all(|x| *x) && outside.iter().all(|x| !*x);
    report(
        7,
        "positivity boundary of M1",
        pass,
        &format!("PD at +-0.999: {inside:?}, PD at +-1.001: {outside:?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_08_spectral_reality() {
    let unbroken = spectrum_reality(&build_h4(0.5), 1e-12).unwrap();
    let broken = spectrum_reality(&build_h4(1.5), 1e-12).unwrap();

    // the brute-force roots must agree with the eigensolver
    let oracle = durand_kerner(&characteristic_polynomial(build_h4(1.5).matrix()));
    let eig = eigenvalues(build_h4(1.5).matrix()).unwrap();
    let agree = eig.iter().all(|e| oracle.iter().any(|o| (o - e).norm() < 1e-9));
    let oracle_pair = oracle
        .iter()
        .any(|z| z.im > 1e-6 && oracle.iter().any(|w| (w - z.conj()).norm() < 1e-9));
    let solver_pair = broken
        .eigenvalues
        .iter()
        .any(|z| z.im > 1e-6 && broken.eigenvalues.iter().any(|w| (w - z.conj()).norm() < 1e-9));

    let pass = unbroken.max_imag <= 1e-12 && oracle_pair && solver_pair && agree;
    report(
        8,
        "spectral reality",
        pass,
        &format!(
            "max |Im E| at 0.5 = {:.1e}; conjugate pair at 1.5: solver {solver_pair}, oracle {oracle_pair}",
            unbroken.max_imag
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_09_finite_difference_cross_validation() {
    let start = Instant::now();
    let targets: Vec<f64> = scan_real_roots(&six(0.7), window(), &ScanOptions::default())
        .unwrap()
        .iter()
        .map(|r| r.k)
        .collect();
    let study = convergence_study(&six(0.7), &[200, 400, 800], &targets).unwrap();
    let order_ok = targets.len() == 4 && study.min_order >= 1.8;

    let op = FdStarOperator::new(&six(0.0), 800).unwrap();
    let ks = op.real_momenta(Interval::new(0.05, 3.5).unwrap(), 4000).unwrap();
    let lowest = ks.first().copied().unwrap_or(f64::NAN);
    let neumann_ok = (lowest - std::f64::consts::PI).abs() <= 1e-3;
    // modes whose arms all vanish at the center are reported separately
    let with_center = ks
        .iter()
        .copied()
        .find(|k| op.mode(num_complex::Complex64::new(k * k, 0.0)).is_some())
        .unwrap_or(f64::NAN);
    let secs = start.elapsed().as_secs_f64();

    let pass = order_ok && neumann_ok && secs < 60.0;
    report(
        9,
        "finite-difference cross-validation",
        pass,
        &format!(
            "min order {:.3} over {} roots; alpha=0 FD momenta below 3.5 = {ks:.6?}, lowest nonzero {lowest:.6}, lowest with center amplitude {with_center:.6}; {secs:.2} s",
            study.min_order,
            targets.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_10_square_root_gap() {
    let base = six(0.0);
    let ep = find_exceptional_point(&base, Interval::new(0.7, 1.0).unwrap(), window(), &EpOptions::default()).unwrap();
    let deltas: Vec<f64> = (0..=6).map(|i| 1e-5 * 10f64.powf(0.5 * i as f64)).collect();
    let fit = gap_exponent(&base, &ep, &deltas).unwrap();
    let pass = (fit.exponent - 0.5).abs() <= 0.1;
    report(10, "square-root gap law", pass, &format!("exponent {:.4} over delta in [1e-5, 1e-2]", fit.exponent));
    assert!(pass);
}

#[test]
fn conservation_of_root_count_across_the_merger() {
    // informational companion to criterion 3: the box count jumps by one
    // while the real count drops by two, and the total stays put
    let rect = Rect::new(Interval::new(0.0, 2.0).unwrap(), Interval::new(0.01, 1.0).unwrap());
    let total = |alpha: f64| {
        let spec = six(alpha);
        let real = count_real_roots(&spec, window(), &ScanOptions::default()).unwrap();
        let complex = locate_complex_roots(&spec, rect, &ContourOptions::default()).unwrap().len();
        (real, complex)
    };
    let below = total(0.7);
    let above = total(1.0);
    assert_eq!(below.0, above.0 + 2);
    assert_eq!(above.1, below.1 + 1);
    assert_eq!(below.0 + 2 * below.1, above.0 + 2 * above.1);
}
