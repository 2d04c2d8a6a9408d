//! Acceptance suite: one pass/fail line per criterion, then an assertion.

use std::path::Path;
use std::time::{Duration, Instant};

use serde_json::Value;
use tempfile::TempDir;

use twostein_core::conditions::{
    hc2_residual, shift_equivalence_check, two_stein_certificate, BlockSplit, SteinVerdict,
};
use twostein_core::io::emit_tensor;
use twostein_core::linalg::dot;
use twostein_core::proof::weights::weight_inequalities;
use twostein_core::proof::{
    case1_identity_check, case2_target, coefficient_forms, final_quadratic_form, q4_psd_witness, random_zvector,
    rhs_combination, select_xi_eta, solve_vector_set, symmetrized_trace_direct, symmetrized_trace_formula,
    CoefficientVector10,
};
use twostein_core::sampling::{block_orthogonal, orthonormal_pair, rng, small_gaussian, small_rational, stream_rng};
use twostein_core::zoo::{complex_space_form, product_sphere_tensor, random_block_tensor, random_tensor, su3_so3_tensor};
use twostein_core::{CurvatureTensor, GaussianRational, Rational, RealScalar, Scalar};

/// Wall-clock budget for the symmetrization oracle.
const RUNTIME_LIMIT: Duration = Duration::from_secs(120);
/// Floor for the smallest eigenvalue of the per-pair forms.
const Q4_EIGEN_TOLERANCE: f64 = 1e-12;
/// Residual tolerance handed to `certify`; exact inputs ignore it.
const CERTIFY_TOLERANCE: f64 = 1e-10;
/// Float inputs after a Gram-Schmidt basis change.
const FLOAT_CURVATURE_TOLERANCE: f64 = 1e-9;

const SYMMETRIZATION_SPLITS: [(usize, usize); 4] = [(2, 3), (1, 4), (3, 3), (2, 4)];
const TENSORS_PER_SPLIT: u64 = 50;
const ZVECTORS_PER_TENSOR: usize = 10;
const KAPPAS: [i64; 4] = [0, 1, 2, 5];
const HC2_PAIRS: u64 = 200;
const SHIFT_IDENTITY_TENSORS: u64 = 50;
const CASE_SEEDS: u64 = 100;
const SOLVER_TARGETS: u64 = 20;
const BASIS_CHANGES: u64 = 32;

fn report(criterion: u32, name: &str, passed: bool, detail: &str) {
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {criterion}: {name} ({detail})");
    assert!(passed, "criterion {criterion} failed: {name}: {detail}");
}

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

fn cc(n: usize, kappa: Rational) -> CurvatureTensor<Rational> {
    CurvatureTensor::constant_curvature(n, kappa).unwrap()
}

fn splits_of(n: usize) -> impl Iterator<Item = BlockSplit> {
    (1..n).map(move |d1| BlockSplit::new(d1, n - d1).unwrap())
}

#[test]
fn criterion_1_symmetrization_oracle() {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut evaluations = 0;
    for (d1, d2) in SYMMETRIZATION_SPLITS {
        let split = BlockSplit::new(d1, d2).unwrap();
        for seed in 0..TENSORS_PER_SPLIT {
            let t = random_block_tensor(d1, d2, seed).unwrap().map(RealScalar::lift);
            let ledger = coefficient_forms(&t, split).unwrap();
            let mut zr = stream_rng(seed, 1);
            for k in 0..ZVECTORS_PER_TENSOR {
                let z = random_zvector(split, &mut zr);
                evaluations += 1;
                if symmetrized_trace_direct(&t, &z).unwrap() != symmetrized_trace_formula(&ledger, &z).unwrap() {
                    mismatches.push(format!("({d1},{d2}) seed {seed} vector {k}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        1,
        "direct symmetrized trace equals the coefficient formula",
        mismatches.is_empty(),
        &format!("{evaluations} evaluations, mismatches {mismatches:?}"),
    );
    report(
        1,
        "symmetrization runtime",
        elapsed < RUNTIME_LIMIT,
        &format!("{elapsed:?} against {RUNTIME_LIMIT:?}"),
    );
}

#[test]
fn criterion_2_shift() {
    let mut failures = Vec::new();
    for n in [5usize, 6] {
        for kappa in KAPPAS {
            let r = cc(n, q(kappa));
            for k in 0..HC2_PAIRS {
                let (x, y) = orthonormal_pair::<Rational>(n, &mut stream_rng(kappa as u64, k));
                if hc2_residual(&r, &x, &y, 0.0).unwrap() != q(0) {
                    failures.push(format!("hc2 n={n} kappa={kappa} pair {k}"));
                }
            }
            let cr = r.shift();
            let h = q(n as i64 - 1) * q(kappa - 2) * q(kappa - 2);
            let cert = two_stein_certificate(&cr, 0.0);
            if cert.f2 != h || cert.residual2 != 0.0 {
                failures.push(format!("H n={n} kappa={kappa}: f2 {} residual {}", cert.f2, cert.residual2));
            }
            let mut xr = rng(kappa as u64 ^ 0x77);
            for _ in 0..20 {
                let x: Vec<Rational> = (0..n).map(|_| small_rational(&mut xr)).collect();
                let norm = dot(&x, &x);
                if cr.trace_jacobi_squared(&x) != h * norm * norm {
                    failures.push(format!("Tr(cR_X^2) n={n} kappa={kappa}"));
                }
            }
        }
    }
    report(
        2,
        "constant curvature satisfies hc2 and its shift is 2-stein with H = (n-1)(kappa-2)^2",
        failures.is_empty(),
        &format!("n in {{5,6}}, kappa in {KAPPAS:?}, {HC2_PAIRS} pairs; failures {failures:?}"),
    );
    assert_eq!(
        two_stein_certificate(&cc(5, q(5)).shift(), 0.0).f2,
        q(36),
        "H = 36 at n = 5, kappa = 5"
    );

    let mut broken = Vec::new();
    for seed in 0..SHIFT_IDENTITY_TENSORS {
        let n = 5 + (seed % 2) as usize;
        let report = shift_equivalence_check(&random_tensor(n, seed).unwrap(), 4, seed, 0.0);
        if !report.identity_holds || report.identity_defect != 0.0 {
            broken.push(seed);
        }
    }
    report(
        2,
        "shift identity holds exactly for arbitrary tensors",
        broken.is_empty(),
        &format!("{SHIFT_IDENTITY_TENSORS} tensors; failing seeds {broken:?}"),
    );
}

#[test]
fn criterion_3_two_stein_oracles() {
    let mut failures = Vec::new();
    for n in [5usize, 6, 7] {
        for kappa in [Rational::new(-3, 2), q(0), q(1), q(5)] {
            let cert = two_stein_certificate(&cc(n, kappa), 0.0);
            let m = q(n as i64 - 1);
            if (cert.f1, cert.f2) != (m * kappa, m * kappa * kappa) || cert.verdict != SteinVerdict::TwoStein {
                failures.push(format!("constant n={n} kappa={kappa}"));
            }
        }
    }
    for c in [q(1), q(4), Rational::new(-2, 3)] {
        let cert = two_stein_certificate(&complex_space_form(2, c).unwrap(), 0.0);
        if cert.verdict != SteinVerdict::TwoStein || cert.residual1 != 0.0 || cert.residual2 != 0.0 {
            failures.push(format!("complex space form c={c}"));
        }
    }
    let cert = two_stein_certificate(&su3_so3_tensor(Rational::new(3, 2)).unwrap(), 0.0);
    if cert.verdict != SteinVerdict::TwoStein || cert.residual1 != 0.0 || cert.residual2 != 0.0 {
        failures.push("su3/so3".into());
    }
    let cert = two_stein_certificate(&product_sphere_tensor(2, 3, q(2), q(1)).unwrap(), 0.0);
    if cert.verdict != SteinVerdict::Einstein || cert.residual1 != 0.0 || cert.residual2 == 0.0 {
        failures.push("product of spheres".into());
    }
    report(
        3,
        "2-stein oracles on space forms, su3/so3 and a product of spheres",
        failures.is_empty(),
        &format!("failures {failures:?}"),
    );
}

#[test]
fn criterion_4_case_one_identity() {
    let mut failures = Vec::new();
    for d2 in [4usize, 5] {
        let split = BlockSplit::new(1, d2).unwrap();
        for seed in 0..CASE_SEEDS {
            let cr = random_block_tensor(1, d2, seed).unwrap().shift();
            let (lhs, squares) = case1_identity_check(&cr, split).unwrap();
            if lhs != squares {
                failures.push(format!("(1,{d2}) seed {seed}"));
            }
        }
    }
    report(
        4,
        "single-coordinate combination equals its sum of squares",
        failures.is_empty(),
        &format!("{CASE_SEEDS} tensors at (1,4) and (1,5); failures {failures:?}"),
    );
}

#[test]
fn criterion_5_quadratic_decomposition() {
    let zero = q(0);
    let mut failures = Vec::new();
    let mut witnesses = Vec::new();
    for (d1, d2) in [(2usize, 3usize), (2, 4), (3, 3)] {
        let split = BlockSplit::new(d1, d2).unwrap();
        let w = select_xi_eta(d1, d2).unwrap();
        for seed in 0..CASE_SEEDS {
            let cr = random_block_tensor(d1, d2, seed).unwrap().shift();
            let dec = final_quadratic_form(&cr, split, &w, 0.0).unwrap();
            let exact = dec.total == dec.q1 + dec.q2 + dec.q3 + dec.q4
                && dec.q3 == dec.q3_raw
                && dec.q4 == dec.q4_explicit;
            let signs = dec.q1 >= zero && dec.q2 >= zero && dec.q3 >= zero;
            if !exact || !signs || dec.q4.to_f64() < -Q4_EIGEN_TOLERANCE {
                failures.push(format!("({d1},{d2}) seed {seed}"));
            }
        }
        let wit = q4_psd_witness(split, &w, Q4_EIGEN_TOLERANCE);
        let total = q((d1 + d2) as i64);
        let closed = q(2) * total * w.xi * w.xi + q(2) * (total - q(2)) * w.xi * w.eta;
        let eigen_ok = wit.min_eigenvalues.iter().all(|&e| e >= -Q4_EIGEN_TOLERANCE);
        if !wit.passed || !eigen_ok || wit.determinants[0] != closed || wit.determinants != wit.expected {
            failures.push(format!("witness ({d1},{d2})"));
        }
        witnesses.push(format!("({d1},{d2}): det {} min eig {:.3e}", wit.determinants[0], wit.min_eigenvalues[0]));
    }
    report(
        5,
        "total = q1+q2+q3+q4 exactly, q1..q3 >= 0, q4 semidefinite, determinant closed form",
        failures.is_empty(),
        &format!("{witnesses:?}; failures {failures:?}"),
    );
}

#[test]
fn criterion_6_vector_set_solver() {
    let mut failures = Vec::new();
    let mut largest = 0;
    for (d1, d2) in [(2usize, 3usize), (3, 3)] {
        let split = BlockSplit::new(d1, d2).unwrap();
        let mut tr = rng(d1 as u64 * 10 + d2 as u64);
        for k in 0..SOLVER_TARGETS {
            let target = CoefficientVector10::from_array(std::array::from_fn(|_| small_gaussian(&mut tr)));
            match solve_vector_set(&target, split) {
                Ok(set) if set.aggregate == target => largest = largest.max(set.len()),
                _ => failures.push(format!("({d1},{d2}) target {k}")),
            }
        }
    }
    report(
        6,
        "vector sets reproduce random Gaussian-rational targets exactly",
        failures.is_empty(),
        &format!("{SOLVER_TARGETS} targets at (2,3) and (3,3), largest set {largest}; failures {failures:?}"),
    );

    let mut failures = Vec::new();
    let zero = GaussianRational::new(q(0), q(0));
    for (d1, d2) in [(2usize, 3usize), (2, 4), (3, 3), (3, 4)] {
        let split = BlockSplit::new(d1, d2).unwrap();
        let target = case2_target(&select_xi_eta(d1, d2).unwrap());
        let set = solve_vector_set(&target, split).unwrap();
        if set.aggregate != target || rhs_combination(split, &target) != zero {
            failures.push(format!("target ({d1},{d2})"));
        }
        for kappa in KAPPAS {
            let cr = cc(d1 + d2, q(kappa)).shift().map(RealScalar::lift);
            let ledger = coefficient_forms(&cr, split).unwrap();
            let s = GaussianRational::sum_iter(
                set.vectors.iter().map(|z| symmetrized_trace_formula(&ledger, z).unwrap()),
            );
            if s != zero {
                failures.push(format!("S(X) at ({d1},{d2}) kappa={kappa} is {s}"));
            }
        }
    }
    report(
        6,
        "the prescribed target is reproduced and its symmetrized trace vanishes on shifted 2-stein inputs",
        failures.is_empty(),
        &format!("failures {failures:?}"),
    );
}

fn certify(dir: &Path, name: &str, text: &str, split: BlockSplit) -> (i32, Value) {
    let input = dir.join(format!("{name}.json"));
    let output = dir.join(format!("{name}.report.json"));
    std::fs::write(&input, text).unwrap();
    let (d1, d2) = (split.d1.to_string(), split.d2.to_string());
    let tol = CERTIFY_TOLERANCE.to_string();
    let code = twostein_cli::main_with_args([
        "twostein",
        "certify",
        input.to_str().unwrap(),
        "--split",
        &d1,
        &d2,
        "--tolerance",
        &tol,
        "--out",
        output.to_str().unwrap(),
    ]);
    let report = serde_json::from_str(&std::fs::read_to_string(&output).unwrap_or_else(|_| "null".into())).unwrap();
    (code, report)
}

fn hypothesis_of(report: &Value) -> Option<&str> {
    (report["verdict"] == "failure").then(|| report["failing_hypothesis"].as_str()).flatten()
}

#[test]
fn criterion_7_certify_pipeline() {
    let dir = TempDir::new().unwrap();
    let mut failures = Vec::new();
    let mut runs = 0;
    for n in [5usize, 6, 7] {
        let kappa = q(n as i64 - 2);
        let text = emit_tensor(&cc(n, kappa));
        for split in splits_of(n) {
            runs += 1;
            let (code, report) = certify(dir.path(), &format!("cc{n}_{}", split.d1), &text, split);
            let ok = code == 0
                && report["verdict"] == "constant_curvature"
                && report["c"] == (kappa - q(2)).to_value()
                && report["c_unshifted"] == kappa.to_value();
            if !ok {
                failures.push(format!("n={n} split ({},{}) exit {code}", split.d1, split.d2));
            }
        }
    }
    report(
        7,
        "certify accepts constant curvature for n in {5,6,7} and every split",
        failures.is_empty(),
        &format!("{runs} runs; failures {failures:?}"),
    );

    let su3 = emit_tensor(&su3_so3_tensor(Rational::new(3, 2)).unwrap());
    let (su3_code, su3_report) = certify(dir.path(), "su3", &su3, BlockSplit::new(1, 4).unwrap());
    let rb = emit_tensor(&random_block_tensor(2, 3, 1).unwrap());
    let (rb_code, rb_report) = certify(dir.path(), "rb", &rb, BlockSplit::new(2, 3).unwrap());
    let rejected = su3_code == 1
        && hypothesis_of(&su3_report) == Some("block_condition")
        && rb_code == 1
        && hypothesis_of(&rb_report) == Some("two_stein");
    report(
        7,
        "certify rejects su3/so3 on the block condition and a random block tensor on 2-stein",
        rejected,
        &format!(
            "su3 exit {su3_code} {:?}, random block exit {rb_code} {:?}",
            hypothesis_of(&su3_report),
            hypothesis_of(&rb_report)
        ),
    );

    let mut failures = Vec::new();
    let base_cc = cc(5, q(3));
    let base_su3 = su3_so3_tensor(Rational::new(3, 2)).unwrap();
    let base_rb = random_block_tensor(2, 3, 1).unwrap();
    let base_float = random_block_tensor(3, 3, 2).unwrap();
    let float_cc = cc(6, Rational::new(1, 2)).map(|v| v.to_f64());
    for frame in 0..BASIS_CHANGES {
        let o23 = block_orthogonal::<Rational>(2, 3, &mut stream_rng(0xacce, frame));
        let o14 = block_orthogonal::<Rational>(1, 4, &mut stream_rng(0xacce, frame));
        let (code, rep) = certify(dir.path(), "rot_cc", &emit_tensor(&base_cc.change_basis(&o23)), BlockSplit::new(2, 3).unwrap());
        if code != 0 || rep["c"] != q(1).to_value() {
            failures.push(format!("constant frame {frame}"));
        }
        let (code, rep) = certify(dir.path(), "rot_su3", &emit_tensor(&base_su3.change_basis(&o14)), BlockSplit::new(1, 4).unwrap());
        if code != 1 || hypothesis_of(&rep) != Some("block_condition") {
            failures.push(format!("su3 frame {frame}"));
        }
        let (code, rep) = certify(dir.path(), "rot_rb", &emit_tensor(&base_rb.change_basis(&o23)), BlockSplit::new(2, 3).unwrap());
        if code != 1 || hypothesis_of(&rep) != Some("two_stein") {
            failures.push(format!("random block frame {frame}"));
        }
        let of = block_orthogonal::<f64>(3, 3, &mut stream_rng(0xf10a, frame));
        let (code, rep) = certify(dir.path(), "rot_f64", &emit_tensor(&float_cc.change_basis(&of)), BlockSplit::new(3, 3).unwrap());
        let c = rep["c"].as_f64().unwrap_or(f64::NAN);
        if code != 0 || (c + 1.5).abs() > FLOAT_CURVATURE_TOLERANCE {
            failures.push(format!("float constant frame {frame}"));
        }
        let (code, rep) = certify(
            dir.path(),
            "rot_f64_rb",
            &emit_tensor(&base_float.map(|v| v.to_f64()).change_basis(&of)),
            BlockSplit::new(3, 3).unwrap(),
        );
        if code != 1 || hypothesis_of(&rep) != Some("two_stein") {
            failures.push(format!("float random block frame {frame}"));
        }
    }
    report(
        7,
        "verdicts are invariant under block-orthogonal basis changes",
        failures.is_empty(),
        &format!("{BASIS_CHANGES} frames, rational and f64; failures {failures:?}"),
    );
}

#[test]
fn criterion_8_weight_scan() {
    let zero = q(0);
    let mut failures = Vec::new();
    let mut scanned = 0;
    for d1 in 2..=8usize {
        for d2 in d1..=8usize {
            if d1 + d2 < 5 {
                // no admissible weights: mu > 0 and nu > 0 contradict each other at (2,2)
                continue;
            }
            scanned += 1;
            match select_xi_eta(d1, d2) {
                Ok(w) => {
                    let [mu, nu, third, fourth] = weight_inequalities(d1, d2, w.xi, w.eta);
                    let ok = w.xi > zero
                        && w.eta > zero
                        && mu > zero
                        && nu > zero
                        && third >= zero
                        && fourth >= zero
                        && (mu, nu) == (w.mu, w.nu);
                    if !ok {
                        failures.push(format!("({d1},{d2})"));
                    }
                }
                Err(e) => failures.push(format!("({d1},{d2}): {e}")),
            }
        }
    }
    report(
        8,
        "selected weights satisfy all four inequalities for 2 <= d1 <= d2 <= 8",
        failures.is_empty(),
        &format!("{scanned} splits; failures {failures:?}"),
    );
}
