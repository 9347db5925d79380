//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! `[PASS]`/`[FAIL]` line per criterion and exits nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use common::*;
use framerep::formats::{serialize_frame, serialize_matrix, serialize_vector};
use framerep::frames::gram;
use framerep::numerics::frobenius_norm;
use framerep::oprep::{
    frame_multiplier, hs_norm, kernel_of_representation, matrix_of_operator, operator_of_matrix,
    range_map_check, rank_one, roundtrip_reconstruct,
};
use framerep::solveq::{solve, SolveOptions};
use framerep::{Complex64, ComplexMatrix, ComplexVector, FrameClass, LinearOperator};
use rand::Rng;

/// Running maximum of a measured error against its tolerance.
struct Worst {
    value: f64,
    tol: f64,
    label: &'static str,
}

impl Worst {
    fn new(label: &'static str, tol: f64) -> Self {
        Worst {
            value: 0.0,
            tol,
            label,
        }
    }

    fn see(&mut self, v: f64) {
        // NaN must fail, so it is recorded as infinite
        let v = if v.is_nan() { f64::INFINITY } else { v };
        self.value = self.value.max(v);
    }

    fn ok(&self) -> bool {
        self.value <= self.tol
    }

    fn describe(&self) -> String {
        format!("{} {:.2e} (tol {:.0e})", self.label, self.value, self.tol)
    }
}

fn finish(checks: &[Worst]) -> Result<String, String> {
    let text = checks
        .iter()
        .map(Worst::describe)
        .collect::<Vec<_>>()
        .join("; ");
    if checks.iter().all(Worst::ok) {
        Ok(text)
    } else {
        Err(text)
    }
}

fn ac1_golden_values() -> Result<String, String> {
    let psi = psi0();
    let mut abs = Worst::new("max abs error", 1e-12);
    abs.see(dist(psi.frame_operator(), &real(2, 2, &[2., 1., 1., 2.])));
    let b = psi.bounds();
    abs.see((b.lower - 1.0).abs());
    abs.see((b.upper - 3.0).abs());
    let dual = psi.dual().map_err(|e| e.to_string())?;
    let expected = [[2. / 3., -1. / 3.], [-1. / 3., 2. / 3.], [1. / 3., 1. / 3.]];
    for (v, e) in dual.vectors().iter().zip(&expected) {
        abs.see(vec_dist(v, &vecr(e)));
    }
    let g = gram(&psi, &psi).map_err(|e| e.to_string())?;
    abs.see(dist(&g, &real(3, 3, &[1., 0., 1., 0., 1., 1., 1., 1., 2.])));

    let m = mercedes();
    let mb = m.bounds();
    abs.see((mb.lower - 1.5).abs());
    abs.see((mb.upper - 1.5).abs());
    let class = m.classify();
    let r = finish(&[abs]);
    if class != FrameClass::TightFrame {
        return Err(format!(
            "Mercedes classified as {class}; {}",
            r.unwrap_or_else(|e| e)
        ));
    }
    r.map(|s| format!("{s}; Mercedes is {class}"))
}

fn ac2_frame_inequality() -> Result<String, String> {
    let mut rng = rng(1002);
    let mut slack = Worst::new("worst negative slack", 1e-10);
    let mut extremal = Worst::new("extremal gap", 1e-9);
    for _ in 0..100 {
        let n = rng.gen_range(1..=16);
        let k = rng.gen_range(n..=48);
        let f = random_frame(&mut rng, n, k, 1e6);
        let b = f.bounds();
        for _ in 0..100 {
            let x = random_vector(&mut rng, n);
            let energy = f.analysis(&x).unwrap().norm().powi(2);
            let scale = b.upper * x.norm().powi(2);
            slack.see((b.lower * x.norm().powi(2) - energy) / scale);
            slack.see((energy - scale) / scale);
        }
        let eig = f.frame_operator_eigen();
        for (col, bound) in [(0, b.lower), (n - 1, b.upper)] {
            let v = eig.vectors.column(col);
            extremal.see((f.analysis(&v).unwrap().norm().powi(2) - bound).abs() / b.upper);
        }
    }
    finish(&[slack, extremal])
}

fn ac3_roundtrip() -> Result<String, String> {
    let mut rng = rng(1003);
    let mut err = Worst::new("max relative error", 1e-9);
    for _ in 0..100 {
        let (n1, n2) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
        let psi = random_frame_in(&mut rng, n1, 1e6);
        let phi = random_frame_in(&mut rng, n2, 1e6);
        let o = random_operator(&mut rng, n2, n1);
        let r = roundtrip_reconstruct(&o, &phi, &psi).map_err(|e| e.to_string())?;
        err.see(rel_dist(r.matrix(), o.matrix()));
    }
    finish(&[err])
}

fn ac4_multiplicativity() -> Result<String, String> {
    let mut rng = rng(1004);
    let mut err = Worst::new("max relative error", 1e-9);
    for _ in 0..50 {
        let (n1, n2, n3) = (
            rng.gen_range(1..=10),
            rng.gen_range(1..=10),
            rng.gen_range(1..=10),
        );
        let psi = random_frame_in(&mut rng, n1, 1e6);
        let xi = random_frame_in(&mut rng, n2, 1e6);
        let phi = random_frame_in(&mut rng, n3, 1e6);
        let o = random_operator(&mut rng, n3, n2);
        let p = random_operator(&mut rng, n2, n1);
        let direct = matrix_of_operator(&o.compose(&p).unwrap(), &phi, &psi).unwrap();
        let left = matrix_of_operator(&o, &phi, &xi).unwrap();
        let right = matrix_of_operator(&p, &xi.dual().unwrap(), &psi).unwrap();
        let product = left.compose(&right).map_err(|e| e.to_string())?;
        err.see(rel_dist(product.matrix(), direct.matrix()));
    }
    finish(&[err])
}

fn ac5_riesz_isomorphism() -> Result<String, String> {
    let mut rng = rng(1005);
    let mut m_after_o = Worst::new("M∘O", 1e-9);
    let mut o_after_m = Worst::new("O∘M", 1e-9);
    let mut identity = Worst::new("M(Id)", 1e-10);
    for _ in 0..50 {
        let (n1, n2) = (rng.gen_range(1..=16), rng.gen_range(1..=16));
        let psi = random_frame(&mut rng, n1, n1, 1e6);
        let phi = random_frame(&mut rng, n2, n2, 1e6);
        let (phid, psid) = (phi.dual().unwrap(), psi.dual().unwrap());

        let m = random_matrix(&mut rng, n2, n1);
        let induced = operator_of_matrix(&m, &phid, &psid).unwrap();
        let back = matrix_of_operator(&induced, &phi, &psi).unwrap();
        m_after_o.see(rel_dist(back.matrix(), &m));

        let o = random_operator(&mut rng, n2, n1);
        let rep = matrix_of_operator(&o, &phi, &psi).unwrap();
        let again = operator_of_matrix(rep.matrix(), &phid, &psid).unwrap();
        o_after_m.see(rel_dist(again.matrix(), o.matrix()));

        let id = matrix_of_operator(&LinearOperator::identity(n1), &psi, &psid).unwrap();
        identity.see(dist(id.matrix(), &ComplexMatrix::identity(n1)));
    }
    finish(&[m_after_o, o_after_m, identity])
}

fn ac6_norm_bounds() -> Result<String, String> {
    let mut rng = rng(1006);
    let mut op = Worst::new("operator-norm violation", 1e-9);
    let mut hs = Worst::new("HS violation", 1e-9);
    for _ in 0..100 {
        let (n1, n2) = (rng.gen_range(1..=10), rng.gen_range(1..=10));
        let psi = random_frame_in(&mut rng, n1, 1e6);
        let phi = random_frame_in(&mut rng, n2, 1e6);
        let c = (phi.bounds().upper * psi.bounds().upper).sqrt();

        let o = random_operator(&mut rng, n2, n1);
        let rep = matrix_of_operator(&o, &phi, &psi).unwrap();
        let bound = c * o.operator_norm();
        op.see((rep.matrix().operator_norm() - bound) / bound);
        let bound = c * hs_norm(&o);
        hs.see((frobenius_norm(rep.matrix()) - bound) / bound);

        let m = random_matrix(&mut rng, phi.count(), psi.count());
        let induced = operator_of_matrix(&m, &phi, &psi).unwrap();
        let bound = c * m.operator_norm();
        op.see((induced.operator_norm() - bound) / bound);
        let bound = c * frobenius_norm(&m);
        hs.see((hs_norm(&induced) - bound) / bound);
    }
    finish(&[op, hs])
}

fn ac7_range_mapping() -> Result<String, String> {
    let mut rng = rng(1007);
    let mut err = Worst::new("max discrepancy", 1e-10);
    for _ in 0..100 {
        let (n1, n2) = (rng.gen_range(1..=10), rng.gen_range(1..=10));
        let psi = random_frame_in(&mut rng, n1, 1e6);
        let phi = random_frame_in(&mut rng, n2, 1e6);
        let o = random_operator(&mut rng, n2, n1);
        let f = random_vector(&mut rng, n1);
        let check = range_map_check(&o, &phi, &psi, &f).map_err(|e| e.to_string())?;
        err.see(check.discrepancy());
    }
    finish(&[err])
}

fn ac8_kernel() -> Result<String, String> {
    let mut rng = rng(1008);
    let mut err = Worst::new("max relative error", 1e-9);
    for _ in 0..50 {
        let (n1, n2) = (rng.gen_range(1..=10), rng.gen_range(1..=10));
        let psi = random_frame_in(&mut rng, n1, 1e6);
        let phi = random_frame_in(&mut rng, n2, 1e6);
        let o = random_operator(&mut rng, n2, n1);
        let m = matrix_of_operator(&o, &phi.dual().unwrap(), &psi.dual().unwrap()).unwrap();
        let kernel = kernel_of_representation(m.matrix(), &phi, &psi).map_err(|e| e.to_string())?;
        err.see(rel_dist(&kernel, o.matrix()));
    }
    finish(&[err])
}

fn ac9_solver() -> Result<String, String> {
    let mut rng = rng(1009);
    let mut residual = Worst::new("max residual", 1e-8);
    let mut oracle = Worst::new("max oracle deviation", 1e-8);
    for _ in 0..50 {
        let n = rng.gen_range(1..=12);
        let phi = random_frame_in(&mut rng, n, 1e6);
        let o = random_invertible(&mut rng, n, 1e4);
        let g = random_vector(&mut rng, n);
        let report = solve(&o, &g, &phi, &SolveOptions::default()).map_err(|e| e.to_string())?;
        residual.see(report.residual_operator);
        let expected = ComplexVector::new(ref_solve(o.matrix(), g.as_slice())).unwrap();
        oracle.see(vec_dist(&report.solution, &expected) / expected.norm());
    }
    finish(&[residual, oracle])
}

fn ac10_multiplier() -> Result<String, String> {
    let mut rng = rng(1010);
    let mut identity = Worst::new("m≡1 deviation from Id", 1e-10);
    let mut paths = Worst::new("diagonal vs rank-one", 1e-12);
    for _ in 0..50 {
        let (n1, n2) = (rng.gen_range(1..=10), rng.gen_range(1..=10));
        let k = rng.gen_range(n1.max(n2)..=30);
        let phi = random_frame(&mut rng, n2, k, 1e6);
        let psi = random_frame(&mut rng, n1, k, 1e6);

        let ones = vec![Complex64::new(1.0, 0.0); k];
        let id = frame_multiplier(&ones, &phi, &phi.dual().unwrap()).unwrap();
        identity.see(dist(id.matrix(), &ComplexMatrix::identity(n2)));

        let symbol: Vec<Complex64> = (0..k).map(|_| complex(&mut rng)).collect();
        let mult = frame_multiplier(&symbol, &phi, &psi).unwrap();
        let mut sum = ComplexMatrix::zeros(n2, n1);
        for (j, &m) in symbol.iter().enumerate() {
            let term = rank_one(phi.vector(j), psi.vector(j))
                .into_matrix()
                .scale(m);
            sum = sum.add(&term).unwrap();
        }
        paths.see(dist(mult.matrix(), &sum) / sum.frobenius_norm().max(1.0));
    }
    finish(&[identity, paths])
}

fn ac11_cli() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, text: String| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_owned()
    };
    let psi = psi0();
    let psi_path = write("psi0.json", serialize_frame(&psi));
    let dual_path = write("psi0dual.json", serialize_frame(&psi.dual().unwrap()));
    let id_path = write("id.json", serialize_matrix(&ComplexMatrix::identity(2)));
    let diag_path = write(
        "diag23.json",
        serialize_matrix(&real(2, 2, &[2., 0., 0., 3.])),
    );
    let g_path = write("g.json", serialize_vector(&vecr(&[2., 3.])));

    let invocations: [Vec<&str>; 4] = [
        vec!["bounds", "--frame", &psi_path, "--json"],
        vec![
            "represent",
            "--op",
            &id_path,
            "--frame",
            &psi_path,
            "--frame2",
            &dual_path,
            "--json",
        ],
        vec![
            "gram", "--frame", &psi_path, "--frame2", &dual_path, "--json",
        ],
        vec![
            "solve", "--op", &diag_path, "--rhs", &g_path, "--frame", &psi_path, "--json",
        ],
    ];
    let mut outputs = Vec::new();
    for args in &invocations {
        let run = || {
            let out = Command::new(env!("CARGO_BIN_EXE_framerep"))
                .args(args)
                .env_remove("FRAMEREP_TOL")
                .output()
                .map_err(|e| e.to_string())?;
            if !out.status.success() {
                return Err(format!("{args:?} exited with {:?}", out.status.code()));
            }
            Ok(out.stdout)
        };
        let (first, second) = (run()?, run()?);
        if first != second {
            return Err(format!("{} output differs between runs", args[0]));
        }
        outputs.push(String::from_utf8(first).map_err(|e| e.to_string())?);
    }

    let bounds: serde_json::Value = serde_json::from_str(&outputs[0]).map_err(|e| e.to_string())?;
    let mut golden = Worst::new("bounds error", 1e-12);
    golden.see((bounds["A"].as_f64().unwrap_or(f64::NAN) - 1.0).abs());
    golden.see((bounds["B"].as_f64().unwrap_or(f64::NAN) - 3.0).abs());

    let rep = framerep::formats::parse_matrix(&outputs[1]).map_err(|e| e.to_string())?;
    let g = framerep::formats::parse_matrix(&outputs[2]).map_err(|e| e.to_string())?;
    let mut gram_err = Worst::new("represent vs gram", 1e-12);
    gram_err.see(dist(&rep, &g));

    let report: serde_json::Value = serde_json::from_str(&outputs[3]).map_err(|e| e.to_string())?;
    let solution = framerep::formats::parse_vector(&report["solution"].to_string())
        .map_err(|e| e.to_string())?;
    let mut solve_err = Worst::new("solve residual", 1e-10);
    solve_err.see(report["residual_operator"].as_f64().unwrap_or(f64::NAN));
    solve_err.see(vec_dist(&solution, &vecr(&[1., 1.])));

    finish(&[golden, gram_err, solve_err]).map(|s| format!("byte-stable over two runs; {s}"))
}

fn main() {
    type Criterion = fn() -> Result<String, String>;
    let criteria: [(&str, &str, Criterion); 11] = [
        ("AC-1", "golden frame values", ac1_golden_values),
        ("AC-2", "frame inequality", ac2_frame_inequality),
        ("AC-3", "roundtrip", ac3_roundtrip),
        ("AC-4", "multiplicativity", ac4_multiplicativity),
        ("AC-5", "Riesz isomorphism", ac5_riesz_isomorphism),
        ("AC-6", "norm bounds", ac6_norm_bounds),
        ("AC-7", "range mapping", ac7_range_mapping),
        ("AC-8", "kernel", ac8_kernel),
        ("AC-9", "solver", ac9_solver),
        ("AC-10", "frame multiplier", ac10_multiplier),
        ("AC-11", "CLI end-to-end", ac11_cli),
    ];

    // libtest-style filtering so `cargo test <name>` still works
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (id, name, check) in criteria {
        let selected = filter.is_empty()
            || filter
                .iter()
                .any(|f| id.contains(f.as_str()) || name.contains(f.as_str()));
        if !selected {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
