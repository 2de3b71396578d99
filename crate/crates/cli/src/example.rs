//! The worked `A2` example: frame matrices and the bracket chains in both
//! quantum tori, each checked against its closed form.

use std::sync::Arc;
use std::time::Instant;

use hallcluster::family::a2;
use hallcluster::matrix::IntMatrix;
use hallcluster::qtorus::{SkewForm, TorusElement};
use hallcluster::seedlab::{exchange_variable, PrincipalSetup};
use hallcluster::LaurentW;
use serde_json::Value;

use crate::report::{params, Report, Status};

/// `Σ c w^k` from `(k, c)` pairs.
fn lw(terms: &[(i64, i64)]) -> LaurentW {
    terms
        .iter()
        .fold(LaurentW::zero(), |acc, &(k, c)| &acc + &LaurentW::from_int(c).shift(k))
}

fn v_plus_v_inv() -> LaurentW {
    lw(&[(2, 1), (-2, 1)])
}

fn element(form: &Arc<SkewForm>, scalar: &LaurentW, terms: &[([i64; 4], LaurentW)]) -> TorusElement<LaurentW> {
    TorusElement::from_terms(form, terms.iter().map(|(e, c)| (e.to_vec(), c * scalar)))
}

/// Expected frame matrices, with `L2` given doubled.
pub fn expected_matrices() -> Vec<(&'static str, IntMatrix)> {
    vec![
        ("B~", IntMatrix::from_rows(&[[0, 1], [-1, 0], [1, 0], [0, 1]])),
        ("R", IntMatrix::from_rows(&[[0, 0], [1, 0]])),
        ("E", IntMatrix::from_rows(&[[1, -1], [0, 1]])),
        ("L1", IntMatrix::from_rows(&[[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, -1], [0, 1, 1, 0]])),
        ("Theta", IntMatrix::from_rows(&[[-1, 1, -1, 0], [0, -1, 1, -1], [1, 0, 0, 0], [0, 1, 0, 0]])),
        ("Gamma", IntMatrix::from_rows(&[[0, 1, -2, 1], [-1, 0, 1, -2], [2, -1, 0, 1], [-1, 2, -1, 0]])),
        ("2*L2", IntMatrix::from_rows(&[[0, 1, -1, 0], [-1, 0, 0, -1], [1, 0, 0, -1], [0, 1, 1, 0]])),
    ]
}

fn compare(check: &str, step: &str, lambda: Option<&str>, got: &TorusElement<LaurentW>, want: &TorusElement<LaurentW>, start: Instant) -> Report {
    let mut p = params([("step", step)]);
    if let Some(l) = lambda {
        p.insert("lambda".into(), Value::from(l));
    }
    let witness = (got != want).then(|| format!("got {got}, expected {want}"));
    Report::verdict(check, p, witness).timed(start)
}

pub fn example_a2_reports() -> Vec<Report> {
    let mut reports = Vec::new();
    let quiver = a2();
    let start = Instant::now();
    let setup = match PrincipalSetup::new(&quiver) {
        Ok(s) => s,
        Err(e) => return vec![Report::new("example-a2", serde_json::Map::new(), Status::Fail, e.to_string())],
    };
    let special = setup.special.clone().expect("A2 is acyclic");
    let got = [
        setup.frame.b_tilde.clone(),
        quiver.ext().clone(),
        quiver.euler_matrix(),
        setup.lambda1.integral().expect("L1 is integral"),
        special.theta.clone(),
        special.gamma.clone(),
        special.lambda2.doubled().clone(),
    ];
    for ((name, want), got) in expected_matrices().into_iter().zip(got) {
        let witness = (got != want).then(|| format!("got {got:?}, expected {want:?}"));
        reports.push(Report::verdict("example-a2/frame", params([("matrix", name)]), witness).timed(start));
    }

    let one = LaurentW::one();
    let b = &setup.frame.b_tilde;
    let l1 = Arc::clone(&setup.lambda1);
    let l2 = setup.lambda2().expect("A2 is acyclic");
    let torus = "example-a2/torus";

    for (label, form) in [("1", &l1), ("2", &l2)] {
        let start = Instant::now();
        let y1 = exchange_variable(form, b, 0, one.clone());
        let y2 = exchange_variable(form, b, 1, one.clone());
        let want1 = element(form, &one, &[([-1, 0, 1, 0], one.clone()), ([-1, 1, 0, 0], one.clone())]);
        let want2 = element(form, &one, &[([1, -1, 0, 1], one.clone()), ([0, -1, 0, 0], one.clone())]);
        reports.push(compare(torus, "y1", Some(label), &y1, &want1, start));
        reports.push(compare(torus, "y2", Some(label), &y2, &want2, start));
        let y2sq = y2.pow(2, one.clone());
        let want = element(
            form,
            &one,
            &[
                ([2, -2, 0, 2], one.clone()),
                ([1, -2, 0, 1], v_plus_v_inv()),
                ([0, -2, 0, 0], one.clone()),
            ],
        );
        reports.push(compare(torus, "y2-squared", Some(label), &y2sq, &want, start));
    }

    let zero1 = TorusElement::zero(&l1);
    let zero2 = TorusElement::zero(&l2);
    let bracket = |a: &TorusElement<LaurentW>, b: &TorusElement<LaurentW>, t: LaurentW| {
        a.commutator(b, &t).expect("same torus")
    };

    let start = Instant::now();
    let y1 = exchange_variable(&l1, b, 0, one.clone());
    let y2 = exchange_variable(&l1, b, 1, one.clone());
    let y2sq = y2.pow(2, one.clone());
    let c1 = bracket(&y1, &y2, one.clone());
    let want = element(&l1, &lw(&[(-2, 1), (2, -1)]), &[([0, 0, 0, 1], one.clone())]);
    reports.push(compare(torus, "[y1,y2]_1", Some("1"), &c1, &want, start));
    let fundamental = bracket(&y1, &c1, LaurentW::q_pow(-1));
    reports.push(compare(torus, "[y1,[y1,y2]_1]_q^-1", Some("1"), &fundamental, &zero1, start));

    let inner = bracket(&y1, &y2sq, LaurentW::q_pow(-2));
    let s = lw(&[(0, 1), (-8, -1)]);
    let want = element(
        &l1,
        &s,
        &[
            ([1, -2, 1, 2], one.clone()),
            ([0, -2, 1, 1], v_plus_v_inv()),
            ([-1, -2, 1, 0], one.clone()),
            ([0, -1, 0, 1], one.clone()),
            ([-1, -1, 0, 0], one.clone()),
        ],
    );
    reports.push(compare(torus, "[y1,y2^2]_q^-2", Some("1"), &inner, &want, start));
    let middle = bracket(&y1, &inner, LaurentW::q_pow(-1));
    let s = &lw(&[(0, 1), (-4, -1)]) * &lw(&[(0, 1), (-8, -1)]);
    let want = element(
        &l1,
        &s,
        &[
            ([0, -2, 2, 2], one.clone()),
            ([-1, -2, 2, 1], v_plus_v_inv()),
            ([-2, -2, 2, 0], one.clone()),
            ([-1, -1, 1, 1], v_plus_v_inv()),
            ([-2, -1, 1, 0], v_plus_v_inv()),
            ([-2, 0, 0, 0], one.clone()),
        ],
    );
    reports.push(compare(torus, "[y1,[y1,y2^2]_q^-2]_q^-1", Some("1"), &middle, &want, start));
    let triple = bracket(&y1, &middle, one.clone());
    reports.push(compare(torus, "[y1,[y1,[y1,y2^2]_q^-2]_q^-1]_1", Some("1"), &triple, &zero1, start));

    let start = Instant::now();
    let y1 = exchange_variable(&l2, b, 0, one.clone());
    let y2 = exchange_variable(&l2, b, 1, one.clone());
    let y2sq = y2.pow(2, one.clone());
    let c1 = bracket(&y1, &y2, LaurentW::v_pow(1));
    let want = element(&l2, &lw(&[(-1, 1), (3, -1)]), &[([0, 0, 0, 1], one.clone())]);
    reports.push(compare(torus, "[y1,y2]_v", Some("2"), &c1, &want, start));
    let serre = bracket(&y1, &c1, LaurentW::v_pow(-1));
    reports.push(compare(torus, "[y1,[y1,y2]_v]_v^-1", Some("2"), &serre, &zero2, start));

    let inner = bracket(&y1, &y2sq, LaurentW::q_pow(1));
    let s = &LaurentW::v_pow(1) * &lw(&[(-4, 1), (4, -1)]);
    let want = element(&l2, &s, &[([1, -1, 0, 2], one.clone()), ([0, -1, 0, 1], one.clone())]);
    reports.push(compare(torus, "[y1,y2^2]_q", Some("2"), &inner, &want, start));
    let middle = bracket(&y1, &inner, one.clone());
    let s = &lw(&[(-4, 1), (0, -1)]) * &lw(&[(0, 1), (8, -1)]);
    let want = element(&l2, &s, &[([0, 0, 0, 2], one.clone())]);
    reports.push(compare(torus, "[y1,[y1,y2^2]_q]_1", Some("2"), &middle, &want, start));
    let last = bracket(&y1, &middle, LaurentW::q_pow(-1));
    reports.push(compare(torus, "[y1,[y1,[y1,y2^2]_q]_1]_q^-1", Some("2"), &last, &zero2, start));

    reports
}
