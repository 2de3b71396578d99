use std::io::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hallcluster::exactring::{bracket_binomial, gauss_binomial, int};
use hallcluster::family::{a2, a3, kronecker, random_family, FamilyShape, DEFAULT_SEED};
use hallcluster::hallcc::{
    ext_coefficient_oracle, hall_coefficient, hall_product, verify_hall_relation, FormChoice, HallElement, HallMode,
    HallRelationKind, HallRelationParams,
};
use hallcluster::qtorus::{SkewForm, TorusElement};
use hallcluster::repfq::{gl_order, ClassId, RepContext};
use hallcluster::seedlab::{
    check_compatible, exchange_variable, form_identity_sample, mutate_seed, verify_torus_relation, Compatibility,
    PrincipalSetup, QuantumSeed, RelationKind, RelationParams,
};
use hallcluster::{IntMatrix, LaurentW, ValuedQuiver};
use hallcluster_cli::commands::{one_step_character_witness, one_step_formal_witness};
use hallcluster_cli::{parse_quiver_file, run_command, Command, Options, Report};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

/// Prints one line per criterion, bypassing the test harness capture, and
/// fails the test on a failed criterion or an exceeded time budget.
fn conclude(n: u32, what: &str, budget: Duration, start: Instant, result: Result<String, String>) {
    let elapsed = start.elapsed();
    let result = result.and_then(|detail| {
        if elapsed > budget {
            Err(format!("took {elapsed:.2?}, budget {budget:?}"))
        } else {
            Ok(detail)
        }
    });
    let line = match &result {
        Ok(detail) => format!("PASS criterion {n}: {what} ({detail}; {elapsed:.2?})"),
        Err(e) => format!("FAIL criterion {n}: {what}: {e}"),
    };
    let _ = writeln!(std::io::stdout().lock(), "{line}");
    if let Err(e) = result {
        panic!("criterion {n} failed: {e}");
    }
}

fn family() -> Vec<ValuedQuiver> {
    random_family(DEFAULT_SEED, 50, FamilyShape::default())
}

const A2_FILE: &str = "vertices 2\nvaluation 1 1\narrow 1 2\n";

fn lw(terms: &[(i64, i64)]) -> LaurentW {
    LaurentW::from_terms(terms.iter().map(|&(k, c)| (k, int(c))))
}

fn torus(form: &Arc<SkewForm>, scalar: &LaurentW, terms: &[(&[i64], &[(i64, i64)])]) -> TorusElement<LaurentW> {
    TorusElement::from_terms(form, terms.iter().map(|(e, c)| (e.to_vec(), scalar * &lw(c))))
}

#[test]
fn criterion_01_frame_matrices() {
    let start = Instant::now();
    let file = parse_quiver_file(A2_FILE).expect("A2 parses");
    let outcome = run_command(&Command::Frame(file), &Options::default());
    let rows = |name: &str| -> Option<(Value, String)> {
        outcome
            .reports
            .iter()
            .find(|r: &&Report| r.params.get("matrix") == Some(&Value::from(name)))
            .map(|r| (r.params["rows"].clone(), r.params["scale"].as_str().unwrap_or("").to_string()))
    };
    let expected: [(&str, serde_json::Value, &str); 7] = [
        ("B~", serde_json::json!([[0, 1], [-1, 0], [1, 0], [0, 1]]), "1"),
        ("R", serde_json::json!([[0, 0], [1, 0]]), "1"),
        ("E", serde_json::json!([[1, -1], [0, 1]]), "1"),
        ("L1", serde_json::json!([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, -1], [0, 1, 1, 0]]), "1"),
        ("Theta", serde_json::json!([[-1, 1, -1, 0], [0, -1, 1, -1], [1, 0, 0, 0], [0, 1, 0, 0]]), "1"),
        ("Gamma", serde_json::json!([[0, 1, -2, 1], [-1, 0, 1, -2], [2, -1, 0, 1], [-1, 2, -1, 0]]), "1"),
        ("L2", serde_json::json!([[0, 1, -1, 0], [-1, 0, 0, -1], [1, 0, 0, -1], [0, 1, 1, 0]]), "1/2"),
    ];
    let mut result = Ok(format!("{} matrices", expected.len()));
    for (name, want, scale) in expected {
        match rows(name) {
            Some((got, s)) if got == want && s == scale => {}
            other => {
                result = Err(format!("{name}: got {other:?}, expected {want} with scale {scale}"));
                break;
            }
        }
    }
    let l2_text = "L2 =\n1/2 *\n[ 0  1 -1  0]\n[-1  0  0 -1]\n[ 1  0  0 -1]\n[ 0  1  1  0]\n";
    if result.is_ok() && !outcome.display.contains(l2_text) {
        result = Err(format!("printed frame lacks\n{l2_text}"));
    }
    if result.is_ok() && !outcome.reports.iter().all(Report::is_ok) {
        result = Err("a frame report is not ok".into());
    }
    conclude(1, "A2 frame matrices", Duration::from_secs(1), start, result);
}

fn criterion_two() -> Result<String, String> {
    let setup = PrincipalSetup::new(&a2()).map_err(|e| e.to_string())?;
    let b = setup.frame.b_tilde.clone();
    let one = LaurentW::one();
    let mut checked = 0;
    let mut expect = |what: &str, got: &TorusElement<LaurentW>, want: &TorusElement<LaurentW>| {
        checked += 1;
        if got == want {
            Ok(())
        } else {
            Err(format!("{what}: got {got}, expected {want}"))
        }
    };
    let br = |a: &TorusElement<LaurentW>, c: &TorusElement<LaurentW>, t: LaurentW| a.commutator(c, &t).expect("same torus");
    let vv = [(2, 1), (-2, 1)];

    let l1 = Arc::clone(&setup.lambda1);
    let y1 = exchange_variable(&l1, &b, 0, one.clone());
    let y2 = exchange_variable(&l1, &b, 1, one.clone());
    expect("y1", &y1, &torus(&l1, &one, &[(&[-1, 0, 1, 0], &[(0, 1)]), (&[-1, 1, 0, 0], &[(0, 1)])]))?;
    expect("y2", &y2, &torus(&l1, &one, &[(&[1, -1, 0, 1], &[(0, 1)]), (&[0, -1, 0, 0], &[(0, 1)])]))?;
    let c = br(&y1, &y2, one.clone());
    expect("L1 [y1,y2]", &c, &torus(&l1, &lw(&[(-2, 1), (2, -1)]), &[(&[0, 0, 0, 1], &[(0, 1)])]))?;
    expect("L1 [y1,[y1,y2]]_q^-1", &br(&y1, &c, LaurentW::q_pow(-1)), &TorusElement::zero(&l1))?;
    let y2sq = y2.pow(2, one.clone());
    let y2sq_want = |f: &Arc<SkewForm>| {
        torus(f, &one, &[(&[2, -2, 0, 2], &[(0, 1)]), (&[1, -2, 0, 1], &vv), (&[0, -2, 0, 0], &[(0, 1)])])
    };
    expect("L1 y2^2", &y2sq, &y2sq_want(&l1))?;
    let inner = br(&y1, &y2sq, LaurentW::q_pow(-2));
    let want = torus(
        &l1,
        &lw(&[(0, 1), (-8, -1)]),
        &[
            (&[1, -2, 1, 2], &[(0, 1)]),
            (&[0, -2, 1, 1], &vv),
            (&[-1, -2, 1, 0], &[(0, 1)]),
            (&[0, -1, 0, 1], &[(0, 1)]),
            (&[-1, -1, 0, 0], &[(0, 1)]),
        ],
    );
    expect("L1 [y1,y2^2]_q^-2", &inner, &want)?;
    let middle = br(&y1, &inner, LaurentW::q_pow(-1));
    let want = torus(
        &l1,
        &(&lw(&[(0, 1), (-4, -1)]) * &lw(&[(0, 1), (-8, -1)])),
        &[
            (&[0, -2, 2, 2], &[(0, 1)]),
            (&[-1, -2, 2, 1], &vv),
            (&[-2, -2, 2, 0], &[(0, 1)]),
            (&[-1, -1, 1, 1], &vv),
            (&[-2, -1, 1, 0], &vv),
            (&[-2, 0, 0, 0], &[(0, 1)]),
        ],
    );
    expect("L1 [y1,[y1,y2^2]_q^-2]_q^-1", &middle, &want)?;
    expect("L1 triple bracket", &br(&y1, &middle, one.clone()), &TorusElement::zero(&l1))?;

    let l2 = setup.lambda2().ok_or("no L2")?;
    let y1 = exchange_variable(&l2, &b, 0, one.clone());
    let y2 = exchange_variable(&l2, &b, 1, one.clone());
    let c = br(&y1, &y2, LaurentW::v_pow(1));
    expect("L2 [y1,y2]_v", &c, &torus(&l2, &lw(&[(-1, 1), (3, -1)]), &[(&[0, 0, 0, 1], &[(0, 1)])]))?;
    expect("L2 [y1,[y1,y2]_v]_v^-1", &br(&y1, &c, LaurentW::v_pow(-1)), &TorusElement::zero(&l2))?;
    let y2sq = y2.pow(2, one.clone());
    expect("L2 y2^2", &y2sq, &y2sq_want(&l2))?;
    let inner = br(&y1, &y2sq, LaurentW::q_pow(1));
    let v_q = &LaurentW::v_pow(1) * &(&LaurentW::q_pow(-1) - &LaurentW::q_pow(1));
    let want = torus(&l2, &v_q, &[(&[1, -1, 0, 2], &[(0, 1)]), (&[0, -1, 0, 1], &[(0, 1)])]);
    expect("L2 [y1,y2^2]_q", &inner, &want)?;
    let middle = br(&y1, &inner, one.clone());
    let s = &(&LaurentW::q_pow(-1) - &one) * &(&one - &LaurentW::q_pow(2));
    expect("L2 [y1,[y1,y2^2]_q]", &middle, &torus(&l2, &s, &[(&[0, 0, 0, 2], &[(0, 1)])]))?;
    expect("L2 final bracket", &br(&y1, &middle, LaurentW::q_pow(-1)), &TorusElement::zero(&l2))?;

    let script = run_command(&Command::ExampleA2, &Options::default());
    if let Some(r) = script.reports.iter().find(|r| !r.is_ok()) {
        return Err(format!("example-a2 {} {:?}: {}", r.check, r.params, r.witness));
    }
    Ok(format!("{checked} expressions, example-a2 script {} checks ok", script.reports.len()))
}

#[test]
fn criterion_02_torus_example() {
    let start = Instant::now();
    conclude(2, "A2 torus expressions in both forms", Duration::from_secs(1), start, criterion_two());
}

fn diagonal_is(form: &SkewForm, b: &IntMatrix, want: Vec<i64>) -> Result<(), String> {
    match check_compatible(form, b) {
        Ok(Compatibility::Compatible(d)) if d == want => Ok(()),
        other => Err(format!("{other:?}, expected diagonal {want:?}")),
    }
}

#[test]
fn criterion_03_compatibility() {
    let start = Instant::now();
    let result = (|| {
        let quivers = family();
        for (idx, q) in quivers.iter().enumerate() {
            let setup = PrincipalSetup::new(q).map_err(|e| format!("quiver {idx}: {e}"))?;
            let b = &setup.frame.b_tilde;
            let d = q.valuations().to_vec();
            diagonal_is(&setup.lambda1, b, d.clone()).map_err(|e| format!("quiver {idx} L1: {e}"))?;
            let special = setup.special.as_ref().ok_or(format!("quiver {idx} has no L0"))?;
            diagonal_is(&special.lambda0, b, d.iter().map(|x| 2 * x).collect())
                .map_err(|e| format!("quiver {idx} L0: {e}"))?;
        }
        Ok(format!("{} quivers, L1 and L0", quivers.len()))
    })();
    conclude(3, "compatibility of L1 and L0", Duration::from_secs(10), start, result);
}

#[test]
fn criterion_04_form_identities() {
    let start = Instant::now();
    let result = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        let quivers = family();
        let mut samples = 0;
        let mut literal_sign_failures = 0;
        for (idx, q) in quivers.iter().enumerate() {
            let setup = PrincipalSetup::new(q).map_err(|e| e.to_string())?;
            let n = q.n();
            for _ in 0..100 {
                let mut draw = || (0..n).map(|_| rng.random_range(-3..=3)).collect::<Vec<i64>>();
                let (a, b, c, d) = (draw(), draw(), draw(), draw());
                let s = form_identity_sample(&setup, &a, &b, &c, &d).ok_or("no special form")?;
                if let Some((name, (l, r))) = s.pairs().into_iter().find(|(_, (l, r))| l != r) {
                    return Err(format!("quiver {idx}: {name} at {a:?} {b:?} {c:?} {d:?}: {l} != {r}"));
                }
                if s.lambda2_exchange.0 != 2 * setup.frame.euler_form(&b, &a) {
                    literal_sign_failures += 1;
                }
                samples += 1;
            }
        }
        Ok(format!(
            "{samples} samples over {} quivers; L2(E~a, B~b) = -<b,a> (the unsigned form fails on {literal_sign_failures})",
            quivers.len()
        ))
    })();
    conclude(4, "bilinear form identities", Duration::from_secs(10), start, result);
}

/// Admissible grid cases: `i != j`, `l in {1, 2}`, `p <= 4`, `eps = ±1`.
fn grid(kind: RelationKind, setup: &PrincipalSetup) -> Vec<RelationParams> {
    let n = setup.frame.n;
    let mut out = Vec::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if !kind.is_high() {
                out.push(RelationParams { i, j, l: 1, p: 0, eps: 1 });
                continue;
            }
            for l in 1..=2 {
                for p in kind.min_p(&setup.frame, i, j, l).max(1)..=4 {
                    for eps in [1, -1] {
                        out.push(RelationParams { i, j, l, p, eps });
                    }
                }
            }
        }
    }
    out
}

#[test]
fn criterion_05_torus_relations() {
    let start = Instant::now();
    let result = (|| {
        let mut quivers = vec![("A2".to_string(), a2()), ("A3".to_string(), a3()), ("K2".to_string(), kronecker())];
        quivers.extend(family().into_iter().enumerate().map(|(i, q)| (format!("random-{i}"), q)));
        let mut per_kind = Vec::new();
        for kind in RelationKind::ALL {
            let mut cases = 0;
            for (name, q) in &quivers {
                let setup = PrincipalSetup::new(q).map_err(|e| e.to_string())?;
                let l2 = setup.lambda2().ok_or("no L2")?;
                let forms = match kind {
                    RelationKind::Fundamental | RelationKind::FundamentalHigh => vec![Arc::clone(&setup.lambda1)],
                    RelationKind::QcaSerre | RelationKind::QcaHighSerre => vec![l2],
                    _ => vec![Arc::clone(&setup.lambda1), l2],
                };
                for form in &forms {
                    for params in grid(kind, &setup) {
                        let v = verify_torus_relation(kind, &setup.frame, form, params)
                            .map_err(|e| format!("{kind} on {name} {params:?}: {e}"))?;
                        if !v.passed() {
                            return Err(format!("{kind} on {name} {params:?}: remainder {}", v.remainder));
                        }
                        cases += 1;
                    }
                }
            }
            if cases == 0 {
                return Err(format!("{kind}: empty grid"));
            }
            per_kind.push(format!("{kind} {cases}"));
        }
        Ok(format!("{} quivers; {}", quivers.len(), per_kind.join(", ")))
    })();
    conclude(5, "torus relation sweep", Duration::from_secs(120), start, result);
}

fn classes_by_total(ctx: &RepContext, total: usize) -> Result<Vec<ClassId>, String> {
    ctx.classes_up_to(total).map_err(|e| e.to_string())
}

fn dims_sum(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[test]
fn criterion_06_hall_oracle() {
    let start = Instant::now();
    let result = (|| {
        let mut counts = Vec::new();
        for (name, q) in [("A2", a2()), ("A3", a3())] {
            let ctx = RepContext::new(&q, 2).map_err(|e| e.to_string())?;
            let classes = classes_by_total(&ctx, 4)?;
            let total = |c: &ClassId| c.dims.iter().sum::<usize>();
            let mut triples = 0;
            for m in &classes {
                for n in &classes {
                    if total(m) + total(n) > 4 {
                        continue;
                    }
                    let table = ctx.table(&dims_sum(&m.dims, &n.dims)).map_err(|e| e.to_string())?;
                    for l in table.ids() {
                        let fast = hall_coefficient(&ctx, m, n, &l).map_err(|e| e.to_string())?;
                        let slow = ext_coefficient_oracle(&ctx, m, n, &l).map_err(|e| e.to_string())?;
                        if fast != slow {
                            return Err(format!("{name} M={m} N={n} L={l}: {fast} != {slow}"));
                        }
                        triples += 1;
                    }
                }
            }
            counts.push(format!("{name} {triples} triples"));
        }
        Ok(counts.join(", "))
    })();
    conclude(6, "Hall coefficients against the extension oracle", Duration::from_secs(120), start, result);
}

#[test]
fn criterion_07_hall_serre() {
    let start = Instant::now();
    let result = (|| {
        let mut cases = 0;
        for (name, quiver) in [("A2", a2()), ("A3", a3())] {
            let setup = PrincipalSetup::new(&quiver).map_err(|e| e.to_string())?;
            for q in [2, 3] {
                let ctx = RepContext::new(&quiver, q).map_err(|e| e.to_string())?.with_bound(6);
                let n = quiver.n();
                for i in 0..n {
                    for j in (0..n).filter(|&j| j != i) {
                        let base = HallRelationParams { i, j, ..HallRelationParams::default() };
                        let mut runs = vec![(HallRelationKind::Serre, base)];
                        let c = setup.frame.cartan[(i, j)];
                        for l in 1..=2 {
                            for p in (-l * c).max(1)..=3 {
                                for eps in [1, -1] {
                                    runs.push((HallRelationKind::HighSerre, HallRelationParams { l, p, eps, ..base }));
                                }
                            }
                        }
                        for (kind, params) in runs {
                            let v = verify_hall_relation(kind, &ctx, &setup, params)
                                .map_err(|e| format!("{name} q={q} {kind:?} {params:?}: {e}"))?;
                            if !v.passed() {
                                return Err(format!("{name} q={q} {kind:?} {params:?}: {}", v.witness));
                            }
                            cases += 1;
                        }
                    }
                }
            }
        }
        Ok(format!("{cases} relation instances on A2, A3 at q = 2, 3"))
    })();
    conclude(7, "quantum Serre and high-order Serre in the Hall algebra", Duration::from_secs(120), start, result);
}

#[test]
fn criterion_08_homomorphisms() {
    let start = Instant::now();
    let result = (|| {
        let quiver = a2();
        let setup = PrincipalSetup::new(&quiver).map_err(|e| e.to_string())?;
        let ctx = RepContext::new(&quiver, 2).map_err(|e| e.to_string())?;
        let mut parts = Vec::new();
        let runs = [
            ("psi with L2", HallRelationKind::PsiHom, FormChoice::Lambda2),
            ("psi with L1", HallRelationKind::PsiHom, FormChoice::Lambda1),
            ("rho", HallRelationKind::RhoIso, FormChoice::Lambda2),
        ];
        for (what, kind, form) in runs {
            let params = HallRelationParams { form, max_total: 3, ..HallRelationParams::default() };
            let v = verify_hall_relation(kind, &ctx, &setup, params).map_err(|e| format!("{what}: {e}"))?;
            if !v.passed() {
                return Err(format!("{what}: {}", v.witness));
            }
            parts.push(format!("{what} {} pairs", v.cases));
        }
        Ok(parts.join(", "))
    })();
    conclude(8, "Hall-to-torus and rescaling homomorphisms", Duration::from_secs(120), start, result);
}

#[test]
fn criterion_09_simple_characters() {
    let start = Instant::now();
    let result = (|| {
        let quivers = family();
        let mut vertices = 0;
        for (idx, q) in quivers.iter().enumerate() {
            let setup = PrincipalSetup::new(q).map_err(|e| e.to_string())?;
            for form in [Arc::clone(&setup.lambda1), setup.lambda2().ok_or("no L2")?] {
                if let Some(w) = one_step_formal_witness(&setup, &form) {
                    return Err(format!("quiver {idx} torus side: {w}"));
                }
                if let Some(w) = one_step_character_witness(q, &setup, &form, 2) {
                    return Err(format!("quiver {idx} character side: {w}"));
                }
            }
            vertices += q.n();
        }
        Ok(format!("{vertices} vertices over {} quivers, both forms", quivers.len()))
    })();
    conclude(9, "one-step variables equal simple characters", Duration::from_secs(10), start, result);
}

fn structural_suites() -> Result<String, String> {
    let mut done = Vec::new();

    let mut seeds = 0;
    for q in family() {
        let setup = PrincipalSetup::new(&q).map_err(|e| e.to_string())?;
        for form in [Arc::clone(&setup.lambda1), setup.lambda2().ok_or("no L2")?] {
            let seed = QuantumSeed::new(form, setup.frame.b_tilde.clone()).map_err(|e| e.to_string())?;
            for k in 0..q.n() {
                let once = mutate_seed(&seed, k).map_err(|e| e.to_string())?;
                if once.diagonal() != seed.diagonal() {
                    return Err(format!("mutation at {k} changed the diagonal"));
                }
                if mutate_seed(&once, k).map_err(|e| e.to_string())? != seed {
                    return Err(format!("mutation at {k} is not an involution"));
                }
                seeds += 1;
            }
        }
    }
    done.push(format!("mutation {seeds}"));

    let mut tables = 0;
    let mut pairs = 0;
    for quiver in [a2(), a3()] {
        let ctx = RepContext::new(&quiver, 2).map_err(|e| e.to_string())?;
        for total in 0..=4 {
            for dims in ctx.dim_vectors(total) {
                let table = ctx.table(&dims).map_err(|e| e.to_string())?;
                let exponent: u32 = ctx.arrows().iter().map(|&(s, t)| (dims[s] * dims[t]) as u32).sum();
                let orbits: u128 = table.classes().iter().map(|c| c.orbit_size as u128).sum();
                if orbits != 2u128.pow(exponent) {
                    return Err(format!("orbit partition fails at {dims:?}"));
                }
                let group: u128 = dims.iter().map(|&m| gl_order(m, 2)).product();
                if let Some(c) = table.classes().iter().find(|c| c.orbit_size as u128 * c.aut != group) {
                    return Err(format!("orbit-stabilizer fails at {dims:?}: {c:?}"));
                }
                tables += 1;
            }
        }
        let classes = classes_by_total(&ctx, 4)?;
        for m in &classes {
            for n in &classes {
                if m.dims.iter().sum::<usize>() + n.dims.iter().sum::<usize>() > 4 {
                    continue;
                }
                let (rm, rn) = (ctx.representative(m).unwrap(), ctx.representative(n).unwrap());
                let hom = ctx.hom_dim(&rm, &rn).map_err(|e| e.to_string())? as i64;
                let ext = ctx.ext_dim_direct(&rm, &rn).map_err(|e| e.to_string())? as i64;
                let (mv, nv) = (rm.dim_vector(), rn.dim_vector());
                if hom - ext != quiver.euler(&mv, &nv) {
                    return Err(format!("Euler consistency fails at {m}, {n}"));
                }
                pairs += 1;
            }
        }
    }
    done.push(format!("iso tables {tables}, Euler pairs {pairs}"));

    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for _ in 0..200 {
        let m = rng.random_range(1..=5);
        let mut doubled = IntMatrix::zeros(m, m);
        for i in 0..m {
            for j in i + 1..m {
                let x = rng.random_range(-3..=3);
                doubled[(i, j)] = x;
                doubled[(j, i)] = -x;
            }
        }
        let form = Arc::new(SkewForm::from_doubled(doubled).map_err(|e| e.to_string())?);
        let mut element = || {
            let terms: Vec<(Vec<i64>, LaurentW)> = (0..3)
                .map(|_| {
                    let e = (0..m).map(|_| rng.random_range(-2..=2)).collect();
                    (e, lw(&[(rng.random_range(-3..=3), rng.random_range(-2..=2))]))
                })
                .collect();
            TorusElement::from_terms(&form, terms)
        };
        let (a, b, c) = (element(), element(), element());
        let left = a.try_mul(&b).and_then(|ab| ab.try_mul(&c)).map_err(|e| e.to_string())?;
        let right = b.try_mul(&c).and_then(|bc| a.try_mul(&bc)).map_err(|e| e.to_string())?;
        if left != right {
            return Err(format!("torus associativity fails for {a}, {b}, {c}"));
        }
    }
    done.push("torus associativity 200".into());

    let mut triples = 0;
    for q in [2, 3] {
        let ctx = RepContext::new(&a2(), q).map_err(|e| e.to_string())?;
        let classes = classes_by_total(&ctx, 3)?;
        let size = |c: &ClassId| c.dims.iter().sum::<usize>();
        for x in &classes {
            for y in &classes {
                for z in &classes {
                    if size(x) + size(y) + size(z) > 3 {
                        continue;
                    }
                    for mode in [HallMode::Plain, HallMode::VTwist] {
                        let (ux, uy, uz) = (
                            HallElement::basis(x.clone(), q),
                            HallElement::basis(y.clone(), q),
                            HallElement::basis(z.clone(), q),
                        );
                        let mul = |a: &HallElement, b: &HallElement| hall_product(&ctx, a, b, mode).map_err(|e| e.to_string());
                        if mul(&mul(&ux, &uy)?, &uz)? != mul(&ux, &mul(&uy, &uz)?)? {
                            return Err(format!("Hall associativity fails at q={q} for {x}, {y}, {z} in {mode:?}"));
                        }
                        triples += 1;
                    }
                }
            }
        }
    }
    done.push(format!("Hall associativity {triples}"));

    let mut binomials = 0;
    for d in 1..=3 {
        for m in 0..=8 {
            for t in 0..=m {
                let g = gauss_binomial(m, t, d).map_err(|e| e.to_string())?;
                let b = bracket_binomial(m, t, d).map_err(|e| e.to_string())?;
                if b != &LaurentW::w_pow(2 * d * t * (m - t)) * &g {
                    return Err(format!("bracket binomial identity fails at m={m} t={t} d={d}"));
                }
                if g.bar() != g {
                    return Err(format!("bar symmetry fails at m={m} t={t} d={d}"));
                }
                if m >= 1 && t >= 1 && t < m {
                    let rec = &(&LaurentW::w_pow(2 * d * t) * &gauss_binomial(m - 1, t, d).unwrap())
                        + &(&LaurentW::w_pow(-2 * d * (m - t)) * &gauss_binomial(m - 1, t - 1, d).unwrap());
                    if rec != g {
                        return Err(format!("Pascal recurrence fails at m={m} t={t} d={d}"));
                    }
                }
                binomials += 1;
            }
        }
    }
    done.push(format!("binomials {binomials}"));
    Ok(done.join(", "))
}

#[test]
fn criterion_10_structural_suites() {
    let start = Instant::now();
    conclude(10, "structural property suites", Duration::from_secs(120), start, structural_suites());
}
