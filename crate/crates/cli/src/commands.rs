//! Command dispatch: every command turns into a list of [`Report`]s plus
//! optional human-readable output.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use hallcluster::family::{a2, a3, kronecker, random_family, FamilyShape};
use hallcluster::hallcc::{
    cc_character, simple_character, verify_hall_relation, FormChoice, HallRelationKind, HallRelationParams,
};
use hallcluster::matrix::IntMatrix;
use hallcluster::qtorus::{SkewForm, TorusElement};
use hallcluster::repfq::{RepContext, DEFAULT_BOUND};
use hallcluster::seedlab::{
    check_compatible, exchange_variable, form_identity_sample, mutate_seed, verify_torus_relation, Compatibility,
    PrincipalSetup, QuantumSeed, RelationKind, RelationParams,
};
use hallcluster::exactring::specialize_at_prime;
use hallcluster::{FrameData, LaurentW, QuarticNumber, ValuedQuiver};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::example::example_a2_reports;
use crate::quiverfile::QuiverFile;
use crate::report::{params, sort_reports, Format, Report, Status};

/// Which compatible form a command uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaChoice {
    One,
    Two,
    /// The `lambda` block of the quiver file.
    File,
}

impl LambdaChoice {
    pub fn label(self) -> &'static str {
        match self {
            LambdaChoice::One => "1",
            LambdaChoice::Two => "2",
            LambdaChoice::File => "file",
        }
    }
}

impl FromStr for LambdaChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" => Ok(LambdaChoice::One),
            "2" => Ok(LambdaChoice::Two),
            "file" => Ok(LambdaChoice::File),
            other => Err(format!("expected 1, 2 or file, got `{other}`")),
        }
    }
}

/// Parses `3`, `1..4` (inclusive), `1..=4` or comma-separated lists of these.
pub fn parse_values(s: &str) -> Result<Vec<i64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        let num = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("bad integer `{t}` in `{s}`"));
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty range `{part}`"));
            }
            out.extend(a..=b);
        } else {
            out.push(num(part)?);
        }
    }
    out.dedup();
    Ok(out)
}

/// Grid flags of `verify`. `None` means the kind's default range.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Grid {
    pub i: Option<Vec<i64>>,
    pub j: Option<Vec<i64>>,
    pub l: Option<Vec<i64>>,
    pub p: Option<Vec<i64>>,
    pub eps: Option<Vec<i64>>,
    pub q: Option<Vec<i64>>,
    pub lambda: Option<LambdaChoice>,
    /// Total-dimension cap for pairwise Hall checks.
    pub pairs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Frame(QuiverFile),
    Compat {
        file: QuiverFile,
        lambda: Option<LambdaChoice>,
    },
    Mutate {
        file: QuiverFile,
        /// 1-based direction.
        k: usize,
        lambda: Option<LambdaChoice>,
    },
    Verify {
        kind: String,
        file: QuiverFile,
        grid: Grid,
    },
    ExampleA2,
    Sweep {
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub format: Format,
    pub seed: u64,
    pub bound: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            format: Format::Text,
            seed: hallcluster::family::DEFAULT_SEED,
            bound: DEFAULT_BOUND,
        }
    }
}

/// Sorted reports plus text printed before them in text mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub reports: Vec<Report>,
    pub display: String,
}

pub fn run_command(cmd: &Command, opts: &Options) -> Outcome {
    let mut display = String::new();
    let mut reports = match cmd {
        Command::Frame(file) => frame_reports(&file.quiver, &mut display),
        Command::Compat { file, lambda } => compat_reports(file, *lambda),
        Command::Mutate { file, k, lambda } => mutate_reports(file, *k, *lambda, &mut display),
        Command::Verify { kind, file, grid } => verify_reports(kind, file, grid, opts),
        Command::ExampleA2 => example_a2_reports(),
        Command::Sweep { count } => sweep_reports(opts.seed, *count),
    };
    sort_reports(&mut reports);
    Outcome { reports, display }
}

fn matrix_value(m: &IntMatrix) -> Value {
    Value::from(m.to_rows())
}

/// `M` or `1/2 * M` for a form stored doubled.
pub fn render_form(form: &SkewForm) -> String {
    match form.integral() {
        Some(m) => m.to_string(),
        None => format!("1/2 *\n{}", form.doubled()),
    }
}

fn form_report(name: &str, form: &SkewForm) -> Report {
    let (rows, scale) = match form.integral() {
        Some(m) => (m, "1"),
        None => (form.doubled().clone(), "1/2"),
    };
    Report::new(
        "frame",
        params([
            ("matrix", Value::from(name)),
            ("rows", matrix_value(&rows)),
            ("scale", Value::from(scale)),
        ]),
        Status::Ok,
        "",
    )
}

fn setup_error(check: &str, e: impl ToString) -> Vec<Report> {
    vec![Report::new(check, Map::new(), Status::ParamError, e.to_string())]
}

/// Matrices of the principal frame in print order.
pub fn frame_matrices(quiver: &ValuedQuiver, setup: &PrincipalSetup) -> Vec<(&'static str, IntMatrix)> {
    let f = &setup.frame;
    let mut out = vec![
        ("C", quiver.cartan_matrix()),
        ("D", quiver.symmetrizer()),
        ("E", quiver.euler_matrix()),
        ("R", quiver.ext().clone()),
        ("R'", quiver.ext_dual().clone()),
        ("B", quiver.exchange_matrix()),
        ("B~", f.b_tilde.clone()),
        ("E~", f.e_tilde.clone()),
        ("E~'", f.e_tilde_dual.clone()),
    ];
    if let Some(s) = &setup.special {
        out.push(("Theta", s.theta.clone()));
        out.push(("Theta^-1", s.theta_inv.clone()));
        out.push(("Gamma", s.gamma.clone()));
    }
    out
}

fn frame_reports(quiver: &ValuedQuiver, display: &mut String) -> Vec<Report> {
    let start = Instant::now();
    let setup = match PrincipalSetup::new(quiver) {
        Ok(s) => s,
        Err(e) => return setup_error("frame", e),
    };
    let mut reports = Vec::new();
    for (name, m) in frame_matrices(quiver, &setup) {
        let _ = writeln!(display, "{name} =\n{m}");
        reports.push(Report::new(
            "frame",
            params([
                ("matrix", Value::from(name)),
                ("rows", matrix_value(&m)),
                ("scale", Value::from("1")),
            ]),
            Status::Ok,
            "",
        ));
    }
    let _ = writeln!(display, "L1 =\n{}", render_form(&setup.lambda1));
    reports.push(form_report("L1", &setup.lambda1));
    match &setup.special {
        Some(s) => {
            let _ = writeln!(display, "L0 =\n{}", render_form(&s.lambda0));
            let _ = writeln!(display, "L2 =\n{}", render_form(&s.lambda2));
            reports.push(form_report("L0", &s.lambda0));
            reports.push(form_report("L2", &s.lambda2));
        }
        None => display.push_str("L0, L2: unavailable (oriented cycle)\n"),
    }
    reports.into_iter().map(|r| r.timed(start)).collect()
}

fn resolve_form(setup: &PrincipalSetup, file: &QuiverFile, choice: LambdaChoice) -> Result<Arc<SkewForm>, String> {
    match choice {
        LambdaChoice::One => Ok(Arc::clone(&setup.lambda1)),
        LambdaChoice::Two => setup
            .lambda2()
            .ok_or_else(|| "L2 needs an acyclic quiver".to_string()),
        LambdaChoice::File => file
            .lambda
            .clone()
            .map(Arc::new)
            .ok_or_else(|| "the quiver file has no `lambda` block".to_string()),
    }
}

/// The forms a command runs on when `--lambda` is absent.
fn default_choices(setup: &PrincipalSetup, file: &QuiverFile) -> Vec<LambdaChoice> {
    let mut out = vec![LambdaChoice::One];
    if setup.special.is_some() {
        out.push(LambdaChoice::Two);
    }
    if file.lambda.is_some() {
        out.push(LambdaChoice::File);
    }
    out
}

/// `None` if `B̃^T Λ = (scale·D | 0)`, else a description of the failure.
pub fn compat_witness(form: &SkewForm, b_tilde: &IntMatrix, valuations: &[i64], scale: i64) -> Option<String> {
    let expected: Vec<i64> = valuations.iter().map(|d| scale * d).collect();
    match check_compatible(form, b_tilde) {
        Ok(Compatibility::Compatible(d)) if d == expected => None,
        Ok(Compatibility::Compatible(d)) => Some(format!("diagonal {d:?}, expected {expected:?}")),
        Ok(Compatibility::Incompatible(w)) => Some(w.to_string()),
        Err(e) => Some(e.to_string()),
    }
}

fn compat_reports(file: &QuiverFile, lambda: Option<LambdaChoice>) -> Vec<Report> {
    let setup = match PrincipalSetup::new(&file.quiver) {
        Ok(s) => s,
        Err(e) => return setup_error("compat", e),
    };
    let choices = lambda.map(|c| vec![c]).unwrap_or_else(|| default_choices(&setup, file));
    let vals = file.quiver.valuations();
    let mut reports = Vec::new();
    for choice in choices {
        let start = Instant::now();
        let p = params([("lambda", choice.label())]);
        reports.push(match resolve_form(&setup, file, choice) {
            Ok(form) => Report::verdict("compat", p, compat_witness(&form, &setup.frame.b_tilde, vals, 1)).timed(start),
            Err(e) => Report::new("compat", p, Status::ParamError, e),
        });
        if choice == LambdaChoice::Two {
            if let Some(s) = &setup.special {
                let start = Instant::now();
                let w = compat_witness(&s.lambda0, &setup.frame.b_tilde, vals, 2);
                reports.push(Report::verdict("compat", params([("lambda", "0")]), w).timed(start));
            }
        }
    }
    reports
}

fn mutate_reports(file: &QuiverFile, k: usize, lambda: Option<LambdaChoice>, display: &mut String) -> Vec<Report> {
    let setup = match PrincipalSetup::new(&file.quiver) {
        Ok(s) => s,
        Err(e) => return setup_error("mutate", e),
    };
    let choices = lambda.map(|c| vec![c]).unwrap_or_else(|| default_choices(&setup, file));
    let mut reports = Vec::new();
    for choice in choices {
        let start = Instant::now();
        let p = params([("k", Value::from(k)), ("lambda", Value::from(choice.label()))]);
        let form = match resolve_form(&setup, file, choice) {
            Ok(f) => f,
            Err(e) => {
                reports.push(Report::new("mutate", p, Status::ParamError, e));
                continue;
            }
        };
        if k == 0 || k > file.quiver.n() {
            let msg = format!("k={k} out of range 1..={}", file.quiver.n());
            reports.push(Report::new("mutate", p, Status::ParamError, msg));
            continue;
        }
        let seed = match QuantumSeed::new(form, setup.frame.b_tilde.clone()) {
            Ok(s) => s,
            Err(e) => {
                reports.push(Report::new("mutate", p, Status::ParamError, e.to_string()));
                continue;
            }
        };
        let witness = match mutate_seed(&seed, k - 1) {
            Ok(mutated) => {
                let y = exchange_variable(seed.form(), seed.exchange(), k - 1, LaurentW::one());
                let _ = writeln!(
                    display,
                    "mutation at k={k}, lambda={}:\nB~' =\n{}\nL' =\n{}\nx'_{k} = {y}\n",
                    choice.label(),
                    mutated.exchange(),
                    render_form(mutated.form())
                );
                match mutate_seed(&mutated, k - 1) {
                    Ok(back) if back == seed => None,
                    Ok(_) => Some("mutating twice does not return the seed".to_string()),
                    Err(e) => Some(e.to_string()),
                }
            }
            Err(e) => Some(e.to_string()),
        };
        reports.push(Report::verdict("mutate", p, witness).timed(start));
    }
    reports
}

const WITNESS_LIMIT: usize = 600;

fn clip(s: String) -> String {
    if s.len() <= WITNESS_LIMIT {
        return s;
    }
    let mut cut = WITNESS_LIMIT;
    while !s.is_char_boundary(cut) {
        cut -= 1;
    }
    format!("{} ... ({} bytes)", &s[..cut], s.len())
}

/// 0-based ordered vertex pairs of the grid. Equal pairs are dropped unless
/// both `--i` and `--j` name a single vertex.
fn vertex_pairs(grid: &Grid, n: usize) -> Vec<(i64, i64)> {
    let all: Vec<i64> = (1..=n as i64).collect();
    let is = grid.i.clone().unwrap_or_else(|| all.clone());
    let js = grid.j.clone().unwrap_or(all);
    let singles = is.len() == 1 && js.len() == 1;
    let mut out = Vec::new();
    for &i in &is {
        for &j in &js {
            if i != j || singles {
                out.push((i, j));
            }
        }
    }
    out
}

fn to_index(v: i64) -> usize {
    if v < 1 {
        usize::MAX
    } else {
        v as usize - 1
    }
}

/// Largest `p` of the default grid.
pub const DEFAULT_MAX_P: i64 = 4;

/// The default `p` values: the admissible range up to [`DEFAULT_MAX_P`].
fn default_ps(bound: i64) -> Vec<i64> {
    (bound.max(1)..=DEFAULT_MAX_P).collect()
}

/// One torus-relation case with its report parameters.
#[derive(Debug, Clone)]
pub struct TorusCase {
    pub lambda: LambdaChoice,
    pub params: RelationParams,
}

/// Expands the grid for one torus kind. Vertex values are 1-based and are
/// passed through unchecked so out-of-range input becomes a param-error.
pub fn torus_cases(kind: RelationKind, frame: &FrameData, grid: &Grid, lambdas: &[LambdaChoice]) -> Vec<TorusCase> {
    let mut out = Vec::new();
    for &lambda in lambdas {
        for (i, j) in vertex_pairs(grid, frame.n) {
            let (i, j) = (to_index(i), to_index(j));
            if !kind.is_high() {
                out.push(TorusCase {
                    lambda,
                    params: RelationParams { i, j, l: 1, p: 0, eps: 1 },
                });
                continue;
            }
            let in_range = i < frame.n && j < frame.n;
            for &l in grid.l.as_deref().unwrap_or(&[1, 2]) {
                let ps = match &grid.p {
                    Some(ps) => ps.clone(),
                    None if in_range && l >= 1 => default_ps(kind.min_p(frame, i, j, l)),
                    None => vec![1],
                };
                for &p in &ps {
                    for &eps in grid.eps.as_deref().unwrap_or(&[1, -1]) {
                        out.push(TorusCase {
                            lambda,
                            params: RelationParams { i, j, l, p, eps },
                        });
                    }
                }
            }
        }
    }
    out
}

fn torus_lambdas(kind: RelationKind, setup: &PrincipalSetup, file: &QuiverFile, grid: &Grid) -> Vec<LambdaChoice> {
    if let Some(c) = grid.lambda {
        return vec![c];
    }
    match kind {
        RelationKind::Fundamental | RelationKind::FundamentalHigh => vec![LambdaChoice::One],
        RelationKind::QcaSerre | RelationKind::QcaHighSerre => vec![LambdaChoice::Two],
        RelationKind::TwistedSerre | RelationKind::TwistedHighSerre => default_choices(setup, file),
    }
}

fn index_label(i: usize) -> Value {
    if i == usize::MAX {
        Value::from(0)
    } else {
        Value::from(i + 1)
    }
}

fn torus_case_params(kind: RelationKind, case: &TorusCase) -> Map<String, Value> {
    let p = case.params;
    let mut m = params([
        ("i", index_label(p.i)),
        ("j", index_label(p.j)),
        ("lambda", Value::from(case.lambda.label())),
    ]);
    if kind.is_high() {
        m.insert("l".into(), p.l.into());
        m.insert("p".into(), p.p.into());
        m.insert("eps".into(), p.eps.into());
    }
    m
}

/// Runs one torus case; `Ok(None)` on success, `Ok(Some(witness))` on
/// failure, `Err` for parameter errors.
pub fn run_torus_case(
    kind: RelationKind,
    setup: &PrincipalSetup,
    file: &QuiverFile,
    case: &TorusCase,
) -> Result<Option<String>, String> {
    let form = resolve_form(setup, file, case.lambda)?;
    let verdict = verify_torus_relation(kind, &setup.frame, &form, case.params).map_err(|e| e.to_string())?;
    Ok((!verdict.passed()).then(|| clip(verdict.remainder.to_string())))
}

fn hall_form_choices(grid: &Grid) -> Result<Vec<FormChoice>, String> {
    match grid.lambda {
        None => Ok(vec![FormChoice::Lambda1, FormChoice::Lambda2]),
        Some(LambdaChoice::One) => Ok(vec![FormChoice::Lambda1]),
        Some(LambdaChoice::Two) => Ok(vec![FormChoice::Lambda2]),
        Some(LambdaChoice::File) => Err("Hall checks use the principal forms only".into()),
    }
}

fn form_label(f: FormChoice) -> &'static str {
    match f {
        FormChoice::Lambda1 => "1",
        FormChoice::Lambda2 => "2",
    }
}

fn hall_reports(kind: HallRelationKind, file: &QuiverFile, grid: &Grid, opts: &Options) -> Vec<Report> {
    let check = kind.name();
    let setup = match PrincipalSetup::new(&file.quiver) {
        Ok(s) => s,
        Err(e) => return setup_error(check, e),
    };
    let max_total = grid.pairs.unwrap_or(3);
    let mut reports = Vec::new();
    for &q in grid.q.as_deref().unwrap_or(&[2]) {
        let ctx = match RepContext::new(&file.quiver, q) {
            Ok(c) => c.with_bound(opts.bound),
            Err(e) => {
                reports.push(Report::new(check, params([("q", q)]), Status::ParamError, e.to_string()));
                continue;
            }
        };
        let mut cases: Vec<(Map<String, Value>, HallRelationParams)> = Vec::new();
        let base = HallRelationParams {
            max_total,
            ..HallRelationParams::default()
        };
        match kind {
            HallRelationKind::Serre | HallRelationKind::PhiSerre | HallRelationKind::HighSerre => {
                for (i, j) in vertex_pairs(grid, ctx.n()) {
                    let (i0, j0) = (to_index(i), to_index(j));
                    let pair = params([("i", i), ("j", j), ("q", q)]);
                    let hp = HallRelationParams { i: i0, j: j0, ..base };
                    if kind != HallRelationKind::HighSerre {
                        cases.push((pair, hp));
                        continue;
                    }
                    for &l in grid.l.as_deref().unwrap_or(&[1, 2]) {
                        let ps = match &grid.p {
                            Some(ps) => ps.clone(),
                            None if i0 < ctx.n() && j0 < ctx.n() => {
                                default_ps(-l * setup.frame.cartan[(i0, j0)]).into_iter().filter(|&p| p <= 3).collect()
                            }
                            None => vec![1],
                        };
                        for &p in &ps {
                            for &eps in grid.eps.as_deref().unwrap_or(&[1, -1]) {
                                let mut m = pair.clone();
                                m.extend(params([("l", l), ("p", p), ("eps", eps)]));
                                cases.push((m, HallRelationParams { l, p, eps, ..hp }));
                            }
                        }
                    }
                }
            }
            HallRelationKind::PsiHom => match hall_form_choices(grid) {
                Ok(forms) => {
                    for form in forms {
                        let m = params([
                            ("lambda", Value::from(form_label(form))),
                            ("pairs", Value::from(max_total)),
                            ("q", Value::from(q)),
                        ]);
                        cases.push((m, HallRelationParams { form, ..base }));
                    }
                }
                Err(e) => reports.push(Report::new(check, params([("q", q)]), Status::ParamError, e)),
            },
            HallRelationKind::RhoIso | HallRelationKind::StarClosedForm => {
                let m = params([("pairs", Value::from(max_total)), ("q", Value::from(q))]);
                cases.push((m, base));
            }
        }
        for (m, hp) in cases {
            let start = Instant::now();
            reports.push(match verify_hall_relation(kind, &ctx, &setup, hp) {
                Ok(v) => Report::verdict(check, m, (!v.passed()).then(|| clip(v.witness))).timed(start),
                Err(e) => Report::new(check, m, Status::ParamError, e.to_string()),
            });
        }
    }
    reports
}

/// `None` if `y_k = X^{-Ẽe_k} + X^{-Ẽ'e_k}` for every `k`.
pub fn one_step_formal_witness(setup: &PrincipalSetup, form: &Arc<SkewForm>) -> Option<String> {
    let f = &setup.frame;
    for k in 0..f.n {
        let y = exchange_variable(form, &f.b_tilde, k, LaurentW::one());
        let unit = hallcluster::qtorus::unit(f.n, k);
        let neg = |v: Vec<i64>| v.into_iter().map(|x| -x).collect::<Vec<_>>();
        let expected = TorusElement::from_terms(
            form,
            [
                (neg(f.e_apply(&unit)), LaurentW::one()),
                (neg(f.e_dual_apply(&unit)), LaurentW::one()),
            ],
        );
        if y != expected {
            return Some(format!("k={}: y_k = {y}, expected {expected}", k + 1));
        }
    }
    None
}

/// `None` if the character of every simple at `q` equals the specialized
/// one-step variable. Quivers without a representation context use the
/// closed-form simple character.
pub fn one_step_character_witness(
    quiver: &ValuedQuiver,
    setup: &PrincipalSetup,
    form: &Arc<SkewForm>,
    q: i64,
) -> Option<String> {
    let f = &setup.frame;
    let ctx = RepContext::new(quiver, q).ok();
    for k in 0..f.n {
        let y = exchange_variable(form, &f.b_tilde, k, LaurentW::one())
            .map_coefficients(|c| specialize_at_prime(c, q).expect("prime q"));
        let chi: TorusElement<QuarticNumber> = match &ctx {
            Some(ctx) => {
                let id = match ctx.iso_class_of(&ctx.simple(k)) {
                    Ok(id) => id,
                    Err(e) => return Some(e.to_string()),
                };
                match cc_character(ctx, &id, form, f) {
                    Ok(x) => x,
                    Err(e) => return Some(e.to_string()),
                }
            }
            None => simple_character(form, f, k, q),
        };
        if chi != y {
            return Some(format!("k={}: X_S = {chi}, y_k = {y}", k + 1));
        }
    }
    None
}

fn one_step_reports(file: &QuiverFile, grid: &Grid) -> Vec<Report> {
    let setup = match PrincipalSetup::new(&file.quiver) {
        Ok(s) => s,
        Err(e) => return setup_error("one-step", e),
    };
    let choices = grid.lambda.map(|c| vec![c]).unwrap_or_else(|| default_choices(&setup, file));
    let mut reports = Vec::new();
    for choice in choices {
        let form = match resolve_form(&setup, file, choice) {
            Ok(f) => f,
            Err(e) => {
                reports.push(Report::new("one-step", params([("lambda", choice.label())]), Status::ParamError, e));
                continue;
            }
        };
        let start = Instant::now();
        let m = params([("lambda", Value::from(choice.label())), ("side", Value::from("torus"))]);
        reports.push(Report::verdict("one-step", m, one_step_formal_witness(&setup, &form)).timed(start));
        for &q in grid.q.as_deref().unwrap_or(&[2]) {
            let start = Instant::now();
            let m = params([
                ("lambda", Value::from(choice.label())),
                ("q", Value::from(q)),
                ("side", Value::from("character")),
            ]);
            if !hallcluster::exactring::is_prime(q) {
                reports.push(Report::new("one-step", m, Status::ParamError, format!("q={q} is not prime")));
                continue;
            }
            let w = one_step_character_witness(&file.quiver, &setup, &form, q);
            reports.push(Report::verdict("one-step", m, w).timed(start));
        }
    }
    reports
}

/// Kinds accepted by `verify` besides the torus and Hall relation kinds.
pub const EXTRA_KINDS: [&str; 2] = ["one-step", "form-identities"];

fn verify_reports(kind: &str, file: &QuiverFile, grid: &Grid, opts: &Options) -> Vec<Report> {
    if let Ok(k) = RelationKind::from_str(kind) {
        let setup = match PrincipalSetup::new(&file.quiver) {
            Ok(s) => s,
            Err(e) => return setup_error(kind, e),
        };
        let lambdas = torus_lambdas(k, &setup, file, grid);
        return torus_cases(k, &setup.frame, grid, &lambdas)
            .into_iter()
            .map(|case| {
                let start = Instant::now();
                let m = torus_case_params(k, &case);
                match run_torus_case(k, &setup, file, &case) {
                    Ok(w) => Report::verdict(kind, m, w).timed(start),
                    Err(e) => Report::new(kind, m, Status::ParamError, e),
                }
            })
            .collect();
    }
    if let Ok(k) = HallRelationKind::from_str(kind) {
        return hall_reports(k, file, grid, opts);
    }
    match kind {
        "one-step" => one_step_reports(file, grid),
        "form-identities" => {
            let start = Instant::now();
            let setup = match PrincipalSetup::new(&file.quiver) {
                Ok(s) => s,
                Err(e) => return setup_error(kind, e),
            };
            let samples = 100;
            let m = params([("samples", samples)]);
            if setup.special.is_none() {
                return vec![Report::new(kind, m, Status::ParamError, "needs an acyclic quiver")];
            }
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            vec![Report::verdict(kind, m, form_identities_witness(&setup, &mut rng, samples)).timed(start)]
        }
        other => {
            let mut names: Vec<&str> = RelationKind::ALL.iter().map(|k| k.name()).collect();
            names.extend(HallRelationKind::ALL.iter().map(|k| k.name()));
            names.extend(EXTRA_KINDS);
            setup_error(other, format!("unknown kind `{other}`; expected one of {}", names.join(", ")))
        }
    }
}

/// Evaluates the form identities on `samples` random vector quadruples with
/// entries in `-3..=3`.
pub fn form_identities_witness<R: Rng>(setup: &PrincipalSetup, rng: &mut R, samples: usize) -> Option<String> {
    let n = setup.frame.n;
    let mut draw = || (0..n).map(|_| rng.random_range(-3..=3)).collect::<Vec<i64>>();
    for _ in 0..samples {
        let (a, b, c, d) = (draw(), draw(), draw(), draw());
        let Some(sample) = form_identity_sample(setup, &a, &b, &c, &d) else {
            return Some("no special form".into());
        };
        if let Some((name, (l, r))) = sample.pairs().into_iter().find(|(_, (l, r))| l != r) {
            return Some(format!("{name} at a={a:?} b={b:?} c={c:?} d={d:?}: {l} != {r}"));
        }
    }
    None
}

/// `None` if mutation in every direction is an involution and preserves
/// the compatibility diagonal.
pub fn mutation_witness(form: &Arc<SkewForm>, b_tilde: &IntMatrix) -> Option<String> {
    let seed = match QuantumSeed::new(Arc::clone(form), b_tilde.clone()) {
        Ok(s) => s,
        Err(e) => return Some(e.to_string()),
    };
    for k in 0..seed.n() {
        match mutate_seed(&seed, k).and_then(|m| mutate_seed(&m, k)) {
            Ok(back) if back == seed => {}
            Ok(_) => return Some(format!("k={}: not an involution", k + 1)),
            Err(e) => return Some(format!("k={}: {e}", k + 1)),
        }
    }
    None
}

fn valuation_label(q: &ValuedQuiver) -> String {
    q.valuations().iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

/// The named quivers of the sweep plus `count` random ones.
pub fn sweep_quivers(seed: u64, count: usize) -> Vec<(String, ValuedQuiver)> {
    let mut out = vec![
        ("A2".to_string(), a2()),
        ("A3".to_string(), a3()),
        ("K2".to_string(), kronecker()),
    ];
    for (idx, q) in random_family(seed, count, FamilyShape::default()).into_iter().enumerate() {
        out.push((format!("random-{:02}", idx + 1), q));
    }
    out
}

/// Aggregates a property over every quiver of the sweep: one report per
/// `(quiver, check)`.
fn sweep_reports(seed: u64, count: usize) -> Vec<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    for (name, quiver) in sweep_quivers(seed, count) {
        let base = params([
            ("quiver", Value::from(name.clone())),
            ("valuation", Value::from(valuation_label(&quiver))),
        ]);
        let with = |extra: &[(&str, Value)]| {
            let mut m = base.clone();
            m.extend(extra.iter().map(|(k, v)| (k.to_string(), v.clone())));
            m
        };
        let setup = match PrincipalSetup::new(&quiver) {
            Ok(s) => s,
            Err(e) => {
                reports.push(Report::new("sweep/setup", base.clone(), Status::ParamError, e.to_string()));
                continue;
            }
        };
        let file = QuiverFile {
            quiver: quiver.clone(),
            lambda: None,
        };
        let f = &setup.frame;
        let vals = quiver.valuations();

        let start = Instant::now();
        let w = compat_witness(&setup.lambda1, &f.b_tilde, vals, 1);
        reports.push(Report::verdict("sweep/compat", with(&[("lambda", "1".into())]), w).timed(start));
        if let Some(s) = &setup.special {
            let start = Instant::now();
            let w = compat_witness(&s.lambda0, &f.b_tilde, vals, 2);
            reports.push(Report::verdict("sweep/compat", with(&[("lambda", "0".into())]), w).timed(start));

            let start = Instant::now();
            let w = form_identities_witness(&setup, &mut rng, 100);
            reports.push(Report::verdict("sweep/form-identities", base.clone(), w).timed(start));
        }

        let forms = default_choices(&setup, &file);
        for &choice in &forms {
            let form = resolve_form(&setup, &file, choice).expect("default choices resolve");
            let lam = [("lambda", Value::from(choice.label()))];
            let start = Instant::now();
            let w = mutation_witness(&form, &f.b_tilde);
            reports.push(Report::verdict("sweep/mutation", with(&lam), w).timed(start));

            let start = Instant::now();
            let w = one_step_formal_witness(&setup, &form)
                .or_else(|| one_step_character_witness(&quiver, &setup, &form, 2));
            reports.push(Report::verdict("sweep/one-step", with(&lam), w).timed(start));
        }

        for kind in RelationKind::ALL {
            let start = Instant::now();
            let lambdas = torus_lambdas(kind, &setup, &file, &Grid::default());
            let cases = torus_cases(kind, f, &Grid::default(), &lambdas);
            let mut witness = None;
            for case in &cases {
                let failure = match run_torus_case(kind, &setup, &file, case) {
                    Ok(None) => None,
                    Ok(Some(w)) => Some(w),
                    Err(e) => Some(format!("param-error: {e}")),
                };
                if let Some(w) = failure {
                    let ps: Vec<String> = torus_case_params(kind, case)
                        .iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect();
                    witness = Some(format!("{}: {w}", ps.join(" ")));
                    break;
                }
            }
            let m = with(&[("cases", Value::from(cases.len()))]);
            reports.push(Report::verdict(format!("sweep/{}", kind.name()), m, witness).timed(start));
        }
    }
    reports
}
