//! Quantum seeds, compatible pairs and the relation families satisfied by
//! one-step mutated variables.
//!
//! Two compatible forms are built for a principal frame:
//!
//! * `Λ1 = (0, -D; D, -DB)`, valid for any valued quiver,
//! * `Λ2 = Λ0 / 2` with `Λ0 = Θ^{-T} Γ Θ^{-1}`, valid for acyclic quivers.
//!
//! [`verify_torus_relation`] expands an alternating sum
//! `Σ_t coeff(t) y_i^{p+1-t} y_j^l y_i^t` in the formal torus and reports the
//! remainder.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::cartan::{FrameData, ValuedQuiver};
use crate::exactring::{bracket_binomial, gauss_binomial, Coefficient, LaurentW};
use crate::matrix::IntMatrix;
use crate::qtorus::{SkewForm, TorusElement, TorusError};

/// An entry of `B̃^T Λ` that breaks the `(D | 0)` shape, stored doubled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatWitness {
    pub row: usize,
    pub col: usize,
    pub doubled_value: i64,
}

impl fmt::Display for CompatWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.doubled_value;
        let value = if v % 2 == 0 {
            (v / 2).to_string()
        } else {
            format!("{v}/2")
        };
        write!(f, "(B~^T L)[{},{}] = {value}", self.row + 1, self.col + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Compatibility {
    /// The diagonal of the `D` block.
    Compatible(Vec<i64>),
    Incompatible(CompatWitness),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error("size mismatch: {0}")]
    Size(String),
    #[error("pair is not compatible: {0}")]
    Incompatible(CompatWitness),
    #[error("mutation direction {k} out of range 1..={n}")]
    Direction { k: usize, n: usize },
    #[error("DB is not skew-symmetric")]
    NotSkewSymmetrizable,
    #[error("mutation changed the compatibility diagonal from {before:?} to {after:?}")]
    MutationBrokeCompatibility { before: Vec<i64>, after: Vec<i64> },
    #[error("the Euler matrix is singular")]
    SingularEuler,
    #[error("{0} is not integral")]
    NonIntegral(&'static str),
    #[error("quiver has an oriented cycle")]
    Cyclic,
    #[error(transparent)]
    Torus(#[from] TorusError),
}

/// Checks whether `B̃^T Λ = (D | 0)` with `D` a positive integer diagonal.
pub fn check_compatible(form: &SkewForm, b_tilde: &IntMatrix) -> Result<Compatibility, SeedError> {
    let m = form.m();
    if b_tilde.rows() != m {
        return Err(SeedError::Size(format!(
            "B~ has {} rows but the form is {m}x{m}",
            b_tilde.rows()
        )));
    }
    let n = b_tilde.cols();
    if n > m {
        return Err(SeedError::Size(format!("B~ is {m}x{n} with n > m")));
    }
    let product = &b_tilde.transpose() * form.doubled();
    let mut diagonal = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..m {
            let x = product[(i, j)];
            let ok = if i == j { x > 0 && x % 2 == 0 } else { x == 0 };
            if !ok {
                return Ok(Compatibility::Incompatible(CompatWitness {
                    row: i,
                    col: j,
                    doubled_value: x,
                }));
            }
        }
        diagonal.push(product[(i, i)] / 2);
    }
    Ok(Compatibility::Compatible(diagonal))
}

/// A compatible pair `(Λ, B̃)` together with its diagonal `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumSeed {
    form: Arc<SkewForm>,
    exchange: IntMatrix,
    diagonal: Vec<i64>,
}

impl QuantumSeed {
    pub fn new(form: Arc<SkewForm>, exchange: IntMatrix) -> Result<Self, SeedError> {
        let diagonal = match check_compatible(&form, &exchange)? {
            Compatibility::Compatible(d) => d,
            Compatibility::Incompatible(w) => return Err(SeedError::Incompatible(w)),
        };
        let n = exchange.cols();
        let principal = exchange.submatrix(0, 0, n, n);
        if !(&IntMatrix::diagonal(&diagonal) * &principal).is_skew_symmetric() {
            return Err(SeedError::NotSkewSymmetrizable);
        }
        Ok(Self {
            form,
            exchange,
            diagonal,
        })
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        &self.form
    }

    pub fn exchange(&self) -> &IntMatrix {
        &self.exchange
    }

    pub fn diagonal(&self) -> &[i64] {
        &self.diagonal
    }

    pub fn m(&self) -> usize {
        self.exchange.rows()
    }

    pub fn n(&self) -> usize {
        self.exchange.cols()
    }

    fn direction(&self, k: usize) -> Result<(), SeedError> {
        if k >= self.n() {
            Err(SeedError::Direction { k: k + 1, n: self.n() })
        } else {
            Ok(())
        }
    }
}

/// The matrix `H` of a mutation in direction `k` (0-based).
pub fn mutation_matrix(exchange: &IntMatrix, k: usize) -> IntMatrix {
    let m = exchange.rows();
    IntMatrix::from_fn(m, m, |i, j| {
        if j != k {
            i64::from(i == j)
        } else if i == k {
            -1
        } else {
            (-exchange[(i, k)]).max(0)
        }
    })
}

/// Mutated exchange matrix in direction `k` (0-based).
pub fn mutate_exchange(exchange: &IntMatrix, k: usize) -> IntMatrix {
    IntMatrix::from_fn(exchange.rows(), exchange.cols(), |i, j| {
        let b = exchange[(i, j)];
        if i == k || j == k {
            -b
        } else {
            let bik = exchange[(i, k)];
            let bkj = exchange[(k, j)];
            b + (bik.abs() * bkj + bik * bkj.abs()) / 2
        }
    })
}

/// Mutates `(Λ, B̃)` in direction `k` (0-based) and re-checks compatibility.
pub fn mutate_seed(seed: &QuantumSeed, k: usize) -> Result<QuantumSeed, SeedError> {
    seed.direction(k)?;
    let h = mutation_matrix(&seed.exchange, k);
    let form = SkewForm::from_doubled(&(&h.transpose() * seed.form.doubled()) * &h)?;
    let exchange = mutate_exchange(&seed.exchange, k);
    let mutated = match QuantumSeed::new(Arc::new(form), exchange) {
        Ok(s) => s,
        Err(SeedError::Incompatible(_)) => {
            return Err(SeedError::MutationBrokeCompatibility {
                before: seed.diagonal.clone(),
                after: Vec::new(),
            })
        }
        Err(e) => return Err(e),
    };
    if mutated.diagonal != seed.diagonal {
        return Err(SeedError::MutationBrokeCompatibility {
            before: seed.diagonal.clone(),
            after: mutated.diagonal,
        });
    }
    Ok(mutated)
}

/// The variable `x'_k` produced by one mutation in direction `k` (0-based):
/// `X^{Σ[b_ik]+ e_i - e_k} + X^{Σ[-b_ik]+ e_i - e_k}`.
pub fn one_step_variable<C: Coefficient>(
    seed: &QuantumSeed,
    k: usize,
    one: C,
) -> Result<TorusElement<C>, SeedError> {
    seed.direction(k)?;
    Ok(exchange_variable(seed.form(), seed.exchange(), k, one))
}

/// One-step variable `y_k` of the seed `(form, exchange)` without the
/// compatibility check.
pub fn exchange_variable<C: Coefficient>(
    form: &Arc<SkewForm>,
    exchange: &IntMatrix,
    k: usize,
    one: C,
) -> TorusElement<C> {
    let column = exchange.column(k);
    let mut plus: Vec<i64> = column.iter().map(|b| (*b).max(0)).collect();
    let mut minus: Vec<i64> = column.iter().map(|b| (-*b).max(0)).collect();
    plus[k] -= 1;
    minus[k] -= 1;
    TorusElement::from_terms(form, [(plus, one.clone()), (minus, one)])
}

/// `Λ1 = (0, -D; D, -DB)`.
pub fn lambda1_build(exchange: &IntMatrix, valuations: &[i64]) -> Result<SkewForm, SeedError> {
    let n = valuations.len();
    if exchange.rows() != n || exchange.cols() != n {
        return Err(SeedError::Size(format!(
            "B must be {n}x{n}, got {}x{}",
            exchange.rows(),
            exchange.cols()
        )));
    }
    let d = IntMatrix::diagonal(valuations);
    let db = &d * exchange;
    if !db.is_skew_symmetric() {
        return Err(SeedError::NotSkewSymmetrizable);
    }
    let lambda = IntMatrix::blocks(&IntMatrix::zeros(n, n), &-&d, &d, &-&db);
    Ok(SkewForm::from_integral(&lambda)?)
}

/// `Θ`, `Θ^{-1}`, `Γ`, `Λ0` and `Λ2 = Λ0 / 2` for an acyclic quiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialForms {
    pub theta: IntMatrix,
    pub theta_inv: IntMatrix,
    pub gamma: IntMatrix,
    pub lambda0: SkewForm,
    pub lambda2: SkewForm,
}

impl SpecialForms {
    pub fn for_quiver(quiver: &ValuedQuiver) -> Result<Self, SeedError> {
        if !quiver.is_acyclic() {
            return Err(SeedError::Cyclic);
        }
        lambda0_build(&quiver.euler_matrix(), quiver.valuations())
    }

    /// `Λ0` as an integer matrix.
    pub fn lambda0_matrix(&self) -> IntMatrix {
        self.lambda2.doubled().clone()
    }
}

/// Builds the special compatible pair from the Euler matrix `E` and `D`.
///
/// All block formulas are evaluated over `Q` and every result that must be
/// integral is checked; `Θ Θ^{-1} = I` is verified before returning.
pub fn lambda0_build(euler: &IntMatrix, valuations: &[i64]) -> Result<SpecialForms, SeedError> {
    let n = valuations.len();
    if euler.rows() != n || euler.cols() != n {
        return Err(SeedError::Size(format!(
            "E must be {n}x{n}, got {}x{}",
            euler.rows(),
            euler.cols()
        )));
    }
    let d = IntMatrix::diagonal(valuations);
    let et = euler.transpose();
    let id = IntMatrix::identity(n);
    let zero = IntMatrix::zeros(n, n);

    let d_inv = d.inverse_over_q().ok_or(SeedError::SingularEuler)?;
    let et_inv = et.inverse_over_q().ok_or(SeedError::SingularEuler)?;
    let integral = |m: crate::matrix::RatMatrix, what| m.to_integral().ok_or(SeedError::NonIntegral(what));

    let d_inv_e = integral(d_inv.mul(&euler.to_rational()), "D^-1 E")?;
    let d_inv_et = integral(d_inv.mul(&et.to_rational()), "D^-1 E^T")?;
    let et_inv_d = integral(et_inv.mul(&d.to_rational()), "(E^T)^-1 D")?;
    let et_inv_e = integral(et_inv.mul(&euler.to_rational()), "(E^T)^-1 E")?;

    let theta = IntMatrix::blocks(&-&d_inv_e, &-&d_inv_et, &id, &zero);
    let theta_inv = IntMatrix::blocks(&zero, &id, &-&et_inv_d, &-&et_inv_e);
    if &theta * &theta_inv != IntMatrix::identity(2 * n) {
        return Err(SeedError::NonIntegral("Theta^-1"));
    }
    let gamma = IntMatrix::blocks(
        &(&et - euler),
        &-&(&et + euler),
        &(&et + euler),
        &(&et - euler),
    );
    let lambda0 = &(&theta_inv.transpose() * &gamma) * &theta_inv;
    Ok(SpecialForms {
        theta,
        theta_inv,
        gamma,
        lambda0: SkewForm::from_integral(&lambda0)?,
        lambda2: SkewForm::from_doubled(lambda0)?,
    })
}

/// The twist exponents `s`, `a` and `w`.
///
/// Every method returns an exponent of `w = q^{1/4}`, i.e. twice the
/// exponent of `v`. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistExponents {
    euler: IntMatrix,
    valuations: Vec<i64>,
    /// `2Λ(Ẽe_i, Ẽe_j)`.
    lambda_ee: IntMatrix,
}

pub fn twist_exponents(frame: &FrameData, form: &SkewForm) -> Result<TwistExponents, SeedError> {
    if form.m() != frame.m() {
        return Err(SeedError::Size(format!(
            "form is {0}x{0} but the frame has {1} rows",
            form.m(),
            frame.m()
        )));
    }
    let n = frame.n;
    let cols: Vec<Vec<i64>> = (0..n).map(|i| frame.e_tilde.column(i)).collect();
    Ok(TwistExponents {
        euler: frame.euler.clone(),
        valuations: frame.valuations.clone(),
        lambda_ee: IntMatrix::from_fn(n, n, |i, j| form.pairing(&cols[i], &cols[j])),
    })
}

impl TwistExponents {
    fn ee(&self, i: usize, j: usize) -> i64 {
        self.euler[(i, j)]
    }

    /// Closed form of `s^{p,l}_{i,j;t}`.
    pub fn s(&self, i: usize, j: usize, p: i64, l: i64, t: i64) -> i64 {
        let (di, dj) = (self.valuations[i], self.valuations[j]);
        p * (p + 1) * di
            + l * (l - 1) * dj
            + 2 * (p + 1 - t) * l * self.ee(i, j)
            + 2 * l * t * self.ee(j, i)
            + (p + 1 - 2 * t) * l * self.lambda_ee[(i, j)]
    }

    /// `s^{p,l}_{i,j;t}` before collecting terms.
    pub fn s_expanded(&self, i: usize, j: usize, p: i64, l: i64, t: i64) -> i64 {
        let (di, dj) = (self.valuations[i], self.valuations[j]);
        (p + 1 - t) * (p - t) * di
            + l * (l - 1) * dj
            + t * (t - 1) * di
            + (p + 1 - t) * l * self.lambda_ee[(i, j)]
            + 2 * (p + 1 - t) * l * self.ee(i, j)
            + l * t * self.lambda_ee[(j, i)]
            + 2 * (p + 1 - t) * t * di
            + 2 * l * t * self.ee(j, i)
    }

    /// `a_{i,j;l,t}`.
    pub fn a(&self, i: usize, j: usize, l: i64, t: i64) -> i64 {
        2 * (self.ee(j, i) - self.ee(i, j)) * l * t - 2 * self.lambda_ee[(i, j)] * l * t
    }

    /// `w_{i,j;t} = a_{i,j;1,t}`.
    pub fn w(&self, i: usize, j: usize, t: i64) -> i64 {
        self.a(i, j, 1, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    Fundamental,
    FundamentalHigh,
    TwistedSerre,
    TwistedHighSerre,
    QcaSerre,
    QcaHighSerre,
}

impl RelationKind {
    pub const ALL: [RelationKind; 6] = [
        RelationKind::Fundamental,
        RelationKind::FundamentalHigh,
        RelationKind::TwistedSerre,
        RelationKind::TwistedHighSerre,
        RelationKind::QcaSerre,
        RelationKind::QcaHighSerre,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Fundamental => "fundamental",
            RelationKind::FundamentalHigh => "fundamental-high",
            RelationKind::TwistedSerre => "twisted-serre",
            RelationKind::TwistedHighSerre => "twisted-high-serre",
            RelationKind::QcaSerre => "qca-serre",
            RelationKind::QcaHighSerre => "qca-high-serre",
        }
    }

    /// Whether `l`, `p` and `ε` are free parameters.
    pub fn is_high(self) -> bool {
        matches!(
            self,
            RelationKind::FundamentalHigh | RelationKind::TwistedHighSerre | RelationKind::QcaHighSerre
        )
    }

    /// Smallest admissible `p` for the given pair and `l`.
    pub fn min_p(self, frame: &FrameData, i: usize, j: usize, l: i64) -> i64 {
        let c = frame.cartan[(i, j)];
        let b = frame.b_tilde[(i, j)];
        match self {
            RelationKind::Fundamental | RelationKind::FundamentalHigh => {
                if b <= 0 {
                    -l * b
                } else {
                    l * b
                }
            }
            _ => -l * c,
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown torus relation kind `{s}`"))
    }
}

/// 0-based vertex pair plus the grid parameters. `l`, `p` and `eps` are
/// ignored by the non-high kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationParams {
    pub i: usize,
    pub j: usize,
    pub l: i64,
    pub p: i64,
    pub eps: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("vertex {vertex} out of range 1..={n}")]
    Vertex { vertex: usize, n: usize },
    #[error("i and j must differ")]
    SameVertex,
    #[error("l and p must be positive (got l={l}, p={p})")]
    NonPositive { l: i64, p: i64 },
    #[error("epsilon must be 1 or -1, got {0}")]
    Epsilon(i64),
    #[error("p={p} is below the admissible bound {bound}")]
    BelowBound { p: i64, bound: i64 },
    #[error("form is incompatible with the frame: {0}")]
    Incompatible(String),
}

/// Outcome of a relation check; the relation holds iff `remainder` is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusVerdict {
    pub l: i64,
    pub p: i64,
    pub remainder: TorusElement<LaurentW>,
}

impl TorusVerdict {
    pub fn passed(&self) -> bool {
        self.remainder.is_zero()
    }
}

fn sign(t: i64) -> LaurentW {
    LaurentW::from_int(if t % 2 == 0 { 1 } else { -1 })
}

/// `Σ_t coeff(t) y_i^{top-t} y_j^l y_i^t` for `t = 0..=top`.
pub fn alternating_sum<C: Coefficient>(
    yi: &TorusElement<C>,
    yj: &TorusElement<C>,
    top: i64,
    l: i64,
    one: C,
    coeff: impl Fn(i64) -> C,
) -> TorusElement<C> {
    let powers: Vec<TorusElement<C>> = (0..=top).map(|k| yi.pow(k as u32, one.clone())).collect();
    let yjl = yj.pow(l as u32, one);
    let mut acc = TorusElement::zero(yi.form());
    for t in 0..=top {
        let term = powers[(top - t) as usize]
            .try_mul(&yjl)
            .and_then(|x| x.try_mul(&powers[t as usize]))
            .expect("same torus");
        acc = acc.try_add(&term.scale(&coeff(t))).expect("same torus");
    }
    acc
}

/// Coefficient of the high order fundamental relation in its Gaussian form
/// (before converting `[p+1, t]_{v_i}` to the bracket binomial).
pub fn fundamental_high_gauss_coefficient(b: i64, d: i64, l: i64, p: i64, eps: i64, t: i64) -> LaurentW {
    let exp = if b <= 0 {
        (eps * p + eps * l * b - l * b) * t
    } else {
        (eps * p - eps * l * b - l * b) * t
    };
    &(&sign(t) * &LaurentW::w_pow(2 * d * exp)) * &gauss_binomial(p + 1, t, d).expect("valid range")
}

/// Coefficient of the high order fundamental relation in its bracket form.
pub fn fundamental_high_bracket_coefficient(b: i64, d: i64, l: i64, p: i64, eps: i64, t: i64) -> LaurentW {
    let exp = if b <= 0 {
        t * (t - 1) + (eps - 1) * (p + l * b) * t
    } else {
        ((eps - 1) * p - (eps + 1) * l * b) * t + t * (t - 1)
    };
    &(&sign(t) * &LaurentW::w_pow(2 * d * exp)) * &bracket_binomial(p + 1, t, d).expect("valid range")
}

/// Expands the relation of `kind` at `params` with `y_i` taken from the
/// principal seed `(form, frame.b_tilde)`.
pub fn verify_torus_relation(
    kind: RelationKind,
    frame: &FrameData,
    form: &Arc<SkewForm>,
    params: RelationParams,
) -> Result<TorusVerdict, ParamError> {
    let n = frame.n;
    let RelationParams { i, j, eps, .. } = params;
    for v in [i, j] {
        if v >= n {
            return Err(ParamError::Vertex { vertex: v + 1, n });
        }
    }
    if i == j {
        return Err(ParamError::SameVertex);
    }
    match check_compatible(form, &frame.b_tilde) {
        Ok(Compatibility::Compatible(d)) if d == frame.valuations => {}
        Ok(Compatibility::Compatible(d)) => {
            return Err(ParamError::Incompatible(format!(
                "diagonal {d:?} differs from the valuations {:?}",
                frame.valuations
            )))
        }
        Ok(Compatibility::Incompatible(w)) => return Err(ParamError::Incompatible(w.to_string())),
        Err(e) => return Err(ParamError::Incompatible(e.to_string())),
    }

    let c = frame.cartan[(i, j)];
    let b = frame.b_tilde[(i, j)];
    let di = frame.valuations[i];
    let (l, p) = if kind.is_high() {
        if params.l < 1 || params.p < 1 {
            return Err(ParamError::NonPositive {
                l: params.l,
                p: params.p,
            });
        }
        if eps != 1 && eps != -1 {
            return Err(ParamError::Epsilon(eps));
        }
        let bound = kind.min_p(frame, i, j, params.l);
        if params.p < bound {
            return Err(ParamError::BelowBound { p: params.p, bound });
        }
        (params.l, params.p)
    } else {
        (1, kind.min_p(frame, i, j, 1))
    };

    let twist = twist_exponents(frame, form).expect("sizes checked by compatibility");
    let coeff = |t: i64| -> LaurentW {
        match kind {
            RelationKind::TwistedHighSerre => {
                let exp = 2 * di * eps * (p + l * c) * t - twist.a(i, j, l, t);
                &(&sign(t) * &LaurentW::w_pow(exp)) * &gauss_binomial(p + 1, t, di).expect("valid range")
            }
            RelationKind::TwistedSerre => {
                &(&sign(t) * &LaurentW::w_pow(-twist.w(i, j, t))) * &gauss_binomial(p + 1, t, di).expect("valid range")
            }
            RelationKind::QcaHighSerre => {
                let exp = 2 * di * eps * (p + l * c) * t;
                &(&sign(t) * &LaurentW::w_pow(exp)) * &gauss_binomial(p + 1, t, di).expect("valid range")
            }
            RelationKind::QcaSerre => &sign(t) * &gauss_binomial(p + 1, t, di).expect("valid range"),
            RelationKind::FundamentalHigh => fundamental_high_bracket_coefficient(b, di, l, p, eps, t),
            RelationKind::Fundamental => {
                let exp = if b <= 0 { t * (t - 1) } else { t * (t - 1) - 2 * t * b };
                &(&sign(t) * &LaurentW::w_pow(2 * di * exp)) * &bracket_binomial(p + 1, t, di).expect("valid range")
            }
        }
    };

    let yi = exchange_variable(form, &frame.b_tilde, i, LaurentW::one());
    let yj = exchange_variable(form, &frame.b_tilde, j, LaurentW::one());
    let remainder = alternating_sum(&yi, &yj, p + 1, l, LaurentW::one(), coeff);
    Ok(TorusVerdict { l, p, remainder })
}

/// The two compatible forms of a principal frame plus the frame itself.
#[derive(Debug, Clone)]
pub struct PrincipalSetup {
    pub frame: FrameData,
    pub lambda1: Arc<SkewForm>,
    /// `None` for quivers with oriented cycles.
    pub special: Option<SpecialForms>,
}

impl PrincipalSetup {
    pub fn new(quiver: &ValuedQuiver) -> Result<Self, SeedError> {
        let frame = quiver.principal_frame();
        let lambda1 = Arc::new(lambda1_build(&frame.exchange(), quiver.valuations())?);
        let special = if quiver.is_acyclic() {
            Some(SpecialForms::for_quiver(quiver)?)
        } else {
            None
        };
        Ok(Self {
            frame,
            lambda1,
            special,
        })
    }

    pub fn lambda2(&self) -> Option<Arc<SkewForm>> {
        self.special.as_ref().map(|s| Arc::new(s.lambda2.clone()))
    }
}

/// Values of the bilinear-form identities on one sample, each as a
/// `(left, right)` pair in doubled units. The identities hold iff every pair
/// is equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormIdentitySample {
    /// `2Λ1(Ẽα, Ẽβ)` against `0`.
    pub lambda1_vanishes: (i64, i64),
    /// `Γ((α;β),(γ;δ))` against its Euler-form expansion.
    pub gamma_expansion: (i64, i64),
    /// `2Λ2(Ẽα, Ẽ'β)` against `-(α,β)`.
    pub lambda2_mixed: (i64, i64),
    /// `2Λ2(Ẽα, Ẽβ)` against `<β,α> - <α,β>`.
    pub lambda2_pure: (i64, i64),
    /// `2Λ2(Ẽα, B̃β)` against `-2<β,α>`.
    pub lambda2_exchange: (i64, i64),
}

impl FormIdentitySample {
    pub fn pairs(&self) -> [(&'static str, (i64, i64)); 5] {
        [
            ("lambda1-vanishes", self.lambda1_vanishes),
            ("gamma-expansion", self.gamma_expansion),
            ("lambda2-mixed", self.lambda2_mixed),
            ("lambda2-pure", self.lambda2_pure),
            ("lambda2-exchange", self.lambda2_exchange),
        ]
    }

    pub fn holds(&self) -> bool {
        self.pairs().iter().all(|(_, (a, b))| a == b)
    }
}

/// Evaluates every form identity at `α, β, γ, δ ∈ Z^n`. Requires an acyclic
/// quiver (for `Λ2` and `Γ`).
pub fn form_identity_sample(
    setup: &PrincipalSetup,
    alpha: &[i64],
    beta: &[i64],
    gamma: &[i64],
    delta: &[i64],
) -> Option<FormIdentitySample> {
    let special = setup.special.as_ref()?;
    let f = &setup.frame;
    let ea = f.e_apply(alpha);
    let eb = f.e_apply(beta);
    let euler = |x: &[i64], y: &[i64]| f.euler_form(x, y);
    let diff: Vec<i64> = gamma.iter().zip(delta).map(|(a, b)| a - b).collect();
    let sum: Vec<i64> = gamma.iter().zip(delta).map(|(a, b)| a + b).collect();
    let ab: Vec<i64> = alpha.iter().chain(beta).copied().collect();
    let gd: Vec<i64> = gamma.iter().chain(delta).copied().collect();
    let l2 = &special.lambda2;
    Some(FormIdentitySample {
        lambda1_vanishes: (setup.lambda1.pairing(&ea, &eb), 0),
        gamma_expansion: (
            special.gamma.bilinear(&ab, &gd),
            euler(&diff, alpha) + euler(beta, &diff) + euler(&sum, beta) - euler(alpha, &sum),
        ),
        lambda2_mixed: (
            l2.pairing(&ea, &f.e_dual_apply(beta)),
            -(euler(alpha, beta) + euler(beta, alpha)),
        ),
        lambda2_pure: (l2.pairing(&ea, &eb), euler(beta, alpha) - euler(alpha, beta)),
        lambda2_exchange: (
            l2.pairing(&ea, &f.b_tilde.mul_vec(beta)),
            -2 * euler(beta, alpha),
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtorus::exponent;

    fn a2() -> ValuedQuiver {
        ValuedQuiver::from_arrows(2, &[(0, 1, 1)]).unwrap()
    }

    fn lambda1_a2() -> IntMatrix {
        IntMatrix::from_rows(&[[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, -1], [0, 1, 1, 0]])
    }

    #[test]
    fn lambda1_examples() {
        let q = a2();
        let l1 = lambda1_build(&q.exchange_matrix(), q.valuations()).unwrap();
        assert_eq!(l1.integral().unwrap(), lambda1_a2());

        let trivial = lambda1_build(&IntMatrix::zeros(2, 2), &[1, 1]).unwrap();
        let id = IntMatrix::identity(2);
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(trivial.integral().unwrap(), IntMatrix::blocks(&z, &-&id, &id, &z));

        let b = IntMatrix::from_rows(&[[0, 2], [-2, 0]]);
        let l = lambda1_build(&b, &[1, 1]).unwrap().integral().unwrap();
        assert_eq!(l.submatrix(2, 2, 2, 2), IntMatrix::from_rows(&[[0, -2], [2, 0]]));

        let not_skew = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(lambda1_build(&not_skew, &[1, 1]), Err(SeedError::NotSkewSymmetrizable));
    }

    #[test]
    fn compatibility_examples() {
        let q = a2();
        let f = q.principal_frame();
        let l1 = lambda1_build(&f.exchange(), q.valuations()).unwrap();
        assert_eq!(check_compatible(&l1, &f.b_tilde), Ok(Compatibility::Compatible(vec![1, 1])));
        let special = SpecialForms::for_quiver(&q).unwrap();
        assert_eq!(
            check_compatible(&special.lambda0, &f.b_tilde),
            Ok(Compatibility::Compatible(vec![2, 2]))
        );
        assert!(matches!(
            check_compatible(&SkewForm::zero(4), &f.b_tilde),
            Ok(Compatibility::Incompatible(_))
        ));
        assert!(check_compatible(&SkewForm::zero(3), &f.b_tilde).is_err());
    }

    #[test]
    fn special_forms_a2() {
        let s = SpecialForms::for_quiver(&a2()).unwrap();
        assert_eq!(
            s.theta,
            IntMatrix::from_rows(&[[-1, 1, -1, 0], [0, -1, 1, -1], [1, 0, 0, 0], [0, 1, 0, 0]])
        );
        assert_eq!(
            s.gamma,
            IntMatrix::from_rows(&[[0, 1, -2, 1], [-1, 0, 1, -2], [2, -1, 0, 1], [-1, 2, -1, 0]])
        );
        assert_eq!(
            s.lambda0_matrix(),
            IntMatrix::from_rows(&[[0, 1, -1, 0], [-1, 0, 0, -1], [1, 0, 0, -1], [0, 1, 1, 0]])
        );
    }

    #[test]
    fn special_forms_point() {
        let s = lambda0_build(&IntMatrix::identity(1), &[1]).unwrap();
        assert_eq!(s.gamma, IntMatrix::from_rows(&[[0, -2], [2, 0]]));
        assert_eq!(s.theta, IntMatrix::from_rows(&[[-1, -1], [1, 0]]));
        // hand computation: Θ^{-T} Γ Θ^{-1} with Θ^{-1} = (0 1; -1 -1)
        assert_eq!(s.lambda0.integral().unwrap(), IntMatrix::from_rows(&[[0, -2], [2, 0]]));
        let b = IntMatrix::from_rows(&[[0], [1]]);
        assert_eq!(check_compatible(&s.lambda0, &b), Ok(Compatibility::Compatible(vec![2])));
    }

    #[test]
    fn cyclic_quivers_have_no_special_form() {
        let cyc = ValuedQuiver::from_arrows(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
        assert_eq!(SpecialForms::for_quiver(&cyc), Err(SeedError::Cyclic));
        assert_eq!(
            lambda0_build(&cyc.euler_matrix(), cyc.valuations()),
            Err(SeedError::SingularEuler)
        );
    }

    #[test]
    fn mutation_of_a2_seed() {
        let q = a2();
        let f = q.principal_frame();
        let form = Arc::new(SkewForm::from_integral(&lambda1_a2()).unwrap());
        let seed = QuantumSeed::new(form, f.b_tilde.clone()).unwrap();
        let mutated = mutate_seed(&seed, 0).unwrap();
        // step (2) by hand
        assert_eq!(
            mutated.exchange(),
            &IntMatrix::from_rows(&[[0, -1], [1, 0], [-1, 1], [0, 1]])
        );
        let h = IntMatrix::from_rows(&[[-1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        assert_eq!(mutation_matrix(seed.exchange(), 0), h);
        let expected = &(&h.transpose() * &lambda1_a2()) * &h;
        assert_eq!(mutated.form().integral().unwrap(), expected);
        assert_eq!(mutate_seed(&mutated, 0).unwrap(), seed);
        assert_eq!(mutate_seed(&seed, 2), Err(SeedError::Direction { k: 3, n: 2 }));
    }

    #[test]
    fn one_step_variables_a2() {
        let q = a2();
        let f = q.principal_frame();
        let form = Arc::new(SkewForm::from_integral(&lambda1_a2()).unwrap());
        let seed = QuantumSeed::new(Arc::clone(&form), f.b_tilde.clone()).unwrap();
        let y1 = one_step_variable(&seed, 0, LaurentW::one()).unwrap();
        let y2 = one_step_variable(&seed, 1, LaurentW::one()).unwrap();
        let one = LaurentW::one;
        assert_eq!(
            y1,
            TorusElement::from_terms(&form, [
                (exponent(4, &[(2, 1), (0, -1)]), one()),
                (exponent(4, &[(1, 1), (0, -1)]), one()),
            ])
        );
        assert_eq!(
            y2,
            TorusElement::from_terms(&form, [
                (exponent(4, &[(0, 1), (3, 1), (1, -1)]), one()),
                (exponent(4, &[(1, -1)]), one()),
            ])
        );
    }

    #[test]
    fn one_step_variable_point() {
        let q = ValuedQuiver::new(vec![1], IntMatrix::zeros(1, 1)).unwrap();
        let setup = PrincipalSetup::new(&q).unwrap();
        let seed = QuantumSeed::new(Arc::clone(&setup.lambda1), setup.frame.b_tilde.clone()).unwrap();
        let y = one_step_variable(&seed, 0, LaurentW::one()).unwrap();
        assert_eq!(y.to_string(), "X[-1,0] + X[-1,1]");
    }

    #[test]
    fn twist_exponent_examples() {
        let setup = PrincipalSetup::new(&a2()).unwrap();
        let t1 = twist_exponents(&setup.frame, &setup.lambda1).unwrap();
        let t2 = twist_exponents(&setup.frame, &setup.lambda2().unwrap()).unwrap();
        for l in 1..3 {
            for t in 0..4 {
                assert_eq!(t2.a(0, 1, l, t), 0);
                // d1 b12 l t in v-units, doubled
                assert_eq!(t1.a(0, 1, l, t), 2 * l * t);
                assert_eq!(t1.a(0, 1, l, 0), 0);
            }
        }
        for p in 1..5 {
            for l in 1..3 {
                for t in 0..=p + 1 {
                    assert_eq!(t1.s(0, 1, p, l, t), t1.s_expanded(0, 1, p, l, t));
                    assert_eq!(t1.s(1, 0, p, l, t) - t1.s(1, 0, p, l, 0), t1.a(1, 0, l, t));
                }
            }
        }
    }

    #[test]
    fn fundamental_high_forms_agree() {
        for b in -2..=2 {
            for d in 1..=2 {
                for l in 1..=2 {
                    for p in 1..=4 {
                        for eps in [-1, 1] {
                            for t in 0..=p + 1 {
                                assert_eq!(
                                    fundamental_high_gauss_coefficient(b, d, l, p, eps, t),
                                    fundamental_high_bracket_coefficient(b, d, l, p, eps, t)
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn a2_relation_examples() {
        let setup = PrincipalSetup::new(&a2()).unwrap();
        let params = RelationParams { i: 0, j: 1, l: 1, p: 1, eps: 1 };
        let v = verify_torus_relation(RelationKind::Fundamental, &setup.frame, &setup.lambda1, params).unwrap();
        assert!(v.passed(), "{}", v.remainder);
        let high = RelationParams { l: 2, p: 2, ..params };
        let v = verify_torus_relation(RelationKind::FundamentalHigh, &setup.frame, &setup.lambda1, high).unwrap();
        assert!(v.passed(), "{}", v.remainder);
        let l2 = setup.lambda2().unwrap();
        let v = verify_torus_relation(RelationKind::QcaHighSerre, &setup.frame, &l2, high).unwrap();
        assert!(v.passed(), "{}", v.remainder);
    }

    #[test]
    fn relation_parameter_errors() {
        let setup = PrincipalSetup::new(&a2()).unwrap();
        let f = &setup.frame;
        let base = RelationParams { i: 0, j: 1, l: 2, p: 2, eps: 1 };
        let run = |kind, p: RelationParams| verify_torus_relation(kind, f, &setup.lambda1, p);
        assert_eq!(
            run(RelationKind::FundamentalHigh, RelationParams { j: 0, ..base }).unwrap_err(),
            ParamError::SameVertex
        );
        assert_eq!(
            run(RelationKind::FundamentalHigh, RelationParams { p: 1, ..base }).unwrap_err(),
            ParamError::BelowBound { p: 1, bound: 2 }
        );
        assert_eq!(
            run(RelationKind::TwistedHighSerre, RelationParams { eps: 0, ..base }).unwrap_err(),
            ParamError::Epsilon(0)
        );
        assert!(matches!(
            verify_torus_relation(RelationKind::Fundamental, f, &Arc::new(SkewForm::zero(4)), base),
            Err(ParamError::Incompatible(_))
        ));
    }
}
