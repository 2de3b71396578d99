//! Exact coefficient rings.
//!
//! Every scalar in this crate is expressed in powers of the formal quarter
//! power `w = q^{1/4}`, so `v = w^2` and `q = w^4`. Two rings are provided:
//!
//! * [`LaurentW`]: Laurent polynomials in `w` with rational coefficients, the
//!   formal ring in which torus identities are checked.
//! * [`QuarticNumber`]: elements of `Q[w]/(w^4 - q)` for a fixed prime `q`,
//!   used wherever Hall numbers at a concrete finite field appear.
//!
//! Quantum integers and both flavours of Gaussian binomial live here too.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: i64 },
    #[error("binomial index out of range: need 0 <= {t} <= {m}")]
    BinomialRange { m: i64, t: i64 },
    #[error("{0} is not a prime; Q[w]/(w^4 - q) is only a field for prime q")]
    NotPrime(i64),
}

/// Scalars the quantum torus can carry.
///
/// The only ring-specific operation the torus needs is multiplication by a
/// power of `w`, which is how the twist `q^{Λ(e,f)/2}` enters products.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn is_zero(&self) -> bool;
    fn mul_w_pow(&self, k: i64) -> Self;
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `v`-power rendering of `w^k`: `v^{k/2}` for odd `k`, `v^j` otherwise.
fn fmt_v_power(k: i64) -> String {
    if k % 2 == 0 {
        match k / 2 {
            1 => "v".to_string(),
            j => format!("v^{j}"),
        }
    } else {
        format!("v^{{{k}/2}}")
    }
}

fn fmt_sum<'a>(terms: impl Iterator<Item = (i64, &'a BigRational)>) -> String {
    let mut out = String::new();
    for (k, c) in terms {
        let negative = c.is_negative();
        let mag = c.abs();
        let body = if k == 0 {
            fmt_rational(&mag)
        } else if mag.is_one() {
            fmt_v_power(k)
        } else {
            format!("{}*{}", fmt_rational(&mag), fmt_v_power(k))
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A Laurent polynomial in `w = q^{1/4}` with rational coefficients.
///
/// Zero coefficients are never stored, so equality is map equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentW {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentW {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::monomial(int(n), 0)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * w^k`.
    pub fn monomial(c: BigRational, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    pub fn w_pow(k: i64) -> Self {
        Self::monomial(BigRational::one(), k)
    }

    pub fn v_pow(k: i64) -> Self {
        Self::w_pow(2 * k)
    }

    pub fn q_pow(k: i64) -> Self {
        Self::w_pow(4 * k)
    }

    /// Builds from `(w-exponent, coefficient)` pairs, merging repeats.
    pub fn from_terms(pairs: impl IntoIterator<Item = (i64, BigRational)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in pairs {
            out.add_term(k, c);
        }
        out
    }

    fn add_term(&mut self, k: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Iterates `(w-exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coefficient(&self, k: i64) -> BigRational {
        self.terms.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// The bar involution `w -> w^{-1}`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (-k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }

    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (&lead_exp, lead_coef) = divisor.terms.iter().next_back()?;
        let low = divisor.min_exponent()?;
        let mut rem = self.clone();
        let mut quotient = Self::zero();
        let floor = match self.min_exponent() {
            Some(m) => m - low,
            None => return Some(Self::zero()),
        };
        while let Some((&k, c)) = rem.terms.iter().next_back() {
            let shift = k - lead_exp;
            if shift < floor {
                return None;
            }
            let factor = c / lead_coef;
            let step = divisor.shift(shift).scale(&factor);
            quotient.add_term(shift, factor);
            rem = &rem - &step;
        }
        Some(quotient)
    }

    /// Evaluates at a rational value of `v`; `None` if an odd `w`-power
    /// occurs (those are not rational functions of `v`).
    pub fn eval_v(&self, v: &BigRational) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (k, c) in &self.terms {
            if k % 2 != 0 {
                return None;
            }
            acc += c * pow_rational(v, k / 2);
        }
        Some(acc)
    }
}

fn pow_rational(x: &BigRational, k: i64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k.unsigned_abs() {
        acc *= x;
    }
    if k < 0 {
        acc.recip()
    } else {
        acc
    }
}

impl fmt::Display for LaurentW {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_sum(self.terms()))
    }
}

impl fmt::Debug for LaurentW {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentW({self})")
    }
}

impl Add<&LaurentW> for &LaurentW {
    type Output = LaurentW;
    fn add(self, rhs: &LaurentW) -> LaurentW {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&LaurentW> for LaurentW {
    fn add_assign(&mut self, rhs: &LaurentW) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c.clone());
        }
    }
}

impl SubAssign<&LaurentW> for LaurentW {
    fn sub_assign(&mut self, rhs: &LaurentW) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, -c.clone());
        }
    }
}

impl Sub<&LaurentW> for &LaurentW {
    type Output = LaurentW;
    fn sub(self, rhs: &LaurentW) -> LaurentW {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&LaurentW> for &LaurentW {
    type Output = LaurentW;
    fn mul(self, rhs: &LaurentW) -> LaurentW {
        let mut out = LaurentW::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Neg for &LaurentW {
    type Output = LaurentW;
    fn neg(self) -> LaurentW {
        LaurentW {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

forward_owned_ops!(LaurentW);

impl Coefficient for LaurentW {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn mul_w_pow(&self, k: i64) -> Self {
        self.shift(k)
    }
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element `c0 + c1 w + c2 w^2 + c3 w^3` of `Q[w]/(w^4 - q)`, `q` prime.
///
/// `w^4 - q` is Eisenstein at `q`, so this is a field and equality is
/// coefficientwise. Mixing numbers with different `q` panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuarticNumber {
    coeffs: [BigRational; 4],
    q: i64,
}

impl QuarticNumber {
    pub fn zero(q: i64) -> Self {
        Self {
            coeffs: std::array::from_fn(|_| BigRational::zero()),
            q,
        }
    }

    pub fn one(q: i64) -> Self {
        Self::rational(BigRational::one(), q)
    }

    pub fn rational(c: BigRational, q: i64) -> Self {
        let mut out = Self::zero(q);
        out.coeffs[0] = c;
        out
    }

    pub fn from_int(n: i64, q: i64) -> Self {
        Self::rational(int(n), q)
    }

    /// `w^k`, reduced with `w^4 = q`.
    pub fn w_pow(k: i64, q: i64) -> Self {
        let mut out = Self::zero(q);
        out.coeffs[k.rem_euclid(4) as usize] = pow_rational(&int(q), k.div_euclid(4));
        out
    }

    pub fn from_coeffs(coeffs: [BigRational; 4], q: i64) -> Self {
        Self { coeffs, q }
    }

    pub fn coeffs(&self) -> &[BigRational; 4] {
        &self.coeffs
    }

    pub fn modulus(&self) -> i64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if the `w`, `w^2`, `w^3` parts vanish.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then_some(&self.coeffs[0])
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] * c),
            q: self.q,
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.q, other.q, "quartic numbers over different primes");
    }
}

impl fmt::Display for QuarticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i64, c));
        f.write_str(&fmt_sum(terms))
    }
}

impl fmt::Debug for QuarticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuarticNumber[q={}]({self})", self.q)
    }
}

impl Add<&QuarticNumber> for &QuarticNumber {
    type Output = QuarticNumber;
    fn add(self, rhs: &QuarticNumber) -> QuarticNumber {
        self.check(rhs);
        QuarticNumber {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] + &rhs.coeffs[i]),
            q: self.q,
        }
    }
}

impl Sub<&QuarticNumber> for &QuarticNumber {
    type Output = QuarticNumber;
    fn sub(self, rhs: &QuarticNumber) -> QuarticNumber {
        self.check(rhs);
        QuarticNumber {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] - &rhs.coeffs[i]),
            q: self.q,
        }
    }
}

impl Mul<&QuarticNumber> for &QuarticNumber {
    type Output = QuarticNumber;
    fn mul(self, rhs: &QuarticNumber) -> QuarticNumber {
        self.check(rhs);
        let q = int(self.q);
        let mut out = QuarticNumber::zero(self.q);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                if i + j >= 4 {
                    out.coeffs[i + j - 4] += prod * &q;
                } else {
                    out.coeffs[i + j] += prod;
                }
            }
        }
        out
    }
}

impl Neg for &QuarticNumber {
    type Output = QuarticNumber;
    fn neg(self) -> QuarticNumber {
        QuarticNumber {
            coeffs: std::array::from_fn(|i| -self.coeffs[i].clone()),
            q: self.q,
        }
    }
}

forward_owned_ops!(QuarticNumber);

impl Coefficient for QuarticNumber {
    fn is_zero(&self) -> bool {
        QuarticNumber::is_zero(self)
    }

    fn mul_w_pow(&self, k: i64) -> Self {
        self * &QuarticNumber::w_pow(k, self.q)
    }
}

/// The ring homomorphism `Q[w, w^{-1}] -> Q[w]/(w^4 - q)`.
pub fn specialize_at_prime(x: &LaurentW, q: i64) -> Result<QuarticNumber, RingError> {
    if !is_prime(q) {
        return Err(RingError::NotPrime(q));
    }
    Ok(specialize_unchecked(x, q))
}

pub(crate) fn specialize_unchecked(x: &LaurentW, q: i64) -> QuarticNumber {
    let mut out = QuarticNumber::zero(q);
    for (k, c) in x.terms() {
        out = &out + &QuarticNumber::w_pow(k, q).scale(c);
    }
    out
}

fn positive(what: &'static str, value: i64) -> Result<(), RingError> {
    if value <= 0 {
        Err(RingError::NonPositive { what, value })
    } else {
        Ok(())
    }
}

fn binomial_range(m: i64, t: i64) -> Result<(), RingError> {
    if t < 0 || m < 0 || t > m {
        Err(RingError::BinomialRange { m, t })
    } else {
        Ok(())
    }
}

/// The balanced quantum integer `[a]` evaluated at `v^d`.
pub fn quantum_integer(a: i64, d: i64) -> Result<LaurentW, RingError> {
    positive("quantum integer argument", a)?;
    positive("valuation", d)?;
    Ok(LaurentW::from_terms(
        (0..a).map(|j| (2 * d * (a - 1 - 2 * j), BigRational::one())),
    ))
}

fn quantum_factorial_range(lo: i64, hi: i64, d: i64) -> LaurentW {
    let mut acc = LaurentW::one();
    for a in lo..=hi {
        acc = &acc * &quantum_integer(a, d).expect("positive arguments");
    }
    acc
}

/// The balanced Gaussian binomial `[m over t]` evaluated at `v^d`.
pub fn gauss_binomial(m: i64, t: i64, d: i64) -> Result<LaurentW, RingError> {
    binomial_range(m, t)?;
    positive("valuation", d)?;
    if t == 0 {
        return Ok(LaurentW::one());
    }
    let numer = quantum_factorial_range(m - t + 1, m, d);
    let denom = quantum_factorial_range(1, t, d);
    Ok(numer
        .div_exact(&denom)
        .expect("quantum binomials are Laurent polynomials"))
}

/// `(Q^a - 1)/(Q - 1)` with `Q = q^d`.
fn bracket_integer(a: i64, d: i64) -> LaurentW {
    LaurentW::from_terms((0..a).map(|j| (4 * d * j, BigRational::one())))
}

/// The one-parameter binomial `[[m over t]]` in `Q = q^d`, built from
/// `[[a]] = (Q^a - 1)/(Q - 1)`.
pub fn bracket_binomial(m: i64, t: i64, d: i64) -> Result<LaurentW, RingError> {
    binomial_range(m, t)?;
    positive("valuation", d)?;
    let mut numer = LaurentW::one();
    let mut denom = LaurentW::one();
    for a in (m - t + 1)..=m {
        numer = &numer * &bracket_integer(a, d);
    }
    for a in 1..=t {
        denom = &denom * &bracket_integer(a, d);
    }
    Ok(numer
        .div_exact(&denom)
        .expect("Gaussian binomials are polynomials"))
}
