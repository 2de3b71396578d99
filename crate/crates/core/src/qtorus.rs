//! The quantum torus `T_{q,Λ}`.
//!
//! Basis `X^e` for `e ∈ Z^m`, with `X^e X^f = q^{Λ(e,f)/2} X^{e+f}`. Since
//! `2Λ` is integral and `q = w^4`, the twist is `w^{e^T (2Λ) f}`, so forms are
//! stored doubled and every scalar stays an integral power of `w`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cartan::DimensionMismatch;
use crate::exactring::Coefficient;
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("form matrix must be square and skew-symmetric")]
    NotSkew,
    #[error("elements live in tori with different forms")]
    FormMismatch,
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
}

/// A skew-symmetric form `Λ` with `2Λ` integral, stored as `2Λ`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SkewForm {
    doubled: IntMatrix,
}

impl SkewForm {
    /// From the integral matrix `2Λ`.
    pub fn from_doubled(doubled: IntMatrix) -> Result<Self, TorusError> {
        if !doubled.is_skew_symmetric() {
            return Err(TorusError::NotSkew);
        }
        Ok(Self { doubled })
    }

    /// From an integral `Λ`.
    pub fn from_integral(lambda: &IntMatrix) -> Result<Self, TorusError> {
        Self::from_doubled(lambda.scale(2))
    }

    pub fn zero(m: usize) -> Self {
        Self {
            doubled: IntMatrix::zeros(m, m),
        }
    }

    pub fn m(&self) -> usize {
        self.doubled.rows()
    }

    /// `2Λ`.
    pub fn doubled(&self) -> &IntMatrix {
        &self.doubled
    }

    /// `Λ` itself, if every entry is an integer.
    pub fn integral(&self) -> Option<IntMatrix> {
        self.doubled.div_exact(2)
    }

    /// `2Λ(e, f)`, the `w`-exponent of `q^{Λ(e,f)/2}`.
    pub fn pairing(&self, e: &[i64], f: &[i64]) -> i64 {
        self.doubled.bilinear(e, f)
    }

    /// Checked [`SkewForm::pairing`].
    pub fn form_eval(&self, e: &[i64], f: &[i64]) -> Result<i64, TorusError> {
        for v in [e, f] {
            if v.len() != self.m() {
                return Err(DimensionMismatch {
                    expected: self.m(),
                    got: v.len(),
                }
                .into());
            }
        }
        Ok(self.pairing(e, f))
    }
}

/// A finite linear combination of torus monomials.
///
/// Terms iterate in lexicographic order of exponent vectors, which fixes the
/// canonical rendering.
#[derive(Clone)]
pub struct TorusElement<C> {
    terms: BTreeMap<Vec<i64>, C>,
    form: Arc<SkewForm>,
}

impl<C: Coefficient> TorusElement<C> {
    pub fn zero(form: &Arc<SkewForm>) -> Self {
        Self {
            terms: BTreeMap::new(),
            form: Arc::clone(form),
        }
    }

    pub fn monomial(form: &Arc<SkewForm>, exponent: Vec<i64>, coef: C) -> Self {
        assert_eq!(exponent.len(), form.m(), "exponent length must match the form");
        let mut out = Self::zero(form);
        out.add_term(exponent, coef);
        out
    }

    pub fn from_terms(form: &Arc<SkewForm>, terms: impl IntoIterator<Item = (Vec<i64>, C)>) -> Self {
        let mut out = Self::zero(form);
        for (e, c) in terms {
            assert_eq!(e.len(), form.m(), "exponent length must match the form");
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, exponent: Vec<i64>, coef: C) {
        if coef.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponent) {
            Some(slot) => {
                let sum = slot.clone() + coef;
                if sum.is_zero() {
                    self.terms.remove(&exponent);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(exponent, coef);
            }
        }
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        &self.form
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponent: &[i64]) -> Option<&C> {
        self.terms.get(exponent)
    }

    fn same_torus(&self, other: &Self) -> Result<(), TorusError> {
        if Arc::ptr_eq(&self.form, &other.form) || self.form == other.form {
            Ok(())
        } else {
            Err(TorusError::FormMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, TorusError> {
        self.same_torus(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, TorusError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
            form: Arc::clone(&self.form),
        }
    }

    /// Multiplies every coefficient by the scalar `c`.
    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.form);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, TorusError> {
        self.same_torus(other)?;
        let mut out = Self::zero(&self.form);
        for (e, a) in &self.terms {
            for (f, b) in &other.terms {
                let twist = self.form.pairing(e, f);
                let sum: Vec<i64> = e.iter().zip(f).map(|(x, y)| x + y).collect();
                out.add_term(sum, (a.clone() * b.clone()).mul_w_pow(twist));
            }
        }
        Ok(out)
    }

    /// `a b - t b a`.
    pub fn commutator(&self, other: &Self, t: &C) -> Result<Self, TorusError> {
        let ab = self.try_mul(other)?;
        let ba = other.try_mul(self)?;
        ab.try_sub(&ba.scale(t))
    }

    /// `self^n` for `n >= 0`, with `one` the unit coefficient.
    pub fn pow(&self, n: u32, one: C) -> Self {
        let mut acc = Self::monomial(&self.form, vec![0; self.form.m()], one);
        for _ in 0..n {
            acc = acc.try_mul(self).expect("same torus");
        }
        acc
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> TorusElement<D> {
        let mut out = TorusElement::zero(&self.form);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }
}

impl<C: Coefficient> PartialEq for TorusElement<C> {
    fn eq(&self, other: &Self) -> bool {
        self.form == other.form && self.terms == other.terms
    }
}

impl<C: Coefficient> fmt::Display for TorusElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            let exps = e.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
            let rendered = c.to_string();
            if rendered == "1" {
                write!(f, "X[{exps}]")?;
            } else {
                write!(f, "({rendered}) * X[{exps}]")?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for TorusElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusElement({self})")
    }
}

/// Standard basis vector `e_i` of `Z^m` (0-based `i`).
pub fn unit(m: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; m];
    e[i] = 1;
    e
}

/// Integer combination `Σ c_i e_i` from 0-based `(index, multiplier)` pairs.
pub fn exponent(m: usize, parts: &[(usize, i64)]) -> Vec<i64> {
    let mut e = vec![0; m];
    for &(i, c) in parts {
        e[i] += c;
    }
    e
}
