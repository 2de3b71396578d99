//! Valued quivers and the integer data derived from them.
//!
//! A valued quiver on `n` vertices is given by its valuations `d_i` and the
//! matrix `R = (r_ij)`, where `r_ij` counts `Ext^1(S_j, S_i)` over the
//! endomorphism ring of `S_i`. An ordinary arrow `j -> i` contributes one to
//! `r_ij`. Everything else is derived:
//!
//! * `R' = D^{-1} R^T D`, the dual counts,
//! * `B = R' - R`, the exchange matrix (`DB` is skew-symmetric),
//! * `C` with `c_ii = 2` and `c_ij = -r_ij - r'_ij`,
//! * `E = (I - R^T) D = D (I - R')`, the Euler form matrix.
//!
//! [`ValuedQuiver::principal_frame`] attaches one frozen vertex `n + i` per
//! vertex, with an arrow `n + i -> i`, and returns the `2n x n` frame
//! matrices used by the torus constructions.

use thiserror::Error;

use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("a quiver needs at least one vertex")]
    Empty,
    #[error("expected {expected} valuations, got {got}")]
    ValuationCount { expected: usize, got: usize },
    #[error("ext matrix must be {n}x{n}, got {rows}x{cols}")]
    Shape { n: usize, rows: usize, cols: usize },
    #[error("valuation of vertex {vertex} must be positive, got {value}")]
    NonPositiveValuation { vertex: usize, value: i64 },
    #[error("negative ext count r[{i},{j}] = {value}")]
    NegativeEntry { i: usize, j: usize, value: i64 },
    #[error("loop at vertex {vertex}")]
    Loop { vertex: usize },
    #[error("two-cycle between vertices {i} and {j}")]
    TwoCycle { i: usize, j: usize },
    #[error("r[{j},{i}] * d{j} / d{i} is not an integer; R is not symmetrizable by D")]
    NotSymmetrizable { i: usize, j: usize },
    #[error("arrow lists require every valuation to be 1")]
    NotTriviallyValued,
    #[error("arrow endpoint {vertex} out of range 1..={n}")]
    ArrowOutOfRange { vertex: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("dimension mismatch: expected length {expected}, got {got}")]
pub struct DimensionMismatch {
    pub expected: usize,
    pub got: usize,
}

/// A validated valued quiver without loops or two-cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuedQuiver {
    valuations: Vec<i64>,
    ext: IntMatrix,
    ext_dual: IntMatrix,
}

impl ValuedQuiver {
    /// Validates `R` against the valuations. Vertex numbers in errors are
    /// 1-based.
    pub fn new(valuations: Vec<i64>, ext: IntMatrix) -> Result<Self, QuiverError> {
        let n = valuations.len();
        if n == 0 {
            return Err(QuiverError::Empty);
        }
        if ext.rows() != n || ext.cols() != n {
            return Err(QuiverError::Shape {
                n,
                rows: ext.rows(),
                cols: ext.cols(),
            });
        }
        for (i, &d) in valuations.iter().enumerate() {
            if d <= 0 {
                return Err(QuiverError::NonPositiveValuation {
                    vertex: i + 1,
                    value: d,
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if ext[(i, j)] < 0 {
                    return Err(QuiverError::NegativeEntry {
                        i: i + 1,
                        j: j + 1,
                        value: ext[(i, j)],
                    });
                }
            }
        }
        for i in 0..n {
            if ext[(i, i)] != 0 {
                return Err(QuiverError::Loop { vertex: i + 1 });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if ext[(i, j)] != 0 && ext[(j, i)] != 0 {
                    return Err(QuiverError::TwoCycle { i: i + 1, j: j + 1 });
                }
            }
        }
        let mut ext_dual = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let scaled = ext[(j, i)] * valuations[j];
                if scaled % valuations[i] != 0 {
                    return Err(QuiverError::NotSymmetrizable { i: i + 1, j: j + 1 });
                }
                ext_dual[(i, j)] = scaled / valuations[i];
            }
        }
        Ok(Self {
            valuations,
            ext,
            ext_dual,
        })
    }

    /// An ordinary quiver from 0-based `(source, target, multiplicity)`
    /// arrows; all valuations are 1.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize, i64)]) -> Result<Self, QuiverError> {
        let mut ext = IntMatrix::zeros(n, n);
        for &(s, t, mult) in arrows {
            for v in [s, t] {
                if v >= n {
                    return Err(QuiverError::ArrowOutOfRange { vertex: v + 1, n });
                }
            }
            ext[(t, s)] += mult;
        }
        Self::new(vec![1; n], ext)
    }

    pub fn n(&self) -> usize {
        self.valuations.len()
    }

    pub fn valuations(&self) -> &[i64] {
        &self.valuations
    }

    /// `R`.
    pub fn ext(&self) -> &IntMatrix {
        &self.ext
    }

    /// `R' = D^{-1} R^T D`.
    pub fn ext_dual(&self) -> &IntMatrix {
        &self.ext_dual
    }

    pub fn symmetrizer(&self) -> IntMatrix {
        IntMatrix::diagonal(&self.valuations)
    }

    /// `B = R' - R`.
    pub fn exchange_matrix(&self) -> IntMatrix {
        &self.ext_dual - &self.ext
    }

    pub fn cartan_matrix(&self) -> IntMatrix {
        let n = self.n();
        IntMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2
            } else {
                -self.ext[(i, j)] - self.ext_dual[(i, j)]
            }
        })
    }

    /// `(C, D)`.
    pub fn cartan_data(&self) -> (IntMatrix, IntMatrix) {
        (self.cartan_matrix(), self.symmetrizer())
    }

    /// `E = (I - R^T) D`.
    pub fn euler_matrix(&self) -> IntMatrix {
        let n = self.n();
        &(&IntMatrix::identity(n) - &self.ext.transpose()) * &self.symmetrizer()
    }

    pub fn euler(&self, a: &[i64], b: &[i64]) -> i64 {
        self.euler_matrix().bilinear(a, b)
    }

    pub fn is_trivially_valued(&self) -> bool {
        self.valuations.iter().all(|&d| d == 1)
    }

    /// Vertices ordered so that every arrow `j -> i` (`r_ij > 0`) has `j`
    /// before `i`; `None` if the support of `R` has an oriented cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let mut indegree: Vec<usize> = (0..n)
            .map(|i| (0..n).filter(|&j| self.ext[(i, j)] > 0).count())
            .collect();
        let mut ready: Vec<usize> = (0..n).rev().filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(j) = ready.pop() {
            order.push(j);
            for i in 0..n {
                if self.ext[(i, j)] > 0 {
                    indegree[i] -= 1;
                    if indegree[i] == 0 {
                        ready.push(i);
                        ready.sort_unstable_by(|a, b| b.cmp(a));
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Ordinary arrows `(source, target)`, repeated by multiplicity, sorted.
    /// Only meaningful for trivially valued quivers.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for s in 0..n {
            for t in 0..n {
                for _ in 0..self.ext[(t, s)] {
                    out.push((s, t));
                }
            }
        }
        out
    }

    pub fn principal_frame(&self) -> FrameData {
        let n = self.n();
        let id = IntMatrix::identity(n);
        let zero = IntMatrix::zeros(n, n);
        let r_tilde = IntMatrix::vstack(&self.ext, &zero);
        let r_tilde_dual = IntMatrix::vstack(&self.ext_dual, &id);
        let i_tilde = IntMatrix::vstack(&id, &zero);
        FrameData {
            n,
            valuations: self.valuations.clone(),
            e_tilde: &i_tilde - &r_tilde_dual,
            e_tilde_dual: &i_tilde - &r_tilde,
            b_tilde: &r_tilde_dual - &r_tilde,
            r_tilde,
            r_tilde_dual,
            euler: self.euler_matrix(),
            cartan: self.cartan_matrix(),
            symmetrizer: self.symmetrizer(),
        }
    }
}

/// The frame matrices of the principal extension of a valued quiver.
///
/// All tall matrices are `2n x n`; `e_tilde = Ĩ - R̃'`, `e_tilde_dual = Ĩ - R̃`
/// and `b_tilde = R̃' - R̃ = (B; I)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameData {
    pub n: usize,
    pub valuations: Vec<i64>,
    pub r_tilde: IntMatrix,
    pub r_tilde_dual: IntMatrix,
    pub e_tilde: IntMatrix,
    pub e_tilde_dual: IntMatrix,
    pub b_tilde: IntMatrix,
    pub euler: IntMatrix,
    pub cartan: IntMatrix,
    pub symmetrizer: IntMatrix,
}

impl FrameData {
    /// Number of rows of the tall matrices, `2n`.
    pub fn m(&self) -> usize {
        self.b_tilde.rows()
    }

    pub fn exchange(&self) -> IntMatrix {
        self.b_tilde.submatrix(0, 0, self.n, self.n)
    }

    pub fn euler_form(&self, a: &[i64], b: &[i64]) -> i64 {
        self.euler.bilinear(a, b)
    }

    /// `Ẽ α`.
    pub fn e_apply(&self, alpha: &[i64]) -> Vec<i64> {
        self.e_tilde.mul_vec(alpha)
    }

    /// `Ẽ' α`.
    pub fn e_dual_apply(&self, alpha: &[i64]) -> Vec<i64> {
        self.e_tilde_dual.mul_vec(alpha)
    }
}

/// `α^T E β`.
pub fn euler_form(euler: &IntMatrix, alpha: &[i64], beta: &[i64]) -> Result<i64, DimensionMismatch> {
    for v in [alpha, beta] {
        if v.len() != euler.rows() {
            return Err(DimensionMismatch {
                expected: euler.rows(),
                got: v.len(),
            });
        }
    }
    Ok(euler.bilinear(alpha, beta))
}

/// `(α, β) = <α, β> + <β, α>`.
pub fn sym_form(euler: &IntMatrix, alpha: &[i64], beta: &[i64]) -> Result<i64, DimensionMismatch> {
    Ok(euler_form(euler, alpha, beta)? + euler_form(euler, beta, alpha)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> ValuedQuiver {
        ValuedQuiver::new(vec![1, 1], IntMatrix::from_rows(&[[0, 0], [1, 0]])).unwrap()
    }

    #[test]
    fn validation_errors() {
        assert!(a2().is_acyclic());
        let looped = ValuedQuiver::new(vec![1, 1], IntMatrix::from_rows(&[[1, 0], [0, 0]]));
        assert_eq!(looped, Err(QuiverError::Loop { vertex: 1 }));
        let two_cycle = ValuedQuiver::new(vec![1, 1], IntMatrix::from_rows(&[[0, 1], [1, 0]]));
        assert_eq!(two_cycle, Err(QuiverError::TwoCycle { i: 1, j: 2 }));
        let not_sym = ValuedQuiver::new(vec![2, 1], IntMatrix::from_rows(&[[0, 0], [1, 0]]));
        assert_eq!(not_sym, Err(QuiverError::NotSymmetrizable { i: 1, j: 2 }));
        let bad_d = ValuedQuiver::new(vec![1, 0], IntMatrix::zeros(2, 2));
        assert_eq!(
            bad_d,
            Err(QuiverError::NonPositiveValuation { vertex: 2, value: 0 })
        );
    }

    #[test]
    fn valued_dual_counts() {
        let q = ValuedQuiver::new(vec![1, 2], IntMatrix::from_rows(&[[0, 0], [1, 0]])).unwrap();
        assert_eq!(q.ext_dual(), &IntMatrix::from_rows(&[[0, 2], [0, 0]]));
        let (c, d) = q.cartan_data();
        assert!((&d * &c).is_symmetric());
    }

    #[test]
    fn cartan_examples() {
        let (c, d) = a2().cartan_data();
        assert_eq!(c, IntMatrix::from_rows(&[[2, -1], [-1, 2]]));
        assert_eq!(d, IntMatrix::identity(2));
        let edgeless = ValuedQuiver::new(vec![1, 1, 1], IntMatrix::zeros(3, 3)).unwrap();
        assert_eq!(edgeless.cartan_matrix(), IntMatrix::identity(3).scale(2));
        let kron = ValuedQuiver::from_arrows(2, &[(0, 1, 2)]).unwrap();
        assert_eq!(kron.cartan_matrix(), IntMatrix::from_rows(&[[2, -2], [-2, 2]]));
    }

    #[test]
    fn euler_examples() {
        let e = a2().euler_matrix();
        assert_eq!(e, IntMatrix::from_rows(&[[1, -1], [0, 1]]));
        assert_eq!(euler_form(&e, &[1, 0], &[0, 1]), Ok(-1));
        assert_eq!(euler_form(&e, &[0, 1], &[1, 0]), Ok(0));
        assert_eq!(euler_form(&e, &[1, 1], &[1, 1]), Ok(1));
        assert_eq!(euler_form(&e, &[0, 0], &[3, -2]), Ok(0));
        assert_eq!(sym_form(&e, &[1, 0], &[0, 1]), Ok(-1));
        assert!(euler_form(&e, &[1], &[1, 0]).is_err());
        let edgeless = ValuedQuiver::new(vec![2, 3], IntMatrix::zeros(2, 2)).unwrap();
        assert_eq!(edgeless.euler_matrix(), IntMatrix::diagonal(&[2, 3]));
    }

    #[test]
    fn a2_frame() {
        let f = a2().principal_frame();
        assert_eq!(
            f.b_tilde,
            IntMatrix::from_rows(&[[0, 1], [-1, 0], [1, 0], [0, 1]])
        );
        assert_eq!(
            f.e_tilde,
            IntMatrix::from_rows(&[[1, -1], [0, 1], [-1, 0], [0, -1]])
        );
        assert_eq!(
            f.e_tilde_dual,
            IntMatrix::from_rows(&[[1, 0], [-1, 1], [0, 0], [0, 0]])
        );
        // -Ẽ e1 = e3 - e1
        assert_eq!(f.e_apply(&[1, 0]), vec![1, 0, -1, 0]);
    }

    #[test]
    fn point_frame() {
        let f = ValuedQuiver::new(vec![1], IntMatrix::zeros(1, 1))
            .unwrap()
            .principal_frame();
        assert_eq!(f.b_tilde, IntMatrix::from_rows(&[[0], [1]]));
        assert_eq!(f.e_tilde, IntMatrix::from_rows(&[[1], [-1]]));
        assert_eq!(f.e_tilde_dual, IntMatrix::from_rows(&[[1], [0]]));
    }

    #[test]
    fn cyclic_quivers_are_detected() {
        let cyc = ValuedQuiver::from_arrows(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
        assert!(!cyc.is_acyclic());
        let a3 = ValuedQuiver::from_arrows(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        assert_eq!(a3.topological_order(), Some(vec![0, 1, 2]));
    }
}
