//! Dense operator matrices on a truncated Fock basis.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::trap::{deformation_f, TrapParams};

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<Complex64>,
    pub label: String,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize, label: impl Into<String>) -> Self {
        Self { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim], label: label.into() }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, "identity");
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Bare bosonic annihilation operator `a` truncated to `dim` levels.
    pub fn annihilation(dim: usize) -> Self {
        let mut m = Self::zeros(dim, "a");
        for n in 1..dim {
            m[(n - 1, n)] = Complex64::new(libm::sqrt(n as f64), 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim, self.label.clone() + "^dag");
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::Usage("matrix dimensions differ"));
        }
        let n = self.dim;
        let mut out = Self::zeros(n, String::new());
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::Usage("matrix dimensions differ"));
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| op(a, b)).collect();
        Ok(Self { dim: self.dim, entries, label: String::new() })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|&z| z * factor).collect(), label: self.label.clone() }
    }

    /// `[self, rhs] = self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.matmul(rhs)?.try_sub(&rhs.matmul(self)?)
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::Usage("vector length does not match operator dimension"));
        }
        Ok((0..self.dim).map(|i| self.row(i).iter().zip(v).map(|(&a, &x)| a * x).sum()).collect())
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|z| z.norm_sqr()).sum())
    }
}

impl Index<(usize, usize)> for OperatorMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for OperatorMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

fn check_dim(trap: &TrapParams, dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::Usage("basis dimension must be positive"));
    }
    if dim > trap.levels() {
        return Err(Error::Truncation { requested: dim - 1, limit: trap.n_max() });
    }
    Ok(())
}

/// Deformed ladder pair `(A, A†)` on levels `0..dim`.
///
/// `⟨n−1|A|n⟩ = sqrt(n)·f(n)`.
pub fn build_ladder(trap: &TrapParams, dim: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    check_dim(trap, dim)?;
    let mut a = OperatorMatrix::zeros(dim, "A");
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new(libm::sqrt(n as f64) * deformation_f(n, trap)?, 0.0);
    }
    let mut a_dag = a.adjoint();
    a_dag.label = String::from("A^dag");
    Ok((a, a_dag))
}

/// Position operator `η(A + A†)` in units of the inverse laser wave number.
pub fn build_position(trap: &TrapParams, eta: f64, dim: usize) -> Result<OperatorMatrix> {
    let (a, a_dag) = build_ladder(trap, dim)?;
    let mut x = a.try_add(&a_dag)?.scale(Complex64::new(eta, 0.0));
    x.label = String::from("x");
    Ok(x)
}
