//! Skew-symmetric matrices, the hat/vee isomorphisms and the so(4) split.
//!
//! `so(3)` is identified with `(R^3, ×)` through the hat map, and `so(4)`
//! with two copies of `R^3` through the `+/-` split; the split intertwines
//! the commutator with twice the cross product in each factor.

use nalgebra::DMatrix;
use thiserror::Error;

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Vec4 = nalgebra::Vector4<f64>;

/// Tolerance accepted when ingesting matrices from external sources.
pub const PARSE_SKEW_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("matrix is not skew-symmetric: max |A_ij + A_ji| = {0}")]
    NotSkew(f64),
    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),
    #[error("operation requires dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
}

/// A real skew-symmetric matrix; `A^T = -A` holds exactly.
///
/// Only the strict upper triangle is free; every mutation mirrors the
/// entry so the invariant never degrades to a tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMat {
    mat: DMatrix<f64>,
}

impl SkewMat {
    pub fn zeros(n: usize) -> Self {
        SkewMat {
            mat: DMatrix::zeros(n, n),
        }
    }

    /// Builds from the strict upper triangle in row-major order:
    /// `(1,2), (1,3), ..., (1,n), (2,3), ...`
    pub fn from_upper(n: usize, upper: &[f64]) -> Self {
        assert_eq!(upper.len(), n * (n - 1) / 2, "upper triangle length");
        let mut m = DMatrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                m[(i, j)] = upper[k];
                m[(j, i)] = -upper[k];
                k += 1;
            }
        }
        SkewMat { mat: m }
    }

    /// Accepts an exactly skew matrix (tolerance 0).
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self, AlgebraError> {
        Self::from_matrix_tol(m, 0.0)
    }

    /// Accepts a matrix skew within `tol` and re-symmetrizes it exactly.
    pub fn from_matrix_tol(m: DMatrix<f64>, tol: f64) -> Result<Self, AlgebraError> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(AlgebraError::DimensionMismatch(n, m.ncols()));
        }
        let mut worst = 0.0f64;
        for i in 0..n {
            worst = worst.max(m[(i, i)].abs());
            for j in (i + 1)..n {
                worst = worst.max((m[(i, j)] + m[(j, i)]).abs());
            }
        }
        if worst > tol {
            return Err(AlgebraError::NotSkew(worst));
        }
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                out[(i, j)] = m[(i, j)];
                out[(j, i)] = -m[(i, j)];
            }
        }
        Ok(SkewMat { mat: out })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.mat[(i, j)]
    }

    /// Sets entry `(i,j)` with `i < j`, mirroring `(j,i) = -v`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(i < j, "set addresses the strict upper triangle");
        self.mat[(i, j)] = v;
        self.mat[(j, i)] = -v;
    }

    pub fn upper(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(self.mat[(i, j)]);
            }
        }
        out
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn scale(&self, s: f64) -> SkewMat {
        SkewMat { mat: &self.mat * s }
    }

    pub fn add(&self, other: &SkewMat) -> SkewMat {
        SkewMat {
            mat: &self.mat + &other.mat,
        }
    }

    /// Applies the matrix to a vector (n = 4 used for `e(4)` fields).
    pub fn mul_vec(&self, v: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
        &self.mat * v
    }

    pub fn norm(&self) -> f64 {
        self.mat.norm()
    }
}

/// The `so(3)` hat map: `(a1,a2,a3) -> [[0,-a3,a2],[a3,0,-a1],[-a2,a1,0]]`.
pub fn hat3(v: &Vec3) -> SkewMat {
    SkewMat::from_upper(3, &[-v.z, v.y, -v.x])
}

/// Inverse of [`hat3`] for arbitrary matrices; rejects non-skew input.
pub fn vee3(m: &DMatrix<f64>) -> Result<Vec3, AlgebraError> {
    if m.nrows() != 3 || m.ncols() != 3 {
        return Err(AlgebraError::WrongDimension {
            expected: 3,
            got: m.nrows(),
        });
    }
    let s = SkewMat::from_matrix_tol(m.clone(), PARSE_SKEW_TOL)?;
    Ok(vee3_skew(&s))
}

/// Inverse of [`hat3`] on an already-validated skew matrix.
pub fn vee3_skew(m: &SkewMat) -> Vec3 {
    assert_eq!(m.dim(), 3);
    Vec3::new(m.get(2, 1), m.get(0, 2), m.get(1, 0))
}

/// The two 3-vectors assigned to a 4x4 skew matrix.
///
/// `first`/`second` are the half-sum and half-difference of the `+` and `-`
/// blocks of the matrix; the map is a Lie-algebra isomorphism onto
/// `(R^3, 2×) ⊕ (R^3, 2×)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitPair {
    pub first: Vec3,
    pub second: Vec3,
}

/// Reads off `A_+` (upper-left so(3) block) and `A_-` (fourth column).
pub fn split4(a: &SkewMat) -> Result<SplitPair, AlgebraError> {
    if a.dim() != 4 {
        return Err(AlgebraError::WrongDimension {
            expected: 4,
            got: a.dim(),
        });
    }
    let plus = Vec3::new(-a.get(1, 2), a.get(0, 2), -a.get(0, 1));
    let minus = Vec3::new(-a.get(0, 3), -a.get(1, 3), -a.get(2, 3));
    Ok(SplitPair {
        first: (plus + minus) / 2.0,
        second: (plus - minus) / 2.0,
    })
}

/// Inverse of [`split4`].
pub fn join4(p: &SplitPair) -> SkewMat {
    let plus = p.first + p.second;
    let minus = p.first - p.second;
    let mut m = SkewMat::zeros(4);
    m.set(0, 1, -plus.z);
    m.set(0, 2, plus.y);
    m.set(1, 2, -plus.x);
    m.set(0, 3, -minus.x);
    m.set(1, 3, -minus.y);
    m.set(2, 3, -minus.z);
    m
}

/// `AB - BA`, computed on the upper triangle so the result is exactly skew.
pub fn commutator(a: &SkewMat, b: &SkewMat) -> Result<SkewMat, AlgebraError> {
    let n = a.dim();
    if b.dim() != n {
        return Err(AlgebraError::DimensionMismatch(n, b.dim()));
    }
    let mut out = SkewMat::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut s = 0.0;
            for k in 0..n {
                s += a.get(i, k) * b.get(k, j) - b.get(i, k) * a.get(k, j);
            }
            out.set(i, j, s);
        }
    }
    Ok(out)
}

/// The invariant pairing `<A,B> = -1/2 Tr(AB)`; on hatted 3-vectors it is
/// the euclidean dot product.
pub fn inner(a: &SkewMat, b: &SkewMat) -> Result<f64, AlgebraError> {
    let n = a.dim();
    if b.dim() != n {
        return Err(AlgebraError::DimensionMismatch(n, b.dim()));
    }
    // -1/2 Tr(AB) = sum_{i<j} A_ij B_ij for skew A, B
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += a.get(i, j) * b.get(i, j);
        }
    }
    Ok(s)
}

/// Pfaffian of a 4x4 skew matrix.
pub fn pfaffian4(a: &SkewMat) -> f64 {
    assert_eq!(a.dim(), 4);
    a.get(0, 1) * a.get(2, 3) - a.get(0, 2) * a.get(1, 3) + a.get(0, 3) * a.get(1, 2)
}
