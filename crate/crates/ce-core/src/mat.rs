//! Small dense complex matrices: 2x2 for single-qubit unitaries, 4x4 for
//! two-copy single-qubit operators and the SIC dilation unitary.

use num_complex::Complex64 as C64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

/// 4x4 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4(pub [[C64; 4]; 4]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = self.0[i][0] * other.0[0][j] + self.0[i][1] * other.0[1][j];
            }
        }
        Mat2(out)
    }

    pub fn adjoint(&self) -> Mat2 {
        Mat2([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    pub fn scale(&self, c: C64) -> Mat2 {
        let mut out = self.0;
        for row in out.iter_mut() {
            for entry in row.iter_mut() {
                *entry *= c;
            }
        }
        Mat2(out)
    }

    pub fn column(&self, j: usize) -> [C64; 2] {
        [self.0[0][j], self.0[1][j]]
    }

    /// Max-entry distance from the identity of U†U.
    pub fn unitarity_distance(&self) -> f64 {
        let g = self.adjoint().mul(self);
        g.max_abs_diff(&Mat2::identity())
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    /// tr(A†B); |tr(A†B)| = 2 iff A and B agree up to a global phase.
    pub fn overlap_trace(&self, other: &Mat2) -> C64 {
        let p = self.adjoint().mul(other);
        p.0[0][0] + p.0[1][1]
    }
}

impl Mat4 {
    pub fn zero() -> Self {
        Mat4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn mul(&self, other: &Mat4) -> Mat4 {
        let mut out = [[ZERO; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let mut acc = ZERO;
                for (k, o) in other.0.iter().enumerate() {
                    acc += self.0[i][k] * o[j];
                }
                *entry = acc;
            }
        }
        Mat4(out)
    }

    pub fn adjoint(&self) -> Mat4 {
        let mut out = [[ZERO; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = self.0[j][i].conj();
            }
        }
        Mat4(out)
    }

    pub fn add(&self, other: &Mat4) -> Mat4 {
        let mut out = self.0;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry += other.0[i][j];
            }
        }
        Mat4(out)
    }

    pub fn scale(&self, c: C64) -> Mat4 {
        let mut out = self.0;
        for row in out.iter_mut() {
            for entry in row.iter_mut() {
                *entry *= c;
            }
        }
        Mat4(out)
    }

    pub fn column(&self, j: usize) -> [C64; 4] {
        [self.0[0][j], self.0[1][j], self.0[2][j], self.0[3][j]]
    }

    pub fn max_abs_diff(&self, other: &Mat4) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    pub fn unitarity_distance(&self) -> f64 {
        self.adjoint().mul(self).max_abs_diff(&Mat4::identity())
    }
}

pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = Mat4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    out
}

pub fn kron_vec2(a: &[C64; 2], b: &[C64; 2]) -> [C64; 4] {
    [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
}

/// |v⟩⟨v| for a 4-vector.
pub fn outer4(v: &[C64; 4]) -> Mat4 {
    let mut out = Mat4::zero();
    for (i, vi) in v.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            out.0[i][j] = vi * vj.conj();
        }
    }
    out
}

pub fn inner2(a: &[C64; 2], b: &[C64; 2]) -> C64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

pub fn inner4(a: &[C64; 4], b: &[C64; 4]) -> C64 {
    let mut acc = ZERO;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.conj() * y;
    }
    acc
}
