//! Dense real matrices for Bloch-space dynamics, with LU solves and a
//! Pade(13) scaling-and-squaring matrix exponential.

use crate::error::{QslError, Result};

/// Row-major dense real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl RMatrix {
    pub fn zeros(n: usize) -> Self {
        RMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix rows must be square");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn transpose(&self) -> RMatrix {
        let n = self.n;
        let mut out = RMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn mul(&self, other: &RMatrix) -> RMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = RMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, x.len());
        let n = self.n;
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += self[(i, j)] * x[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn add(&self, other: &RMatrix) -> RMatrix {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &RMatrix) -> RMatrix {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= *b;
        }
        out
    }

    pub fn scale(&self, c: f64) -> RMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let n = self.n;
        (0..n)
            .map(|j| (0..n).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Solve A x = b by LU with partial pivoting.
    pub fn lu_solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut a = self.data.clone();
        let mut x: Vec<f64> = b.to_vec();
        let scale = self.data.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);

        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_val = a[col * n + col].abs();
            for row in (col + 1)..n {
                let v = a[row * n + col].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = row;
                }
            }
            if pivot_val < 1e-13 * scale {
                return Err(QslError::NoFixedPoint(format!(
                    "singular matrix (pivot {pivot_val:.3e} at column {col})"
                )));
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                }
                x.swap(col, pivot_row);
            }
            let inv = 1.0 / a[col * n + col];
            for row in (col + 1)..n {
                let f = a[row * n + col] * inv;
                if f == 0.0 {
                    continue;
                }
                a[row * n + col] = 0.0;
                for j in (col + 1)..n {
                    a[row * n + j] -= f * a[col * n + j];
                }
                x[row] -= f * x[col];
            }
        }
        for col in (0..n).rev() {
            x[col] /= a[col * n + col];
            for row in 0..col {
                x[row] -= a[row * n + col] * x[col];
            }
        }
        Ok(x)
    }

    /// Solve A X = B column by column.
    fn lu_solve_matrix(&self, b: &RMatrix) -> Result<RMatrix> {
        let n = self.n;
        let mut out = RMatrix::zeros(n);
        for j in 0..n {
            let col: Vec<f64> = (0..n).map(|i| b[(i, j)]).collect();
            let sol = self.lu_solve(&col)?;
            for i in 0..n {
                out[(i, j)] = sol[i];
            }
        }
        Ok(out)
    }

    /// Matrix exponential by scaling and squaring with the order-13 Pade
    /// approximant. The input is scaled down to unit 1-norm before the
    /// rational approximation is applied.
    pub fn expm(&self) -> RMatrix {
        const B: [f64; 14] = [
            64764752532480000.0,
            32382376266240000.0,
            7771770303897600.0,
            1187353796428800.0,
            129060195264000.0,
            10559470521600.0,
            670442572800.0,
            33522128640.0,
            1323241920.0,
            40840800.0,
            960960.0,
            16380.0,
            182.0,
            1.0,
        ];
        let n = self.n;
        let norm = self.norm_one();
        let s = if norm > 1.0 { norm.log2().ceil() as i32 } else { 0 };
        let a = self.scale(0.5f64.powi(s));

        let ident = RMatrix::identity(n);
        let a2 = a.mul(&a);
        let a4 = a2.mul(&a2);
        let a6 = a2.mul(&a4);

        // U = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
        let inner_u = a6.scale(B[13]).add(&a4.scale(B[11])).add(&a2.scale(B[9]));
        let u = a.mul(
            &a6.mul(&inner_u)
                .add(&a6.scale(B[7]))
                .add(&a4.scale(B[5]))
                .add(&a2.scale(B[3]))
                .add(&ident.scale(B[1])),
        );
        // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
        let inner_v = a6.scale(B[12]).add(&a4.scale(B[10])).add(&a2.scale(B[8]));
        let v = a6
            .mul(&inner_v)
            .add(&a6.scale(B[6]))
            .add(&a4.scale(B[4]))
            .add(&a2.scale(B[2]))
            .add(&ident.scale(B[0]));

        let mut r = v
            .sub(&u)
            .lu_solve_matrix(&v.add(&u))
            .expect("Pade denominator is nonsingular for unit-norm input");
        for _ in 0..s {
            r = r.mul(&r);
        }
        r
    }
}

impl std::ops::Index<(usize, usize)> for RMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}
