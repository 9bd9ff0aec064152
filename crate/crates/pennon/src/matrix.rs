//! Dense non-negative integer matrices with exact arithmetic.
//!
//! Transition matrices of twist words stay integer-exact; every spectral
//! statement downstream is certified against these entries, so no floating
//! point is allowed here.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::fmt;

use crate::error::SpectraError;

/// Square or rectangular matrix of arbitrary-precision non-negative integers.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigUint>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigUint::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigUint::one());
        }
        m
    }

    pub fn from_u64_rows(rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigUint::from(*v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigUint) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_assign_at(&mut self, i: usize, j: usize, v: &BigUint) {
        self.data[i * self.cols + j] += v;
    }

    pub fn is_zero_at(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_zero()
    }

    /// Column sum, i.e. the L1 norm of the image of basis vector `j`.
    pub fn column_sum(&self, j: usize) -> BigUint {
        let mut s = BigUint::zero();
        for i in 0..self.rows {
            s += self.get(i, j);
        }
        s
    }

    /// Number of nonzero entries in column `j`.
    pub fn column_support(&self, j: usize) -> usize {
        (0..self.rows).filter(|&i| !self.is_zero_at(i, j)).count()
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let prod = a * b;
                        out.add_assign_at(i, j, &prod);
                    }
                }
            }
        }
        out
    }

    /// Exact matrix power by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Result<IntMatrix, SpectraError> {
        if !self.is_square() {
            return Err(SpectraError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = IntMatrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Determinant over the integers, computed by fraction-free elimination
    /// on a signed copy. Only used for small twist matrices in assertions.
    pub fn det_i64(&self) -> Option<i64> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        // Bareiss on i128; twist matrices in tests are small.
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = self.get(i, j);
                        let digits = v.to_u64_digits();
                        match digits.len() {
                            0 => 0i128,
                            1 => digits[0] as i128,
                            _ => i128::MAX, // overflow sentinel; caller sizes inputs
                        }
                    })
                    .collect()
            })
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                let swap = (k + 1..n).find(|&r| a[r][k] != 0)?;
                a.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).ok()
    }

    /// Plain structured-text export: dimension header then integer rows.
    pub fn to_text(&self) -> String {
        let mut s = format!("matrix {} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<IntMatrix, crate::error::FormatError> {
        use crate::error::FormatError;
        let mut lines = text.lines().enumerate();
        let (ln, header) = lines
            .next()
            .ok_or_else(|| FormatError::Structure("empty matrix text".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "matrix" {
            return Err(FormatError::Syntax(ln + 1, "expected `matrix R C`".into()));
        }
        let rows: usize = parts[1]
            .parse()
            .map_err(|_| FormatError::Syntax(ln + 1, "bad row count".into()))?;
        let cols: usize = parts[2]
            .parse()
            .map_err(|_| FormatError::Syntax(ln + 1, "bad column count".into()))?;
        let mut m = IntMatrix::zeros(rows, cols);
        let mut filled = 0usize;
        for (ln, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            if filled >= rows {
                return Err(FormatError::Syntax(ln + 1, "too many rows".into()));
            }
            let entries: Vec<&str> = line.split_whitespace().collect();
            if entries.len() != cols {
                return Err(FormatError::Syntax(ln + 1, "wrong entry count".into()));
            }
            for (j, e) in entries.iter().enumerate() {
                let v: BigUint = e
                    .parse()
                    .map_err(|_| FormatError::Syntax(ln + 1, format!("bad integer `{e}`")))?;
                m.set(filled, j, v);
            }
            filled += 1;
        }
        if filled != rows {
            return Err(FormatError::Structure(format!(
                "expected {rows} rows, found {filled}"
            )));
        }
        Ok(m)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows.min(12) {
            let row: Vec<String> = (0..self.cols.min(16))
                .map(|j| self.get(i, j).to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_power_and_product() {
        let m = IntMatrix::from_u64_rows(&[vec![1, 1], vec![1, 0]]);
        let m2 = m.pow(2).unwrap();
        assert_eq!(m2, IntMatrix::from_u64_rows(&[vec![2, 1], vec![1, 1]]));
        let id = IntMatrix::identity(2);
        assert_eq!(id.mul(&m), m);
        assert_eq!(m.pow(0).unwrap(), id);
    }

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_u64_rows(&[vec![1, 1], vec![1, 2]]);
        assert_eq!(m.det_i64(), Some(1));
        let p = IntMatrix::from_u64_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(p.det_i64(), Some(-1));
    }

    #[test]
    fn text_round_trip() {
        let m = IntMatrix::from_u64_rows(&[vec![0, 3, 7], vec![1, 0, 2]]);
        let t = m.to_text();
        let back = IntMatrix::from_text(&t).unwrap();
        assert_eq!(m, back);
        assert_eq!(back.to_text(), t);
    }
}
