use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Interval, IntervalVector};
use crate::error::{Error, Result};

/// Row-major interval matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn from_rows(rows: Vec<Vec<Interval>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if m == 0 || n == 0 {
            return Err(Error::dims("interval matrix must be at least 1x1"));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::dims("ragged matrix rows"));
        }
        Ok(IntervalMatrix {
            rows: m,
            cols: n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Interval) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dims("interval matrix must be at least 1x1"));
        }
        let data = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Ok(IntervalMatrix { rows, cols, data })
    }

    pub fn from_point(a: &DMatrix<f64>) -> Result<Self> {
        Self::from_fn(a.nrows(), a.ncols(), |i, j| Interval::point(a[(i, j)]))
    }

    /// `a ± r` entrywise.
    pub fn from_mid_rad(a: &DMatrix<f64>, r: f64) -> Result<Self> {
        if r < 0.0 {
            return Err(Error::InvalidInterval { lo: -r, hi: r });
        }
        Self::from_fn(a.nrows(), a.ncols(), |i, j| {
            Interval::raw(a[(i, j)], a[(i, j)]).inflate(r)
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Interval {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Interval) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Interval] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Interval]> {
        self.data.chunks(self.cols)
    }

    pub fn mid(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mid())
    }

    pub fn rad(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).rad())
    }

    /// Radius about `mid()` rounded up.
    pub fn rad_up(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).rad_up())
    }

    pub fn mag(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mag())
    }

    pub fn is_point(&self) -> bool {
        self.data.iter().all(Interval::is_point)
    }

    pub fn contains(&self, a: &DMatrix<f64>) -> bool {
        a.nrows() == self.rows
            && a.ncols() == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j).contains(a[(i, j)])))
    }

    pub fn transpose(&self) -> IntervalMatrix {
        IntervalMatrix {
            rows: self.cols,
            cols: self.rows,
            data: (0..self.cols)
                .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
                .map(|(i, j)| self.get(i, j))
                .collect(),
        }
    }

    pub fn inflate(&self, r: f64) -> IntervalMatrix {
        IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.inflate(r)).collect(),
        }
    }

    pub fn mul_vec(&self, x: &IntervalVector) -> Result<IntervalVector> {
        if x.dim() != self.cols {
            return Err(Error::dims(format!(
                "{}x{} matrix times {}-vector",
                self.rows,
                self.cols,
                x.dim()
            )));
        }
        IntervalVector::new(
            self.rows()
                .map(|r| r.iter().zip(x.iter()).map(|(a, b)| *a * *b).sum())
                .collect(),
        )
    }

    pub fn mul_point(&self, x: &[f64]) -> Result<IntervalVector> {
        self.mul_vec(&IntervalVector::from_points(x)?)
    }

    pub fn mul_mat(&self, rhs: &IntervalMatrix) -> Result<IntervalMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::dims(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * rhs.get(k, j)).sum()
        })
    }

    /// Point matrix on the left.
    pub fn premul_point(a: &DMatrix<f64>, rhs: &IntervalMatrix) -> Result<IntervalMatrix> {
        Self::from_point(a)?.mul_mat(rhs)
    }

    pub fn try_add(&self, rhs: &IntervalMatrix) -> Result<IntervalMatrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &IntervalMatrix) -> Result<IntervalMatrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, k: Interval) -> IntervalMatrix {
        IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| *x * k).collect(),
        }
    }

    fn zip_with(
        &self,
        rhs: &IntervalMatrix,
        f: impl Fn(Interval, Interval) -> Interval,
    ) -> Result<IntervalMatrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::dims("matrix shapes differ"));
        }
        Ok(IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }

    /// Enclosure of `{A⁻¹ b : A ∈ self, b ∈ b}` by Gaussian elimination on the
    /// system preconditioned with `mid(A)⁻¹`. Fails with `Singular` when the
    /// midpoint is not invertible or a pivot interval contains zero.
    pub fn solve_enclosure(&self, b: &IntervalVector) -> Result<IntervalVector> {
        let n = self.rows;
        if self.cols != n || b.dim() != n {
            return Err(Error::dims(format!(
                "{}x{} system with {}-vector right-hand side",
                self.rows,
                self.cols,
                b.dim()
            )));
        }
        let c = self.mid().try_inverse().ok_or(Error::Singular)?;
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singular);
        }
        let cp = IntervalMatrix::from_point(&c)?;
        let mut a = cp.mul_mat(self)?;
        let mut y = cp.mul_vec(b)?.into_vec();
        for k in 0..n {
            let p = a.get(k, k);
            if p.contains_zero() {
                return Err(Error::Singular);
            }
            for i in k + 1..n {
                let f = a.get(i, k).checked_div(&p).ok_or(Error::Singular)?;
                for j in k + 1..n {
                    let v = a.get(i, j) - f * a.get(k, j);
                    a.set(i, j, v);
                }
                y[i] = y[i] - f * y[k];
            }
        }
        let mut x = vec![Interval::point(0.0); n];
        for i in (0..n).rev() {
            let s: Interval = (i + 1..n).map(|j| a.get(i, j) * x[j]).sum();
            x[i] = (y[i] - s)
                .checked_div(&a.get(i, i))
                .ok_or(Error::Singular)?;
        }
        IntervalVector::new(x)
    }

    pub fn to_rows(&self) -> Vec<Vec<Interval>> {
        self.rows().map(<[Interval]>::to_vec).collect()
    }
}

impl Serialize for IntervalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Interval>>::deserialize(d)?;
        IntervalMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn matrix_vector_product() {
        let a = IntervalMatrix::from_rows(vec![
            vec![iv(1.0, 2.0), iv(0.0, 0.0)],
            vec![iv(-1.0, 1.0), iv(3.0, 3.0)],
        ])
        .unwrap();
        let x = IntervalVector::from_bounds(&[(-1.0, 1.0), (1.0, 2.0)]).unwrap();
        let y = a.mul_vec(&x).unwrap();
        assert_eq!(y[0], iv(-2.0, 2.0));
        assert_eq!(y[1], iv(2.0, 7.0));
        assert!(a
            .mul_vec(&IntervalVector::from_points(&[1.0]).unwrap())
            .is_err());
    }

    #[test]
    fn transpose_and_serde() {
        let a = IntervalMatrix::from_rows(vec![vec![iv(1.0, 2.0), iv(3.0, 4.0), iv(5.0, 6.0)]])
            .unwrap();
        let t = a.transpose();
        assert_eq!((t.nrows(), t.ncols()), (3, 1));
        assert_eq!(t.get(2, 0), iv(5.0, 6.0));
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<IntervalMatrix>(&s).unwrap(), a);
        assert!(serde_json::from_str::<IntervalMatrix>("[[[0,1]],[]]").is_err());
        assert!(serde_json::from_str::<IntervalMatrix>("[]").is_err());
    }

    #[test]
    fn solve_encloses_point_solutions() {
        let a = IntervalMatrix::from_rows(vec![
            vec![iv(3.9, 4.1), iv(0.9, 1.1)],
            vec![iv(-0.1, 0.1), iv(1.9, 2.1)],
        ])
        .unwrap();
        let b = IntervalVector::from_bounds(&[(0.9, 1.1), (-1.0, 1.0)]).unwrap();
        let x = a.solve_enclosure(&b).unwrap();
        for (a00, a01, a10, a11, b0, b1) in [
            (3.9, 1.1, 0.1, 1.9, 1.1, -1.0),
            (4.1, 0.9, -0.1, 2.1, 0.9, 1.0),
            (4.0, 1.0, 0.0, 2.0, 1.0, 0.0),
        ] {
            let m = nalgebra::Matrix2::new(a00, a01, a10, a11);
            let p = m.lu().solve(&nalgebra::Vector2::new(b0, b1)).unwrap();
            assert!(x.contains(&[p[0], p[1]]), "{x:?} misses {p:?}");
        }
        let id = IntervalMatrix::from_point(&DMatrix::identity(2, 2)).unwrap();
        assert_eq!(id.solve_enclosure(&b).unwrap(), b);
        let sing = IntervalMatrix::from_rows(vec![vec![iv(-1.0, 1.0)]]).unwrap();
        assert_eq!(
            sing.solve_enclosure(&IntervalVector::from_points(&[1.0]).unwrap()),
            Err(Error::Singular)
        );
    }
}
