//! Zonotopes `{ c + G t : t ∈ [-1,1]^k }` and their half-space form.

use nalgebra::DMatrix;

use super::{vertex_hull, HPolytope, VPolytope};
use crate::error::{Error, Result};
use crate::interval::round::{add_down, dot_down, dot_up};
use crate::interval::{Interval, IntervalVector};

/// Vertex enumeration visits `2^k` sign patterns.
pub const MAX_VERTEX_GENERATORS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct Zonotope {
    center: Vec<f64>,
    /// m×k, one generator per column.
    generators: DMatrix<f64>,
}

impl Zonotope {
    pub fn new(center: Vec<f64>, generators: DMatrix<f64>) -> Result<Self> {
        if center.is_empty() || generators.nrows() != center.len() {
            return Err(Error::dims(
                "generator rows must match the center dimension",
            ));
        }
        if center
            .iter()
            .chain(generators.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::invalid("zonotope data must be finite"));
        }
        Ok(Zonotope { center, generators })
    }

    /// Image `{ A x : x ∈ x_box }`. The box is replaced by a floating
    /// midpoint/radius box lying inside it.
    pub fn from_box_image(a: &DMatrix<f64>, x: &IntervalVector) -> Result<Self> {
        if a.ncols() != x.dim() {
            return Err(Error::dims(format!(
                "{}x{} matrix, box of dimension {}",
                a.nrows(),
                a.ncols(),
                x.dim()
            )));
        }
        if x.iter().any(|i| !i.lo().is_finite() || !i.hi().is_finite()) {
            return Err(Error::invalid("box must be bounded"));
        }
        let mid = x.mid();
        let rad: Vec<f64> = x.iter().map(Interval::rad_down).collect();
        let center = (0..a.nrows())
            .map(|i| (0..a.ncols()).map(|j| a[(i, j)] * mid[j]).sum())
            .collect();
        let g = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * rad[j]);
        Zonotope::new(center, g)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn generators(&self) -> &DMatrix<f64> {
        &self.generators
    }

    /// Concatenated generators, summed centers.
    pub fn minkowski_sum(&self, other: &Zonotope) -> Result<Zonotope> {
        if self.dim() != other.dim() {
            return Err(Error::dims("zonotope dimensions differ"));
        }
        let (m, k1, k2) = (
            self.dim(),
            self.generators.ncols(),
            other.generators.ncols(),
        );
        let g = DMatrix::from_fn(m, k1 + k2, |i, j| {
            if j < k1 {
                self.generators[(i, j)]
            } else {
                other.generators[(i, j - k1)]
            }
        });
        let c = self
            .center
            .iter()
            .zip(&other.center)
            .map(|(a, b)| a + b)
            .collect();
        Zonotope::new(c, g)
    }

    /// `max { n·y : y ∈ Z }`.
    pub fn support(&self, n: &[f64]) -> f64 {
        let c: f64 = n.iter().zip(&self.center).map(|(a, b)| a * b).sum();
        c + self
            .generators
            .column_iter()
            .map(|g| g.iter().zip(n).map(|(a, b)| a * b).sum::<f64>().abs())
            .sum::<f64>()
    }

    fn nonzero_generators(&self) -> Vec<Vec<f64>> {
        self.generators
            .column_iter()
            .filter(|g| g.iter().any(|&v| v != 0.0))
            .map(|g| g.iter().copied().collect())
            .collect()
    }

    /// All `2^k` images of the generator box corners.
    pub fn vertex_images(&self) -> Result<Vec<Vec<f64>>> {
        let gens = self.nonzero_generators();
        let k = gens.len();
        if k > MAX_VERTEX_GENERATORS {
            return Err(Error::DimensionTooLarge {
                dim: k,
                cap: MAX_VERTEX_GENERATORS,
            });
        }
        Ok((0..1usize << k)
            .map(|s| {
                let mut y = self.center.clone();
                for (j, g) in gens.iter().enumerate() {
                    let sign = if s >> j & 1 == 1 { 1.0 } else { -1.0 };
                    y.iter_mut().zip(g).for_each(|(a, b)| *a += sign * b);
                }
                y
            })
            .collect())
    }

    pub fn vpolytope(&self) -> Result<VPolytope> {
        vertex_hull(&self.vertex_images()?)
    }

    /// Half-space form by hyperplane shifting: each set of `m−1` generators
    /// spans a candidate facet direction; its normal is shifted to both
    /// extreme extents of the remaining generators. Offsets are rounded down.
    pub fn hpolytope(&self) -> Result<HPolytope> {
        let m = self.dim();
        let gens = self.nonzero_generators();
        if gens.is_empty() {
            return point_polytope(&self.center);
        }
        let gm = DMatrix::from_fn(m, gens.len(), |i, j| gens[j][i]);
        if rank(&gm) < m {
            return Err(Error::RankDeficient);
        }
        let mut h = Vec::new();
        let mut d = Vec::new();
        let mut push = |n: Vec<f64>| {
            let extent = gens.iter().fold(0.0, |acc, g| {
                let ng = Interval::raw(dot_down(&n, g), dot_up(&n, g).max(dot_down(&n, g)));
                add_down(acc, ng.mig())
            });
            h.push(n.clone());
            d.push(add_down(dot_down(&n, &self.center), extent));
            let neg: Vec<f64> = n.iter().map(|v| -v).collect();
            d.push(add_down(dot_down(&neg, &self.center), extent));
            h.push(neg);
        };
        if m == 1 {
            push(vec![1.0]);
        } else {
            for combo in Combinations::new(gens.len(), m - 1) {
                if let Some(n) = normal(
                    &combo
                        .iter()
                        .map(|&j| gens[j].as_slice())
                        .collect::<Vec<_>>(),
                ) {
                    push(n);
                }
            }
        }
        if h.is_empty() {
            return Err(Error::RankDeficient);
        }
        HPolytope::normalized(h, d)
    }
}

/// H-representation `{A x : x ∈ x_box}`.
pub fn hyperplane_shift(a: &DMatrix<f64>, x_box: &IntervalVector) -> Result<HPolytope> {
    if a.nrows() > a.ncols() {
        return Err(Error::RankDeficient);
    }
    Zonotope::from_box_image(a, x_box)?.hpolytope()
}

/// Box rows pinning a single point.
fn point_polytope(c: &[f64]) -> Result<HPolytope> {
    let b = IntervalVector::from_points(c)?;
    Ok(HPolytope::from_box(&b))
}

pub(crate) fn rank(a: &DMatrix<f64>) -> usize {
    let sv = a.clone().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    let tol = smax * 1e-12 * a.nrows().max(a.ncols()) as f64;
    sv.iter().filter(|&&s| s > tol).count()
}

/// Unit normal orthogonal to `m−1` vectors in `R^m` (generalized cross
/// product by cofactors); `None` when they are linearly dependent.
fn normal(cols: &[&[f64]]) -> Option<Vec<f64>> {
    let m = cols.len() + 1;
    let mut n = vec![0.0; m];
    for (r, nr) in n.iter_mut().enumerate() {
        let minor = DMatrix::from_fn(m - 1, m - 1, |i, j| {
            let row = if i < r { i } else { i + 1 };
            cols[j][row]
        });
        let det = if m == 2 {
            minor[(0, 0)]
        } else {
            minor.determinant()
        };
        *nr = if r % 2 == 0 { det } else { -det };
    }
    let len = n.iter().map(|v| v * v).sum::<f64>().sqrt();
    let scale: f64 = cols
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .product();
    // NaN lengths fail this test as well.
    if len.is_nan() || len <= 1e-10 * scale {
        return None;
    }
    Some(n.into_iter().map(|v| v / len).collect())
}

/// Lexicographic k-subsets of `0..n`.
pub(crate) struct Combinations {
    idx: Vec<usize>,
    n: usize,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations {
            idx: (0..k).collect(),
            n,
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
