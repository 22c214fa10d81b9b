use std::ops::{Add, Index, IndexMut, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Interval;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Debug)]
pub struct IntervalVector(Vec<Interval>);

impl IntervalVector {
    pub fn new(elems: Vec<Interval>) -> Result<Self> {
        if elems.is_empty() {
            return Err(Error::dims("interval vector must have dimension > 0"));
        }
        Ok(IntervalVector(elems))
    }

    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self> {
        let elems = bounds
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Self::new(elems)
    }

    pub fn from_points(x: &[f64]) -> Result<Self> {
        Self::new(x.iter().map(|&v| Interval::point(v)).collect())
    }

    /// `c ± r` componentwise.
    pub fn mid_rad(c: &[f64], r: &[f64]) -> Result<Self> {
        if c.len() != r.len() {
            return Err(Error::dims("center and radius lengths differ"));
        }
        let elems = c
            .iter()
            .zip(r)
            .map(|(&c, &r)| Interval::mid_rad(c, r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(elems)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.0.iter()
    }

    pub fn mid(&self) -> Vec<f64> {
        self.0.iter().map(Interval::mid).collect()
    }

    pub fn rad(&self) -> Vec<f64> {
        self.0.iter().map(Interval::rad).collect()
    }

    pub fn mag(&self) -> Vec<f64> {
        self.0.iter().map(Interval::mag).collect()
    }

    pub fn lo(&self) -> Vec<f64> {
        self.0.iter().map(Interval::lo).collect()
    }

    pub fn hi(&self) -> Vec<f64> {
        self.0.iter().map(Interval::hi).collect()
    }

    pub fn abs(&self) -> IntervalVector {
        self.map(|x| x.abs())
    }

    pub fn map(&self, f: impl Fn(&Interval) -> Interval) -> IntervalVector {
        IntervalVector(self.0.iter().map(f).collect())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && self.0.iter().zip(x).all(|(i, &v)| i.contains(v))
    }

    pub fn subset_of(&self, other: &IntervalVector) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a.subset_of(b))
    }

    /// `Ok(None)` when some component intersection is empty.
    pub fn intersect(&self, other: &IntervalVector) -> Result<Option<IntervalVector>> {
        self.check_dim(other)?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.intersect(b))
            .collect::<Option<Vec<_>>>()
            .map(IntervalVector))
    }

    pub fn hull(&self, other: &IntervalVector) -> Result<IntervalVector> {
        self.check_dim(other)?;
        Ok(IntervalVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.hull(b))
                .collect(),
        ))
    }

    pub fn scale(&self, k: Interval) -> IntervalVector {
        self.map(|x| *x * k)
    }

    pub fn dot(&self, other: &IntervalVector) -> Result<Interval> {
        self.check_dim(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| *a * *b).sum())
    }

    pub fn max_width(&self) -> f64 {
        self.0.iter().map(Interval::width).fold(0.0, f64::max)
    }

    /// Splits component `k` at its midpoint.
    pub fn bisect(&self, k: usize) -> (IntervalVector, IntervalVector) {
        let (a, b) = self.0[k].bisect();
        let mut left = self.clone();
        let mut right = self.clone();
        left.0[k] = a;
        right.0[k] = b;
        (left, right)
    }

    pub fn is_point(&self) -> bool {
        self.0.iter().all(Interval::is_point)
    }

    pub fn into_vec(self) -> Vec<Interval> {
        self.0
    }

    fn check_dim(&self, other: &IntervalVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::dims(format!(
                "vector dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &IntervalVector) -> Result<IntervalVector> {
        self.check_dim(other)?;
        Ok(IntervalVector(
            self.0.iter().zip(&other.0).map(|(a, b)| *a + *b).collect(),
        ))
    }

    pub fn try_sub(&self, other: &IntervalVector) -> Result<IntervalVector> {
        self.check_dim(other)?;
        Ok(IntervalVector(
            self.0.iter().zip(&other.0).map(|(a, b)| *a - *b).collect(),
        ))
    }
}

impl Index<usize> for IntervalVector {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

impl IndexMut<usize> for IntervalVector {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.0[i]
    }
}

/// Panics on dimension mismatch; see [`IntervalVector::try_add`].
impl Add for &IntervalVector {
    type Output = IntervalVector;
    fn add(self, rhs: &IntervalVector) -> IntervalVector {
        self.try_add(rhs).expect("dimension mismatch")
    }
}

impl Sub for &IntervalVector {
    type Output = IntervalVector;
    fn sub(self, rhs: &IntervalVector) -> IntervalVector {
        self.try_sub(rhs).expect("dimension mismatch")
    }
}

impl<'a> IntoIterator for &'a IntervalVector {
    type Item = &'a Interval;
    type IntoIter = std::slice::Iter<'a, Interval>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl Serialize for IntervalVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Interval>::deserialize(d)?;
        IntervalVector::new(v).map_err(serde::de::Error::custom)
    }
}
