//! Dense matrices over ring or localized elements.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localize::LocalizedElement;
use crate::ring::{RingDescriptor, RingElement};

/// Entry type of a [`Mat`].
pub trait Scalar: Clone + PartialEq + fmt::Display {
    fn zero_in(ring: &RingDescriptor) -> Self;
    fn one_in(ring: &RingDescriptor) -> Self;
    fn ring_of(&self) -> &RingDescriptor;
    fn try_add(&self, other: &Self) -> Result<Self>;
    fn try_mul(&self, other: &Self) -> Result<Self>;
    fn negate(&self) -> Self;
    fn is_zero_elem(&self) -> bool;

    fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.negate())
    }
}

impl Scalar for RingElement {
    fn zero_in(ring: &RingDescriptor) -> Self {
        ring.zero()
    }
    fn one_in(ring: &RingDescriptor) -> Self {
        ring.one()
    }
    fn ring_of(&self) -> &RingDescriptor {
        self.ring()
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)
    }
    fn try_sub(&self, other: &Self) -> Result<Self> {
        self.checked_sub(other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)
    }
    fn negate(&self) -> Self {
        -self
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for LocalizedElement {
    fn zero_in(ring: &RingDescriptor) -> Self {
        LocalizedElement::from_ring(ring.zero())
    }
    fn one_in(ring: &RingDescriptor) -> Self {
        LocalizedElement::from_ring(ring.one())
    }
    fn ring_of(&self) -> &RingDescriptor {
        self.ring()
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

/// Row-major dense matrix; all entries share one ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    ring: RingDescriptor,
    nrows: usize,
    ncols: usize,
    entries: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn from_rows(ring: RingDescriptor, rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let entries: Vec<T> = rows.into_iter().flatten().collect();
        if let Some(bad) = entries.iter().find(|e| e.ring_of() != &ring) {
            return Err(Error::RingMismatch {
                left: ring.to_string(),
                right: bad.ring_of().to_string(),
            });
        }
        Ok(Mat { ring, nrows, ncols, entries })
    }

    pub fn from_fn(ring: RingDescriptor, nrows: usize, ncols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let entries = (0..nrows * ncols).map(|i| f(i / ncols, i % ncols)).collect();
        Mat { ring, nrows, ncols, entries }
    }

    pub fn zeros(ring: RingDescriptor, nrows: usize, ncols: usize) -> Self {
        Self::from_fn(ring, nrows, ncols, |_, _| T::zero_in(&ring))
    }

    pub fn identity(ring: RingDescriptor, n: usize) -> Self {
        Self::from_fn(ring, n, n, |i, j| if i == j { T::one_in(&ring) } else { T::zero_in(&ring) })
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        assert_eq!(value.ring_of(), &self.ring);
        self.entries[i * self.ncols + j] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.entries.chunks(self.ncols.max(1))
    }

    pub fn map<U: Scalar>(&self, ring: RingDescriptor, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { ring, nrows: self.nrows, ncols: self.ncols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map<U: Scalar>(&self, ring: RingDescriptor, f: impl Fn(&T) -> Result<U>) -> Result<Mat<U>> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Mat { ring, nrows: self.nrows, ncols: self.ncols, entries })
    }

    fn check_ring(&self, other: &Mat<T>) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring.to_string(), right: other.ring.to_string() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Mat<T>) -> Result<Mat<T>> {
        self.check_ring(other)?;
        if (self.nrows, self.ncols) != (other.nrows, other.ncols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(Mat { entries, ..self.clone_shape() })
    }

    pub fn sub(&self, other: &Mat<T>) -> Result<Mat<T>> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Mat<T> {
        Mat { entries: self.entries.iter().map(T::negate).collect(), ..self.clone_shape() }
    }

    pub fn scale(&self, s: &T) -> Result<Mat<T>> {
        let entries = self.entries.iter().map(|e| s.try_mul(e)).collect::<Result<_>>()?;
        Ok(Mat { entries, ..self.clone_shape() })
    }

    fn clone_shape(&self) -> Mat<T> {
        Mat { ring: self.ring, nrows: self.nrows, ncols: self.ncols, entries: Vec::new() }
    }

    pub fn mul(&self, other: &Mat<T>) -> Result<Mat<T>> {
        self.check_ring(other)?;
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut entries = Vec::with_capacity(self.nrows * other.ncols);
        for i in 0..self.nrows {
            for j in 0..other.ncols {
                let mut acc = T::zero_in(&self.ring);
                for k in 0..self.ncols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero_elem() || b.is_zero_elem() {
                        continue;
                    }
                    acc = acc.try_add(&a.try_mul(b)?)?;
                }
                entries.push(acc);
            }
        }
        Ok(Mat { ring: self.ring, nrows: self.nrows, ncols: other.ncols, entries })
    }

    /// `A · v` for a column vector `v`.
    pub fn apply_to_column(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.ncols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} applied to a column of length {}",
                self.nrows,
                self.ncols,
                v.len()
            )));
        }
        (0..self.nrows)
            .map(|i| {
                let mut acc = T::zero_in(&self.ring);
                for (k, x) in v.iter().enumerate() {
                    acc = acc.try_add(&self.get(i, k).try_mul(x)?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn transpose(&self) -> Mat<T> {
        Mat::from_fn(self.ring, self.ncols, self.nrows, |i, j| self.get(j, i).clone())
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} is not square", self.nrows, self.ncols)));
        }
        Ok(())
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Mat<T> {
        let n = self.nrows - 1;
        Mat::from_fn(self.ring, n, n, |i, j| {
            let r = if i < skip_row { i } else { i + 1 };
            let c = if j < skip_col { j } else { j + 1 };
            self.get(r, c).clone()
        })
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> Result<T> {
        self.require_square()?;
        Ok(self.det_unchecked())
    }

    fn det_unchecked(&self) -> T {
        match self.nrows {
            0 => T::one_in(&self.ring),
            1 => self.get(0, 0).clone(),
            2 => {
                let ad = self.get(0, 0).try_mul(self.get(1, 1)).unwrap();
                let bc = self.get(0, 1).try_mul(self.get(1, 0)).unwrap();
                ad.try_sub(&bc).unwrap()
            }
            n => {
                let mut acc = T::zero_in(&self.ring);
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_zero_elem() {
                        continue;
                    }
                    let term = a.try_mul(&self.minor(0, j).det_unchecked()).unwrap();
                    acc = if j % 2 == 0 { acc.try_add(&term) } else { acc.try_sub(&term) }.unwrap();
                }
                acc
            }
        }
    }

    /// Transposed cofactor matrix, so `A · adj(A) = det(A) · E`.
    pub fn adjugate(&self) -> Result<Mat<T>> {
        self.require_square()?;
        let n = self.nrows;
        if n == 1 {
            return Ok(Mat::identity(self.ring, 1));
        }
        Ok(Mat::from_fn(self.ring, n, n, |i, j| {
            let m = self.minor(j, i).det_unchecked();
            if (i + j) % 2 == 0 {
                m
            } else {
                m.negate()
            }
        }))
    }
}

impl Mat<RingElement> {
    /// Inverse as `adj(A) / det(A)`; fails with `NotAUnit` carrying the
    /// determinant.
    pub fn inverse(&self) -> Result<Mat<RingElement>> {
        let adj = self.adjugate()?;
        // First row of A · adj(A).
        let det = (0..self.ncols).fold(self.ring.zero(), |acc, j| &acc + &(self.get(0, j) * adj.get(j, 0)));
        let inv = det.unit_inverse().ok_or_else(|| Error::NotAUnit { det: det.to_string() })?;
        if inv.is_one() {
            return Ok(adj);
        }
        adj.scale(&inv)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.nrows).all(|i| {
                (0..self.ncols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// The same matrix over a ring with more variables.
    pub fn embed(&self, target: RingDescriptor) -> Result<Mat<RingElement>> {
        self.try_map(target, |e| e.embed(target))
    }

    /// The same matrix over a ring with fewer variables.
    pub fn restrict(&self, nvars: usize) -> Result<Mat<RingElement>> {
        self.try_map(self.ring.with_nvars(nvars), |e| e.restrict(nvars))
    }

    /// Entrywise specialization of variable `k` at the base point.
    pub fn specialize(&self, k: usize) -> Result<Mat<RingElement>> {
        self.try_map(self.ring, |e| e.specialize(k))
    }

    pub fn to_localized(&self) -> Mat<LocalizedElement> {
        self.map(self.ring, |e| LocalizedElement::from_ring(e.clone()))
    }

    pub fn to_doc(&self) -> MatrixDoc {
        MatrixDoc {
            ring: self.ring,
            entries: self.rows().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
        }
    }

    pub fn from_doc(doc: &MatrixDoc) -> Result<Mat<RingElement>> {
        let ring = doc.ring;
        if ring.nvars == 0 || ring.nvars > 9 {
            return Err(Error::Document(format!("unsupported number of variables {}", ring.nvars)));
        }
        let rows = doc
            .entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, s)| {
                        ring.parse(s).map_err(|e| match e {
                            Error::Parse { pos, message } => {
                                Error::Parse { pos, message: format!("entry ({},{}): {message}", i + 1, j + 1) }
                            }
                            other => other,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() {
            return Err(Error::Document("matrix has no rows".into()));
        }
        Mat::from_rows(ring, rows).map_err(|e| match e {
            Error::DimensionMismatch(m) => Error::Document(m),
            other => other,
        })
    }
}

impl Mat<LocalizedElement> {
    /// Back to ring entries when every denominator has cancelled.
    pub fn to_ring(&self) -> Option<Mat<RingElement>> {
        let entries = self.entries.iter().map(LocalizedElement::to_ring).collect::<Option<Vec<_>>>()?;
        Some(Mat { ring: self.ring, nrows: self.nrows, ncols: self.ncols, entries })
    }
}

impl<T: Scalar> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat({self})")
    }
}

/// `E_ij` (1-based indices).
pub fn unit_matrix(ring: RingDescriptor, n: usize, i: usize, j: usize) -> Result<Mat<RingElement>> {
    check_index(n, i)?;
    check_index(n, j)?;
    let mut m = Mat::zeros(ring, n, n);
    m.set(i - 1, j - 1, ring.one());
    Ok(m)
}

/// The transvection `t_ij(a) = E + a E_ij` (1-based, `i != j`).
pub fn transvection(n: usize, i: usize, j: usize, a: &RingElement) -> Result<Mat<RingElement>> {
    check_index(n, i)?;
    check_index(n, j)?;
    if i == j {
        return Err(Error::IndexConstraint(format!("transvection needs i != j, got i = j = {i}")));
    }
    let mut m = Mat::identity(*a.ring(), n);
    m.set(i - 1, j - 1, a.clone());
    Ok(m)
}

pub fn diag(ring: RingDescriptor, d: &[RingElement]) -> Result<Mat<RingElement>> {
    if let Some(bad) = d.iter().find(|e| e.ring() != &ring) {
        return Err(Error::RingMismatch { left: ring.to_string(), right: bad.ring().to_string() });
    }
    let n = d.len();
    Ok(Mat::from_fn(ring, n, n, |i, j| if i == j { d[i].clone() } else { ring.zero() }))
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::IndexConstraint(format!("index {i} outside 1..={n}")));
    }
    Ok(())
}

/// JSON form of a matrix:
/// `{"ring":{"mode":"polynomial","nvars":3,"coeff":"int"},"entries":[["a1","0"],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub ring: RingDescriptor,
    pub entries: Vec<Vec<String>>,
}

impl MatrixDoc {
    pub fn from_json(text: &str) -> Result<MatrixDoc> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix documents always serialize")
    }
}
