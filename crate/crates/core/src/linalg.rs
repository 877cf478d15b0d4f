//! Dense exact linear algebra over [`Cyclotomic`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Cyclotomic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Cyclotomic>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Cyclotomic::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Cyclotomic::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cyclotomic) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer entries, handy in tests and fixtures.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Cyclotomic::from_int(v)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Cyclotomic>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::ShapeMismatch("column length".into()));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclotomic) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Cyclotomic {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Cyclotomic] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Cyclotomic> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Cyclotomic::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *out.entry_mut(i, j) += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector.
    pub fn apply(&self, v: &[Cyclotomic]) -> Result<Vec<Cyclotomic>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} applied to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Cyclotomic::zero(); self.rows];
        for (k, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, k);
                if !a.is_zero() {
                    *o += &(a * x);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Matrix, f: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, s: &Cyclotomic) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Kronecker product; index of `(i, k)` is `i * other.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            let a = self.get(i / r2, j / c2);
            if a.is_zero() {
                Cyclotomic::zero()
            } else {
                a * other.get(i % r2, j % c2)
            }
        })
    }

    /// Reduced row echelon form with the first nonzero entry of each column
    /// as pivot. Returns the reduced matrix and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j);
                if !v.is_zero() {
                    let nv = v * &inv;
                    m.set(r, j, nv);
                }
            }
            let pivot_row: Vec<Cyclotomic> = m.row(r)[c..].to_vec();
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for (off, pv) in pivot_row.iter().enumerate() {
                    if !pv.is_zero() {
                        let t = &f * pv;
                        *m.entry_mut(i, c + off) -= &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per column.
    pub fn kernel(&self) -> Matrix {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.cols, free.len());
        for (t, &f) in free.iter().enumerate() {
            k.set(f, t, Cyclotomic::one());
            for (r, &p) in pivots.iter().enumerate() {
                let v = m.get(r, f);
                if !v.is_zero() {
                    k.set(p, t, -v);
                }
            }
        }
        k
    }

    /// A particular solution of `self * x = b`, or `None` when the system is
    /// inconsistent. The returned solution has been checked exactly.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if b.rows != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "system has {} rows, right-hand side {}",
                self.rows, b.rows
            )));
        }
        let aug = Self::from_fn(self.rows, self.cols + b.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b.get(i, j - self.cols).clone()
            }
        });
        let (m, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.cols, b.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, m.get(r, self.cols + j).clone());
            }
        }
        if self.matmul(&x)? != *b {
            return Err(Error::Internal("solve produced a non-solution".into()));
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "inverse of {}x{}",
                self.rows, self.cols
            )));
        }
        if self.rank() < self.rows {
            return Err(Error::Singular);
        }
        self.solve(&Self::identity(self.rows))?.ok_or(Error::Singular)
    }

    /// Entries as display strings, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect()
    }

    pub fn entries(&self) -> &[Cyclotomic] {
        &self.data
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    /// Panics on a shape mismatch; use [`Matrix::matmul`] for a checked product.
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs).expect("matrix shapes")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Dense tensor of arbitrary rank, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<Cyclotomic>,
}

/// Order-3 structure tensor such as a multiplication table.
pub type Tensor3 = Tensor;

impl Tensor {
    pub fn zeros(shape: &[usize]) -> Self {
        Tensor {
            shape: shape.to_vec(),
            data: vec![Cyclotomic::zero(); shape.iter().product()],
        }
    }

    pub fn from_vec(shape: &[usize], data: Vec<Cyclotomic>) -> Result<Self> {
        if data.len() != shape.iter().product::<usize>() {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for shape {:?}",
                data.len(),
                shape
            )));
        }
        Ok(Tensor {
            shape: shape.to_vec(),
            data,
        })
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        Tensor {
            shape: vec![m.rows(), m.cols()],
            data: m.entries().to_vec(),
        }
    }

    pub fn from_vector(v: &[Cyclotomic]) -> Self {
        Tensor {
            shape: vec![v.len()],
            data: v.to_vec(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        match self.shape[..] {
            [r, c] => Ok(Matrix {
                rows: r,
                cols: c,
                data: self.data.clone(),
            }),
            _ => Err(Error::ShapeMismatch(format!("rank {} is not a matrix", self.shape.len()))),
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[Cyclotomic] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        idx.iter().zip(&self.shape).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn get(&self, idx: &[usize]) -> &Cyclotomic {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Cyclotomic) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn entry_mut(&mut self, idx: &[usize]) -> &mut Cyclotomic {
        let o = self.offset(idx);
        &mut self.data[o]
    }

    /// Nonzero entries with their multi-indices, in storage order.
    pub fn nonzeros(&self) -> Vec<(Vec<usize>, Cyclotomic)> {
        let mut out = Vec::new();
        for (o, v) in self.data.iter().enumerate() {
            if !v.is_zero() {
                out.push((self.unravel(o), v.clone()));
            }
        }
        out
    }

    fn unravel(&self, mut o: usize) -> Vec<usize> {
        let mut idx = vec![0; self.shape.len()];
        for (k, &d) in self.shape.iter().enumerate().rev() {
            idx[k] = o % d;
            o /= d;
        }
        idx
    }
}

/// Einstein summation, e.g. `contract("ijp,pkl->ijkl", &[&m, &m])`.
///
/// Every output index must occur in some operand, repeated indices must
/// agree in dimension, and indices absent from the output are summed.
pub fn contract(pattern: &str, operands: &[&Tensor]) -> Result<Tensor> {
    let (lhs, out) = pattern
        .split_once("->")
        .ok_or_else(|| Error::Pattern(format!("missing '->' in {pattern:?}")))?;
    let inputs: Vec<Vec<char>> = lhs.split(',').map(|s| s.trim().chars().collect()).collect();
    let out: Vec<char> = out.trim().chars().collect();
    if inputs.len() != operands.len() {
        return Err(Error::Pattern(format!(
            "{} index groups for {} operands",
            inputs.len(),
            operands.len()
        )));
    }
    let mut dims: BTreeMap<char, usize> = BTreeMap::new();
    for (labels, t) in inputs.iter().zip(operands) {
        if labels.len() != t.shape.len() {
            return Err(Error::Pattern(format!(
                "index group {:?} has {} labels for rank {}",
                labels.iter().collect::<String>(),
                labels.len(),
                t.shape.len()
            )));
        }
        for (&c, &d) in labels.iter().zip(&t.shape) {
            if !c.is_alphabetic() {
                return Err(Error::Pattern(format!("bad index name {c:?}")));
            }
            match dims.insert(c, d) {
                Some(prev) if prev != d => {
                    return Err(Error::Pattern(format!(
                        "index {c:?} has mismatched dimensions {prev} and {d}"
                    )))
                }
                _ => {}
            }
        }
    }
    for (k, c) in out.iter().enumerate() {
        if !dims.contains_key(c) {
            return Err(Error::Pattern(format!("dangling output index {c:?}")));
        }
        if out[..k].contains(c) {
            return Err(Error::Pattern(format!("output index {c:?} repeated")));
        }
    }
    let summed: Vec<char> = dims.keys().copied().filter(|c| !out.contains(c)).collect();
    let all: Vec<char> = out.iter().chain(&summed).copied().collect();
    let pos = |c: char| all.iter().position(|&x| x == c).expect("known index");
    let operand_pos: Vec<Vec<usize>> = inputs
        .iter()
        .map(|labels| labels.iter().map(|&c| pos(c)).collect())
        .collect();
    let all_dims: Vec<usize> = all.iter().map(|c| dims[c]).collect();
    let out_shape: Vec<usize> = out.iter().map(|c| dims[c]).collect();
    let mut result = Tensor::zeros(&out_shape);
    if all_dims.contains(&0) {
        return Ok(result);
    }
    let mut idx = vec![0usize; all.len()];
    let mut scratch: Vec<usize> = Vec::new();
    'outer: loop {
        let mut prod = Cyclotomic::one();
        let mut zero = false;
        for (t, p) in operands.iter().zip(&operand_pos) {
            scratch.clear();
            scratch.extend(p.iter().map(|&k| idx[k]));
            let v = t.get(&scratch);
            if v.is_zero() {
                zero = true;
                break;
            }
            prod = &prod * v;
        }
        if !zero {
            *result.entry_mut(&idx[..out.len()]) += &prod;
        }
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < all_dims[k] {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k).unwrap()
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert_eq!(Matrix::identity(3).kernel().cols(), 0);
    }

    #[test]
    fn solve_one_by_one() {
        let a = Matrix::from_ints(&[&[2]]).unwrap();
        let b = Matrix::from_ints(&[&[1]]).unwrap();
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(*x.get(0, 0), Cyclotomic::from_ratio(1, 2).unwrap());
    }

    #[test]
    fn inconsistent_system_is_reported() {
        let a = Matrix::from_ints(&[&[1, 1], &[1, 1]]).unwrap();
        let b = Matrix::from_ints(&[&[1], &[2]]).unwrap();
        assert_eq!(a.solve(&b).unwrap(), None);
        assert!(matches!(a.solve(&Matrix::zeros(3, 1)), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn gaussian_kernel() {
        let a = Matrix::from_rows(vec![
            vec![Cyclotomic::one(), z(4, 1)],
            vec![-z(4, 1), Cyclotomic::one()],
        ])
        .unwrap();
        let k = a.kernel();
        assert_eq!(k.cols(), 1);
        assert!(a.matmul(&k).unwrap().is_zero());
        // x + i y = 0 forces the direction (-zeta_4, 1); (zeta_4, 1) is not a null vector
        let c = k.get(1, 0).clone();
        assert_eq!(*k.get(0, 0), -(&z(4, 1) * &c));
        let wrong = Matrix::from_columns(2, &[vec![z(4, 1), Cyclotomic::one()]]).unwrap();
        assert!(!a.matmul(&wrong).unwrap().is_zero());
    }

    #[test]
    fn inverse_and_singular() {
        let a = Matrix::from_ints(&[&[1, 2], &[3, 4]]).unwrap();
        assert!(a.matmul(&a.inverse().unwrap()).unwrap().is_identity());
        let s = Matrix::from_ints(&[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(s.inverse(), Err(Error::Singular));
    }

    #[test]
    fn kron_indexing() {
        let a = Matrix::from_ints(&[&[1, 2]]).unwrap();
        let b = Matrix::from_ints(&[&[0], &[1]]).unwrap();
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k, Matrix::from_ints(&[&[0, 0], &[1, 2]]).unwrap());
    }

    #[test]
    fn contraction_basics() {
        let id = Tensor::from_matrix(&Matrix::identity(4));
        let tr = contract("ii->", &[&id]).unwrap();
        assert_eq!(tr.data()[0], Cyclotomic::from_int(4));

        let t = Tensor::from_vec(&[2, 2, 2], (0..8).map(Cyclotomic::from_int).collect()).unwrap();
        let id2 = Tensor::from_matrix(&Matrix::identity(2));
        assert_eq!(contract("ia,ajk->ijk", &[&id2, &t]).unwrap(), t);
    }

    #[test]
    fn contraction_errors() {
        let id = Tensor::from_matrix(&Matrix::identity(2));
        let id3 = Tensor::from_matrix(&Matrix::identity(3));
        assert!(matches!(contract("ij->ik", &[&id]), Err(Error::Pattern(_))));
        assert!(matches!(contract("ij,jk->ik", &[&id, &id3]), Err(Error::Pattern(_))));
        assert!(matches!(contract("ij", &[&id]), Err(Error::Pattern(_))));
        assert!(matches!(contract("ijk->i", &[&id]), Err(Error::Pattern(_))));
    }
}
