//! Dense matrices over a [`Ring`].

use serde::{Deserialize, Serialize};

use super::ring::Ring;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::InvalidParameter("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<F: Clone>(&self, f: impl Fn(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

pub fn zero<R: Ring>(ring: &R, rows: usize, cols: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(rows, cols, |_, _| ring.zero())
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
}

pub fn mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.cols != b.rows {
        return Err(Error::InvalidParameter(format!(
            "shape mismatch {}x{} * {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = zero(ring, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if ring.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                let v = ring.add(out.get(i, j), &ring.mul(x, b.get(k, j)));
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

pub fn add<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::InvalidParameter("shape mismatch in addition".into()));
    }
    Ok(Matrix::from_fn(a.rows, a.cols, |i, j| ring.add(a.get(i, j), b.get(i, j))))
}

pub fn sub<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::InvalidParameter("shape mismatch in subtraction".into()));
    }
    Ok(Matrix::from_fn(a.rows, a.cols, |i, j| ring.sub(a.get(i, j), b.get(i, j))))
}

pub fn pow<R: Ring>(ring: &R, a: &Matrix<R::Elem>, mut e: u64) -> Result<Matrix<R::Elem>> {
    if !a.is_square() {
        return Err(Error::InvalidParameter("power of a non-square matrix".into()));
    }
    let mut acc = identity(ring, a.rows);
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(ring, &acc, &base)?;
        }
        e >>= 1;
        if e > 0 {
            base = mul(ring, &base, &base)?;
        }
    }
    Ok(acc)
}

pub fn is_zero<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> bool {
    a.data.iter().all(|x| ring.is_zero(x))
}

pub fn apply<R: Ring>(ring: &R, a: &Matrix<R::Elem>, v: &[R::Elem]) -> Result<Vec<R::Elem>> {
    if v.len() != a.cols {
        return Err(Error::InvalidParameter("vector length mismatch".into()));
    }
    Ok((0..a.rows)
        .map(|i| {
            let mut s = ring.zero();
            for (j, x) in v.iter().enumerate() {
                s = ring.add(&s, &ring.mul(a.get(i, j), x));
            }
            s
        })
        .collect())
}

/// Determinant by cofactor-free elimination; requires a field.
pub fn det_field<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> Result<R::Elem> {
    if !a.is_square() {
        return Err(Error::InvalidParameter("determinant of a non-square matrix".into()));
    }
    let n = a.rows;
    let mut m = a.to_rows();
    let mut det = ring.one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !ring.is_zero(&m[r][c])) else { return Ok(ring.zero()) };
        if piv != c {
            m.swap(piv, c);
            det = ring.neg(&det);
        }
        let p = m[c][c].clone();
        det = ring.mul(&det, &p);
        let pinv = ring.inv(&p).ok_or_else(|| Error::Precondition("pivot is not a unit".into()))?;
        for r in c + 1..n {
            if ring.is_zero(&m[r][c]) {
                continue;
            }
            let f = ring.mul(&m[r][c], &pinv);
            for k in c..n {
                let v = ring.sub(&m[r][k], &ring.mul(&f, &m[c][k]));
                m[r][k] = v;
            }
        }
    }
    Ok(det)
}

/// Rank over a field.
pub fn rank_field<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> usize {
    let mut m = a.to_rows();
    let (rows, cols) = (a.rows, a.cols);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !ring.is_zero(&m[r][c])) else { continue };
        m.swap(rank, piv);
        let pinv = ring.inv(&m[rank][c]).expect("field");
        for r in 0..rows {
            if r == rank || ring.is_zero(&m[r][c]) {
                continue;
            }
            let f = ring.mul(&m[r][c], &pinv);
            for k in c..cols {
                let v = ring.sub(&m[r][k], &ring.mul(&f, &m[rank][k]));
                m[r][k] = v;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ext::ext_field;
    use crate::arith::ff::Fe;
    use crate::arith::place::parse_place;

    #[test]
    fn det_and_rank() {
        let k = ext_field(&parse_place(3, "T").unwrap(), 1, true).unwrap();
        let m = Matrix::from_rows(vec![vec![Fe(1), Fe(2)], vec![Fe(2), Fe(1)]]).unwrap();
        assert_eq!(det_field(&k, &m).unwrap(), Fe(0));
        assert_eq!(rank_field(&k, &m), 1);
        let p = pow(&k, &m, 3).unwrap();
        assert_eq!(p, mul(&k, &m, &mul(&k, &m, &m).unwrap()).unwrap());
    }
}
