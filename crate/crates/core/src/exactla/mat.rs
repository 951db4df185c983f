use std::fmt;

use super::{Field, LaError, Scalar};

/// Dense row-major matrix over a field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Mat {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Mat { field, rows: nrows, cols, data }
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        let rs = rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Mat::from_rows(field, cols, rs)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, height: usize, cols: &[Vec<Scalar>]) -> Mat {
        let mut m = Mat::zeros(field, height, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), height);
            for (i, x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x.clone();
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Scalar) {
        let i = r * self.cols + c;
        self.data[i] += v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Scalar] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut out = Mat::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.rows);
        let mut out = self.field.zeros(self.cols);
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(k, j);
                if !b.is_zero() {
                    *o += &(a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        Mat { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        Mat { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        let data = self.data.iter().map(|a| a * s).collect();
        Mat { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    /// self += s * o
    pub fn axpy(&mut self, s: &Scalar, o: &Mat) {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            if !b.is_zero() {
                *a += &(s * b);
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.data[i * cols.len() + j] = self.get(r, c).clone();
            }
        }
        m
    }

    pub fn hstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.rows, o.rows);
        let mut m = Mat::zeros(self.field, self.rows, self.cols + o.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..o.cols {
                m.set(r, self.cols + c, o.get(r, c).clone());
            }
        }
        m
    }

    pub fn vstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Mat { field: self.field, rows: self.rows + o.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, o: &Mat) -> Mat {
        let mut m = Mat::zeros(self.field, self.rows + o.rows, self.cols + o.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..o.rows {
            for c in 0..o.cols {
                m.set(self.rows + r, self.cols + c, o.get(r, c).clone());
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rref_in_place(&mut self) -> Vec<usize> {
        if let Field::Prime(p) = self.field {
            return self.rref_mod(p);
        }
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self.get(r, c).inv().unwrap();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            let prow: Vec<Scalar> = self.row(r)[c..].to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                let row = self.row_mut(i);
                for (k, pv) in prow.iter().enumerate() {
                    if !pv.is_zero() {
                        row[c + k] -= &(&f * pv);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn rref_mod(&mut self, p: u64) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut d: Vec<u64> = self.data.iter().map(|x| x.residue().unwrap()).collect();
        let pivots = rref_residues(&mut d, rows, cols, p);
        for (x, v) in self.data.iter_mut().zip(d) {
            *x = Scalar::Mod(v, p);
        }
        pivots
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Right null space basis as vectors.
    pub fn kernel_vectors(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = self.field.zeros(self.cols);
            v[free] = self.field.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(i, free);
            }
            out.push(v);
        }
        out
    }

    /// Square inverse, if it exists.
    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let idx: Vec<usize> = (0..n).collect();
        let right: Vec<usize> = (n..2 * n).collect();
        Some(r.submatrix(&idx, &right))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Flattened entries, row-major.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }
}

/// In-place RREF over F_p on raw residues; returns pivot columns.
pub fn rref_residues(d: &mut [u64], rows: usize, cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| d[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for k in 0..cols {
                d.swap(r * cols + k, pr * cols + k);
            }
        }
        let inv = Scalar::Mod(d[r * cols + c], p).inv().unwrap().residue().unwrap();
        for k in c..cols {
            d[r * cols + k] = d[r * cols + k] * inv % p;
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = d[i * cols + c];
            if f == 0 {
                continue;
            }
            let nf = p - f;
            for k in c..cols {
                let pv = d[r * cols + k];
                if pv != 0 {
                    let idx = i * cols + k;
                    d[idx] = (d[idx] + nf * pv) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Row rank of a matrix of residues modulo p.
pub fn rank_residues(mut d: Vec<u64>, rows: usize, cols: usize, p: u64) -> usize {
    rref_residues(&mut d, rows, cols, p).len()
}

pub fn rank(m: &Mat) -> usize {
    m.rank()
}

/// Columns form a basis of the right null space.
pub fn kernel_basis(m: &Mat) -> Mat {
    let ks = m.kernel_vectors();
    Mat::from_columns(m.field(), m.cols(), &ks)
}

/// Some x with a·x = b, or None when inconsistent.
pub fn solve(a: &Mat, b: &Mat) -> Result<Option<Mat>, LaError> {
    if a.rows() != b.rows() {
        return Err(LaError::DimError { expected: a.rows(), found: b.rows() });
    }
    let aug = a.hstack(b);
    let (r, pivots) = aug.rref();
    if pivots.iter().any(|&p| p >= a.cols()) {
        return Ok(None);
    }
    let mut x = Mat::zeros(a.field(), a.cols(), b.cols());
    for (i, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(pc, j, r.get(i, a.cols() + j).clone());
        }
    }
    Ok(Some(x))
}

/// dim span(space) − dim span(subspace), both given by columns.
pub fn quotient_dim(space: &Mat, subspace: &Mat) -> Result<usize, LaError> {
    if space.rows() != subspace.rows() {
        return Err(LaError::DimError { expected: space.rows(), found: subspace.rows() });
    }
    let rs = space.rank();
    let both = space.hstack(subspace).rank();
    if both != rs {
        return Err(LaError::Containment);
    }
    Ok(rs - subspace.rank())
}
