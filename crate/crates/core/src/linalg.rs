//! Exact sparse linear algebra over the rationals.
//!
//! Columns are stored sparsely; rank uses an incremental echelon basis,
//! kernels and reduced row echelon forms go through a dense pass.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Q;

pub type SparseVec = Vec<(usize, Q)>;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseRationalMatrix {
    nrows: usize,
    ncols: usize,
    cols: Vec<SparseVec>,
}

impl SparseRationalMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseRationalMatrix {
            nrows,
            ncols,
            cols: vec![Vec::new(); ncols],
        }
    }

    /// Builds from column vectors; entries are sorted, merged and zero-free afterwards.
    pub fn from_columns(nrows: usize, cols: Vec<SparseVec>) -> Self {
        let ncols = cols.len();
        let cols = cols.into_iter().map(normalize).collect::<Vec<_>>();
        for c in &cols {
            if let Some((r, _)) = c.last() {
                assert!(*r < nrows, "row index {r} out of range {nrows}");
            }
        }
        SparseRationalMatrix { nrows, ncols, cols }
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut cols = vec![Vec::new(); ncols];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    cols[j].push((i, v.clone()));
                }
            }
        }
        SparseRationalMatrix { nrows, ncols, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        match self.cols[j].binary_search_by(|(r, _)| r.cmp(&i)) {
            Ok(p) => self.cols[j][p].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::zero(); self.ncols]; self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                out[*i][j] = v.clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut cols = vec![Vec::new(); self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                cols[*i].push((j, v.clone()));
            }
        }
        SparseRationalMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            cols,
        }
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseRationalMatrix) -> SparseRationalMatrix {
        assert_eq!(self.ncols, rhs.nrows, "dimension mismatch in product");
        let cols = rhs
            .cols
            .iter()
            .map(|c| {
                let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                for (k, b) in c {
                    for (i, a) in &self.cols[*k] {
                        *acc.entry(*i).or_insert_with(Q::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseRationalMatrix {
            nrows: self.nrows,
            ncols: rhs.ncols,
            cols,
        }
    }

    pub fn add(&self, rhs: &SparseRationalMatrix) -> SparseRationalMatrix {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(a, b)| normalize(a.iter().chain(b.iter()).cloned().collect()))
            .collect();
        SparseRationalMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            cols,
        }
    }

    pub fn select_columns(&self, idx: &[usize]) -> SparseRationalMatrix {
        SparseRationalMatrix {
            nrows: self.nrows,
            ncols: idx.len(),
            cols: idx.iter().map(|&j| self.cols[j].clone()).collect(),
        }
    }

    /// Keeps the listed rows, renumbered in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> SparseRationalMatrix {
        let mut map = vec![usize::MAX; self.nrows];
        for (new, &old) in idx.iter().enumerate() {
            map[old] = new;
        }
        let cols = self
            .cols
            .iter()
            .map(|c| {
                let mut v: SparseVec = c
                    .iter()
                    .filter(|(i, _)| map[*i] != usize::MAX)
                    .map(|(i, x)| (map[*i], x.clone()))
                    .collect();
                v.sort_by_key(|(i, _)| *i);
                v
            })
            .collect();
        SparseRationalMatrix {
            nrows: idx.len(),
            ncols: self.ncols,
            cols,
        }
    }

    /// Exact rank via incremental echelon reduction of the columns.
    pub fn rank(&self) -> usize {
        // Reduce the shorter side.
        if self.nrows < self.ncols {
            return self.transpose().rank();
        }
        let mut ech = Echelon::new();
        let mut order: Vec<usize> = (0..self.ncols).collect();
        order.sort_by_key(|&j| self.cols[j].len());
        for j in order {
            ech.insert(self.cols[j].clone());
        }
        ech.rank()
    }

    /// Reduced row echelon form of the dense matrix and its pivot columns.
    pub fn rref(&self) -> (Vec<Vec<Q>>, Vec<usize>) {
        rref_dense(self.to_dense())
    }

    /// A basis of the right kernel, as dense vectors of length `ncols`.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![Q::zero(); self.ncols];
            v[free] = Q::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[row][free].clone();
            }
            basis.push(v);
        }
        basis
    }
}

fn normalize(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// Incremental row echelon basis keyed by leading index.
#[derive(Default, Clone, Debug)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut w = normalize(v);
        loop {
            let Some((lead, c)) = w.first().cloned() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(p) => w = axpy(&w, p, &(-c)),
                None => {
                    let inv = c.recip();
                    for (_, x) in w.iter_mut() {
                        *x *= &inv;
                    }
                    self.pivots.insert(lead, w);
                    return true;
                }
            }
        }
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        let mut w = normalize(v);
        loop {
            let Some((lead, c)) = w.first().cloned() else {
                return true;
            };
            match self.pivots.get(&lead) {
                Some(p) => w = axpy(&w, p, &(-c)),
                None => return false,
            }
        }
    }
}

/// `a + s*b` for sorted sparse vectors.
fn axpy(a: &SparseVec, b: &SparseVec, s: &Q) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, &b[j].1 * s));
            j += 1;
        } else {
            let x = &a[i].1 + &b[j].1 * s;
            if !x.is_zero() {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn rref_dense(mut m: Vec<Vec<Q>>) -> (Vec<Vec<Q>>, Vec<usize>) {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r != row && !other[col].is_zero() {
                let f = other[col].clone();
                for (x, y) in other.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    (m, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    fn dense(rows: &[&[i64]]) -> SparseRationalMatrix {
        SparseRationalMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(dense(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(dense(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).rank(), 3);
        assert_eq!(dense(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(SparseRationalMatrix::zeros(0, 5).rank(), 0);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = dense(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let k = m.kernel();
        assert_eq!(k.len(), 4 - m.rank());
        for v in k {
            let col = SparseRationalMatrix::from_dense(&v.iter().map(|x| vec![x.clone()]).collect::<Vec<_>>());
            assert!(m.mul(&col).is_zero());
        }
    }

    #[test]
    fn product_matches_hand_computation() {
        let a = dense(&[&[1, 2], &[3, 4]]);
        let b = dense(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b).to_dense(), vec![vec![q(2), q(1)], vec![q(4), q(3)]]);
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(vec![(0, q(2)), (3, qr(1, 2))]));
        assert!(!e.insert(vec![(0, q(4)), (3, q(1))]));
        assert!(e.contains(vec![(3, q(5)), (0, q(20))]));
        assert!(!e.contains(vec![(3, q(1))]));
    }
}
