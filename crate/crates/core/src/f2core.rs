//! Sparse linear algebra over F₂: vectors as sorted supports, matrices as sparse columns.
//!
//! Rank and kernel come from a column reduction that pivots on the largest row index.
//! Everything is sequential and deterministic.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};

/// A vector over F₂, stored as the sorted list of its nonzero coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    support: Vec<usize>,
}

impl F2Vector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        Self { support: vec![i] }
    }

    /// Builds a vector from indices; repeated indices cancel in pairs.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        let mut support = Vec::with_capacity(v.len());
        let mut i = 0;
        while i < v.len() {
            let mut j = i;
            while j < v.len() && v[j] == v[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                support.push(v[i]);
            }
            i = j;
        }
        Self { support }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.support.binary_search(&i).is_ok()
    }

    /// Largest nonzero coordinate, used as the pivot in reductions.
    pub fn pivot(&self) -> Option<usize> {
        self.support.last().copied()
    }

    /// Symmetric difference of supports.
    pub fn sum(&self, other: &F2Vector) -> F2Vector {
        let (a, b) = (&self.support, &other.support);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        F2Vector { support: out }
    }

    /// Keeps only coordinates accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(usize) -> bool) -> F2Vector {
        F2Vector {
            support: self.support.iter().copied().filter(|&i| keep(i)).collect(),
        }
    }

    /// Reindexes through `map`; coordinates mapped to `None` are dropped.
    pub fn reindex(&self, map: impl Fn(usize) -> Option<usize>) -> F2Vector {
        F2Vector::from_indices(self.support.iter().filter_map(|&i| map(i)))
    }
}

impl Add for &F2Vector {
    type Output = F2Vector;
    fn add(self, rhs: &F2Vector) -> F2Vector {
        self.sum(rhs)
    }
}

impl AddAssign<&F2Vector> for F2Vector {
    fn add_assign(&mut self, rhs: &F2Vector) {
        *self = self.sum(rhs);
    }
}

/// A sparse matrix over F₂ stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    columns: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![F2Vector::zero(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            columns: (0..n).map(F2Vector::unit).collect(),
        }
    }

    /// Builds a matrix from (row, col) pairs; repeated pairs cancel.
    pub fn from_entries<I: IntoIterator<Item = (usize, usize)>>(
        rows: usize,
        cols: usize,
        entries: I,
    ) -> Result<Self> {
        let mut by_col: Vec<Vec<usize>> = vec![Vec::new(); cols];
        for (r, c) in entries {
            if r >= rows || c >= cols {
                return Err(Error::InvalidInput(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            by_col[c].push(r);
        }
        Ok(Self {
            rows,
            cols,
            columns: by_col.into_iter().map(F2Vector::from_indices).collect(),
        })
    }

    pub fn from_columns(rows: usize, columns: Vec<F2Vector>) -> Result<Self> {
        if let Some(bad) = columns.iter().find(|c| c.pivot().is_some_and(|p| p >= rows)) {
            return Err(Error::InvalidInput(format!(
                "column entry {} outside {rows} rows",
                bad.pivot().unwrap_or_default()
            )));
        }
        Ok(Self {
            rows,
            cols: columns.len(),
            columns,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &F2Vector {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[F2Vector] {
        &self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.columns[c].contains(r)
    }

    /// All nonzero entries as (row, col), ordered by column then row.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.support().iter().map(move |&r| (r, c)))
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(F2Vector::weight).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(F2Vector::is_zero)
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut by_row: Vec<Vec<usize>> = vec![Vec::new(); self.rows];
        for (r, c) in self.entries() {
            by_row[r].push(c);
        }
        F2Matrix {
            rows: self.cols,
            cols: self.rows,
            columns: by_row
                .into_iter()
                .map(|support| F2Vector { support })
                .collect(),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &F2Vector) -> F2Vector {
        let mut acc: Vec<usize> = Vec::new();
        for &i in v.support() {
            acc.extend_from_slice(self.columns[i].support());
        }
        F2Vector::from_indices(acc)
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::InvalidInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(F2Matrix {
            rows: self.rows,
            cols: rhs.cols,
            columns: rhs.columns.iter().map(|c| self.apply(c)).collect(),
        })
    }

    /// Submatrix on the given rows and columns, reindexed in the given order.
    pub fn select(&self, row_idx: &[usize], col_idx: &[usize]) -> F2Matrix {
        let mut row_pos = vec![None; self.rows];
        for (k, &r) in row_idx.iter().enumerate() {
            row_pos[r] = Some(k);
        }
        F2Matrix {
            rows: row_idx.len(),
            cols: col_idx.len(),
            columns: col_idx
                .iter()
                .map(|&c| self.columns[c].reindex(|r| row_pos[r]))
                .collect(),
        }
    }
}

/// Incremental row echelon form keyed by pivot (largest index).
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, F2Vector>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Remainder of `v` after eliminating every known pivot.
    pub fn reduce(&self, v: &F2Vector) -> F2Vector {
        let mut v = v.clone();
        while let Some(p) = v.pivot() {
            match self.pivots.get(&p) {
                Some(row) => v += row,
                None => break,
            }
        }
        v
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns true iff it was independent.
    pub fn insert(&mut self, v: &F2Vector) -> bool {
        let r = self.reduce(v);
        match r.pivot() {
            Some(p) => {
                self.pivots.insert(p, r);
                true
            }
            None => false,
        }
    }
}

/// Rank of the span of a list of vectors.
pub fn span_rank<'a, I: IntoIterator<Item = &'a F2Vector>>(vectors: I) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

struct Reduction {
    reduced: Vec<F2Vector>,
    transform: Vec<F2Vector>,
}

/// Column reduction `R = M V` with `V` upper unitriangular.
fn reduce(m: &F2Matrix, track: bool) -> Reduction {
    let mut owner: Vec<Option<usize>> = vec![None; m.rows];
    let mut reduced: Vec<F2Vector> = Vec::with_capacity(m.cols);
    let mut transform: Vec<F2Vector> = Vec::with_capacity(if track { m.cols } else { 0 });
    for j in 0..m.cols {
        let mut col = m.columns[j].clone();
        let mut v = if track { F2Vector::unit(j) } else { F2Vector::zero() };
        while let Some(p) = col.pivot() {
            match owner[p] {
                Some(k) => {
                    col += &reduced[k];
                    if track {
                        v += &transform[k];
                    }
                }
                None => {
                    owner[p] = Some(j);
                    break;
                }
            }
        }
        reduced.push(col);
        if track {
            transform.push(v);
        }
    }
    Reduction { reduced, transform }
}

/// Rank over F₂.
pub fn rank(m: &F2Matrix) -> usize {
    reduce(m, false)
        .reduced
        .iter()
        .filter(|c| !c.is_zero())
        .count()
}

/// A basis of the null space; its length is `cols − rank`.
pub fn kernel_basis(m: &F2Matrix) -> Vec<F2Vector> {
    let r = reduce(m, true);
    r.reduced
        .iter()
        .zip(r.transform)
        .filter(|(c, _)| c.is_zero())
        .map(|(_, v)| v)
        .collect()
}

/// The middle term of a two-step complex `A --d_in--> B --d_out--> C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoStep {
    pub d_in: F2Matrix,
    pub d_out: F2Matrix,
}

impl TwoStep {
    /// Validates shapes and `d_out ∘ d_in = 0`.
    pub fn new(d_in: F2Matrix, d_out: F2Matrix) -> Result<Self> {
        if d_in.rows() != d_out.cols() {
            return Err(Error::InvalidInput(format!(
                "d_in has {} rows but d_out has {} columns",
                d_in.rows(),
                d_out.cols()
            )));
        }
        if !d_out.mul(&d_in)?.is_zero() {
            return Err(Error::CompositionNonzero);
        }
        Ok(Self { d_in, d_out })
    }

    /// Dimension of the middle space.
    pub fn dim(&self) -> usize {
        self.d_out.cols()
    }

    pub fn homology_dim(&self) -> usize {
        self.dim() - rank(&self.d_out) - rank(&self.d_in)
    }

    pub fn cycles(&self) -> Vec<F2Vector> {
        kernel_basis(&self.d_out)
    }

    pub fn boundaries(&self) -> Echelon {
        let mut e = Echelon::new();
        for c in self.d_in.columns() {
            e.insert(c);
        }
        e
    }

    /// Cycles whose classes form a basis of homology.
    pub fn homology_basis(&self) -> Vec<F2Vector> {
        let mut e = self.boundaries();
        self.cycles().into_iter().filter(|z| e.insert(z)).collect()
    }
}

/// `dim ker d_out − rank d_in`, after checking `d_out ∘ d_in = 0`.
pub fn homology_dim(d_in: &F2Matrix, d_out: &F2Matrix) -> Result<usize> {
    Ok(TwoStep::new(d_in.clone(), d_out.clone())?.homology_dim())
}

/// Rank of the map on homology induced by `map` (dst.dim × src.dim) between middle terms.
///
/// The map must send cycles to cycles and boundaries to boundaries.
pub fn induced_map_dims(map: &F2Matrix, src: &TwoStep, dst: &TwoStep) -> Result<usize> {
    if map.cols() != src.dim() || map.rows() != dst.dim() {
        return Err(Error::InvalidInput(format!(
            "map is {}x{}, expected {}x{}",
            map.rows(),
            map.cols(),
            dst.dim(),
            src.dim()
        )));
    }
    let images: Vec<F2Vector> = src.cycles().iter().map(|z| map.apply(z)).collect();
    if let Some(bad) = images.iter().find(|w| !dst.d_out.apply(w).is_zero()) {
        return Err(Error::NotChainMap(format!(
            "a cycle maps to the non-cycle {:?}",
            bad.support()
        )));
    }
    let mut span = dst.boundaries();
    let base = span.rank();
    for b in src.d_in.columns() {
        if !span.contains(&map.apply(b)) {
            return Err(Error::NotChainMap(
                "a boundary maps outside the boundaries".into(),
            ));
        }
    }
    for w in &images {
        span.insert(w);
    }
    Ok(span.rank() - base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_zero_ranks() {
        assert_eq!(rank(&F2Matrix::identity(3)), 3);
        assert_eq!(rank(&F2Matrix::zeros(4, 7)), 0);
        assert!(kernel_basis(&F2Matrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&F2Matrix::zeros(2, 2)).len(), 2);
    }

    #[test]
    fn repeated_entries_cancel() {
        let m = F2Matrix::from_entries(2, 2, [(0, 0), (0, 0), (1, 1)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert!(F2Matrix::from_entries(2, 2, [(2, 0)]).is_err());
    }

    #[test]
    fn trivial_homology() {
        let n = 5;
        assert_eq!(
            homology_dim(&F2Matrix::zeros(n, n), &F2Matrix::zeros(n, n)).unwrap(),
            n
        );
        assert_eq!(
            homology_dim(&F2Matrix::zeros(n, n), &F2Matrix::identity(n)).unwrap(),
            0
        );
        let err = homology_dim(&F2Matrix::identity(n), &F2Matrix::identity(n));
        assert_eq!(err, Err(Error::CompositionNonzero));
    }

    #[test]
    fn induced_identity_and_zero() {
        let d_in = F2Matrix::from_entries(3, 1, [(0, 0), (1, 0)]).unwrap();
        let c = TwoStep::new(d_in, F2Matrix::zeros(1, 3)).unwrap();
        assert_eq!(c.homology_dim(), 2);
        assert_eq!(induced_map_dims(&F2Matrix::identity(3), &c, &c).unwrap(), 2);
        assert_eq!(induced_map_dims(&F2Matrix::zeros(3, 3), &c, &c).unwrap(), 0);
        let swap01 = F2Matrix::from_entries(3, 3, [(2, 0), (1, 1), (0, 2)]).unwrap();
        assert!(matches!(
            induced_map_dims(&swap01, &c, &c),
            Err(Error::NotChainMap(_))
        ));
    }

    #[test]
    fn echelon_detects_dependence() {
        let mut e = Echelon::new();
        assert!(e.insert(&F2Vector::from_indices([0, 1])));
        assert!(e.insert(&F2Vector::from_indices([1, 2])));
        assert!(!e.insert(&F2Vector::from_indices([0, 2])));
        assert_eq!(e.rank(), 2);
    }
}
