//! Exact sparse linear algebra over a [`Field`].
//!
//! Operator matrices here are built column by column from an operator applied to
//! an enumerated basis and are overwhelmingly zero. They are also block diagonal
//! after a permutation (the osp(1|2) operators preserve a torus weight), so every
//! routine first splits the matrix into the connected components of its
//! row/column incidence graph and eliminates each block on its own.
//!
//! Pivoting is deterministic: columns are scanned left to right and the first
//! remaining row with a nonzero entry becomes the pivot row. The split into
//! blocks does not change which pivots are chosen.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;

/// What a basis of a domain or codomain enumerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    #[default]
    Coordinates,
    Spinors,
    Forms,
    Exterior,
    /// Coordinates relative to a computed basis of a component of a form window.
    Component,
}

/// Describes the basis behind the rows or columns of an [`OperatorMatrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
pub struct BasisLabel {
    pub kind: SpaceKind,
    pub form_degree: usize,
    pub degree_bound: usize,
}

impl BasisLabel {
    pub fn new(kind: SpaceKind, form_degree: usize, degree_bound: usize) -> Self {
        BasisLabel { kind, form_degree, degree_bound }
    }
}

/// A sparse matrix between two explicitly enumerated bases. Stored entries are
/// never zero.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<T> {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), T>,
    pub domain: BasisLabel,
    pub codomain: BasisLabel,
}

impl<T: Field> OperatorMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        OperatorMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
            domain: BasisLabel::default(),
            codomain: BasisLabel::default(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), T::one());
        }
        m
    }

    pub fn with_labels(mut self, domain: BasisLabel, codomain: BasisLabel) -> Self {
        self.domain = domain;
        self.codomain = codomain;
        self
    }

    /// Builds a matrix from row vectors. All rows must have the same length.
    pub fn from_dense(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`, given sparsely.
    pub fn from_sparse_columns(rows: usize, columns: Vec<Vec<(usize, T)>>) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.into_iter().enumerate() {
            for (r, v) in col {
                m.add_to(r, c, v);
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

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&T> {
        self.entries.get(&(r, c))
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: T) {
        if v.is_zero() {
            return;
        }
        let cur = self.entries.remove(&(r, c)).unwrap_or_else(T::zero);
        self.set(r, c, cur + v);
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        let mut v = vec![T::zero(); self.rows];
        for (&(r, cc), x) in &self.entries {
            if cc == c {
                v[r] = x.clone();
            }
        }
        v
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "dimension mismatch in mul_vec");
        let mut y = vec![T::zero(); self.rows];
        for (&(r, c), v) in &self.entries {
            if !x[c].is_zero() {
                y[r] = y[r].clone() + v.clone() * x[c].clone();
            }
        }
        y
    }

    /// The composite `self ∘ rhs`.
    pub fn compose(&self, rhs: &OperatorMatrix<T>) -> OperatorMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in compose");
        let mut by_row: BTreeMap<usize, Vec<(usize, &T)>> = BTreeMap::new();
        for (&(r, c), v) in &rhs.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = OperatorMatrix::zeros(self.rows, rhs.cols).with_labels(rhs.domain, self.codomain);
        for (&(r, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(c, b) in row {
                    out.add_to(r, c, a.clone() * b.clone());
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &T) -> OperatorMatrix<T> {
        let mut out = OperatorMatrix::zeros(self.rows, self.cols).with_labels(self.domain, self.codomain);
        for (&(r, c), v) in &self.entries {
            out.set(r, c, v.clone() * s.clone());
        }
        out
    }

    pub fn add(&self, rhs: &OperatorMatrix<T>) -> OperatorMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch in add");
        let mut out = self.clone();
        for (&(r, c), v) in &rhs.entries {
            out.add_to(r, c, v.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &OperatorMatrix<T>) -> OperatorMatrix<T> {
        self.add(&rhs.scale(&-T::one()))
    }

    pub fn transpose(&self) -> OperatorMatrix<T> {
        let mut out = OperatorMatrix::zeros(self.cols, self.rows).with_labels(self.codomain, self.domain);
        for (&(r, c), v) in &self.entries {
            out.entries.insert((c, r), v.clone());
        }
        out
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &OperatorMatrix<T>) -> OperatorMatrix<T> {
        assert_eq!(self.rows, rhs.rows, "row mismatch in hstack");
        let mut out = OperatorMatrix::zeros(self.rows, self.cols + rhs.cols);
        out.entries = self.entries.clone();
        for (&(r, c), v) in &rhs.entries {
            out.entries.insert((r, c + self.cols), v.clone());
        }
        out
    }
}

type SparseRow<T> = Vec<(usize, T)>;

/// A connected block of the incidence graph, in global indices (both sorted).
struct Block {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn blocks<T: Field>(m: &OperatorMatrix<T>) -> Vec<Block> {
    let n = m.cols;
    let mut parent: Vec<usize> = (0..n + m.rows).collect();
    for &(r, c) in m.entries.keys() {
        let a = find(&mut parent, c);
        let b = find(&mut parent, n + r);
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut by_root: BTreeMap<usize, Block> = BTreeMap::new();
    let mut touched_rows = vec![false; m.rows];
    let mut touched_cols = vec![false; n];
    for &(r, c) in m.entries.keys() {
        touched_rows[r] = true;
        touched_cols[c] = true;
    }
    for (c, _) in touched_cols.iter().enumerate().filter(|(_, &t)| t) {
        let root = find(&mut parent, c);
        by_root.entry(root).or_insert_with(|| Block { rows: vec![], cols: vec![] }).cols.push(c);
    }
    for (r, _) in touched_rows.iter().enumerate().filter(|(_, &t)| t) {
        let root = find(&mut parent, n + r);
        by_root.get_mut(&root).expect("row without column").rows.push(r);
    }
    by_root.into_values().collect()
}

/// Row echelon form of one block with `pivotable` leading columns; columns at
/// or beyond `pivotable` are right-hand sides. Pivot rows are normalized.
struct Echelon<T> {
    pivots: Vec<(usize, SparseRow<T>)>,
    leftover: Vec<SparseRow<T>>,
}

fn entry_at<T>(row: &SparseRow<T>, c: usize) -> Option<&T> {
    row.binary_search_by_key(&c, |(j, _)| *j).ok().map(|k| &row[k].1)
}

/// `row - f * pivot`, dropping cancelled entries.
fn axpy<T: Field>(row: &SparseRow<T>, f: &T, pivot: &SparseRow<T>) -> SparseRow<T> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut a, mut b) = (0, 0);
    while a < row.len() || b < pivot.len() {
        let ca = row.get(a).map_or(usize::MAX, |e| e.0);
        let cb = pivot.get(b).map_or(usize::MAX, |e| e.0);
        if ca < cb {
            out.push(row[a].clone());
            a += 1;
        } else if cb < ca {
            out.push((cb, -(f.clone() * pivot[b].1.clone())));
            b += 1;
        } else {
            let v = row[a].1.clone() - f.clone() * pivot[b].1.clone();
            if !v.is_zero() {
                out.push((ca, v));
            }
            a += 1;
            b += 1;
        }
    }
    out
}

fn echelon<T: Field>(mut remaining: Vec<SparseRow<T>>, pivotable: usize) -> Echelon<T> {
    let mut pivots = Vec::new();
    for c in 0..pivotable {
        let Some(p) = remaining.iter().position(|row| entry_at(row, c).is_some()) else {
            continue;
        };
        let mut prow = remaining.remove(p);
        let inv = T::one() / entry_at(&prow, c).expect("pivot").clone();
        for e in prow.iter_mut() {
            e.1 = e.1.clone() * inv.clone();
        }
        for row in remaining.iter_mut() {
            if let Some(f) = entry_at(row, c).cloned() {
                *row = axpy(row, &f, &prow);
            }
        }
        remaining.retain(|r| !r.is_empty());
        pivots.push((c, prow));
    }
    Echelon { pivots, leftover: remaining }
}

/// Back substitution: pivot unknowns given fixed values of the free unknowns
/// (`x` holds those on entry) and right-hand side column `rhs`.
fn back_substitute<T: Field>(ech: &Echelon<T>, x: &mut [T], rhs: Option<usize>) {
    for (c, row) in ech.pivots.iter().rev() {
        let mut acc = T::zero();
        for (j, v) in row.iter() {
            if *j == *c {
                continue;
            }
            if *j < x.len() {
                if !x[*j].is_zero() {
                    acc = acc - v.clone() * x[*j].clone();
                }
            } else if Some(*j) == rhs {
                acc = acc + v.clone();
            }
        }
        x[*c] = acc;
    }
}

struct LocalSystem<T> {
    block: Block,
    echelon: Echelon<T>,
}

fn local_rows<T: Field>(m: &OperatorMatrix<T>, b: &Block, rhs: &[Vec<T>]) -> Vec<SparseRow<T>> {
    let col_pos: BTreeMap<usize, usize> = b.cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let ncols = b.cols.len();
    b.rows
        .iter()
        .map(|&r| {
            let mut row: SparseRow<T> = m
                .entries
                .range((r, 0)..(r + 1, 0))
                .map(|(&(_, c), v)| (col_pos[&c], v.clone()))
                .collect();
            for (k, rhs_col) in rhs.iter().enumerate() {
                if !rhs_col[r].is_zero() {
                    row.push((ncols + k, rhs_col[r].clone()));
                }
            }
            row
        })
        .collect()
}

fn factor<T: Field>(m: &OperatorMatrix<T>, rhs: &[Vec<T>]) -> Vec<LocalSystem<T>> {
    blocks(m)
        .into_par_iter()
        .map(|block| {
            let rows = local_rows(m, &block, rhs);
            let echelon = echelon(rows, block.cols.len());
            LocalSystem { block, echelon }
        })
        .collect()
}

/// Exact rank.
pub fn rank<T: Field>(m: &OperatorMatrix<T>) -> usize {
    factor(m, &[]).iter().map(|s| s.echelon.pivots.len()).sum()
}

/// An exact basis of `ker m`, one vector per free column, ordered by that column.
/// Each vector has a `1` at its free column and zeros at the other free columns.
pub fn kernel_basis<T: Field>(m: &OperatorMatrix<T>) -> Vec<Vec<T>> {
    let systems = factor(m, &[]);
    let mut touched = vec![false; m.cols];
    let mut out: Vec<(usize, Vec<T>)> = Vec::new();
    for sys in &systems {
        let ncols = sys.block.cols.len();
        let pivot_cols: Vec<usize> = sys.echelon.pivots.iter().map(|(c, _)| *c).collect();
        for &c in &sys.block.cols {
            touched[c] = true;
        }
        for f in (0..ncols).filter(|f| !pivot_cols.contains(f)) {
            let mut x = vec![T::zero(); ncols];
            x[f] = T::one();
            back_substitute(&sys.echelon, &mut x, None);
            let mut v = vec![T::zero(); m.cols];
            for (k, val) in x.into_iter().enumerate() {
                v[sys.block.cols[k]] = val;
            }
            out.push((sys.block.cols[f], v));
        }
    }
    for (c, _) in touched.iter().enumerate().filter(|(_, &t)| !t) {
        let mut v = vec![T::zero(); m.cols];
        v[c] = T::one();
        out.push((c, v));
    }
    out.sort_by_key(|(c, _)| *c);
    out.into_iter().map(|(_, v)| v).collect()
}

/// A particular solution of `m x = b`, or `None` when the system is inconsistent.
pub fn solve<T: Field>(m: &OperatorMatrix<T>, b: &[T]) -> Result<Option<Vec<T>>> {
    Ok(solve_many(m, std::slice::from_ref(&b.to_vec()))?.pop().expect("one rhs"))
}

/// [`solve`] for several right-hand sides sharing one elimination.
pub fn solve_many<T: Field>(m: &OperatorMatrix<T>, rhs: &[Vec<T>]) -> Result<Vec<Option<Vec<T>>>> {
    for b in rhs {
        if b.len() != m.rows {
            return Err(Error::contract(format!(
                "right-hand side has length {} but the matrix has {} rows",
                b.len(),
                m.rows
            )));
        }
    }
    let systems = factor(m, rhs);
    let mut covered = vec![false; m.rows];
    for sys in &systems {
        for &r in &sys.block.rows {
            covered[r] = true;
        }
    }
    let mut out = Vec::with_capacity(rhs.len());
    for (k, b) in rhs.iter().enumerate() {
        // A nonzero entry in a row the matrix never touches cannot be reached.
        if b.iter().enumerate().any(|(r, v)| !covered[r] && !v.is_zero()) {
            out.push(None);
            continue;
        }
        let mut x = vec![T::zero(); m.cols];
        let mut ok = true;
        for sys in &systems {
            let ncols = sys.block.cols.len();
            let tag = ncols + k;
            if sys.echelon.leftover.iter().any(|row| entry_at(row, tag).is_some()) {
                ok = false;
                break;
            }
            let mut local = vec![T::zero(); ncols];
            back_substitute(&sys.echelon, &mut local, Some(tag));
            for (j, val) in local.into_iter().enumerate() {
                x[sys.block.cols[j]] = val;
            }
        }
        out.push(ok.then_some(x));
    }
    Ok(out)
}

/// Rank of a dense matrix by fraction-free (Bareiss) elimination. Independent of
/// the sparse routines above and used to cross-check them.
#[allow(clippy::needless_range_loop)]
pub fn bareiss_rank<T: Field>(dense: &[Vec<T>]) -> usize {
    let mut a: Vec<Vec<T>> = dense.to_vec();
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut prev = T::one();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..m {
            let f = a[i][c].clone();
            for j in c + 1..n {
                let v = (piv.clone() * a[i][j].clone() - f.clone() * a[r][j].clone()) / prev.clone();
                a[i][j] = v;
            }
            a[i][c] = T::zero();
        }
        prev = piv;
        r += 1;
    }
    r
}

/// True when every entry of `v` is zero.
pub fn is_zero_vec<T: Field>(v: &[T]) -> bool {
    v.iter().all(|x| x.is_zero())
}
