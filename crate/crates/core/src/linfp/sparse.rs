//! Sparse matrices and exact elimination.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::dense::{dense_rank, Echelon};
use super::field::Field;
use crate::error::{Error, Result};

/// Coordinate-format matrix with canonical entries: sorted row-major, no
/// duplicate positions, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat<E> {
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, E)>,
}

impl<E: Copy + Eq> SparseMat<E> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols, entries: Vec::new() }
    }

    /// Builds a matrix from possibly repeated triplets, summing repeats.
    pub fn from_triplets<F: Field<Elem = E>>(
        field: &F,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, E)>,
    ) -> Self {
        let mut raw: Vec<(u32, u32, E)> = triplets
            .into_iter()
            .map(|(r, c, v)| {
                assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
                (r as u32, c as u32, v)
            })
            .collect();
        raw.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut entries: Vec<(u32, u32, E)> = Vec::with_capacity(raw.len());
        for (r, c, v) in raw {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 = field.add(last.2, v),
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|&(_, _, v)| !field.is_zero(v));
        SparseMat { rows, cols, entries }
    }

    pub fn from_int_triplets<F: Field<Elem = E>>(
        field: &F,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Self {
        Self::from_triplets(field, rows, cols, triplets.into_iter().map(|(r, c, v)| (r, c, field.from_i64(v))))
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        Self::from_triplets(field, n, n, (0..n).map(|i| (i, i, field.one())))
    }

    pub fn from_dense<F: Field<Elem = E>>(field: &F, rows: &[Vec<E>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_triplets(
            field,
            rows.len(),
            cols,
            rows.iter()
                .enumerate()
                .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v))),
        )
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

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, E)> + '_ {
        self.entries.iter().map(|&(r, c, v)| (r as usize, c as usize, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        SparseMat { rows: self.cols, cols: self.rows, entries }
    }

    /// Rows as sparse vectors sorted by column.
    pub fn row_vectors(&self) -> Vec<Vec<(u32, E)>> {
        let mut out = vec![Vec::new(); self.rows];
        for &(r, c, v) in &self.entries {
            out[r as usize].push((c, v));
        }
        out
    }

    pub fn column_vectors(&self) -> Vec<Vec<(u32, E)>> {
        let mut out = vec![Vec::new(); self.cols];
        for &(r, c, v) in &self.entries {
            out[c as usize].push((r, v));
        }
        out
    }

    pub fn to_dense<F: Field<Elem = E>>(&self, field: &F) -> Vec<Vec<E>> {
        let mut out = vec![vec![field.zero(); self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            out[r as usize][c as usize] = v;
        }
        out
    }

    /// Applies a map to every entry, e.g. to permute rows and columns.
    pub fn permuted<F: Field<Elem = E>>(&self, field: &F, row_perm: &[usize], col_perm: &[usize]) -> Self {
        Self::from_triplets(
            field,
            self.rows,
            self.cols,
            self.entries().map(|(r, c, v)| (row_perm[r], col_perm[c], v)),
        )
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, field: &F, x: &[E]) -> Vec<E> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![field.zero(); self.rows];
        for &(r, c, v) in &self.entries {
            out[r as usize] = field.add(out[r as usize], field.mul(v, x[c as usize]));
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn mul<F: Field<Elem = E>>(&self, field: &F, rhs: &SparseMat<E>) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let rhs_rows = rhs.row_vectors();
        let mut triplets = Vec::new();
        for &(r, k, a) in &self.entries {
            for &(c, b) in &rhs_rows[k as usize] {
                triplets.push((r as usize, c as usize, field.mul(a, b)));
            }
        }
        Ok(Self::from_triplets(field, self.rows, rhs.cols, triplets))
    }
}

/// Above this density the elimination switches to dense rows.
const DENSE_THRESHOLD: f64 = 0.3;

/// Sparse echelon basis with Markowitz-style pivot choice.
///
/// Each inserted row is reduced against the stored pivots in insertion order.
/// A stored row never contains the pivot column of an earlier row, so reducing
/// by pivot `t` can only introduce pivot columns of rows inserted after `t`.
struct SparseEchelon<'a, F: Field> {
    field: &'a F,
    col_count: Vec<u32>,
    pivot_time: Vec<Option<u32>>,
    pivot_rows: Vec<(u32, Vec<(u32, F::Elem)>)>,
    acc: Vec<F::Elem>,
    touched: Vec<u32>,
    is_touched: Vec<bool>,
    queued: Vec<bool>,
}

impl<'a, F: Field> SparseEchelon<'a, F> {
    fn new(field: &'a F, cols: usize, col_count: Vec<u32>) -> Self {
        SparseEchelon {
            field,
            col_count,
            pivot_time: vec![None; cols],
            pivot_rows: Vec::new(),
            acc: vec![field.zero(); cols],
            touched: Vec::new(),
            is_touched: vec![false; cols],
            queued: vec![false; cols],
        }
    }

    fn touch(&mut self, c: u32) {
        if !self.is_touched[c as usize] {
            self.is_touched[c as usize] = true;
            self.touched.push(c);
        }
    }

    fn insert(&mut self, row: &[(u32, F::Elem)]) -> bool {
        let f = self.field;
        let mut heap: BinaryHeap<Reverse<(u32, u32)>> = BinaryHeap::new();
        for &(c, v) in row {
            self.acc[c as usize] = v;
            self.touch(c);
            if let Some(t) = self.pivot_time[c as usize] {
                self.queued[c as usize] = true;
                heap.push(Reverse((t, c)));
            }
        }
        while let Some(Reverse((t, c))) = heap.pop() {
            self.queued[c as usize] = false;
            let factor = self.acc[c as usize];
            if f.is_zero(factor) {
                continue;
            }
            let pivot_row = std::mem::take(&mut self.pivot_rows[t as usize].1);
            for &(c2, v) in &pivot_row {
                let cur = self.acc[c2 as usize];
                self.acc[c2 as usize] = f.sub(cur, f.mul(factor, v));
                self.touch(c2);
                if c2 != c && !self.queued[c2 as usize] {
                    if let Some(t2) = self.pivot_time[c2 as usize] {
                        self.queued[c2 as usize] = true;
                        heap.push(Reverse((t2, c2)));
                    }
                }
            }
            self.pivot_rows[t as usize].1 = pivot_row;
        }
        let mut reduced: Vec<(u32, F::Elem)> = Vec::new();
        for &c in &self.touched {
            let v = self.acc[c as usize];
            if !f.is_zero(v) {
                reduced.push((c, v));
            }
            self.acc[c as usize] = f.zero();
            self.is_touched[c as usize] = false;
        }
        self.touched.clear();
        if reduced.is_empty() {
            return false;
        }
        reduced.sort_unstable_by_key(|&(c, _)| c);
        let &(pc, pv) = reduced
            .iter()
            .min_by_key(|&&(c, _)| (self.col_count[c as usize], c))
            .unwrap();
        let inv = f.inv(pv);
        for e in reduced.iter_mut() {
            e.1 = f.mul(e.1, inv);
        }
        let t = self.pivot_rows.len() as u32;
        self.pivot_time[pc as usize] = Some(t);
        self.pivot_rows.push((pc, reduced));
        true
    }
}

/// Rank over the field.
pub fn rank<F: Field>(field: &F, m: &SparseMat<F::Elem>) -> usize {
    if m.is_zero() {
        return 0;
    }
    // eliminate along the shorter side
    let m = if m.rows < m.cols { m.transpose() } else { m.clone() };
    let density = m.nnz() as f64 / (m.rows as f64 * m.cols as f64);
    if density > DENSE_THRESHOLD {
        return dense_rank(field, m.to_dense(field), m.cols);
    }
    let mut col_count = vec![0u32; m.cols];
    for (_, c, _) in m.entries() {
        col_count[c] += 1;
    }
    let mut rows = m.row_vectors();
    rows.sort_by_key(Vec::len);
    let mut ech = SparseEchelon::new(field, m.cols, col_count);
    let mut r = 0;
    for row in rows.iter().filter(|r| !r.is_empty()) {
        if ech.insert(row) {
            r += 1;
            if r == m.cols {
                break;
            }
        }
    }
    r
}

/// Basis of the kernel `{x : M x = 0}` as dense vectors.
pub fn kernel_basis<F: Field>(field: &F, m: &SparseMat<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut ech = Echelon::new(field.clone(), m.cols);
    for row in m.to_dense(field) {
        ech.insert(row);
    }
    ech.null_space()
}

/// `dim ker(d_out) - rank(d_in)` for a two-step complex `d_out . d_in = 0`.
pub fn cohomology_dim<F: Field>(
    field: &F,
    d_in: &SparseMat<F::Elem>,
    d_out: &SparseMat<F::Elem>,
) -> Result<usize> {
    let composite = d_out.mul(field, d_in)?;
    if let Some((_, c, _)) = composite.entries().next() {
        let first_col = composite.entries().map(|(_, c, _)| c).min().unwrap_or(c);
        return Err(Error::NotAComplex { column: first_col });
    }
    let ker = d_out.cols - rank(field, d_out);
    Ok(ker - rank(field, d_in))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linfp::{Fp, Fq};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Straightforward dense Gaussian elimination, independent of the code above.
    fn naive_rank<F: Field>(f: &F, mut a: Vec<Vec<F::Elem>>) -> usize {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            let Some(piv) = (r..rows).find(|&i| !f.is_zero(a[i][c])) else { continue };
            a.swap(r, piv);
            let inv = f.inv(a[r][c]);
            for i in 0..rows {
                if i != r && !f.is_zero(a[i][c]) {
                    let factor = f.mul(a[i][c], inv);
                    for j in 0..cols {
                        let v = f.mul(factor, a[r][j]);
                        a[i][j] = f.sub(a[i][j], v);
                    }
                }
            }
            r += 1;
        }
        r
    }

    fn random_sparse<F: Field>(f: &F, rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> SparseMat<F::Elem> {
        let q = f.order();
        let trip: Vec<_> = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .filter_map(|(r, c)| {
                if rng.random_bool(density) {
                    Some((r, c, f.from_i64(rng.random_range(1..q as i64))))
                } else {
                    None
                }
            })
            .collect();
        SparseMat::from_triplets(f, rows, cols, trip)
    }

    #[test]
    fn zero_and_identity() {
        let f = Fp::new(5).unwrap();
        assert_eq!(rank(&f, &SparseMat::zero(4, 3)), 0);
        assert_eq!(rank(&f, &SparseMat::identity(&f, 6)), 6);
    }

    #[test]
    fn small_f5_example() {
        let f = Fp::new(5).unwrap();
        let m = SparseMat::from_dense(&f, &[vec![1, 2, 3], vec![2, 4, 1], vec![0, 0, 1]]);
        assert_eq!(rank(&f, &m), 2);
        assert_eq!(naive_rank(&f, m.to_dense(&f)), 2);
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        let f = Fp::new(7).unwrap();
        assert!(kernel_basis(&f, &SparseMat::identity(&f, 4)).is_empty());
        let k = kernel_basis(&f, &SparseMat::zero(2, 3));
        assert_eq!(k, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn kernel_of_rank_three_6x4() {
        let f = Fp::new(7).unwrap();
        // rows span a 3-dimensional space
        let m = SparseMat::from_dense(
            &f,
            &[
                vec![1, 0, 2, 3],
                vec![0, 1, 4, 1],
                vec![1, 1, 6, 4],
                vec![0, 0, 1, 5],
                vec![2, 0, 5, 4],
                vec![1, 1, 0, 2],
            ],
        );
        assert_eq!(rank(&f, &m), 3);
        let k = kernel_basis(&f, &m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&f, &k[0]).iter().all(|&x| x == 0));
    }

    #[test]
    fn cohomology_dim_cases() {
        let f = Fp::new(5).unwrap();
        let z = SparseMat::zero(3, 3);
        assert_eq!(cohomology_dim(&f, &z, &z).unwrap(), 3);
        // 0 -> k --id--> k -> 0 is exact
        let id = SparseMat::identity(&f, 1);
        assert_eq!(cohomology_dim(&f, &id, &SparseMat::zero(0, 1)).unwrap(), 0);
        let err = cohomology_dim(&f, &id, &id).unwrap_err();
        assert!(matches!(err, Error::NotAComplex { column: 0 }));
    }

    #[test]
    fn agrees_with_naive_on_random_prime_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2u32, 3, 5, 7, 101] {
            let f = Fp::new(p).unwrap();
            for _ in 0..40 {
                let rows = rng.random_range(1..50);
                let cols = rng.random_range(1..50);
                let density = rng.random_range(0.02..0.6);
                let m = random_sparse(&f, &mut rng, rows, cols, density);
                assert_eq!(rank(&f, &m), naive_rank(&f, m.to_dense(&f)));
            }
        }
    }

    #[test]
    fn agrees_with_naive_on_random_extension_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (p, m) in [(2u32, 2u32), (3, 2), (5, 2)] {
            let f = Fq::new(p, m).unwrap();
            for _ in 0..20 {
                let rows = rng.random_range(1..50);
                let cols = rng.random_range(1..50);
                let mat = random_sparse(&f, &mut rng, rows, cols, 0.15);
                assert_eq!(rank(&f, &mat), naive_rank(&f, mat.to_dense(&f)));
            }
        }
    }

    proptest! {
        #[test]
        fn rank_invariant_under_transpose_and_permutation(
            seed in 0u64..10_000, rows in 1usize..25, cols in 1usize..25,
        ) {
            let f = Fp::new(5).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_sparse(&f, &mut rng, rows, cols, 0.2);
            let r = rank(&f, &m);
            prop_assert_eq!(r, rank(&f, &m.transpose()));
            let mut rp: Vec<usize> = (0..rows).collect();
            let mut cp: Vec<usize> = (0..cols).collect();
            rp.reverse();
            cp.rotate_left(cols / 2);
            prop_assert_eq!(r, rank(&f, &m.permuted(&f, &rp, &cp)));
            prop_assert_eq!(r + kernel_basis(&f, &m).len(), cols);
        }
    }
}
