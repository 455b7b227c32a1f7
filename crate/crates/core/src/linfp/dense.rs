//! Dense row echelon forms. Used for kernels, quotient bases and the
//! fill-heavy tail of sparse elimination.

use super::field::Field;

/// A growing set of vectors kept in reduced row echelon form.
///
/// Inserting a vector reports whether it was independent of the rows already
/// present. The pivot of each stored row is its first nonzero column.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    dim: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
    pivot_of_col: Vec<Option<usize>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, dim: usize) -> Self {
        Echelon {
            field,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_of_col: vec![None; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of_col[col].is_some()
    }

    /// Subtracts the stored rows from `v` so that `v` vanishes on every pivot column.
    pub fn reduce(&self, v: &mut [F::Elem]) {
        let f = &self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if f.is_zero(c) {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row).skip(pc) {
                if !f.is_zero(r) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
    }

    /// Inserts `v`, returning `true` when it enlarged the span.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.dim);
        self.reduce(&mut v);
        let f = self.field.clone();
        let Some(pc) = v.iter().position(|&x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(v[pc]);
        for x in v.iter_mut().skip(pc) {
            *x = f.mul(*x, inv);
        }
        // keep full reduction: clear the new pivot column from older rows
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if f.is_zero(c) {
                continue;
            }
            for (x, &r) in row.iter_mut().zip(&v).skip(pc) {
                *x = f.sub(*x, f.mul(c, r));
            }
        }
        self.pivot_of_col[pc] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| self.field.is_zero(x))
    }

    /// Basis of the orthogonal complement `{x : row . x = 0 for every row}`,
    /// i.e. the kernel of the matrix whose rows are stored here.
    pub fn null_space(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        (0..self.dim)
            .filter(|&c| self.pivot_of_col[c].is_none())
            .map(|free| {
                let mut x = vec![f.zero(); self.dim];
                x[free] = f.one();
                for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                    x[pc] = f.neg(row[free]);
                }
                x
            })
            .collect()
    }
}

/// Rank of a dense row-major matrix.
pub fn dense_rank<F: Field>(field: &F, rows: Vec<Vec<F::Elem>>, cols: usize) -> usize {
    let mut ech = Echelon::new(field.clone(), cols);
    for r in rows {
        ech.insert(r);
        if ech.rank() == cols {
            break;
        }
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linfp::Fp;

    #[test]
    fn null_space_is_annihilated() {
        let f = Fp::new(7).unwrap();
        let mut e = Echelon::new(f, 4);
        e.insert(vec![1, 2, 3, 4]);
        e.insert(vec![0, 1, 1, 1]);
        e.insert(vec![1, 3, 4, 5]); // dependent
        assert_eq!(e.rank(), 2);
        let ns = e.null_space();
        assert_eq!(ns.len(), 2);
        for x in &ns {
            for row in [[1u32, 2, 3, 4], [0, 1, 1, 1]] {
                let dot = row.iter().zip(x).fold(0u32, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert_eq!(dot, 0);
            }
        }
    }
}
