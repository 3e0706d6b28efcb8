use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::DetError;
use crate::arith::Rational;

/// Dense matrix over Q, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// Fraction-free row echelon form of an integer matrix.
struct Echelon {
    a: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    swaps: usize,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, DetError> {
        if entries.len() != rows * cols {
            return Err(DetError::Shape(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(QMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, DetError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(DetError::Shape("ragged rows".into()));
        }
        let n = rows.len();
        Ok(QMatrix { rows: n, cols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut out = QMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Rows scaled to integers. Row scaling by nonzero factors keeps rank and
    /// nullspace, and multiplies the determinant by the product of the factors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                scale *= &l;
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        (rows, scale)
    }

    fn echelon(&self) -> (Echelon, BigInt) {
        let (mut a, scale) = self.integer_rows();
        let (m, n) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            if p != r {
                a.swap(p, r);
                swaps += 1;
            }
            let (top, rest) = a.split_at_mut(r + 1);
            let pivot_row = &top[r];
            for row in rest.iter_mut() {
                for j in c + 1..n {
                    row[j] = (&pivot_row[c] * &row[j] - &row[c] * &pivot_row[j]) / &prev;
                }
                row[c] = BigInt::zero();
            }
            prev = pivot_row[c].clone();
            pivots.push(c);
            r += 1;
        }
        (Echelon { a, pivots, swaps }, scale)
    }

    pub fn rank(&self) -> usize {
        self.echelon().0.pivots.len()
    }

    pub fn det(&self) -> Result<Rational, DetError> {
        if self.rows != self.cols {
            return Err(DetError::Shape(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let (ech, scale) = self.echelon();
        if ech.pivots.len() < n {
            return Ok(Rational::zero());
        }
        let mut d = ech.a[n - 1][n - 1].clone();
        if ech.swaps % 2 == 1 {
            d = -d;
        }
        Ok(Rational::new(d, scale).expect("nonzero scale"))
    }

    /// Basis of `{v : A v = 0}`, one vector per non-pivot column in increasing
    /// order; the vector for free column `f` has `v_f = 1` and zeros on the
    /// other free columns.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (ech, _) = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        free.into_iter().map(|f| back_substitute(&ech, self.cols, f)).collect()
    }

    /// The nullspace vector for the first free column, if any.
    pub fn first_null_vector(&self) -> Option<Vec<Rational>> {
        let (ech, _) = self.echelon();
        let f = (0..self.cols).find(|c| !ech.pivots.contains(c))?;
        Some(back_substitute(&ech, self.cols, f))
    }
}

fn back_substitute(ech: &Echelon, cols: usize, free: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); cols];
    v[free] = Rational::one();
    for (k, &p) in ech.pivots.iter().enumerate().rev() {
        let row = &ech.a[k];
        let s: Rational = (p + 1..cols)
            .filter(|&j| !row[j].is_zero() && !v[j].is_zero())
            .map(|j| Rational::from(row[j].clone()) * &v[j])
            .sum();
        v[p] = -s / Rational::from(row[p].clone());
    }
    v
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(Rational::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    /// Oracle: cofactor expansion along the first row.
    fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
        let n = m.len();
        if n == 0 {
            return Rational::one();
        }
        let mut total = Rational::zero();
        for c in 0..n {
            if m[0][c].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = &m[0][c] * cofactor_det(&minor);
            if c % 2 == 0 {
                total += &term;
            } else {
                total -= &term;
            }
        }
        total
    }

    #[test]
    fn small_determinants() {
        let m = QMatrix::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(1, 4), q(1, 5)]]).unwrap();
        assert_eq!(m.det().unwrap(), q(1, 10) - q(1, 12));
        let swap = QMatrix::from_rows(vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]).unwrap();
        assert_eq!(swap.det().unwrap(), q(-1, 1));
        let singular = QMatrix::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]]).unwrap();
        assert_eq!(singular.det().unwrap(), q(0, 1));
        assert_eq!(singular.rank(), 1);
        assert!(QMatrix::zeros(2, 3).det().is_err());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = QMatrix::from_rows(vec![
            vec![q(1, 1), q(2, 1), q(3, 1), q(4, 1)],
            vec![q(2, 1), q(4, 1), q(6, 1), q(8, 1)],
            vec![q(0, 1), q(1, 2), q(1, 1), q(-1, 3)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Rational::is_zero));
        }
        assert_eq!(m.first_null_vector().unwrap(), ns[0]);
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::frac(n, d))
    }

    fn square(max: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
        (1..=max).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(small(), n), n))
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor_expansion(rows in square(5)) {
            let m = QMatrix::from_rows(rows.clone()).unwrap();
            prop_assert_eq!(m.det().unwrap(), cofactor_det(&rows));
        }

        #[test]
        fn rank_nullity(rows in (1usize..5, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec((-2i64..=2).prop_map(Rational::from), c), r))) {
            let m = QMatrix::from_rows(rows).unwrap();
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.len(), m.cols());
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(Rational::is_zero));
            }
        }
    }
}
