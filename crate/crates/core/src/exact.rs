//! Dense exact rational matrices and a fraction-free sparse elimination
//! kernel used for every null-space computation in the crate.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal_constant(&self, c: &Rational) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v == c
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Basis of the right null space; see [`nullspace`].
    pub fn kernel(&self) -> Kernel {
        let rows = (0..self.rows).map(|i| SparseRow::from_rationals(self.row(i))).collect();
        nullspace(rows, self.cols)
    }

    pub fn rank(&self) -> usize {
        self.cols - self.kernel().dim()
    }

    /// Determinant by Gaussian elimination over the rationals.
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m: Vec<Vec<Rational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= &m[c][c];
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let v = &f * &m[c][k];
                    m[r][k] -= v;
                }
            }
        }
        det
    }

    /// Matrix of `self - c·Id`.
    pub fn minus_scalar(&self, c: &Rational) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = m.get(i, i) - c;
            m.set(i, i, v);
        }
        m
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;

    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;

    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Sparse integer row, entries sorted by column, no explicit zeros.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseRow(pub Vec<(usize, BigInt)>);

impl SparseRow {
    /// Clears denominators of a rational row.
    pub fn from_rationals(row: &[Rational]) -> Self {
        let lcm = row
            .iter()
            .filter(|x| !x.is_zero())
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let entries = row
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| (j, x.numer() * (&lcm / x.denom())))
            .collect();
        let mut r = SparseRow(entries);
        r.make_primitive();
        r
    }

    pub fn get(&self, col: usize) -> Option<&BigInt> {
        self.0.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &self.0[i].1)
    }

    fn make_primitive(&mut self) {
        let g = self.0.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
        if !g.is_zero() && !g.is_one() {
            for (_, v) in &mut self.0 {
                *v /= &g;
            }
        }
    }

    /// `self = a·self - b·other`.
    fn combine(&mut self, a: &BigInt, other: &SparseRow, b: &BigInt) {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&self.0, &other.0);
        while i < x.len() || j < y.len() {
            let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
            let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
            if take_x {
                out.push((x[i].0, a * &x[i].1));
                i += 1;
            } else if take_y {
                out.push((y[j].0, -(b * &y[j].1)));
                j += 1;
            } else {
                let v = a * &x[i].1 - b * &y[j].1;
                if !v.is_zero() {
                    out.push((x[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        self.0 = out;
        self.make_primitive();
    }
}

/// Null-space basis in the reduced-echelon convention: vector `i` has a
/// non-zero entry at `free_cols[i]` and zero at every other free column.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub free_cols: Vec<usize>,
    /// Primitive integer vectors.
    pub basis: Vec<Vec<BigInt>>,
}

impl Kernel {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rational_basis(&self) -> Vec<Vec<Rational>> {
        self.basis
            .iter()
            .zip(&self.free_cols)
            .map(|(v, &f)| {
                let d = &v[f];
                v.iter().map(|x| Rational::new(x.clone(), d.clone())).collect()
            })
            .collect()
    }
}

/// Fraction-free Gauss–Jordan elimination over sparse integer rows.
///
/// Every row operation is `r ← p·r − a·pivot` followed by division by the
/// row content, so entries stay integral and small. Pivot rows are chosen
/// shortest-first to limit fill-in.
pub fn nullspace(rows: Vec<SparseRow>, ncols: usize) -> Kernel {
    let mut rows: Vec<SparseRow> = rows.into_iter().filter(|r| !r.0.is_empty()).collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut is_pivot_row = vec![false; rows.len()];
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..ncols {
        let mut best: Option<usize> = None;
        for (ri, r) in rows.iter().enumerate() {
            if is_pivot_row[ri] || r.0.first().map(|(c, _)| *c) != Some(col) {
                continue;
            }
            if best.is_none_or(|b| r.0.len() < rows[b].0.len()) {
                best = Some(ri);
            }
        }
        let Some(pr) = best else { continue };
        is_pivot_row[pr] = true;
        pivot_of_col[col] = Some(pr);
        pivots.push((col, pr));
        let pivot = rows[pr].clone();
        let p = pivot.get(col).unwrap().clone();
        for ri in 0..rows.len() {
            if ri == pr {
                continue;
            }
            let Some(a) = rows[ri].get(col).cloned() else { continue };
            let g = p.gcd(&a);
            let (pp, aa) = (&p / &g, &a / &g);
            rows[ri].combine(&pp, &pivot, &aa);
        }
    }
    // Non-pivot rows must now be empty, with leading entries only at pivots;
    // any residual entry would mean the column loop skipped it.
    debug_assert!(rows.iter().enumerate().all(|(i, r)| is_pivot_row[i] || r.0.is_empty()));

    let free_cols: Vec<usize> = (0..ncols).filter(|&c| pivot_of_col[c].is_none()).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &f in &free_cols {
        // x_f = L, x_pc = -L·r[f]/r[pc] with L the lcm of the pivots involved.
        let involved: Vec<&(usize, usize)> =
            pivots.iter().filter(|(_, pr)| rows[*pr].get(f).is_some()).collect();
        let l = involved
            .iter()
            .fold(BigInt::one(), |acc, (pc, pr)| acc.lcm(rows[*pr].get(*pc).unwrap()));
        let mut v = vec![BigInt::zero(); ncols];
        v[f] = l.clone();
        for (pc, pr) in involved {
            let r = &rows[*pr];
            v[*pc] = -(&l * r.get(f).unwrap()) / r.get(*pc).unwrap();
        }
        let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        for x in &mut v {
            *x /= &g;
        }
        if v[f].is_negative() {
            for x in &mut v {
                *x = -&*x;
            }
        }
        basis.push(v);
    }
    Kernel { free_cols, basis }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    #[test]
    fn determinant_examples() {
        let m = ExactMatrix::from_rows(vec![vec![rat(0), rat(2), rat(1)], vec![rat(1), rat(1), rat(0)], vec![rat(3), rat(0), rat(4)]]);
        assert_eq!(m.determinant(), rat(-11));
        assert_eq!(ExactMatrix::identity(4).scale(&rat(3)).determinant(), rat(81));
        let singular = ExactMatrix::from_rows(vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]]);
        assert!(singular.determinant().is_zero());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 1]]);
        let k = a.kernel();
        assert_eq!(k.dim(), 2);
        assert_eq!(a.rank(), 2);
        for v in k.rational_basis() {
            assert!(a.mul_vec(&v).iter().all(Zero::is_zero));
        }
        // Free columns carry an identity pattern.
        let rb = k.rational_basis();
        for (i, v) in rb.iter().enumerate() {
            for (j, &f) in k.free_cols.iter().enumerate() {
                assert_eq!(v[f], if i == j { rat(1) } else { rat(0) });
            }
        }
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let a = m(&[&[2, 1], &[1, 3]]);
        assert_eq!(a.kernel().dim(), 0);
        let z = ExactMatrix::zeros(2, 3);
        assert_eq!(z.kernel().dim(), 3);
    }

    #[test]
    fn rational_entries() {
        let a = ExactMatrix::from_rows(vec![vec![
            Rational::new(1.into(), 3.into()),
            Rational::new((-1).into(), 2.into()),
        ]]);
        let k = a.kernel();
        assert_eq!(k.basis, vec![vec![BigInt::from(3), BigInt::from(2)]]);
    }

    #[test]
    fn ring_identities() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        let i = ExactMatrix::identity(2);
        assert_eq!(&a * &i, a);
        assert_eq!(&(&a * &b) * &a, &a * &(&b * &a));
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!((&a * &b).transpose(), &b.transpose() * &a.transpose());
    }
}
