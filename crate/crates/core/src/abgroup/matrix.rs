use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::elim::{self, Coeff, Cols, Res, Rows, Want};
use super::AbError;

/// Dense integer matrix with arbitrary-precision entries in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, AbError> {
        if entries.len() != rows * cols {
            return Err(AbError::EntryCount { rows, cols, got: entries.len() });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diagonal(d: &[BigInt]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in d.iter().enumerate() {
            m.entries[i * n + i] = x.clone();
        }
        m
    }

    /// Builds a matrix from small integer rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let entries = rows.iter().flat_map(|r| r.iter().map(|&x| BigInt::from(x))).collect();
        IntMatrix { rows: rows.len(), cols, entries }
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m.entries[i * cols + j] = x.clone();
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

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Concatenates matrices with equal row counts side by side.
    pub fn hstack(parts: &[&IntMatrix]) -> IntMatrix {
        let rows = parts.first().map_or(0, |m| m.rows);
        let mut columns = Vec::new();
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            columns.extend(p.columns());
        }
        IntMatrix::from_columns(rows, &columns)
    }

    /// Selects the given rows in order.
    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut entries = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            entries.extend_from_slice(self.row(i));
        }
        IntMatrix { rows: idx.len(), cols: self.cols, entries }
    }

    /// Selects the given columns in order.
    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let columns: Vec<_> = idx.iter().map(|&j| self.column(j)).collect();
        IntMatrix::from_columns(self.rows, &columns)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let fast = || -> Res<IntMatrix> {
            let a = small_entries(&self.entries)?;
            let b = small_entries(&other.entries)?;
            let mut out = vec![0i128; n * m];
            for i in 0..n {
                for l in 0..k {
                    let x = a[i * k + l];
                    if x == 0 {
                        continue;
                    }
                    for j in 0..m {
                        let y = b[l * m + j];
                        if y != 0 {
                            out[i * m + j] = Coeff::add_c(&out[i * m + j], &Coeff::mul_c(&x, &y)?)?;
                        }
                    }
                }
            }
            Ok(IntMatrix { rows: n, cols: m, entries: out.into_iter().map(BigInt::from).collect() })
        };
        elim::exact(fast, || {
            let mut out = vec![BigInt::zero(); n * m];
            for i in 0..n {
                for l in 0..k {
                    let x = &self.entries[i * k + l];
                    if x.is_zero() {
                        continue;
                    }
                    for j in 0..m {
                        let y = &other.entries[l * m + j];
                        if !y.is_zero() {
                            out[i * m + j] += x * y;
                        }
                    }
                }
            }
            Ok(IntMatrix { rows: n, cols: m, entries: out })
        })
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, x.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (a, b) in self.row(i).iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// Determinant by fraction-free elimination. Panics if not square.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    pub(crate) fn to_rows<C: Coeff>(&self) -> Option<Rows<C>> {
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut r = Vec::with_capacity(self.cols);
            for x in self.row(i) {
                r.push(C::from_big(x)?);
            }
            rows.push(r);
        }
        Some(Rows { ncols: self.cols, rows })
    }

    pub(crate) fn to_cols<C: Coeff>(&self) -> Option<Cols<C>> {
        Cols::from_big(self.rows, &self.columns())
    }

    pub(crate) fn from_row_data<C: Coeff>(rows: &[Vec<C>], ncols: usize) -> IntMatrix {
        let entries = rows.iter().flat_map(|r| r.iter().map(Coeff::to_big)).collect();
        IntMatrix { rows: rows.len(), cols: ncols, entries }
    }

    pub(crate) fn from_col_data<C: Coeff>(nrows: usize, cols: &[Vec<C>]) -> IntMatrix {
        let big: Vec<Vec<BigInt>> = cols.iter().map(|c| c.iter().map(Coeff::to_big).collect()).collect();
        IntMatrix::from_columns(nrows, &big)
    }
}

fn small_entries(e: &[BigInt]) -> Res<Vec<i128>> {
    // Entries below 2^60 keep single products far from the i128 limit.
    e.iter()
        .map(|x| x.to_i64().filter(|v| v.unsigned_abs() < (1u64 << 60)).map(i128::from).ok_or(elim::Overflow))
        .collect()
}

/// Smith normal form `U·M·V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Diagonal entries of `D` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Computes the Smith normal form of `m` together with unimodular transforms.
pub fn snf(m: &IntMatrix) -> Snf {
    let want = Want { u: true, v: true, ..Default::default() };
    elim::exact(
        || {
            let a = m.to_rows::<i128>().ok_or(elim::Overflow)?;
            let s = elim::smith(a, want)?;
            Ok(pack_snf(s, m.rows, m.cols))
        },
        || {
            let a = m.to_rows::<BigInt>().expect("BigInt conversion");
            Ok(pack_snf(elim::smith(a, want)?, m.rows, m.cols))
        },
    )
}

fn pack_snf<C: Coeff>(s: elim::Smith<C>, rows: usize, cols: usize) -> Snf {
    let mut d = IntMatrix::zeros(rows, cols);
    for (i, x) in s.diag.iter().enumerate() {
        d.set(i, i, x.to_big());
    }
    let u = IntMatrix::from_row_data(&s.u.expect("u requested").rows, rows);
    let v = IntMatrix::from_col_data(cols, &s.v.expect("v requested"));
    Snf { u, d, v }
}

/// Invariant diagonal of the Smith form, without transforms.
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    elim::exact(
        || {
            let a = m.to_rows::<i128>().ok_or(elim::Overflow)?;
            Ok(elim::smith(a, Want::default())?.diag.iter().map(Coeff::to_big).collect())
        },
        || {
            let a = m.to_rows::<BigInt>().expect("BigInt conversion");
            Ok(elim::smith(a, Want::default())?.diag)
        },
    )
}

/// Basis of the integer kernel `{x : M x = 0}`, as columns.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    kernel_with_inverse(m).0
}

/// Integer kernel basis `Z` together with a left inverse `P` (`P·Z = I`)
/// that is defined on all of `ℤ^cols`.
pub fn kernel_with_inverse(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    fn run<C: Coeff>(a: Cols<C>) -> Res<(IntMatrix, IntMatrix)> {
        let n = a.ncols();
        let e = elim::column_echelon(a, true, true)?;
        let z = IntMatrix::from_col_data(n, &e.v.cols[e.rank..]);
        let p = IntMatrix::from_row_data(&e.v_inv_rows.expect("inverse requested")[e.rank..], n);
        Ok((z, p))
    }
    elim::exact(
        || run(m.to_cols::<i128>().ok_or(elim::Overflow)?),
        || run(m.to_cols::<BigInt>().expect("BigInt conversion")),
    )
}

/// Rank of an integer matrix.
pub fn rank(m: &IntMatrix) -> usize {
    elim::exact(
        || Ok(elim::column_echelon(m.to_cols::<i128>().ok_or(elim::Overflow)?, false, false)?.rank),
        || Ok(elim::column_echelon(m.to_cols::<BigInt>().expect("BigInt conversion"), false, false)?.rank),
    )
}

/// Lower-triangular Hermite basis of the lattice spanned by the columns of a
/// full-row-rank matrix, or `None` when the span has lower rank.
pub fn hermite_full_rank(m: &IntMatrix) -> Option<IntMatrix> {
    let r = m.rows;
    elim::exact(
        || {
            let h = elim::column_hermite(m.to_cols::<i128>().ok_or(elim::Overflow)?)?;
            Ok(h.map(|h| IntMatrix::from_col_data(r, &h.cols)))
        },
        || {
            let h = elim::column_hermite(m.to_cols::<BigInt>().expect("BigInt conversion"))?;
            Ok(h.map(|h| IntMatrix::from_col_data(r, &h.cols)))
        },
    )
}

/// Presentation data for `ℤ^rows / span(columns of M)`.
#[derive(Clone, Debug)]
pub struct CokernelData {
    /// Nontrivial finite invariant factors, ascending along the divisibility chain.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
    /// Maps ambient coordinates to `(torsion coords, free coords)`.
    pub projection: IntMatrix,
    /// Columns are ambient representatives of the torsion then free generators.
    pub lift: IntMatrix,
}

/// Cokernel of `M` via its Smith normal form.
pub fn cokernel_data(m: &IntMatrix) -> CokernelData {
    fn run<C: Coeff>(m: &IntMatrix) -> Res<CokernelData> {
        let r = m.rows;
        let a = m.to_rows::<C>().ok_or(elim::Overflow)?;
        let s = elim::smith(a, Want { u: true, u_inv: true, ..Default::default() })?;
        let u = s.u.expect("u requested").rows;
        let u_inv = s.u_inv.expect("u_inv requested");
        let mut torsion = Vec::new();
        let mut tors_idx = Vec::new();
        let mut free_idx = Vec::new();
        for i in 0..r {
            let d = s.diag.get(i).map(Coeff::to_big).unwrap_or_else(BigInt::zero);
            if d.is_zero() {
                free_idx.push(i);
            } else if !d.is_one() {
                torsion.push(d);
                tors_idx.push(i);
            }
        }
        let order: Vec<usize> = tors_idx.iter().chain(free_idx.iter()).copied().collect();
        let proj_rows: Vec<Vec<C>> = order.iter().map(|&i| u[i].clone()).collect();
        let lift_cols: Vec<Vec<C>> = order.iter().map(|&i| u_inv[i].clone()).collect();
        let mut projection = IntMatrix::from_row_data(&proj_rows, r);
        // Reduce projection rows modulo their factor to keep entries small.
        for (k, d) in torsion.iter().enumerate() {
            for j in 0..r {
                let x = num_integer::Integer::mod_floor(projection.get(k, j), d);
                projection.set(k, j, x);
            }
        }
        let lift = IntMatrix::from_col_data(r, &lift_cols);
        Ok(CokernelData { free_rank: free_idx.len(), torsion, projection, lift })
    }
    elim::exact(|| run::<i128>(m), || run::<BigInt>(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

fn is_unimodular(m: &IntMatrix) -> bool {
    m.rows == m.cols && m.determinant().abs().is_one()
}

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_examples() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = snf(&m);
        assert_eq!(s.diagonal(), b(&[2, 4]));
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        assert!(is_unimodular(&s.u) && is_unimodular(&s.v));

        let id = IntMatrix::identity(3);
        assert_eq!(snf(&id).d, id);
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(snf(&z).d, z);
    }

    #[test]
    fn determinant_values() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(m.determinant(), BigInt::from(-8));
        let m = IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 5]]);
        assert_eq!(m.determinant(), BigInt::from(-5));
    }

    #[test]
    fn cokernel_examples() {
        let c = cokernel_data(&IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(c.torsion, b(&[2]));
        let c = cokernel_data(&IntMatrix::from_rows(&[vec![1, 0], vec![0, 6]]));
        assert_eq!(c.torsion, b(&[6]));
        assert_eq!(c.free_rank, 0);
        let c = cokernel_data(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]));
        assert_eq!(c.torsion, b(&[2, 4]));
        let c = cokernel_data(&IntMatrix::from_rows(&[vec![1, 1]]).transpose());
        assert_eq!((c.torsion.len(), c.free_rank), (0, 1));
    }

    #[test]
    fn kernel_left_inverse() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3, 4], vec![2, 4, 6, 9]]);
        let (z, p) = kernel_with_inverse(&m);
        assert_eq!(z.cols(), 2);
        assert!(m.mul(&z).is_zero());
        assert_eq!(p.mul(&z), IntMatrix::identity(2));
    }

    #[test]
    fn big_entries_fall_back() {
        let big = BigInt::from(1u128 << 100);
        let m = IntMatrix::new(2, 2, vec![big.clone(), BigInt::from(3), BigInt::from(5), big.clone()]).unwrap();
        let s = snf(&m);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        let diag = s.diagonal();
        assert_eq!(diag[0], BigInt::one());
        let expected: BigInt = &big * &big - 15;
        assert_eq!(diag[1], expected.abs());
    }
}
