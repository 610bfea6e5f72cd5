//! Integer elimination kernels shared by the public matrix routines.
//!
//! Every kernel is generic over [`Coeff`]. Callers first try `i128` with
//! checked arithmetic and rerun on `BigInt` when an intermediate overflows,
//! so results are always exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) type Res<T> = Result<T, Overflow>;

pub(crate) trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn zero_c() -> Self;
    fn one_c() -> Self;
    fn is_zero_c(&self) -> bool;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn add_c(&self, o: &Self) -> Res<Self>;
    fn sub_c(&self, o: &Self) -> Res<Self>;
    fn mul_c(&self, o: &Self) -> Res<Self>;
    fn neg_c(&self) -> Res<Self>;
    fn is_neg(&self) -> bool;
    /// Compares absolute values.
    fn abs_lt(&self, o: &Self) -> bool;
    /// Floor division; `o` is nonzero.
    fn div_floor(&self, o: &Self) -> Res<Self>;
    fn is_multiple_of(&self, o: &Self) -> bool;
}

impl Coeff for i128 {
    fn zero_c() -> Self {
        0
    }
    fn one_c() -> Self {
        1
    }
    fn is_zero_c(&self) -> bool {
        *self == 0
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        // Keep headroom so negation and small multiples never wrap silently.
        b.to_i128().filter(|v| v.unsigned_abs() < (1u128 << 120))
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn add_c(&self, o: &Self) -> Res<Self> {
        self.checked_add(*o).ok_or(Overflow)
    }
    fn sub_c(&self, o: &Self) -> Res<Self> {
        self.checked_sub(*o).ok_or(Overflow)
    }
    fn mul_c(&self, o: &Self) -> Res<Self> {
        self.checked_mul(*o).ok_or(Overflow)
    }
    fn neg_c(&self) -> Res<Self> {
        self.checked_neg().ok_or(Overflow)
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.unsigned_abs() < o.unsigned_abs()
    }
    fn div_floor(&self, o: &Self) -> Res<Self> {
        if *o == -1 {
            return self.neg_c();
        }
        Ok(Integer::div_floor(self, o))
    }
    fn is_multiple_of(&self, o: &Self) -> bool {
        if *o == 0 {
            *self == 0
        } else {
            self % o == 0
        }
    }
}

impl Coeff for BigInt {
    fn zero_c() -> Self {
        Zero::zero()
    }
    fn one_c() -> Self {
        One::one()
    }
    fn is_zero_c(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add_c(&self, o: &Self) -> Res<Self> {
        Ok(self + o)
    }
    fn sub_c(&self, o: &Self) -> Res<Self> {
        Ok(self - o)
    }
    fn mul_c(&self, o: &Self) -> Res<Self> {
        Ok(self * o)
    }
    fn neg_c(&self) -> Res<Self> {
        Ok(-self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.magnitude() < o.magnitude()
    }
    fn div_floor(&self, o: &Self) -> Res<Self> {
        Ok(Integer::div_floor(self, o))
    }
    fn is_multiple_of(&self, o: &Self) -> bool {
        if Zero::is_zero(o) {
            Zero::is_zero(self)
        } else {
            Zero::is_zero(&(self % o))
        }
    }
}

/// Runs `fast` on `i128` data and falls back to `BigInt` on overflow.
pub(crate) fn exact<T>(fast: impl FnOnce() -> Res<T>, slow: impl FnOnce() -> Res<T>) -> T {
    match fast() {
        Ok(v) => v,
        Err(Overflow) => slow().expect("BigInt arithmetic cannot overflow"),
    }
}

/// Dense matrix stored as a vector of columns.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Cols<C> {
    pub rows: usize,
    pub cols: Vec<Vec<C>>,
}

impl<C: Coeff> Cols<C> {
    pub fn zeros(rows: usize, ncols: usize) -> Self {
        Cols { rows, cols: vec![vec![C::zero_c(); rows]; ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.cols[i][i] = C::one_c();
        }
        m
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn from_big(rows: usize, cols: &[Vec<BigInt>]) -> Option<Self> {
        let mut out = Vec::with_capacity(cols.len());
        for c in cols {
            let mut col = Vec::with_capacity(rows);
            for x in c {
                col.push(C::from_big(x)?);
            }
            out.push(col);
        }
        Some(Cols { rows, cols: out })
    }

}

/// `dst -= q * src` on the index range `from..`.
fn axpy<C: Coeff>(dst: &mut [C], src: &[C], q: &C, from: usize) -> Res<()> {
    for k in from..dst.len() {
        if !src[k].is_zero_c() {
            dst[k] = dst[k].sub_c(&q.mul_c(&src[k])?)?;
        }
    }
    Ok(())
}

fn two_cols<C>(v: &mut [Vec<C>], a: usize, b: usize) -> (&mut Vec<C>, &mut Vec<C>) {
    assert_ne!(a, b);
    if a < b {
        let (x, y) = v.split_at_mut(b);
        (&mut x[a], &mut y[0])
    } else {
        let (x, y) = v.split_at_mut(a);
        (&mut y[0], &mut x[b])
    }
}

/// Result of column echelon reduction `A·V = E`.
pub(crate) struct Echelon<C> {
    pub rank: usize,
    pub e: Cols<C>,
    pub v: Cols<C>,
    /// Rows of `V⁻¹`, present when requested.
    pub v_inv_rows: Option<Vec<Vec<C>>>,
}

/// Column echelon form by unimodular column operations.
///
/// The first `rank` columns of the result are nonzero with strictly
/// increasing pivot rows; the remaining columns are zero, so the matching
/// columns of `V` span the integer kernel of `A`.
pub(crate) fn column_echelon<C: Coeff>(mut a: Cols<C>, want_v: bool, want_inv: bool) -> Res<Echelon<C>> {
    let n = a.ncols();
    let m = a.rows;
    let mut v = if want_v { Cols::identity(n) } else { Cols::zeros(0, 0) };
    let mut vinv: Option<Vec<Vec<C>>> = if want_inv { Some(Cols::<C>::identity(n).cols) } else { None };
    let mut rank = 0;
    for i in 0..m {
        if rank == n {
            break;
        }
        loop {
            // Smallest nonzero entry of row i among the free columns.
            let mut best: Option<usize> = None;
            for j in rank..n {
                let x = &a.cols[j][i];
                if !x.is_zero_c() && best.is_none_or(|b| x.abs_lt(&a.cols[b][i])) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            if b != rank {
                a.cols.swap(b, rank);
                if want_v {
                    v.cols.swap(b, rank);
                }
                if let Some(w) = vinv.as_mut() {
                    w.swap(b, rank);
                }
            }
            let mut clean = true;
            for j in rank + 1..n {
                if a.cols[j][i].is_zero_c() {
                    continue;
                }
                let q = a.cols[j][i].div_floor(&a.cols[rank][i])?;
                if !q.is_zero_c() {
                    let (dst, src) = two_cols(&mut a.cols, j, rank);
                    axpy(dst, src, &q, i)?;
                    if want_v {
                        let (dst, src) = two_cols(&mut v.cols, j, rank);
                        axpy(dst, src, &q, 0)?;
                    }
                    if let Some(w) = vinv.as_mut() {
                        // Inverse of col_j -= q col_r is row_r += q row_j.
                        let (dst, src) = two_cols(w, rank, j);
                        let nq = q.neg_c()?;
                        axpy(dst, src, &nq, 0)?;
                    }
                }
                if !a.cols[j][i].is_zero_c() {
                    clean = false;
                }
            }
            if clean {
                rank += 1;
                break;
            }
        }
    }
    Ok(Echelon { rank, e: a, v, v_inv_rows: vinv })
}

/// Lower-triangular column Hermite form of a full-row-rank matrix.
///
/// Returns `None` if the columns do not span a full-rank lattice.
pub(crate) fn column_hermite<C: Coeff>(a: Cols<C>) -> Res<Option<Cols<C>>> {
    let r = a.rows;
    let ech = column_echelon(a, false, false)?;
    if ech.rank < r {
        return Ok(None);
    }
    let mut h = Cols { rows: r, cols: ech.e.cols[..r].to_vec() };
    for i in 0..r {
        if h.cols[i][i].is_neg() {
            for k in i..r {
                h.cols[i][k] = h.cols[i][k].neg_c()?;
            }
        }
        for j in 0..i {
            let q = h.cols[j][i].div_floor(&h.cols[i][i])?;
            if !q.is_zero_c() {
                let (dst, src) = two_cols(&mut h.cols, j, i);
                axpy(dst, src, &q, i)?;
            }
        }
    }
    Ok(Some(h))
}

/// Row-major dense matrix used by the Smith normal form.
#[derive(Clone, Debug)]
pub(crate) struct Rows<C> {
    pub ncols: usize,
    pub rows: Vec<Vec<C>>,
}

impl<C: Coeff> Rows<C> {
    pub fn identity(n: usize) -> Self {
        let mut rows = vec![vec![C::zero_c(); n]; n];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = C::one_c();
        }
        Rows { ncols: n, rows }
    }
}

/// Which transforms [`smith`] should accumulate.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Want {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
}

pub(crate) struct Smith<C> {
    pub diag: Vec<C>,
    pub u: Option<Rows<C>>,
    /// Stored as columns.
    pub u_inv: Option<Vec<Vec<C>>>,
    /// Stored as columns.
    pub v: Option<Vec<Vec<C>>>,
}

struct SmithState<C> {
    a: Rows<C>,
    u: Option<Rows<C>>,
    u_inv: Option<Vec<Vec<C>>>,
    v: Option<Vec<Vec<C>>>,
}

impl<C: Coeff> SmithState<C> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.rows.swap(i, j);
        if let Some(u) = self.u.as_mut() {
            u.rows.swap(i, j);
        }
        if let Some(w) = self.u_inv.as_mut() {
            w.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in self.a.rows.iter_mut() {
            r.swap(i, j);
        }
        if let Some(v) = self.v.as_mut() {
            v.swap(i, j);
        }
    }

    /// row_i -= q row_t
    fn row_op(&mut self, i: usize, t: usize, q: &C) -> Res<()> {
        let (dst, src) = two_cols(&mut self.a.rows, i, t);
        axpy(dst, src, q, 0)?;
        if let Some(u) = self.u.as_mut() {
            let (dst, src) = two_cols(&mut u.rows, i, t);
            axpy(dst, src, q, 0)?;
        }
        if let Some(w) = self.u_inv.as_mut() {
            let (dst, src) = two_cols(w, t, i);
            axpy(dst, src, &q.neg_c()?, 0)?;
        }
        Ok(())
    }

    /// col_j -= q col_t
    fn col_op(&mut self, j: usize, t: usize, q: &C) -> Res<()> {
        for r in self.a.rows.iter_mut() {
            if !r[t].is_zero_c() {
                r[j] = r[j].sub_c(&q.mul_c(&r[t])?)?;
            }
        }
        if let Some(v) = self.v.as_mut() {
            let (dst, src) = two_cols(v, j, t);
            axpy(dst, src, q, 0)?;
        }
        Ok(())
    }

    fn negate_row(&mut self, t: usize) -> Res<()> {
        for x in self.a.rows[t].iter_mut() {
            *x = x.neg_c()?;
        }
        if let Some(u) = self.u.as_mut() {
            for x in u.rows[t].iter_mut() {
                *x = x.neg_c()?;
            }
        }
        if let Some(w) = self.u_inv.as_mut() {
            for x in w[t].iter_mut() {
                *x = x.neg_c()?;
            }
        }
        Ok(())
    }
}

/// Smith normal form `U·A·V = D` with a nonnegative divisibility chain.
pub(crate) fn smith<C: Coeff>(a: Rows<C>, want: Want) -> Res<Smith<C>> {
    let m = a.rows.len();
    let n = a.ncols;
    let mut st = SmithState {
        a,
        u: want.u.then(|| Rows::identity(m)),
        u_inv: want.u_inv.then(|| Rows::<C>::identity(m).rows),
        v: want.v.then(|| Rows::<C>::identity(n).rows),
    };
    let k = m.min(n);
    let mut diag = Vec::with_capacity(k);
    for t in 0..k {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = &st.a.rows[i][j];
                if !x.is_zero_c() && best.is_none_or(|(bi, bj)| x.abs_lt(&st.a.rows[bi][bj])) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        st.swap_rows(t, bi);
        st.swap_cols(t, bj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if st.a.rows[i][t].is_zero_c() {
                    continue;
                }
                let q = st.a.rows[i][t].div_floor(&st.a.rows[t][t])?;
                st.row_op(i, t, &q)?;
                if !st.a.rows[i][t].is_zero_c() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if st.a.rows[t][j].is_zero_c() {
                    continue;
                }
                let q = st.a.rows[t][j].div_floor(&st.a.rows[t][t])?;
                st.col_op(j, t, &q)?;
                if !st.a.rows[t][j].is_zero_c() {
                    clean = false;
                }
            }
            if !clean {
                // Move the smallest remainder in row/column t to the pivot.
                let mut best = (t, t);
                for i in t + 1..m {
                    let x = &st.a.rows[i][t];
                    if !x.is_zero_c() && x.abs_lt(&st.a.rows[best.0][best.1]) {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    let x = &st.a.rows[t][j];
                    if !x.is_zero_c() && x.abs_lt(&st.a.rows[best.0][best.1]) {
                        best = (t, j);
                    }
                }
                st.swap_rows(t, best.0);
                st.swap_cols(t, best.1);
                continue;
            }
            // Pivot must divide the rest of the submatrix.
            let p = st.a.rows[t][t].clone();
            let mut bad = None;
            'search: for i in t + 1..m {
                for j in t + 1..n {
                    if !st.a.rows[i][j].is_multiple_of(&p) {
                        bad = Some(i);
                        break 'search;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let minus_one = C::one_c().neg_c()?;
                    st.row_op(t, i, &minus_one)?;
                }
                None => break,
            }
        }
        if st.a.rows[t][t].is_neg() {
            st.negate_row(t)?;
        }
        diag.push(st.a.rows[t][t].clone());
    }
    diag.resize(k, C::zero_c());
    Ok(Smith { diag, u: st.u, u_inv: st.u_inv, v: st.v })
}
