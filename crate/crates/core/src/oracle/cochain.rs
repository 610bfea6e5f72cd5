use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::abgroup::{cokernel_data, kernel_with_inverse, AbHom, CokernelData, Elem, FinAbGroup, IntMatrix};
use crate::scenario::{FiniteGroup, TableSubgroup};
use crate::{Error, Result};

use super::lattice::GLattice;
use super::Caps;

/// Which cochains are used as coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cochains {
    /// All functions `G^q → M`.
    Full,
    /// Functions vanishing when some argument is the identity; a subcomplex
    /// with the same cohomology.
    Normalized,
}

impl Cochains {
    fn base(self, n: usize) -> usize {
        match self {
            Cochains::Full => n,
            Cochains::Normalized => n - 1,
        }
    }

    fn offset(self) -> usize {
        match self {
            Cochains::Full => 0,
            Cochains::Normalized => 1,
        }
    }

    /// Number of coordinates of `C^q` for a group of order `n` and rank `r`.
    pub fn dim(self, n: usize, r: usize, q: usize) -> usize {
        self.base(n).pow(q as u32) * r
    }

    fn decode(self, n: usize, q: usize, mut t: usize) -> Vec<usize> {
        let b = self.base(n);
        let mut out = vec![0; q];
        for slot in out.iter_mut().rev() {
            *slot = t % b + self.offset();
            t /= b;
        }
        out
    }

    /// Tuple index, or `None` for a normalized tuple containing the identity.
    fn encode(self, n: usize, tuple: &[usize]) -> Option<usize> {
        let b = self.base(n);
        let mut t = 0;
        for &g in tuple {
            if g < self.offset() {
                return None;
            }
            t = t * b + g - self.offset();
        }
        Some(t)
    }
}

/// The inhomogeneous bar differential `C^q(G, M) → C^{q+1}(G, M)`.
/// Coordinates are `tuple_index · rank + component`, tuples in mixed radix
/// with the first argument most significant.
pub fn bar_differential(m: &GLattice, q: usize, layout: Cochains, caps: &Caps) -> Result<IntMatrix> {
    let n = m.group().order();
    let r = m.rank();
    caps.check_cochains(layout.dim(n, r, q + 1))?;
    Ok(IntMatrix::from_rows(&bar_rows(m, q, layout)))
}

fn bar_rows(m: &GLattice, q: usize, layout: Cochains) -> Vec<Vec<i64>> {
    let g = m.group();
    let n = g.order();
    let r = m.rank();
    let cols = layout.dim(n, r, q);
    let tuples = layout.base(n).pow(q as u32 + 1);
    let mut rows = vec![vec![0i64; cols]; tuples * r];
    for t in 0..tuples {
        let x = layout.decode(n, q + 1, t);
        let block = &mut rows[t * r..(t + 1) * r];
        // g_1 · f(g_2, …, g_{q+1})
        if let Some(s) = layout.encode(n, &x[1..]) {
            let a = m.action(x[0]);
            for (i, row) in block.iter_mut().enumerate() {
                for j in 0..r {
                    row[s * r + j] += a[i * r + j];
                }
            }
        }
        // Σ (-1)^i f(…, g_i g_{i+1}, …)
        for i in 0..q {
            let mut y = Vec::with_capacity(q);
            y.extend_from_slice(&x[..i]);
            y.push(g.mul(x[i], x[i + 1]));
            y.extend_from_slice(&x[i + 2..]);
            let sign = if i % 2 == 0 { -1 } else { 1 };
            if let Some(s) = layout.encode(n, &y) {
                for (j, row) in block.iter_mut().enumerate() {
                    row[s * r + j] += sign;
                }
            }
        }
        // (-1)^{q+1} f(g_1, …, g_q)
        if let Some(s) = layout.encode(n, &x[..q]) {
            let sign = if q.is_multiple_of(2) { -1 } else { 1 };
            for (j, row) in block.iter_mut().enumerate() {
                row[s * r + j] += sign;
            }
        }
    }
    rows
}

/// How a cohomology group was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Kernel of the full normalized differential matrix.
    Dense,
    /// Degree one only: cocycles are solved along a spanning tree of the
    /// Cayley graph, so only the cocycle identities on non-tree edges remain.
    Presentation,
}

/// `H^q(G, M)` with cocycle representatives in normalized coordinates.
#[derive(Clone, Debug)]
pub struct Cohomology {
    q: usize,
    order: usize,
    rank: usize,
    group: FinAbGroup,
    free_rank: usize,
    /// Columns span the normalized cocycles.
    z: IntMatrix,
    /// Left inverse of `z` on all cochains.
    p: IntMatrix,
    ck: Option<CokernelData>,
}

impl Cohomology {
    /// Finite part of the cohomology group.
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn degree(&self) -> usize {
        self.q
    }

    /// Length of a normalized cochain vector.
    pub fn cochain_dim(&self) -> usize {
        Cochains::Normalized.dim(self.order, self.rank, self.q)
    }

    /// Class of a normalized cocycle in generator coordinates of [`Self::group`].
    pub fn class_of(&self, cocycle: &[BigInt]) -> Elem {
        let Some(ck) = &self.ck else { return Vec::new() };
        let c = self.p.mul_vec(cocycle);
        let y = ck.projection.mul_vec(&c);
        self.group.reduce(&y[..self.group.rank()])
    }

    /// Normalized cocycle representing the `k`-th generator of [`Self::group`].
    pub fn representative(&self, k: usize) -> Vec<BigInt> {
        let ck = self.ck.as_ref().expect("finite part has generators");
        self.z.mul_vec(&ck.lift.column(k))
    }

    /// Whether a normalized cochain is a cocycle.
    pub fn is_cocycle(&self, f: &[BigInt]) -> bool {
        let c = self.p.mul_vec(f);
        self.z.mul_vec(&c) == f
    }
}

/// `H^q(G, M)` by the default method: presentation in degree one, dense otherwise.
pub fn cohomology(m: &GLattice, q: usize, caps: &Caps) -> Result<Cohomology> {
    let method = if q == 1 { Method::Presentation } else { Method::Dense };
    cohomology_with(m, q, method, caps)
}

pub fn cohomology_with(m: &GLattice, q: usize, method: Method, caps: &Caps) -> Result<Cohomology> {
    let n = m.group().order();
    let r = m.rank();
    caps.check_group(n, q)?;
    caps.check_rank(r)?;
    if q == 0 {
        let d0 = IntMatrix::from_rows(&bar_rows(m, 0, Cochains::Normalized));
        let (z, p) = kernel_of(&d0, r);
        let free_rank = z.cols();
        return Ok(Cohomology { q, order: n, rank: r, group: FinAbGroup::trivial(), free_rank, z, p, ck: None });
    }
    let (z, p, rel) = match method {
        Method::Presentation if q == 1 => presentation_h1(m)?,
        Method::Presentation => return Err(Error::Input("the presentation method only covers degree one".into())),
        Method::Dense => {
            caps.check_cochains(Cochains::Normalized.dim(n, r, q + 1))?;
            let dq = IntMatrix::from_rows(&bar_rows(m, q, Cochains::Normalized));
            let dq1 = IntMatrix::from_rows(&bar_rows(m, q - 1, Cochains::Normalized));
            let (z, p) = kernel_of(&dq, Cochains::Normalized.dim(n, r, q));
            let rel = p.mul(&dq1);
            (z, p, rel)
        }
    };
    let rel = if rel.cols() == 0 { IntMatrix::zeros(rel.rows(), 1) } else { rel };
    let ck = cokernel_data(&rel);
    let group = FinAbGroup::new(ck.torsion.clone())?;
    Ok(Cohomology { q, order: n, rank: r, group, free_rank: ck.free_rank, z, p, ck: Some(ck) })
}

/// Kernel basis with left inverse; handles matrices without rows.
fn kernel_of(m: &IntMatrix, cols: usize) -> (IntMatrix, IntMatrix) {
    if m.rows() == 0 || cols == 0 {
        return (IntMatrix::identity(cols), IntMatrix::identity(cols));
    }
    kernel_with_inverse(m)
}

/// Generators chosen greedily, largest element order first.
pub(crate) fn generating_set(g: &FiniteGroup) -> Vec<usize> {
    let mut elems: Vec<usize> = (1..g.order()).collect();
    elems.sort_by_key(|&x| std::cmp::Reverse(g.element_order(x)));
    let mut gens = Vec::new();
    let mut span = g.trivial_subgroup();
    for x in elems {
        if !span.contains(x) {
            gens.push(x);
            span = g.generate(&gens);
        }
    }
    gens
}

/// Degree-one cocycles `f(xy) = f(x) + x·f(y)`. Values on the chosen
/// generators are the unknowns; every other value follows along a breadth-first
/// spanning tree via `f(xs) = f(x) + x·f(s)`, and the remaining edges give
/// the linear constraints.
fn presentation_h1(m: &GLattice) -> Result<(IntMatrix, IntMatrix, IntMatrix)> {
    let g = m.group();
    let n = g.order();
    let r = m.rank();
    let gens = generating_set(g);
    let k = gens.len();
    let u = k * r;
    let dim = (n - 1) * r;
    if u == 0 {
        let z = IntMatrix::zeros(dim, 0);
        return Ok((z, IntMatrix::zeros(0, dim), IntMatrix::zeros(0, r)));
    }
    let ovf = || Error::Internal("cocycle coefficient exceeds 64 bits".into());
    // f_of[x]: r × u matrix expressing f(x) in the unknowns.
    let mut f_of: Vec<Option<Vec<i64>>> = vec![None; n];
    f_of[0] = Some(vec![0; r * u]);
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut constraints: Vec<Vec<i64>> = Vec::new();
    while let Some(x) = queue.pop_front() {
        let fx = f_of[x].clone().expect("visited");
        let ax = m.action(x);
        for (si, &s) in gens.iter().enumerate() {
            let mut val = fx.clone();
            for i in 0..r {
                for j in 0..r {
                    let c = &mut val[i * u + si * r + j];
                    *c = c.checked_add(ax[i * r + j]).ok_or_else(ovf)?;
                }
            }
            let y = g.mul(x, s);
            match &f_of[y] {
                None => {
                    f_of[y] = Some(val);
                    queue.push_back(y);
                }
                Some(fy) => {
                    for i in 0..r {
                        let row: Vec<i64> =
                            (0..u).map(|c| fy[i * u + c].checked_sub(val[i * u + c]).ok_or_else(ovf)).collect::<Result<_>>()?;
                        if row.iter().any(|&v| v != 0) {
                            constraints.push(row);
                        }
                    }
                }
            }
        }
    }
    let (zu, pu) = if constraints.is_empty() {
        (IntMatrix::identity(u), IntMatrix::identity(u))
    } else {
        kernel_with_inverse(&IntMatrix::from_rows(&constraints))
    };
    let mut stacked = Vec::with_capacity(dim);
    for fx in f_of.iter().skip(1) {
        let fx = fx.as_ref().expect("generators span the group");
        for i in 0..r {
            stacked.push(fx[i * u..(i + 1) * u].to_vec());
        }
    }
    let z = IntMatrix::from_rows(&stacked).mul(&zu);
    // Values at generator s sit in normalized block s - 1.
    let mut p = IntMatrix::zeros(zu.cols(), dim);
    for row in 0..zu.cols() {
        for (si, &s) in gens.iter().enumerate() {
            for j in 0..r {
                p.set(row, (s - 1) * r + j, pu.get(row, si * r + j).clone());
            }
        }
    }
    // Coboundaries: f(s) = (s - 1)·m.
    let mut bu = vec![vec![0i64; r]; u];
    for (si, &s) in gens.iter().enumerate() {
        let a = m.action(s);
        for i in 0..r {
            for j in 0..r {
                bu[si * r + i][j] = a[i * r + j] - i64::from(i == j);
            }
        }
    }
    let rel = pu.mul(&IntMatrix::from_rows(&bu));
    Ok((z, p, rel))
}

/// Pulls a normalized cochain back along `tuple ↦ (φ(x_1), …, φ(x_q))`,
/// where `phi` maps indices of the source group into the target group.
fn pull_back(
    f: &[BigInt],
    q: usize,
    r: usize,
    target_order: usize,
    source_order: usize,
    phi: &[usize],
) -> Vec<BigInt> {
    let layout = Cochains::Normalized;
    let tuples = layout.base(source_order).pow(q as u32);
    let mut out = vec![BigInt::zero(); tuples * r];
    for t in 0..tuples {
        let x: Vec<usize> = layout.decode(source_order, q, t).into_iter().map(|i| phi[i]).collect();
        if let Some(s) = layout.encode(target_order, &x) {
            out[t * r..(t + 1) * r].clone_from_slice(&f[s * r..(s + 1) * r]);
        }
    }
    out
}

/// Restriction `H^q(G, M) → H^q(D, M)` for a subgroup `D`, with the target
/// cohomology computed by the default method.
pub fn restriction(m: &GLattice, h: &Cohomology, sub: &TableSubgroup, caps: &Caps) -> Result<(Cohomology, AbHom)> {
    let g = m.group();
    if sub.elements().first() != Some(&0) || !g.generate(sub.elements()).eq(sub) {
        return Err(Error::Input("restriction target is not a subgroup".into()));
    }
    if h.q == 0 {
        return Err(Error::Input("restriction is implemented for degrees q >= 1".into()));
    }
    let (md, emb) = m.restrict(sub);
    let hd = cohomology(&md, h.q, caps)?;
    let map = restriction_to(h, &hd, g.order(), &emb)?;
    Ok((hd, map))
}

pub(crate) fn restriction_to(h: &Cohomology, hd: &Cohomology, order: usize, emb: &[usize]) -> Result<AbHom> {
    let images: Vec<Elem> = (0..h.group.rank())
        .map(|k| hd.class_of(&pull_back(&h.representative(k), h.q, h.rank, order, emb.len(), emb)))
        .collect();
    Ok(AbHom::from_images(h.group.clone(), hd.group.clone(), &images)?)
}

/// Inflation `H^q(G/N, M) → H^q(G, M)` along `index_of: G → G/N`.
pub fn inflation(hq: &Cohomology, hg: &Cohomology, index_of: &[usize]) -> Result<AbHom> {
    let images: Vec<Elem> = (0..hq.group.rank())
        .map(|k| hg.class_of(&pull_back(&hq.representative(k), hq.q, hq.rank, hq.order, index_of.len(), index_of)))
        .collect();
    Ok(AbHom::from_images(hq.group.clone(), hg.group.clone(), &images)?)
}

/// Invariant factors of a finite group as `u64`, for comparisons in tests and records.
pub(crate) fn factors(g: &FinAbGroup) -> Vec<u64> {
    g.factors().iter().map(|d| d.to_u64().expect("small factor")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    fn h(m: &GLattice, q: usize) -> Vec<u64> {
        factors(cohomology(m, q, &caps()).unwrap().group())
    }

    #[test]
    fn d0_trivial_action_is_zero() {
        let g = FiniteGroup::cyclic(3);
        let d = bar_differential(&GLattice::trivial(&g), 0, Cochains::Full, &caps()).unwrap();
        assert_eq!((d.rows(), d.cols()), (3, 1));
        assert!(d.is_zero());
    }

    #[test]
    fn d_squared_vanishes() {
        let s3 = FiniteGroup::symmetric(3);
        let z = GLattice::trivial(&s3);
        for layout in [Cochains::Full, Cochains::Normalized] {
            for q in 0..2 {
                let a = bar_differential(&z, q, layout, &caps()).unwrap();
                let b = bar_differential(&z, q + 1, layout, &caps()).unwrap();
                assert!(b.mul(&a).is_zero(), "q = {q}");
            }
        }
        let c4 = FiniteGroup::cyclic(4);
        let reg = GLattice::coset_module(&c4, &c4.trivial_subgroup()).unwrap();
        let a = bar_differential(&reg, 1, Cochains::Full, &caps()).unwrap();
        let b = bar_differential(&reg, 2, Cochains::Full, &caps()).unwrap();
        assert!(b.mul(&a).is_zero());
    }

    #[test]
    fn cyclic_periodicity() {
        for n in 2..=6 {
            let g = FiniteGroup::cyclic(n);
            let z = GLattice::trivial(&g);
            assert_eq!(h(&z, 1), Vec::<u64>::new());
            assert_eq!(h(&z, 2), vec![n as u64]);
            assert_eq!(h(&z, 3), Vec::<u64>::new());
            assert_eq!(cohomology(&z, 0, &caps()).unwrap().free_rank(), 1);
        }
    }

    #[test]
    fn klein_four_integral_cohomology() {
        let (g, _) = FiniteGroup::from_abelian(&FinAbGroup::from_u64(&[2, 2]).unwrap());
        let z = GLattice::trivial(&g);
        assert_eq!(h(&z, 2), vec![2, 2]);
        assert_eq!(h(&z, 3), vec![2]);
    }

    #[test]
    fn presentation_matches_dense() {
        let groups = [FiniteGroup::cyclic(4), FiniteGroup::symmetric(3), FiniteGroup::dihedral(4)];
        for g in &groups {
            for sub in g.all_subgroups() {
                let perm = GLattice::coset_module(g, &sub).unwrap();
                let aug = perm.quotient(&[vec![1; perm.rank()]]).unwrap().lattice;
                for m in [&perm, &aug] {
                    let a = cohomology_with(m, 1, Method::Presentation, &caps()).unwrap();
                    let b = cohomology_with(m, 1, Method::Dense, &caps()).unwrap();
                    assert_eq!(a.group(), b.group());
                    for k in 0..a.group().rank() {
                        let f = a.representative(k);
                        assert!(b.is_cocycle(&f));
                    }
                }
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let (g, _) = FiniteGroup::from_abelian(&FinAbGroup::from_u64(&[2, 2]).unwrap());
        let z = GLattice::trivial(&g);
        let h2 = cohomology(&z, 2, &caps()).unwrap();
        let (_, id) = restriction(&z, &h2, &g.whole(), &caps()).unwrap();
        assert!(id.is_injective() && id.is_surjective());
        let (_, zero) = restriction(&z, &h2, &g.trivial_subgroup(), &caps()).unwrap();
        assert!(zero.image().is_trivial());
        let h3 = cohomology(&z, 3, &caps()).unwrap();
        for d in g.cyclic_subgroups() {
            let (hd, map) = restriction(&z, &h3, &d, &caps()).unwrap();
            assert!(hd.group().is_trivial());
            assert!(map.image().is_trivial());
        }
        assert!(restriction(&z, &h2, &TableSubgroup::from_elements(vec![0, 1, 2]), &caps()).is_err());
    }

    #[test]
    fn induced_module_is_acyclic() {
        for g in [FiniteGroup::cyclic(4), FiniteGroup::symmetric(3)] {
            let reg = GLattice::coset_module(&g, &g.trivial_subgroup()).unwrap();
            for q in 1..=2 {
                assert!(cohomology(&reg, q, &caps()).unwrap().group().is_trivial());
            }
        }
    }

    #[test]
    fn dimension_shift() {
        let (g, _) = FiniteGroup::from_abelian(&FinAbGroup::from_u64(&[2, 2]).unwrap());
        let z = GLattice::trivial(&g);
        let q = z.cosyzygy().unwrap();
        assert_eq!(h(&q, 1), h(&z, 2));
        assert_eq!(h(&q, 2), h(&z, 3));
    }
}
