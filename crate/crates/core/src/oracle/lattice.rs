use num_traits::ToPrimitive;

use crate::abgroup::{cokernel_data, IntMatrix};
use crate::scenario::{FiniteGroup, TableSubgroup};
use crate::{Error, Result};

/// Integer lattice `ℤ^r` with a left action of a table group, one `r×r`
/// row-major matrix per group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLattice {
    group: FiniteGroup,
    rank: usize,
    action: Vec<Vec<i64>>,
}

/// A quotient lattice together with the maps that exhibit it.
#[derive(Clone, Debug)]
pub struct QuotientLattice {
    pub lattice: GLattice,
    /// `rank × ambient_rank`, G-equivariant, kills the relations.
    pub projection: Vec<Vec<i64>>,
    /// `ambient_rank × rank`, a ℤ-linear section of the projection.
    pub lift: Vec<Vec<i64>>,
}

fn overflow() -> Error {
    Error::Internal("lattice entry exceeds 64 bits".into())
}

pub(crate) fn to_i64(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_i64().ok_or_else(overflow)).collect()).collect()
}

fn mat_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n * n];
    for i in 0..n {
        for l in 0..n {
            let x = a[i * n + l];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[l * n + j];
            }
        }
    }
    out
}

impl GLattice {
    /// Validates that `action` is a homomorphism into `GL_r(ℤ)`.
    pub fn new(group: FiniteGroup, rank: usize, action: Vec<Vec<i64>>) -> Result<Self> {
        let n = group.order();
        if action.len() != n || action.iter().any(|a| a.len() != rank * rank) {
            return Err(Error::Internal("action matrices have the wrong shape".into()));
        }
        let id: Vec<i64> = (0..rank * rank).map(|k| i64::from(k % (rank + 1) == 0)).collect();
        if action[0] != id {
            return Err(Error::Internal("identity does not act trivially".into()));
        }
        for g in 0..n {
            for h in 0..n {
                if mat_mul(&action[g], &action[h], rank) != action[group.mul(g, h)] {
                    return Err(Error::Internal(format!("action is not a homomorphism at ({g},{h})")));
                }
            }
        }
        Ok(GLattice { group, rank, action })
    }

    /// `ℤ` with trivial action.
    pub fn trivial(group: &FiniteGroup) -> Self {
        GLattice { group: group.clone(), rank: 1, action: vec![vec![1]; group.order()] }
    }

    /// Permutation lattice on a finite G-set; `perm[g][x]` is `g·x`.
    pub fn permutation(group: &FiniteGroup, perm: &[Vec<usize>]) -> Result<Self> {
        let r = perm.first().map_or(0, Vec::len);
        let action = perm
            .iter()
            .map(|p| {
                let mut a = vec![0i64; r * r];
                for (x, &y) in p.iter().enumerate() {
                    a[y * r + x] = 1;
                }
                a
            })
            .collect();
        Self::new(group.clone(), r, action)
    }

    /// `ℤ[G/H]` on left cosets.
    pub fn coset_module(group: &FiniteGroup, h: &TableSubgroup) -> Result<Self> {
        Self::permutation(group, &coset_action(group, h))
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Row-major action matrix of element `g`.
    pub fn action(&self, g: usize) -> &[i64] {
        &self.action[g]
    }

    pub fn act(&self, g: usize, v: &[i64]) -> Vec<i64> {
        let r = self.rank;
        let a = &self.action[g];
        (0..r).map(|i| (0..r).map(|j| a[i * r + j] * v[j]).sum()).collect()
    }

    pub fn direct_sum(parts: &[GLattice]) -> Result<Self> {
        let group = parts.first().map(|p| p.group.clone()).ok_or_else(|| Error::Internal("empty direct sum".into()))?;
        let rank: usize = parts.iter().map(|p| p.rank).sum();
        let mut action = vec![vec![0i64; rank * rank]; group.order()];
        for (g, a) in action.iter_mut().enumerate() {
            let mut off = 0;
            for p in parts {
                for i in 0..p.rank {
                    for j in 0..p.rank {
                        a[(off + i) * rank + off + j] = p.action[g][i * p.rank + j];
                    }
                }
                off += p.rank;
            }
        }
        Ok(GLattice { group, rank, action })
    }

    /// Restriction to a subgroup, acting through the subgroup's own table.
    pub fn restrict(&self, sub: &TableSubgroup) -> (GLattice, Vec<usize>) {
        let (d, emb) = self.group.subgroup_group(sub);
        let action = emb.iter().map(|&g| self.action[g].clone()).collect();
        (GLattice { group: d, rank: self.rank, action }, emb)
    }

    /// Inflation along a surjection `G → Q` given by `index_of`.
    pub fn inflate(&self, group: &FiniteGroup, index_of: &[usize]) -> Result<Self> {
        let action = index_of.iter().map(|&q| self.action[q].clone()).collect();
        Self::new(group.clone(), self.rank, action)
    }

    /// Quotient by the G-stable sublattice spanned by `relations`
    /// (vectors of length `rank`). The quotient must be torsion-free.
    pub fn quotient(&self, relations: &[Vec<i64>]) -> Result<QuotientLattice> {
        let n = self.rank;
        let (projection, live) = match unit_pivot_quotient(n, relations)? {
            Some(x) => x,
            None => snf_quotient(n, relations)?,
        };
        let r = projection.len();
        let mut lift = vec![vec![0i64; r]; n];
        for (k, col) in live.iter().enumerate() {
            for (i, row) in lift.iter_mut().enumerate() {
                row[k] = col[i];
            }
        }
        for rel in relations {
            let img = apply(&projection, rel)?;
            if img.iter().any(|&x| x != 0) {
                return Err(Error::Internal("quotient projection does not kill a relation".into()));
            }
        }
        let mut action = Vec::with_capacity(self.group.order());
        for g in 0..self.group.order() {
            let mut a = vec![0i64; r * r];
            for (k, col) in live.iter().enumerate() {
                let img = apply(&projection, &self.act(g, col))?;
                for i in 0..r {
                    a[i * r + k] = img[i];
                }
            }
            action.push(a);
        }
        let lattice = GLattice::new(self.group.clone(), r, action)?;
        Ok(QuotientLattice { lattice, projection, lift })
    }

    /// `Q = (ℤ[G] ⊗ M) / M` for the diagonal embedding `m ↦ Σ_g e_g ⊗ m`.
    /// The middle term is induced, so `H^q(D, Q) ≅ H^{q+1}(D, M)` for every
    /// subgroup `D` and `q ≥ 1`, compatibly with restriction.
    pub fn cosyzygy(&self) -> Result<GLattice> {
        let n = self.group.order();
        let r = self.rank;
        let big = n * r;
        let mut action = Vec::with_capacity(n);
        for h in 0..n {
            let mut a = vec![0i64; big * big];
            for g in 0..n {
                let hg = self.group.mul(h, g);
                for i in 0..r {
                    for j in 0..r {
                        a[(hg * r + i) * big + g * r + j] = self.action[h][i * r + j];
                    }
                }
            }
            action.push(a);
        }
        let ambient = GLattice { group: self.group.clone(), rank: big, action };
        let relations: Vec<Vec<i64>> = (0..r)
            .map(|j| {
                let mut v = vec![0i64; big];
                for g in 0..n {
                    v[g * r + j] = 1;
                }
                v
            })
            .collect();
        Ok(ambient.quotient(&relations)?.lattice)
    }
}

/// `perm[g][c]` = coset index of `g·rep_c`.
pub(crate) fn coset_action(group: &FiniteGroup, h: &TableSubgroup) -> Vec<Vec<usize>> {
    let c = group.cosets(h);
    (0..group.order()).map(|g| c.reps.iter().map(|&x| c.index_of[group.mul(g, x)]).collect()).collect()
}

pub(crate) fn apply(m: &[Vec<i64>], v: &[i64]) -> Result<Vec<i64>> {
    m.iter()
        .map(|row| {
            row.iter().zip(v).try_fold(0i64, |acc, (&a, &b)| {
                a.checked_mul(b).and_then(|p| acc.checked_add(p)).ok_or_else(overflow)
            })
        })
        .collect()
}

type QuotientMaps = (Vec<Vec<i64>>, Vec<Vec<i64>>);

/// Eliminates one coordinate per relation through a ±1 coefficient. Returns
/// the projection rows and the lifted basis vectors, or `None` if some
/// relation has no unit coefficient left.
fn unit_pivot_quotient(n: usize, relations: &[Vec<i64>]) -> Result<Option<QuotientMaps>> {
    // expr[c]: image of e_c in terms of the coordinates still alive.
    let mut expr: Vec<Vec<i64>> = (0..n).map(|c| (0..n).map(|j| i64::from(j == c)).collect()).collect();
    let mut alive = vec![true; n];
    for rel in relations {
        let mut w = vec![0i64; n];
        for (c, &x) in rel.iter().enumerate() {
            if x != 0 {
                for (wj, &e) in w.iter_mut().zip(&expr[c]) {
                    *wj = e.checked_mul(x).and_then(|p| wj.checked_add(p)).ok_or_else(overflow)?;
                }
            }
        }
        if w.iter().all(|&x| x == 0) {
            continue;
        }
        let Some(c) = (0..n).find(|&c| alive[c] && w[c].abs() == 1) else {
            return Ok(None);
        };
        // e_c = -u·Σ_{j≠c} w_j e_j
        let u = w[c];
        let sub: Vec<i64> = (0..n).map(|j| if j == c { 0 } else { -u * w[j] }).collect();
        for e in expr.iter_mut() {
            let k = e[c];
            if k != 0 {
                e[c] = 0;
                for (ej, &s) in e.iter_mut().zip(&sub) {
                    *ej = s.checked_mul(k).and_then(|p| ej.checked_add(p)).ok_or_else(overflow)?;
                }
            }
        }
        alive[c] = false;
    }
    let live: Vec<usize> = (0..n).filter(|&c| alive[c]).collect();
    let projection = live.iter().map(|&j| (0..n).map(|c| expr[c][j]).collect()).collect();
    let basis = live.iter().map(|&j| (0..n).map(|i| i64::from(i == j)).collect()).collect();
    Ok(Some((projection, basis)))
}

fn snf_quotient(n: usize, relations: &[Vec<i64>]) -> Result<QuotientMaps> {
    let rows: Vec<Vec<i64>> = (0..n).map(|i| relations.iter().map(|r| r[i]).collect()).collect();
    let m = if relations.is_empty() { IntMatrix::zeros(n, 0) } else { IntMatrix::from_rows(&rows) };
    let ck = cokernel_data(&m);
    if !ck.torsion.is_empty() {
        return Err(Error::Internal("relation sublattice is not saturated".into()));
    }
    let t = ck.torsion.len();
    let proj = to_i64(&ck.projection)?;
    let lift = to_i64(&ck.lift)?;
    let projection = proj[t..].to_vec();
    let basis = (t..t + ck.free_rank).map(|k| lift.iter().map(|row| row[k]).collect()).collect();
    Ok((projection, basis))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn augmentation_quotient_of_order_two() {
        let g = FiniteGroup::cyclic(2);
        let reg = GLattice::coset_module(&g, &g.trivial_subgroup()).unwrap();
        let q = reg.quotient(&[vec![1, 1]]).unwrap();
        assert_eq!(q.lattice.rank(), 1);
        assert_eq!(q.lattice.action(1), &[-1]);
    }

    #[test]
    fn rejects_non_homomorphism() {
        let g = FiniteGroup::cyclic(3);
        assert!(GLattice::new(g, 1, vec![vec![1], vec![-1], vec![1]]).is_err());
    }

    #[test]
    fn snf_route_matches_unit_route() {
        let g = FiniteGroup::cyclic(2);
        let reg = GLattice::coset_module(&g, &g.trivial_subgroup()).unwrap();
        let (p, b) = snf_quotient(2, &[vec![1, 1]]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(b.len(), 1);
        // Non-saturated relations are refused.
        assert!(reg.quotient(&[vec![2, 2]]).is_err());
    }

    #[test]
    fn cosyzygy_rank() {
        let g = FiniteGroup::symmetric(3);
        let m = GLattice::trivial(&g);
        assert_eq!(m.cosyzygy().unwrap().rank(), 5);
    }
}
