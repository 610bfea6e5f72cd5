use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::group::{cokernel, quotient_by_lattice, AbHom, FinAbGroup, Quotient};
use super::matrix::{hermite_full_rank, integer_kernel, IntMatrix};
use super::{AbError, Elem};

/// Subgroup of a finite abelian group.
///
/// The canonical basis is the lower-triangular Hermite form of
/// `[generators | diag(factors)]`, a full-rank lattice in `ℤ^r`.
#[derive(Clone, Debug)]
pub struct AbSubgroup {
    ambient: FinAbGroup,
    generators: Vec<Elem>,
    basis: IntMatrix,
}

impl PartialEq for AbSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis == other.basis
    }
}

impl Eq for AbSubgroup {}

impl Hash for AbSubgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.basis.hash(state);
    }
}

impl AbSubgroup {
    pub fn new(ambient: FinAbGroup, generators: Vec<Elem>) -> Result<Self, AbError> {
        for g in &generators {
            ambient.check(g)?;
        }
        let generators: Vec<Elem> = generators.iter().map(|g| ambient.reduce(g)).collect();
        let r = ambient.rank();
        let mut cols = generators.clone();
        for (i, d) in ambient.factors().iter().enumerate() {
            let mut e = vec![BigInt::zero(); r];
            e[i] = d.clone();
            cols.push(e);
        }
        let basis = hermite_full_rank(&IntMatrix::from_columns(r, &cols)).expect("relations give full rank");
        Ok(AbSubgroup { ambient, generators, basis })
    }

    pub fn trivial(ambient: &FinAbGroup) -> Self {
        Self::new(ambient.clone(), Vec::new()).expect("no generators")
    }

    pub fn full(ambient: &FinAbGroup) -> Self {
        Self::new(ambient.clone(), ambient.generators()).expect("unit generators")
    }

    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    /// Generators as supplied (reduced).
    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    /// Lower-triangular Hermite basis of the preimage lattice.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Nonzero reduced columns of the canonical basis; a deterministic
    /// generating set independent of the supplied generators.
    pub fn canonical_generators(&self) -> Vec<Elem> {
        (0..self.basis.cols())
            .map(|j| self.ambient.reduce(&self.basis.column(j)))
            .filter(|x| !x.iter().all(Zero::is_zero))
            .collect()
    }

    pub fn order(&self) -> BigInt {
        let det: BigInt = (0..self.basis.rows()).map(|i| self.basis.get(i, i).clone()).product();
        self.ambient.order() / det
    }

    pub fn index(&self) -> BigInt {
        (0..self.basis.rows()).map(|i| self.basis.get(i, i).clone()).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.order().is_one()
    }

    pub fn is_full(&self) -> bool {
        self.index().is_one()
    }

    /// Coefficients `c` with `basis · c = x`, if `x` lies in the lattice.
    fn solve(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let r = self.basis.rows();
        let mut c: Vec<BigInt> = Vec::with_capacity(r);
        for i in 0..r {
            let mut rhs = x[i].clone();
            for (j, cj) in c.iter().enumerate() {
                rhs -= self.basis.get(i, j) * cj;
            }
            let (q, rem) = rhs.div_rem(self.basis.get(i, i));
            if !rem.is_zero() {
                return None;
            }
            c.push(q);
        }
        Some(c)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        assert_eq!(x.len(), self.ambient.rank(), "element length");
        self.solve(x).is_some()
    }

    pub fn is_subgroup_of(&self, other: &AbSubgroup) -> Result<bool, AbError> {
        if self.ambient != other.ambient {
            return Err(AbError::AmbientMismatch);
        }
        Ok(self.canonical_generators().iter().all(|g| other.contains(g)))
    }

    pub fn join(&self, other: &AbSubgroup) -> Result<AbSubgroup, AbError> {
        if self.ambient != other.ambient {
            return Err(AbError::AmbientMismatch);
        }
        let mut gens = self.canonical_generators();
        gens.extend(other.canonical_generators());
        AbSubgroup::new(self.ambient.clone(), gens)
    }

    pub fn intersect(&self, other: &AbSubgroup) -> Result<AbSubgroup, AbError> {
        if self.ambient != other.ambient {
            return Err(AbError::AmbientMismatch);
        }
        // Solve basis_S · u = basis_T · v; the preimage lattices already
        // contain the relations, so u ranges over the intersection.
        let r = self.ambient.rank();
        let neg_t: Vec<Elem> = other.basis.columns().iter().map(|c| c.iter().map(|x| -x).collect()).collect();
        let system = IntMatrix::hstack(&[&self.basis, &IntMatrix::from_columns(r, &neg_t)]);
        let k = integer_kernel(&system);
        let gens: Vec<Elem> = (0..k.cols()).map(|j| self.basis.mul_vec(&k.column(j)[..r])).collect();
        AbSubgroup::new(self.ambient.clone(), gens)
    }

    /// Image of this subgroup under a map out of its ambient group.
    pub fn image_under(&self, f: &AbHom) -> AbSubgroup {
        assert_eq!(f.source(), &self.ambient, "map source must be the ambient group");
        let gens: Vec<Elem> = self.canonical_generators().iter().map(|g| f.apply(g)).collect();
        AbSubgroup::new(f.target().clone(), gens).expect("images lie in the target")
    }

    /// Preimage of this subgroup under a map into its ambient group.
    pub fn preimage_under(&self, f: &AbHom) -> AbSubgroup {
        assert_eq!(f.target(), &self.ambient, "map target must be the ambient group");
        let q = self.quotient();
        q.projection.compose(f).kernel()
    }

    pub fn quotient(&self) -> Quotient {
        quotient_by_lattice(&self.ambient, &self.basis)
    }

    /// The subgroup as an abstract group with its inclusion map.
    pub fn as_group(&self) -> SubgroupGroup {
        let r = self.ambient.rank();
        // Relation lattice {c : basis·c ∈ diag(d)ℤ^r} = basis⁻¹·diag(d)ℤ^r.
        let rel: Vec<Elem> = self
            .ambient
            .factors()
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut e = vec![BigInt::zero(); r];
                e[i] = d.clone();
                self.solve(&e).expect("relations lie in the lattice")
            })
            .collect();
        let c = cokernel(&IntMatrix::from_columns(r, &rel));
        debug_assert_eq!(c.free_rank, 0);
        let t = c.group.rank();
        let rows: Vec<usize> = (0..t).collect();
        let proj = c.projection_matrix().select_rows(&rows);
        let images: Vec<Elem> = (0..t).map(|k| self.basis.mul_vec(&c.lift_matrix().column(k))).collect();
        let inclusion =
            AbHom::from_images(c.group.clone(), self.ambient.clone(), &images).expect("inclusion is well defined");
        SubgroupGroup { group: c.group, inclusion, subgroup: self.clone(), proj }
    }
}

/// Distinct cyclic subgroups `⟨g⟩`, sorted by order then canonical basis.
/// Enumerates the group, so it must be small.
pub fn cyclic_subgroups(g: &FinAbGroup) -> Vec<AbSubgroup> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for x in g.elements() {
        let s = AbSubgroup::new(g.clone(), vec![x]).expect("element of g");
        if seen.insert(s.basis.clone()) {
            out.push(s);
        }
    }
    sort_subgroups(&mut out);
    out
}

/// Every subgroup, by closing the cyclic subgroups under joins.
pub fn all_subgroups(g: &FinAbGroup) -> Vec<AbSubgroup> {
    let cyc = cyclic_subgroups(g);
    let mut seen: std::collections::HashSet<IntMatrix> = cyc.iter().map(|s| s.basis.clone()).collect();
    let mut all = cyc.clone();
    let mut frontier = cyc.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for c in &cyc {
                let j = s.join(c).expect("same ambient");
                if seen.insert(j.basis.clone()) {
                    next.push(j.clone());
                    all.push(j);
                }
            }
        }
        frontier = next;
    }
    sort_subgroups(&mut all);
    all
}

pub(crate) fn sort_subgroups(v: &mut [AbSubgroup]) {
    v.sort_by_cached_key(|s| (s.order(), s.basis.entries().to_vec()));
}

/// A subgroup presented as an abstract group.
#[derive(Clone, Debug)]
pub struct SubgroupGroup {
    pub group: FinAbGroup,
    pub inclusion: AbHom,
    subgroup: AbSubgroup,
    proj: IntMatrix,
}

impl SubgroupGroup {
    /// Coordinates in `group` of an ambient element of the subgroup.
    pub fn coords(&self, x: &[BigInt]) -> Option<Elem> {
        let c = self.subgroup.solve(x)?;
        Some(self.group.reduce(&self.proj.mul_vec(&c)))
    }

    /// Restriction of a subgroup of the ambient group that lies inside this
    /// subgroup, expressed in `group` coordinates.
    pub fn restrict(&self, s: &AbSubgroup) -> Result<AbSubgroup, AbError> {
        let mut gens = Vec::new();
        for g in s.canonical_generators() {
            gens.push(self.coords(&g).ok_or(AbError::NotContained)?);
        }
        AbSubgroup::new(self.group.clone(), gens)
    }
}

#[cfg(test)]
mod tests {
    use super::super::elem;
    use super::*;

    fn v4() -> FinAbGroup {
        FinAbGroup::from_u64(&[2, 2]).unwrap()
    }

    fn sub(a: &FinAbGroup, gens: &[&[i64]]) -> AbSubgroup {
        AbSubgroup::new(a.clone(), gens.iter().map(|g| elem(g)).collect()).unwrap()
    }

    #[test]
    fn join_and_intersect() {
        let a = v4();
        let x = sub(&a, &[&[1, 0]]);
        let y = sub(&a, &[&[0, 1]]);
        assert!(x.intersect(&y).unwrap().is_trivial());
        assert!(x.join(&y).unwrap().is_full());
        assert_eq!(x.intersect(&x).unwrap(), x);
        assert_eq!(x.join(&x).unwrap(), x);
    }

    #[test]
    fn quotient_of_diagonal() {
        let a = v4();
        let d = sub(&a, &[&[1, 1]]);
        let q = d.quotient();
        assert_eq!(q.group, FinAbGroup::from_u64(&[2]).unwrap());
        assert!(q.projection.is_surjective());
        assert_eq!(q.projection.kernel(), d);
    }

    #[test]
    fn canonical_form_ignores_generators() {
        let a = FinAbGroup::from_u64(&[2, 4]).unwrap();
        let s = sub(&a, &[&[1, 2]]);
        let t = sub(&a, &[&[1, 2], &[0, 0], &[1, 2]]);
        assert_eq!(s, t);
        assert_eq!(s.order(), BigInt::from(2));
        assert!(s.contains(&elem(&[1, 2])));
        assert!(!s.contains(&elem(&[1, 0])));
    }

    #[test]
    fn as_group_structure() {
        let a = FinAbGroup::from_u64(&[2, 4]).unwrap();
        let s = sub(&a, &[&[1, 1]]);
        let sg = s.as_group();
        assert_eq!(sg.group, FinAbGroup::from_u64(&[4]).unwrap());
        assert!(sg.inclusion.is_injective());
        assert_eq!(sg.inclusion.image(), s);
        let c = sg.coords(&elem(&[0, 2])).unwrap();
        assert_eq!(sg.inclusion.apply(&c), elem(&[0, 2]));
    }

    #[test]
    fn preimage() {
        let z4 = FinAbGroup::from_u64(&[4]).unwrap();
        let times2 = AbHom::from_images(z4.clone(), z4.clone(), &[elem(&[2])]).unwrap();
        let triv = AbSubgroup::trivial(&z4);
        assert_eq!(triv.preimage_under(&times2).order(), BigInt::from(2));
    }
}
