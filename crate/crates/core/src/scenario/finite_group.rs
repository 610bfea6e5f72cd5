use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::abgroup::{AbSubgroup, Elem, FinAbGroup};

use super::ScenarioError;

/// Finite group given by its multiplication table; index 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
}

/// Subgroup of a table group as a sorted set of element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableSubgroup {
    elements: Vec<usize>,
}

impl TableSubgroup {
    pub fn from_elements(mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        TableSubgroup { elements }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &TableSubgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }

    pub fn intersect(&self, other: &TableSubgroup) -> TableSubgroup {
        TableSubgroup { elements: self.elements.iter().copied().filter(|&g| other.contains(g)).collect() }
    }
}

/// Left cosets `gH` of a subgroup.
#[derive(Clone, Debug)]
pub struct Cosets {
    /// One representative per coset.
    pub reps: Vec<usize>,
    /// Coset index of every group element.
    pub index_of: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table: identity at index 0, Latin square,
    /// inverses, and associativity (exhaustively for order ≤ 24).
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self, ScenarioError> {
        let n = rows.len();
        let bad = |m: String| Err(ScenarioError::Invalid { field: "group.table".into(), message: m });
        if n == 0 {
            return bad("empty table".into());
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return bad(format!("row {i} has length {} (expected {n})", r.len()));
            }
            let mut seen = vec![false; n];
            for &x in r {
                if x >= n || seen[x] {
                    return bad(format!("row {i} is not a permutation of 0..{n}"));
                }
                seen[x] = true;
            }
            table.extend_from_slice(r);
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for i in 0..n {
                let x = table[i * n + j];
                if seen[x] {
                    return bad(format!("column {j} repeats an entry"));
                }
                seen[x] = true;
            }
        }
        for a in 0..n {
            if table[a] != a || table[a * n] != a {
                return bad("element 0 is not the identity".into());
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a * n + b] == 0) {
                Some(b) if table[b * n + a] == 0 => inv[a] = b,
                _ => return bad(format!("element {a} has no two-sided inverse")),
            }
        }
        if n <= 24 {
            for a in 0..n {
                for b in 0..n {
                    let ab = table[a * n + b];
                    for c in 0..n {
                        if table[ab * n + c] != table[a * n + table[b * n + c]] {
                            return bad(format!("associativity fails at ({a}, {b}, {c})"));
                        }
                    }
                }
            }
        }
        Ok(FiniteGroup { n, table, inv })
    }

    fn from_table_unchecked(n: usize, table: Vec<usize>) -> Self {
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n).find(|&b| table[a * n + b] == 0).expect("group table");
        }
        FiniteGroup { n, table, inv }
    }

    /// Builds a group from a closed set of elements with an explicit product.
    fn from_elements<T: Clone + Eq + std::hash::Hash>(elems: Vec<T>, mul: impl Fn(&T, &T) -> T) -> Self {
        let n = elems.len();
        let index: HashMap<T, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&mul(&elems[a], &elems[b])];
            }
        }
        Self::from_table_unchecked(n, table)
    }

    pub fn cyclic(n: usize) -> Self {
        let elems: Vec<usize> = (0..n).collect();
        Self::from_elements(elems, |a, b| (a + b) % n)
    }

    /// Table of a finite abelian group; element `k` is the mixed-radix
    /// decoding of `k` as produced by [`FinAbGroup::elements`].
    pub fn from_abelian(g: &FinAbGroup) -> (Self, Vec<Elem>) {
        let elems: Vec<Elem> = g.elements().collect();
        let t = Self::from_elements(elems.clone(), |a, b| g.add(a, b));
        (t, elems)
    }

    /// Mixed-radix index of an abelian group element.
    pub fn abelian_index(g: &FinAbGroup, x: &[BigInt]) -> usize {
        let x = g.reduce(x);
        let mut k = 0usize;
        let mut scale = 1usize;
        for (c, d) in x.iter().zip(g.factors_u64()) {
            k += c.to_usize().expect("small coordinate") * scale;
            scale *= d as usize;
        }
        k
    }

    /// Symmetric group on `k` letters (`k ≤ 5`), identity first.
    pub fn symmetric(k: usize) -> Self {
        assert!((1..=5).contains(&k), "symmetric group degree");
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permutations(&mut (0..k).collect(), 0, &mut perms);
        perms.sort();
        // Composition (a·b)(x) = a(b(x)).
        Self::from_elements(perms, |a, b| b.iter().map(|&x| a[x]).collect())
    }

    /// Dihedral group of order `2n`: elements `(r, s)` standing for `ρ^r σ^s`.
    pub fn dihedral(n: usize) -> Self {
        Self::semidirect_cyclic(n, 2, n - 1)
    }

    /// `ℤ/n ⋊ ℤ/m` where the generator of `ℤ/m` acts by multiplication by `r`
    /// (requires `r^m ≡ 1 mod n`). Elements are pairs `(a, b)`.
    pub fn semidirect_cyclic(n: usize, m: usize, r: usize) -> Self {
        let mut rp = 1usize;
        for _ in 0..m {
            rp = rp * r % n.max(1);
        }
        assert!(n == 1 || rp % n == 1 % n, "r^m must be 1 mod n");
        let pow = |b: usize| (0..b).fold(1usize, |acc, _| acc * r % n.max(1));
        let elems: Vec<(usize, usize)> = (0..m).flat_map(|b| (0..n).map(move |a| (a, b))).collect();
        Self::from_elements(elems, |x, y| ((x.0 + pow(x.1) * y.0) % n.max(1), (x.1 + y.1) % m))
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let elems: Vec<(usize, usize)> = (0..b.n).flat_map(|j| (0..a.n).map(move |i| (i, j))).collect();
        Self::from_elements(elems, |x, y| (a.mul(x.0, y.0), b.mul(x.1, y.1)))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// Table rows, e.g. for serialization.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn conjugate_element(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn trivial_subgroup(&self) -> TableSubgroup {
        TableSubgroup { elements: vec![0] }
    }

    pub fn whole(&self) -> TableSubgroup {
        TableSubgroup { elements: (0..self.n).collect() }
    }

    /// Subgroup generated by the given elements.
    pub fn generate(&self, gens: &[usize]) -> TableSubgroup {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier = vec![0usize];
        while let Some(a) = frontier.pop() {
            for &g in gens {
                let b = self.mul(a, g);
                if set.insert(b) {
                    frontier.push(b);
                }
            }
        }
        TableSubgroup { elements: set.into_iter().collect() }
    }

    pub fn join(&self, a: &TableSubgroup, b: &TableSubgroup) -> TableSubgroup {
        let gens: Vec<usize> = a.elements.iter().chain(&b.elements).copied().collect();
        self.generate(&gens)
    }

    pub fn conjugate(&self, s: &TableSubgroup, g: usize) -> TableSubgroup {
        TableSubgroup::from_elements(s.elements.iter().map(|&x| self.conjugate_element(g, x)).collect())
    }

    pub fn are_conjugate(&self, a: &TableSubgroup, b: &TableSubgroup) -> bool {
        a.order() == b.order() && (0..self.n).any(|g| &self.conjugate(a, g) == b)
    }

    pub fn is_normal(&self, s: &TableSubgroup) -> bool {
        (0..self.n).all(|g| s.elements.iter().all(|&x| s.contains(self.conjugate_element(g, x))))
    }

    /// Largest normal subgroup contained in `s`.
    pub fn normal_core(&self, s: &TableSubgroup) -> TableSubgroup {
        let mut core = s.clone();
        for g in 0..self.n {
            core = core.intersect(&self.conjugate(s, g));
        }
        core
    }

    /// Smallest normal subgroup containing the given elements.
    pub fn normal_closure(&self, elems: &[usize]) -> TableSubgroup {
        let conj: Vec<usize> = elems.iter().flat_map(|&x| (0..self.n).map(move |g| (g, x))).map(|(g, x)| self.conjugate_element(g, x)).collect();
        self.generate(&conj)
    }

    pub fn commutator_subgroup(&self) -> TableSubgroup {
        let mut comms = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                comms.push(self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))));
            }
        }
        self.generate(&comms)
    }

    /// Distinct cyclic subgroups, sorted by order then elements.
    pub fn cyclic_subgroups(&self) -> Vec<TableSubgroup> {
        let mut set: BTreeSet<(usize, TableSubgroup)> = BTreeSet::new();
        for g in 0..self.n {
            let s = self.generate(&[g]);
            set.insert((s.order(), s));
        }
        set.into_iter().map(|(_, s)| s).collect()
    }

    /// One representative per conjugacy class from the given list.
    pub fn conjugacy_representatives(&self, subs: &[TableSubgroup]) -> Vec<TableSubgroup> {
        let mut reps: Vec<TableSubgroup> = Vec::new();
        for s in subs {
            if !reps.iter().any(|r| self.are_conjugate(r, s)) {
                reps.push(s.clone());
            }
        }
        reps
    }

    /// All subgroups, by closing the cyclic subgroups under joins.
    pub fn all_subgroups(&self) -> Vec<TableSubgroup> {
        let cyc = self.cyclic_subgroups();
        let mut all: BTreeSet<(usize, TableSubgroup)> = cyc.iter().map(|s| (s.order(), s.clone())).collect();
        let mut frontier: Vec<TableSubgroup> = cyc.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for s in &frontier {
                for c in &cyc {
                    if c.is_subset_of(s) {
                        continue;
                    }
                    let j = self.join(s, c);
                    if all.insert((j.order(), j.clone())) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        all.into_iter().map(|(_, s)| s).collect()
    }

    pub fn cosets(&self, s: &TableSubgroup) -> Cosets {
        let mut index_of = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for g in 0..self.n {
            if index_of[g] != usize::MAX {
                continue;
            }
            let k = reps.len();
            reps.push(g);
            for &h in &s.elements {
                index_of[self.mul(g, h)] = k;
            }
        }
        Cosets { reps, index_of }
    }

    /// The subgroup as a group; `map[i]` is the ambient index of element `i`.
    pub fn subgroup_group(&self, s: &TableSubgroup) -> (FiniteGroup, Vec<usize>) {
        let map = s.elements.clone();
        let g = Self::from_elements(map.clone(), |&a, &b| self.mul(a, b));
        (g, map)
    }

    /// Quotient by a normal subgroup; `proj[g]` is the image of `g`.
    pub fn quotient(&self, normal: &TableSubgroup) -> Result<(FiniteGroup, Vec<usize>), ScenarioError> {
        if !self.is_normal(normal) {
            return Err(ScenarioError::Invalid { field: "subgroup".into(), message: "not normal".into() });
        }
        let c = self.cosets(normal);
        let k = c.reps.len();
        let mut table = vec![0; k * k];
        for a in 0..k {
            for b in 0..k {
                table[a * k + b] = c.index_of[self.mul(c.reps[a], c.reps[b])];
            }
        }
        Ok((Self::from_table_unchecked(k, table), c.index_of))
    }

    /// Elements of an abelian subgroup, for a table built by [`FiniteGroup::from_abelian`].
    pub fn abelian_subgroup(g: &FinAbGroup, s: &AbSubgroup) -> TableSubgroup {
        TableSubgroup::from_elements(
            g.elements().enumerate().filter(|(_, x)| s.contains(x)).map(|(i, _)| i).collect(),
        )
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructions_are_groups() {
        for g in [
            FiniteGroup::cyclic(6),
            FiniteGroup::symmetric(3),
            FiniteGroup::dihedral(4),
            FiniteGroup::semidirect_cyclic(3, 2, 2),
            FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3)),
        ] {
            let checked = FiniteGroup::new(g.rows()).unwrap();
            assert_eq!(checked, g);
        }
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert!(!FiniteGroup::symmetric(3).is_abelian());
        assert!(FiniteGroup::cyclic(6).is_abelian());
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteGroup::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::new(vec![vec![1, 0], vec![0, 1]]).is_err());
        // Latin square without associativity (order 5 loop).
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::new(loop5).is_err());
    }

    #[test]
    fn s3_structure() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.cyclic_subgroups().len(), 5);
        let reps = s3.conjugacy_representatives(&s3.cyclic_subgroups());
        assert_eq!(reps.len(), 3);
        assert_eq!(s3.all_subgroups().len(), 6);
        assert_eq!(s3.commutator_subgroup().order(), 3);
        let a3 = s3.commutator_subgroup();
        let (q, _) = s3.quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
        let c2 = s3.cyclic_subgroups().into_iter().find(|s| s.order() == 2).unwrap();
        assert!(!s3.is_normal(&c2));
        assert_eq!(s3.normal_core(&c2).order(), 1);
        assert_eq!(s3.normal_closure(&c2.elements()[1..]).order(), 6);
        assert_eq!(s3.cosets(&c2).reps.len(), 3);
    }

    #[test]
    fn abelian_conversion() {
        let g = FinAbGroup::from_u64(&[2, 4]).unwrap();
        let (t, elems) = FiniteGroup::from_abelian(&g);
        assert_eq!(t.order(), 8);
        assert!(t.is_abelian());
        for (i, x) in elems.iter().enumerate() {
            assert_eq!(FiniteGroup::abelian_index(&g, x), i);
        }
        assert_eq!(t.all_subgroups().len(), 8);
    }
}
