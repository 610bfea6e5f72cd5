use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::matrix::{cokernel_data, integer_kernel, CokernelData, IntMatrix};
use super::subgroup::AbSubgroup;
use super::{AbError, Elem};

/// Finite abelian group `ℤ/d₁ ⊕ … ⊕ ℤ/d_r` in invariant-factor form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FinAbGroup {
    factors: Vec<BigInt>,
}

impl FinAbGroup {
    /// Validates the divisibility chain; factors must all be at least 2.
    pub fn new(factors: Vec<BigInt>) -> Result<Self, AbError> {
        let two = BigInt::from(2);
        let ok = factors.iter().all(|d| *d >= two) && factors.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        if !ok {
            return Err(AbError::InvalidFactors(factors.iter().map(ToString::to_string).collect()));
        }
        Ok(FinAbGroup { factors })
    }

    pub fn from_u64(factors: &[u64]) -> Result<Self, AbError> {
        Self::new(factors.iter().map(|&d| BigInt::from(d)).collect())
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: Vec::new() }
    }

    /// `ℤ/n`; `n = 1` gives the trivial group.
    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        if n == 1 {
            Self::trivial()
        } else {
            FinAbGroup { factors: vec![BigInt::from(n)] }
        }
    }

    /// Normalizes an arbitrary list of cyclic orders (each ≥ 1).
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        cokernel(&IntMatrix::diagonal(orders)).group
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn factors_u64(&self) -> Vec<u64> {
        self.factors.iter().map(|d| d.to_u64().expect("factor exceeds u64")).collect()
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> BigInt {
        self.factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn zero(&self) -> Elem {
        vec![BigInt::zero(); self.rank()]
    }

    /// Unit vectors, one per invariant factor.
    pub fn generators(&self) -> Vec<Elem> {
        (0..self.rank())
            .map(|i| {
                let mut e = self.zero();
                e[i] = BigInt::one();
                e
            })
            .collect()
    }

    pub fn check(&self, x: &[BigInt]) -> Result<(), AbError> {
        if x.len() != self.rank() {
            return Err(AbError::Dimension { expected: self.rank(), got: x.len() });
        }
        Ok(())
    }

    /// Reduces a coordinate vector into canonical range. Panics on length mismatch.
    pub fn reduce(&self, x: &[BigInt]) -> Elem {
        assert_eq!(x.len(), self.rank(), "element length");
        x.iter().zip(&self.factors).map(|(a, d)| a.mod_floor(d)).collect()
    }

    pub fn add(&self, x: &[BigInt], y: &[BigInt]) -> Elem {
        let s: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, k: &BigInt, x: &[BigInt]) -> Elem {
        let s: Vec<BigInt> = x.iter().map(|a| a * k).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, x: &[BigInt]) -> Elem {
        self.scale(&BigInt::from(-1), x)
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.reduce(x).iter().all(Zero::is_zero)
    }

    pub fn element_order(&self, x: &[BigInt]) -> BigInt {
        let x = self.reduce(x);
        let mut ord = BigInt::one();
        for (a, d) in x.iter().zip(&self.factors) {
            let o = d / a.gcd(d);
            ord = ord.lcm(&o);
        }
        ord
    }

    /// All elements in mixed-radix order (first coordinate fastest).
    /// Panics if the order does not fit in `u64`.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let total = self.order().to_u64().expect("group too large to enumerate");
        let radix = self.factors_u64();
        (0..total).map(move |mut k| {
            radix
                .iter()
                .map(|&d| {
                    let c = k % d;
                    k /= d;
                    BigInt::from(c)
                })
                .collect()
        })
    }
}

/// Cokernel `ℤ^rows / span(columns)` with its coordinate maps.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub group: FinAbGroup,
    pub free_rank: usize,
    data: CokernelData,
}

impl Cokernel {
    /// Torsion coordinates (reduced) and free coordinates of an ambient vector.
    pub fn project(&self, x: &[BigInt]) -> (Elem, Vec<BigInt>) {
        let y = self.data.projection.mul_vec(x);
        let t = self.group.rank();
        (self.group.reduce(&y[..t]), y[t..].to_vec())
    }

    /// Rows map ambient coordinates to torsion then free coordinates.
    pub fn projection_matrix(&self) -> &IntMatrix {
        &self.data.projection
    }

    /// Columns are ambient representatives of torsion then free generators.
    pub fn lift_matrix(&self) -> &IntMatrix {
        &self.data.lift
    }
}

/// Cokernel of an integer matrix, in invariant-factor form plus free rank.
pub fn cokernel(m: &IntMatrix) -> Cokernel {
    let data = cokernel_data(m);
    let group = FinAbGroup { factors: data.torsion.clone() };
    Cokernel { group, free_rank: data.free_rank, data }
}

/// Homomorphism between finite abelian groups; column `j` of the matrix is
/// the image of source generator `j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AbHom {
    source: FinAbGroup,
    target: FinAbGroup,
    matrix: IntMatrix,
}

impl AbHom {
    pub fn new(source: FinAbGroup, target: FinAbGroup, matrix: IntMatrix) -> Result<Self, AbError> {
        if matrix.rows() != target.rank() {
            return Err(AbError::Dimension { expected: target.rank(), got: matrix.rows() });
        }
        if matrix.cols() != source.rank() {
            return Err(AbError::Dimension { expected: source.rank(), got: matrix.cols() });
        }
        let images: Vec<Elem> = (0..source.rank()).map(|j| target.reduce(&matrix.column(j))).collect();
        for (j, img) in images.iter().enumerate() {
            if !target.is_zero(&target.scale(&source.factors[j], img)) {
                return Err(AbError::NotWellDefined(j));
            }
        }
        let matrix = IntMatrix::from_columns(target.rank(), &images);
        Ok(AbHom { source, target, matrix })
    }

    /// Builds the map sending generator `j` to `images[j]`.
    pub fn from_images(source: FinAbGroup, target: FinAbGroup, images: &[Elem]) -> Result<Self, AbError> {
        if images.len() != source.rank() {
            return Err(AbError::Dimension { expected: source.rank(), got: images.len() });
        }
        for x in images {
            target.check(x)?;
        }
        let m = IntMatrix::from_columns(target.rank(), images);
        Self::new(source, target, m)
    }

    pub fn zero(source: FinAbGroup, target: FinAbGroup) -> Self {
        let matrix = IntMatrix::zeros(target.rank(), source.rank());
        AbHom { source, target, matrix }
    }

    pub fn identity(a: &FinAbGroup) -> Self {
        AbHom { source: a.clone(), target: a.clone(), matrix: IntMatrix::identity(a.rank()) }
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Elem {
        assert_eq!(x.len(), self.source.rank(), "element length");
        self.target.reduce(&self.matrix.mul_vec(x))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AbHom) -> AbHom {
        assert_eq!(inner.target, self.source, "composition of incompatible maps");
        let images: Vec<Elem> = inner.source.generators().iter().map(|g| self.apply(&inner.apply(g))).collect();
        let matrix = IntMatrix::from_columns(self.target.rank(), &images);
        AbHom { source: inner.source.clone(), target: self.target.clone(), matrix }
    }

    /// Pointwise sum of two maps with the same source and target.
    pub fn add(&self, other: &AbHom) -> AbHom {
        assert!(self.source == other.source && self.target == other.target, "sum of incompatible maps");
        let images: Vec<Elem> = (0..self.source.rank())
            .map(|j| self.target.add(&self.matrix.column(j), &other.matrix.column(j)))
            .collect();
        let matrix = IntMatrix::from_columns(self.target.rank(), &images);
        AbHom { source: self.source.clone(), target: self.target.clone(), matrix }
    }

    pub fn kernel(&self) -> AbSubgroup {
        let a = self.source.rank();
        // x ∈ ker ⇔ M x ∈ diag(target) ℤ^b.
        let rel = IntMatrix::diagonal(self.target.factors());
        let system = IntMatrix::hstack(&[&self.matrix, &rel]);
        let k = integer_kernel(&system);
        let gens: Vec<Elem> = (0..k.cols()).map(|j| self.source.reduce(&k.column(j)[..a])).collect();
        AbSubgroup::new(self.source.clone(), gens).expect("kernel generators lie in the source")
    }

    pub fn image(&self) -> AbSubgroup {
        let gens: Vec<Elem> = (0..self.source.rank()).map(|j| self.matrix.column(j)).collect();
        AbSubgroup::new(self.target.clone(), gens).expect("image generators lie in the target")
    }

    pub fn cokernel(&self) -> Quotient {
        self.image().quotient()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_full()
    }

    /// Pontryagin dual `χ ↦ χ ∘ f` between dual groups (same factors).
    pub fn dual(&self) -> AbHom {
        let (a, b) = (&self.source, &self.target);
        // Entry (j, i) is M_ij · a_j / b_i, integral by well-definedness.
        let mut m = IntMatrix::zeros(a.rank(), b.rank());
        for j in 0..a.rank() {
            for i in 0..b.rank() {
                let num = self.matrix.get(i, j) * &a.factors[j];
                let (q, r) = num.div_rem(&b.factors[i]);
                debug_assert!(r.is_zero());
                m.set(j, i, q);
            }
        }
        AbHom::new(b.clone(), a.clone(), m).expect("dual map is well defined")
    }
}

/// Quotient group `A / S` with its projection and generator lifts.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FinAbGroup,
    pub projection: AbHom,
    /// Columns are representatives in `A` of the quotient generators.
    pub lift: IntMatrix,
}

impl Quotient {
    pub fn lift(&self, q: &[BigInt]) -> Elem {
        self.projection.source().reduce(&self.lift.mul_vec(q))
    }
}

pub(crate) fn quotient_by_lattice(ambient: &FinAbGroup, lattice: &IntMatrix) -> Quotient {
    let c = cokernel(lattice);
    assert_eq!(c.free_rank, 0, "relation lattice must have full rank");
    let t = c.group.rank();
    let rows: Vec<usize> = (0..t).collect();
    let proj = c.projection_matrix().select_rows(&rows);
    let lift = c.lift_matrix().select_cols(&rows);
    let projection = AbHom::new(ambient.clone(), c.group.clone(), proj).expect("projection is well defined");
    Quotient { group: c.group, projection, lift }
}

/// Direct sum in invariant-factor form with structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FinAbGroup,
    pub injections: Vec<AbHom>,
    pub projections: Vec<AbHom>,
}

impl DirectSum {
    /// Element of the sum from its summand components.
    pub fn combine(&self, parts: &[Elem]) -> Elem {
        assert_eq!(parts.len(), self.injections.len(), "component count");
        let mut acc = self.group.zero();
        for (inj, x) in self.injections.iter().zip(parts) {
            acc = self.group.add(&acc, &inj.apply(x));
        }
        acc
    }

    pub fn split(&self, x: &[BigInt]) -> Vec<Elem> {
        self.projections.iter().map(|p| p.apply(x)).collect()
    }
}

pub fn direct_sum(groups: &[FinAbGroup]) -> DirectSum {
    let factors: Vec<BigInt> = groups.iter().flat_map(|g| g.factors().iter().cloned()).collect();
    let c = cokernel(&IntMatrix::diagonal(&factors));
    let group = c.group.clone();
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut offset = 0;
    for g in groups {
        let imgs: Vec<Elem> = (0..g.rank())
            .map(|j| {
                let mut e = vec![BigInt::zero(); factors.len()];
                e[offset + j] = BigInt::one();
                c.project(&e).0
            })
            .collect();
        injections.push(AbHom::from_images(g.clone(), group.clone(), &imgs).expect("injection"));
        let lift = c.lift_matrix();
        let pimgs: Vec<Elem> = (0..group.rank())
            .map(|k| {
                let col = lift.column(k);
                g.reduce(&col[offset..offset + g.rank()])
            })
            .collect();
        projections.push(AbHom::from_images(group.clone(), g.clone(), &pimgs).expect("projection"));
        offset += g.rank();
    }
    DirectSum { group, injections, projections }
}

#[cfg(test)]
mod tests {
    use super::super::elem;
    use super::*;

    fn g(f: &[u64]) -> FinAbGroup {
        FinAbGroup::from_u64(f).unwrap()
    }

    #[test]
    fn validation() {
        assert!(FinAbGroup::from_u64(&[2, 3]).is_err());
        assert!(FinAbGroup::from_u64(&[1]).is_err());
        assert!(FinAbGroup::from_u64(&[2, 4]).is_ok());
        assert_eq!(FinAbGroup::from_cyclic_orders(&elem(&[2, 3])), g(&[6]));
        assert_eq!(FinAbGroup::from_cyclic_orders(&elem(&[4, 1, 2])), g(&[2, 4]));
    }

    #[test]
    fn hom_basics() {
        let z6 = g(&[6]);
        assert!(AbHom::identity(&z6).kernel().is_trivial());
        let z4 = g(&[4]);
        let times2 = AbHom::from_images(z4.clone(), z4.clone(), &[elem(&[2])]).unwrap();
        assert_eq!(times2.image().order(), BigInt::from(2));
        assert_eq!(times2.kernel().order(), BigInt::from(2));
        // ℤ/2 → ℤ/4 by 1 ↦ 1 is not well defined.
        assert!(AbHom::from_images(g(&[2]), z4.clone(), &[elem(&[1])]).is_err());
        assert!(AbHom::from_images(g(&[2]), z4, &[elem(&[2])]).is_ok());
    }

    #[test]
    fn direct_sum_round_trip() {
        let parts = [g(&[2]), g(&[3]), g(&[2, 4])];
        let ds = direct_sum(&parts);
        assert_eq!(ds.group, g(&[2, 2, 12]));
        let xs = vec![elem(&[1]), elem(&[2]), elem(&[1, 3])];
        let s = ds.combine(&xs);
        assert_eq!(ds.split(&s), xs);
    }

    #[test]
    fn dual_map_of_inclusion() {
        // ℤ/2 → ℤ/4, 1 ↦ 2; dual ℤ/4 → ℤ/2 is surjective restriction.
        let f = AbHom::from_images(g(&[2]), g(&[4]), &[elem(&[2])]).unwrap();
        let d = f.dual();
        assert_eq!(d.apply(&elem(&[1])), elem(&[1]));
        assert_eq!(d.apply(&elem(&[2])), elem(&[0]));
        assert!(d.is_surjective());
    }
}
