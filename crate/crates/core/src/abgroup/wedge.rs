use num_bigint::BigInt;
use num_traits::Zero;

use super::group::{cokernel, Cokernel, FinAbGroup};
use super::Elem;

/// Exterior square `∧²A` with its alternating bilinear map.
#[derive(Clone, Debug)]
pub struct WedgeSquare {
    pub group: FinAbGroup,
    base: FinAbGroup,
    presentation: Cokernel,
}

impl WedgeSquare {
    pub fn base(&self) -> &FinAbGroup {
        &self.base
    }

    /// `x ∧ y`.
    pub fn wedge(&self, x: &[BigInt], y: &[BigInt]) -> Elem {
        let r = self.base.rank();
        let x = self.base.reduce(x);
        let y = self.base.reduce(y);
        let mut t = vec![BigInt::zero(); r * r];
        for i in 0..r {
            for j in 0..r {
                t[i * r + j] = &x[i] * &y[j];
            }
        }
        self.presentation.project(&t).0
    }
}

/// `A ⊗ A` modulo `eᵢ⊗eᵢ` and `eᵢ⊗eⱼ + eⱼ⊗eᵢ`, presented on `ℤ^{r²}`.
pub fn wedge_square(a: &FinAbGroup) -> WedgeSquare {
    let r = a.rank();
    let n = r * r;
    let mut rels: Vec<Vec<BigInt>> = Vec::new();
    let unit = |k: usize, c: &BigInt| {
        let mut v = vec![BigInt::zero(); n];
        v[k] = c.clone();
        v
    };
    let one = BigInt::from(1);
    for i in 0..r {
        for j in 0..r {
            rels.push(unit(i * r + j, &a.factors()[i]));
            rels.push(unit(i * r + j, &a.factors()[j]));
        }
        rels.push(unit(i * r + i, &one));
        for j in i + 1..r {
            let mut v = unit(i * r + j, &one);
            v[j * r + i] = one.clone();
            rels.push(v);
        }
    }
    let m = super::matrix::IntMatrix::from_columns(n, &rels);
    let presentation = cokernel(&m);
    debug_assert_eq!(presentation.free_rank, 0);
    WedgeSquare { group: presentation.group.clone(), base: a.clone(), presentation }
}

#[cfg(test)]
mod tests {
    use super::super::elem;
    use super::*;

    #[test]
    fn wedge_examples() {
        let g = |f: &[u64]| FinAbGroup::from_u64(f).unwrap();
        assert!(wedge_square(&g(&[12])).group.is_trivial());
        assert!(wedge_square(&FinAbGroup::trivial()).group.is_trivial());
        assert_eq!(wedge_square(&g(&[2, 2])).group, g(&[2]));
        assert_eq!(wedge_square(&g(&[2, 4])).group, g(&[2]));
        assert_eq!(wedge_square(&g(&[2, 2, 2])).group, g(&[2, 2, 2]));
    }

    #[test]
    fn wedge_is_alternating() {
        let a = FinAbGroup::from_u64(&[2, 4]).unwrap();
        let w = wedge_square(&a);
        let x = elem(&[1, 3]);
        let y = elem(&[0, 1]);
        assert!(w.group.is_zero(&w.wedge(&x, &x)));
        assert_eq!(w.group.add(&w.wedge(&x, &y), &w.wedge(&y, &x)), w.group.zero());
        assert!(!w.group.is_zero(&w.wedge(&elem(&[1, 0]), &elem(&[0, 1]))));
    }
}
