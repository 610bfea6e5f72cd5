use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::group::FinAbGroup;
use super::subgroup::AbSubgroup;

/// Perfect pairing `A × A^∨ → ℚ/ℤ`, `⟨x, χ⟩ = Σ xⱼχⱼ/dⱼ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    factors: Vec<BigInt>,
}

impl Pairing {
    /// Value in `[0, 1)`.
    pub fn eval(&self, x: &[BigInt], chi: &[BigInt]) -> BigRational {
        let e = self.exponent();
        BigRational::new(self.eval_scaled(x, chi), e)
    }

    /// Numerator of the value over the exponent of `A`, reduced mod the exponent.
    pub fn eval_scaled(&self, x: &[BigInt], chi: &[BigInt]) -> BigInt {
        assert!(x.len() == self.factors.len() && chi.len() == self.factors.len(), "element length");
        let e = self.exponent();
        let mut acc = BigInt::zero();
        for ((a, c), d) in x.iter().zip(chi).zip(&self.factors) {
            acc += a * c * (&e / d);
        }
        acc.mod_floor(&e)
    }

    pub fn exponent(&self) -> BigInt {
        self.factors.last().cloned().unwrap_or_else(|| BigInt::from(1))
    }
}

/// Pontryagin dual: same invariant factors, with the standard pairing.
pub fn dual_group(a: &FinAbGroup) -> (FinAbGroup, Pairing) {
    (a.clone(), Pairing { factors: a.factors().to_vec() })
}

/// Characters of the ambient group vanishing on `s`, as a subgroup of the dual.
pub fn annihilator(s: &AbSubgroup) -> AbSubgroup {
    let incl = s.as_group().inclusion;
    incl.dual().kernel()
}
