//! Brute-force group cohomology: cyclic periodicity, a nonabelian table group,
//! and local-global kernels over the decomposition profile.

use multinorm::oracle::{build_that, cohomology, restriction, sha_oracle, Caps, GLattice};
use multinorm::scenario::{FiniteGroup, GaloisScenario};

fn main() -> multinorm::Result<()> {
    let caps = Caps::default();
    let z6 = FiniteGroup::cyclic(6);
    for q in 0..=4 {
        let h = cohomology(&GLattice::trivial(&z6), q, &caps)?;
        println!("H^{q}(Z/6, Z) = {:?} + Z^{}", h.group().factors_u64(), h.free_rank());
    }

    let s3 = FiniteGroup::symmetric(3);
    let z = GLattice::trivial(&s3);
    let h2 = cohomology(&z, 2, &caps)?;
    let a3 = s3.commutator_subgroup();
    let (h2_sub, res) = restriction(&z, &h2, &a3, &caps)?;
    println!(
        "H^2(S3, Z) = {:?}, H^2(A3, Z) = {:?}, restriction injective: {}",
        h2.group().factors_u64(),
        h2_sub.group().factors_u64(),
        res.is_injective()
    );

    let s = GaloisScenario::parse(include_str!("../fixtures/scenarios/s3_table.json"))?;
    let t = s.to_table();
    let lattice = build_that(&t)?.lattice;
    println!("multinorm lattice over S3 has rank {}", lattice.rank());
    for q in 1..=2 {
        let h = cohomology(&lattice, q, &caps)?;
        let sha = sha_oracle(&lattice, q, &t.profile_subgroups(), &caps)?;
        println!("  H^{q} = {:?}, local-global kernel {:?}", h.group().factors_u64(), sha.factors_u64());
    }
    Ok(())
}
