//! Scenario transformations: primary parts, base change to the common
//! subfield, and dropping redundant factors, each with the recomputed answer.

use multinorm::abelian_engine::{analyze, combine_exact, p_primary_split};
use multinorm::abgroup::{elem, AbSubgroup, FinAbGroup};
use multinorm::scenario::{base_change_to_f, normalize_redundant_factors, AbelianScenario, Factor, GaloisScenario, LocalProfile};

fn main() -> multinorm::Result<()> {
    let g = FinAbGroup::from_u64(&[2, 2, 6]).unwrap();
    let sub = |gens: &[&[i64]]| AbSubgroup::new(g.clone(), gens.iter().map(|x| elem(x)).collect()).unwrap();
    let s = AbelianScenario::new(
        g.clone(),
        vec![Factor::new("K", sub(&[&[1, 0, 0], &[0, 0, 2]]))],
        vec![Factor::new("K1", sub(&[&[0, 1, 0], &[0, 0, 2]])), Factor::new("K2", sub(&[&[1, 1, 0], &[0, 0, 3]]))],
        LocalProfile::default(),
    )?;
    let whole = analyze(&s)?.report;
    println!("whole scenario: {} {:?}", whole.status(), whole.exact().map(|x| x.factors_u64()));
    let parts = p_primary_split(&s)?;
    for (p, r) in &parts {
        println!("  {p}-part: {} {:?}", r.status(), r.exact().map(|x| x.factors_u64()));
    }
    if let (Some(a), Some(b)) = (whole.exact(), combine_exact(parts.values())) {
        assert_eq!(a, &b);
    }

    let s = GaloisScenario::parse(include_str!("../fixtures/scenarios/fix_d.json"))?;
    let s = s.as_abelian()?;
    let (n, log) = normalize_redundant_factors(s);
    println!("normalization: {log:?}");
    println!("  answer before {:?}, after {:?}", analyze(s)?.report.exact().map(|x| x.factors_u64()), analyze(&n)?.report.exact().map(|x| x.factors_u64()));
    let bc = base_change_to_f(s)?;
    println!("base change: ambient {:?} -> {:?}", s.group.factors_u64(), bc.group.factors_u64());
    println!("  answer after base change {:?}", analyze(&bc)?.report.exact().map(|x| x.factors_u64()));
    Ok(())
}
