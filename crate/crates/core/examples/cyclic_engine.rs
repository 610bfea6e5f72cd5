//! The cyclic engine: congruence-defined subgroup, its three predicates, and
//! agreement with the general engine on a derived cyclic scenario.

use multinorm::abelian_engine::analyze;
use multinorm::cyclic_engine::{diagonal_group, g_group, omega_cover_check, sha_cyclic, CyclicAmbient, Mode};
use multinorm::scenario::{derive_cyclic, CyclicScenario, GaloisScenario};

fn main() -> multinorm::Result<()> {
    for text in [include_str!("../fixtures/cyclic/g_group_1.json"), include_str!("../fixtures/cyclic/g_group_2.json")] {
        let cs = CyclicScenario::parse(text)?;
        let g = g_group(&cs, Mode::Paranoid)?;
        let d = diagonal_group(&cs);
        println!("places {:?}: |G| = {}, |D| = {}", cs.places.iter().map(|p| &p.e_i_v).collect::<Vec<_>>(), g.order(), d.order());
        let amb = CyclicAmbient::new(&cs);
        let covered = amb.tuples().filter(|a| omega_cover_check(a, &cs).unwrap()).count();
        println!("  tuples passing the covering condition: {covered}");
        print!("{}", sha_cyclic(&cs, Mode::Fast)?.to_text());
    }

    let s = GaloisScenario::parse(include_str!("../fixtures/scenarios/fix_b_split.json"))?;
    let s = s.as_abelian()?;
    let dc = derive_cyclic(s)?;
    let c = &dc.cyclic;
    println!("derived cyclic data: p = {}, e = {}, e_i = {:?}, {} place classes", c.p, c.e, c.e_list, c.places.len());
    let via_cyclic = sha_cyclic(&dc.cyclic, Mode::Paranoid)?;
    let via_general = analyze(s)?.report;
    assert_eq!(via_cyclic.s_mod_d, via_general.s_mod_d);
    println!("both engines: S/D = {:?}", via_general.s_mod_d.factors_u64());
    Ok(())
}
