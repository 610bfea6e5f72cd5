//! The classical biquadratic failure of the Hasse norm principle, computed by
//! the engine and confirmed by the cohomology oracle.

use multinorm::abelian_engine::analyze;
use multinorm::oracle::{sha_multinorm, verify_bounds, Caps};
use multinorm::scenario::GaloisScenario;

fn main() -> multinorm::Result<()> {
    let s = GaloisScenario::parse(include_str!("../fixtures/scenarios/fix_b.json"))?;
    let s = s.as_abelian()?;
    let report = analyze(s)?.report;
    print!("{}", report.to_text());

    let caps = Caps::default();
    let direct = sha_multinorm(&s.to_table(), &caps)?;
    println!("oracle, second local-global kernel of the character lattice: {:?}", direct.factors_u64());

    let check = verify_bounds(s, &caps)?;
    for r in &check.records {
        println!("{} {}", if r.holds { "pass" } else { "FAIL" }, r.claim);
    }
    assert!(check.passed());
    Ok(())
}
