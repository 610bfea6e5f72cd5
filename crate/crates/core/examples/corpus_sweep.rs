//! Exhaustive engine-versus-oracle sweep over all two-factor scenarios of
//! abelian groups up to a given order (default 4).

use std::collections::BTreeMap;

use multinorm::corpus::{abelian_groups, pair_scenarios};
use multinorm::oracle::{verify_bounds, Caps};

fn main() -> multinorm::Result<()> {
    let max: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    let caps = Caps::corpus();
    let mut by_certificate: BTreeMap<&str, usize> = BTreeMap::new();
    let mut failures = 0;
    for g in abelian_groups(max) {
        for s in pair_scenarios(&g) {
            let v = verify_bounds(&s, &caps)?;
            *by_certificate.entry(v.certificate.as_str()).or_default() += 1;
            if !v.passed() {
                failures += 1;
            }
        }
    }
    println!("certificates: {by_certificate:?}");
    println!("failures: {failures}");
    assert_eq!(failures, 0);
    Ok(())
}
