//! Which sizes are enumerated routinely, which need `--slow`, and which are
//! refused without `--force`.

use crate::Family;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    Fast,
    Slow,
    Outside,
}

pub fn tier(family: Family, n: usize, q: u32) -> Tier {
    match family {
        Family::Sl => match (q, n) {
            (2, ..=4) | (3, ..=3) | (4..=5, ..=3) => Tier::Fast,
            (2, 5) | (3, 4) => Tier::Slow,
            _ => Tier::Outside,
        },
        Family::Sp => match (q, n) {
            (2..=3, ..=2) => Tier::Fast,
            (2, 3) => Tier::Slow,
            _ => Tier::Outside,
        },
    }
}

/// `Err` with the reason when the job may not run.
pub fn admit(family: Family, n: usize, q: u32, slow: bool, force: bool) -> Result<(), String> {
    match tier(family, n, q) {
        _ if force => Ok(()),
        Tier::Fast => Ok(()),
        Tier::Slow if slow => Ok(()),
        Tier::Slow => Err(format!(
            "{} n={n} q={q} is in the slow tier; pass --slow",
            family.name()
        )),
        Tier::Outside => Err(format!(
            "{} n={n} q={q} is outside the enumeration envelope; pass --force",
            family.name()
        )),
    }
}
