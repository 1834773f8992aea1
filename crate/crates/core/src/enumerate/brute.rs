use super::census::FrobeniusCensus;
use crate::error::{Error, Result};
use crate::semigroup::Semigroup;

/// Largest `f` the subset scan accepts (`2^(f-1)` candidate sets).
pub const BRUTE_FORCE_MAX_F: u32 = 22;

/// Census by scanning every subset of `[1, f - 1]` through
/// [`Semigroup::build`]. Shares no code with the pruned search.
pub fn brute_force_by_frobenius(f: u32) -> Result<FrobeniusCensus> {
    if f == 0 {
        return Err(Error::InvalidArgument(
            "Frobenius number must be at least 1".into(),
        ));
    }
    if f > BRUTE_FORCE_MAX_F {
        return Err(Error::OutOfBudget {
            what: "brute-force Frobenius number",
            value: f as u64,
            max: BRUTE_FORCE_MAX_F as u64,
        });
    }
    let mut census = FrobeniusCensus::empty(f);
    for subset in 0u32..(1 << (f - 1)) {
        let members = (1..f).filter(|&x| subset >> (x - 1) & 1 == 1);
        if let Ok(s) = Semigroup::build(f, members) {
            let p = s.profile();
            census.record(p.n, p.m, p.q);
        }
    }
    Ok(census)
}
