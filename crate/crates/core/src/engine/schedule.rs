//! The population-size schedule 1, 2, 3, 5, 8, 13, ... (Fibonacci with the
//! zero dropped and the repeated 1 collapsed).

use crate::{Error, Result};

/// Values beyond this index would overflow `u64`.
const MAX_INDEX: usize = 90;

pub fn value(index: usize) -> usize {
    let (mut a, mut b) = (1u64, 2u64);
    for _ in 0..index.min(MAX_INDEX) {
        (a, b) = (b, a.saturating_add(b));
    }
    usize::try_from(a).unwrap_or(usize::MAX)
}

pub fn index_of(v: usize) -> Option<usize> {
    let (mut a, mut b, mut i) = (1usize, 2usize, 0usize);
    while a < v {
        (a, b) = (b, a.checked_add(b)?);
        i += 1;
    }
    (a == v).then_some(i)
}

pub fn is_on_schedule(v: usize) -> bool {
    index_of(v).is_some()
}

pub fn next(v: usize) -> Result<usize> {
    let i = index_of(v).ok_or_else(|| off_schedule(v))?;
    Ok(value((i + 1).min(MAX_INDEX)))
}

/// The preceding schedule value, clamped so that `prev(1) == 1`.
pub fn prev(v: usize) -> Result<usize> {
    let i = index_of(v).ok_or_else(|| off_schedule(v))?;
    Ok(value(i.saturating_sub(1)))
}

/// Offspring count for population size `mu`: the preceding schedule value,
/// i.e. the gap to the next one. `offspring_size(144) == 89`.
pub fn offspring_size(mu: usize) -> Result<usize> {
    prev(mu)
}

fn off_schedule(v: usize) -> Error {
    Error::Precondition(format!("{v} is not a Fibonacci population size"))
}
