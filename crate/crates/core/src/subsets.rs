//! Power-set enumeration over D2D pair indices.

/// Largest number of pairs for which subsets are enumerated exactly.
pub const POWER_SET_LIMIT: usize = 12;

/// Members of `mask` in increasing index order.
pub fn members(mask: u32, universe: &[usize]) -> Vec<usize> {
    universe
        .iter()
        .enumerate()
        .filter(|(bit, _)| mask & (1 << bit) != 0)
        .map(|(_, &idx)| idx)
        .collect()
}

/// All subsets of `universe` in canonical (increasing bitmask) order.
pub fn power_set(universe: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let count = 1u32 << universe.len();
    (0..count).map(move |mask| members(mask, universe))
}

/// Probability weights of a subset of size `size` drawn from `total` pairs,
/// split by whether the remaining pairs all sit in the underlay mode on other
/// CUEs (full band for the CUEs) or not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsetWeights {
    /// `eps^k * vartheta^(total-k)`
    pub full_band: f64,
    /// `eps^k * ((1-eps)^(total-k) - vartheta^(total-k))`
    pub partitioned: f64,
}

pub fn subset_weights(eps: f64, vartheta: f64, size: usize, total: usize) -> SubsetWeights {
    let rest = (total - size) as i32;
    let head = eps.powi(size as i32);
    let all_other = vartheta.powi(rest);
    SubsetWeights {
        full_band: head * all_other,
        partitioned: head * ((1.0 - eps).powi(rest) - all_other),
    }
}

/// Total probability of all subsets when each of `total` pairs joins
/// independently with probability `eps`. Equals 1 up to rounding.
pub fn weight_total(eps: f64, total: usize) -> f64 {
    let universe: Vec<usize> = (0..total).collect();
    power_set(&universe)
        .map(|set| eps.powi(set.len() as i32) * (1.0 - eps).powi((total - set.len()) as i32))
        .sum()
}
