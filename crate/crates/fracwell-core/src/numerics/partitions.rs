//! Integer partitions in multiplicity encoding.
//!
//! The higher-order chain rule sums over all i-tuples (m_1, ..., m_i) of
//! nonnegative integers with Σ j·m_j = i; these are exactly the partitions
//! of i where m_j counts the parts equal to j.

use crate::error::{Error, Result};

/// Largest admissible order; factorial weights stay exact in f64 well past
/// this, the cap simply matches the recovery depth anywhere in the crate.
pub const MAX_PARTITION_ORDER: u32 = 12;

/// All i-tuples (m_1, ..., m_i) with Σ j·m_j = i, each tuple of length i.
///
/// Deterministic order: lexicographic in the largest part used first.
pub fn partitions_weighted(i: u32) -> Result<Vec<Vec<u32>>> {
    if i == 0 || i > MAX_PARTITION_ORDER {
        return Err(Error::domain(format!(
            "partitions_weighted: order must lie in 1..={MAX_PARTITION_ORDER}, got {i}"
        )));
    }
    let n = i as usize;
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    descend(n, n, &mut current, &mut out);
    Ok(out)
}

fn descend(remaining: usize, max_part: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        let most = remaining / part;
        for count in (1..=most).rev() {
            current[part - 1] = count as u32;
            descend(remaining - part * count, part - 1, current, out);
            current[part - 1] = 0;
        }
    }
}

/// p(n) by the pentagonal-number recurrence; independent of the enumeration
/// above and used to cross-check it.
pub fn partition_count(n: u32) -> u64 {
    let n = n as usize;
    let mut table = vec![0u64; n + 1];
    table[0] = 1;
    for i in 1..=n {
        let mut sum: i64 = 0;
        let mut k: i64 = 1;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > i {
                break;
            }
            let sign = if k % 2 == 1 { 1i64 } else { -1i64 };
            sum += sign * table[i - g1] as i64;
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= i {
                sum += sign * table[i - g2] as i64;
            }
            k += 1;
        }
        table[i] = sum as u64;
    }
    table[n]
}
