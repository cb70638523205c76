//! Closed-form bounds on the Turán density parameters of double-normal
//! graphs, and the lower bounds witnessed by known acute sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ceil(log2 m)` for `m >= 1`: the least dimension holding `m` pairwise
/// non-obtuse points.
pub fn ceil_log2(m: u64) -> u32 {
    assert!(m >= 1, "ceil_log2 of zero");
    if m == 1 {
        0
    } else {
        64 - (m - 1).leading_zeros()
    }
}

/// Largest `k` with `k + ceil(log2 k) <= d`.
pub fn k_upper(d: u64) -> u64 {
    let mut k = 0;
    while (k + 1) + u64::from(ceil_log2(k + 1)) <= d {
        k += 1;
    }
    k
}

/// Whether some integer `k` satisfies `k + ceil(log2 k) = d` exactly.
pub fn equality_attainable(d: u64) -> bool {
    let k = k_upper(d);
    k >= 1 && k + u64::from(ceil_log2(k)) == d
}

/// A verified acute configuration: `size` pairwise acute points in `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcuteWitness {
    pub size: u64,
    pub dim: u64,
}

/// `m` acute points in dimension `m - 1` from the regular simplex.
pub fn simplex_lower(d: u64) -> u64 {
    d.div_ceil(2)
}

/// Best `m` with `m + dim <= d` over the witnesses, floored by the simplex family.
pub fn k_lower(d: u64, witnesses: &[AcuteWitness]) -> u64 {
    witnesses
        .iter()
        .filter(|w| w.size + w.dim <= d)
        .map(|w| w.size)
        .fold(simplex_lower(d), u64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundStatus {
    Tight,
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub d: u64,
    pub k_lower: u64,
    pub k_upper: u64,
    pub k1_upper: u64,
    /// False where no integer `k` meets `k + ceil(log2 k) = d` exactly.
    pub k1_equality_attainable: bool,
    pub status: BoundStatus,
}

pub fn bounds_table(d_min: u64, d_max: u64, witnesses: &[AcuteWitness]) -> Result<Vec<BoundsRow>> {
    if d_min < 2 || d_min > d_max {
        return Err(Error::OutOfRange(format!(
            "need 2 <= d_min <= d_max, got {d_min}..{d_max}"
        )));
    }
    Ok((d_min..=d_max)
        .map(|d| {
            let upper = k_upper(d);
            let lower = k_lower(d, witnesses);
            BoundsRow {
                d,
                k_lower: lower,
                k_upper: upper,
                k1_upper: upper,
                k1_equality_attainable: equality_attainable(d),
                status: if lower == upper {
                    BoundStatus::Tight
                } else {
                    BoundStatus::Open
                },
            }
        })
        .collect())
}

/// Plain-text rendering of a bounds table.
pub fn render_table(rows: &[BoundsRow]) -> String {
    let mut out = String::from("   d  k_lower  k_upper  k1_upper  k1_eq  status\n");
    for r in rows {
        out.push_str(&format!(
            "{:>4}  {:>7}  {:>7}  {:>8}  {:>5}  {}\n",
            r.d,
            r.k_lower,
            r.k_upper,
            r.k1_upper,
            if r.k1_equality_attainable {
                "yes"
            } else {
                "no"
            },
            match r.status {
                BoundStatus::Tight => "tight",
                BoundStatus::Open => "open",
            }
        ));
    }
    out
}
