//! Closed-form XOR counts for the LU solver, the LU erasure decoders and the
//! Blaum-Roth reference decoder, evaluated in exact rational arithmetic.

use num_rational::Ratio;
use serde::Serialize;

use crate::codes::Family;

type Q = Ratio<i64>;

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

fn frac(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn integral(v: Q, what: &str) -> u64 {
    assert!(v.is_integer(), "{what} evaluated to the non-integer {v}");
    let n = v.to_integer();
    assert!(n >= 0, "{what} evaluated to the negative {n}");
    n as u64
}

/// Measured XORs of one decode, split by stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CostBreakdown {
    pub augment_cost: u64,
    pub syndrome_cost: u64,
    pub solve_cost: u64,
    pub reduce_cost: u64,
    pub reencode_cost: u64,
    pub total: u64,
}

impl CostBreakdown {
    pub fn new(augment: u64, syndrome: u64, solve: u64, reduce: u64, reencode: u64) -> Self {
        Self {
            augment_cost: augment,
            syndrome_cost: syndrome,
            solve_cost: solve,
            reduce_cost: reduce,
            reencode_cost: reencode,
            total: augment + syndrome + solve + reduce + reencode,
        }
    }
}

/// XORs used by the LU solver on an `r x r` system over `R_p`.
pub fn predict_lu(r: usize, p: usize) -> u64 {
    assert!(r >= 1 && p % 2 == 1, "need r >= 1 and odd p");
    let (r, p) = (r as i64, p as i64);
    let v = q(r * (r - 1) * p) + q((r - 1) * (p - 3)) + frac((r - 1) * (r - 2) * (3 * p - 5), 4);
    integral(v, "LU solver cost")
}

fn reencode_term(family: Family, p: i64, k: i64, delta: i64) -> Q {
    match family {
        Family::Evenodd => q(delta * (k * p - k - 1)),
        Family::Rdp => q(delta * k * (p - 2)),
    }
}

/// XORs of the LU erasure decoder for `gamma` erased information columns
/// and `delta` erased parity columns, re-encoding the parities at the end.
/// With `gamma = 0` only the re-encoding term remains.
pub fn predict_decode(family: Family, p: usize, k: usize, gamma: usize, delta: usize, lambda_is_zero: bool) -> u64 {
    let (p, k, g, d) = (p as i64, k as i64, gamma as i64, delta as i64);
    let reencode = reencode_term(family, p, k, d);
    if g == 0 {
        return integral(reencode, "re-encoding cost");
    }
    let common = q(g * k) + frac(3 * g * g, 4) - frac(g, 4);
    let tail = -q(g * k) - frac(g * g, 4);
    let v = match (family, lambda_is_zero) {
        (Family::Evenodd, false) => q(p) * (common + frac(5, 2)) + tail - frac(5 * g, 4) - frac(5, 2),
        (Family::Evenodd, true) => q(p) * (common - frac(1, 2)) + tail - frac(5 * g, 4) + frac(1, 2),
        (Family::Rdp, false) => q(p) * (common + frac(3, 2)) + tail - frac(9 * g, 4) - frac(1, 2),
        (Family::Rdp, true) => q(p) * (common - frac(3, 2)) + tail - frac(9 * g, 4) + frac(7, 2),
    };
    integral(v + reencode, "decode cost")
}

/// XORs of the Blaum-Roth decoder on the same erasure pattern (RDP first
/// rewrites the needed parity columns into EVENODD form).
pub fn predict_blaum_roth(family: Family, p: usize, k: usize, gamma: usize, delta: usize, lambda_is_zero: bool) -> u64 {
    let (p, k, g, d) = (p as i64, k as i64, gamma as i64, delta as i64);
    if g == 0 {
        let reencode = match family {
            Family::Evenodd => q(d * (k * p - k - 1)),
            Family::Rdp => q(d * (k * p - 2 * k)),
        };
        return integral(reencode, "re-encoding cost");
    }
    let base = q(g * (k + g) * p) + q(g * g);
    let v = match (family, lambda_is_zero) {
        (Family::Evenodd, _) => base + (q(3 * g * g) + frac(g, 2)) * q(p) - frac(g, 2) + q(d * (k * p - k - 1)),
        (Family::Rdp, false) => {
            base + (q(3 * g * g) + frac(7 * g, 2)) * q(p) - frac(g, 2) + q(d * (k * p - 2 * k)) - q(3)
        }
        (Family::Rdp, true) => {
            base + (q(3 * g * g) + frac(7 * g, 2) - q(3)) * q(p) - frac(7 * g, 2) + q(d * (k * p - 2 * k)) + q(3)
        }
    };
    integral(v, "Blaum-Roth cost")
}

/// LU decoding cost when all `gamma` erasures are information columns of
/// EVENODD(p, p, r) or RDP(p, p-1, r), in the simplified closed form.
pub fn predict_full_information_erasure(family: Family, p: usize, gamma: usize) -> u64 {
    let (p, g) = (p as i64, gamma as i64);
    let v = match family {
        Family::Evenodd => {
            q(p) * (q(g * p) + frac(3 * g * g, 4) - frac(5 * g, 4) - frac(1, 2)) - frac(g * g, 4) - frac(5 * g, 4)
                + frac(1, 2)
        }
        Family::Rdp => {
            q(p) * (q(g * (p - 1)) + frac(3 * g * g, 4) - frac(5 * g, 4) - frac(3, 2)) - frac(g * g, 4) - frac(5 * g, 4)
                + frac(7, 2)
        }
    };
    integral(v, "full-erasure cost")
}

/// Number of information columns used in the LU vs Blaum-Roth comparison.
pub fn comparison_k(family: Family, p: usize) -> usize {
    match family {
        Family::Evenodd => p,
        Family::Rdp => p - 1,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub family: Family,
    pub p: usize,
    pub k: usize,
    pub r: usize,
    pub lu_xors: u64,
    pub blaum_roth_xors: u64,
    /// XORs per information bit.
    pub lu_normalized: f64,
    pub blaum_roth_normalized: f64,
    pub reduction_percent: f64,
}

/// `r` erased information columns and no parity erasures, for every odd
/// `p` in the range, with `k = p` (EVENODD) or `k = p - 1` (RDP).
pub fn comparison_report(family: Family, r: usize, p_range: std::ops::RangeInclusive<usize>) -> Vec<ComparisonRow> {
    p_range
        .filter(|p| p % 2 == 1 && *p >= 3)
        .map(|p| {
            let k = comparison_k(family, p);
            let lu = predict_decode(family, p, k, r, 0, true);
            let br = predict_blaum_roth(family, p, k, r, 0, true);
            let bits = (k * (p - 1)) as f64;
            ComparisonRow {
                family,
                p,
                k,
                r,
                lu_xors: lu,
                blaum_roth_xors: br,
                lu_normalized: lu as f64 / bits,
                blaum_roth_normalized: br as f64 / bits,
                reduction_percent: reduction_percent(lu, br),
            }
        })
        .collect()
}

pub fn reduction_percent(lu: u64, blaum_roth: u64) -> f64 {
    100.0 * (blaum_roth as f64 - lu as f64) / blaum_roth as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_examples() {
        assert_eq!(predict_lu(1, 5), 0);
        assert_eq!(predict_lu(2, 5), 12);
        assert_eq!(predict_lu(3, 5), 39);
    }

    #[test]
    fn decode_examples() {
        assert_eq!(predict_decode(Family::Evenodd, 5, 3, 2, 0, true), 31);
        assert_eq!(predict_decode(Family::Evenodd, 5, 3, 0, 1, true), 5 * 3 - 3 - 1);
        // stage sums: syndromes (k-g)(p-1) + (g-1)((p-2) + (k-g+1)(p-1)), then the solver
        assert_eq!(predict_decode(Family::Rdp, 5, 3, 2, 0, true), 4 + 3 + 8 + 12);
    }

    #[test]
    fn decode_matches_stage_decomposition() {
        for p in (5..=23).step_by(2) {
            for k in 1..=p {
                for g in 1..=k.min(5) {
                    let (pp, kk, gg) = (p as u64, k as u64, g as u64);
                    let lu = predict_lu(g, p);
                    let eo_pos = 2 * (pp - 1) * gg + (pp - 2) + gg * (kk - gg) * (pp - 1) + lu + (pp - 1);
                    let eo_zero = 2 * (pp - 1) * (gg - 1) + (pp - 2) + gg * (kk - gg) * (pp - 1) + lu;
                    let rdp_pos = gg * (pp - 2) + gg * (kk - gg + 1) * (pp - 1) + lu + (pp - 1);
                    let rdp_zero =
                        (gg - 1) * (pp - 2) + (kk - gg) * (pp - 1) + (gg - 1) * (kk - gg + 1) * (pp - 1) + lu;
                    assert_eq!(predict_decode(Family::Evenodd, p, k, g, 0, false), eo_pos);
                    assert_eq!(predict_decode(Family::Evenodd, p, k, g, 0, true), eo_zero);
                    assert_eq!(predict_decode(Family::Rdp, p, k, g, 0, false), rdp_pos);
                    assert_eq!(predict_decode(Family::Rdp, p, k, g, 0, true), rdp_zero);
                }
            }
        }
    }

    #[test]
    fn blaum_roth_examples() {
        assert_eq!(predict_blaum_roth(Family::Evenodd, 5, 5, 4, 0, true), 444);
        assert_eq!(predict_blaum_roth(Family::Rdp, 5, 4, 0, 2, true), 2 * (20 - 8));
        // 4*8*5 + (48 + 14 - 3)*5 + 16 - 14 + 3
        assert_eq!(predict_blaum_roth(Family::Rdp, 5, 4, 4, 0, true), 160 + 295 + 5);
    }

    #[test]
    fn simplified_forms_agree() {
        for p in (5..=59).step_by(2) {
            for g in 1..=5 {
                assert_eq!(
                    predict_full_information_erasure(Family::Evenodd, p, g),
                    predict_decode(Family::Evenodd, p, p, g, 0, true)
                );
                assert_eq!(
                    predict_full_information_erasure(Family::Rdp, p, g),
                    predict_decode(Family::Rdp, p, p - 1, g, 0, true)
                );
            }
        }
    }

    #[test]
    fn lu_beats_blaum_roth() {
        for fam in [Family::Evenodd, Family::Rdp] {
            for r in [4, 5] {
                for row in comparison_report(fam, r, 5..=59) {
                    assert!(row.lu_xors < row.blaum_roth_xors, "{row:?}");
                }
            }
        }
    }

    #[test]
    fn breakdown_total() {
        let c = CostBreakdown::new(1, 2, 3, 4, 5);
        assert_eq!(c.total, 15);
    }
}
