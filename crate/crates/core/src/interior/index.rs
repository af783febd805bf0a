//! Index compositions and the expansion constants of the magnitude symbol.

use crate::expr::{n_fact_omega, Cq, Rat, Scalar};

/// A composition `γ = (γ₁, …, γ_k)` with every part at least 3.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexComposition {
    pub parts: Vec<u32>,
}

impl IndexComposition {
    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }
}

/// All compositions `γ` with parts `≥ 3` and `|γ| = j + 2·rank(γ)`.
///
/// Ordered by rank, then lexicographically.
pub fn index_sets(j: u32) -> Vec<IndexComposition> {
    fn rec(prefix: &mut Vec<u32>, remaining: u32, left: usize, out: &mut Vec<IndexComposition>) {
        if left == 0 {
            if remaining == 0 {
                out.push(IndexComposition { parts: prefix.clone() });
            }
            return;
        }
        for p in 3..=remaining {
            if remaining - p < 3 * (left as u32 - 1) {
                break;
            }
            prefix.push(p);
            rec(prefix, remaining - p, left - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for rank in 1..=j as usize {
        rec(&mut Vec::new(), j + 2 * rank as u32, rank, &mut out);
    }
    out
}

/// The multisets underlying [`index_sets`]: nondecreasing parts together with
/// the number of distinct orderings.  The differential operators attached to
/// the parts commute, so each multiset needs to be applied only once.
pub fn index_multisets(j: u32) -> Vec<(Vec<u32>, u64)> {
    fn rec(prefix: &mut Vec<u32>, min: u32, remaining: u32, left: usize, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let mut p = min;
        while p * left as u32 <= remaining {
            prefix.push(p);
            rec(prefix, p, remaining - p, left - 1, out);
            prefix.pop();
            p += 1;
        }
    }
    let mut sets = Vec::new();
    for rank in 1..=j as usize {
        rec(&mut Vec::new(), 3, j + 2 * rank as u32, rank, &mut sets);
    }
    sets.into_iter()
        .map(|parts| {
            let mut mult = factorial_u64(parts.len() as u64);
            let mut i = 0;
            while i < parts.len() {
                let run = parts[i..].iter().take_while(|p| **p == parts[i]).count();
                mult /= factorial_u64(run as u64);
                i += run;
            }
            (parts, mult)
        })
        .collect()
}

fn factorial_u64(k: u64) -> u64 {
    (1..=k).product()
}

/// Sign conventions for the expansion constants.
///
/// The defaults are the values obtained from the Fourier transform of
/// `|v|^{2k} e^{-|v|}`; the flags reproduce the alternative signs found in
/// some printed versions of the formulas, for calibration runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ConstantSigns {
    /// Flip the sign for even `n` and `2k ≥ n`.
    pub flip_even_tail: bool,
    /// Flip the sign of the logarithmic constants for odd `n` and `k ≥ (n+1)/2`.
    pub flip_log: bool,
}

/// Number of distinct orderings of a multiset given as a sorted list.
pub fn multiset_orderings(sorted: &[u32]) -> u64 {
    let mut total: u64 = (1..=sorted.len() as u64).product();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        total /= (1..=(j - i) as u64).product::<u64>();
        i = j;
    }
    total
}

/// A normalized constant `𝔠_{k,n}/(n!ω_n)`, with a flag telling whether it
/// multiplies `K^{k−μ}·log K` instead of the plain power `K^{k−μ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrakC {
    pub value: Rat,
    pub log: bool,
}

/// `𝔠_{k,n}/(n!ω_n)`, a rational number.
pub fn frak_c_hat(k: u32, n: u32, signs: ConstantSigns) -> FrakC {
    assert!(k >= 1 && n >= 1);
    let sign = |e: u32| if e % 2 == 0 { Rat::ONE } else { Rat::int(-1) };
    let four_k_fact = &Rat::int(4).pow(k as i32) * &Rat::factorial(k);
    if n % 2 == 1 && 2 * k > n {
        let mu = n.div_ceil(2);
        let m = k - mu;
        let den = &(&four_k_fact * &Rat::factorial(m)) * &Rat::factorial(mu - 1);
        let mut value = &sign(k + m + 1) / &den;
        if signs.flip_log {
            value = -value;
        }
        return FrakC { value, log: true };
    }
    // Γ(μ−k)/Γ(μ) = 1/∏_{i=1..k}(μ−i)
    let mu = Rat::new(n as i64 + 1, 2);
    let mut ratio = Rat::ONE;
    for i in 1..=k {
        ratio = &ratio / &(&mu - &Rat::int(i as i64));
    }
    let mut value = &(&sign(k) / &four_k_fact) * &ratio;
    if signs.flip_even_tail && n % 2 == 0 && 2 * k >= n {
        value = -value;
    }
    FrakC { value, log: false }
}

/// `𝔠_{k,n}` including the `n!ω_n` factor.
pub fn frak_c(k: u32, n: u32, signs: ConstantSigns) -> Scalar {
    n_fact_omega(n).scale(&Cq::real(frak_c_hat(k, n, signs).value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(j: u32) -> Vec<Vec<u32>> {
        index_sets(j).into_iter().map(|c| c.parts).collect()
    }

    #[test]
    fn small_index_sets() {
        assert!(parts(0).is_empty());
        assert_eq!(parts(1), vec![vec![3]]);
        assert_eq!(parts(2), vec![vec![4], vec![3, 3]]);
        assert_eq!(parts(3), vec![vec![5], vec![3, 4], vec![4, 3], vec![3, 3, 3]]);
    }

    #[test]
    fn orderings_of_multisets() {
        assert_eq!(multiset_orderings(&[3, 3, 4]), 3);
        assert_eq!(multiset_orderings(&[3, 4, 5]), 6);
        assert_eq!(multiset_orderings(&[3, 3]), 1);
        assert_eq!(multiset_orderings(&[]), 1);
    }

    #[test]
    fn multisets_count_orderings() {
        for j in 0..9 {
            let total: u64 = index_multisets(j).iter().map(|(_, m)| m).sum();
            assert_eq!(total as usize, index_sets(j).len(), "j = {j}");
        }
    }

    #[test]
    fn constants_match_closed_values() {
        let s = ConstantSigns::default();
        assert_eq!(frak_c(1, 3, s).to_string(), "-2*pi");
        assert_eq!(frak_c(2, 3, s).to_string(), "-1/4*pi");
        assert_eq!(frak_c(1, 2, s).to_string(), "-1*pi");
        let flipped = ConstantSigns { flip_even_tail: true, ..s };
        assert_eq!(frak_c(1, 2, flipped).to_string(), "pi");
        let printed_log = ConstantSigns { flip_log: true, ..s };
        assert_eq!(frak_c(2, 3, printed_log).to_string(), "1/4*pi");
    }
}
