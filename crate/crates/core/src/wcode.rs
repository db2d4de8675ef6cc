//! The binary codes `C(DC(n,q)) = {u ∈ F_2^N : u·v(n,q) = 0}` with
//! `v(n,q) = (Tr g_1, ..., Tr g_N)`, and their duals.
//!
//! Whether `u` is a codeword depends only on how many of its ones fall on
//! coordinates of each trace value, so everything here works from a
//! [`TraceHistogram`] rather than the length-`N` vector. The brute-force
//! routines at the bottom materialise the vector for tiny `N`.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::classical::{dc_trace_vector, GroupContext};
use crate::dcsum::{coefs, dc_histogram_closed, dchat_histogram_closed, TraceHistogram};
use crate::error::{Error, Result};
use crate::gf2r::{FieldDescriptor, FieldElement};
use crate::ksum::kloosterman_table;

/// Longest code the brute-force routines will enumerate.
pub const BRUTE_FORCE_MAX_LEN: usize = 24;

/// A code given by its defining trace histogram.
#[derive(Clone, Debug)]
pub struct CodeSpec {
    pub n: u32,
    pub histogram: TraceHistogram,
}

impl CodeSpec {
    /// `C(DC(n,q))` with the closed-form trace distribution.
    pub fn double_coset(n: u32, field: &FieldDescriptor) -> Result<Self> {
        Ok(CodeSpec { n, histogram: dc_histogram_closed(n, field)? })
    }

    /// The symplectic companion code `C(DĈ(n,q))`.
    pub fn symplectic_double_coset(n: u32, field: &FieldDescriptor) -> Result<Self> {
        Ok(CodeSpec { n, histogram: dchat_histogram_closed(n, field)? })
    }

    pub fn length(&self) -> BigUint {
        self.histogram.total()
    }

    pub fn field(&self) -> &FieldDescriptor {
        self.histogram.field()
    }

    pub fn weight_prefix(&self, jmax: usize) -> WeightPrefix {
        weight_prefix(&self.histogram, jmax)
    }
}

/// `C_0, ..., C_jmax` of a weight distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightPrefix {
    pub jmax: usize,
    pub values: Vec<BigUint>,
}

impl WeightPrefix {
    pub fn get(&self, j: usize) -> Option<&BigUint> {
        self.values.get(j)
    }
}

/// Weight of the dual codeword `c(a) = (tr(a Tr g_i))_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualWeight {
    pub a: FieldElement,
    pub weight: BigUint,
    /// Set when `a = 0`, which gives the zero codeword.
    pub zero_codeword: bool,
}

/// `w(c(a)) = ½ A (B - λ(a) K(λ; a))`.
pub fn dual_weight(n: u32, field: &FieldDescriptor, a: FieldElement) -> Result<DualWeight> {
    let cs = coefs(n, field)?;
    if a.is_zero() {
        return Ok(DualWeight { a, weight: BigUint::zero(), zero_codeword: true });
    }
    let k = kloosterman_table(field).get(a)?;
    let inner = BigInt::from_biguint(Sign::Plus, cs.b) - BigInt::from(a.lambda() * k);
    let twice = BigInt::from_biguint(Sign::Plus, cs.a) * inner;
    let weight = (twice / BigInt::from(2)).to_biguint().ok_or_else(|| Error::NonIntegral("negative weight".into()))?;
    Ok(DualWeight { a, weight, zero_codeword: false })
}

/// `Σ_{β : tr(aβ) = 1} count(β)`: the weight of `c(a)` read off a histogram.
pub fn dual_weight_from_histogram(histogram: &TraceHistogram, a: FieldElement) -> BigUint {
    histogram
        .iter()
        .filter(|(b, _)| (a * *b).trace() == 1)
        .map(|(_, c)| c.clone())
        .sum()
}

/// All `a` with `tr(aβ) = 0` on the support of `histogram`: the kernel of
/// `a ↦ c(a)`.
pub fn histogram_kernel(histogram: &TraceHistogram) -> Vec<FieldElement> {
    let support = histogram.support();
    histogram
        .field()
        .elements()
        .filter(|a| support.iter().all(|b| (*a * *b).trace() == 0))
        .collect()
}

/// Kernel of `a ↦ c(a)` for `C(DC(n,q))^⊥`.
pub fn dual_kernel(n: u32, field: &FieldDescriptor) -> Result<Vec<FieldElement>> {
    Ok(histogram_kernel(&dc_histogram_closed(n, field)?))
}

/// `binom(m, ν)` for `ν = 0..=k`.
fn binomial_row(m: &BigUint, k: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(k + 1);
    let mut cur = BigUint::one();
    row.push(cur.clone());
    for nu in 0..k {
        if BigUint::from(nu) >= *m {
            cur = BigUint::zero();
        } else {
            cur = cur * (m - BigUint::from(nu)) / BigUint::from(nu + 1);
        }
        row.push(cur.clone());
    }
    row
}

/// `C_j = Σ Π_β binom(n(β), ν_β)` over `Σ ν_β = j`, `Σ ν_β β = 0`, for
/// `j ≤ jmax`.
///
/// Dynamic programme over field elements with state (ones placed so far,
/// their `F_q`-sum). In characteristic 2, `ν·β` is `β` for odd `ν` and `0`
/// otherwise.
#[allow(clippy::needless_range_loop)]
pub fn weight_prefix(histogram: &TraceHistogram, jmax: usize) -> WeightPrefix {
    let q = histogram.field().order() as usize;
    let mut dp = vec![vec![BigUint::zero(); q]; jmax + 1];
    dp[0][0] = BigUint::one();
    for (beta, m) in histogram.iter() {
        if m.is_zero() {
            continue;
        }
        let row = binomial_row(m, jmax);
        let b = beta.bits() as usize;
        let mut next = vec![vec![BigUint::zero(); q]; jmax + 1];
        for c in 0..=jmax {
            for s in 0..q {
                if dp[c][s].is_zero() {
                    continue;
                }
                for nu in 0..=jmax - c {
                    if row[nu].is_zero() {
                        break;
                    }
                    let t = if nu % 2 == 1 { s ^ b } else { s };
                    next[c + nu][t] += &dp[c][s] * &row[nu];
                }
            }
        }
        dp = next;
    }
    WeightPrefix { jmax, values: dp.into_iter().map(|mut v| v.swap_remove(0)).collect() }
}

/// `C_0..C_jmax` of `C(DC(n,q))` from the closed-form trace distribution.
pub fn weight_prefix_thm_o(n: u32, field: &FieldDescriptor, jmax: usize) -> Result<WeightPrefix> {
    Ok(weight_prefix(&dc_histogram_closed(n, field)?, jmax))
}

/// `Ĉ_0..Ĉ_jmax` of the symplectic companion code.
pub fn weight_prefix_symplectic(n: u32, field: &FieldDescriptor, jmax: usize) -> Result<WeightPrefix> {
    Ok(weight_prefix(&dchat_histogram_closed(n, field)?, jmax))
}

/// The defining vector `v(n,q)` as element bits, in the fixed element order.
pub fn defining_vector(n: u32, field: &FieldDescriptor, budget: u64) -> Result<Vec<u32>> {
    let ctx = GroupContext::orthogonal(n as usize, *field)?;
    Ok(dc_trace_vector(&ctx, (n - 1) as usize, budget)?
        .into_iter()
        .map(|e| e.bits())
        .collect())
}

fn small_length(n: u32, field: &FieldDescriptor) -> Result<usize> {
    let len = coefs(n, field)?.n_total;
    match len.to_usize() {
        Some(l) if l <= BRUTE_FORCE_MAX_LEN => Ok(l),
        _ => Err(Error::BudgetExceeded {
            needed: format!("2^{len}"),
            budget: 1 << BRUTE_FORCE_MAX_LEN,
        }),
    }
}

/// Full weight distribution of `C(DC(n,q))` by testing every binary vector
/// of length `N ≤ 24` against the enumerated `v(n,q)`.
pub fn code_bruteforce_wd(n: u32, field: &FieldDescriptor, budget: u64) -> Result<Vec<u64>> {
    let len = small_length(n, field)?;
    let v = defining_vector(n, field, budget)?;
    let mut dist = vec![0u64; len + 1];
    for u in 0u32..(1 << len) {
        let dot = (0..len).filter(|i| u >> i & 1 == 1).fold(0u32, |acc, i| acc ^ v[i]);
        if dot == 0 {
            dist[u.count_ones() as usize] += 1;
        }
    }
    Ok(dist)
}

/// Basis of `{x : x·row = 0 for every row}` over `F_2`, vectors packed into
/// the low `len` bits.
fn gf2_nullspace(rows: &[u32], len: usize) -> Vec<u32> {
    let mut reduced: Vec<u32> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for &row in rows {
        let mut x = row;
        for (&p, &b) in pivots.iter().zip(&reduced) {
            if x >> p & 1 == 1 {
                x ^= b;
            }
        }
        if x == 0 {
            continue;
        }
        let p = x.trailing_zeros() as usize;
        for b in reduced.iter_mut() {
            if *b >> p & 1 == 1 {
                *b ^= x;
            }
        }
        reduced.push(x);
        pivots.push(p);
    }
    (0..len)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = 1u32 << free;
            for (&p, &b) in pivots.iter().zip(&reduced) {
                if b >> free & 1 == 1 {
                    x |= 1 << p;
                }
            }
            x
        })
        .collect()
}

fn gf2_span(basis: &[u32]) -> HashSet<u32> {
    let mut span = HashSet::from([0u32]);
    for &b in basis {
        let more: Vec<u32> = span.iter().map(|x| x ^ b).collect();
        span.extend(more);
    }
    span
}

/// The dual code as `(a, w(c(a)))` for every `a ∈ F_q`.
#[derive(Clone, Debug)]
pub struct DualEnumeration {
    pub entries: Vec<DualWeight>,
    /// Number of distinct codewords among the `c(a)`, i.e. `q / |kernel|`.
    pub distinct_codewords: usize,
    /// For `N ≤ 24`: whether `{c(a)}` equals the dual computed by `F_2`
    /// linear algebra from the code itself.
    pub delsarte_verified: Option<bool>,
}

impl DualEnumeration {
    /// Weights of the distinct dual codewords (one per kernel coset).
    pub fn distinct_weights(&self, kernel: &[FieldElement]) -> Vec<BigUint> {
        let mut seen: HashSet<u32> = HashSet::new();
        let mut out = Vec::new();
        for e in &self.entries {
            if seen.contains(&e.a.bits()) {
                continue;
            }
            for k in kernel {
                seen.insert((e.a + *k).bits());
            }
            out.push(e.weight.clone());
        }
        out
    }
}

pub fn dual_enumerate(n: u32, field: &FieldDescriptor, budget: u64) -> Result<DualEnumeration> {
    let entries = field
        .elements()
        .map(|a| dual_weight(n, field, a))
        .collect::<Result<Vec<_>>>()?;
    let kernel = dual_kernel(n, field)?;
    let distinct_codewords = field.order() as usize / kernel.len();
    let delsarte_verified = match small_length(n, field) {
        Ok(len) => {
            let v = defining_vector(n, field, budget)?;
            let traced: HashSet<u32> = field
                .elements()
                .map(|a| {
                    (0..len)
                        .filter(|&i| (a * field.elem(v[i])).trace() == 1)
                        .fold(0u32, |acc, i| acc | 1 << i)
                })
                .collect();
            // C = kernel of the bit-plane matrix of v; its dual is the
            // kernel of a basis of C.
            let planes: Vec<u32> = (0..field.degree())
                .map(|k| (0..len).filter(|&i| v[i] >> k & 1 == 1).fold(0u32, |acc, i| acc | 1 << i))
                .collect();
            let code_basis = gf2_nullspace(&planes, len);
            let dual = gf2_span(&gf2_nullspace(&code_basis, len));
            let weights_ok = entries.iter().all(|e| {
                let word = (0..len)
                    .filter(|&i| (e.a * field.elem(v[i])).trace() == 1)
                    .count();
                BigUint::from(word) == e.weight
            });
            Some(traced == dual && traced.len() == distinct_codewords && weights_ok)
        }
        Err(_) => None,
    };
    Ok(DualEnumeration { entries, distinct_codewords, delsarte_verified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::DEFAULT_BUDGET;
    use crate::dcsum::n_beta;

    fn f(r: u32) -> FieldDescriptor {
        FieldDescriptor::new(r).unwrap()
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn binom(n: u64, k: u64) -> BigUint {
        binomial_row(&big(n), k as usize)[k as usize].clone()
    }

    /// Direct sum over every `{ν_β}` with `Σ ν_β = j`.
    fn compositions_oracle(h: &TraceHistogram, j: usize) -> BigUint {
        let q = h.field().order() as usize;
        let counts = h.counts();
        fn rec(idx: usize, left: usize, sum: u32, q: usize, counts: &[BigUint]) -> BigUint {
            if idx == q {
                return if left == 0 && sum == 0 { BigUint::one() } else { BigUint::zero() };
            }
            let mut acc = BigUint::zero();
            for nu in 0..=left {
                let b = binomial_row(&counts[idx], nu)[nu].clone();
                if b.is_zero() {
                    continue;
                }
                let s = if nu % 2 == 1 { sum ^ idx as u32 } else { sum };
                acc += b * rec(idx + 1, left - nu, s, q, counts);
            }
            acc
        }
        rec(0, j, 0, q, counts)
    }

    #[test]
    fn dual_weight_examples() {
        let f8 = f(3);
        assert_eq!(dual_weight(1, &f8, f8.one()).unwrap().weight, big(8));
        let tr0 = f8.nonzero_elements().find(|a| a.trace() == 0).unwrap();
        assert_eq!(dual_weight(1, &f8, tr0).unwrap().weight, big(32));
        let f4 = f(2);
        let g = f4.element(2).unwrap();
        assert_eq!(dual_weight(1, &f4, g).unwrap().weight, big(4));
        let z = dual_weight(1, &f4, f4.zero()).unwrap();
        assert!(z.zero_codeword && z.weight.is_zero());
    }

    #[test]
    fn dual_weight_matches_histogram_weight() {
        for (n, deg) in [(1u32, 1u32), (1, 2), (1, 3), (1, 4), (1, 5), (3, 1), (3, 2), (5, 1)] {
            let fd = f(deg);
            let h = dc_histogram_closed(n, &fd).unwrap();
            for a in fd.elements() {
                assert_eq!(dual_weight(n, &fd, a).unwrap().weight, dual_weight_from_histogram(&h, a));
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let bits = |v: Vec<FieldElement>| v.into_iter().map(|e| e.bits()).collect::<Vec<_>>();
        assert_eq!(bits(dual_kernel(1, &f(3)).unwrap()), vec![0]);
        assert_eq!(bits(dual_kernel(1, &f(2)).unwrap()), vec![0, 1]);
        assert_eq!(bits(dual_kernel(3, &f(1)).unwrap()), vec![0]);
        for deg in [1, 4, 5, 6] {
            assert_eq!(bits(dual_kernel(1, &f(deg)).unwrap()), vec![0]);
        }
    }

    #[test]
    fn prefix_examples() {
        let f8 = f(3);
        let c = weight_prefix_thm_o(1, &f8, 2).unwrap();
        assert_eq!(c.values, vec![big(1), big(0), big(388)]);
        assert_eq!(c.values[2], binom(8, 2) + binom(16, 2) * 3u32);
        let chat = weight_prefix_symplectic(3, &f(1), 1).unwrap();
        assert_eq!(chat.values[1], big(308224));
        let c = weight_prefix_thm_o(3, &f(1), 1).unwrap();
        assert_eq!(c.values[1], n_beta(3, &f(1), f(1).zero()).unwrap());
    }

    #[test]
    fn prefix_matches_composition_oracle() {
        for deg in 1..=4 {
            let fd = f(deg);
            for h in [dc_histogram_closed(1, &fd).unwrap(), dchat_histogram_closed(1, &fd).unwrap(), dc_histogram_closed(3, &fd).unwrap()] {
                let prefix = weight_prefix(&h, 5);
                for j in 0..=5 {
                    assert_eq!(prefix.values[j], compositions_oracle(&h, j), "q = {}, j = {j}", fd.order());
                }
            }
        }
    }

    #[test]
    fn full_distribution_n1_q4() {
        let f4 = f(2);
        let full = weight_prefix_thm_o(1, &f4, 12).unwrap();
        let brute = code_bruteforce_wd(1, &f4, DEFAULT_BUDGET).unwrap();
        for j in 0..=12u64 {
            let formula: BigUint = (0..=j.min(4)).step_by(2).map(|v1| binom(4, v1) * binom(8, j - v1)).sum();
            assert_eq!(full.values[j as usize], formula);
            assert_eq!(full.values[j as usize], big(brute[j as usize]));
            assert_eq!(brute[j as usize], brute[12 - j as usize]);
        }
        assert_eq!(brute.iter().sum::<u64>(), 2048);
    }

    #[test]
    fn full_distribution_n1_q2() {
        let f2 = f(1);
        assert_eq!(code_bruteforce_wd(1, &f2, DEFAULT_BUDGET).unwrap(), vec![1, 0, 1]);
        assert_eq!(weight_prefix_thm_o(1, &f2, 2).unwrap().values, vec![big(1), big(0), big(1)]);
        assert!(code_bruteforce_wd(1, &f(3), DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn dual_enumeration_examples() {
        let f8 = f(3);
        let d = dual_enumerate(1, &f8, DEFAULT_BUDGET).unwrap();
        let mut weights: Vec<u64> = d.entries.iter().map(|e| e.weight.to_u64().unwrap()).collect();
        weights.sort();
        assert_eq!(weights, vec![0, 8, 32, 32, 32, 40, 40, 40]);
        assert_eq!(d.distinct_codewords, 8);
        assert_eq!(d.delsarte_verified, None);

        let f2 = f(1);
        let d = dual_enumerate(1, &f2, DEFAULT_BUDGET).unwrap();
        let weights: Vec<u64> = d.entries.iter().map(|e| e.weight.to_u64().unwrap()).collect();
        assert_eq!(weights, vec![0, 2]);
        assert_eq!(d.delsarte_verified, Some(true));

        let f4 = f(2);
        let d = dual_enumerate(1, &f4, DEFAULT_BUDGET).unwrap();
        assert_eq!(d.distinct_codewords, 2);
        assert_eq!(d.delsarte_verified, Some(true));
        let kernel = dual_kernel(1, &f4).unwrap();
        let mut distinct = d.distinct_weights(&kernel);
        distinct.sort();
        assert_eq!(distinct, vec![big(0), big(4)]);
    }

    #[test]
    fn nullspace_basics() {
        // single row 0b11 over length 2: kernel spanned by 0b11
        assert_eq!(gf2_span(&gf2_nullspace(&[0b11], 2)), HashSet::from([0, 0b11]));
        assert_eq!(gf2_nullspace(&[], 3).len(), 3);
    }
}
