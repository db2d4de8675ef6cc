//! Pless power moment identity and the recursions for Kloosterman moments
//! that it yields when applied to the double-coset codes.
//!
//! All arithmetic is exact. Quantities that are integers only after
//! cancellation are computed as rationals and checked for integrality; a
//! fractional result is an error, never rounded.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dcsum::{coefs, CoefSet};
use crate::error::{Error, Result};
use crate::gf2r::FieldDescriptor;
use crate::ksum::moments;
use crate::wcode::{weight_prefix_symplectic, weight_prefix_thm_o, WeightPrefix};

fn signed(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

fn rat(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

fn factorial(t: u32) -> BigInt {
    (1..=t).map(BigInt::from).product()
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `binom(m, k)` for a large `m` and small `k`; zero when `k > m`.
fn binomial_big(m: &BigUint, k: u32) -> BigInt {
    let m = signed(m);
    if BigInt::from(k) > m {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (&m - i) / (i + 1))
}

/// `2^e` for a possibly negative exponent.
fn two_pow(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        rat(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Stirling number of the second kind by the alternating sum
/// `S(h,t) = (1/t!) Σ_{j=0}^{t} (-1)^{t-j} binom(t,j) j^h`.
pub fn stirling2(h: u32, t: u32) -> BigInt {
    if t > h {
        return BigInt::zero();
    }
    let sum: BigInt = (0..=t)
        .map(|j| {
            let term = binomial(t, j) * BigInt::from(j).pow(h);
            if (t - j).is_multiple_of(2) {
                term
            } else {
                -term
            }
        })
        .sum();
    sum / factorial(t)
}

/// `Σ_{t=j}^{h} t! S(h,t) 2^{shift - t} binom(N - j, N - t)`, the inner sum of
/// the binary Pless identity. The binomial is taken as `binom(N-j, t-j)`.
fn pless_inner(len: &BigUint, j: u32, h: u32, shift: i64) -> BigRational {
    let reduced = len - BigUint::from(j);
    (j..=h)
        .map(|t| {
            let coeff = factorial(t) * stirling2(h, t) * binomial_big(&reduced, t - j);
            rat(coeff) * two_pow(shift - t as i64)
        })
        .sum()
}

/// `Σ_{j ≤ min(N,h)} (-1)^j W_j · pless_inner(j)` for a weight prefix `W`.
fn pless_outer(len: &BigUint, prefix: &WeightPrefix, h: u32, shift: i64) -> Result<BigRational> {
    let top = if BigUint::from(h) < *len { h as usize } else { len.iter_u64_digits().next().unwrap_or(0) as usize };
    if top > prefix.jmax {
        return Err(Error::Precondition(format!(
            "weight prefix up to j = {} is too short for h = {h}",
            prefix.jmax
        )));
    }
    Ok((0..=top)
        .map(|j| {
            let w = rat(signed(&prefix.values[j])) * pless_inner(len, j as u32, h, shift);
            if j % 2 == 0 {
                w
            } else {
                -w
            }
        })
        .sum())
}

/// Both sides of the binary Pless power moment identity for a code `B` of
/// dimension `k` whose dual has weight distribution `prefix`:
/// `Σ_{c ∈ B} w(c)^h = Σ_j (-1)^j C_j Σ_t t! S(h,t) 2^{k-t} binom(N-j, N-t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlessSides {
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl PlessSides {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `dual_weights` lists the weight of every codeword of `B` (with
/// multiplicity); `prefix` is the weight distribution of `B^⊥`.
pub fn pless_check(len: &BigUint, k: u32, dual_weights: &[BigUint], prefix: &WeightPrefix, h: u32) -> Result<PlessSides> {
    let lhs: BigInt = dual_weights.iter().map(|w| signed(w).pow(h)).sum();
    let rhs = pless_outer(len, prefix, h, k as i64)?;
    Ok(PlessSides { lhs: rat(lhs), rhs })
}

/// `n` odd with `n ≥ 3`, or `n = 1` with `q ≥ 8`.
pub fn check_recursion_range(n: u32, field: &FieldDescriptor) -> Result<()> {
    let ok = n % 2 == 1 && (n >= 3 || field.order() >= 8);
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "(n, q) = ({n}, {}) is outside the valid range: n odd >= 3 with any q, or n = 1 with q >= 8",
            field.order()
        )))
    }
}

fn require_integer(x: BigRational, what: &str) -> Result<BigInt> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::NonIntegral(format!("{what} = {x}")))
    }
}

/// Result of evaluating the trace-one moment recursion at one `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionReport {
    pub n: u32,
    pub q: u32,
    pub h: u32,
    /// `D_j = C_j - Ĉ_j` for `j = 0..=h`.
    pub d_values: Vec<BigInt>,
    pub t1k_recursive: BigInt,
    pub t1k_direct: Option<BigInt>,
    pub verdict: Option<bool>,
}

/// Evaluates the recursion for `T₁K^h` over one field, memoising the lower
/// odd moments it consumes.
pub struct RecursionSession {
    n: u32,
    field: FieldDescriptor,
    coefs: CoefSet,
    memo: HashMap<u32, BigInt>,
    prefixes: Option<(WeightPrefix, WeightPrefix)>,
}

impl RecursionSession {
    pub fn new(n: u32, field: &FieldDescriptor) -> Result<Self> {
        check_recursion_range(n, field)?;
        Ok(RecursionSession { n, field: *field, coefs: coefs(n, field)?, memo: HashMap::new(), prefixes: None })
    }

    fn prefixes(&mut self, h: u32) -> Result<&(WeightPrefix, WeightPrefix)> {
        let stale = self.prefixes.as_ref().is_none_or(|(c, _)| c.jmax < h as usize);
        if stale {
            let c = weight_prefix_thm_o(self.n, &self.field, h as usize)?;
            let chat = weight_prefix_symplectic(self.n, &self.field, h as usize)?;
            self.prefixes = Some((c, chat));
        }
        Ok(self.prefixes.as_ref().expect("just filled"))
    }

    /// `D_j = C_j - Ĉ_j`, `j = 0..=h`.
    pub fn d_values(&mut self, h: u32) -> Result<Vec<BigInt>> {
        let (c, chat) = self.prefixes(h)?;
        Ok((0..=h as usize).map(|j| signed(&c.values[j]) - signed(&chat.values[j])).collect())
    }

    /// `T₁K^h` for odd `h` from the recursion.
    pub fn t1k(&mut self, h: u32) -> Result<BigInt> {
        if h.is_multiple_of(2) {
            return Err(Error::Precondition(format!("h = {h} must be odd")));
        }
        if let Some(v) = self.memo.get(&h) {
            return Ok(v.clone());
        }
        let a = signed(&self.coefs.a);
        let b = signed(&self.coefs.b);
        let len = self.coefs.n_total.clone();
        let q = BigInt::from(self.field.order());

        let mut lower = BigInt::zero();
        for l in (1..h).step_by(2) {
            lower += binomial(h, l) * b.pow(h - l) * self.t1k(l)?;
        }
        let d = self.d_values(h)?;
        let mut weighted = BigRational::zero();
        let top = if BigUint::from(h) < len { h } else { len.iter_u64_digits().next().unwrap_or(0) as u32 };
        for (j, dj) in d.iter().enumerate().take(top as usize + 1) {
            let term = rat(dj.clone()) * pless_inner(&len, j as u32, h, h as i64 - 1);
            if j % 2 == 0 {
                weighted += term;
            } else {
                weighted -= term;
            }
        }
        let value = rat(-lower) + rat(q) * weighted / rat(a.pow(h));
        let value = require_integer(value, &format!("T1K^{h}"))?;
        self.memo.insert(h, value.clone());
        Ok(value)
    }

    pub fn report(&mut self, h: u32, compare: bool) -> Result<RecursionReport> {
        let t1k_recursive = self.t1k(h)?;
        let d_values = self.d_values(h)?;
        let t1k_direct = compare.then(|| moments(&self.field, h).t1k);
        let verdict = t1k_direct.as_ref().map(|d| *d == t1k_recursive);
        Ok(RecursionReport {
            n: self.n,
            q: self.field.order(),
            h,
            d_values,
            t1k_recursive,
            t1k_direct,
            verdict,
        })
    }
}

/// `T₁K^h` by the recursion, compared against direct summation.
pub fn t1k_recursive(n: u32, field: &FieldDescriptor, h: u32) -> Result<RecursionReport> {
    if h.is_multiple_of(2) {
        return Err(Error::Precondition(format!("h = {h} must be odd")));
    }
    RecursionSession::new(n, field)?.report(h, true)
}

/// `2^{-h} A^h Σ_l (-1)^l binom(h,l) B^{h-l} MK^l` with the given moments.
fn thm_p_lhs(cs: &CoefSet, h: u32, mk: &[BigInt]) -> BigRational {
    let b = signed(&cs.b);
    let sum: BigInt = (0..=h)
        .map(|l| {
            let t = binomial(h, l) * b.pow(h - l) * &mk[l as usize];
            if l % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum();
    rat(signed(&cs.a).pow(h) * sum) * two_pow(-(h as i64))
}

/// `q Σ_j (-1)^j Ĉ_j Σ_t t! S(h,t) 2^{-t} binom(N-j, N-t)`.
fn thm_p_rhs(cs: &CoefSet, field: &FieldDescriptor, h: u32) -> Result<BigRational> {
    let chat = weight_prefix_symplectic(cs.n, field, h as usize)?;
    Ok(rat(BigInt::from(field.order())) * pless_outer(&cs.n_total, &chat, h, 0)?)
}

/// Both sides of the identity tying `MK^0..MK^h` to the symplectic code's
/// weight distribution.
pub fn thm_p_check(n: u32, field: &FieldDescriptor, h: u32) -> Result<PlessSides> {
    check_recursion_range(n, field)?;
    if h == 0 {
        return Err(Error::Precondition("h must be at least 1".into()));
    }
    let cs = coefs(n, field)?;
    let mk: Vec<BigInt> = (0..=h).map(|l| moments(field, l).mk).collect();
    Ok(PlessSides { lhs: thm_p_lhs(&cs, h, &mk), rhs: thm_p_rhs(&cs, field, h)? })
}

/// `MK^h` obtained by solving the same identity for its top term, starting
/// from `MK^0 = q - 1`.
pub fn mk_recursive(n: u32, field: &FieldDescriptor, h: u32) -> Result<BigInt> {
    check_recursion_range(n, field)?;
    let cs = coefs(n, field)?;
    let a = signed(&cs.a);
    let b = signed(&cs.b);
    let mut mk = vec![BigInt::from(field.order() - 1)];
    for m in 1..=h {
        let target = thm_p_rhs(&cs, field, m)? * two_pow(m as i64) / rat(a.pow(m));
        let lower: BigInt = (0..m)
            .map(|l| {
                let t = binomial(m, l) * b.pow(m - l) * &mk[l as usize];
                if l % 2 == 0 {
                    t
                } else {
                    -t
                }
            })
            .sum();
        let top = target - rat(lower);
        let top = if m % 2 == 0 { top } else { -top };
        mk.push(require_integer(top, &format!("MK^{m}"))?);
    }
    Ok(mk.pop().expect("nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wcode::{dual_enumerate, dual_kernel, code_bruteforce_wd, weight_prefix_thm_o};
    use crate::classical::DEFAULT_BUDGET;

    fn f(r: u32) -> FieldDescriptor {
        FieldDescriptor::new(r).unwrap()
    }

    /// Partitions of an `h`-set into `t` nonempty blocks, by the recurrence
    /// `S(h,t) = t S(h-1,t) + S(h-1,t-1)`.
    fn stirling_by_recurrence(h: u32, t: u32) -> BigInt {
        let mut row = vec![BigInt::one()];
        for i in 1..=h {
            let mut next = vec![BigInt::zero(); i as usize + 1];
            for k in 1..=i as usize {
                let stay = if k < row.len() { &row[k] * k } else { BigInt::zero() };
                next[k] = stay + &row[k - 1];
            }
            row = next;
        }
        row.get(t as usize).cloned().unwrap_or_default()
    }

    #[test]
    fn stirling_examples() {
        for h in 1..=10 {
            assert_eq!(stirling2(h, 1), BigInt::one());
        }
        assert_eq!(stirling2(3, 2), BigInt::from(3));
        assert_eq!(stirling2(4, 2), BigInt::from(7));
        assert_eq!(stirling2(0, 0), BigInt::one());
        assert_eq!(stirling2(2, 5), BigInt::zero());
        for h in 0..=12 {
            for t in 0..=h {
                assert_eq!(stirling2(h, t), stirling_by_recurrence(h, t));
            }
        }
    }

    #[test]
    fn pless_worked_example() {
        let f8 = f(3);
        let d = dual_enumerate(1, &f8, DEFAULT_BUDGET).unwrap();
        let weights: Vec<BigUint> = d.entries.iter().map(|e| e.weight.clone()).collect();
        let prefix = weight_prefix_thm_o(1, &f8, 1).unwrap();
        let sides = pless_check(&BigUint::from(56u32), 3, &weights, &prefix, 1).unwrap();
        assert_eq!(sides.lhs, rat(BigInt::from(224)));
        assert!(sides.holds());
    }

    #[test]
    fn pless_degenerate_code() {
        // B = {0} of length 5 has dual F_2^5.
        let prefix = WeightPrefix {
            jmax: 5,
            values: (0..=5).map(|j| binomial(5, j).to_biguint().unwrap()).collect(),
        };
        for h in 1..=5 {
            let sides = pless_check(&BigUint::from(5u32), 0, &[BigUint::zero()], &prefix, h).unwrap();
            assert!(sides.lhs.is_zero());
            assert!(sides.holds(), "h = {h}");
        }
    }

    #[test]
    fn pless_on_q4_code() {
        let f4 = f(2);
        let d = dual_enumerate(1, &f4, DEFAULT_BUDGET).unwrap();
        let kernel = dual_kernel(1, &f4).unwrap();
        let weights = d.distinct_weights(&kernel);
        let brute = code_bruteforce_wd(1, &f4, DEFAULT_BUDGET).unwrap();
        let prefix = WeightPrefix { jmax: 12, values: brute.iter().map(|&c| BigUint::from(c)).collect() };
        for h in 0..=10 {
            let sides = pless_check(&BigUint::from(12u32), 1, &weights, &prefix, h).unwrap();
            assert!(sides.holds(), "h = {h}");
        }
    }

    #[test]
    fn pless_prefix_too_short() {
        let prefix = weight_prefix_thm_o(1, &f(3), 2).unwrap();
        assert!(pless_check(&BigUint::from(56u32), 3, &[], &prefix, 3).is_err());
    }

    #[test]
    fn recursion_examples() {
        let r = t1k_recursive(3, &f(1), 1).unwrap();
        assert_eq!(r.t1k_recursive, BigInt::one());
        assert_eq!(r.d_values[1], BigInt::from(-14336));
        assert_eq!(r.verdict, Some(true));
        let r = t1k_recursive(1, &f(3), 1).unwrap();
        assert_eq!(r.t1k_recursive, BigInt::from(4));
        assert_eq!(r.d_values[1], BigInt::from(-8));
        let r = t1k_recursive(1, &f(3), 3).unwrap();
        assert_eq!(r.t1k_recursive, BigInt::from(-44));
        assert_eq!(r.verdict, Some(true));
    }

    #[test]
    fn recursion_range() {
        assert!(t1k_recursive(1, &f(2), 1).is_err());
        assert!(t1k_recursive(1, &f(1), 1).is_err());
        assert!(t1k_recursive(2, &f(3), 1).is_err());
        assert!(t1k_recursive(3, &f(1), 2).is_err());
    }

    #[test]
    fn session_memo_is_consistent() {
        let mut s = RecursionSession::new(1, &f(4)).unwrap();
        let seven = s.t1k(7).unwrap();
        let fresh = RecursionSession::new(1, &f(4)).unwrap().t1k(7).unwrap();
        assert_eq!(seven, fresh);
        assert_eq!(seven, moments(&f(4), 7).t1k);
    }

    #[test]
    fn thm_p_examples() {
        let s = thm_p_check(1, &f(3), 1).unwrap();
        assert_eq!(s.lhs, rat(BigInt::from(192)));
        assert!(s.holds());
        assert!(thm_p_check(3, &f(1), 1).unwrap().holds());
        assert!(thm_p_check(1, &f(4), 2).unwrap().holds());
    }

    #[test]
    fn mk_examples() {
        assert_eq!(mk_recursive(1, &f(3), 1).unwrap(), BigInt::one());
        assert_eq!(mk_recursive(1, &f(3), 2).unwrap(), BigInt::from(55));
        assert_eq!(mk_recursive(3, &f(1), 1).unwrap(), BigInt::one());
    }
}
