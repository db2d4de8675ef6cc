//! Kloosterman sums over `F_{2^r}` and their power moments.
//!
//! Every additive character is `ψ(x) = λ(c·x)` for a unique `c ≠ 0`, so the
//! functions below take `c` to select the character; `c = 1` is `λ` itself.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::classical::{enumerate_gl, gl_order};
use crate::error::{Error, Result};
use crate::gf2r::{FieldDescriptor, FieldElement};

/// `K(λ; a)` for every `a ∈ F_q^*`, by direct summation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KloostermanTable {
    field: FieldDescriptor,
    /// Indexed by element bits; slot 0 is unused and holds 0.
    values: Vec<i64>,
}

impl KloostermanTable {
    pub fn new(field: FieldDescriptor) -> Self {
        let q = field.order();
        let inv: Vec<u32> = (0..q).map(|a| field.inv_bits(a).unwrap_or(0)).collect();
        let mut values = vec![0i64; q as usize];
        for a in 1..q {
            values[a as usize] = (1..q)
                .map(|alpha| field.lambda_bits(alpha ^ field.mul_bits(a, inv[alpha as usize])))
                .sum();
        }
        KloostermanTable { field, values }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn get(&self, a: FieldElement) -> Result<i64> {
        if *a.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.values[a.bits() as usize])
    }

    /// `K(λ; a)` for `a` given as nonzero element bits.
    pub fn value_bits(&self, a: u32) -> i64 {
        debug_assert!(a != 0);
        self.values[a as usize]
    }

    /// `(a, K(λ; a))` over `F_q^*` in bit order.
    pub fn iter(&self) -> impl Iterator<Item = (FieldElement, i64)> + '_ {
        self.field.nonzero_elements().map(move |a| (a, self.values[a.bits() as usize]))
    }
}

/// The per-process table for `field`, built on first use.
pub fn kloosterman_table(field: &FieldDescriptor) -> Arc<KloostermanTable> {
    static CACHE: OnceLock<Mutex<HashMap<FieldDescriptor, Arc<KloostermanTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("cache poisoned").get(field) {
        return Arc::clone(t);
    }
    let table = Arc::new(KloostermanTable::new(*field));
    cache
        .lock()
        .expect("cache poisoned")
        .entry(*field)
        .or_insert(table)
        .clone()
}

fn require_nonzero(x: FieldElement, what: &str) -> Result<()> {
    if x.is_zero() {
        return Err(Error::Precondition(format!("{what} must be nonzero")));
    }
    Ok(())
}

fn same_field(field: &FieldDescriptor, xs: &[FieldElement]) -> Result<()> {
    if xs.iter().any(|x| x.field() != field) {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// `K(ψ; a) = Σ_{α ≠ 0} ψ(α + a α^{-1})` with `ψ = λ(c ·)`.
pub fn kloosterman(field: &FieldDescriptor, a: FieldElement, c: FieldElement) -> Result<i64> {
    same_field(field, &[a, c])?;
    require_nonzero(a, "a")?;
    require_nonzero(c, "c")?;
    Ok(field
        .nonzero_elements()
        .map(|alpha| (c * (alpha + a * alpha.inv().expect("nonzero"))).lambda())
        .sum())
}

/// Power moments of `K(λ; ·)`: over all of `F_q^*`, and split by `tr(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moments {
    pub h: u32,
    pub mk: BigInt,
    pub t0k: BigInt,
    pub t1k: BigInt,
}

/// `MK^h`, `T₀K^h`, `T₁K^h`. At `h = 0` every term is 1, so these count
/// `F_q^*` and its two trace classes.
pub fn moments(field: &FieldDescriptor, h: u32) -> Moments {
    let table = kloosterman_table(field);
    let mut t0k = BigInt::zero();
    let mut t1k = BigInt::zero();
    for (a, k) in table.iter() {
        let term = BigInt::from(k).pow(h);
        if a.trace() == 0 {
            t0k += term;
        } else {
            t1k += term;
        }
    }
    let mk = &t0k + &t1k;
    Moments { h, mk, t0k, t1k }
}

/// `K_{GL(t,q)}(ψ; a)` from the three-term recursion in `t`, starting at
/// `K_{GL(0,q)} = 1` and `K_{GL(1,q)} = K(ψ; a)`.
pub fn kloosterman_gl(field: &FieldDescriptor, t: u32, a: FieldElement, c: FieldElement) -> Result<BigInt> {
    let k1 = BigInt::from(kloosterman(field, a, c)?);
    let q = BigInt::from(field.order());
    let mut prev = BigInt::one(); // t - 2
    let mut cur = k1.clone(); // t - 1
    if t == 0 {
        return Ok(prev);
    }
    for s in 2..=t {
        let next = q.pow(s - 1) * &cur * &k1 + q.pow(2 * s - 2) * (q.pow(s - 1) - 1) * &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `Σ_{w ∈ GL(t,q)} ψ(Tr w + a Tr w^{-1})` by enumerating the group.
pub fn kloosterman_gl_bruteforce(
    field: &FieldDescriptor,
    t: u32,
    a: FieldElement,
    c: FieldElement,
    budget: u64,
) -> Result<BigInt> {
    same_field(field, &[a, c])?;
    require_nonzero(a, "a")?;
    require_nonzero(c, "c")?;
    if gl_order(t, field.order()) > budget.into() {
        return Err(Error::BudgetExceeded { needed: gl_order(t, field.order()).to_string(), budget });
    }
    let mut acc = 0i64;
    for w in enumerate_gl(*field, t as usize, budget)? {
        let tr = w.trace()?;
        let tr_inv = w.inverse()?.trace()?;
        acc += (c * (tr + a * tr_inv)).lambda();
    }
    Ok(BigInt::from(acc))
}

/// `Σ_{α ∉ {0,1}} λ(β / (α² + α))`, which equals `K(λ; β) - 1`.
pub fn theta_character_sum(field: &FieldDescriptor, beta: FieldElement) -> Result<i64> {
    same_field(field, &[beta])?;
    require_nonzero(beta, "beta")?;
    Ok(field
        .elements()
        .skip(2)
        .map(|alpha| (beta * (alpha.square() + alpha).inv().expect("α ∉ {0,1}")).lambda())
        .sum())
}

/// `Σ_{a ≠ 0} λ(aβ) K(λ; a)`; equals `q λ(β^{-1}) + 1` for `β ≠ 0` and 1 at 0.
pub fn twisted_sum(field: &FieldDescriptor, beta: FieldElement) -> Result<i64> {
    same_field(field, &[beta])?;
    let table = kloosterman_table(field);
    Ok(table.iter().map(|(a, k)| (a * beta).lambda() * k).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::DEFAULT_BUDGET;

    fn f(r: u32) -> FieldDescriptor {
        FieldDescriptor::new(r).unwrap()
    }

    #[test]
    fn kloosterman_examples() {
        for (r, expect) in [(1, 1), (2, 3), (3, -5)] {
            let fd = f(r);
            assert_eq!(kloosterman(&fd, fd.one(), fd.one()).unwrap(), expect);
        }
        let fd = f(3);
        assert!(kloosterman(&fd, fd.zero(), fd.one()).is_err());
        assert!(kloosterman(&fd, fd.one(), fd.zero()).is_err());
        assert!(kloosterman(&fd, f(2).one(), fd.one()).is_err());
    }

    #[test]
    fn table_agrees_with_direct_sum() {
        for r in 1..=6 {
            let fd = f(r);
            let table = kloosterman_table(&fd);
            for a in fd.nonzero_elements() {
                assert_eq!(table.get(a).unwrap(), kloosterman(&fd, a, fd.one()).unwrap());
            }
        }
    }

    #[test]
    fn twisted_character_is_a_substitution() {
        // K(λ(c·); a) = K(λ; a c^2) by α ↦ cα.
        let fd = f(4);
        for a in fd.nonzero_elements() {
            for c in fd.nonzero_elements() {
                let lhs = kloosterman(&fd, a, c).unwrap();
                let rhs = kloosterman(&fd, a * c.square(), fd.one()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn moment_examples() {
        let m = moments(&f(3), 1);
        assert_eq!((m.mk, m.t1k, m.t0k), (1.into(), 4.into(), (-3).into()));
        let m = moments(&f(2), 1);
        assert_eq!((m.mk, m.t1k, m.t0k), (1.into(), (-2).into(), 3.into()));
        assert_eq!(moments(&f(3), 3).t1k, BigInt::from(-44));
        assert_eq!(moments(&f(3), 2).mk, BigInt::from(55));
        let m0 = moments(&f(4), 0);
        assert_eq!(m0.mk, BigInt::from(15));
        assert_eq!(m0.t1k, BigInt::from(8));
    }

    #[test]
    fn moments_partition() {
        for r in 1..=8 {
            for h in 0..=10 {
                let m = moments(&f(r), h);
                assert_eq!(m.mk, &m.t0k + &m.t1k);
            }
        }
    }

    #[test]
    fn gl_recursion_examples() {
        let fd = f(1);
        let one = fd.one();
        assert_eq!(kloosterman_gl(&fd, 0, one, one).unwrap(), BigInt::one());
        assert_eq!(kloosterman_gl(&fd, 1, one, one).unwrap(), BigInt::one());
        assert_eq!(kloosterman_gl(&fd, 2, one, one).unwrap(), BigInt::from(6));
        let f8 = f(3);
        for a in f8.nonzero_elements() {
            assert_eq!(
                kloosterman_gl(&f8, 1, a, f8.one()).unwrap(),
                BigInt::from(kloosterman(&f8, a, f8.one()).unwrap())
            );
        }
    }

    #[test]
    fn gl_recursion_matches_enumeration() {
        for (t, r) in [(1u32, 3u32), (2, 1), (2, 2), (3, 1)] {
            let fd = f(r);
            for a in fd.nonzero_elements() {
                for c in fd.nonzero_elements() {
                    assert_eq!(
                        kloosterman_gl(&fd, t, a, c).unwrap(),
                        kloosterman_gl_bruteforce(&fd, t, a, c, DEFAULT_BUDGET).unwrap(),
                        "t = {t}, q = {}, a = {a}, c = {c}",
                        fd.order()
                    );
                }
            }
        }
        let fd = f(1);
        assert_eq!(kloosterman_gl_bruteforce(&fd, 2, fd.one(), fd.one(), DEFAULT_BUDGET).unwrap(), BigInt::from(6));
        assert!(kloosterman_gl_bruteforce(&fd, 4, fd.one(), fd.one(), 100).is_err());
    }

    #[test]
    fn theta_sum_examples() {
        let f2 = f(1);
        assert_eq!(theta_character_sum(&f2, f2.one()).unwrap(), 0);
        let f4 = f(2);
        assert_eq!(theta_character_sum(&f4, f4.one()).unwrap(), 2);
        let f8 = f(3);
        assert_eq!(theta_character_sum(&f8, f8.one()).unwrap(), -6);
        assert!(theta_character_sum(&f8, f8.zero()).is_err());
    }

    #[test]
    fn twisted_sum_examples() {
        for r in 1..=5 {
            let fd = f(r);
            assert_eq!(twisted_sum(&fd, fd.zero()).unwrap(), 1);
        }
        let f8 = f(3);
        assert_eq!(twisted_sum(&f8, f8.one()).unwrap(), -7);
        let f4 = f(2);
        assert_eq!(twisted_sum(&f4, f4.one()).unwrap(), 5);
    }

    #[test]
    fn weil_bound_small_fields() {
        for r in 1..=8 {
            let fd = f(r);
            let q = fd.order() as i64;
            for (_, k) in kloosterman_table(&fd).iter() {
                assert!(k * k <= 4 * q);
            }
        }
    }
}
