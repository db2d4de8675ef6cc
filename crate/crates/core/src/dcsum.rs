//! Closed forms attached to the double cosets `DC(n,q) = P σ_{n-1} P` of
//! `O(2n+1, q)`: the constants `A(n,q)`, `B(n,q)`, `N(n,q)`, the exponential
//! sums over Bruhat cells, and the trace distributions `n(β)` and `n̂(β)`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::classical::{alternating_count, q_binomial, Family};
use crate::error::{Error, Result};
use crate::gf2r::{FieldDescriptor, FieldElement};
use crate::ksum::{kloosterman, kloosterman_gl, kloosterman_table};

/// Exact count of group elements per trace value `β ∈ F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceHistogram {
    field: FieldDescriptor,
    counts: Vec<BigUint>,
}

impl TraceHistogram {
    /// `counts[b]` is the count for the element with bits `b`.
    pub fn from_counts(field: FieldDescriptor, counts: Vec<BigUint>) -> Self {
        assert_eq!(counts.len(), field.order() as usize);
        TraceHistogram { field, counts }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn count(&self, beta: FieldElement) -> BigUint {
        self.counts[beta.bits() as usize].clone()
    }

    pub fn count_bits(&self, beta: u32) -> BigUint {
        self.counts[beta as usize].clone()
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn iter(&self) -> impl Iterator<Item = (FieldElement, &BigUint)> + '_ {
        self.field.elements().zip(self.counts.iter())
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Elements with a nonzero count.
    pub fn support(&self) -> Vec<FieldElement> {
        self.iter().filter(|(_, c)| !c.is_zero()).map(|(b, _)| b).collect()
    }

    /// `Σ_β count(β)·β` in `F_q`.
    pub fn weighted_sum(&self) -> FieldElement {
        self.iter()
            .filter(|(_, c)| c.is_odd())
            .fold(self.field.zero(), |acc, (b, _)| acc + b)
    }

    /// `Σ_β count(β)·λ(cβ)`, i.e. `Σ_w λ(c Tr w)` over the counted elements.
    pub fn character_sum(&self, c: FieldElement) -> BigInt {
        self.iter()
            .map(|(b, n)| {
                let v = BigInt::from_biguint(Sign::Plus, n.clone());
                if (c * b).trace() == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum()
    }

    /// Counts sorted by value; a basis-independent fingerprint.
    pub fn sorted_counts(&self) -> Vec<BigUint> {
        let mut v = self.counts.clone();
        v.sort();
        v
    }
}

/// `A(n,q)`, `B(n,q)` and `N(n,q) = A·B = |DC(n,q)|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefSet {
    pub n: u32,
    pub q: u32,
    pub a: BigUint,
    pub b: BigUint,
    pub n_total: BigUint,
}

fn require_odd(n: u32) -> Result<()> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("n = {n} must be odd and positive")));
    }
    Ok(())
}

fn big_pow(q: u32, e: u32) -> BigUint {
    BigUint::from(q).pow(e)
}

/// `Π_{j=1}^{m} (q^{step·j - offset} - 1)`.
fn prod_minus_one(q: u32, m: u32, step: u32, offset: u32) -> BigUint {
    (1..=m).map(|j| big_pow(q, step * j - offset) - 1u32).product()
}

pub fn coefs(n: u32, field: &FieldDescriptor) -> Result<CoefSet> {
    require_odd(n)?;
    let q = field.order();
    let half = (n - 1) / 2;
    let a = big_pow(q, (5 * n * n - 1) / 4) * q_binomial(n, 1, q) * prod_minus_one(q, half, 2, 1);
    let b = big_pow(q, (n - 1) * (n - 1) / 4) * (big_pow(q, n) - 1u32) * prod_minus_one(q, half, 2, 0);
    let n_total = &a * &b;
    Ok(CoefSet { n, q, a, b, n_total })
}

fn signed(x: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x)
}

fn check_cell(n: u32, r: u32, c: FieldElement) -> Result<()> {
    if n == 0 || r > n {
        return Err(Error::OutOfRange(format!("cell r = {r} for n = {n}")));
    }
    if c.is_zero() {
        return Err(Error::Precondition("c must be nonzero".into()));
    }
    Ok(())
}

/// `Σ_{w ∈ P σ_r P} ψ(Tr w)` over `O(2n+1, q)` with `ψ = λ(c ·)`, in the
/// closed product form: zero for odd `r`, otherwise
/// `ψ(1) q^{binom(n+1,2)} q^{rn - r²/4} [n r]_q Π_{j≤r/2}(q^{2j-1}-1) K_{GL(n-r)}(ψ; 1)`.
pub fn expsum_closed(n: u32, r: u32, field: &FieldDescriptor, c: FieldElement) -> Result<BigInt> {
    check_cell(n, r, c)?;
    if r % 2 == 1 {
        return Ok(BigInt::zero());
    }
    let q = field.order();
    let scale = big_pow(q, n * (n + 1) / 2 + r * n - r * r / 4)
        * q_binomial(n, r, q)
        * prod_minus_one(q, r / 2, 2, 1);
    let kgl = kloosterman_gl(field, n - r, field.one(), c)?;
    Ok(BigInt::from(c.lambda()) * signed(scale) * kgl)
}

/// The same sum assembled from its factors: transversal size `|A_r \ P|`, the
/// unipotent count `q^{binom(n+1,2)} q^{r(n-r)}`, and the number `a_r` of
/// nonsingular alternating `r x r` matrices.
pub fn expsum_factored(n: u32, r: u32, field: &FieldDescriptor, c: FieldElement) -> Result<BigInt> {
    check_cell(n, r, c)?;
    let q = field.order();
    let transversal = big_pow(q, r * (r + 1) / 2) * q_binomial(n, r, q);
    let scale = big_pow(q, n * (n + 1) / 2 + r * (n - r)) * transversal * alternating_count(r, field);
    let kgl = kloosterman_gl(field, n - r, field.one(), c)?;
    Ok(BigInt::from(c.lambda()) * signed(scale) * kgl)
}

/// Cell sum for either family. The symplectic cell differs from the
/// orthogonal one by the factor `ψ(1) = ±1`.
pub fn expsum_cell(n: u32, r: u32, field: &FieldDescriptor, c: FieldElement, family: Family) -> Result<BigInt> {
    let orth = expsum_closed(n, r, field, c)?;
    Ok(match family {
        Family::Orthogonal => orth,
        Family::Symplectic => orth * c.lambda(),
    })
}

/// `Σ_{w ∈ DC(n,q)} λ(c Tr w) = λ(c) A(n,q) K(λ; c)`.
pub fn expsum_dc(n: u32, field: &FieldDescriptor, c: FieldElement) -> Result<BigInt> {
    require_odd(n)?;
    if c.is_zero() {
        return Err(Error::Precondition("c must be nonzero".into()));
    }
    let a = coefs(n, field)?.a;
    let k = kloosterman_table(field).get(c)?;
    Ok(BigInt::from(c.lambda() * k) * signed(a))
}

/// Which of the three slots of the trace distribution an element occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Weight `B + 1`.
    Base,
    /// Weight `B + q + 1`.
    TraceZero,
    /// Weight `B - q + 1`.
    TraceOne,
}

impl Slot {
    fn offset(&self, q: u32) -> BigInt {
        let q = BigInt::from(q);
        match self {
            Slot::Base => BigInt::one(),
            Slot::TraceZero => q + 1,
            Slot::TraceOne => BigInt::one() - q,
        }
    }
}

/// Slot of `β` in `n(β)`: `β = 1` first, then by `tr((β-1)^{-1})`.
pub fn dc_slot(beta: FieldElement) -> Slot {
    let one = beta.field().one();
    if beta == one {
        Slot::Base
    } else if (beta + one).inv().expect("β ≠ 1").trace() == 0 {
        Slot::TraceZero
    } else {
        Slot::TraceOne
    }
}

/// Slot of `β` in `n̂(β)`: `β = 0` first, then by `tr(β^{-1})`.
pub fn dchat_slot(beta: FieldElement) -> Slot {
    if beta.is_zero() {
        Slot::Base
    } else if beta.inv().expect("β ≠ 0").trace() == 0 {
        Slot::TraceZero
    } else {
        Slot::TraceOne
    }
}

fn slot_count(cs: &CoefSet, slot: Slot) -> Result<BigUint> {
    let a = signed(cs.a.clone());
    let num = &a * (signed(cs.b.clone()) + slot.offset(cs.q));
    let (quot, rem) = num.div_rem(&BigInt::from(cs.q));
    if !rem.is_zero() || quot.sign() == Sign::Minus {
        return Err(Error::NonIntegral(format!("trace count {num}/{}", cs.q)));
    }
    Ok(quot.to_biguint().expect("nonnegative"))
}

/// `n(β) = |{w ∈ DC(n,q) : Tr w = β}|` in closed form.
pub fn n_beta(n: u32, field: &FieldDescriptor, beta: FieldElement) -> Result<BigUint> {
    slot_count(&coefs(n, field)?, dc_slot(beta))
}

/// `n̂(β)`, the trace distribution of the symplectic double coset.
pub fn nhat_beta(n: u32, field: &FieldDescriptor, beta: FieldElement) -> Result<BigUint> {
    slot_count(&coefs(n, field)?, dchat_slot(beta))
}

/// The full closed-form histogram `β ↦ n(β)`.
pub fn dc_histogram_closed(n: u32, field: &FieldDescriptor) -> Result<TraceHistogram> {
    let cs = coefs(n, field)?;
    let counts = field
        .elements()
        .map(|b| slot_count(&cs, dc_slot(b)))
        .collect::<Result<_>>()?;
    Ok(TraceHistogram::from_counts(*field, counts))
}

/// The full closed-form histogram `β ↦ n̂(β)`.
pub fn dchat_histogram_closed(n: u32, field: &FieldDescriptor) -> Result<TraceHistogram> {
    let cs = coefs(n, field)?;
    let counts = field
        .elements()
        .map(|b| slot_count(&cs, dchat_slot(b)))
        .collect::<Result<_>>()?;
    Ok(TraceHistogram::from_counts(*field, counts))
}

/// Right-hand side of `q·n(β) = N + Σ_{a≠0} λ(aβ) Σ_{w∈DC} λ(a Tr w)`,
/// divided by `q`.
pub fn n_beta_via_character_sums(n: u32, field: &FieldDescriptor, beta: FieldElement) -> Result<BigInt> {
    let cs = coefs(n, field)?;
    let mut acc = signed(cs.n_total.clone());
    for a in field.nonzero_elements() {
        acc += expsum_dc(n, field, a)? * (a * beta).lambda();
    }
    let (quot, rem) = acc.div_rem(&BigInt::from(cs.q));
    if !rem.is_zero() {
        return Err(Error::NonIntegral(format!("{acc}/{}", cs.q)));
    }
    Ok(quot)
}

/// `K(ψ; 1)` for `ψ = λ(c ·)`; equal to `K(λ; c)` because `K(λ; c²) = K(λ; c)`.
pub fn kloosterman_at_one(field: &FieldDescriptor, c: FieldElement) -> Result<i64> {
    kloosterman(field, field.one(), c)
}
