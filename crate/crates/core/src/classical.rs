//! The groups `O(2n+1, q)` and `Sp(2n, q)` in characteristic 2, their maximal
//! parabolic subgroups, Bruhat cells `P σ_r P`, and streaming enumeration of
//! those cells.
//!
//! Matrices act on column vectors. Coordinates are laid out as
//! `e^1..e^n | e^{n+1}..e^{2n} | e^{2n+1}`, the last block present only for the
//! orthogonal family. A parabolic element is
//!
//! ```text
//! [ A  AB     0 ]
//! [ 0  ᵗA^-1  0 ]      A ∈ GL(n,q),  B + ᵗh h alternating
//! [ 0  h      1 ]
//! ```
//!
//! and its symplectic analogue drops the last row and column and asks for a
//! symmetric `B`.

use std::thread;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::dcsum::TraceHistogram;
use crate::error::{Error, Result};
use crate::gf2r::{FieldDescriptor, FieldElement};
use crate::matfq::{is_alternating, MatrixFq};

/// Default cap on the number of streamed group elements.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Orthogonal,
    Symplectic,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Orthogonal => "orthogonal",
            Family::Symplectic => "symplectic",
        }
    }
}

/// A classical group `O(2n+1, q)` or `Sp(2n, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupContext {
    pub n: usize,
    pub field: FieldDescriptor,
    pub family: Family,
}

impl GroupContext {
    pub fn new(n: usize, field: FieldDescriptor, family: Family) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("n must be at least 1".into()));
        }
        Ok(GroupContext { n, field, family })
    }

    pub fn orthogonal(n: usize, field: FieldDescriptor) -> Result<Self> {
        Self::new(n, field, Family::Orthogonal)
    }

    pub fn symplectic(n: usize, field: FieldDescriptor) -> Result<Self> {
        Self::new(n, field, Family::Symplectic)
    }

    /// Size of the matrices in this group.
    pub fn dim(&self) -> usize {
        match self.family {
            Family::Orthogonal => 2 * self.n + 1,
            Family::Symplectic => 2 * self.n,
        }
    }

    pub fn contains(&self, w: &MatrixFq) -> Result<bool> {
        self.check_field(w)?;
        match self.family {
            Family::Orthogonal => is_orthogonal(w, self.n),
            Family::Symplectic => is_symplectic(w, self.n),
        }
    }

    /// For a group element, membership in the parabolic subgroup is the
    /// vanishing of the lower-left `n x n` block.
    fn lower_left_zero(&self, w: &MatrixFq) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| w.get_bits(n + i, j) == 0))
    }

    /// Membership in the maximal parabolic subgroup.
    pub fn in_parabolic(&self, w: &MatrixFq) -> Result<bool> {
        Ok(self.contains(w)? && self.lower_left_zero(w))
    }

    fn parabolic_params(&self) -> u32 {
        let n = self.n as u32;
        n * (n + 1) / 2
    }

    fn check_field(&self, w: &MatrixFq) -> Result<()> {
        if *w.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }
}

fn check_dims(w: &MatrixFq, d: usize) -> Result<()> {
    if w.rows() != d || w.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "expected {d}x{d}, got {}x{}",
            w.rows(),
            w.cols()
        )));
    }
    Ok(())
}

/// `θ(x) = Σ x_i x_{n+i} + x_{2n+1}^2`.
pub fn theta_form(x: &[FieldElement], n: usize) -> Result<FieldElement> {
    if x.len() != 2 * n + 1 {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for n = {n}",
            x.len()
        )));
    }
    let field = *x[0].field();
    if x.iter().any(|e| *e.field() != field) {
        return Err(Error::FieldMismatch);
    }
    let mut acc = x[2 * n].square();
    for i in 0..n {
        acc += x[i] * x[n + i];
    }
    Ok(acc)
}

/// The antidiagonal block matrix `J = [[0, 1_n], [1_n, 0]]`.
pub fn symplectic_j(field: FieldDescriptor, n: usize) -> MatrixFq {
    let mut j = MatrixFq::zeros(field, 2 * n, 2 * n);
    for i in 0..n {
        j.set_bits(i, n + i, 1);
        j.set_bits(n + i, i, 1);
    }
    j
}

/// `ᵗw J w = J`.
pub fn is_symplectic(w: &MatrixFq, n: usize) -> Result<bool> {
    check_dims(w, 2 * n)?;
    let j = symplectic_j(*w.field(), n);
    let lhs = w.transpose().mul_unchecked(&j).mul_unchecked(w);
    Ok(lhs == j)
}

/// Block shape with last column `e^{2n+1}`, plus the three block relations:
/// `ᵗAC + ᵗgg` and `ᵗBD + ᵗhh` alternating, `ᵗAD + ᵗCB = 1_n`.
pub fn is_orthogonal(w: &MatrixFq, n: usize) -> Result<bool> {
    check_dims(w, 2 * n + 1)?;
    let last = 2 * n;
    if (0..last).any(|i| w.get_bits(i, last) != 0) || w.get_bits(last, last) != 1 {
        return Ok(false);
    }
    let a = w.block(0, 0, n, n);
    let b = w.block(0, n, n, n);
    let c = w.block(n, 0, n, n);
    let d = w.block(n, n, n, n);
    let g = w.block(last, 0, 1, n);
    let h = w.block(last, n, 1, n);
    let at = a.transpose();
    let bt = b.transpose();
    let r1 = at.mul_unchecked(&c).add(&g.transpose().mul_unchecked(&g))?;
    let r2 = bt.mul_unchecked(&d).add(&h.transpose().mul_unchecked(&h))?;
    let r3 = at.mul_unchecked(&d).add(&c.transpose().mul_unchecked(&b))?;
    Ok(is_alternating(&r1)? && is_alternating(&r2)? && r3 == MatrixFq::identity(*w.field(), n))
}

/// The isomorphism `O(2n+1, q) → Sp(2n, q)` keeping the upper-left blocks.
pub fn iota(w: &MatrixFq, n: usize) -> Result<MatrixFq> {
    if !is_orthogonal(w, n)? {
        return Err(Error::NotInGroup("O(2n+1, q)"));
    }
    Ok(w.block(0, 0, 2 * n, 2 * n))
}

/// Inverse of [`iota`]: the bottom row is `g = √diag(ᵗAC)`, `h = √diag(ᵗBD)`.
pub fn iota_inverse(w: &MatrixFq, n: usize) -> Result<MatrixFq> {
    if !is_symplectic(w, n)? {
        return Err(Error::NotInGroup("Sp(2n, q)"));
    }
    let field = *w.field();
    let a = w.block(0, 0, n, n);
    let b = w.block(0, n, n, n);
    let c = w.block(n, 0, n, n);
    let d = w.block(n, n, n, n);
    let atc = a.transpose().mul_unchecked(&c);
    let btd = b.transpose().mul_unchecked(&d);
    let mut out = MatrixFq::zeros(field, 2 * n + 1, 2 * n + 1);
    out.put_block(0, 0, w);
    for i in 0..n {
        out.set_bits(2 * n, i, field.sqrt_bits(atc.get_bits(i, i)));
        out.set_bits(2 * n, n + i, field.sqrt_bits(btd.get_bits(i, i)));
    }
    out.set_bits(2 * n, 2 * n, 1);
    Ok(out)
}

/// Coordinate permutation of `σ_r`: swaps `e^i ↔ e^{n+i}` for `i ≤ r`.
fn sigma_perm(n: usize, r: usize, dim: usize) -> Vec<usize> {
    (0..dim)
        .map(|i| {
            if i < r {
                n + i
            } else if i >= n && i < n + r {
                i - n
            } else {
                i
            }
        })
        .collect()
}

/// The Weyl representative `σ_r` (an involutive permutation matrix).
pub fn sigma_r(field: FieldDescriptor, n: usize, r: usize, family: Family) -> Result<MatrixFq> {
    if r > n {
        return Err(Error::OutOfRange(format!("r = {r} exceeds n = {n}")));
    }
    let ctx = GroupContext::new(n, field, family)?;
    let dim = ctx.dim();
    let mut m = MatrixFq::zeros(field, dim, dim);
    for (i, p) in sigma_perm(n, r, dim).into_iter().enumerate() {
        m.set_bits(i, p, 1);
    }
    Ok(m)
}

fn big_pow(q: u32, e: u32) -> BigUint {
    BigUint::from(q).pow(e)
}

/// `|GL(t, q)| = q^{t(t-1)/2} Π_{j=1}^{t} (q^j - 1)`.
pub fn gl_order(t: u32, q: u32) -> BigUint {
    let mut acc = big_pow(q, t * t.saturating_sub(1) / 2);
    for j in 1..=t {
        acc *= big_pow(q, j) - 1u32;
    }
    acc
}

/// Gaussian binomial `[n choose r]_q`.
pub fn q_binomial(n: u32, r: u32, q: u32) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..r {
        num *= big_pow(q, n - j) - 1u32;
        den *= big_pow(q, r - j) - 1u32;
    }
    num / den
}

/// Number of nonsingular alternating `r x r` matrices over `F_q`.
pub fn alternating_count(r: u32, field: &FieldDescriptor) -> BigUint {
    let q = field.order();
    if r % 2 == 1 {
        return BigUint::zero();
    }
    let m = r / 2;
    let mut acc = big_pow(q, m * m.saturating_sub(1));
    for j in 1..=m {
        acc *= big_pow(q, 2 * j - 1) - 1u32;
    }
    acc
}

/// Exhaustive count of nonsingular alternating matrices, for cross-checking
/// [`alternating_count`].
pub fn alternating_count_bruteforce(r: u32, field: &FieldDescriptor, budget: u64) -> Result<u64> {
    let q = field.order() as u64;
    let slots = r * r.saturating_sub(1) / 2;
    let total = (q as u128).pow(slots);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded { needed: total.to_string(), budget });
    }
    let r = r as usize;
    let mut count = 0u64;
    for k in 0..total as u64 {
        let mut m = MatrixFq::zeros(*field, r, r);
        let mut rest = k;
        for i in 0..r {
            for j in i + 1..r {
                let v = (rest % q) as u32;
                rest /= q;
                m.set_bits(i, j, v);
                m.set_bits(j, i, v);
            }
        }
        if m.rank() == r {
            count += 1;
        }
    }
    Ok(count)
}

/// Closed-form orders attached to the parabolic `P` of a rank-`n` group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupOrders {
    pub n: u32,
    pub q: u32,
    /// `g_0, ..., g_n`.
    pub gl_orders: Vec<BigUint>,
    /// `[n choose r]_q` for `r = 0..=n`.
    pub q_binomials: Vec<BigUint>,
    pub parabolic_order: BigUint,
    /// `|A_r|` for `r = 0..=n`.
    pub stabilizer_orders: Vec<BigUint>,
    /// `|A_r \ P|` for `r = 0..=n`.
    pub transversal_sizes: Vec<BigUint>,
    /// `|P σ_r P|` for `r = 0..=n`.
    pub cell_sizes: Vec<BigUint>,
    /// Sum of the cells, i.e. the group order.
    pub group_order: BigUint,
}

pub fn group_order_data(n: u32, field: &FieldDescriptor) -> GroupOrders {
    let q = field.order();
    let gl_orders: Vec<BigUint> = (0..=n).map(|t| gl_order(t, q)).collect();
    let q_binomials: Vec<BigUint> = (0..=n).map(|r| q_binomial(n, r, q)).collect();
    let binom2 = |k: u32| k * k.saturating_sub(1) / 2;
    let parabolic_order = big_pow(q, binom2(n + 1)) * &gl_orders[n as usize];
    let stabilizer_orders = (0..=n)
        .map(|r| {
            // binom(n+1, 2) + r(2n - 3r - 1)/2, never negative for 0 <= r <= n
            let e = (n * (n + 1)) as i64 / 2 + (r as i64) * (2 * n as i64 - 3 * r as i64 - 1) / 2;
            &gl_orders[r as usize] * &gl_orders[(n - r) as usize] * big_pow(q, e as u32)
        })
        .collect();
    let transversal_sizes = (0..=n)
        .map(|r| big_pow(q, binom2(r + 1)) * &q_binomials[r as usize])
        .collect();
    let prod_qj: BigUint = (1..=n).map(|j| big_pow(q, j) - 1u32).product();
    let cell_sizes: Vec<BigUint> = (0..=n)
        .map(|r| big_pow(q, n * n + binom2(r) + r) * &q_binomials[r as usize] * &prod_qj)
        .collect();
    let group_order = cell_sizes.iter().sum();
    GroupOrders {
        n,
        q,
        gl_orders,
        q_binomials,
        parabolic_order,
        stabilizer_orders,
        transversal_sizes,
        cell_sizes,
        group_order,
    }
}

fn check_budget(needed: &BigUint, budget: u64) -> Result<()> {
    if *needed > BigUint::from(budget) {
        return Err(Error::BudgetExceeded { needed: needed.to_string(), budget });
    }
    Ok(())
}

/// Base-`q` digits of `k`, most significant first.
fn digits(mut k: u64, q: u64, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut().rev() {
        *slot = (k % q) as u32;
        k /= q;
    }
    out
}

/// All of `GL(t, q)` in lexicographic order of row-major entries.
///
/// Rows are chosen one at a time, skipping any candidate already in the span
/// of the previous rows.
pub fn enumerate_gl(field: FieldDescriptor, t: usize, budget: u64) -> Result<Vec<MatrixFq>> {
    let q = field.order();
    check_budget(&gl_order(t as u32, q), budget)?;
    let candidates = (q as u64).pow(t as u32);
    let vectors: Vec<Vec<u32>> = (0..candidates).map(|k| digits(k, q as u64, t)).collect();
    let mut out = Vec::new();
    let mut rows: Vec<usize> = Vec::with_capacity(t);
    let mut basis: Vec<(usize, Vec<u32>)> = Vec::with_capacity(t);
    gl_rows(&field, t, &vectors, &mut rows, &mut basis, &mut out);
    Ok(out)
}

fn gl_rows(
    field: &FieldDescriptor,
    t: usize,
    vectors: &[Vec<u32>],
    rows: &mut Vec<usize>,
    basis: &mut Vec<(usize, Vec<u32>)>,
    out: &mut Vec<MatrixFq>,
) {
    if rows.len() == t {
        let data = rows.iter().flat_map(|&k| vectors[k].iter().copied()).collect();
        out.push(MatrixFq::from_raw(*field, t, t, data));
        return;
    }
    for (k, v) in vectors.iter().enumerate() {
        let mut red = v.clone();
        for (p, b) in basis.iter() {
            let c = red[*p];
            if c != 0 {
                for (x, &y) in red.iter_mut().zip(b) {
                    *x ^= field.mul_bits(c, y);
                }
            }
        }
        let Some(pivot) = red.iter().position(|&x| x != 0) else {
            continue;
        };
        let inv = field.inv_bits(red[pivot]).expect("nonzero pivot");
        for x in red.iter_mut() {
            *x = field.mul_bits(*x, inv);
        }
        rows.push(k);
        basis.push((pivot, red));
        gl_rows(field, t, vectors, rows, basis, out);
        rows.pop();
        basis.pop();
    }
}

impl GroupContext {
    /// Builds the parabolic element for `A` (with `ᵗA^{-1}` precomputed) and
    /// parameter index `k`.
    ///
    /// Orthogonal: the first `n` base-`q` digits of `k` are `h`, the rest are
    /// the strict upper triangle of an alternating `S`, and `B = S + ᵗhh`.
    /// Symplectic: the digits are the upper triangle of a symmetric `B`.
    fn parabolic_element(&self, a: &MatrixFq, a_inv_t: &MatrixFq, k: u64) -> MatrixFq {
        let n = self.n;
        let f = self.field;
        let dg = digits(k, f.order() as u64, self.parabolic_params() as usize);
        let mut b = MatrixFq::zeros(f, n, n);
        let mut h = vec![0u32; n];
        match self.family {
            Family::Orthogonal => {
                h.copy_from_slice(&dg[..n]);
                let mut it = dg[n..].iter();
                for i in 0..n {
                    for j in i + 1..n {
                        let s = *it.next().expect("digit");
                        b.set_bits(i, j, s);
                        b.set_bits(j, i, s);
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        let v = b.get_bits(i, j) ^ f.mul_bits(h[i], h[j]);
                        b.set_bits(i, j, v);
                    }
                }
            }
            Family::Symplectic => {
                let mut it = dg.iter();
                for i in 0..n {
                    for j in i..n {
                        let s = *it.next().expect("digit");
                        b.set_bits(i, j, s);
                        b.set_bits(j, i, s);
                    }
                }
            }
        }
        let ab = a.mul_unchecked(&b);
        let dim = self.dim();
        let mut w = MatrixFq::zeros(f, dim, dim);
        w.put_block(0, 0, a);
        w.put_block(0, n, &ab);
        w.put_block(n, n, a_inv_t);
        if self.family == Family::Orthogonal {
            for (j, &hj) in h.iter().enumerate() {
                w.set_bits(2 * n, n + j, hj);
            }
            w.set_bits(2 * n, 2 * n, 1);
        }
        w
    }
}

/// Streams the maximal parabolic subgroup, `A` outer and the `B`/`h`
/// parameters inner, each in lexicographic order.
pub fn enumerate_parabolic(ctx: &GroupContext, budget: u64) -> Result<impl Iterator<Item = MatrixFq>> {
    let orders = group_order_data(ctx.n as u32, &ctx.field);
    check_budget(&orders.parabolic_order, budget)?;
    let gl = enumerate_gl(ctx.field, ctx.n, budget)?;
    let params = (ctx.field.order() as u64).pow(ctx.parabolic_params());
    let ctx = *ctx;
    Ok(gl.into_iter().flat_map(move |a| {
        let a_inv_t = a.inverse().expect("GL element").transpose();
        (0..params).map(move |k| ctx.parabolic_element(&a, &a_inv_t, k))
    }))
}

/// A right-coset transversal of `A_r` in `P`, with the orders it realises.
#[derive(Clone, Debug)]
pub struct CosetData {
    pub n: usize,
    pub r: usize,
    pub parabolic_order: BigUint,
    /// `|A_r|`, counted during the membership filter.
    pub stabilizer_order: BigUint,
    pub transversal: Vec<MatrixFq>,
    /// `|P| · |transversal|`.
    pub double_coset_size: BigUint,
}

/// Computes `A_r = {w ∈ P : σ_r w σ_r^{-1} ∈ P}` by filtering `P`, then keeps
/// each `w` whose coset `A_r w` has not been seen yet.
pub fn transversal(ctx: &GroupContext, r: usize, budget: u64) -> Result<CosetData> {
    if r > ctx.n {
        return Err(Error::OutOfRange(format!("r = {r} exceeds n = {}", ctx.n)));
    }
    let n = ctx.n;
    let perm = sigma_perm(n, r, ctx.dim());
    // Entries of w that land in the lower-left block of σ w σ.
    let probes: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (n + i, j)))
        .map(|(i, j)| (perm[i], perm[j]))
        .collect();
    let f = ctx.field;
    let mut parabolic_order = 0u64;
    let mut stabilizer_order = 0u64;
    let mut kept: Vec<MatrixFq> = Vec::new();
    let mut kept_inv: Vec<MatrixFq> = Vec::new();
    for w in enumerate_parabolic(ctx, budget)? {
        parabolic_order += 1;
        if probes.iter().all(|&(i, j)| w.get_bits(i, j) == 0) {
            stabilizer_order += 1;
        }
        let same_coset = kept_inv.iter().any(|kinv| {
            probes.iter().all(|&(i, j)| {
                let mut acc = 0u32;
                for m in 0..w.cols() {
                    acc ^= f.mul_bits(w.get_bits(i, m), kinv.get_bits(m, j));
                }
                acc == 0
            })
        });
        if !same_coset {
            kept_inv.push(w.inverse()?);
            kept.push(w);
        }
    }
    let double_coset_size = BigUint::from(parabolic_order) * BigUint::from(kept.len());
    Ok(CosetData {
        n,
        r,
        parabolic_order: BigUint::from(parabolic_order),
        stabilizer_order: BigUint::from(stabilizer_order),
        transversal: kept,
        double_coset_size,
    })
}

fn check_cell_budget(ctx: &GroupContext, r: usize, budget: u64) -> Result<()> {
    if r > ctx.n {
        return Err(Error::OutOfRange(format!("r = {r} exceeds n = {}", ctx.n)));
    }
    let orders = group_order_data(ctx.n as u32, &ctx.field);
    check_budget(&orders.cell_sizes[r], budget)
}

/// Streams every element `p σ_r x` of the cell `P σ_r P`, transversal element
/// `x` outer and `p ∈ P` inner.
pub fn double_coset_elements(
    ctx: &GroupContext,
    r: usize,
    budget: u64,
) -> Result<impl Iterator<Item = MatrixFq>> {
    check_cell_budget(ctx, r, budget)?;
    let sigma = sigma_r(ctx.field, ctx.n, r, ctx.family)?;
    let cosets = transversal(ctx, r, budget)?;
    let parabolic: Vec<MatrixFq> = enumerate_parabolic(ctx, budget)?.collect();
    Ok(cosets.transversal.into_iter().flat_map(move |x| {
        let sx = sigma.mul_unchecked(&x);
        let parabolic = parabolic.clone();
        parabolic.into_iter().map(move |p| p.mul_unchecked(&sx))
    }))
}

/// Traces of the cell elements in the same fixed order as
/// [`double_coset_elements`].
pub fn dc_trace_vector(ctx: &GroupContext, r: usize, budget: u64) -> Result<Vec<FieldElement>> {
    Ok(double_coset_elements(ctx, r, budget)?
        .map(|w| ctx.field.elem(w.trace_bits_unchecked()))
        .collect())
}

/// Counts `Tr w` over `w ∈ P σ_r P` without materialising the cell.
///
/// `Tr(p·M) = Σ_{i,j} p_ij M_ji` with `M = σ_r x` precomputed per transversal
/// element. The transversal is split across `workers` threads, each with a
/// private histogram; the merge is a plain sum, so the result does not depend
/// on the worker count.
pub fn dc_trace_histogram(ctx: &GroupContext, r: usize, budget: u64, workers: usize) -> Result<TraceHistogram> {
    check_cell_budget(ctx, r, budget)?;
    let f = ctx.field;
    let dim = ctx.dim();
    let perm = sigma_perm(ctx.n, r, dim);
    let cosets = transversal(ctx, r, budget)?;
    let parabolic: Vec<Vec<u32>> = enumerate_parabolic(ctx, budget)?.map(|p| p.bits().to_vec()).collect();
    // Transposed σ_r x, so that Tr(p M) is a flat dot product with p.
    let targets: Vec<Vec<u32>> = cosets
        .transversal
        .iter()
        .map(|x| {
            let mut mt = vec![0u32; dim * dim];
            for i in 0..dim {
                for j in 0..dim {
                    // (σ x)_{ij} = x_{π(i) j}; stored at (j, i)
                    mt[j * dim + i] = x.get_bits(perm[i], j);
                }
            }
            mt
        })
        .collect();
    let q = f.order() as usize;
    let workers = workers.max(1).min(targets.len().max(1));
    let chunk = targets.len().div_ceil(workers).max(1);
    let partials: Vec<Vec<u64>> = thread::scope(|s| {
        let handles: Vec<_> = targets
            .chunks(chunk)
            .map(|part| {
                let parabolic = &parabolic;
                s.spawn(move || {
                    let mut counts = vec![0u64; q];
                    for mt in part {
                        for p in parabolic {
                            let mut t = 0u32;
                            for (&a, &b) in p.iter().zip(mt) {
                                if a != 0 && b != 0 {
                                    t ^= f.mul_bits(a, b);
                                }
                            }
                            counts[t as usize] += 1;
                        }
                    }
                    counts
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut counts = vec![0u64; q];
    for part in partials {
        for (c, p) in counts.iter_mut().zip(part) {
            *c += p;
        }
    }
    Ok(TraceHistogram::from_counts(f, counts.into_iter().map(BigUint::from).collect()))
}
