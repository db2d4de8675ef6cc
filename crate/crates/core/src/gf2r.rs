//! Arithmetic in the binary field `F_{2^r}`.
//!
//! Elements use the polynomial basis: bit `i` of an element is the
//! coefficient of `x^i`. A [`FieldDescriptor`] fixes the degree and the
//! reduction polynomial, and every modulus is checked for irreducibility when
//! the descriptor is built.
//!
//! The descriptor exposes raw `*_bits` operations on `u32` for the hot loops
//! of the enumeration code; [`FieldElement`] is the checked, self-describing
//! counterpart used by everything else.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign};

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 24;

/// Built-in reduction polynomials (full bit pattern, leading term included),
/// indexed by degree. Trinomials where one exists, pentanomials otherwise.
const DEFAULT_MODULI: [u32; 25] = [
    0,
    0b11,        // x + 1
    0x7,         // x^2 + x + 1
    0xB,         // x^3 + x + 1
    0x13,        // x^4 + x + 1
    0x25,        // x^5 + x^2 + 1
    0x43,        // x^6 + x + 1
    0x83,        // x^7 + x + 1
    0x11B,       // x^8 + x^4 + x^3 + x + 1
    0x211,       // x^9 + x^4 + 1
    0x409,       // x^10 + x^3 + 1
    0x805,       // x^11 + x^2 + 1
    0x1009,      // x^12 + x^3 + 1
    0x201B,      // x^13 + x^4 + x^3 + x + 1
    0x4021,      // x^14 + x^5 + 1
    0x8003,      // x^15 + x + 1
    0x1002B,     // x^16 + x^5 + x^3 + x + 1
    0x20009,     // x^17 + x^3 + 1
    0x40081,     // x^18 + x^7 + 1
    0x80027,     // x^19 + x^5 + x^2 + x + 1
    0x100009,    // x^20 + x^3 + 1
    0x200005,    // x^21 + x^2 + 1
    0x400003,    // x^22 + x + 1
    0x800021,    // x^23 + x^5 + 1
    0x100001B,   // x^24 + x^4 + x^3 + x + 1
];

/// Degree of a nonzero polynomial given as a bit pattern.
fn poly_degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// Irreducibility over `F_2` by exhaustive trial division with every
/// polynomial of degree at most half the degree of `poly`.
pub fn is_irreducible(poly: u32) -> bool {
    if poly < 2 {
        return false;
    }
    let p = poly as u64;
    let d = poly_degree(p);
    for f in 2u64..(1u64 << (d / 2 + 1)) {
        if poly_rem(p, f) == 0 {
            return false;
        }
    }
    true
}

/// The field `F_{2^r}` together with its reduction polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    degree: u32,
    modulus: u32,
    /// Bit `i` is `tr(x^i)`, so `tr(a) = parity(a & trace_mask)`.
    trace_mask: u32,
}

/// Builds `F_{2^r}` with the built-in modulus for `r`.
pub fn field_new(r: u32) -> Result<FieldDescriptor> {
    FieldDescriptor::new(r)
}

impl FieldDescriptor {
    pub fn new(r: u32) -> Result<Self> {
        if r == 0 || r > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(r));
        }
        Self::with_modulus(r, DEFAULT_MODULI[r as usize])
    }

    /// Builds `F_{2^r}` with a caller-chosen modulus (leading term included).
    pub fn with_modulus(r: u32, modulus: u32) -> Result<Self> {
        if r == 0 || r > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(r));
        }
        if modulus == 0 || poly_degree(modulus as u64) != r || !is_irreducible(modulus) {
            return Err(Error::InvalidModulus { modulus, degree: r });
        }
        let mut field = FieldDescriptor { degree: r, modulus, trace_mask: 0 };
        let mut mask = 0u32;
        for i in 0..r {
            let mut t = 1u32 << i;
            let mut acc = 0u32;
            for _ in 0..r {
                acc ^= t;
                t = field.mul_bits(t, t);
            }
            debug_assert!(acc <= 1);
            mask |= acc << i;
        }
        field.trace_mask = mask;
        Ok(field)
    }

    /// Builds the field of order `q`, which must be a power of two.
    pub fn of_order(q: u64) -> Result<Self> {
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::OutOfRange(format!("q = {q} is not a power of two >= 2")));
        }
        Self::new(q.trailing_zeros())
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The field order `q = 2^r`.
    pub fn order(&self) -> u32 {
        1 << self.degree
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn element(&self, bits: u32) -> Result<FieldElement> {
        if bits >= self.order() {
            return Err(Error::ElementOutOfRange { bits, q: self.order() });
        }
        Ok(FieldElement { bits, field: *self })
    }

    /// Wraps `bits` without a range check; callers guarantee `bits < q`.
    pub(crate) fn elem(&self, bits: u32) -> FieldElement {
        debug_assert!(bits < self.order());
        FieldElement { bits, field: *self }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    /// All `q` elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |b| self.elem(b))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.order()).map(move |b| self.elem(b))
    }

    #[inline]
    pub fn mul_bits(&self, a: u32, b: u32) -> u32 {
        if self.degree == 1 {
            return a & b;
        }
        let (a, mut b) = (a as u64, b as u64);
        let mut prod = 0u64;
        let mut i = 0;
        while b != 0 {
            if b & 1 == 1 {
                prod ^= a << i;
            }
            b >>= 1;
            i += 1;
        }
        let m = self.modulus as u64;
        let r = self.degree;
        let mut top = 2 * r - 2;
        while top >= r {
            if prod >> top & 1 == 1 {
                prod ^= m << (top - r);
            }
            top -= 1;
        }
        prod as u32
    }

    pub fn pow_bits(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_bits(acc, base);
            }
            base = self.mul_bits(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^{-1} = a^{q-2}`; `None` for zero.
    pub fn inv_bits(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.pow_bits(a, self.order() as u64 - 2))
        }
    }

    /// The unique square root, `a^{q/2}`.
    pub fn sqrt_bits(&self, a: u32) -> u32 {
        self.pow_bits(a, (self.order() / 2) as u64)
    }

    #[inline]
    pub fn trace_bits(&self, a: u32) -> u32 {
        (a & self.trace_mask).count_ones() & 1
    }

    /// `λ(a) = (-1)^{tr(a)}`.
    #[inline]
    pub fn lambda_bits(&self, a: u32) -> i64 {
        1 - 2 * self.trace_bits(a) as i64
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.degree, self.modulus)
    }
}

/// An element of a specific [`FieldDescriptor`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    bits: u32,
    field: FieldDescriptor,
}

impl FieldElement {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn inv(&self) -> Result<FieldElement> {
        self.field
            .inv_bits(self.bits)
            .map(|b| self.field.elem(b))
            .ok_or(Error::DivisionByZero)
    }

    pub fn square(&self) -> FieldElement {
        self.field.elem(self.field.mul_bits(self.bits, self.bits))
    }

    pub fn sqrt(&self) -> FieldElement {
        self.field.elem(self.field.sqrt_bits(self.bits))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.elem(self.field.pow_bits(self.bits, e))
    }

    /// Absolute trace to `F_2`, as 0 or 1.
    pub fn trace(&self) -> u32 {
        self.field.trace_bits(self.bits)
    }

    /// The canonical additive character `λ`.
    pub fn lambda(&self) -> i64 {
        self.field.lambda_bits(self.bits)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "field mismatch");
        FieldElement { bits: self.bits ^ rhs.bits, field: self.field }
    }
}

impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        *self = *self + rhs;
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "field mismatch");
        FieldElement { bits: self.field.mul_bits(self.bits, rhs.bits), field: self.field }
    }
}

impl MulAssign for FieldElement {
    fn mul_assign(&mut self, rhs: FieldElement) {
        *self = *self * rhs;
    }
}

pub fn ff_mul(x: FieldElement, y: FieldElement) -> Result<FieldElement> {
    if x.field != y.field {
        return Err(Error::FieldMismatch);
    }
    Ok(x * y)
}

pub fn ff_inv(x: FieldElement) -> Result<FieldElement> {
    x.inv()
}

pub fn trace(x: FieldElement) -> u32 {
    x.trace()
}

pub fn lambda_char(x: FieldElement) -> i64 {
    x.lambda()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(r: u32) -> FieldDescriptor {
        FieldDescriptor::new(r).unwrap()
    }

    #[test]
    fn builtin_table_is_irreducible() {
        for r in 1..=MAX_DEGREE {
            let fd = f(r);
            assert_eq!(fd.order(), 1 << r);
            assert!(is_irreducible(fd.modulus()));
        }
    }

    #[test]
    fn degree_range() {
        assert_eq!(f(3).order(), 8);
        assert_eq!(f(1).order(), 2);
        assert!(matches!(FieldDescriptor::new(25), Err(Error::UnsupportedDegree(25))));
        assert!(matches!(FieldDescriptor::new(0), Err(Error::UnsupportedDegree(0))));
    }

    #[test]
    fn reducible_override_rejected() {
        // x^4 + 1 = (x + 1)^4
        assert!(FieldDescriptor::with_modulus(4, 0x11).is_err());
        // wrong degree
        assert!(FieldDescriptor::with_modulus(4, 0xB).is_err());
        assert!(FieldDescriptor::with_modulus(4, 0x19).is_ok());
    }

    #[test]
    fn multiplication_examples() {
        let f4 = f(2);
        let g = f4.element(2).unwrap();
        assert_eq!((g * g).bits(), 3);
        let f8 = f(3);
        let g = f8.element(2).unwrap();
        assert_eq!((g * g * g).bits(), 3);
        for x in f8.elements() {
            assert_eq!(x * f8.one(), x);
        }
    }

    #[test]
    fn mismatched_fields() {
        let a = f(2).one();
        let b = f(3).one();
        assert!(matches!(ff_mul(a, b), Err(Error::FieldMismatch)));
    }

    #[test]
    fn inverse_examples() {
        let f4 = f(2);
        assert_eq!(ff_inv(f4.one()).unwrap(), f4.one());
        assert_eq!(ff_inv(f4.element(2).unwrap()).unwrap().bits(), 3);
        assert!(matches!(ff_inv(f4.zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn trace_and_character_examples() {
        let f4 = f(2);
        assert_eq!(trace(f4.zero()), 0);
        assert_eq!(trace(f4.element(2).unwrap()), 1);
        assert_eq!(trace(f4.one()), 0);
        assert_eq!(trace(f(3).one()), 1);
        assert_eq!(lambda_char(f(5).zero()), 1);
        assert_eq!(lambda_char(f(1).one()), -1);
        assert_eq!(lambda_char(f4.one()), 1);
    }

    #[test]
    fn trace_matches_frobenius_sum() {
        for r in 1..=8 {
            let fd = f(r);
            for x in fd.elements() {
                let mut t = x;
                let mut acc = fd.zero();
                for _ in 0..r {
                    acc += t;
                    t = t.square();
                }
                assert_eq!(acc.bits(), x.trace());
            }
        }
    }

    #[test]
    fn artin_schreier_image_is_trace_zero() {
        for r in 1..=9 {
            let fd = f(r);
            let mut image = vec![false; fd.order() as usize];
            for a in fd.elements() {
                image[(a.square() + a).bits() as usize] = true;
            }
            let zeros = fd.elements().filter(|x| x.trace() == 0).count();
            assert_eq!(zeros as u32, fd.order() / 2);
            for x in fd.elements() {
                assert_eq!(image[x.bits() as usize], x.trace() == 0);
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for r in 1..=10 {
            let fd = f(r);
            let q1 = fd.order() as u64 - 1;
            let has_generator = fd.nonzero_elements().any(|g| {
                (1..q1).all(|d| !q1.is_multiple_of(d) || g.pow(d) != fd.one())
            });
            assert!(has_generator, "r = {r}");
        }
    }

    fn field_and_pair() -> impl Strategy<Value = (FieldDescriptor, u32, u32)> {
        (1u32..=MAX_DEGREE).prop_flat_map(|r| {
            let q = 1u32 << r;
            (Just(f(r)), 0..q, 0..q)
        })
    }

    proptest! {
        #[test]
        fn inverse_is_inverse((fd, a, _b) in field_and_pair()) {
            prop_assume!(a != 0);
            let x = fd.element(a).unwrap();
            prop_assert_eq!(x * x.inv().unwrap(), fd.one());
        }

        #[test]
        fn trace_is_additive_and_frobenius_stable((fd, a, b) in field_and_pair()) {
            let x = fd.element(a).unwrap();
            let y = fd.element(b).unwrap();
            prop_assert_eq!((x + y).trace(), x.trace() ^ y.trace());
            prop_assert_eq!(x.square().trace(), x.trace());
            prop_assert_eq!((x + y).lambda(), x.lambda() * y.lambda());
            prop_assert_eq!(x + x, fd.zero());
        }

        #[test]
        fn sqrt_inverts_square((fd, a, _b) in field_and_pair()) {
            let x = fd.element(a).unwrap();
            prop_assert_eq!(x.square().sqrt(), x);
        }

        #[test]
        fn multiplication_distributes((fd, a, b) in field_and_pair(), c in 0u32..(1 << 24)) {
            let x = fd.element(a).unwrap();
            let y = fd.element(b).unwrap();
            let z = fd.element(c & (fd.order() - 1)).unwrap();
            prop_assert_eq!(x * (y + z), x * y + x * z);
            prop_assert_eq!(x * y, y * x);
        }
    }
}
