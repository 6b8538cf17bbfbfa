//! The arithmetic interface every coefficient domain implements.
//!
//! Values carry their own context (modulus, variable count, truncation
//! order), so constructors take a reference element to copy it from.

use std::fmt::Debug;

pub trait Ring: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Image of an integer under the canonical map.
    fn from_int(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse when it exists in this ring.
    fn inv(&self) -> Option<Self>;
    /// Characteristic of the ring (0 for the integers).
    fn characteristic(&self) -> u64;

    /// `self / o` when `o` divides `self` exactly.
    fn div_exact(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    /// True when every nonzero element is invertible.
    fn is_field(&self) -> bool {
        false
    }

    /// Inverse of the Frobenius map, when defined.
    fn pth_root(&self) -> Option<Self> {
        None
    }

    /// `self += a·b`, in place where the representation allows it.
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn from_base(&self, c: crate::field::Fp) -> Self {
        self.from_int(c.value() as i64)
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.one_like();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }
}

/// Exact integers, used for division-free routines over ℤ.
impl Ring for i128 {
    fn zero_like(&self) -> Self {
        0
    }
    fn one_like(&self) -> Self {
        1
    }
    fn from_int(&self, n: i64) -> Self {
        n as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        match *self {
            1 | -1 => Some(*self),
            _ => None,
        }
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        if *o != 0 && self % o == 0 {
            Some(self / o)
        } else {
            None
        }
    }
    fn characteristic(&self) -> u64 {
        0
    }
}
