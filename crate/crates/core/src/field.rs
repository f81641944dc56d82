//! Ring and field contexts.
//!
//! Arithmetic is performed through a context object rather than through
//! operator overloading on the elements, so that elements of `F_p(t)`, of an
//! extension tower or of a finite field `F_q` can all be handled by the same
//! generic linear algebra and polynomial code.

use std::fmt::Debug;

use thiserror::Error;

/// Failures of exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    /// An inversion met a zero divisor: the minimal polynomial of `step`
    /// has the proper factor whose coefficients are rendered in `factor`.
    #[error("reducible modulus at step {step}: proper factor {factor}")]
    ReducibleModulus { step: usize, factor: String },
}

/// A commutative ring with identity, accessed through a context.
pub trait Ring {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Image of an integer under `Z -> R`.
    fn from_int(&self, n: i64) -> Self::Elem;
    fn characteristic(&self) -> u32;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `acc -= a * b`, the inner step of every elimination.
    fn sub_mul_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        if self.is_zero(a) || self.is_zero(b) {
            return;
        }
        let prod = self.mul(a, b);
        *acc = self.sub(acc, &prod);
    }

    fn add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem) {
        if self.is_zero(a) {
            return;
        }
        *acc = self.add(acc, a);
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// A field: every nonzero element is invertible, or inversion reports why not.
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ArithError>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, ArithError> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

impl<R: Ring> Ring for &R {
    type Elem = R::Elem;

    fn zero(&self) -> R::Elem {
        (**self).zero()
    }
    fn one(&self) -> R::Elem {
        (**self).one()
    }
    fn is_zero(&self, a: &R::Elem) -> bool {
        (**self).is_zero(a)
    }
    fn is_one(&self, a: &R::Elem) -> bool {
        (**self).is_one(a)
    }
    fn add(&self, a: &R::Elem, b: &R::Elem) -> R::Elem {
        (**self).add(a, b)
    }
    fn sub(&self, a: &R::Elem, b: &R::Elem) -> R::Elem {
        (**self).sub(a, b)
    }
    fn neg(&self, a: &R::Elem) -> R::Elem {
        (**self).neg(a)
    }
    fn mul(&self, a: &R::Elem, b: &R::Elem) -> R::Elem {
        (**self).mul(a, b)
    }
    fn from_int(&self, n: i64) -> R::Elem {
        (**self).from_int(n)
    }
    fn characteristic(&self) -> u32 {
        (**self).characteristic()
    }
    fn pow(&self, a: &R::Elem, e: u64) -> R::Elem {
        (**self).pow(a, e)
    }
}

impl<F: Field> Field for &F {
    fn inv(&self, a: &F::Elem) -> Result<F::Elem, ArithError> {
        (**self).inv(a)
    }
}
