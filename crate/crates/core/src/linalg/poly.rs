use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Polynomial with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPoly {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Quotient by `(x - r)` when `r` is a root.
    pub fn deflate(&self, r: &BigInt) -> Option<IntPoly> {
        if self.is_constant() {
            return None;
        }
        let n = self.degree();
        let mut q = vec![BigInt::zero(); n];
        let mut carry = BigInt::zero();
        for d in (0..=n).rev() {
            let v = &self.coeffs[d] + &carry * r;
            if d == 0 {
                if !v.is_zero() {
                    return None;
                }
            } else {
                q[d - 1] = v.clone();
                carry = v;
            }
        }
        Some(IntPoly::new(q))
    }

    /// Extracts every integer root `r` with `|r| <= bound`, with multiplicity.
    /// Returns the roots in decreasing order and the leftover factor.
    pub fn integer_roots(&self, bound: &BigInt) -> (Vec<(BigInt, usize)>, IntPoly) {
        let mut rest = self.clone();
        let mut roots = Vec::new();
        let mut r = bound.clone();
        let lo = -bound.clone();
        while r >= lo && !rest.is_constant() {
            let mut mult = 0;
            while let Some(q) = rest.deflate(&r) {
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                roots.push((r.clone(), mult));
            }
            r -= 1;
        }
        (roots, rest)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && !(first && d == 0) {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if d == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match d {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{d}")?,
            }
        }
        Ok(())
    }
}
