use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{primitive_class, to_rationals, Rational};
use crate::linalg::QVec;

/// A linear form up to a nonzero scalar: the primitive integer representative whose first
/// nonzero entry is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearForm {
    coeffs: Vec<BigInt>,
}

impl LinearForm {
    pub fn class_of(v: &[Rational]) -> Result<Self> {
        if v.iter().all(Zero::is_zero) {
            return Err(Error::Degenerate("the zero form has no class".into()));
        }
        Ok(LinearForm { coeffs: primitive_class(v) })
    }

    pub fn from_ints(v: &[i64]) -> Result<Self> {
        Self::class_of(&crate::exact::rational::ints_to_rationals(v))
    }

    pub fn ambient_dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn to_rationals(&self) -> QVec {
        to_rationals(&self.coeffs)
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).fold(Rational::zero(), |acc, (c, xi)| acc + xi * c)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}
