//! Roots of unity under the embedding `ζ_N = exp(2πi/N)`.

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// `ζ_order^exponent`, kept in lowest terms so that equality is structural.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawRoot", into = "RawRoot")]
pub struct RootOfUnity {
    order: u64,
    exponent: u64,
}

#[derive(Serialize, Deserialize)]
struct RawRoot {
    order: u64,
    exponent: u64,
}

impl TryFrom<RawRoot> for RootOfUnity {
    type Error = String;
    fn try_from(r: RawRoot) -> Result<Self, String> {
        if r.order == 0 {
            return Err("root of unity order must be positive".into());
        }
        Ok(RootOfUnity::new(r.order, r.exponent as i64))
    }
}

impl From<RootOfUnity> for RawRoot {
    fn from(r: RootOfUnity) -> Self {
        RawRoot { order: r.order, exponent: r.exponent }
    }
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { order: 1, exponent: 0 };
    pub const MINUS_ONE: RootOfUnity = RootOfUnity { order: 2, exponent: 1 };

    /// `ζ_n^k` for any integer `k`; panics when `n == 0`.
    pub fn new(n: u64, k: i64) -> Self {
        assert!(n > 0, "root of unity of order 0");
        let k = k.rem_euclid(n as i64) as u64;
        if k == 0 {
            return Self::ONE;
        }
        let g = k.gcd(&n);
        RootOfUnity { order: n / g, exponent: k / g }
    }

    /// Root `exp(2πi t)` for a rational `t = num/den`.
    pub fn from_fraction(num: i64, den: u64) -> Self {
        Self::new(den, num)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    /// Exponent of this root relative to `ζ_m`; requires `order | m`.
    pub fn exponent_in(&self, m: u64) -> u64 {
        debug_assert_eq!(m % self.order, 0);
        self.exponent * (m / self.order)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = self.order.lcm(&other.order);
        Self::new(m, (self.exponent_in(m) + other.exponent_in(m)) as i64)
    }

    pub fn inv(&self) -> Self {
        Self::new(self.order, -(self.exponent as i64))
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i64) -> Self {
        let e = (self.exponent as i128 * k as i128).rem_euclid(self.order as i128) as i64;
        Self::new(self.order, e)
    }

    pub fn to_complex(&self) -> Complex64 {
        let t = std::f64::consts::TAU * self.exponent as f64 / self.order as f64;
        Complex64::new(t.cos(), t.sin())
    }

    /// All `b` with `b^n = self`, in increasing exponent order inside `μ_{n·order}`.
    pub fn nth_roots(&self, n: u64) -> Vec<RootOfUnity> {
        assert!(n >= 1);
        let m = n * self.order;
        // b = ζ_m^j with j*n ≡ exponent*n... i.e. j ≡ exponent (mod order) scaled
        (0..n)
            .map(|t| Self::new(m, (self.exponent + t * self.order) as i64))
            .collect()
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.order, self.exponent) {
            (1, _) => write!(f, "1"),
            (2, 1) => write!(f, "-1"),
            (n, k) => write!(f, "z{n}^{k}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(RootOfUnity::new(6, 3), RootOfUnity::MINUS_ONE);
        assert_eq!(RootOfUnity::new(5, 0), RootOfUnity::ONE);
        assert_eq!(RootOfUnity::new(4, -1), RootOfUnity::new(4, 3));
    }

    #[test]
    fn root_mul_examples() {
        let i = RootOfUnity::new(4, 1);
        assert_eq!(i.mul(&i), RootOfUnity::MINUS_ONE);
        assert_eq!(RootOfUnity::new(3, 1).mul(&RootOfUnity::new(3, 2)), RootOfUnity::ONE);
        assert_eq!(RootOfUnity::MINUS_ONE.mul(&RootOfUnity::new(3, 1)), RootOfUnity::new(6, 5));
    }

    #[test]
    fn nth_roots_examples() {
        assert_eq!(RootOfUnity::ONE.nth_roots(2), vec![RootOfUnity::ONE, RootOfUnity::MINUS_ONE]);
        assert_eq!(
            RootOfUnity::MINUS_ONE.nth_roots(2),
            vec![RootOfUnity::new(4, 1), RootOfUnity::new(4, 3)]
        );
        let z3 = RootOfUnity::new(3, 1);
        let roots = z3.nth_roots(3);
        assert_eq!(roots, vec![RootOfUnity::new(9, 1), RootOfUnity::new(9, 4), RootOfUnity::new(9, 7)]);
        for b in roots {
            assert_eq!(b.pow(3), z3);
        }
    }

    #[test]
    fn serde_canonicalizes() {
        let r: RootOfUnity = serde_json::from_str(r#"{"order":4,"exponent":2}"#).unwrap();
        assert_eq!(r, RootOfUnity::MINUS_ONE);
        assert!(serde_json::from_str::<RootOfUnity>(r#"{"order":0,"exponent":0}"#).is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn nth_roots_are_the_preimages(order in 1u64..=12, k in 0i64..12, n in 1u64..=6) {
            let r = RootOfUnity::new(order, k);
            let roots = r.nth_roots(n);
            prop_assert_eq!(roots.len() as u64, n);
            for (i, b) in roots.iter().enumerate() {
                prop_assert_eq!(b.pow(n as i64), r);
                prop_assert!(!roots[..i].contains(b));
            }
        }
    }
}
