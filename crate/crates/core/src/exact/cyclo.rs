//! Exact arithmetic in `Q(μ_N)` on the power basis of the `N`-th cyclotomic polynomial.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, parse_rational, to_f64, Rational};
use super::root::RootOfUnity;
use crate::error::{Error, Result};

fn cyclotomic_cache() -> &'static RwLock<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Integer coefficients (low degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    if let Some(p) = cyclotomic_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi = cyclotomic_polynomial(d);
            num = exact_div_monic(&num, &phi);
        }
    }
    let p = Arc::new(num);
    cyclotomic_cache().write().unwrap().insert(n, p.clone());
    p
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

pub fn euler_phi(n: u64) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

/// Element of `Q(μ_N)`, stored as coordinates on `1, ζ_N, …, ζ_N^{φ(N)-1}`.
#[derive(Clone, Debug)]
pub struct CycloNumber {
    modulus: u64,
    coords: Vec<Rational>,
}

fn reduce_mod(modulus: u64, mut poly: Vec<Rational>) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(modulus);
    let d = phi.len() - 1;
    if poly.len() > d {
        for i in (d..poly.len()).rev() {
            let c = std::mem::take(&mut poly[i]);
            if c.is_zero() {
                continue;
            }
            for (j, &pj) in phi.iter().enumerate().take(d) {
                if pj != 0 {
                    poly[i - d + j] -= &c * BigInt::from(pj);
                }
            }
        }
        poly.truncate(d);
    }
    poly.resize(d, Rational::zero());
    poly
}

impl CycloNumber {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        CycloNumber { modulus: 1, coords: vec![q] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_root(r: &RootOfUnity) -> Self {
        let n = r.order();
        let mut poly = vec![Rational::zero(); r.exponent() as usize + 1];
        poly[r.exponent() as usize] = Rational::one();
        CycloNumber { modulus: n, coords: reduce_mod(n, poly) }
    }

    /// Builds from power-basis coordinates (any length; reduced modulo Φ_N).
    pub fn from_coords(modulus: u64, coords: Vec<Rational>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Parse("cyclotomic modulus must be positive".into()));
        }
        Ok(CycloNumber { modulus, coords: reduce_mod(modulus, coords) })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// Rational value when the number lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        let m = self.minimal();
        (m.modulus == 1).then(|| m.coords[0].clone())
    }

    /// Image under `Q(μ_N) → Q(μ_M)`, `ζ_N ↦ ζ_M^{M/N}`; requires `N | M`.
    pub fn embed(&self, m: u64) -> Self {
        assert!(m % self.modulus == 0, "cannot embed Q(mu_{}) into Q(mu_{m})", self.modulus);
        if m == self.modulus {
            return self.clone();
        }
        let step = (m / self.modulus) as usize;
        let mut poly = vec![Rational::zero(); step * (self.coords.len().max(1) - 1) + 1];
        for (i, c) in self.coords.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        CycloNumber { modulus: m, coords: reduce_mod(m, poly) }
    }

    /// Same number represented in the smallest `Q(μ_d)` that contains it among divisors of N.
    pub fn minimal(&self) -> Self {
        let n = self.modulus;
        let mut best = self.clone();
        for d in 1..n {
            if n % d != 0 || euler_phi(d) > best.coords.len() {
                continue;
            }
            // candidate: coordinates supported on multiples of n/d after embedding
            if let Some(c) = self.try_descend(d) {
                best = c;
                break;
            }
        }
        best
    }

    fn try_descend(&self, d: u64) -> Option<Self> {
        // solve by linear algebra: the image of Q(μ_d) is spanned by embeddings of its basis
        let phi_d = euler_phi(d);
        let basis: Vec<CycloNumber> = (0..phi_d)
            .map(|k| CycloNumber::from_root(&RootOfUnity::new(d, k as i64)).embed(self.modulus))
            .collect();
        let rows = self.coords.len();
        // Gaussian elimination on [basis | self]
        let mut m: Vec<Vec<Rational>> = (0..rows)
            .map(|r| {
                let mut row: Vec<Rational> = basis.iter().map(|b| b.coords[r].clone()).collect();
                row.push(self.coords[r].clone());
                row
            })
            .collect();
        let cols = phi_d;
        let mut piv_row = 0;
        let mut pivots = Vec::new();
        for c in 0..cols {
            let Some(p) = (piv_row..rows).find(|&r| !m[r][c].is_zero()) else { continue };
            m.swap(piv_row, p);
            let inv = m[piv_row][c].recip();
            for x in m[piv_row].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..rows {
                if r != piv_row && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    for k in 0..=cols {
                        let v = &m[piv_row][k] * &f;
                        m[r][k] -= v;
                    }
                }
            }
            pivots.push(c);
            piv_row += 1;
        }
        if (piv_row..rows).any(|r| !m[r][cols].is_zero()) {
            return None;
        }
        let mut coords = vec![Rational::zero(); phi_d];
        for (r, &c) in pivots.iter().enumerate() {
            coords[c] = m[r][cols].clone();
        }
        Some(CycloNumber { modulus: d, coords })
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let m = a.modulus.lcm(&b.modulus);
        (a.embed(m), b.embed(m))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycloNumber { modulus: self.modulus, coords: self.coords.iter().map(|c| c * q).collect() }
    }

    pub fn mul_root(&self, r: &RootOfUnity) -> Self {
        self * &CycloNumber::from_root(r)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.modulus == 1 {
            return Ok(Self::from_rational(self.coords[0].recip()));
        }
        // extended Euclid: find u with u*a ≡ 1 (mod Φ_N)
        let phi: Vec<Rational> = cyclotomic_polynomial(self.modulus)
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        let (g, u) = poly_ext_gcd(trim(self.coords.clone()), phi);
        // g is a nonzero constant since Φ_N is irreducible
        debug_assert_eq!(g.len(), 1);
        let ginv = g[0].recip();
        let u: Vec<Rational> = u.into_iter().map(|c| c * &ginv).collect();
        Ok(CycloNumber { modulus: self.modulus, coords: reduce_mod(self.modulus, u) })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = CycloNumber::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        let z = RootOfUnity::new(self.modulus, 1).to_complex();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for c in &self.coords {
            acc += p * to_f64(c);
            p *= z;
        }
        acc
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect()
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![Rational::zero()], r);
    }
    let lead_inv = b.last().unwrap().recip();
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * &lead_inv;
        for (j, bj) in b.iter().enumerate() {
            let v = &c * bj;
            r[shift + j] -= v;
        }
        q[shift] = c;
        r.pop();
        if r.is_empty() {
            r.push(Rational::zero());
        }
        r = trim(r);
        if r.len() < b.len() {
            break;
        }
    }
    (q, r)
}

/// Returns `(g, u)` with `u·a ≡ g (mod m)`.
fn poly_ext_gcd(a: Vec<Rational>, m: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (a, m);
    let (mut s0, mut s1) = (vec![Rational::one()], vec![Rational::zero()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = trim(poly_sub(&s0, &poly_mul(&q, &s1)));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Self::common(self, other);
        a.coords == b.coords
    }
}

impl Eq for CycloNumber {}

impl Add for &CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        let (a, b) = CycloNumber::common(self, rhs);
        CycloNumber {
            modulus: a.modulus,
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        self + &(-rhs)
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { modulus: self.modulus, coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        if self.modulus == 1 {
            return rhs.scale(&self.coords[0]);
        }
        if rhs.modulus == 1 {
            return self.scale(&rhs.coords[0]);
        }
        let (a, b) = CycloNumber::common(self, rhs);
        let prod = poly_mul(&a.coords, &b.coords);
        CycloNumber { modulus: a.modulus, coords: reduce_mod(a.modulus, prod) }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

impl From<RootOfUnity> for CycloNumber {
    fn from(r: RootOfUnity) -> Self {
        CycloNumber::from_root(&r)
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.minimal();
        let mut first = true;
        for (i, c) in m.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let a = c.abs();
            let body = match (i, a.is_one()) {
                (0, _) => format_rational(&a),
                (_, true) => format!("z{}^{}", m.modulus, i),
                (_, false) => format!("{}*z{}^{}", format_rational(&a), m.modulus, i),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Wire form: `{modulus, coefficients: ["p/q", …]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CycloWire {
    modulus: u64,
    coefficients: Vec<String>,
}

impl Serialize for CycloNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m = self.minimal();
        CycloWire { modulus: m.modulus, coefficients: m.coords.iter().map(format_rational).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CycloWire::deserialize(d)?;
        let coords = w
            .coefficients
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        CycloNumber::from_coords(w.modulus, coords).map_err(serde::de::Error::custom)
    }
}
