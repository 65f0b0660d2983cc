use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::binomial;
use crate::exact::{CycloNumber, RootOfUnity};
use crate::lin::Lin;

/// `e · y^α` on the variables `y_1..y_n` (0-based here).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mono {
    pub root: RootOfUnity,
    pub exps: Vec<u32>,
}

impl Mono {
    pub fn new(root: RootOfUnity, exps: Vec<u32>) -> Self {
        Mono { root, exps }
    }

    /// Index of the first variable that occurs.
    pub fn leading(&self) -> Option<usize> {
        self.exps.iter().position(|&a| a != 0)
    }

    pub fn leading_exp(&self) -> u32 {
        self.leading().map_or(0, |i| self.exps[i])
    }

    pub fn is_constant(&self) -> bool {
        self.leading().is_none()
    }

    pub fn set_one(&self, i: usize) -> Mono {
        let mut m = self.clone();
        m.exps[i] = 0;
        m
    }

    fn sort_key(&self) -> (usize, &Vec<u32>, &RootOfUnity) {
        (self.leading().unwrap_or(usize::MAX), &self.exps, &self.root)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.root.is_one() {
            write!(f, "({})", self.root)?;
        }
        let mut any = false;
        for (i, &a) in self.exps.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if any {
                write!(f, "*")?;
            }
            any = true;
            if a == 1 {
                write!(f, "y{}", i + 1)?;
            } else {
                write!(f, "y{}^{a}", i + 1)?;
            }
        }
        if !any {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// `u / (1 − u)^power` with `u` a [`Mono`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factor {
    pub mono: Mono,
    pub power: u32,
}

impl Factor {
    pub fn new(mono: Mono, power: u32) -> Self {
        Factor { mono, power }
    }

    pub fn leading(&self) -> Option<usize> {
        self.mono.leading()
    }
}

/// `∫_{(0,1)^I} Π factors Π_{i∈I} dy_i/y_i`, a function of the variables not in `I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UTerm {
    pub integrated: Vec<usize>,
    pub factors: Vec<Factor>,
}

impl UTerm {
    pub fn new(mut integrated: Vec<usize>, mut factors: Vec<Factor>) -> Self {
        integrated.sort_unstable();
        integrated.dedup();
        factors.sort();
        UTerm { integrated, factors }
    }

    pub fn weight(&self) -> usize {
        self.integrated.len()
    }

    pub fn num_vars(&self) -> usize {
        self.factors.first().map_or(0, |f| f.mono.exps.len())
    }

    /// Every integrated variable divides the numerator `Π u`.
    pub fn in_zero_set(&self, i: usize) -> bool {
        self.factors.iter().any(|f| f.mono.exps.get(i).copied().unwrap_or(0) > 0)
    }

    pub fn check_convergence_box(&self) -> Result<()> {
        for &i in &self.integrated {
            if !self.in_zero_set(i) {
                return Err(Error::Divergent(format!("y{} does not divide the numerator of {self}", i + 1)));
            }
        }
        for f in &self.factors {
            if f.mono.is_constant() && f.mono.root.is_one() {
                return Err(Error::Divergent(format!("constant pole in {self}")));
            }
        }
        Ok(())
    }

    /// At most one factor per integrated level, of power 1, and all others free.
    pub fn is_simple(&self) -> bool {
        let mut seen = Vec::new();
        for f in &self.factors {
            let Some(l) = f.leading() else { return false };
            if !self.integrated.contains(&l) || f.power != 1 || seen.contains(&l) {
                return false;
            }
            seen.push(l);
        }
        true
    }

    pub fn is_unifactor(&self) -> bool {
        let mut seen = Vec::new();
        for f in &self.factors {
            let Some(l) = f.leading() else { return false };
            if f.mono.exps[l] != 1 || seen.contains(&l) {
                return false;
            }
            seen.push(l);
        }
        true
    }

    pub fn tag(&self) -> TermTag {
        if self.is_simple() {
            TermTag::Simple
        } else if self.is_unifactor() {
            TermTag::UniFactor
        } else {
            TermTag::General
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TermTag {
    General,
    UniFactor,
    Simple,
}

impl fmt::Display for UTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.integrated.is_empty() {
            let v: Vec<String> = self.integrated.iter().map(|i| format!("y{}", i + 1)).collect();
            write!(f, "I[{}] ", v.join(","))?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| if x.power == 1 { format!("F({})", x.mono) } else { format!("F({})^[{}]", x.mono, x.power) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Product of `T(u)^a = (u/(1 − u))^a` over distinct monomials, the form used while splitting.
pub type TProd = BTreeMap<Mono, u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TTerm {
    pub integrated: Vec<usize>,
    pub prod: TProd,
}

// ---- truncated formal power series in the free variables ----

/// Multivariate series, truncated by total degree in the free variables.
pub type Series = BTreeMap<Vec<u32>, CycloNumber>;

struct SeriesCtx {
    free: Vec<bool>,
    degree: u32,
}

impl SeriesCtx {
    fn free_degree(&self, e: &[u32]) -> u32 {
        e.iter().zip(&self.free).filter(|(_, f)| **f).map(|(a, _)| *a).sum()
    }

    fn mul(&self, a: &Series, b: &Series) -> Series {
        let mut out = Series::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if self.free_degree(&e) > self.degree {
                    continue;
                }
                let v = ca * cb;
                let slot = out.entry(e).or_insert_with(CycloNumber::zero);
                *slot = &*slot + &v;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    // Σ_k coeff(k) u^k
    fn factor(&self, m: &Mono, coeff: impl Fn(u32) -> u64, min_k: u32) -> Result<Series> {
        let n = m.exps.len();
        let step = self.free_degree(&m.exps);
        let mut s = Series::new();
        if m.is_constant() {
            return Err(Error::Internal(format!("constant factor {m} in series")));
        }
        if step == 0 {
            return Err(Error::Internal(format!("factor {m} has no free variable")));
        }
        let root = CycloNumber::from_root(&m.root);
        let mut k = min_k;
        while k * step <= self.degree {
            let c = coeff(k);
            if c != 0 {
                let e: Vec<u32> = (0..n).map(|i| m.exps[i] * k).collect();
                s.insert(e, root.pow(k).scale(&crate::Rational::from_integer(c.into())));
            }
            k += 1;
        }
        Ok(s)
    }

    fn one(&self) -> Series {
        let mut s = Series::new();
        s.insert(vec![0; self.free.len()], CycloNumber::one());
        s
    }

    // ∫ dy_i/y_i over (0,1) for the integrated variables, dropping them from the key
    fn integrate(&self, s: Series, integrated: &[usize]) -> Result<Series> {
        let mut out = Series::new();
        for (mut e, c) in s {
            let mut c = c;
            for &i in integrated {
                if e[i] == 0 {
                    return Err(Error::Divergent(format!("monomial without y{}", i + 1)));
                }
                c = c.scale(&crate::exact::rational::ratio(1, e[i] as i64));
                e[i] = 0;
            }
            let slot = out.entry(e).or_insert_with(CycloNumber::zero);
            *slot = &*slot + &c;
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }
}

fn ctx(n: usize, integrated: &[usize], degree: u32) -> SeriesCtx {
    SeriesCtx { free: (0..n).map(|i| !integrated.contains(&i)).collect(), degree }
}

fn u64_of(b: num_bigint::BigInt) -> u64 {
    b.try_into().unwrap_or(u64::MAX)
}

/// Series of a [`UTerm`] in its free variables up to total degree `degree`.
pub fn uterm_series(t: &UTerm, n: usize, degree: u32) -> Result<Series> {
    let c = ctx(n, &t.integrated, degree);
    let mut s = c.one();
    for f in &t.factors {
        let mu = f.power as u64;
        // u/(1−u)^μ = Σ_{k≥1} C(k+μ−2, μ−1) u^k
        let fs = c.factor(&f.mono, |k| u64_of(binomial(k as u64 + mu - 2, mu - 1)), 1)?;
        s = c.mul(&s, &fs);
    }
    c.integrate(s, &t.integrated)
}

/// Series of a [`TTerm`].
pub fn tterm_series(t: &TTerm, n: usize, degree: u32) -> Result<Series> {
    let c = ctx(n, &t.integrated, degree);
    let mut s = c.one();
    for (m, &a) in &t.prod {
        // (u/(1−u))^a = Σ_{k≥a} C(k−1, a−1) u^k
        let fs = c.factor(m, |k| u64_of(binomial(k as u64 - 1, a as u64 - 1)), a)?;
        s = c.mul(&s, &fs);
    }
    c.integrate(s, &t.integrated)
}

pub fn lin_series<K: Ord + Clone>(
    l: &Lin<K>,
    n: usize,
    degree: u32,
    f: impl Fn(&K, usize, u32) -> Result<Series>,
) -> Result<Series> {
    let mut out = Series::new();
    for (k, c) in l.iter() {
        for (e, v) in f(k, n, degree)? {
            let slot = out.entry(e).or_insert_with(CycloNumber::zero);
            *slot = &*slot + &(&v * c);
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_factor_integral() {
        // ∫ y1 y2/(1 − y1 y2) dy1/y1 = −log(1 − y2) = Σ y2^k / k
        let t = UTerm::new(vec![0], vec![Factor::new(Mono::new(RootOfUnity::ONE, vec![1, 1]), 1)]);
        let s = uterm_series(&t, 2, 4).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s[&vec![0, 3]], CycloNumber::from_rational(crate::exact::rational::ratio(1, 3)));
        assert!(t.is_simple());
    }

    #[test]
    fn mono_order_is_by_level() {
        let a = Mono::new(RootOfUnity::ONE, vec![0, 1]);
        let b = Mono::new(RootOfUnity::ONE, vec![1, 5]);
        assert!(b < a);
    }
}
