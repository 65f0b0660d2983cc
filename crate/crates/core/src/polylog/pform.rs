use std::collections::BTreeMap;
use std::fmt;

use super::word::{Letter, PolylogWord};
use crate::error::{Error, Result};
use crate::exact::{CycloNumber, RootOfUnity};
use crate::lin::Lin;

/// `(1 − e y)^{-m}`; `m = 0` is always stored with `e = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pole {
    pub root: RootOfUnity,
    pub order: u32,
}

impl Pole {
    pub const NONE: Pole = Pole { root: RootOfUnity::ONE, order: 0 };

    pub fn new(root: RootOfUnity, order: u32) -> Self {
        if order == 0 {
            Pole::NONE
        } else {
            Pole { root, order }
        }
    }
}

/// `Σ_{(e,m)} (1 − e y)^{-m} · H_{e,m}(y)` with each `H` a combination of polylog words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PNormalForm {
    parts: BTreeMap<Pole, Lin<PolylogWord>>,
}

fn cy_root(e: &RootOfUnity) -> CycloNumber {
    CycloNumber::from_root(e)
}

/// Partial fractions of `(1 − a y)^{-i} (1 − b y)^{-j}`.
pub fn pole_product(p: Pole, q: Pole) -> Vec<(Pole, CycloNumber)> {
    let mut out: BTreeMap<Pole, CycloNumber> = BTreeMap::new();
    pole_product_into(p, q, &CycloNumber::one(), &mut out);
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn pole_product_into(p: Pole, q: Pole, c: &CycloNumber, out: &mut BTreeMap<Pole, CycloNumber>) {
    let mut push = |k: Pole, v: CycloNumber| {
        let e = out.entry(k).or_insert_with(CycloNumber::zero);
        *e = &*e + &v;
    };
    if p.order == 0 {
        return push(q, c.clone());
    }
    if q.order == 0 {
        return push(p, c.clone());
    }
    if p.root == q.root {
        return push(Pole::new(p.root, p.order + q.order), c.clone());
    }
    // 1/((1-ay)(1-by)) = (a/(1-ay) - b/(1-by)) / (a - b)
    let a = cy_root(&p.root);
    let b = cy_root(&q.root);
    let inv = (&a - &b).inv().expect("distinct roots");
    let ca = &(&a * &inv) * c;
    let cb = -(&(&b * &inv) * c);
    pole_product_into(p, Pole::new(q.root, q.order - 1), &ca, out);
    pole_product_into(Pole::new(p.root, p.order - 1), q, &cb, out);
}

impl PNormalForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: CycloNumber) -> Self {
        Self::term(Pole::NONE, PolylogWord::empty(), c)
    }

    pub fn term(p: Pole, w: PolylogWord, c: CycloNumber) -> Self {
        let mut f = Self::zero();
        f.add_term(p, w, c);
        f
    }

    pub fn add_term(&mut self, p: Pole, w: PolylogWord, c: CycloNumber) {
        let e = self.parts.entry(p).or_default();
        e.add(w, c);
        if e.is_empty() {
            self.parts.remove(&p);
        }
    }

    pub fn add(&mut self, other: &PNormalForm, c: &CycloNumber) {
        for (p, h) in &other.parts {
            for (w, v) in h.iter() {
                self.add_term(*p, w.clone(), v * c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Pole, &Lin<PolylogWord>)> {
        self.parts.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.parts.values().map(|h| h.len()).sum()
    }

    pub fn max_weight(&self) -> usize {
        self.parts.values().flat_map(|h| h.keys().map(|w| w.weight())).max().unwrap_or(0)
    }

    /// Multiplies by `(1 − e y)^{-m}`.
    pub fn times_pole(&self, q: Pole) -> Self {
        let mut out = Self::zero();
        for (p, h) in &self.parts {
            for (np, c) in pole_product(*p, q) {
                for (w, v) in h.iter() {
                    out.add_term(np, w.clone(), v * &c);
                }
            }
        }
        out
    }

    /// Value at `y = 0`.
    pub fn value_at_zero(&self) -> CycloNumber {
        let mut s = CycloNumber::zero();
        for h in self.parts.values() {
            if let Some(c) = h.get(&PolylogWord::empty()) {
                s = &s + c;
            }
        }
        s
    }

    /// `G(y) = ∫_0^y F(t) dt/t`; requires `F(0) = 0`.
    pub fn integrate_dt_over_t(&self) -> Result<Self> {
        if !self.value_at_zero().is_zero() {
            return Err(Error::Regularization("integrand of dt/t does not vanish at 0".into()));
        }
        let mut out = Self::zero();
        for (p, h) in &self.parts {
            for (w, c) in h.iter() {
                out.add(&dt_over_t(*p, w), c);
            }
        }
        Ok(out)
    }

    /// Complex value at `|y| < 1` from word series.
    pub fn eval(&self, y: f64) -> num_complex::Complex64 {
        let mut s = num_complex::Complex64::new(0.0, 0.0);
        for (p, h) in &self.parts {
            let pole = (num_complex::Complex64::new(1.0, 0.0) - p.root.to_complex() * y).powi(-(p.order as i32));
            for (w, c) in h.iter() {
                s += pole * c.to_complex() * super::value::word_value_at(w, y);
            }
        }
        s
    }
}

// ∫_0^y (1 − e t)^{-m} w(t) dt/t, dropping the constant ∫ dt/t pieces of empty words
fn dt_over_t(p: Pole, w: &PolylogWord) -> PNormalForm {
    let mut out = PNormalForm::zero();
    if !w.is_empty() {
        out.add_term(Pole::NONE, w.prepend(Letter::Zero), CycloNumber::one());
    }
    let e = cy_root(&p.root);
    for j in 1..=p.order {
        out.add(&kernel_integral(p.root, j, w), &e);
    }
    out
}

// ∫_0^y (1 − b t)^{-j} w(t) dt for j ≥ 1
fn kernel_integral(b: RootOfUnity, j: u32, w: &PolylogWord) -> PNormalForm {
    if j == 1 {
        return PNormalForm::term(Pole::NONE, w.prepend(Letter::Root(b)), CycloNumber::one());
    }
    let mut out = PNormalForm::zero();
    let f = (&cy_root(&b) * &CycloNumber::from_int(j as i64 - 1)).inv().expect("nonzero");
    out.add_term(Pole::new(b, j - 1), w.clone(), f.clone());
    if w.is_empty() {
        out.add_term(Pole::NONE, PolylogWord::empty(), -f);
        return out;
    }
    let rest = w.tail();
    let deriv = match w.letters()[0] {
        Letter::Zero => dt_over_t(Pole::new(b, j - 1), &rest),
        Letter::Root(c) => {
            let mut acc = PNormalForm::zero();
            for (q, v) in pole_product(Pole::new(b, j - 1), Pole::new(c, 1)) {
                acc.add(&kernel_integral(q.root, q.order, &rest), &v);
            }
            acc
        }
    };
    out.add(&deriv, &-f);
    out
}

impl fmt::Display for PNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, h) in &self.parts {
            for (w, c) in h.iter() {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                if p.order == 0 {
                    write!(f, "({c})*{w}")?;
                } else {
                    write!(f, "({c})*(1-({})y)^-{}*{w}", p.root, p.order)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: num_complex::Complex64, b: num_complex::Complex64) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn partial_fraction_values() {
        let p = Pole::new(RootOfUnity::ONE, 2);
        let q = Pole::new(RootOfUnity::new(3, 1), 3);
        let y = 0.37;
        let lhs = PNormalForm::term(p, PolylogWord::empty(), CycloNumber::one()).times_pole(q).eval(y);
        let direct = (num_complex::Complex64::new(1.0, 0.0) - y).powi(-2)
            * (num_complex::Complex64::new(1.0, 0.0) - RootOfUnity::new(3, 1).to_complex() * y).powi(-3);
        assert!(close(lhs, direct));
    }

    #[test]
    fn integrate_matches_numeric_derivative() {
        // F = (1-y)^-2 - 1 + (1+y)^-1 * w1 - w1 style mixture vanishing at 0
        let mut f = PNormalForm::zero();
        f.add_term(Pole::new(RootOfUnity::ONE, 2), PolylogWord::empty(), CycloNumber::one());
        f.add_term(Pole::NONE, PolylogWord::empty(), CycloNumber::from_int(-1));
        let w1 = PolylogWord(vec![Letter::ONE]);
        f.add_term(Pole::new(RootOfUnity::MINUS_ONE, 2), w1.clone(), CycloNumber::from_int(3));
        f.add_term(Pole::new(RootOfUnity::new(4, 1), 1), PolylogWord(vec![Letter::Zero, Letter::ONE]), CycloNumber::one());
        let g = f.integrate_dt_over_t().unwrap();
        for &y in &[0.2, 0.5] {
            let h = 1e-5;
            let d = (g.eval(y + h) - g.eval(y - h)) / (2.0 * h) * y;
            assert!((d - f.eval(y)).norm() < 1e-6, "{d} vs {}", f.eval(y));
        }
        assert!(g.eval(1e-9).norm() < 1e-7);
    }

    #[test]
    fn nonvanishing_integrand_rejected() {
        assert!(PNormalForm::constant(CycloNumber::one()).integrate_dt_over_t().is_err());
    }
}
