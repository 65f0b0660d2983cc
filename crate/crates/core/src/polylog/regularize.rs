//! Behaviour of P-normal forms at `y = 1`.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use super::pform::PNormalForm;
use super::symbol::{mzv_symbol_from_word, word_from_symbol, MZVSymbol, ZExpression};
use super::value::word_value_at_one;
use super::word::{shuffle, Letter, PolylogWord};
use crate::error::{Error, Result};
use crate::exact::rational::ratio;
use crate::exact::{CycloNumber, RootOfUnity};
use crate::lin::Lin;

/// `w = Σ_i T^i u_i` with `T = −log(1 − y)` and every `u_i` convergent at 1.
pub fn shuffle_regularize(w: &PolylogWord) -> Vec<Lin<PolylogWord>> {
    let j = w.letters().iter().take_while(|l| **l == Letter::ONE).count();
    if j == 0 {
        return vec![Lin::single(w.clone(), CycloNumber::one())];
    }
    let v = &w.letters()[j..];
    let inv_j = CycloNumber::from_rational(ratio(1, j as i64));
    let mut shorter = w.letters().to_vec();
    shorter.remove(0);
    let mut out: Vec<Lin<PolylogWord>> = Vec::new();
    let add = |out: &mut Vec<Lin<PolylogWord>>, i: usize, l: &Lin<PolylogWord>, c: &CycloNumber| {
        if out.len() <= i {
            out.resize(i + 1, Lin::new());
        }
        out[i].add_scaled(l, c);
    };
    for (i, u) in shuffle_regularize(&PolylogWord(shorter)).iter().enumerate() {
        add(&mut out, i + 1, u, &inv_j);
    }
    for p in 1..=v.len() {
        let mut x: Vec<Letter> = vec![Letter::ONE; j - 1];
        x.extend_from_slice(&v[..p]);
        x.push(Letter::ONE);
        x.extend_from_slice(&v[p..]);
        for (i, u) in shuffle_regularize(&PolylogWord(x)).iter().enumerate() {
            add(&mut out, i, u, &-inv_j.clone());
        }
    }
    out
}

/// Finite value at 1 of a convergent combination.
fn convergent_value(l: &Lin<PolylogWord>) -> Result<ZExpression> {
    let mut z = ZExpression::new();
    for (w, c) in l.iter() {
        if w.is_empty() {
            z.add(MZVSymbol::one(), c.clone());
        } else {
            let (s, sym) = mzv_symbol_from_word(w)?;
            z.add(sym, c * &s);
        }
    }
    Ok(z)
}

/// Asymptotic expansion `Σ s^j T^i · z_{j,i}` at `y = 1`, `s = 1 − y`, truncated at `j ≤ order`.
pub type Expansion = BTreeMap<(u32, u32), ZExpression>;

fn add_exp(e: &mut Expansion, k: (u32, u32), z: &ZExpression, c: &CycloNumber) {
    let slot = e.entry(k).or_default();
    slot.add_scaled(z, c);
    if slot.is_empty() {
        e.remove(&k);
    }
}

// ∫_0^s σ^n T^i dσ = s^{n+1} Σ_q T^{i−q} i!/(i−q)! / (n+1)^{q+1}
fn integrate_monomial(n: u32, i: u32) -> Vec<((u32, u32), CycloNumber)> {
    let mut out = Vec::new();
    let mut fall = num_bigint::BigInt::from(1);
    let mut pw = num_bigint::BigInt::from(n + 1);
    for q in 0..=i {
        out.push(((n + 1, i - q), CycloNumber::from_rational(crate::Rational::new(fall.clone(), pw.clone()))));
        fall *= i - q;
        pw *= n + 1;
    }
    out
}

struct Expander {
    order: u32,
    memo: HashMap<PolylogWord, Expansion>,
}

impl Expander {
    fn expand(&mut self, w: &PolylogWord) -> Result<Expansion> {
        if let Some(e) = self.memo.get(w) {
            return Ok(e.clone());
        }
        let mut out = Expansion::new();
        if w.is_empty() {
            out.insert((0, 0), Lin::single(MZVSymbol::one(), CycloNumber::one()));
            self.memo.insert(w.clone(), out.clone());
            return Ok(out);
        }
        let inner = self.expand(&w.tail())?;
        let reg = shuffle_regularize(w);
        add_exp(&mut out, (0, 0), &convergent_value(&reg[0])?, &CycloNumber::one());
        let a = w.letters()[0];
        // kernel k_a(1 − σ) = Σ_l κ_l σ^l, with the 1/σ pole handled apart for ω₁
        let kappa: Vec<CycloNumber> = match a {
            Letter::Zero => vec![CycloNumber::one(); self.order as usize + 1],
            Letter::Root(e) if e.is_one() => vec![],
            Letter::Root(e) => {
                let ec = CycloNumber::from_root(&e);
                let inv = (&CycloNumber::one() - &ec).inv()?;
                let r = -(&ec * &inv);
                let mut v = Vec::new();
                let mut p = inv;
                for _ in 0..=self.order {
                    v.push(p.clone());
                    p = &p * &r;
                }
                v
            }
        };
        for (&(j, i), z) in &inner {
            if a == Letter::ONE {
                if j == 0 {
                    add_exp(&mut out, (0, i + 1), z, &CycloNumber::from_rational(ratio(1, i as i64 + 1)));
                } else if j <= self.order {
                    for (k, c) in integrate_monomial(j - 1, i) {
                        add_exp(&mut out, k, z, &-c);
                    }
                }
            } else {
                for (l, kl) in kappa.iter().enumerate() {
                    let n = j + l as u32;
                    if n + 1 > self.order {
                        break;
                    }
                    for (k, c) in integrate_monomial(n, i) {
                        add_exp(&mut out, k, z, &-(kl * &c));
                    }
                }
            }
        }
        self.memo.insert(w.clone(), out.clone());
        Ok(out)
    }

    fn expand_lin(&mut self, h: &Lin<PolylogWord>) -> Result<Expansion> {
        let mut out = Expansion::new();
        for (w, c) in h.iter() {
            for (k, z) in self.expand(w)? {
                add_exp(&mut out, k, &z, c);
            }
        }
        Ok(out)
    }
}

/// Expansion of a single word at `y = 1` to order `s^order`.
pub fn expand_word(w: &PolylogWord, order: u32) -> Result<Expansion> {
    Expander { order, memo: HashMap::new() }.expand(w)
}

/// Numerical value of a Z-expression.
pub fn z_value(z: &ZExpression) -> Result<Complex64> {
    let mut s = Complex64::new(0.0, 0.0);
    for (sym, c) in z.iter() {
        let (scale, w) = word_from_symbol(sym);
        s += c.to_complex() * scale.to_complex() * word_value_at_one(&w)?;
    }
    Ok(s)
}

/// `lim_{y→1} F(y)` as a Z-expression; fails when `F` has a genuine singularity at 1.
pub fn regularize_limit(f: &PNormalForm) -> Result<ZExpression> {
    let order = f.parts().filter(|(p, _)| p.root.is_one()).map(|(p, _)| p.order).max().unwrap_or(0);
    let mut ex = Expander { order, memo: HashMap::new() };
    let mut value = ZExpression::new();
    // singular coefficients keyed by (negative s-power, T-power)
    let mut singular: BTreeMap<(u32, u32), ZExpression> = BTreeMap::new();
    for (p, h) in f.parts() {
        let e = ex.expand_lin(h)?;
        if p.root.is_one() {
            for (&(j, i), z) in &e {
                if j > p.order {
                    continue;
                }
                if j == p.order && i == 0 {
                    value.add_lin(z);
                } else {
                    singular.entry((p.order - j, i)).or_default().add_lin(z);
                }
            }
        } else {
            let c = (&CycloNumber::one() - &CycloNumber::from_root(&p.root)).inv()?.pow(p.order);
            for (&(j, i), z) in &e {
                if j != 0 {
                    continue;
                }
                if i == 0 {
                    value.add_scaled(z, &c);
                } else {
                    singular.entry((0, i)).or_default().add_scaled(z, &c);
                }
            }
        }
    }
    for ((r, i), z) in singular {
        if z.is_empty() {
            continue;
        }
        let scale: f64 = z.iter().map(|(_, c)| c.to_complex().norm()).sum::<f64>().max(1.0);
        let v = z_value(&z)?;
        if v.norm() > 1e-9 * scale {
            return Err(Error::Regularization(format!(
                "coefficient of s^-{r} T^{i} at y = 1 is {v}, not zero"
            )));
        }
    }
    Ok(value)
}

/// All words of weight `k` whose letters come from `{ω₀} ∪ {ω_e : e ∈ roots}`.
pub fn all_words(k: usize, roots: &[RootOfUnity]) -> Vec<PolylogWord> {
    let mut alphabet = vec![Letter::Zero];
    alphabet.extend(roots.iter().map(|r| Letter::Root(*r)));
    let mut out = vec![PolylogWord::empty()];
    for _ in 0..k {
        out = out
            .iter()
            .flat_map(|w| alphabet.iter().map(move |a| w.prepend(*a)))
            .collect();
    }
    out
}

/// Checks `R(w)` against the function it stands for: `Σ T^i u_i`, summed as shuffles.
pub fn regularization_identity(w: &PolylogWord) -> Lin<PolylogWord> {
    let mut out = Lin::new();
    let mut t_pow = Lin::single(PolylogWord::empty(), CycloNumber::one());
    for u in shuffle_regularize(w) {
        for (a, ca) in t_pow.iter() {
            for (b, cb) in u.iter() {
                out.add_scaled(&shuffle(a, b), &(ca * cb));
            }
        }
        t_pow = super::word::shuffle_lin(&t_pow, &Lin::single(PolylogWord(vec![Letter::ONE]), CycloNumber::one()));
    }
    out
}
