use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::word::PolylogWord;
use crate::error::{Error, Result};
use crate::exact::{CycloNumber, RootOfUnity};
use crate::lin::Lin;

/// `ζ(k_1,…,k_m; c_1,…,c_m) = Σ_{a ∈ N^m} Π c_j^{a_j} / Π (a_1+…+a_j)^{k_j}`.
///
/// The empty symbol stands for the constant 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MZVSymbol {
    pub ks: Vec<u32>,
    pub roots: Vec<RootOfUnity>,
}

impl MZVSymbol {
    pub fn new(ks: Vec<u32>, roots: Vec<RootOfUnity>) -> Result<Self> {
        if ks.len() != roots.len() {
            return Err(Error::Validation("symbol needs one root per index".into()));
        }
        if ks.iter().any(|&k| k == 0) {
            return Err(Error::Validation("symbol indices must be positive".into()));
        }
        let s = MZVSymbol { ks, roots };
        if !s.is_convergent() {
            return Err(Error::Divergent(format!("symbol {s} diverges")));
        }
        Ok(s)
    }

    pub fn one() -> Self {
        MZVSymbol { ks: vec![], roots: vec![] }
    }

    pub fn depth(&self) -> usize {
        self.ks.len()
    }

    pub fn weight(&self) -> u32 {
        self.ks.iter().sum()
    }

    /// lcm of the root orders.
    pub fn modulus(&self) -> u64 {
        self.roots.iter().fold(1u64, |acc, r| acc.lcm(&r.order()))
    }

    pub fn is_convergent(&self) -> bool {
        match (self.ks.last(), self.roots.last()) {
            (Some(&k), Some(c)) => k >= 2 || !c.is_one(),
            _ => true,
        }
    }
}

impl fmt::Display for MZVSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ks.is_empty() {
            return write!(f, "1");
        }
        let ks: Vec<String> = self.ks.iter().map(|k| k.to_string()).collect();
        let rs: Vec<String> = self.roots.iter().map(|r| r.to_string()).collect();
        write!(f, "zeta({}; {})", ks.join(","), rs.join(","))
    }
}

/// A cyclotomic linear combination of convergent symbols.
pub type ZExpression = Lin<MZVSymbol>;

/// Value of a convergent word at `y = 1` as a multiple of a single symbol.
///
/// The word of blocks `(k_1,e_1)…(k_m,e_m)` equals `(Π e_i)^{-1} ζ(k_m,…,k_1; e_m,…,e_1)`.
pub fn mzv_symbol_from_word(w: &PolylogWord) -> Result<(CycloNumber, MZVSymbol)> {
    if !w.is_convergent() {
        return Err(Error::Divergent(format!("word {w} diverges at 1")));
    }
    let blocks = w
        .blocks()
        .ok_or_else(|| Error::precondition("mzv_symbol_from_word", format!("{w} ends in w0")))?;
    let prod = blocks.iter().fold(RootOfUnity::ONE, |acc, (_, e)| acc.mul(e));
    let ks = blocks.iter().rev().map(|b| b.0).collect();
    let roots = blocks.iter().rev().map(|b| b.1).collect();
    Ok((CycloNumber::from_root(&prod.inv()), MZVSymbol::new(ks, roots)?))
}

/// Inverse of [`mzv_symbol_from_word`]: the word whose value is `scale · symbol`.
pub fn word_from_symbol(s: &MZVSymbol) -> (CycloNumber, PolylogWord) {
    let blocks: Vec<(u32, RootOfUnity)> = s.ks.iter().zip(&s.roots).rev().map(|(&k, &c)| (k, c)).collect();
    let prod = blocks.iter().fold(RootOfUnity::ONE, |acc, (_, e)| acc.mul(e));
    (CycloNumber::from_root(&prod), PolylogWord::from_blocks(&blocks))
}

/// Serialized form of a Z-expression term.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ZTerm {
    pub coefficient: CycloNumber,
    pub symbol: MZVSymbol,
}

pub fn z_terms(z: &ZExpression) -> Vec<ZTerm> {
    z.iter().map(|(s, c)| ZTerm { coefficient: c.clone(), symbol: s.clone() }).collect()
}

pub fn z_display(z: &ZExpression) -> String {
    if z.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = z.iter().map(|(s, c)| format!("({c})*{s}")).collect();
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_symbol_dictionary() {
        let w = PolylogWord::from_blocks(&[(2, RootOfUnity::ONE)]);
        let (c, s) = mzv_symbol_from_word(&w).unwrap();
        assert!(c.is_one());
        assert_eq!(s.ks, vec![2]);
        let w = PolylogWord::from_blocks(&[(1, RootOfUnity::MINUS_ONE), (2, RootOfUnity::ONE)]);
        let (c, s) = mzv_symbol_from_word(&w).unwrap();
        assert_eq!(c, CycloNumber::from_int(-1));
        assert_eq!(s.ks, vec![2, 1]);
        assert_eq!(s.roots, vec![RootOfUnity::ONE, RootOfUnity::MINUS_ONE]);
        let (c2, w2) = word_from_symbol(&s);
        assert_eq!(w2, w);
        assert!((&c * &c2).is_one());
    }

    #[test]
    fn divergent_symbol_rejected() {
        assert!(MZVSymbol::new(vec![2, 1], vec![RootOfUnity::ONE; 2]).is_err());
        assert!(MZVSymbol::new(vec![1], vec![RootOfUnity::MINUS_ONE]).is_ok());
        assert_eq!(MZVSymbol::new(vec![1, 1], vec![RootOfUnity::new(3, 1), RootOfUnity::MINUS_ONE]).unwrap().modulus(), 6);
    }
}
