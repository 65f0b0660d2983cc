use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exact::{CycloNumber, RootOfUnity};
use crate::lin::Lin;

/// `ω₀ = dx/x` or `ω_e = dx/(1 − e x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    Zero,
    Root(RootOfUnity),
}

impl Letter {
    pub const ONE: Letter = Letter::Root(RootOfUnity::ONE);
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Zero => write!(f, "w0"),
            Letter::Root(e) if e.is_one() => write!(f, "w1"),
            Letter::Root(e) => write!(f, "w[{e}]"),
        }
    }
}

/// Iterated integral `∫_0^y ω_{a_1} ⋯ ω_{a_k}`, the leftmost letter being the outermost integral.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct PolylogWord(pub Vec<Letter>);

impl PolylogWord {
    pub fn empty() -> Self {
        PolylogWord(Vec::new())
    }

    /// Word of blocks `(ω₀)^{k_i − 1} ω_{e_i}`.
    pub fn from_blocks(blocks: &[(u32, RootOfUnity)]) -> Self {
        let mut v = Vec::new();
        for &(k, e) in blocks {
            v.extend(std::iter::repeat(Letter::Zero).take(k as usize - 1));
            v.push(Letter::Root(e));
        }
        PolylogWord(v)
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// The word vanishes at 0, i.e. it is empty or ends in some `ω_e`.
    pub fn vanishes_at_zero_or_empty(&self) -> bool {
        !matches!(self.0.last(), Some(Letter::Zero))
    }

    /// Converges at `y = 1`: the leftmost letter is not `ω₁`.
    pub fn is_convergent(&self) -> bool {
        self.0.first() != Some(&Letter::ONE)
    }

    pub fn prepend(&self, a: Letter) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(a);
        v.extend_from_slice(&self.0);
        PolylogWord(v)
    }

    pub fn tail(&self) -> Self {
        PolylogWord(self.0[1..].to_vec())
    }

    /// Blocks `(k_i, e_i)`; `None` when the word ends in `ω₀`.
    pub fn blocks(&self) -> Option<Vec<(u32, RootOfUnity)>> {
        let mut out = Vec::new();
        let mut k = 1;
        for l in &self.0 {
            match l {
                Letter::Zero => k += 1,
                Letter::Root(e) => {
                    out.push((k, *e));
                    k = 1;
                }
            }
        }
        (k == 1).then_some(out)
    }
}

impl fmt::Display for PolylogWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(""))
    }
}

/// Shuffle product, returned with integer multiplicities.
pub fn shuffle(a: &PolylogWord, b: &PolylogWord) -> Lin<PolylogWord> {
    let mut out = Lin::new();
    for (w, n) in shuffle_counts(&a.0, &b.0) {
        out.add(PolylogWord(w), CycloNumber::from_int(n));
    }
    out
}

fn shuffle_counts(a: &[Letter], b: &[Letter]) -> Vec<(Vec<Letter>, i64)> {
    if a.is_empty() {
        return vec![(b.to_vec(), 1)];
    }
    if b.is_empty() {
        return vec![(a.to_vec(), 1)];
    }
    let mut out: std::collections::BTreeMap<Vec<Letter>, i64> = Default::default();
    for (rest, n) in shuffle_counts(&a[1..], b) {
        let mut w = vec![a[0]];
        w.extend(rest);
        *out.entry(w).or_default() += n;
    }
    for (rest, n) in shuffle_counts(a, &b[1..]) {
        let mut w = vec![b[0]];
        w.extend(rest);
        *out.entry(w).or_default() += n;
    }
    out.into_iter().collect()
}

/// Shuffle product extended bilinearly.
pub fn shuffle_lin(a: &Lin<PolylogWord>, b: &Lin<PolylogWord>) -> Lin<PolylogWord> {
    let mut out = Lin::new();
    for (wa, ca) in a.iter() {
        for (wb, cb) in b.iter() {
            out.add_scaled(&shuffle(wa, wb), &(ca * cb));
        }
    }
    out
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::exact::CycloNumber;
    use crate::polylog::value::word_series_exact;
    use proptest::prelude::*;

    fn word(max: usize) -> impl Strategy<Value = PolylogWord> {
        let letter = prop_oneof![
            Just(Letter::Zero),
            Just(Letter::ONE),
            Just(Letter::Root(RootOfUnity::MINUS_ONE)),
            Just(Letter::Root(RootOfUnity::new(3, 1))),
        ];
        (prop::collection::vec(letter, 0..max), prop_oneof![Just(Letter::ONE), Just(Letter::Root(RootOfUnity::new(4, 1)))])
            .prop_map(|(mut ls, last)| {
                ls.push(last);
                PolylogWord(ls)
            })
    }

    fn series_of(l: &Lin<PolylogWord>, deg: usize) -> Vec<CycloNumber> {
        let mut out = vec![CycloNumber::zero(); deg + 1];
        for (w, c) in l.iter() {
            for (o, x) in out.iter_mut().zip(word_series_exact(w, deg)) {
                *o = &*o + &(&x * c);
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // Li_u · Li_v = Li_{u ш v} as exact power series
        #[test]
        fn shuffle_is_multiplicative(u in word(3), v in word(3)) {
            let deg = 7;
            let (su, sv) = (word_series_exact(&u, deg), word_series_exact(&v, deg));
            let mut prod = vec![CycloNumber::zero(); deg + 1];
            for i in 0..=deg {
                for j in 0..=deg - i {
                    prod[i + j] = &prod[i + j] + &(&su[i] * &sv[j]);
                }
            }
            let sh = shuffle(&u, &v);
            prop_assert_eq!(series_of(&sh, deg), prod);
            prop_assert!(sh.keys().all(|w| w.weight() == u.weight() + v.weight()));
        }
    }
}
