use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{dot, primitive_class, Rational};
use crate::geometry::refine::is_definite;
use crate::geometry::Flag;
use crate::linalg::{QMat, QVec};

/// Class of `α` restricted to the cone spanned by `gens`, keyed by its values on `gens`.
/// `None` when the restriction is zero.
pub fn restricted_class(form: &[Rational], gens: &[QVec]) -> Option<Vec<BigInt>> {
    let vals: QVec = gens.iter().map(|g| dot(form, g)).collect();
    if vals.iter().all(Zero::is_zero) {
        return None;
    }
    Some(primitive_class(&vals))
}

/// Forms deduplicated by their class on `gens`, sorted by class; zero restrictions dropped.
pub(crate) fn dedup_classes(forms: impl IntoIterator<Item = QVec>, gens: &[QVec]) -> QMat {
    let mut by_class: BTreeMap<Vec<BigInt>, QVec> = BTreeMap::new();
    for f in forms {
        if let Some(k) = restricted_class(&f, gens) {
            by_class.entry(k).or_insert(f);
        }
    }
    by_class.into_values().collect()
}

/// `D_F(S)`: restrictions of `S` to `F` and the cross terms `(α₁(v)α₂ − α₂(v)α₁)|_F` for
/// distinct classes with `α₁(v) ≠ 0` and `α₂(v) ≠ 0`. Forms are ambient functionals.
pub fn derived_set(forms: &[QVec], facet: &[QVec], v: &[Rational]) -> Result<QMat> {
    for a in forms {
        if restricted_class(a, facet).is_none() {
            return Err(Error::Degenerate(format!("form {a:?} vanishes on the facet")));
        }
    }
    let mut whole: Vec<QVec> = facet.to_vec();
    whole.push(v.to_vec());
    let forms = dedup_classes(forms.iter().cloned(), &whole);
    let mut out: Vec<QVec> = forms.clone();
    let active: Vec<(&QVec, Rational)> =
        forms.iter().map(|a| (a, dot(a, v))).filter(|(_, av)| !av.is_zero()).collect();
    for i in 0..active.len() {
        for j in i + 1..active.len() {
            let (a1, v1) = &active[i];
            let (a2, v2) = &active[j];
            let cross: QVec = a1.iter().zip(a2.iter()).map(|(x1, x2)| v1 * x2 - v2 * x1).collect();
            out.push(cross);
        }
    }
    Ok(dedup_classes(out, facet))
}

/// A flag with one set of forms per level, `S^(i)` living on `Δ^(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedSequence {
    pub flag: Flag,
    #[serde(with = "crate::serde_util::qmats")]
    pub levels: Vec<QMat>,
}

impl DerivedSequence {
    pub fn dim(&self) -> usize {
        self.flag.dim()
    }

    /// Level forms as primitive integer vectors over the generators of `Δ^(i)`.
    pub fn level_classes(&self, i: usize) -> Vec<Vec<BigInt>> {
        let g = self.flag.level(i);
        self.levels[i].iter().filter_map(|a| restricted_class(a, g)).collect()
    }

    /// Checks non-degeneracy, definiteness and closure under derived sets at every level.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if self.levels.len() != n {
            return Err(Error::InvalidDerivedSequence(format!("{} levels for dimension {n}", self.levels.len())));
        }
        for i in 0..n {
            let here = self.flag.level(i);
            for a in &self.levels[i] {
                if restricted_class(a, here).is_none() {
                    return Err(Error::InvalidDerivedSequence(format!("level {i}: zero form")));
                }
                if !is_definite(here, a) {
                    return Err(Error::InvalidDerivedSequence(format!("level {i}: form {a:?} is not definite")));
                }
            }
            if i + 1 == n {
                break;
            }
            let next = self.flag.level(i + 1);
            let d = derived_set(&self.levels[i], next, self.flag.dual_ray(i))
                .map_err(|e| Error::InvalidDerivedSequence(format!("level {i}: {e}")))?;
            let have: Vec<Vec<BigInt>> = self.level_classes(i + 1);
            for f in d {
                let k = restricted_class(&f, next).expect("nonzero by construction");
                if !have.contains(&k) {
                    return Err(Error::InvalidDerivedSequence(format!("level {}: missing derived form {k:?}", i + 1)));
                }
            }
        }
        Ok(())
    }

    /// Every level form, written in standard coordinates, has zero coefficients before its level
    /// and coefficients of one sign after it, with the last one nonzero.
    pub fn check_sign_pattern(&self) -> Result<()> {
        let gens = self.flag.cone.generators();
        let n = self.dim();
        for (i, level) in self.levels.iter().enumerate() {
            for a in level {
                let vals: QVec = gens[i..].iter().map(|g| dot(a, g)).collect();
                let sign_ok = vals.iter().all(|v| !v.is_negative()) || vals.iter().all(|v| !v.is_positive());
                if !sign_ok || vals[n - 1 - i].is_zero() {
                    return Err(Error::InvalidDerivedSequence(format!("level {i}: sign pattern {vals:?}")));
                }
            }
        }
        Ok(())
    }
}
