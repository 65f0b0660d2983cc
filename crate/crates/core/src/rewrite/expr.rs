//! From a cone piece to integrals over the unit cube.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::term::{Mono, TProd, TTerm};
use super::unifactor::root_split;
use crate::derivation::DerivedSequence;
use crate::error::{Error, Result};
use crate::exact::rational::{dot, Rational};
use crate::exact::{CycloNumber, LatticeCharacter};
use crate::geometry::cone::subsets;
use crate::lin::Lin;
use crate::linalg::{self, QMat, QVec};

/// `coefficient · ∫_{(0,1)^n} Π_j T(u_j) Π dy_i/y_i` with `T(u) = u/(1 − u)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Integrand {
    pub coefficient: CycloNumber,
    pub factors: Vec<Mono>,
}

impl Integrand {
    pub fn num_vars(&self) -> usize {
        self.factors.first().map_or(0, |m| m.exps.len())
    }

    /// The variables dividing the numerator `Π u_j`.
    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.num_vars()).filter(|&i| self.factors.iter().any(|m| m.exps[i] > 0)).collect()
    }

    /// Exponent vectors `α_j`, the functionals fed to the derivation on the orthant.
    pub fn exponent_forms(&self) -> QMat {
        self.factors
            .iter()
            .map(|m| m.exps.iter().map(|&a| Rational::from_integer(a.into())).collect())
            .collect()
    }
}

/// Scales each form by the least `s_i` making `s_i l_i(h_j)` integral on all generators.
/// Returns the scaled forms and `Π s_i`.
pub fn integralize_forms(generators: &[QVec], forms: &[QVec]) -> (QMat, BigInt) {
    let mut prod = BigInt::one();
    let scaled = forms
        .iter()
        .map(|l| {
            let s = generators.iter().fold(BigInt::one(), |acc, h| acc.lcm(dot(l, h).denom()));
            prod *= &s;
            l.iter().map(|x| x * Rational::from_integer(s.clone())).collect()
        })
        .collect();
    (scaled, prod)
}

/// `Σ_{k ∈ N_{≥1}^m} χ(Σ k_j h_j) / Π_i l_i(Σ k_j h_j)` as `∫ Π_j T(χ(h_j) y^{α_j})`,
/// `α_j = (l_i(h_j))_i`.
pub fn integral_expression(generators: &[QVec], forms: &[QVec], chi: &LatticeCharacter) -> Result<Integrand> {
    let mut factors = Vec::with_capacity(generators.len());
    for h in generators {
        let mut exps = Vec::with_capacity(forms.len());
        for l in forms {
            let v = dot(l, h);
            if v.is_negative() || !v.is_integer() {
                return Err(Error::precondition("integral_expression", format!("form value {v} on a generator is not natural")));
            }
            exps.push(v.to_integer().to_u32().ok_or_else(|| Error::Budget("form value too large".into()))?);
        }
        if exps.iter().all(|&a| a == 0) {
            return Err(Error::Divergent("a generator is killed by every form".into()));
        }
        factors.push(Mono::new(chi.eval(h)?, exps));
    }
    Ok(Integrand { coefficient: CycloNumber::one(), factors })
}

/// Absolute convergence of the sum over the open simplicial cone: every nonempty set `J` of
/// generators meets strictly more than `|J|` forms.
pub fn convergence_check(generators: &[QVec], forms: &[QVec]) -> bool {
    let m = generators.len();
    let touches: Vec<Vec<bool>> = generators
        .iter()
        .map(|h| forms.iter().map(|l| !dot(l, h).is_zero()).collect())
        .collect();
    for k in 1..=m {
        for j in subsets(m, k) {
            let count = (0..forms.len()).filter(|&i| j.iter().any(|&g| touches[g][i])).count();
            if count <= k {
                return false;
            }
        }
    }
    true
}

/// Substitutes `y^α ↦ Π_k y_k'^{α·G_k}` on each rescaled sequence with generators `G_k`,
/// multiplies by `|det G|`, and splits factors with leading exponent above 1.
pub fn change_coordinates(
    integrand: &Integrand,
    sequences: &[DerivedSequence],
) -> Result<Vec<(DerivedSequence, CycloNumber, Lin<TTerm>)>> {
    let forms = integrand.exponent_forms();
    let n = integrand.num_vars();
    let mut out = Vec::with_capacity(sequences.len());
    for seq in sequences {
        let g = seq.flag.cone.generators();
        let det = linalg::determinant(g).abs();
        let mut acc: Vec<(TProd, CycloNumber)> = vec![(TProd::new(), CycloNumber::one())];
        for (a, m) in forms.iter().zip(&integrand.factors) {
            let mut exps = Vec::with_capacity(n);
            for gk in g {
                let v = dot(a, gk);
                if v.is_negative() || !v.is_integer() {
                    return Err(Error::InvalidDerivedSequence(format!("substituted exponent {v} is not natural")));
                }
                exps.push(v.to_integer().to_u32().ok_or_else(|| Error::Budget("exponent too large".into()))?);
            }
            let split = root_split(&Mono::new(m.root, exps), 1)
                .map_err(|e| Error::InvalidDerivedSequence(e.to_string()))?;
            let mut next = Vec::new();
            for (p, c) in &acc {
                for (q, d) in &split {
                    let mut r = p.clone();
                    for (k, v) in q {
                        *r.entry(k.clone()).or_insert(0) += v;
                    }
                    next.push((r, c * d));
                }
            }
            acc = next;
        }
        let coeff = integrand.coefficient.scale(&det);
        let integrated: Vec<usize> = (0..n.saturating_sub(1)).collect();
        let lin: Lin<TTerm> = acc
            .into_iter()
            .map(|(p, c)| (TTerm { integrated: integrated.clone(), prod: p }, c))
            .collect();
        out.push((seq.clone(), coeff, lin));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ints_to_rationals;
    use crate::exact::RootOfUnity;
    use crate::geometry::Lattice;

    fn q(rows: &[&[i64]]) -> QMat {
        rows.iter().map(|r| ints_to_rationals(r)).collect()
    }

    #[test]
    fn integral_expression_examples() {
        let chi = LatticeCharacter::trivial(Lattice::standard(1));
        let i = integral_expression(&q(&[&[1]]), &q(&[&[1], &[1]]), &chi).unwrap();
        assert_eq!(i.factors, vec![Mono::new(RootOfUnity::ONE, vec![1, 1])]);
        let chi = LatticeCharacter::new(Lattice::standard(1), 2, vec![1]).unwrap();
        let i = integral_expression(&q(&[&[1]]), &q(&[&[1], &[1]]), &chi).unwrap();
        assert_eq!(i.factors[0].root, RootOfUnity::MINUS_ONE);
        let chi = LatticeCharacter::trivial(Lattice::standard(2));
        let i = integral_expression(&q(&[&[1, 0], &[0, 1]]), &q(&[&[1, 0], &[1, 1]]), &chi).unwrap();
        assert_eq!(i.factors[0].exps, vec![1, 1]);
        assert_eq!(i.factors[1].exps, vec![0, 1]);
        assert_eq!(i.zero_set(), vec![0, 1]);
        assert!(integral_expression(&q(&[&[1, 0]]), &q(&[&[-1, 0]]), &LatticeCharacter::trivial(Lattice::standard(2))).is_err());
    }

    #[test]
    fn convergence_examples() {
        assert!(convergence_check(&q(&[&[1]]), &q(&[&[1], &[1]])));
        assert!(!convergence_check(&q(&[&[1]]), &q(&[&[1]])));
        let quad = q(&[&[1, 0], &[0, 1]]);
        assert!(!convergence_check(&quad, &q(&[&[1, 0], &[1, 1]])));
        assert!(convergence_check(&quad, &q(&[&[1, 0], &[1, 1], &[1, 1]])));
    }

    #[test]
    fn integralize() {
        let (f, s) = integralize_forms(&[vec![Rational::new(1.into(), 2.into()), Rational::one()]], &q(&[&[1, 0], &[1, 1]]));
        assert_eq!(s, BigInt::from(4));
        assert_eq!(f[1], ints_to_rationals(&[2, 2]));
    }
}
