use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{dot, Rational};
use crate::geometry::{Flag, SimplicialCone};

use super::sequence::DerivedSequence;

/// Primitive representatives `(α_{i+1}, …, α_n)` of the level-`i` forms that do not vanish on
/// the dual ray, with `α_{i+1} = 1` and natural entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariablePart {
    pub level: usize,
    pub representatives: Vec<Vec<BigInt>>,
}

/// Scalars `e` such that on the generators `e_k g_k` every level form nonvanishing on its dual
/// ray has leading coefficient 1 and natural coefficients; returns them with the rescaled
/// sequence.
pub fn primitive_rescale(d: &DerivedSequence) -> (Vec<BigInt>, DerivedSequence) {
    let gens = d.flag.cone.generators();
    let n = gens.len();
    let mut e: Vec<BigInt> = vec![BigInt::one(); n];
    for j in 1..n {
        let mut ej = BigInt::one();
        for i in 0..j {
            for a in &d.levels[i] {
                let ai = dot(a, &gens[i]);
                let aj = dot(a, &gens[j]);
                if ai.is_zero() || aj.is_zero() {
                    continue;
                }
                let r: Rational = Rational::from_integer(e[i].clone()) * ai / aj;
                ej = ej.lcm(&r.numer().abs());
            }
        }
        e[j] = ej;
    }
    let scaled = gens
        .iter()
        .zip(&e)
        .map(|(g, ek)| g.iter().map(|x| x * Rational::from_integer(ek.clone())).collect())
        .collect();
    let cone = SimplicialCone::new_unnormalized_pub(scaled);
    let rescaled = DerivedSequence { flag: Flag::new(&cone, &(0..n).collect::<Vec<_>>()), levels: d.levels.clone() };
    (e, rescaled)
}

/// Primitive representatives at level `i` of a rescaled sequence.
pub fn variable_part(d: &DerivedSequence, i: usize) -> Result<VariablePart> {
    let gens = d.flag.level(i);
    let mut reps = Vec::new();
    for a in &d.levels[i] {
        let lead = dot(a, &gens[0]);
        if lead.is_zero() {
            continue;
        }
        let rep: Vec<Rational> = gens.iter().map(|g| dot(a, g) / &lead).collect();
        if rep.iter().any(|q| !q.is_integer() || q.is_negative()) {
            return Err(Error::precondition("variable_part", format!("sequence is not rescaled: {rep:?}")));
        }
        let rep: Vec<BigInt> = rep.into_iter().map(|q| q.to_integer()).collect();
        if !reps.contains(&rep) {
            reps.push(rep);
        }
    }
    reps.sort();
    Ok(VariablePart { level: i, representatives: reps })
}
