use num_traits::{Signed, Zero};

use super::cone::{Cone, SimplicialCone};
use super::triangulate::triangulate;
use crate::error::Result;
use crate::exact::rational::{dot, primitive_ray, to_rationals, Rational};
use crate::linalg::{QMat, QVec};

/// A simplicial piece together with the generator opposite the chosen facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinitePiece {
    pub cone: SimplicialCone,
    pub opposite: usize,
}

impl DefinitePiece {
    pub fn facet(&self) -> QMat {
        let g = self.cone.generators();
        (0..g.len()).filter(|&i| i != self.opposite).map(|i| g[i].clone()).collect()
    }
}

pub fn is_definite(gens: &[QVec], form: &[Rational]) -> bool {
    let vals: Vec<Rational> = gens.iter().map(|g| dot(form, g)).collect();
    !(vals.iter().any(|v| v.is_positive()) && vals.iter().any(|v| v.is_negative()))
}

fn vanishes_on(gens: &[QVec], form: &[Rational]) -> bool {
    gens.iter().all(|g| dot(form, g).is_zero())
}

/// The two halves of a simplicial cone cut by `{α = 0}`.
fn split(cone: &SimplicialCone, form: &[Rational]) -> Result<Vec<SimplicialCone>> {
    let gens = cone.generators();
    let vals: Vec<Rational> = gens.iter().map(|g| dot(form, g)).collect();
    let idx = |pred: fn(&Rational) -> bool| (0..gens.len()).filter(|&i| pred(&vals[i])).collect::<Vec<_>>();
    let (pos, neg, zero) = (idx(|v| v.is_positive()), idx(|v| v.is_negative()), idx(|v| v.is_zero()));
    let mut wall: QMat = Vec::new();
    for &p in &pos {
        for &q in &neg {
            let w: QVec = gens[q].iter().zip(&gens[p]).map(|(gq, gp)| &vals[p] * gq - &vals[q] * gp).collect();
            wall.push(to_rationals(&primitive_ray(&w)));
        }
    }
    let mut out = Vec::new();
    for side in [&pos, &neg] {
        let mut g: QMat = side.iter().chain(&zero).map(|&i| gens[i].clone()).collect();
        g.extend(wall.iter().cloned());
        out.extend(triangulate(&Cone::new(g)?)?);
    }
    Ok(out)
}

fn facet_scan(cone: &SimplicialCone, forms: &[QVec]) -> Option<usize> {
    let g = cone.generators();
    if g.len() == 1 {
        return Some(0);
    }
    (0..g.len()).find(|&o| {
        let facet: QMat = (0..g.len()).filter(|&i| i != o).map(|i| g[i].clone()).collect();
        forms.iter().all(|a| !vanishes_on(&facet, a))
    })
}

/// Subdivides `C` into simplicial cones on which every form is definite, each paired with a
/// facet on which no form vanishes. Pieces without such a facet are subdivided at the sum
/// of their generators; facets through that ray always qualify since the forms are definite.
pub fn refine_definite(c: &Cone, forms: &[QVec]) -> Result<Vec<DefinitePiece>> {
    let mut pieces = triangulate(c)?;
    for a in forms {
        let mut next = Vec::new();
        for p in pieces {
            if is_definite(p.generators(), a) {
                next.push(p);
            } else {
                next.extend(split(&p, a)?);
            }
        }
        pieces = next;
    }
    let mut out = Vec::new();
    for p in pieces {
        if let Some(o) = facet_scan(&p, forms) {
            out.push(DefinitePiece { cone: p, opposite: o });
            continue;
        }
        let w = to_rationals(&primitive_ray(&p.sum_of_generators()));
        for j in 0..p.dim() {
            let mut g = p.generators().clone();
            g[j] = w.clone();
            let sub = SimplicialCone::new(g)?;
            let o = facet_scan(&sub, forms).expect("facets through the barycentric ray are non-degenerate");
            out.push(DefinitePiece { cone: sub, opposite: o });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{ints_to_rationals, ratio};
    use rand::{Rng, SeedableRng};

    fn check(c: &Cone, forms: &[QVec], pieces: &[DefinitePiece]) {
        for p in pieces {
            for a in forms {
                assert!(is_definite(p.cone.generators(), a));
                if p.cone.dim() > 1 {
                    assert!(!vanishes_on(&p.facet(), a));
                }
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let h = c.hrep();
        for _ in 0..500 {
            let x: QVec = (0..c.ambient_dim()).map(|_| ratio(rng.gen_range(-40..=40), 7)).collect();
            let hits = pieces.iter().filter(|p| p.cone.relint_contains(&x)).count();
            let on_wall = pieces.iter().any(|p| p.cone.contains(&x) && !p.cone.relint_contains(&x));
            if h.relint_contains(&x) && !on_wall {
                assert_eq!(hits, 1, "{x:?}");
            }
            if !h.contains(&x) {
                assert_eq!(hits, 0);
            }
        }
    }

    #[test]
    fn quadrant_coordinate_forms_need_stellar() {
        let c = Cone::from_ints(&[vec![1, 0], vec![0, 1]]).unwrap();
        let forms = vec![ints_to_rationals(&[1, 0]), ints_to_rationals(&[0, 1])];
        let p = refine_definite(&c, &forms).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.iter().all(|x| x.facet() == vec![ints_to_rationals(&[1, 1])]));
        check(&c, &forms, &p);
    }

    #[test]
    fn positive_form_keeps_cone() {
        let c = Cone::from_ints(&[vec![1, 0], vec![0, 1]]).unwrap();
        let forms = vec![ints_to_rationals(&[1, 1])];
        let p = refine_definite(&c, &forms).unwrap();
        assert_eq!(p.len(), 1);
        check(&c, &forms, &p);
    }

    #[test]
    fn chamber_split() {
        let c = Cone::from_ints(&[vec![1, 0], vec![1, 2]]).unwrap();
        let forms = vec![ints_to_rationals(&[1, -1])];
        let p = refine_definite(&c, &forms).unwrap();
        assert_eq!(p.len(), 2);
        check(&c, &forms, &p);
    }

    #[test]
    fn three_dim_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let c = Cone::from_ints(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        for _ in 0..5 {
            let forms: Vec<QVec> = (0..3)
                .map(|_| ints_to_rationals(&(0..3).map(|_| rng.gen_range(-2..=2)).collect::<Vec<_>>()))
                .filter(|f: &QVec| f.iter().any(|x| !x.is_zero()))
                .collect();
            let p = refine_definite(&c, &forms).unwrap();
            check(&c, &forms, &p);
        }
    }
}
