use num_bigint::BigInt;
use rand::{Rng, SeedableRng};

use super::*;
use crate::exact::rational::{ints_to_rationals, ratio, rat};
use crate::geometry::{regular_faces, Cone, Flag, SimplicialCone};
use crate::linalg::QVec;

fn q(v: &[i64]) -> QVec {
    ints_to_rationals(v)
}

fn classes(forms: &[QVec], gens: &[QVec]) -> Vec<Vec<BigInt>> {
    let mut c: Vec<_> = forms.iter().filter_map(|f| restricted_class(f, gens)).collect();
    c.sort();
    c
}

fn bi(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn derived_set_examples() {
    let facet = vec![q(&[0, 1])];
    let v = q(&[1, 0]);
    let d = derived_set(&[q(&[0, 1]), q(&[1, 1])], &facet, &v).unwrap();
    assert_eq!(classes(&d, &facet), vec![bi(&[1])]);
    let d = derived_set(&[q(&[1, 1]), q(&[2, 1])], &facet, &v).unwrap();
    assert_eq!(classes(&d, &facet), vec![bi(&[1])]);

    let facet3 = vec![q(&[0, 1, 0]), q(&[0, 0, 1])];
    let d = derived_set(&[q(&[1, 1, 0]), q(&[1, 0, 1])], &facet3, &q(&[1, 0, 0])).unwrap();
    assert_eq!(classes(&d, &facet3), vec![bi(&[0, 1]), bi(&[1, -1]), bi(&[1, 0])]);

    assert!(derived_set(&[q(&[1, 0])], &facet, &v).is_err());
}

fn check_cover(c: &Cone, seqs: &[DerivedSequence], seed: u64) {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let h = c.hrep();
    for _ in 0..300 {
        let x: QVec = (0..c.ambient_dim()).map(|_| ratio(rng.gen_range(-30..=30), 11)).collect();
        if !h.relint_contains(&x) {
            continue;
        }
        let cones: Vec<&SimplicialCone> = seqs.iter().map(|s| &s.flag.cone).collect();
        if cones.iter().any(|k| k.contains(&x) && !k.relint_contains(&x)) {
            continue;
        }
        assert_eq!(cones.iter().filter(|k| k.relint_contains(&x)).count(), 1, "{x:?}");
    }
}

#[test]
fn build_half_line() {
    let c = Cone::from_ints(&[vec![1]]).unwrap();
    let s = build_derived_sequences(&c, &[q(&[1])]).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].levels.len(), 1);
    s[0].validate().unwrap();
}

#[test]
fn build_quadrant_three_forms() {
    let c = Cone::from_ints(&[vec![1, 0], vec![0, 1]]).unwrap();
    let forms = [q(&[1, 0]), q(&[0, 1]), q(&[1, 1])];
    let seqs = build_derived_sequences(&c, &forms).unwrap();
    for s in &seqs {
        s.validate().unwrap();
        s.check_sign_pattern().unwrap();
        assert_eq!(s.level_classes(0).len(), 3);
    }
    check_cover(&c, &seqs, 1);
}

#[test]
fn build_random_three_dim() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let c = Cone::from_ints(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
    for round in 0..4 {
        let forms: Vec<QVec> = (0..3).map(|_| q(&(0..3).map(|_| rng.gen_range(0..=2)).collect::<Vec<_>>()))
            .filter(|f| f.iter().any(|x| *x != rat(0)))
            .collect();
        let seqs = build_derived_sequences(&c, &forms).unwrap();
        for s in &seqs {
            s.validate().unwrap();
            s.check_sign_pattern().unwrap();
        }
        check_cover(&c, &seqs, round);
    }
}

fn quadrant_sequence(level0: Vec<QVec>) -> DerivedSequence {
    let cone = SimplicialCone::from_ints(&[vec![1, 0], vec![0, 1]]).unwrap();
    DerivedSequence { flag: Flag::new(&cone, &[0, 1]), levels: vec![level0, vec![q(&[0, 1])]] }
}

#[test]
fn rescale_examples() {
    let d = quadrant_sequence(vec![q(&[1, 1]), q(&[0, 1])]);
    d.validate().unwrap();
    assert_eq!(primitive_rescale(&d).0, bi(&[1, 1]));

    let d = quadrant_sequence(vec![vec![rat(1), ratio(1, 2)]]);
    let (e, r) = primitive_rescale(&d);
    assert_eq!(e, bi(&[1, 2]));
    assert_eq!(variable_part(&r, 0).unwrap().representatives, vec![bi(&[1, 1])]);

    let d = quadrant_sequence(vec![vec![rat(1), ratio(1, 2)], vec![rat(1), ratio(1, 3)]]);
    assert_eq!(primitive_rescale(&d).0, bi(&[1, 6]));
}

#[test]
fn variable_part_examples() {
    let d = quadrant_sequence(vec![q(&[1, 1]), q(&[0, 1])]);
    assert_eq!(variable_part(&d, 0).unwrap().representatives, vec![bi(&[1, 1])]);
    let d = quadrant_sequence(vec![q(&[0, 1])]);
    assert!(variable_part(&d, 0).unwrap().representatives.is_empty());
    assert_eq!(variable_part(&d, 1).unwrap().representatives, vec![bi(&[1])]);
    let d = quadrant_sequence(vec![vec![rat(1), ratio(1, 2)]]);
    assert!(variable_part(&d, 0).is_err());
}

#[test]
fn restriction() {
    let c = Cone::from_ints(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
    let forms = [q(&[1, 1, 0]), q(&[1, 0, 1]), q(&[0, 1, 2])];
    for d in build_derived_sequences(&c, &forms).unwrap() {
        let (_, faces) = regular_faces(&d.flag);
        assert_eq!(restrict_derived(&d, &faces[0]).unwrap(), d);
        for f in &faces {
            let r = restrict_derived(&d, f).unwrap();
            r.validate().unwrap();
            // restricting again along a regular face of the restriction composes index sets
            let (_, sub) = regular_faces(&r.flag);
            for g in &sub {
                let twice = restrict_derived(&r, g).unwrap();
                let composed: Vec<usize> = g.indices.iter().map(|&j| f.indices[j]).collect();
                let face = crate::geometry::RegularFace {
                    generators: composed.iter().map(|&i| d.flag.cone.generators()[i].clone()).collect(),
                    indices: composed,
                };
                assert_eq!(twice, restrict_derived(&d, &face).unwrap());
            }
        }
        assert!(restrict_derived(&d, &crate::geometry::RegularFace { indices: vec![0], generators: vec![] }).is_err());
    }
}
