use crate::error::Result;
use crate::geometry::{refine_definite, Cone, Flag, SimplicialCone};
use crate::linalg::{QMat, QVec};

use super::sequence::{dedup_classes, derived_set, DerivedSequence};

/// Flagged simplicial cones covering `C`, each carrying a derived sequence starting from `S`.
///
/// Each definite piece is split at its non-degenerate facet `F` with opposite ray `v`; the facet
/// is handled recursively with `D_F(S)` and every resulting cone `P` is joined back as `P * v`.
pub fn build_derived_sequences(c: &Cone, forms: &[QVec]) -> Result<Vec<DerivedSequence>> {
    let mut out = Vec::new();
    for (gens, levels) in build(c, forms)? {
        let cone = SimplicialCone::new_unnormalized_pub(gens);
        let n = cone.dim();
        out.push(DerivedSequence { flag: Flag::new(&cone, &(0..n).collect::<Vec<_>>()), levels });
    }
    Ok(out)
}

fn build(c: &Cone, forms: &[QVec]) -> Result<Vec<(QMat, Vec<QMat>)>> {
    let mut out = Vec::new();
    for piece in refine_definite(c, forms)? {
        let gens = piece.cone.generators();
        let s0 = dedup_classes(forms.iter().cloned(), gens);
        if gens.len() == 1 {
            out.push((gens.clone(), vec![s0]));
            continue;
        }
        let v = gens[piece.opposite].clone();
        let facet = piece.facet();
        let d = derived_set(&s0, &facet, &v)?;
        for (sub_gens, sub_levels) in build(&Cone::new(facet.clone())?, &d)? {
            let mut g = vec![v.clone()];
            g.extend(sub_gens);
            let mut levels = vec![dedup_classes(s0.iter().cloned(), &g)];
            levels.extend(sub_levels);
            out.push((g, levels));
        }
    }
    Ok(out)
}
