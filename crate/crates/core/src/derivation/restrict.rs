use crate::error::{Error, Result};
use crate::geometry::{Flag, RegularFace};

use super::sequence::{dedup_classes, DerivedSequence};

/// Restriction to a regular face with index set `t_0 < … < t_{k−1} = n−1`: the flag keeps the
/// face's generators in order and level `j` takes `S^(t_j)` restricted to it.
pub fn restrict_derived(d: &DerivedSequence, face: &RegularFace) -> Result<DerivedSequence> {
    let n = d.dim();
    let idx = &face.indices;
    if idx.last() != Some(&(n - 1)) || idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::NotAFace(format!("{idx:?} is not a regular face")));
    }
    let flag = Flag::new(&d.flag.cone, idx);
    let levels = idx
        .iter()
        .enumerate()
        .map(|(j, &t)| dedup_classes(d.levels[t].iter().cloned(), flag.level(j)))
        .collect();
    Ok(DerivedSequence { flag, levels })
}
