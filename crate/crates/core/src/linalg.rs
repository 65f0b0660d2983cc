//! Small exact linear algebra over Q and Z used by the geometry layer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::rational::Rational;

pub type QVec = Vec<Rational>;
pub type QMat = Vec<QVec>;

/// Row-reduces a copy of `m`; returns the reduced matrix and pivot columns.
pub fn rref(m: &QMat) -> (QMat, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in c..cols {
                    let v = &a[r][k] * &f;
                    a[i][k] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &QMat) -> usize {
    if m.is_empty() {
        return 0;
    }
    rref(m).1.len()
}

pub fn transpose(m: &QMat) -> QMat {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec(m: &QMat, v: &[Rational]) -> QVec {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

pub fn mat_mul(a: &QMat, b: &QMat) -> QMat {
    let bt = transpose(b);
    a.iter().map(|row| mat_vec(&bt, row)).collect()
}

pub fn determinant(m: &QMat) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Rational::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &piv;
            for k in c..n {
                let v = &a[c][k] * &f;
                a[i][k] -= v;
            }
        }
    }
    det
}

pub fn inverse(m: &QMat) -> Option<QMat> {
    let n = m.len();
    let aug: QMat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `a x = b` for square or overdetermined consistent systems; `None` when inconsistent
/// or underdetermined.
pub fn solve(a: &QMat, b: &[Rational]) -> Option<QVec> {
    let cols = a.first().map_or(0, Vec::len);
    let aug: QMat = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.contains(&cols) || piv.len() < cols {
        return None;
    }
    Some((0..cols).map(|i| red[i][cols].clone()).collect())
}

/// Basis of the right null space `{x : m x = 0}`.
pub fn nullspace(m: &QMat, cols: usize) -> QMat {
    if m.is_empty() {
        return (0..cols)
            .map(|i| (0..cols).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
    }
    let (red, piv) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &p) in piv.iter().enumerate() {
                v[p] = -red[r][f].clone();
            }
            v
        })
        .collect()
}

/// Integer basis of `{x ∈ Z^n : m x = 0}` for an integer matrix `m` (rows of length `n`).
/// Uses unimodular column operations so the result is a lattice basis, not just a Q-basis.
pub fn integer_kernel(m: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let rows = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    // u tracks column operations: a_original * u = a
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pc = 0; // next pivot column
    for r in 0..rows {
        if pc >= n {
            break;
        }
        loop {
            // pick the column >= pc with smallest nonzero |a[r][c]|
            let best = (pc..n).filter(|&c| !a[r][c].is_zero()).min_by_key(|&c| a[r][c].abs());
            let Some(b) = best else { break };
            swap_cols(&mut a, &mut u, pc, b);
            let mut done = true;
            for c in pc + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let q = a[r][c].div_floor(&a[r][pc]);
                add_col_multiple(&mut a, &mut u, c, pc, &(-q));
                if !a[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                pc += 1;
                break;
            }
        }
    }
    (pc..n).map(|c| (0..n).map(|i| u[i][c].clone()).collect()).collect()
}

fn swap_cols(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut().chain(u.iter_mut()) {
        row.swap(i, j);
    }
}

// column c += k * column p
fn add_col_multiple(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], c: usize, p: usize, k: &BigInt) {
    for row in a.iter_mut().chain(u.iter_mut()) {
        let v = &row[p] * k;
        row[c] += v;
    }
}

pub fn identity(n: usize) -> QMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, ratio};

    fn q(rows: &[&[i64]]) -> QMat {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn det_inverse_solve() {
        let m = q(&[&[1, 1], &[0, 2]]);
        assert_eq!(determinant(&m), rat(2));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![rat(1), ratio(-1, 2)], vec![rat(0), ratio(1, 2)]]);
        assert_eq!(solve(&m, &[rat(3), rat(4)]).unwrap(), vec![rat(1), rat(2)]);
        assert!(inverse(&q(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn kernels() {
        let m = q(&[&[1, 1, 1]]);
        assert_eq!(nullspace(&m, 3).len(), 2);
        let k = integer_kernel(&[vec![BigInt::from(2), BigInt::from(4), BigInt::from(6)]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(&v[0] * 2 + &v[1] * 4 + &v[2] * 6, BigInt::zero());
        }
        // the kernel basis must generate all integer solutions, e.g. (1, 1, -1)
        let kq: QMat = k.iter().map(|v| v.iter().cloned().map(Rational::from_integer).collect()).collect();
        let coeffs = solve(&transpose(&kq), &[rat(1), rat(1), rat(-1)]).unwrap();
        assert!(coeffs.iter().all(|c| c.is_integer()));
    }
}
