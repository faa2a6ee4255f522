//! Dense linear algebra over the scalar field `K`.

use alloc::vec::Vec;

use crate::scalar::PuiseuxScalar;

/// Row-reduces `rows` in place and returns the pivot columns.
fn rref(rows: &mut [Vec<PuiseuxScalar>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().unwrap();
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..ncols {
                    let v = rows[i][k].sub(&f.mul(&rows[r][k]));
                    rows[i][k] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<PuiseuxScalar>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// A nonzero `c` with `sum_i c_i * vectors[i] = 0`, if the vectors are dependent.
pub fn dependency(vectors: &[Vec<PuiseuxScalar>]) -> Option<Vec<PuiseuxScalar>> {
    let k = vectors.len();
    if k == 0 {
        return None;
    }
    let dim = vectors[0].len();
    // columns are the vectors; solve M c = 0
    let mut m: Vec<Vec<PuiseuxScalar>> = (0..dim)
        .map(|i| vectors.iter().map(|v| v[i].clone()).collect())
        .collect();
    let pivots = rref(&mut m);
    let free = (0..k).find(|c| !pivots.contains(c))?;
    let field = vectors[0][0].field();
    let n = vectors[0][0].root_denominator();
    let mut c = alloc::vec![PuiseuxScalar::zero(field, n); k];
    c[free] = PuiseuxScalar::one(field, n);
    for (row, &p) in pivots.iter().enumerate() {
        c[p] = m[row][free].neg();
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GroundField;

    fn s(x: i64) -> PuiseuxScalar {
        PuiseuxScalar::from_i64(GroundField::Rationals, x, 1)
    }

    #[test]
    fn finds_dependency() {
        let v = alloc::vec![
            alloc::vec![s(1), s(2)],
            alloc::vec![s(2), s(4)],
        ];
        let c = dependency(&v).unwrap();
        for i in 0..2 {
            let sum = c[0].mul(&v[0][i]).add(&c[1].mul(&v[1][i]));
            assert!(sum.is_zero());
        }
        assert_eq!(rank(&v), 1);
    }

    #[test]
    fn independent_vectors() {
        let v = alloc::vec![alloc::vec![s(1), s(0)], alloc::vec![s(1), s(1)]];
        assert!(dependency(&v).is_none());
        assert_eq!(rank(&v), 2);
    }
}
