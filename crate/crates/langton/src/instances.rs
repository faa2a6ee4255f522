//! Seeded random cocycles with known answers.

use langton_core::bundles::{birkhoff_matrix, Base, Group, LoopCocycle, SplittingType};
use langton_core::{GroundField, LMatrix, PuiseuxScalar, TLaurent};
use rand::seq::SliceRandom;
use rand::Rng;

const Q: GroundField = GroundField::Rationals;

fn nonzero_coeff<R: Rng>(rng: &mut R) -> i64 {
    let c = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        -c
    } else {
        c
    }
}

/// `sum c_e t^{sign * e}` for `e` in `0..=max_deg`, plus a `pi`-multiple when `pi_part`.
fn random_poly<R: Rng>(rng: &mut R, sign: i64, max_deg: i64, pi_part: bool) -> TLaurent {
    let mut terms = Vec::new();
    for e in 0..=max_deg {
        if rng.gen_bool(0.6) {
            terms.push((sign * e, PuiseuxScalar::from_i64(Q, nonzero_coeff(rng), 1)));
        }
        if pi_part && rng.gen_bool(0.3) {
            let c = PuiseuxScalar::monomial(Q.from_i64(nonzero_coeff(rng)), 1, 1);
            terms.push((sign * e, c));
        }
    }
    TLaurent::from_terms(Q, 1, terms, None)
}

fn elementary(n: usize, i: usize, j: usize, x: TLaurent) -> LMatrix {
    let mut m = LMatrix::identity(Q, 1, n);
    m.set(i, j, x);
    m
}

/// Product of `count` elementary matrices with off-diagonal entries in `k[t^{sign}]`.
fn random_elementary_product<R: Rng>(
    rng: &mut R,
    n: usize,
    sign: i64,
    count: usize,
    max_deg: i64,
    pi_part: bool,
) -> LMatrix {
    let mut m = LMatrix::identity(Q, 1, n);
    for _ in 0..count {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let x = random_poly(rng, sign, max_deg, pi_part);
        m = m.mul(&elementary(n, i, j, x));
    }
    m
}

/// Random element of `SL_n(k[t^-1])`.
pub fn random_outer<R: Rng>(rng: &mut R, n: usize, count: usize, max_deg: i64) -> LMatrix {
    random_elementary_product(rng, n, -1, count, max_deg, false)
}

/// Random element of `SL_n(k[t])`.
pub fn random_inner<R: Rng>(rng: &mut R, n: usize, count: usize, max_deg: i64) -> LMatrix {
    random_elementary_product(rng, n, 1, count, max_deg, false)
}

/// Exponents in `[-4, 4]` summing to zero.
pub fn random_sl_exponents<R: Rng>(rng: &mut R, n: usize) -> Vec<i64> {
    loop {
        let mut d: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-4..=4)).collect();
        let last = -d.iter().sum::<i64>();
        if (-4..=4).contains(&last) {
            d.push(last);
            return d;
        }
    }
}

/// `X diag(t^d) Y` over `Q`, returned with its splitting type `sorted(-d)`.
pub fn random_split_cocycle<R: Rng>(rng: &mut R, n: usize) -> (LMatrix, SplittingType) {
    let d = random_sl_exponents(rng, n);
    let x = random_outer(rng, n, 3, 2);
    let y = random_inner(rng, n, 3, 2);
    let m = x.mul(&LMatrix::diag_t_powers(Q, 1, &d)).mul(&y);
    (m, SplittingType::new(d.iter().map(|e| -e).collect()))
}

/// `X m Y` for random `X` over `k[t^-1]` and `Y` over `k[[t]]`; `Y` sometimes carries a
/// non-polynomial unit `diag(1 + c t, (1 + c t)^{-1})`, expanded to `O(t^unit_prec)`.
pub fn double_coset_move<R: Rng>(rng: &mut R, m: &LMatrix, unit_prec: i64) -> LMatrix {
    let n = m.rows();
    let x = random_outer(rng, n, 2, 1);
    let mut y = random_inner(rng, n, 2, 1);
    if rng.gen_bool(0.25) {
        let c = PuiseuxScalar::from_i64(Q, nonzero_coeff(rng), 1);
        let u = TLaurent::from_terms(Q, 1, vec![(0, PuiseuxScalar::one(Q, 1)), (1, c)], None);
        let u_inv = u.truncate(unit_prec).invert(unit_prec).expect("unit");
        let mut diag = LMatrix::identity(Q, 1, n);
        let i = rng.gen_range(0..n - 1);
        diag.set(i, i, u);
        diag.set(i + 1, i + 1, u_inv);
        y = y.mul(&diag);
    }
    x.mul(m).mul(&y)
}

/// Unstable special types per rank, with every admissible cut.
fn special_types(n: usize) -> &'static [&'static [i64]] {
    match n {
        2 => &[&[1, -1], &[2, -2]],
        3 => &[&[1, 0, -1], &[1, 1, -2], &[2, -1, -1], &[2, 0, -2]],
        _ => panic!("instances are generated for ranks 2 and 3"),
    }
}

fn random_laurent<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> TLaurent {
    let k = rng.gen_range(1..=2);
    let terms = (0..k)
        .map(|_| {
            (
                rng.gen_range(lo..=hi),
                PuiseuxScalar::from_i64(Q, nonzero_coeff(rng), 1),
            )
        })
        .collect::<Vec<_>>();
    TLaurent::from_terms(Q, 1, terms, None)
}

/// An `SL_n` cocycle over the DVR with balanced generic type and unstable special type.
///
/// Built as `X h Y` with `h = [[D1, 0], [pi^k W, D2]]`, where `diag(D1, D2)` is the split
/// special fiber and `W` is resampled until the generic fiber is balanced. `X` has
/// entries in `R[t^-1]`, `Y` in `R[t]`, both with `pi`-perturbations.
pub fn random_reduction_instance<R: Rng>(rng: &mut R, n: usize) -> LoopCocycle {
    loop {
        let a = *special_types(n).choose(rng).unwrap();
        let cuts: Vec<usize> = (1..n).filter(|&c| a[c - 1] > a[c]).collect();
        let cut = *cuts.choose(rng).unwrap();
        let k = rng.gen_range(1..=2);
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        let mut h = LMatrix::diag_t_powers(Q, 1, &neg);
        let pik = PuiseuxScalar::monomial(Q.one(), k, 1);
        for i in cut..n {
            for j in 0..cut {
                let mut w = if rng.gen_bool(0.5) {
                    random_laurent(rng, -3, 3)
                } else {
                    TLaurent::zero(Q, 1)
                };
                // a monomial with nonzero image in H^1(O(a_i - a_j))
                let top = a[j] - a[i] - 1;
                if top >= 1 && rng.gen_bool(0.8) {
                    let e = rng.gen_range(1..=top) - a[j];
                    let c = PuiseuxScalar::from_i64(Q, nonzero_coeff(rng), 1);
                    w = w.add(&TLaurent::monomial(c, e));
                }
                h.set(i, j, w.scale(&pik));
            }
        }
        let x = random_elementary_product(rng, n, -1, 2, 1, true);
        let y = random_elementary_product(rng, n, 1, 2, 1, true);
        let g = x.mul(&h).mul(&y);
        let Ok(generic) = birkhoff_matrix(&g, 32) else {
            continue;
        };
        if generic.splitting_type() != SplittingType::trivial(n) {
            continue;
        }
        let cocycle = LoopCocycle::new(Group::SL, Base::Dvr, g, 32).expect("det 1 and integral");
        let special = birkhoff_matrix(cocycle.special_fiber().unwrap().matrix(), 32)
            .expect("exact special fiber")
            .splitting_type();
        assert_eq!(special.exponents(), a);
        return cocycle;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn split_cocycles_have_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [2, 3] {
            let (m, ty) = random_split_cocycle(&mut rng, n);
            assert!(m.det_exact().is_one());
            assert_eq!(ty.degree(), 0);
        }
    }

    #[test]
    fn reduction_instances_meet_hypotheses() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [2, 3] {
            let g = random_reduction_instance(&mut rng, n);
            assert_eq!(g.base(), Base::Dvr);
            assert!(g.matrix().is_exact());
        }
    }
}
