use std::collections::BTreeMap;

use langton_core::bundles::{birkhoff_matrix, SplittingType};
use langton_core::{GroundField, LMatrix, PuiseuxScalar, TLaurent};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

const Q: GroundField = GroundField::Rationals;

type Lp = BTreeMap<i64, BigRational>;
type Mat = Vec<Vec<Lp>>;

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn lp_add(a: &Lp, b: &Lp) -> Lp {
    let mut out = a.clone();
    for (e, c) in b {
        let v = out.entry(*e).or_insert_with(BigRational::zero);
        *v += c;
        if v.is_zero() {
            out.remove(e);
        }
    }
    out
}

fn lp_mul(a: &Lp, b: &Lp) -> Lp {
    let mut out = Lp::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            out = lp_add(&out, &Lp::from([(ea + eb, ca * cb)]));
        }
    }
    out
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Lp::new(), |acc, k| lp_add(&acc, &lp_mul(&a[i][k], &b[k][j]))))
                .collect()
        })
        .collect()
}

fn ident(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Lp::from([(0, q(1))]) } else { Lp::new() }).collect())
        .collect()
}

fn diag(d: &[i64]) -> Mat {
    let mut m = ident(d.len());
    for (i, e) in d.iter().enumerate() {
        m[i][i] = Lp::from([(*e, q(1))]);
    }
    m
}

/// An elementary matrix and its inverse.
fn elementary(n: usize, i: usize, j: usize, p: &Lp) -> (Mat, Mat) {
    let mut m = ident(n);
    let mut inv = ident(n);
    m[i][j] = p.clone();
    inv[i][j] = p.iter().map(|(e, c)| (*e, -c)).collect();
    (m, inv)
}

fn to_lmatrix(m: &Mat) -> LMatrix {
    let rows = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| {
                    let terms = p
                        .iter()
                        .map(|(e, c)| (*e, PuiseuxScalar::from_coeff(Q.from_rational(c).unwrap(), 1)));
                    TLaurent::from_terms(Q, 1, terms, None)
                })
                .collect()
        })
        .collect();
    LMatrix::from_rows(Q, rows)
}

/// Rank of a dense rational matrix.
fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let piv = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &piv;
                for k in c..cols {
                    let sub = &f * &rows[r][k];
                    rows[i][k] -= sub;
                }
            }
        }
        r += 1;
    }
    r
}

/// `h^0` of the bundle glued by `t^{-k} g`: sections `f_out` over `k[t^-1]` with
/// `t^k g^{-1} f_out` integral, searched in the window `t^0 .. t^{-window}`.
fn h0_oracle(g_inv: &Mat, k: i64, window: i64) -> usize {
    let n = g_inv.len();
    let unknowns: Vec<(usize, i64)> = (0..n).flat_map(|c| (0..=window).map(move |j| (c, j))).collect();
    // column for each unknown: t^k g^{-1} (t^{-j} e_c)
    let images: Vec<Vec<Lp>> = unknowns
        .iter()
        .map(|&(c, j)| {
            (0..n)
                .map(|r| g_inv[r][c].iter().map(|(e, x)| (e + k - j, x.clone())).collect())
                .collect()
        })
        .collect();
    let mut keys = std::collections::BTreeSet::new();
    for img in &images {
        for (r, p) in img.iter().enumerate() {
            for e in p.keys().filter(|e| **e < 0) {
                keys.insert((r, *e));
            }
        }
    }
    let rows: Vec<Vec<BigRational>> = keys
        .iter()
        .map(|(r, e)| {
            images
                .iter()
                .map(|img| img[*r].get(e).cloned().unwrap_or_else(BigRational::zero))
                .collect()
        })
        .collect();
    unknowns.len() - if rows.is_empty() { 0 } else { rank(rows) }
}

fn expected_h0(ty: &SplittingType, k: i64) -> usize {
    ty.exponents().iter().map(|a| (a + k + 1).max(0) as usize).sum()
}

#[derive(Debug, Clone)]
struct Instance {
    d: Vec<i64>,
    outer: Vec<(usize, usize, Vec<i64>)>,
    inner: Vec<(usize, usize, Vec<i64>)>,
}

fn arb_instance(n: usize) -> impl Strategy<Value = Instance> {
    let el = (0..n, 1..n, prop::collection::vec(-2i64..3, 1..3));
    (
        prop::collection::vec(-3i64..4, n),
        prop::collection::vec(el.clone(), 0..3),
        prop::collection::vec(el, 0..3),
    )
        .prop_map(move |(d, outer, inner)| {
            let fix = |v: Vec<(usize, usize, Vec<i64>)>| {
                v.into_iter().map(|(i, s, c)| (i, (i + s) % n, c)).collect()
            };
            Instance {
                d,
                outer: fix(outer),
                inner: fix(inner),
            }
        })
}

/// `(g, g^{-1})` for `g = X diag(t^d) Y`.
fn build(inst: &Instance) -> (Mat, Mat) {
    let n = inst.d.len();
    let poly = |coeffs: &[i64], sign: i64| -> Lp {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(e, c)| (sign * e as i64, q(*c)))
            .collect()
    };
    let (mut x, mut x_inv) = (ident(n), ident(n));
    for (i, j, c) in &inst.outer {
        let (e, ei) = elementary(n, *i, *j, &poly(c, -1));
        x = mat_mul(&x, &e);
        x_inv = mat_mul(&ei, &x_inv);
    }
    let (mut y, mut y_inv) = (ident(n), ident(n));
    for (i, j, c) in &inst.inner {
        let (e, ei) = elementary(n, *i, *j, &poly(c, 1));
        y = mat_mul(&y, &e);
        y_inv = mat_mul(&ei, &y_inv);
    }
    let neg: Vec<i64> = inst.d.iter().map(|e| -e).collect();
    let g = mat_mul(&mat_mul(&x, &diag(&inst.d)), &y);
    let g_inv = mat_mul(&mat_mul(&y_inv, &diag(&neg)), &x_inv);
    (g, g_inv)
}

fn check_factorization(m: &LMatrix) -> SplittingType {
    let f = birkhoff_matrix(m, 24).unwrap();
    let amb = f.a.mul(m).mul(&f.b);
    assert!(amb.sub(&f.d()).is_zero());
    for (_, _, x) in f.a.entries() {
        assert!(x.highest().is_none_or(|h| h <= 0));
    }
    for (_, _, x) in f.b.entries() {
        assert!(x.lowest().is_none_or(|l| l >= 0));
    }
    let d = &f.d_exponents;
    assert!(d.windows(2).all(|w| w[0] >= w[1]));
    f.splitting_type()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn type_is_negated_diagonal(inst in (2usize..4).prop_flat_map(arb_instance)) {
        let (g, _) = build(&inst);
        let ty = check_factorization(&to_lmatrix(&g));
        prop_assert_eq!(ty, SplittingType::new(inst.d.iter().map(|e| -e).collect()));
    }

    #[test]
    fn sections_match_splitting_type(inst in (2usize..4).prop_flat_map(arb_instance)) {
        let (g, g_inv) = build(&inst);
        let ty = check_factorization(&to_lmatrix(&g));
        for k in -2..3 {
            prop_assert_eq!(h0_oracle(&g_inv, k, 24), expected_h0(&ty, k), "twist {}", k);
        }
    }

    #[test]
    fn degree_is_determinant_valuation(inst in (2usize..4).prop_flat_map(arb_instance)) {
        let (g, _) = build(&inst);
        let m = to_lmatrix(&g);
        let ty = check_factorization(&m);
        let det = m.det_exact();
        prop_assert_eq!(det.num_terms(), 1);
        prop_assert_eq!(ty.degree(), -det.lowest().unwrap());
    }

    #[test]
    fn dual_has_negated_type(inst in (2usize..4).prop_flat_map(arb_instance)) {
        let (g, g_inv) = build(&inst);
        let ty = check_factorization(&to_lmatrix(&g));
        let n = g.len();
        let dual: Mat = (0..n).map(|i| (0..n).map(|j| g_inv[j][i].clone()).collect()).collect();
        let dual_ty = check_factorization(&to_lmatrix(&dual));
        prop_assert_eq!(dual_ty, SplittingType::new(ty.exponents().iter().map(|a| -a).collect()));
    }

    #[test]
    fn double_coset_invariance(
        inst in (2usize..4).prop_flat_map(arb_instance),
        extra in (2usize..4).prop_flat_map(arb_instance),
    ) {
        prop_assume!(inst.d.len() == extra.d.len());
        let (g, _) = build(&inst);
        let moved = Instance { d: vec![0; inst.d.len()], ..extra };
        let (h, _) = build(&moved);
        // h = X' Y'; X' g Y' is in the same double coset as g
        let n = g.len();
        let (mut x, mut y) = (ident(n), ident(n));
        for (i, j, c) in &moved.outer {
            let p = c.iter().enumerate().map(|(e, c)| (-(e as i64), q(*c))).filter(|(_, c)| !c.is_zero()).collect();
            x = mat_mul(&x, &elementary(n, *i, *j, &p).0);
        }
        for (i, j, c) in &moved.inner {
            let p = c.iter().enumerate().map(|(e, c)| (e as i64, q(*c))).filter(|(_, c)| !c.is_zero()).collect();
            y = mat_mul(&y, &elementary(n, *i, *j, &p).0);
        }
        prop_assert_eq!(mat_mul(&x, &y), h);
        let base = check_factorization(&to_lmatrix(&g));
        let other = check_factorization(&to_lmatrix(&mat_mul(&mat_mul(&x, &g), &y)));
        prop_assert_eq!(base, other);
    }
}

#[test]
fn line_bundle_sign_convention() {
    // t^c glues O(-c): O(-2) has no sections, O(2) has three
    let m = to_lmatrix(&diag(&[-2]));
    assert_eq!(check_factorization(&m).exponents(), &[2]);
    assert_eq!(h0_oracle(&diag(&[2]), 0, 8), 3);
    assert_eq!(h0_oracle(&diag(&[-2]), 0, 8), 0);
}

#[test]
fn truncated_input_reports_precision() {
    let g = to_lmatrix(&build(&Instance {
        d: vec![2, -2],
        outer: vec![(0, 1, vec![1, 1, 1])],
        inner: vec![(1, 0, vec![1, 2, 1])],
    })
    .0);
    let f = birkhoff_matrix(&g.truncate(12), 24).unwrap();
    assert_eq!(f.splitting_type().exponents(), &[2, -2]);
    assert!(f.certified_precision.is_some());
}
