//! Root systems of the simple types, parabolic filtrations of unipotent radicals,
//! and central cocharacter weights.
//!
//! Roots are integer vectors in the basis of simple roots, with Bourbaki numbering.
//! The Cartan matrix follows `a_ij = <alpha_i^vee, alpha_j>`, so the simple
//! reflection is `s_i(x) = x - (sum_j a_ij x_j) alpha_i`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::RootDataError;

pub type Root = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    label: char,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Root>,
}

fn is_valid(label: char, rank: usize) -> bool {
    match label {
        'A' => rank >= 1,
        'B' => rank >= 2,
        'C' => rank >= 3,
        'D' => rank >= 4,
        'E' => (6..=8).contains(&rank),
        'F' => rank == 4,
        'G' => rank == 2,
        _ => false,
    }
}

/// Squared root lengths and the off-diagonal inner products of the simple roots.
fn gram(label: char, rank: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; rank]; rank];
    let bond = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        g[i][j] = v;
        g[j][i] = v;
    };
    match label {
        'A' => {
            for i in 0..rank {
                g[i][i] = 2;
            }
            for i in 0..rank.saturating_sub(1) {
                bond(&mut g, i, i + 1, -1);
            }
        }
        'B' => {
            for i in 0..rank {
                g[i][i] = if i + 1 == rank { 2 } else { 4 };
            }
            for i in 0..rank - 1 {
                bond(&mut g, i, i + 1, -2);
            }
        }
        'C' => {
            for i in 0..rank {
                g[i][i] = if i + 1 == rank { 4 } else { 2 };
            }
            for i in 0..rank - 2 {
                bond(&mut g, i, i + 1, -1);
            }
            bond(&mut g, rank - 2, rank - 1, -2);
        }
        'D' => {
            for i in 0..rank {
                g[i][i] = 2;
            }
            for i in 0..rank - 2 {
                bond(&mut g, i, i + 1, -1);
            }
            bond(&mut g, rank - 3, rank - 1, -1);
        }
        'E' => {
            for i in 0..rank {
                g[i][i] = 2;
            }
            bond(&mut g, 0, 2, -1);
            bond(&mut g, 1, 3, -1);
            for i in 2..rank - 1 {
                bond(&mut g, i, i + 1, -1);
            }
        }
        'F' => {
            g[0][0] = 4;
            g[1][1] = 4;
            g[2][2] = 2;
            g[3][3] = 2;
            bond(&mut g, 0, 1, -2);
            bond(&mut g, 1, 2, -2);
            bond(&mut g, 2, 3, -1);
        }
        'G' => {
            g[0][0] = 2;
            g[1][1] = 6;
            bond(&mut g, 0, 1, -3);
        }
        _ => unreachable!(),
    }
    g
}

/// Builds the root system of type `label` and rank `rank` by reflection closure.
pub fn build_root_system(label: char, rank: usize) -> Result<RootSystem, RootDataError> {
    let label = label.to_ascii_uppercase();
    if !is_valid(label, rank) {
        return Err(RootDataError::InvalidType { label, rank });
    }
    let g = gram(label, rank);
    let cartan: Vec<Vec<i64>> = (0..rank)
        .map(|i| (0..rank).map(|j| 2 * g[i][j] / g[i][i]).collect())
        .collect();
    let simple: Vec<Root> = (0..rank).map(|i| unit(rank, i)).collect();
    let all = reflection_closure(&cartan, &simple);
    let mut positive_roots: Vec<Root> = all.into_iter().filter(|r| r.iter().all(|&c| c >= 0)).collect();
    positive_roots.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));
    Ok(RootSystem {
        label,
        rank,
        cartan,
        positive_roots,
    })
}

fn unit(rank: usize, i: usize) -> Root {
    let mut r = vec![0; rank];
    r[i] = 1;
    r
}

pub fn height(r: &[i64]) -> i64 {
    r.iter().sum()
}

/// Applies the simple reflection `s_i`.
pub fn reflect(cartan: &[Vec<i64>], i: usize, x: &[i64]) -> Root {
    let pairing: i64 = cartan[i].iter().zip(x).map(|(a, b)| a * b).sum();
    let mut y = x.to_vec();
    y[i] -= pairing;
    y
}

/// Closes `seeds` and their negatives under all simple reflections.
pub fn reflection_closure(cartan: &[Vec<i64>], seeds: &[Root]) -> BTreeSet<Root> {
    let mut seen: BTreeSet<Root> = BTreeSet::new();
    let mut queue: VecDeque<Root> = VecDeque::new();
    for s in seeds {
        for r in [s.clone(), s.iter().map(|c| -c).collect()] {
            if seen.insert(r.clone()) {
                queue.push_back(r);
            }
        }
    }
    while let Some(r) = queue.pop_front() {
        for i in 0..cartan.len() {
            let y = reflect(cartan, i, &r);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

impl RootSystem {
    pub fn label(&self) -> char {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        (0..self.rank).map(|i| unit(self.rank, i)).collect()
    }

    /// Positive roots ordered by height.
    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    /// All roots, positive and negative.
    pub fn roots(&self) -> Vec<Root> {
        let mut v: Vec<Root> = self.positive_roots.clone();
        v.extend(
            self.positive_roots
                .iter()
                .map(|r| r.iter().map(|c| -c).collect::<Root>()),
        );
        v
    }

    pub fn highest_root(&self) -> &Root {
        self.positive_roots
            .iter()
            .max_by_key(|r| height(r))
            .expect("nonempty root system")
    }

    pub fn is_root(&self, x: &[i64]) -> bool {
        let pos = x.iter().all(|&c| c >= 0);
        let probe: Root = if pos {
            x.to_vec()
        } else {
            x.iter().map(|c| -c).collect()
        };
        (pos || x.iter().all(|&c| c <= 0)) && self.positive_roots.iter().any(|r| *r == probe)
    }

    /// The `A`-type `SL_n` this system belongs to, if any.
    pub fn is_type_a(&self) -> bool {
        self.label == 'A'
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.label, self.rank)
    }
}

/// A parabolic `Q` given by its Levi simple roots, with the distinguished simple
/// root `beta` and the filtration of the unipotent radical by `beta`-coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicData {
    root_system: RootSystem,
    levi: Vec<usize>,
    beta: usize,
    filtration: Vec<Vec<Root>>,
}

impl ParabolicData {
    pub fn root_system(&self) -> &RootSystem {
        &self.root_system
    }

    /// Indices (0-based) of the simple roots in the Levi.
    pub fn levi_simple_roots(&self) -> &[usize] {
        &self.levi
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    /// `filtration()[i - 1]` is the set of positive roots with beta-coefficient `>= i`.
    pub fn filtration(&self) -> &[Vec<Root>] {
        &self.filtration
    }

    /// Length `h` of the filtration.
    pub fn length(&self) -> usize {
        self.filtration.len()
    }

    /// Roots in level `i` exactly (beta-coefficient equal to `i`).
    pub fn level(&self, i: usize) -> Vec<Root> {
        self.filtration
            .get(i - 1)
            .map(|s| s.iter().filter(|r| r[self.beta] == i as i64).cloned().collect())
            .unwrap_or_default()
    }

    pub fn is_maximal(&self) -> bool {
        self.levi.len() + 1 == self.root_system.rank
            && !self.levi.contains(&self.beta)
    }
}

/// Filtration `Delta_{beta,1} ⊇ Delta_{beta,2} ⊇ ...` of the unipotent radical.
pub fn unipotent_filtration(
    rs: &RootSystem,
    levi_simple_roots: &[usize],
    beta: usize,
) -> Result<ParabolicData, RootDataError> {
    if beta >= rs.rank {
        return Err(RootDataError::IndexOutOfRange(beta));
    }
    if let Some(&bad) = levi_simple_roots.iter().find(|&&i| i >= rs.rank) {
        return Err(RootDataError::IndexOutOfRange(bad));
    }
    if levi_simple_roots.contains(&beta) {
        return Err(RootDataError::BetaInLevi(beta + 1));
    }
    let h = rs.positive_roots.iter().map(|r| r[beta]).max().unwrap_or(0);
    let filtration = (1..=h)
        .map(|i| {
            rs.positive_roots
                .iter()
                .filter(|r| r[beta] >= i)
                .cloned()
                .collect()
        })
        .collect();
    let mut levi: Vec<usize> = levi_simple_roots.to_vec();
    levi.sort_unstable();
    levi.dedup();
    Ok(ParabolicData {
        root_system: rs.clone(),
        levi,
        beta,
        filtration,
    })
}

/// Maximal parabolic: Levi = every simple root except `beta`.
pub fn maximal_parabolic(rs: &RootSystem, beta: usize) -> Result<ParabolicData, RootDataError> {
    let levi: Vec<usize> = (0..rs.rank).filter(|&i| i != beta).collect();
    unipotent_filtration(rs, &levi, beta)
}

/// Isogeny type deciding the cocharacter lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupForm {
    Adjoint,
    SimplyConnected,
    /// `SL_n` with the block cocharacter `diag(s^{n2} I_{n1}, s^{-n1} I_{n2})`.
    SL,
    /// `GL_n` with determinant fixed, using the same block cocharacter as `SL`.
    GL,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralWeight {
    /// `m * i` for `i = 1..=h`.
    pub level_weights: Vec<u64>,
    /// Order `m` of `ker(lambda)`.
    pub kernel_order: u64,
    /// Least `N` with `m * i | N` for every occupied level.
    pub required_n: u64,
}

/// Weights of the central torus `Z(L)°` on the graded pieces of `U^-`.
pub fn central_weight(pd: &ParabolicData, form: GroupForm) -> Result<CentralWeight, RootDataError> {
    if !pd.is_maximal() {
        return Err(RootDataError::NotMaximal);
    }
    let rs = &pd.root_system;
    let m = match form {
        GroupForm::Adjoint => 1,
        GroupForm::SimplyConnected => sc_kernel_order(rs, pd.beta),
        GroupForm::SL | GroupForm::GL => {
            if !rs.is_type_a() {
                return Err(RootDataError::InvalidType {
                    label: rs.label,
                    rank: rs.rank,
                });
            }
            rs.rank as u64 + 1
        }
    };
    let h = pd.length() as u64;
    let level_weights: Vec<u64> = (1..=h).map(|i| m * i).collect();
    let required_n = level_weights.iter().fold(1u64, |acc, w| acc.lcm(w));
    Ok(CentralWeight {
        level_weights,
        kernel_order: m,
        required_n,
    })
}

/// `<beta, chi>` for the primitive coroot-lattice cocharacter `chi` orthogonal to
/// every other simple root.
fn sc_kernel_order(rs: &RootSystem, beta: usize) -> u64 {
    let n = rs.rank;
    // solve A^T x = e_beta over Q
    let mut a: Vec<Vec<Rational64>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational64> = (0..n)
                .map(|j| Rational64::from_integer(rs.cartan[j][i]))
                .collect();
            row.push(if i == beta {
                Rational64::one()
            } else {
                Rational64::zero()
            });
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero()).expect("Cartan matrix is invertible");
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..=n {
                    let sub = f * a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    let x: Vec<Rational64> = a.iter().map(|row| row[n]).collect();
    let d = x.iter().fold(1i64, |acc, q| acc.lcm(q.denom()));
    let g = x
        .iter()
        .map(|q| (q * Rational64::from_integer(d)).to_integer())
        .fold(0i64, |acc, v| acc.gcd(&v));
    (d / g) as u64
}

/// Characteristic restriction on `k` for a simple factor of the given type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharCondition {
    /// Every characteristic, including 2.
    Unrestricted,
    /// `char(k) != 2`.
    NotTwo,
    /// `char(k) > p` (characteristic zero always qualifies).
    GreaterThan(u64),
}

impl CharCondition {
    /// Whether a field of characteristic `p` (0 for characteristic zero) qualifies.
    pub fn admits(&self, p: u64) -> bool {
        match *self {
            CharCondition::Unrestricted => true,
            CharCondition::NotTwo => p != 2,
            CharCondition::GreaterThan(b) => p == 0 || p > b,
        }
    }
}

impl fmt::Display for CharCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharCondition::Unrestricted => write!(f, "none"),
            CharCondition::NotTwo => write!(f, "char != 2"),
            CharCondition::GreaterThan(b) => write!(f, "char > {}", b),
        }
    }
}

/// Characteristic bound for a simple factor, keyed by type letter; `E` needs the
/// rank to tell `E_6`, `E_7` and `E_8` apart.
pub fn char_bound(label: char, rank: usize) -> Result<CharCondition, RootDataError> {
    let label = label.to_ascii_uppercase();
    if !is_valid(label, rank) {
        return Err(RootDataError::InvalidType { label, rank });
    }
    Ok(match (label, rank) {
        ('A', _) => CharCondition::Unrestricted,
        ('B' | 'C' | 'D', _) => CharCondition::NotTwo,
        ('G', _) => CharCondition::GreaterThan(7),
        ('F', _) | ('E', 6) => CharCondition::GreaterThan(19),
        ('E', 7) => CharCondition::GreaterThan(31),
        ('E', 8) => CharCondition::GreaterThan(53),
        _ => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_counts() {
        let rs = build_root_system('A', 2).unwrap();
        assert_eq!(rs.positive_roots().len(), 3);
        assert_eq!(rs.roots().len(), 6);
    }

    #[test]
    fn g2_highest_root() {
        let rs = build_root_system('G', 2).unwrap();
        assert_eq!(rs.roots().len(), 12);
        assert_eq!(rs.highest_root(), &vec![3, 2]);
        assert_eq!(rs.cartan(), &[vec![2, -3], vec![-1, 2]]);
    }

    #[test]
    fn invalid_types_rejected() {
        for (l, r) in [('A', 0), ('B', 1), ('C', 2), ('D', 3), ('E', 5), ('E', 9), ('F', 3), ('G', 3), ('H', 3)] {
            assert!(matches!(
                build_root_system(l, r),
                Err(RootDataError::InvalidType { .. })
            ));
        }
    }

    #[test]
    fn a3_middle_filtration() {
        let rs = build_root_system('A', 3).unwrap();
        let pd = maximal_parabolic(&rs, 1).unwrap();
        assert_eq!(pd.length(), 1);
        assert_eq!(pd.filtration()[0].len(), 4);
    }

    #[test]
    fn beta_in_levi_rejected() {
        let rs = build_root_system('A', 3).unwrap();
        assert_eq!(
            unipotent_filtration(&rs, &[0, 1], 1),
            Err(RootDataError::BetaInLevi(2))
        );
    }

    #[test]
    fn sl2_borel_weight() {
        let rs = build_root_system('A', 1).unwrap();
        let pd = maximal_parabolic(&rs, 0).unwrap();
        let cw = central_weight(&pd, GroupForm::SL).unwrap();
        assert_eq!(cw.kernel_order, 2);
        assert_eq!(cw.level_weights, vec![2]);
        assert_eq!(cw.required_n, 2);
        assert_eq!(central_weight(&pd, GroupForm::SimplyConnected).unwrap().kernel_order, 2);
        assert_eq!(central_weight(&pd, GroupForm::Adjoint).unwrap().kernel_order, 1);
    }

    #[test]
    fn simply_connected_type_a_kernel() {
        // SL_4 with blocks (2, 2): the primitive central cocharacter is
        // diag(s, s, s^-1, s^-1), so beta restricts to s^2
        let rs = build_root_system('A', 3).unwrap();
        let pd = maximal_parabolic(&rs, 1).unwrap();
        assert_eq!(central_weight(&pd, GroupForm::SimplyConnected).unwrap().kernel_order, 2);
        assert_eq!(central_weight(&pd, GroupForm::SL).unwrap().kernel_order, 4);
    }

    #[test]
    fn non_maximal_rejected() {
        let rs = build_root_system('A', 3).unwrap();
        let pd = unipotent_filtration(&rs, &[0], 1).unwrap();
        assert_eq!(
            central_weight(&pd, GroupForm::Adjoint),
            Err(RootDataError::NotMaximal)
        );
    }

    #[test]
    fn char_bounds() {
        assert_eq!(char_bound('E', 7).unwrap(), CharCondition::GreaterThan(31));
        assert_eq!(char_bound('A', 5).unwrap(), CharCondition::Unrestricted);
        assert_eq!(char_bound('D', 4).unwrap(), CharCondition::NotTwo);
        assert!(CharCondition::Unrestricted.admits(2));
        assert!(!CharCondition::GreaterThan(7).admits(7));
        assert!(CharCondition::GreaterThan(7).admits(0));
    }
}
