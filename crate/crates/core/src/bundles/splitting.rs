use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Grothendieck splitting type `a_1 >= ... >= a_n`: the bundle is `O(a_1) + ... + O(a_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SplittingType {
    exponents: Vec<i64>,
}

impl SplittingType {
    /// Sorts descending.
    pub fn new(mut exponents: Vec<i64>) -> Self {
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        SplittingType { exponents }
    }

    /// The splitting type of a trivial bundle of the given rank.
    pub fn trivial(rank: usize) -> Self {
        SplittingType {
            exponents: vec![0; rank],
        }
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> i64 {
        self.exponents.iter().sum()
    }

    /// Partial sums `0, a_1, a_1 + a_2, ..., a_1 + ... + a_n`.
    pub fn polygon(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.exponents.len() + 1);
        let mut acc = 0;
        out.push(0);
        for a in &self.exponents {
            acc += a;
            out.push(acc);
        }
        out
    }

    pub fn is_semistable(&self) -> bool {
        self.exponents.windows(2).all(|w| w[0] == w[1])
    }

    /// Polygon of `self` lies weakly above that of `other`, same endpoints.
    pub fn dominates(&self, other: &SplittingType) -> bool {
        if self.rank() != other.rank() || self.degree() != other.degree() {
            return false;
        }
        self.polygon()
            .iter()
            .zip(other.polygon())
            .all(|(a, b)| *a >= b)
    }

    pub fn strictly_dominates(&self, other: &SplittingType) -> bool {
        self != other && self.dominates(other)
    }

    /// The most balanced type of this rank and degree.
    pub fn balanced(rank: usize, degree: i64) -> Self {
        let r = rank as i64;
        let q = degree.div_euclid(r);
        let extra = degree.rem_euclid(r) as usize;
        SplittingType::new((0..rank).map(|i| if i < extra { q + 1 } else { q }).collect())
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", a)?;
        }
        write!(f, ")")
    }
}

/// Block structure of the canonical parabolic attached to a splitting type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalReductionData {
    pub block_sizes: Vec<usize>,
    pub block_degrees: Vec<i64>,
    /// For each adjacent pair of blocks, whether slope(left) > slope(right).
    pub dominant_positive: Vec<bool>,
}

impl CanonicalReductionData {
    pub fn num_blocks(&self) -> usize {
        self.block_sizes.len()
    }

    /// Index of the first row of each block, followed by the rank.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = vec![0];
        for s in &self.block_sizes {
            out.push(out.last().unwrap() + s);
        }
        out
    }

    pub fn is_semistable(&self) -> bool {
        self.block_sizes.len() <= 1
    }
}

/// Blocks are the maximal runs of equal exponents.
pub fn canonical_parabolic(s: &SplittingType) -> CanonicalReductionData {
    let mut sizes: Vec<usize> = Vec::new();
    let mut degrees: Vec<i64> = Vec::new();
    let mut values: Vec<i64> = Vec::new();
    for &a in s.exponents() {
        if values.last() == Some(&a) {
            *sizes.last_mut().unwrap() += 1;
            *degrees.last_mut().unwrap() += a;
        } else {
            values.push(a);
            sizes.push(1);
            degrees.push(a);
        }
    }
    let dominant_positive = values.windows(2).map(|w| w[0] > w[1]).collect();
    CanonicalReductionData {
        block_sizes: sizes,
        block_degrees: degrees,
        dominant_positive,
    }
}

/// All splitting types `s` with `top >= s >= bottom` in dominance order, both ends included.
pub fn polygons_between(bottom: &SplittingType, top: &SplittingType) -> Vec<SplittingType> {
    if !top.dominates(bottom) {
        return Vec::new();
    }
    let n = top.rank();
    if n == 0 {
        return vec![top.clone()];
    }
    let hi_poly = top.polygon();
    let lo_poly = bottom.polygon();
    let max_val = top.exponents[0];
    let min_val = top.exponents[n - 1];
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(
        cur: &mut Vec<i64>,
        sum: i64,
        n: usize,
        hi: &[i64],
        lo: &[i64],
        min_val: i64,
        out: &mut Vec<SplittingType>,
        upper: i64,
    ) {
        let k = cur.len();
        if k == n {
            if sum == hi[n] {
                out.push(SplittingType {
                    exponents: cur.clone(),
                });
            }
            return;
        }
        let mut v = upper;
        while v >= min_val {
            let s = sum + v;
            if s <= hi[k + 1] {
                if s < lo[k + 1] {
                    // smaller v only lowers the partial sum further
                    break;
                }
                cur.push(v);
                rec(cur, s, n, hi, lo, min_val, out, v);
                cur.pop();
            }
            v -= 1;
        }
    }
    rec(
        &mut cur, 0, n, &hi_poly, &lo_poly, min_val, &mut out, max_val,
    );
    out
}
