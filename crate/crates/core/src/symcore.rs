//! Partitions, split permutations, Vandermonde products and Schur polynomials.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::det;
use crate::scalar::{cabs_f64, cone, cpowi, czero, Real};

/// Relative separation below which the bialternant refuses to divide.
pub const SEPARATION_THRESHOLD: f64 = 1e-6;

/// Weakly decreasing sequence of nonnegative parts with an explicit length.
///
/// The length is the number of variables the partition will be paired with,
/// so trailing zeros are significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("partition parts must be weakly decreasing: {parts:?}")));
        }
        Ok(Partition { parts })
    }

    /// The all-zero partition of the given length.
    pub fn zero(len: usize) -> Self {
        Partition { parts: vec![0; len] }
    }

    /// The rectangle `(value, ..., value, 0, ..., 0)` with `rows` copies of `value`, padded to `len`.
    pub fn rectangle(value: usize, rows: usize, len: usize) -> Result<Self> {
        if rows > len {
            return Err(Error::InvalidArgument(format!("rectangle with {rows} rows does not fit in length {len}")));
        }
        let mut parts = vec![value; rows];
        parts.resize(len, 0);
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts.
    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn nonzero_len(&self) -> usize {
        self.parts.iter().take_while(|&&p| p > 0).count()
    }

    /// Same parts, padded with zeros (or stripped of trailing zeros) to `len`.
    pub fn padded(&self, len: usize) -> Result<Self> {
        if self.nonzero_len() > len {
            return Err(Error::InvalidArgument(format!(
                "partition {:?} has more than {len} nonzero parts",
                self.parts
            )));
        }
        let mut parts: Vec<usize> = self.parts.iter().copied().filter(|&p| p > 0).collect();
        parts.resize(len, 0);
        Ok(Partition { parts })
    }
}

/// Transpose of the Young diagram: `lambda'_i = #{j : lambda_j >= i}`.
///
/// The result has exactly `lambda_1` parts (no trailing zeros).
pub fn conjugate_partition(lambda: &Partition) -> Partition {
    let first = lambda.parts.first().copied().unwrap_or(0);
    let parts = (1..=first).map(|i| lambda.parts.iter().filter(|&&p| p >= i).count()).collect();
    Partition { parts }
}

/// A permutation of `{1..n}` increasing on its first `m` and last `n - m` slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPermutation {
    /// 1-based indices in the first block.
    pub left: Vec<usize>,
    /// 1-based indices in the second block.
    pub right: Vec<usize>,
    /// Parity of `left ‖ right` as an element of the symmetric group.
    pub sign: i8,
}

/// All `binomial(n, m)` split permutations, in lexicographic order of `left`.
pub fn enumerate_split_permutations(n: usize, m: usize) -> Result<impl Iterator<Item = SplitPermutation>> {
    if m > n {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds n = {n}")));
    }
    Ok((1..=n).combinations(m).map(move |left| {
        let right: Vec<usize> = (1..=n).filter(|i| !left.contains(i)).collect();
        // inversions of (left ‖ right) = sum_i (left_i - i)
        let inversions: usize = left.iter().enumerate().map(|(i, &l)| l - (i + 1)).sum();
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        SplitPermutation { left, right, sign }
    }))
}

/// `prod_{j<k} (x_k - x_j)`; 1 for fewer than two points.
pub fn vandermonde<T: Real>(points: &[Complex<T>]) -> Complex<T> {
    let mut acc = cone::<T>();
    for k in 1..points.len() {
        for j in 0..k {
            acc = acc * (points[k].clone() - points[j].clone());
        }
    }
    acc
}

/// Smallest pairwise distance, or `+inf` for fewer than two points.
pub fn min_separation<T: Real>(points: &[Complex<T>]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min(cabs_f64(&(a.clone() - b.clone())));
        }
    }
    best
}

/// Fail with `NearConfluent` when points are closer than the separation threshold.
pub fn check_separation<T: Real>(points: &[Complex<T>]) -> Result<()> {
    let scale = points.iter().map(cabs_f64).fold(1.0f64, f64::max);
    let threshold = SEPARATION_THRESHOLD * scale;
    let separation = min_separation(points);
    if separation < threshold {
        return Err(Error::NearConfluent { separation, threshold });
    }
    Ok(())
}

fn check_len(mu: &Partition, n: usize) -> Result<()> {
    if mu.len() != n {
        return Err(Error::InvalidArgument(format!("partition length {} does not match {} variables", mu.len(), n)));
    }
    Ok(())
}

/// `det[x_i^{exponent_j}]` with rows indexed by points.
pub fn alternant<T: Real>(points: &[Complex<T>], exponents: &[usize]) -> Complex<T> {
    let rows = points.iter().map(|x| exponents.iter().map(|&e| cpowi(x, e as i64)).collect()).collect();
    det(rows)
}

/// Schur polynomial as a ratio of alternants.
pub fn schur_bialternant<T: Real>(mu: &Partition, points: &[Complex<T>]) -> Result<Complex<T>> {
    let n = points.len();
    check_len(mu, n)?;
    check_separation(points)?;
    let shifted: Vec<usize> = mu.parts.iter().enumerate().map(|(j, &p)| p + n - 1 - j).collect();
    let plain: Vec<usize> = (0..n).rev().collect();
    Ok(alternant(points, &shifted) / alternant(points, &plain))
}

/// Complete homogeneous symmetric polynomials `h_0..=h_max` of the points.
pub fn complete_homogeneous<T: Real>(points: &[Complex<T>], max: usize) -> Vec<Complex<T>> {
    let mut h = vec![czero::<T>(); max + 1];
    h[0] = cone();
    for x in points {
        for k in 1..=max {
            let t = x.clone() * h[k - 1].clone();
            h[k] = h[k].clone() + t;
        }
    }
    h
}

/// Schur polynomial through the Jacobi–Trudi determinant `det[h_{mu_i - i + j}]`.
///
/// Total and continuous: coincident points are fine.
pub fn schur_stable<T: Real>(mu: &Partition, points: &[Complex<T>]) -> Result<Complex<T>> {
    check_len(mu, points.len())?;
    let len = mu.nonzero_len();
    if len == 0 {
        return Ok(cone());
    }
    let max = mu.parts[0] + len - 1;
    let h = complete_homogeneous(points, max);
    let entry = |i: usize, j: usize| -> Complex<T> {
        let idx = mu.parts[i] as i64 - i as i64 + j as i64;
        if idx < 0 {
            czero()
        } else {
            h[idx as usize].clone()
        }
    };
    let m = (0..len).map(|i| (0..len).map(|j| entry(i, j)).collect()).collect();
    Ok(det(m))
}

/// All partitions of length `k` with even parts bounded by `max_part`.
pub fn enumerate_even_partitions(k: usize, max_part: usize) -> Result<Vec<Partition>> {
    if !max_part.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("max_part {max_part} must be even")));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(k: usize, bound: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if current.len() == k {
            out.push(Partition { parts: current.clone() });
            return;
        }
        for p in (0..=bound).step_by(2) {
            current.push(p);
            rec(k, p, current, out);
            current.pop();
        }
    }
    rec(k, max_part, &mut current, &mut out);
    Ok(out)
}

/// Strictly increasing `k`-vectors in `{0..=top}` built from consecutive pairs
/// `(a, a + 1)`, optionally led by a fixed `0` and/or closed by a fixed `top`.
pub fn paired_index_sets(k: usize, top: usize, lead_zero: bool, tail_top: bool) -> Vec<Vec<usize>> {
    let fixed = usize::from(lead_zero) + usize::from(tail_top);
    if k < fixed || !(k - fixed).is_multiple_of(2) || (lead_zero && tail_top && top == 0) {
        return Vec::new();
    }
    let pairs = (k - fixed) / 2;
    let lo = usize::from(lead_zero);
    // last usable slot for a pair's upper element
    let hi = if tail_top {
        match top.checked_sub(1) {
            Some(h) => h,
            None => return Vec::new(),
        }
    } else {
        top
    };
    let mut out = Vec::new();
    let mut starts = Vec::with_capacity(pairs);
    fn rec(pairs: usize, from: usize, hi: usize, starts: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
        if starts.len() == pairs {
            emit(starts);
            return;
        }
        let mut s = from;
        while s < hi {
            starts.push(s);
            rec(pairs, s + 2, hi, starts, emit);
            starts.pop();
            s += 1;
        }
    }
    let mut emit = |starts: &[usize]| {
        let mut v = Vec::with_capacity(k);
        if lead_zero {
            v.push(0);
        }
        for &s in starts {
            v.push(s);
            v.push(s + 1);
        }
        if tail_top {
            v.push(top);
        }
        out.push(v);
    };
    rec(pairs, lo, hi, &mut starts, &mut emit);
    out
}

/// Index vectors of the even-orthogonal determinant sum (both branches, de-duplicated).
pub fn enumerate_so_index_sets(k: usize, n: usize) -> Vec<Vec<usize>> {
    let top = 2 * n + k - 1;
    let (a, b) = if k.is_multiple_of(2) {
        (paired_index_sets(k, top, true, true), paired_index_sets(k, top, false, false))
    } else {
        (paired_index_sets(k, top, true, false), paired_index_sets(k, top, false, true))
    };
    let set: BTreeSet<Vec<usize>> = a.into_iter().chain(b).collect();
    set.into_iter().collect()
}

/// Strictly increasing `k`-vectors in `{0..=top}` with `i_j ≡ j - 1 (mod 2)`.
pub fn enumerate_parity_index_sets(k: usize, top: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(k: usize, top: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let j = cur.len();
        if j == k {
            out.push(cur.clone());
            return;
        }
        let start = match cur.last() {
            Some(&last) => last + 1,
            None => 0,
        };
        let mut i = start;
        if i % 2 != j % 2 {
            i += 1;
        }
        while i <= top {
            cur.push(i);
            rec(k, top, cur, out);
            cur.pop();
            i += 2;
        }
    }
    rec(k, top, &mut cur, &mut out);
    out
}

/// `sum over index vectors of det[w_p^{i_q}] / Δ(w)`.
pub fn index_determinant_sum<T: Real>(shifts: &[Complex<T>], index_sets: &[Vec<usize>]) -> Result<Complex<T>> {
    check_separation(shifts)?;
    let mut acc = czero::<T>();
    for idx in index_sets {
        acc = acc + alternant(shifts, idx);
    }
    Ok(acc / vandermonde(shifts))
}

/// The partition `lambda` with `S_lambda = det[w^{i_q}] / Δ(w)` for an index vector.
pub fn index_set_to_partition(indices: &[usize]) -> Partition {
    let k = indices.len();
    let parts = (0..k).map(|j| indices[k - 1 - j] - (k - 1 - j)).collect();
    Partition { parts }
}

/// Configured working precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrecisionMode {
    Double,
    Extended { digits: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionConfig {
    pub mode: PrecisionMode,
    pub agreement_tol: f64,
}

impl PrecisionConfig {
    pub fn double(agreement_tol: f64) -> Self {
        PrecisionConfig { mode: PrecisionMode::Double, agreement_tol }
    }

    pub fn extended(digits: u32, agreement_tol: f64) -> Result<Self> {
        if digits < 30 {
            return Err(Error::InvalidArgument(format!("extended precision needs at least 30 digits, got {digits}")));
        }
        Ok(PrecisionConfig { mode: PrecisionMode::Extended { digits }, agreement_tol })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn vandermonde_examples() {
        assert_eq!(vandermonde::<f64>(&[]), c(1.0));
        assert_eq!(vandermonde(&[c(1.0), c(2.0), c(4.0)]), c(6.0));
        let z = C64::new(0.3, -1.2);
        assert_eq!(vandermonde(&[z, z, c(3.0)]), c(0.0));
    }

    #[test]
    fn vandermonde_sign_flip_on_transposition() {
        let p = [C64::new(0.1, 0.2), C64::new(-1.0, 0.5), C64::new(2.0, -0.3), C64::new(0.7, 0.7)];
        let v = vandermonde(&p);
        for i in 0..3 {
            let mut q = p;
            q.swap(i, i + 1);
            assert!((vandermonde(&q) + v).norm() < 1e-12);
        }
    }

    #[test]
    fn bialternant_examples() {
        let w = [C64::new(0.4, 0.1), C64::new(-1.3, 0.6)];
        let s = schur_bialternant(&Partition::zero(2), &w).unwrap();
        assert!((s - 1.0).norm() < 1e-14);
        let s = schur_bialternant(&Partition::new(vec![2, 0]).unwrap(), &w).unwrap();
        let expect = w[0] * w[0] + w[0] * w[1] + w[1] * w[1];
        assert!((s - expect).norm() < 1e-13);
        let s = schur_bialternant(&Partition::new(vec![1, 1]).unwrap(), &[c(3.0), c(5.0)]).unwrap();
        assert!((s - 15.0).norm() < 1e-12);
    }

    #[test]
    fn bialternant_rejects_near_confluent() {
        let err = schur_bialternant(&Partition::new(vec![2, 0]).unwrap(), &[c(1.0), c(1.0 + 1e-9)]);
        assert!(matches!(err, Err(Error::NearConfluent { .. })));
    }

    #[test]
    fn stable_confluent_examples() {
        let one = [c(1.0), c(1.0)];
        assert!((schur_stable(&Partition::new(vec![2, 0]).unwrap(), &one).unwrap() - 3.0).norm() < 1e-14);
        // S_(2,2)(w1, w2) = (w1 w2)^2, so the confluent value at (1,1) is 1 by monomial expansion;
        // S_(2,2)(1,1,1) counts SSYT of shape (2,2) on 3 letters = 6.
        assert!((schur_stable(&Partition::new(vec![2, 2]).unwrap(), &one).unwrap() - 1.0).norm() < 1e-14);
        let three = [c(1.0), c(1.0), c(1.0)];
        assert!((schur_stable(&Partition::new(vec![2, 2, 0]).unwrap(), &three).unwrap() - 6.0).norm() < 1e-13);
        let pts = [C64::new(0.3, 2.0), C64::new(-4.0, 1.0), c(7.0)];
        assert_eq!(schur_stable(&Partition::zero(3), &pts).unwrap(), c(1.0));
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(schur_stable(&Partition::zero(2), &[c(1.0)]).is_err());
    }

    #[test]
    fn split_permutation_examples() {
        let items: Vec<_> = enumerate_split_permutations(2, 1).unwrap().collect();
        assert_eq!(
            items,
            vec![
                SplitPermutation { left: vec![1], right: vec![2], sign: 1 },
                SplitPermutation { left: vec![2], right: vec![1], sign: -1 },
            ]
        );
        assert_eq!(enumerate_split_permutations(4, 2).unwrap().count(), 6);
        let id: Vec<_> = enumerate_split_permutations(3, 0).unwrap().collect();
        assert_eq!(id, vec![SplitPermutation { left: vec![], right: vec![1, 2, 3], sign: 1 }]);
        assert!(enumerate_split_permutations(2, 3).is_err());
    }

    fn brute_parity(perm: &[usize]) -> i8 {
        let mut inv = 0;
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                if perm[i] > perm[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn split_permutations_match_brute_force_signs() {
        for n in 1..=6 {
            for m in 0..=n {
                let items: Vec<_> = enumerate_split_permutations(n, m).unwrap().collect();
                assert_eq!(items.len(), binomial(n, m));
                let distinct: BTreeSet<_> = items.iter().map(|s| s.left.clone()).collect();
                assert_eq!(distinct.len(), items.len());
                for s in &items {
                    let perm: Vec<usize> = s.left.iter().chain(&s.right).copied().collect();
                    assert_eq!(s.sign, brute_parity(&perm));
                }
            }
        }
    }

    #[test]
    fn split_permutations_are_exactly_the_block_increasing_permutations() {
        // Filter all of S_n by the block-increasing condition and compare (with signs).
        for n in 1..=5usize {
            for m in 0..=n {
                let brute: BTreeSet<(Vec<usize>, i8)> = (1..=n)
                    .permutations(n)
                    .filter(|p| p[..m].windows(2).all(|w| w[0] < w[1]) && p[m..].windows(2).all(|w| w[0] < w[1]))
                    .map(|p| (p[..m].to_vec(), brute_parity(&p)))
                    .collect();
                let ours: BTreeSet<(Vec<usize>, i8)> =
                    enumerate_split_permutations(n, m).unwrap().map(|s| (s.left, s.sign)).collect();
                assert_eq!(brute, ours);
            }
        }
    }

    #[test]
    fn even_partition_examples() {
        let p = enumerate_even_partitions(1, 4).unwrap();
        let parts: Vec<_> = p.iter().map(|x| x.parts().to_vec()).collect();
        assert_eq!(parts, vec![vec![0], vec![2], vec![4]]);
        let p = enumerate_even_partitions(2, 2).unwrap();
        let parts: BTreeSet<_> = p.iter().map(|x| x.parts().to_vec()).collect();
        assert_eq!(parts, [vec![0, 0], vec![2, 0], vec![2, 2]].into_iter().collect());
        assert_eq!(enumerate_even_partitions(2, 4).unwrap().len(), 6);
        assert!(enumerate_even_partitions(2, 3).is_err());
    }

    #[test]
    fn even_partition_counts_match_brute_force() {
        for k in 1..=4usize {
            for half in 0..=4usize {
                let max = 2 * half;
                let brute = (0..k)
                    .map(|_| (0..=max).step_by(2))
                    .multi_cartesian_product()
                    .filter(|v| v.windows(2).all(|w| w[0] >= w[1]))
                    .count();
                let ours = enumerate_even_partitions(k, max).unwrap().len();
                assert_eq!(ours, brute);
                assert_eq!(ours, binomial(k + half, k));
            }
        }
    }

    #[test]
    fn conjugate_examples() {
        let c31 = conjugate_partition(&Partition::new(vec![3, 1]).unwrap());
        assert_eq!(c31.parts(), &[2, 1, 1]);
        assert!(conjugate_partition(&Partition::new(vec![]).unwrap()).is_empty());
        assert_eq!(conjugate_partition(&Partition::new(vec![2, 2, 2]).unwrap()).parts(), &[3, 3]);
    }

    /// Literal transcription of the adjacency conditions, used as the filter oracle.
    fn so_condition(k: usize, n: usize, v: &[usize]) -> bool {
        let top = 2 * n + k - 1;
        let pair = |a: usize| v[a] + 1 == v[a + 1];
        if k.is_multiple_of(2) {
            let a = v[0] == 0 && (1..k - 1).step_by(2).all(pair) && v[k - 1] == top;
            let b = (0..k).step_by(2).all(pair);
            a || b
        } else {
            let a = v[0] == 0 && (1..k).step_by(2).all(pair);
            let b = (0..k.saturating_sub(1)).step_by(2).all(pair) && v[k - 1] == top;
            a || b
        }
    }

    fn brute_so_sets(k: usize, n: usize) -> Vec<Vec<usize>> {
        (0..=2 * n + k - 1).combinations(k).filter(|v| so_condition(k, n, v)).collect()
    }

    #[test]
    fn so_index_set_examples() {
        assert_eq!(enumerate_so_index_sets(1, 1), vec![vec![0], vec![2]]);
        assert_eq!(enumerate_so_index_sets(2, 1), vec![vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]]);
    }

    #[test]
    fn so_index_sets_match_brute_force_filter() {
        for k in 1..=5 {
            for n in 1..=4 {
                let ours = enumerate_so_index_sets(k, n);
                assert_eq!(ours, brute_so_sets(k, n), "k={k} N={n}");
                for v in &ours {
                    assert!(v.windows(2).all(|w| w[0] < w[1]));
                    assert!(*v.last().unwrap() < 2 * n + k);
                }
            }
        }
    }

    #[test]
    fn parity_index_sets_match_brute_force() {
        for k in 1..=4usize {
            for top in 0..=9usize {
                let brute: Vec<Vec<usize>> =
                    (0..=top).combinations(k).filter(|v| v.iter().enumerate().all(|(j, &i)| i % 2 == j % 2)).collect();
                assert_eq!(enumerate_parity_index_sets(k, top), brute);
            }
        }
    }

    #[test]
    fn index_set_partition_roundtrip() {
        assert_eq!(index_set_to_partition(&[0, 3]).parts(), &[2, 0]);
        assert_eq!(index_set_to_partition(&[2, 3]).parts(), &[2, 2]);
        assert_eq!(index_set_to_partition(&[0, 1]).parts(), &[0, 0]);
    }

    #[test]
    fn precision_config_rejects_short_extended() {
        assert!(PrecisionConfig::extended(20, 1e-20).is_err());
        assert!(PrecisionConfig::extended(40, 1e-30).is_ok());
    }

    fn arb_point() -> impl Strategy<Value = C64> {
        (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(a, b)| C64::new(a, b))
    }

    fn arb_partition(len: usize) -> impl Strategy<Value = Partition> {
        proptest::collection::vec(0usize..5, len).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            Partition::new(v).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn conjugate_is_involution(mut v in proptest::collection::vec(0usize..12, 0..10)) {
            v.sort_unstable_by(|a, b| b.cmp(a));
            let p = Partition::new(v).unwrap();
            let back = conjugate_partition(&conjugate_partition(&p));
            let trimmed = p.padded(p.nonzero_len()).unwrap();
            prop_assert_eq!(back.parts(), trimmed.parts());
        }

        #[test]
        fn stable_is_symmetric(mu in arb_partition(4), pts in proptest::collection::vec(arb_point(), 4), seed in 0usize..24) {
            let base = schur_stable(&mu, &pts).unwrap();
            let perm: Vec<usize> = (0..4).permutations(4).nth(seed).unwrap();
            let shuffled: Vec<C64> = perm.iter().map(|&i| pts[i]).collect();
            let other = schur_stable(&mu, &shuffled).unwrap();
            prop_assert!((base - other).norm() <= 1e-10 * base.norm().max(1.0));
        }

        #[test]
        fn stable_matches_bialternant(mu in arb_partition(3), pts in proptest::collection::vec(arb_point(), 3)) {
            prop_assume!(min_separation(&pts) > 1e-3 * 50.0);
            let a = schur_stable(&mu, &pts).unwrap();
            let b = schur_bialternant(&mu, &pts).unwrap();
            prop_assert!((a - b).norm() <= 1e-8 * a.norm().max(1.0));
        }

        #[test]
        fn stable_is_homogeneous(mu in arb_partition(3), pts in proptest::collection::vec(arb_point(), 3), scale in arb_point()) {
            let scaled: Vec<C64> = pts.iter().map(|p| p * scale).collect();
            let lhs = schur_stable(&mu, &scaled).unwrap();
            let rhs = schur_stable(&mu, &pts).unwrap() * cpowi(&scale, mu.weight() as i64);
            prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(rhs.norm()).max(1.0));
        }
    }
}
