//! Autocorrelations over `SO(2N)` and `O⁻(2N)`, the `M/E/R/L` split of the `SO` index sum,
//! subset statistics and the full-`O(2N)` average.

use itertools::Itertools;
use num_complex::Complex;

use crate::contour::{symmetric_kernel_integral, ContourConfig, SymVariant};
use crate::error::{Error, Result};
use crate::haar::{char_poly_product, default_nodes, quadrature_average, Family, GroupSpec};
use crate::linalg::det_i128;
use crate::scalar::{cabs_f64, cone, cpowi, czero, Real, C64};
use crate::symcore::{
    check_separation, conjugate_partition, enumerate_even_partitions, enumerate_parity_index_sets,
    enumerate_so_index_sets, index_determinant_sum, paired_index_sets, schur_stable, vandermonde, Partition,
    SEPARATION_THRESHOLD,
};
use crate::symplectic::{exponential_pair_kernel, sign_sum_terms, symmetric_contour_setup, EpsilonTerm, Pairs};

/// Disjoint `(A, B)` with `A ∪ B = {1..m}`; indices are 1-based and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSubsetPair {
    a: Vec<usize>,
    b: Vec<usize>,
}

impl IndexSubsetPair {
    pub fn new(mut a: Vec<usize>, mut b: Vec<usize>, m: usize) -> Result<Self> {
        a.sort_unstable();
        b.sort_unstable();
        let mut all: Vec<usize> = a.iter().chain(&b).copied().collect();
        all.sort_unstable();
        if all != (1..=m).collect::<Vec<_>>() {
            return Err(Error::InvalidArgument(format!("{a:?} and {b:?} do not partition 1..{m}")));
        }
        Ok(IndexSubsetPair { a, b })
    }

    /// `A` is read off the set bits of `mask`.
    pub fn from_mask(mask: usize, m: usize) -> Self {
        let (a, b) = (1..=m).partition(|&i| mask >> (i - 1) & 1 == 1);
        IndexSubsetPair { a, b }
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    pub fn ground_size(&self) -> usize {
        self.a.len() + self.b.len()
    }

    /// `#{(x, y) : x ∈ A, y ∈ B, x > y}`
    pub fn inversions(&self) -> usize {
        self.a.iter().map(|&x| self.b.iter().filter(|&&y| x > y).count()).sum()
    }

    /// `|A||B| + |A|(|A|+1)/2 + W(A, B)`
    pub fn sign_statistic(&self) -> usize {
        let na = self.a.len();
        na * self.b.len() + na * (na + 1) / 2 + self.inversions()
    }
}

/// All `2^m` ordered partitions of `{1..m}`.
pub fn all_subset_pairs(m: usize) -> impl Iterator<Item = IndexSubsetPair> {
    (0..1usize << m).map(move |mask| IndexSubsetPair::from_mask(mask, m))
}

/// Products attached to a subset pair at given shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetStats<T: Real> {
    pub w_a: Complex<T>,
    pub s: usize,
    pub w: usize,
    /// `∏_{a∈A, b∈B} (1 - w_a w_b)`
    pub e: Complex<T>,
    /// `∏_{a∈A, b∈B} (w_b - w_a)`
    pub d: Complex<T>,
    pub delta_a: Complex<T>,
    pub delta_b: Complex<T>,
    /// `∏_{m<n ∈ A} (1 - w_m w_n)`
    pub cal_e_a: Complex<T>,
}

fn pick<T: Real>(idx: &[usize], shifts: &[Complex<T>]) -> Vec<Complex<T>> {
    idx.iter().map(|&i| shifts[i - 1].clone()).collect()
}

/// `∏_{m<n} (1 - w_m w_n)`
pub fn strict_pair_product<T: Real>(points: &[Complex<T>]) -> Complex<T> {
    let mut v = cone::<T>();
    for j in 0..points.len() {
        for i in 0..j {
            v = v * (cone::<T>() - points[i].clone() * points[j].clone());
        }
    }
    v
}

pub fn subset_stats<T: Real>(pair: &IndexSubsetPair, shifts: &[Complex<T>]) -> SubsetStats<T> {
    let wa = pick(&pair.a, shifts);
    let wb = pick(&pair.b, shifts);
    let mut e = cone::<T>();
    let mut d = cone::<T>();
    for x in &wa {
        for y in &wb {
            e = e * (cone::<T>() - x.clone() * y.clone());
            d = d * (y.clone() - x.clone());
        }
    }
    SubsetStats {
        w_a: wa.iter().fold(cone::<T>(), |acc, x| acc * x.clone()),
        s: pair.sign_statistic(),
        w: pair.inversions(),
        e,
        d,
        delta_a: vandermonde(&wa),
        delta_b: vandermonde(&wb),
        cal_e_a: strict_pair_product(&wa),
    }
}

fn check_size(size: usize, k: usize) -> Result<()> {
    if size == 0 || k == 0 {
        return Err(Error::InvalidArgument("need N ≥ 1 and at least one shift".into()));
    }
    Ok(())
}

/// `SO(2N)` determinant sum over the paired index sets with top `2N+k-1`.
pub fn so_autocorr_det<T: Real>(size: usize, shifts: &[Complex<T>]) -> Result<Complex<T>> {
    check_size(size, shifts.len())?;
    index_determinant_sum(shifts, &enumerate_so_index_sets(shifts.len(), size))
}

/// Partitions `λ` whose conjugates have `2N` odd parts `≤ k`, or `2N` even parts `≤ k` (zeros allowed).
pub fn so_schur_partitions(size: usize, k: usize) -> Result<Vec<Partition>> {
    let even_cap = k - k % 2;
    let mut out = Vec::new();
    // odd parts: λ'_i = μ_i + 1 with μ even and ≤ k - 1
    if k >= 1 {
        let odd_cap = (k - 1) - (k - 1) % 2;
        for mu in enumerate_even_partitions(2 * size, odd_cap)? {
            let conj = Partition::new(mu.parts().iter().map(|p| p + 1).collect())?;
            out.push(conjugate_partition(&conj).padded(k)?);
        }
    }
    for mu in enumerate_even_partitions(2 * size, even_cap)? {
        out.push(conjugate_partition(&mu).padded(k)?);
    }
    Ok(out)
}

/// `Σ S_λ(w)` over [`so_schur_partitions`]; safe at coincident shifts.
pub fn so_autocorr_schur<T: Real>(size: usize, shifts: &[Complex<T>]) -> Result<Complex<T>> {
    check_size(size, shifts.len())?;
    let mut acc = czero::<T>();
    for lambda in so_schur_partitions(size, shifts.len())? {
        acc = acc + schur_stable(&lambda, shifts)?;
    }
    Ok(acc)
}

pub fn so_eps_terms<T: Real>(size: usize, shifts: &[Complex<T>]) -> Result<Vec<EpsilonTerm<T>>> {
    check_size(size, shifts.len())?;
    sign_sum_terms(size, shifts, Pairs::Strict, false)
}

/// `∏ w_j^N Σ_ε ∏ w_j^{ε_j N} ∏_{i<j} (1 - w_i^{-ε_i} w_j^{-ε_j})^{-1}`.
pub fn so_autocorr_eps<T: Real>(size: usize, shifts: &[Complex<T>]) -> Result<Complex<T>> {
    Ok(sum_terms(so_eps_terms(size, shifts)?))
}

fn sum_terms<T: Real>(terms: Vec<EpsilonTerm<T>>) -> Complex<T> {
    terms.into_iter().fold(czero(), |acc, t| acc + t.value)
}

/// The four pieces of the split `SO` index sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartialVariant {
    /// Consecutive pairs only; even shift count.
    M,
    /// Led by `0`, closed by the top, pairs between; even shift count.
    E,
    /// Pairs then the top; odd shift count.
    R,
    /// `0` then pairs; odd shift count.
    L,
}

impl PartialVariant {
    fn shape(self) -> (bool, bool) {
        match self {
            PartialVariant::M => (false, false),
            PartialVariant::E => (true, true),
            PartialVariant::R => (false, true),
            PartialVariant::L => (true, false),
        }
    }

    fn wants_even_count(self) -> bool {
        matches!(self, PartialVariant::M | PartialVariant::E)
    }

    fn b_parity_even(self) -> bool {
        matches!(self, PartialVariant::M | PartialVariant::R)
    }
}

/// Index-sum value of one piece, its closed subset form, and their relative gap.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSum<T: Real> {
    pub value: Complex<T>,
    pub closed_form: Complex<T>,
    pub residual: f64,
}

/// `I^{M|E|R|L}_n(w)` together with the parity-restricted subset sum
/// `Σ_{|B| parity} w_A^n E(A,B) Δ(A) Δ(B) (-1)^{S(A,B) - |A|} / (𝓔([m]) Δ)`.
pub fn so_partial_sums<T: Real>(variant: PartialVariant, top: usize, shifts: &[Complex<T>]) -> Result<PartialSum<T>> {
    let m = shifts.len();
    if m == 0 || m.is_multiple_of(2) != variant.wants_even_count() {
        return Err(Error::InvalidArgument(format!("{variant:?} does not take {m} shifts")));
    }
    check_separation(shifts)?;
    let (lead, tail) = variant.shape();
    let value = index_determinant_sum(shifts, &paired_index_sets(m, top, lead, tail))?;
    let cal_e = strict_pair_product(shifts);
    if cabs_f64(&cal_e) < SEPARATION_THRESHOLD {
        return Err(Error::PoleHit("w_m w_n = 1 in the subset normalization".into()));
    }
    let mut acc = czero::<T>();
    for pair in all_subset_pairs(m).filter(|p| (p.b().len() % 2 == 0) == variant.b_parity_even()) {
        let st = subset_stats(&pair, shifts);
        let mut term = cpowi(&st.w_a, top as i64) * st.e * st.delta_a * st.delta_b;
        if (st.s + pair.a().len()) % 2 != 0 {
            term = -term;
        }
        acc = acc + term;
    }
    let closed_form = acc / (cal_e * vandermonde(shifts));
    let residual = cabs_f64(&(value.clone() - closed_form.clone())) / cabs_f64(&value).max(1.0);
    Ok(PartialSum { value, closed_form, residual })
}

/// `I(O⁻(2N)) = (-1)^k ∫ ∏ Λ(w_j)`: `∏(w_j² - 1)` times the parity-index sum at `N - 1`.
pub fn ominus_autocorr_det<T: Real>(size: usize, shifts: &[Complex<T>]) -> Result<Complex<T>> {
    check_size(size, shifts.len())?;
    let k = shifts.len();
    let inner = index_determinant_sum(shifts, &enumerate_parity_index_sets(k, 2 * (size - 1) + k - 1))?;
    let pref = shifts.iter().fold(cone::<T>(), |acc, w| acc * (w.clone() * w.clone() - cone::<T>()));
    Ok(pref * inner)
}

pub fn ominus_eps_terms<T: Real>(size: usize, shifts: &[Complex<T>]) -> Result<Vec<EpsilonTerm<T>>> {
    check_size(size, shifts.len())?;
    sign_sum_terms(size, shifts, Pairs::Strict, true)
}

/// `∏ w_j^N Σ_ε ∏ ε_j w_j^{ε_j N} ∏_{i<j} (1 - w_i^{-ε_i} w_j^{-ε_j})^{-1}`.
pub fn ominus_autocorr_eps<T: Real>(size: usize, shifts: &[Complex<T>]) -> Result<Complex<T>> {
    Ok(sum_terms(ominus_eps_terms(size, shifts)?))
}

/// Plain `∫ ∏ Λ(w_j)` over the `O⁻(2N)` coset.
pub fn ominus_raw_average<T: Real>(size: usize, shifts: &[Complex<T>]) -> Result<Complex<T>> {
    let v = ominus_autocorr_eps(size, shifts)?;
    Ok(if shifts.len() % 2 == 1 { -v } else { v })
}

/// How the `O⁻` coset enters the full-`O(2N)` average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetSign {
    /// `(I(SO) + ∫_{O⁻} ∏ Λ) / 2`, the actual Haar average.
    Raw,
    /// `(I(SO) + I(O⁻)) / 2`, with `I(O⁻)` carrying its `(-1)^k`.
    Signed,
}

/// Average of `∏ Λ(w_j)` over all of `O(2N)`.
pub fn full_o2n_average<T: Real>(size: usize, shifts: &[Complex<T>], sign: CosetSign) -> Result<Complex<T>> {
    let so = so_autocorr_eps(size, shifts)?;
    let om = match sign {
        CosetSign::Raw => ominus_raw_average(size, shifts)?,
        CosetSign::Signed => ominus_autocorr_eps(size, shifts)?,
    };
    Ok((so + om) / Complex::new(T::from_f64(2.0), T::zero()))
}

pub fn so_autocorr_quadrature(size: usize, shifts: &[C64], nodes: Option<usize>) -> Result<C64> {
    let group = GroupSpec::new(Family::SpecialOrthogonalEven, size)?;
    let nodes = nodes.unwrap_or_else(|| default_nodes(group, shifts.len()));
    quadrature_average(group, |a| char_poly_product(group, a, shifts).expect("length checked"), nodes)
}

/// Quadrature of `(-1)^k ∫ ∏ Λ(w_j)` over `O⁻(2N)`.
pub fn ominus_autocorr_quadrature(size: usize, shifts: &[C64], nodes: Option<usize>) -> Result<C64> {
    let group = GroupSpec::new(Family::OrthogonalMinus, size)?;
    let nodes = nodes.unwrap_or_else(|| default_nodes(group, shifts.len()));
    let sign = if shifts.len() % 2 == 1 { -1.0 } else { 1.0 };
    let raw = quadrature_average(group, |a| char_poly_product(group, a, shifts).expect("length checked"), nodes)?;
    Ok(raw * sign)
}

/// Contour form at `w_j = e^{α_j}`: `e^{NΣα}` times the symmetric-kernel integral
/// of `e^{NΣz} ∏_{ℓ<m} (1 - e^{-z_m - z_ℓ})^{-1}`; `O⁻` uses the signed kernel.
pub fn orthogonal_contour(family: Family, size: usize, alphas: &[C64], cfg: &ContourConfig) -> Result<C64> {
    let variant = match family {
        Family::SpecialOrthogonalEven => SymVariant::Plain,
        Family::OrthogonalMinus => SymVariant::Signed,
        _ => return Err(Error::InvalidArgument(format!("{} is not an orthogonal family", family.name()))),
    };
    let cfg = symmetric_contour_setup(alphas, cfg)?;
    let integral = symmetric_kernel_integral(|z| exponential_pair_kernel(z, size, false), alphas, variant, &cfg)?;
    Ok((size as f64 * alphas.iter().sum::<C64>()).exp() * integral)
}

/// The `O⁻` contour form with the `i ≤ j` pair product, which does not reproduce the sign sum.
pub fn ominus_contour_inclusive(size: usize, alphas: &[C64], cfg: &ContourConfig) -> Result<C64> {
    let cfg = symmetric_contour_setup(alphas, cfg)?;
    let integral =
        symmetric_kernel_integral(|z| exponential_pair_kernel(z, size, true), alphas, SymVariant::Signed, &cfg)?;
    Ok((size as f64 * alphas.iter().sum::<C64>()).exp() * integral)
}

/// `∫ ∏ 𝒵(e^{-α_j})` with `𝒵(s) = s^{-N} Λ(s)` over `SO(2N)`.
pub fn so_z_average(size: usize, alphas: &[C64]) -> Result<C64> {
    let w: Vec<C64> = alphas.iter().map(|a| (-a).exp()).collect();
    Ok((size as f64 * alphas.iter().sum::<C64>()).exp() * so_autocorr_eps(size, &w)?)
}

/// `∫ ∏ 𝒵(e^{-α_j})` with `𝒵(s) = -s^{-N} Λ(s)` over `O⁻(2N)`.
pub fn ominus_z_average(size: usize, alphas: &[C64]) -> Result<C64> {
    let w: Vec<C64> = alphas.iter().map(|a| (-a).exp()).collect();
    Ok((size as f64 * alphas.iter().sum::<C64>()).exp() * ominus_autocorr_eps(size, &w)?)
}

/// `Σ_ε [∏ε_j] ∏ e^{ε_j N α_j} ∏_{i<j} (1 - e^{-ε_i α_i - ε_j α_j})^{-1}`.
pub fn exponential_sign_sum(size: usize, alphas: &[C64], signed: bool) -> Result<C64> {
    let n = size as f64;
    let mut acc = C64::new(0.0, 0.0);
    for signs in (0..alphas.len()).map(|_| [1.0, -1.0]).multi_cartesian_product() {
        let e: Vec<C64> = alphas.iter().zip(&signs).map(|(a, s)| a * s).collect();
        let mut v = (n * e.iter().sum::<C64>()).exp();
        if signed {
            v *= signs.iter().product::<f64>();
        }
        for j in 0..e.len() {
            for i in 0..j {
                let f = 1.0 - (-e[i] - e[j]).exp();
                if f.norm() < SEPARATION_THRESHOLD {
                    return Err(Error::PoleHit(format!("α_{} and α_{} cancel", i + 1, j + 1)));
                }
                v /= f;
            }
        }
        acc += v;
    }
    Ok(acc)
}

/// Determinant of the `N×N` matrix with `1` on and above the diagonal and `-1` below.
pub fn pairing_determinant(size: usize) -> i128 {
    let m = (0..size).map(|i| (0..size).map(|j| if j >= i { 1 } else { -1 }).collect()).collect();
    det_i128(m)
}

/// `Σ_{σ,τ} sgn σ sgn τ ∏_i a_{σ(i) τ(i)}` for the same matrix, by enumeration; equals `N!` times the determinant.
pub fn signed_pairing_count(size: usize) -> i128 {
    let entry = |i: usize, j: usize| if j >= i { 1i128 } else { -1 };
    let perms: Vec<(Vec<usize>, i128)> = (0..size)
        .permutations(size)
        .map(|p| {
            let s = perm_sign(&p);
            (p, s)
        })
        .collect();
    let mut total = 0i128;
    for (s, ss) in &perms {
        for (t, ts) in &perms {
            total += ss * ts * (0..size).map(|i| entry(s[i], t[i])).product::<i128>();
        }
    }
    total
}

fn perm_sign(p: &[usize]) -> i128 {
    let inv = (0..p.len()).tuple_combinations().filter(|&(i, j)| p[i] > p[j]).count();
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}
