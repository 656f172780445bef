//! `I(USp(2N); w_1..w_k) = ∫ ∏ Λ_M(w_j) dM` by determinant sum, Schur sum,
//! sign sum, subset sum, contour integral and quadrature, plus the large-`N` ratio.

use num_complex::Complex;

use crate::contour::{check_exponential_room, symmetric_kernel_integral, CenterRule, ContourConfig, SymVariant};
use crate::error::{Error, Result};
use crate::haar::{char_poly_product, default_nodes, quadrature_average, Family, GroupSpec};
use crate::orthogonal::{all_subset_pairs, subset_stats};
use crate::scalar::{cabs_f64, cexpm1, cone, cpowi, czero, Real, C64};
use crate::symcore::{
    check_separation, enumerate_even_partitions, enumerate_parity_index_sets, index_determinant_sum, schur_stable,
    vandermonde, SEPARATION_THRESHOLD,
};

/// An element of `{-1, +1}^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::InvalidArgument(format!("sign entries must be ±1: {entries:?}")));
        }
        Ok(SignVector(entries))
    }

    /// All `2^k` sign vectors; bit `j` of the counter set means `ε_j = -1`.
    pub fn all(k: usize) -> impl Iterator<Item = SignVector> {
        (0..1usize << k).map(move |bits| SignVector((0..k).map(|j| if bits >> j & 1 == 1 { -1 } else { 1 }).collect()))
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn product(&self) -> i8 {
        self.0.iter().product()
    }
}

/// One term of a sign sum.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonTerm<T: Real> {
    pub signs: SignVector,
    pub value: Complex<T>,
}

/// Which pairs enter the denominator `∏ (1 - w_i^{-ε_i} w_j^{-ε_j})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Pairs {
    Inclusive,
    Strict,
}

/// Terms of `∏ w_j^N · Σ_ε [∏ε_j] ∏ w_j^{ε_j N} / ∏_{pairs} (1 - w_i^{-ε_i} w_j^{-ε_j})`.
pub(crate) fn sign_sum_terms<T: Real>(
    exponent: usize,
    shifts: &[Complex<T>],
    pairs: Pairs,
    signed: bool,
) -> Result<Vec<EpsilonTerm<T>>> {
    if shifts.iter().any(|w| cabs_f64(w) == 0.0) {
        return Err(Error::PoleHit("zero shift in a formula with w^{-1}".into()));
    }
    let k = shifts.len();
    let e = exponent as i64;
    let mut pref = cone::<T>();
    for w in shifts {
        pref = pref * cpowi(w, e);
    }
    let mut out = Vec::with_capacity(1 << k);
    for signs in SignVector::all(k) {
        let eps = signs.entries();
        // w_j^{-ε_j}
        let inv: Vec<Complex<T>> = shifts.iter().zip(eps).map(|(w, &s)| cpowi(w, -i64::from(s))).collect();
        let mut num = pref.clone();
        for (w, &s) in shifts.iter().zip(eps) {
            num = num * cpowi(w, i64::from(s) * e);
        }
        if signed && signs.product() < 0 {
            num = -num;
        }
        let mut den = cone::<T>();
        for j in 0..k {
            let upto = if pairs == Pairs::Inclusive { j + 1 } else { j };
            for i in 0..upto {
                let f = cone::<T>() - inv[i].clone() * inv[j].clone();
                if cabs_f64(&f) < SEPARATION_THRESHOLD {
                    return Err(Error::PoleHit(format!("w_{}^{} w_{}^{} = 1", i + 1, eps[i], j + 1, eps[j])));
                }
                den = den * f;
            }
        }
        out.push(EpsilonTerm { signs, value: num / den });
    }
    Ok(out)
}

fn total<T: Real>(terms: Vec<EpsilonTerm<T>>) -> Complex<T> {
    terms.into_iter().fold(czero(), |acc, t| acc + t.value)
}

fn check_size(size: usize, shifts_len: usize) -> Result<()> {
    if size == 0 || shifts_len == 0 {
        return Err(Error::InvalidArgument("need N ≥ 1 and at least one shift".into()));
    }
    Ok(())
}

/// Sum of `det[w_p^{i_q}]` over `i_j ≡ j-1 (mod 2)` in `{0..2N+k-1}`, over the Vandermonde.
pub fn sp_autocorr_det<T: Real>(size: usize, shifts: &[Complex<T>]) -> Result<Complex<T>> {
    check_size(size, shifts.len())?;
    let k = shifts.len();
    index_determinant_sum(shifts, &enumerate_parity_index_sets(k, 2 * size + k - 1))
}

/// Number of partitions summed by [`sp_autocorr_schur`].
pub fn sp_schur_term_count(size: usize, k: usize) -> usize {
    enumerate_even_partitions(k, 2 * size).map(|v| v.len()).unwrap_or(0)
}

/// `Σ S_λ(w)` over even partitions with parts at most `2N`.
pub fn sp_autocorr_schur<T: Real>(size: usize, shifts: &[Complex<T>]) -> Result<Complex<T>> {
    check_size(size, shifts.len())?;
    let mut acc = czero::<T>();
    for lambda in enumerate_even_partitions(shifts.len(), 2 * size)? {
        acc = acc + schur_stable(&lambda, shifts)?;
    }
    Ok(acc)
}

/// The `2^k` individual terms of the sign sum.
pub fn sp_eps_terms<T: Real>(size: usize, shifts: &[Complex<T>]) -> Result<Vec<EpsilonTerm<T>>> {
    check_size(size, shifts.len())?;
    sign_sum_terms(size, shifts, Pairs::Inclusive, false)
}

/// `∏ w_j^N Σ_ε ∏ w_j^{ε_j N} ∏_{i≤j} (1 - w_i^{-ε_i} w_j^{-ε_j})^{-1}`.
pub fn sp_autocorr_eps<T: Real>(size: usize, shifts: &[Complex<T>]) -> Result<Complex<T>> {
    Ok(total(sp_eps_terms(size, shifts)?))
}

/// Subset form: `Σ_{A⊔B} (-1)^{S(A,B)} w_A^{n+2} E(A,B) Δ(A) Δ(B) / (E([k]) Δ)` with `n = 2N+k-1`.
pub fn sp_autocorr_subsets<T: Real>(size: usize, shifts: &[Complex<T>]) -> Result<Complex<T>> {
    check_size(size, shifts.len())?;
    check_separation(shifts)?;
    let k = shifts.len();
    let top = 2 * size + k - 1;
    let mut full_e = cone::<T>();
    for j in 0..k {
        for i in 0..=j {
            full_e = full_e * (cone::<T>() - shifts[i].clone() * shifts[j].clone());
        }
    }
    if cabs_f64(&full_e) < SEPARATION_THRESHOLD {
        return Err(Error::PoleHit("w_i w_j = 1 in the subset normalization".into()));
    }
    let mut acc = czero::<T>();
    for pair in all_subset_pairs(k) {
        let st = subset_stats(&pair, shifts);
        let mut term = cpowi(&st.w_a, (top + 2) as i64) * st.e * st.delta_a * st.delta_b;
        if st.s % 2 != 0 {
            term = -term;
        }
        acc = acc + term;
    }
    Ok(acc / (full_e * vandermonde(shifts)))
}

/// Periodic-trapezoid average of `∏ Λ(w_j)` against the `USp(2N)` density.
pub fn sp_autocorr_quadrature(size: usize, shifts: &[C64], nodes: Option<usize>) -> Result<C64> {
    let group = GroupSpec::new(Family::Symplectic, size)?;
    let nodes = nodes.unwrap_or_else(|| default_nodes(group, shifts.len()));
    quadrature_average(group, |a| char_poly_product(group, a, shifts).expect("length checked"), nodes)
}

/// Check that `±α` are pairwise separated and resolve the shared circle about the origin.
pub(crate) fn symmetric_contour_setup(alphas: &[C64], cfg: &ContourConfig) -> Result<ContourConfig> {
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("need at least one α".into()));
    }
    if alphas.len() > cfg.dim_cap {
        return Err(Error::DimensionCap { dim: alphas.len(), cap: cfg.dim_cap });
    }
    let mut pm: Vec<C64> = alphas.to_vec();
    pm.extend(alphas.iter().map(|a| -a));
    check_separation(&pm)?;
    let resolved = cfg.enclosing(&pm, CenterRule::Origin)?;
    check_exponential_room(&resolved)?;
    Ok(resolved)
}

/// `(1 - e^{-z_m - z_ℓ})^{-1}` over `ℓ ≤ m` or `ℓ < m`, times `e^{N Σ z}`.
pub(crate) fn exponential_pair_kernel(z: &[C64], size: usize, inclusive: bool) -> C64 {
    let mut v = (size as f64 * z.iter().sum::<C64>()).exp();
    for m in 0..z.len() {
        let upto = if inclusive { m + 1 } else { m };
        for l in 0..upto {
            v /= 1.0 - (-z[m] - z[l]).exp();
        }
    }
    v
}

/// Contour form at `w_j = e^{-α_j}`.
pub fn sp_autocorr_contour(size: usize, alphas: &[C64], cfg: &ContourConfig) -> Result<C64> {
    let cfg = symmetric_contour_setup(alphas, cfg)?;
    let integral =
        symmetric_kernel_integral(|z| exponential_pair_kernel(z, size, true), alphas, SymVariant::Plain, &cfg)?;
    Ok((-(size as f64) * alphas.iter().sum::<C64>()).exp() * integral)
}

/// Exact value at `w_j = e^{b_j/N}` over its large-`N` asymptotic form
/// `N^{k(k+1)/2} e^{Σb} Σ_ε ∏ e^{ε_j b_j} ∏_{i≤j} (ε_i b_i + ε_j b_j)^{-1}`.
///
/// Both sums are built from `e^{ε b}` and `expm1`, so the cost and accuracy do not depend on `N`.
pub fn sp_large_n_ratio(b: &[C64], size: usize) -> Result<C64> {
    if b.is_empty() || size == 0 {
        return Err(Error::InvalidArgument("need at least one b and N ≥ 1".into()));
    }
    let n = size as f64;
    let k = b.len();
    let mut exact = C64::new(0.0, 0.0);
    let mut limit = C64::new(0.0, 0.0);
    for signs in SignVector::all(k) {
        let eb: Vec<C64> = b.iter().zip(signs.entries()).map(|(x, &s)| x * f64::from(s)).collect();
        let lead = eb.iter().sum::<C64>().exp();
        let mut den_exact = C64::new(1.0, 0.0);
        let mut den_limit = C64::new(1.0, 0.0);
        for j in 0..k {
            for i in 0..=j {
                let x = eb[i] + eb[j];
                if x.norm() < SEPARATION_THRESHOLD {
                    return Err(Error::PoleHit(format!("ε_{} b_{} + ε_{} b_{} = 0", i + 1, i + 1, j + 1, j + 1)));
                }
                // N (1 - e^{-x/N}) → x
                den_exact *= -n * cexpm1(-x / n);
                den_limit *= x;
            }
        }
        exact += lead / den_exact;
        limit += lead / den_limit;
    }
    Ok(exact / limit)
}
