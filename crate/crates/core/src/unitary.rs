//! `I_{m,n}(U(N); w)` by Schur polynomial, determinant, split sum, contour and quadrature.

use num_complex::Complex;

use crate::contour::{check_exponential_room, circular_integral, CenterRule, ContourConfig};
use crate::error::{Error, Result};
use crate::haar::{default_nodes, quadrature_average, Family, GroupSpec};
use crate::scalar::{cabs_f64, cone, cpowi, czero, Real, C64};
use crate::symcore::{
    alternant, check_separation, enumerate_split_permutations, schur_stable, vandermonde, Partition,
    SEPARATION_THRESHOLD,
};

/// `N`, the split point `m`, and the shifts `w_1..w_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryQuery<T: Real> {
    pub size: usize,
    pub m: usize,
    pub shifts: Vec<Complex<T>>,
}

impl<T: Real> UnitaryQuery<T> {
    pub fn new(size: usize, m: usize, shifts: Vec<Complex<T>>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("N must be at least 1".into()));
        }
        if shifts.is_empty() {
            return Err(Error::InvalidArgument("need at least one shift".into()));
        }
        if m > shifts.len() {
            return Err(Error::InvalidArgument(format!("m = {m} exceeds n = {}", shifts.len())));
        }
        Ok(UnitaryQuery { size, m, shifts })
    }

    pub fn n(&self) -> usize {
        self.shifts.len()
    }
}

/// The rectangular Schur polynomial `S_{(N^{n-m})}(w)`; total in the shifts.
pub fn autocorr_schur<T: Real>(q: &UnitaryQuery<T>) -> Complex<T> {
    let mu = Partition::rectangle(q.size, q.n() - q.m, q.n()).expect("n - m ≤ n");
    schur_stable(&mu, &q.shifts).expect("lengths match")
}

/// Alternant with exponents `{0..m-1, N+m..N+n-1}` over the Vandermonde.
pub fn autocorr_det<T: Real>(q: &UnitaryQuery<T>) -> Result<Complex<T>> {
    check_separation(&q.shifts)?;
    let (n, m, big) = (q.n(), q.m, q.size);
    let exps: Vec<usize> = (0..m).chain(big + m..big + n).collect();
    Ok(alternant(&q.shifts, &exps) / vandermonde(&q.shifts))
}

/// Sum over split permutations of `(∏_right w)^N / ∏_{ℓ∈left, q∈right} (1 - w_ℓ / w_q)`.
pub fn autocorr_comb<T: Real>(q: &UnitaryQuery<T>) -> Result<Complex<T>> {
    let w = &q.shifts;
    if w.iter().any(|x| cabs_f64(x) == 0.0) {
        return Err(Error::PoleHit("zero shift in a formula with w^{-1}".into()));
    }
    let scale = w.iter().map(cabs_f64).fold(1.0, f64::max);
    let mut acc = czero::<T>();
    for sp in enumerate_split_permutations(q.n(), q.m)? {
        let mut num = cone::<T>();
        for &r in &sp.right {
            num = num * w[r - 1].clone();
        }
        let mut den = cone::<T>();
        for &l in &sp.left {
            for &r in &sp.right {
                let diff = w[r - 1].clone() - w[l - 1].clone();
                if cabs_f64(&diff) < SEPARATION_THRESHOLD * scale {
                    return Err(Error::PoleHit(format!("w_{l} = w_{r} across the split")));
                }
                den = den * diff / w[r - 1].clone();
            }
        }
        acc = acc + cpowi(&num, q.size as i64) / den;
    }
    Ok(acc)
}

/// Contour form with `w_j = e^{-α_j}`, on one circle about the centroid of the `α`'s.
pub fn autocorr_contour(size: usize, m: usize, alphas: &[C64], cfg: &ContourConfig) -> Result<C64> {
    let n = alphas.len();
    if m > n || n == 0 {
        return Err(Error::InvalidArgument(format!("need 0 ≤ m ≤ n and n ≥ 1 (m = {m}, n = {n})")));
    }
    if n > cfg.dim_cap {
        return Err(Error::DimensionCap { dim: n, cap: cfg.dim_cap });
    }
    check_separation(alphas)?;
    let cfg = cfg.enclosing(alphas, CenterRule::Centroid)?;
    check_exponential_room(&cfg)?;
    let big = size as f64;
    let integral = circular_integral(
        n,
        |z| {
            let right: C64 = z[m..].iter().sum();
            let mut v = (-big * right).exp();
            for l in 0..m {
                for q in m..n {
                    v /= 1.0 - (z[q] - z[l]).exp();
                }
            }
            let mut den = C64::new(1.0, 0.0);
            for zi in z {
                for a in alphas {
                    den *= zi - a;
                }
            }
            let d = vandermonde(z);
            v * d * d / den
        },
        &cfg,
    )?;
    let fact = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(integral * sign / (fact(m) * fact(n - m)))
}

/// The integrand of `I_{m,n}` against the `U(N)` eigenangle density:
/// `∏_p ∏_{r≤m} (1 - e^{-iθ_p} w_r) ∏_{j>m} (w_j - e^{iθ_p})`.
pub fn weyl_integrand(m: usize, shifts: &[C64], angles: &[f64]) -> C64 {
    let mut v = C64::new(1.0, 0.0);
    for &t in angles {
        let e = C64::from_polar(1.0, t);
        for (r, w) in shifts.iter().enumerate() {
            v *= if r < m { 1.0 - w / e } else { w - e };
        }
    }
    v
}

/// Tensor Weyl quadrature of `I_{m,n}`; `nodes = None` picks the exact-degree default.
pub fn autocorr_quadrature(q: &UnitaryQuery<f64>, nodes: Option<usize>) -> Result<C64> {
    let group = GroupSpec::new(Family::Unitary, q.size)?;
    let nodes = nodes.unwrap_or_else(|| default_nodes(group, q.n()));
    quadrature_average(group, |a| weyl_integrand(q.m, &q.shifts, a), nodes)
}

/// `∫ Λ(s_1^{-1})⋯Λ(s_m^{-1}) Λ_{M†}(s_{m+1})⋯Λ_{M†}(s_n) dM` through the reindexed `I_{n-m,n}`.
pub fn shifted_product_average<T: Real>(size: usize, s: &[Complex<T>], m: usize) -> Result<Complex<T>> {
    if m > s.len() {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds n = {}", s.len())));
    }
    if s[..m].iter().any(|x| cabs_f64(x) == 0.0) {
        return Err(Error::PoleHit("s_i = 0 for i ≤ m".into()));
    }
    let reordered: Vec<Complex<T>> = s[m..].iter().chain(&s[..m]).cloned().collect();
    let q = UnitaryQuery::new(size, s.len() - m, reordered)?;
    let mut pref = cone::<T>();
    for x in &s[..m] {
        pref = pref * cpowi(x, -(size as i64));
    }
    Ok(pref * autocorr_schur(&q))
}

/// The explicit `2k`-point exponential sum for
/// `∫ Λ(e^{-α_1})⋯Λ(e^{-α_k}) Λ_{M†}(e^{α_{k+1}})⋯Λ_{M†}(e^{α_{2k}}) dM`.
pub fn rmt_exponential_sum(size: usize, alphas: &[C64]) -> Result<C64> {
    if !alphas.len().is_multiple_of(2) || alphas.is_empty() {
        return Err(Error::InvalidArgument("need an even, positive number of α's".into()));
    }
    let k = alphas.len() / 2;
    let half = size as f64 / 2.0;
    let outer: C64 = alphas[k..].iter().sum::<C64>() - alphas[..k].iter().sum::<C64>();
    let mut acc = C64::new(0.0, 0.0);
    for sp in enumerate_split_permutations(2 * k, k)? {
        let a = |i: usize| alphas[i - 1];
        let lead: C64 = sp.left.iter().map(|&i| a(i)).sum::<C64>() - sp.right.iter().map(|&i| a(i)).sum::<C64>();
        let mut term = (half * lead).exp();
        for &l in &sp.left {
            for &r in &sp.right {
                let d = 1.0 - (a(r) - a(l)).exp();
                if d.norm() < SEPARATION_THRESHOLD {
                    return Err(Error::PoleHit(format!("α_{l} = α_{r} across the split")));
                }
                term /= d;
            }
        }
        acc += term;
    }
    Ok((half * outer).exp() * acc)
}

/// The same average through the split-sum route: `s_j = e^{α_j}` with `m = k`.
pub fn rmt_via_comb(size: usize, alphas: &[C64]) -> Result<C64> {
    if !alphas.len().is_multiple_of(2) || alphas.is_empty() {
        return Err(Error::InvalidArgument("need an even, positive number of α's".into()));
    }
    let k = alphas.len() / 2;
    let s: Vec<C64> = alphas.iter().map(|a| a.exp()).collect();
    let reordered: Vec<C64> = s[k..].iter().chain(&s[..k]).copied().collect();
    let q = UnitaryQuery::new(size, k, reordered)?;
    let pref: C64 = s[..k].iter().map(|x| x.powi(-(size as i32))).product();
    Ok(pref * autocorr_comb(&q)?)
}
