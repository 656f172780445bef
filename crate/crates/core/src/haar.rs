//! Weyl eigenangle densities, tensor quadrature and Haar sampling.
//!
//! Angles live in `[0, 2π)`. For the symplectic and orthogonal families an
//! angle `θ` stands for the conjugate pair `e^{±iθ}`; the densities are even
//! in every angle, so integrating over the full circle and dividing by `2`
//! per angle reproduces the usual `[0, π]` integral.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::C64;
use crate::symcore::vandermonde;

/// Default cap on the number of free angles in a tensor grid.
pub const QUADRATURE_DIM_CAP: usize = 3;

/// Samples drawn per RNG stream in parallel sampling.
const CHUNK: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Unitary,
    Symplectic,
    SpecialOrthogonalEven,
    OrthogonalMinus,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Unitary => "u",
            Family::Symplectic => "usp",
            Family::SpecialOrthogonalEven => "so",
            Family::OrthogonalMinus => "ominus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub family: Family,
    pub n: usize,
}

impl GroupSpec {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("size parameter N must be at least 1".into()));
        }
        Ok(GroupSpec { family, n })
    }

    /// Number of free eigenangles.
    pub fn free_angles(&self) -> usize {
        match self.family {
            Family::OrthogonalMinus => self.n - 1,
            _ => self.n,
        }
    }

    /// Matrix dimension (`N` or `2N`).
    pub fn matrix_dim(&self) -> usize {
        match self.family {
            Family::Unitary => self.n,
            _ => 2 * self.n,
        }
    }

    fn check_angles(&self, angles: &[f64]) -> Result<()> {
        if angles.len() != self.free_angles() {
            return Err(Error::InvalidArgument(format!(
                "expected {} eigenangles, got {}",
                self.free_angles(),
                angles.len()
            )));
        }
        Ok(())
    }
}

fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// `Λ_M(s) = det(I - M s)` from the eigenangles.
pub fn char_poly_eval(group: GroupSpec, angles: &[f64], s: C64) -> Result<C64> {
    group.check_angles(angles)?;
    Ok(char_poly_unchecked(group.family, angles, s))
}

fn char_poly_unchecked(family: Family, angles: &[f64], s: C64) -> C64 {
    match family {
        Family::Unitary => angles.iter().map(|&t| 1.0 - cis(t) * s).product(),
        Family::Symplectic | Family::SpecialOrthogonalEven => paired_product(angles, s),
        Family::OrthogonalMinus => (1.0 - s) * (1.0 + s) * paired_product(angles, s),
    }
}

fn paired_product(angles: &[f64], s: C64) -> C64 {
    // (1 - e^{iθ}s)(1 - e^{-iθ}s) = 1 - 2 s cos θ + s²
    angles.iter().map(|&t| 1.0 - 2.0 * s * t.cos() + s * s).product()
}

/// `∏_j Λ_M(w_j)` for a list of shifts.
pub fn char_poly_product(group: GroupSpec, angles: &[f64], shifts: &[C64]) -> Result<C64> {
    group.check_angles(angles)?;
    Ok(shifts.iter().map(|&w| char_poly_unchecked(group.family, angles, w)).product())
}

fn conj_poly_at_inverse(family: Family, angles: &[f64], s: C64) -> C64 {
    // \bar Λ(1/s) = conj(Λ(1/conj s))
    char_poly_unchecked(family, angles, 1.0 / s.conj()).conj()
}

/// Relative residual of the characteristic polynomial's functional equation.
///
/// The residual is `|Λ(s) - RHS(s)| / max(1, |Λ(s)|, |RHS(s)|)`.
pub fn functional_equation_residual(group: GroupSpec, angles: &[f64], s: C64) -> Result<f64> {
    group.check_angles(angles)?;
    if s == C64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("functional equation needs s ≠ 0".into()));
    }
    let n = group.n as i32;
    let lhs = char_poly_unchecked(group.family, angles, s);
    let rhs = match group.family {
        Family::Unitary => {
            let det = cis(angles.iter().sum());
            let dagger: C64 = angles.iter().map(|&t| 1.0 - cis(-t) / s).product();
            let sign = if group.n.is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * det * s.powi(n) * dagger
        }
        Family::Symplectic | Family::SpecialOrthogonalEven => {
            s.powi(2 * n) * conj_poly_at_inverse(group.family, angles, s)
        }
        Family::OrthogonalMinus => -s.powi(2 * n) * conj_poly_at_inverse(group.family, angles, s),
    };
    Ok((lhs - rhs).norm() / 1f64.max(lhs.norm()).max(rhs.norm()))
}

/// `𝒵_M(s) = ±s^{-N} Λ_M(s)` with the minus sign on `O⁻(2N)`; `None` for `U(N)`.
pub fn z_normalized(group: GroupSpec, angles: &[f64], s: C64) -> Result<Option<C64>> {
    group.check_angles(angles)?;
    let sign = match group.family {
        Family::Unitary => return Ok(None),
        Family::OrthogonalMinus => -1.0,
        _ => 1.0,
    };
    Ok(Some(sign * s.powi(-(group.n as i32)) * char_poly_unchecked(group.family, angles, s)))
}

/// Relative residual of `𝒵(s) = ±conj(𝒵(1/conj s))` (minus on `O⁻(2N)`).
pub fn z_functional_residual(group: GroupSpec, angles: &[f64], s: C64) -> Result<f64> {
    if s == C64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("functional equation needs s ≠ 0".into()));
    }
    let Some(lhs) = z_normalized(group, angles, s)? else {
        return Err(Error::InvalidArgument("no 𝒵-normalization for the unitary family".into()));
    };
    let mirror = z_normalized(group, angles, 1.0 / s.conj())?.unwrap_or_default().conj();
    let rhs = if group.family == Family::OrthogonalMinus { -mirror } else { mirror };
    Ok((lhs - rhs).norm() / 1f64.max(lhs.norm()).max(rhs.norm()))
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn cos_vandermonde_sq(angles: &[f64]) -> f64 {
    let mut acc = 1.0;
    for k in 1..angles.len() {
        for j in 0..k {
            let d = angles[j].cos() - angles[k].cos();
            acc *= d * d;
        }
    }
    acc
}

fn symplectic_density(angles: &[f64]) -> f64 {
    let n = angles.len();
    let norm = 2f64.powi((n * n) as i32) / (factorial(n) * PI.powi(n as i32));
    let sines: f64 = angles.iter().map(|t| t.sin() * t.sin()).product();
    norm * cos_vandermonde_sq(angles) * sines / 2f64.powi(n as i32)
}

/// Weyl density on `[0, 2π)^d` (already divided by `2^d` for the paired families).
pub fn weyl_density(group: GroupSpec, angles: &[f64]) -> Result<f64> {
    group.check_angles(angles)?;
    let n = group.n;
    Ok(match group.family {
        Family::Unitary => {
            let mut acc = 1.0;
            for k in 1..n {
                for j in 0..k {
                    acc *= 2.0 - 2.0 * (angles[k] - angles[j]).cos();
                }
            }
            acc / (factorial(n) * TAU.powi(n as i32))
        }
        Family::Symplectic | Family::OrthogonalMinus => symplectic_density(angles),
        Family::SpecialOrthogonalEven => {
            let norm = 2f64.powi(((n - 1) * (n - 1)) as i32) / (factorial(n) * PI.powi(n as i32));
            norm * cos_vandermonde_sq(angles) / 2f64.powi(n as i32)
        }
    })
}

fn conjugate_pair_points(angles: &[f64]) -> Vec<C64> {
    angles.iter().map(|&t| cis(t)).chain(angles.iter().map(|&t| cis(-t))).collect()
}

/// The density in its exponential (Vandermonde of `e^{±iθ}`) form on `[0, 2π)^d`.
///
/// Complex-valued as written; equals [`weyl_density`] pointwise up to rounding.
/// Singular for `SO(2N)` when an angle is `0` or `π`.
pub fn weyl_density_exponential(group: GroupSpec, angles: &[f64]) -> Result<C64> {
    group.check_angles(angles)?;
    let d = angles.len();
    let sign = |m: usize| if (m * (m.saturating_sub(1)) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let sine_factor = |t: f64| cis(t) - cis(-t);
    Ok(match group.family {
        Family::Unitary => {
            let pts: Vec<C64> = angles.iter().map(|&t| cis(t)).collect();
            C64::new(vandermonde(&pts).norm_sqr() / (factorial(d) * TAU.powi(d as i32)), 0.0)
        }
        Family::Symplectic | Family::OrthogonalMinus => {
            let m = d as i32;
            let n_sp = 2f64.powi(2 * m * m - 2 * m) / (PI.powi(m) * factorial(d));
            let pref = n_sp * sign(d) / 4f64.powi(m * m);
            let prod: C64 = angles.iter().map(|&t| sine_factor(t)).product();
            pref * vandermonde(&conjugate_pair_points(angles)) * prod
        }
        Family::SpecialOrthogonalEven => {
            let m = d as i32;
            let pref = sign(d) * 2f64.powi(-2 * m + 1) / (PI.powi(m) * factorial(d));
            let prod: C64 = angles.iter().map(|&t| -sine_factor(t)).product();
            pref * vandermonde(&conjugate_pair_points(angles)) / prod
        }
    })
}

/// Default nodes per angle for an integrand of the given degree in `e^{iθ}`.
pub fn default_nodes(group: GroupSpec, degree: usize) -> usize {
    4 * (2 * group.n + degree)
}

/// Tensor periodic-trapezoid average against the Weyl density.
///
/// Nodes sit at half-integer multiples of `2π/nodes`, so no node falls on `0` or `π`.
pub fn quadrature_average<F>(group: GroupSpec, integrand: F, nodes_per_dim: usize) -> Result<C64>
where
    F: Fn(&[f64]) -> C64 + Sync,
{
    quadrature_average_capped(group, integrand, nodes_per_dim, QUADRATURE_DIM_CAP)
}

pub fn quadrature_average_capped<F>(group: GroupSpec, integrand: F, nodes_per_dim: usize, dim_cap: usize) -> Result<C64>
where
    F: Fn(&[f64]) -> C64 + Sync,
{
    let d = group.free_angles();
    if d > dim_cap {
        return Err(Error::DimensionCap { dim: d, cap: dim_cap });
    }
    if nodes_per_dim == 0 {
        return Err(Error::InvalidArgument("nodes_per_dim must be positive".into()));
    }
    if d == 0 {
        return Ok(integrand(&[]));
    }
    let h = TAU / nodes_per_dim as f64;
    let node = |j: usize| (j as f64 + 0.5) * h;
    let inner_count = nodes_per_dim.pow((d - 1) as u32);
    let partials: Vec<C64> = (0..nodes_per_dim)
        .into_par_iter()
        .map(|outer| {
            let mut angles = vec![0.0; d];
            angles[0] = node(outer);
            let mut acc = C64::new(0.0, 0.0);
            for flat in 0..inner_count {
                let mut rest = flat;
                for slot in angles.iter_mut().skip(1) {
                    *slot = node(rest % nodes_per_dim);
                    rest /= nodes_per_dim;
                }
                let weight = weyl_density(group, &angles).expect("length checked");
                acc += integrand(&angles) * weight;
            }
            acc
        })
        .collect();
    let total: C64 = partials.into_iter().sum();
    Ok(total * h.powi(d as i32))
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar unitary by QR of a complex Ginibre matrix with the phase correction.
pub fn sample_unitary(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let z = DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar orthogonal `O(dim)` by QR of a real Gaussian matrix with the sign correction.
pub fn sample_orthogonal(dim: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let z = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            for i in 0..dim {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// Haar `USp(2N)` as `[[A, -B̄], [B, Ā]]`, built by Gram–Schmidt on Gaussian vectors.
///
/// Each new column `u` is orthogonalized against every earlier `u_l` and its
/// partner `J^T ū_l`, with `J = [[0, I], [-I, 0]]`.
pub fn sample_symplectic(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let dim = 2 * n;
    let partner = |u: &[C64]| -> Vec<C64> {
        // J^T (a; b) = (-b; a), applied to the conjugate
        let mut v = vec![C64::new(0.0, 0.0); dim];
        for i in 0..n {
            v[i] = -u[n + i].conj();
            v[n + i] = u[i].conj();
        }
        v
    };
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(dim);
    let mut firsts: Vec<Vec<C64>> = Vec::with_capacity(n);
    while firsts.len() < n {
        let mut g: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        // two passes for numerical orthogonality
        for _ in 0..2 {
            for b in &basis {
                let proj: C64 = b.iter().zip(&g).map(|(x, y)| x.conj() * y).sum();
                for (gi, bi) in g.iter_mut().zip(b) {
                    *gi -= proj * bi;
                }
            }
        }
        let norm = g.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        for x in &mut g {
            *x /= norm;
        }
        let p = partner(&g);
        basis.push(g.clone());
        basis.push(p);
        firsts.push(g);
    }
    let seconds: Vec<Vec<C64>> = firsts.iter().map(|u| partner(u)).collect();
    DMatrix::from_fn(dim, dim, |i, j| if j < n { firsts[j][i] } else { seconds[j - n][i] })
}

/// Pair eigenvalue arguments sorted ascending into `θ_j = (φ_{2N+1-j} - φ_j)/2`.
fn paired_angles(mut args: Vec<f64>) -> Vec<f64> {
    args.sort_by(f64::total_cmp);
    let m = args.len() / 2;
    (0..m).map(|j| 0.5 * (args[args.len() - 1 - j] - args[j])).collect()
}

/// Eigenangles of a Haar-random matrix from the group.
pub fn sample_one(group: GroupSpec, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = group.n;
    match group.family {
        Family::Unitary => {
            let u = sample_unitary(n, rng);
            let ev = u.schur().eigenvalues().expect("triangular Schur form over ℂ");
            let mut out: Vec<f64> = ev.iter().map(|z| z.arg().rem_euclid(TAU)).collect();
            out.sort_by(f64::total_cmp);
            out
        }
        Family::Symplectic => {
            let m = sample_symplectic(n, rng);
            let ev = m.schur().eigenvalues().expect("triangular Schur form over ℂ");
            paired_angles(ev.iter().map(|z| z.arg()).collect())
        }
        Family::SpecialOrthogonalEven | Family::OrthogonalMinus => {
            let mut q = sample_orthogonal(2 * n, rng);
            let want = if group.family == Family::SpecialOrthogonalEven { 1.0 } else { -1.0 };
            if q.determinant() * want < 0.0 {
                // right multiplication by a fixed reflection swaps the cosets
                for i in 0..2 * n {
                    q[(i, 0)] = -q[(i, 0)];
                }
            }
            let mut ev: Vec<C64> = q.complex_eigenvalues().iter().copied().collect();
            if group.family == Family::OrthogonalMinus {
                for target in [1.0, -1.0] {
                    let idx = ev
                        .iter()
                        .enumerate()
                        .min_by(|a, b| (a.1 - target).norm().total_cmp(&(b.1 - target).norm()))
                        .map(|(i, _)| i)
                        .expect("nonempty spectrum");
                    ev.swap_remove(idx);
                }
            }
            paired_angles(ev.iter().map(|z| z.arg()).collect())
        }
    }
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// `count` eigenangle vectors; identical for a given seed regardless of thread count.
pub fn sample_eigenangles(group: GroupSpec, rng_seed: u64, count: usize) -> Vec<Vec<f64>> {
    let chunks = count.div_ceil(CHUNK);
    let per_chunk: Vec<Vec<Vec<f64>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(rng_seed, c);
            let len = CHUNK.min(count - c * CHUNK);
            (0..len).map(|_| sample_one(group, &mut rng)).collect()
        })
        .collect();
    per_chunk.into_iter().flatten().collect()
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: C64,
    pub std_error: f64,
    pub samples: usize,
}

impl MonteCarloEstimate {
    /// `|mean - exact| / std_error`; infinite when the error is zero and the values differ.
    pub fn z_score(&self, exact: C64) -> f64 {
        let diff = (self.mean - exact).norm();
        if self.std_error > 0.0 {
            diff / self.std_error
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

fn estimate(values: &[C64]) -> MonteCarloEstimate {
    let n = values.len();
    let mean = values.iter().sum::<C64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean).norm_sqr()).sum();
    let std_error = (ss / (n as f64 * (n as f64 - 1.0))).sqrt();
    MonteCarloEstimate { mean, std_error, samples: n }
}

pub fn monte_carlo_average<F>(group: GroupSpec, integrand: F, rng_seed: u64, count: usize) -> Result<MonteCarloEstimate>
where
    F: Fn(&[f64]) -> C64 + Sync,
{
    if count < 2 {
        return Err(Error::InvalidArgument("Monte Carlo needs at least 2 samples".into()));
    }
    let chunks = count.div_ceil(CHUNK);
    let values: Vec<Vec<C64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(rng_seed, c);
            let len = CHUNK.min(count - c * CHUNK);
            (0..len).map(|_| integrand(&sample_one(group, &mut rng))).collect()
        })
        .collect();
    let flat: Vec<C64> = values.into_iter().flatten().collect();
    Ok(estimate(&flat))
}

/// Which coset a full-`O(2N)` sample landed in, with its eigenangles.
#[derive(Debug, Clone, PartialEq)]
pub struct FullOrthogonalSample {
    pub determinant_positive: bool,
    pub angles: Vec<f64>,
}

/// Monte Carlo over all of `O(2N)`: the coset is read off the determinant of each sample.
pub fn monte_carlo_full_orthogonal<F>(n: usize, integrand: F, rng_seed: u64, count: usize) -> Result<MonteCarloEstimate>
where
    F: Fn(&FullOrthogonalSample) -> C64 + Sync,
{
    if count < 2 || n == 0 {
        return Err(Error::InvalidArgument("need N ≥ 1 and at least 2 samples".into()));
    }
    let chunks = count.div_ceil(CHUNK);
    let values: Vec<Vec<C64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(rng_seed, c);
            let len = CHUNK.min(count - c * CHUNK);
            (0..len)
                .map(|_| {
                    let q = sample_orthogonal(2 * n, &mut rng);
                    let positive = q.determinant() > 0.0;
                    let mut ev: Vec<C64> = q.complex_eigenvalues().iter().copied().collect();
                    if !positive {
                        for target in [1.0, -1.0] {
                            let idx = ev
                                .iter()
                                .enumerate()
                                .min_by(|a, b| (a.1 - target).norm().total_cmp(&(b.1 - target).norm()))
                                .map(|(i, _)| i)
                                .expect("nonempty spectrum");
                            ev.swap_remove(idx);
                        }
                    }
                    let angles = paired_angles(ev.iter().map(|z| z.arg()).collect());
                    integrand(&FullOrthogonalSample { determinant_positive: positive, angles })
                })
                .collect()
        })
        .collect();
    let flat: Vec<C64> = values.into_iter().flatten().collect();
    Ok(estimate(&flat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const ALL: [Family; 4] =
        [Family::Unitary, Family::Symplectic, Family::SpecialOrthogonalEven, Family::OrthogonalMinus];

    fn g(f: Family, n: usize) -> GroupSpec {
        GroupSpec::new(f, n).unwrap()
    }

    #[test]
    fn char_poly_examples() {
        for f in ALL {
            let grp = g(f, 2);
            let angles = vec![0.3; grp.free_angles()];
            assert_eq!(char_poly_eval(grp, &angles, C64::new(0.0, 0.0)).unwrap(), C64::new(1.0, 0.0));
        }
        let om = g(Family::OrthogonalMinus, 3);
        assert_eq!(char_poly_eval(om, &[0.4, 1.1], C64::new(1.0, 0.0)).unwrap().norm(), 0.0);
        let v = char_poly_eval(g(Family::Unitary, 1), &[PI / 2.0], C64::new(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!((v - C64::new(1.0, -1.0)).norm(), 0.0, epsilon = 1e-15);
        assert!(char_poly_eval(om, &[0.1], C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn ominus_factorizes_through_symplectic_form() {
        let om = g(Family::OrthogonalMinus, 3);
        let sp = g(Family::Symplectic, 2);
        let angles = [0.7, 2.9];
        for s in [C64::new(0.3, 0.2), C64::new(-1.7, 0.4)] {
            let a = char_poly_eval(om, &angles, s).unwrap() / ((1.0 - s) * (1.0 + s));
            let b = char_poly_eval(sp, &angles, s).unwrap();
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn ominus2_functional_equation_is_tight() {
        let grp = g(Family::OrthogonalMinus, 1);
        for s in [C64::new(0.5, 0.1), C64::new(-2.0, 1.0), C64::new(0.0, 1.3)] {
            assert!(functional_equation_residual(grp, &[], s).unwrap() <= 1e-14);
        }
    }

    #[test]
    fn normalization_all_families() {
        for f in ALL {
            for n in 1..=3 {
                let grp = g(f, n);
                let v = quadrature_average(grp, |_| C64::new(1.0, 0.0), 64).unwrap();
                assert!((v - 1.0).norm() < 1e-10, "{f:?} N={n}: {v}");
            }
        }
    }

    #[test]
    fn exponential_form_matches_real_form() {
        let angles = [0.37, 1.91, 4.2];
        for f in ALL {
            for n in 1..=3 {
                let grp = g(f, n);
                let a = &angles[..grp.free_angles()];
                let real = weyl_density(grp, a).unwrap();
                let cplx = weyl_density_exponential(grp, a).unwrap();
                assert!((cplx - real).norm() < 1e-12 * real.abs().max(1e-3), "{f:?} N={n}: {cplx} vs {real}");
            }
        }
    }

    #[test]
    fn symplectic_quadrature_example() {
        let grp = g(Family::Symplectic, 1);
        let v = quadrature_average(grp, |a| char_poly_eval(grp, a, C64::new(2.0, 0.0)).unwrap(), 32).unwrap();
        assert!((v - 5.0).norm() < 1e-12);
    }

    #[test]
    fn dimension_cap_refuses() {
        let grp = g(Family::Unitary, 4);
        assert!(matches!(
            quadrature_average(grp, |_| C64::new(1.0, 0.0), 16),
            Err(Error::DimensionCap { dim: 4, cap: 3 })
        ));
    }

    #[test]
    fn sampled_matrices_have_group_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = sample_unitary(3, &mut rng);
        assert!((u.adjoint() * &u - DMatrix::identity(3, 3)).norm() < 1e-12);
        let s = sample_symplectic(2, &mut rng);
        assert!((s.adjoint() * &s - DMatrix::identity(4, 4)).norm() < 1e-12);
        let mut j = DMatrix::<C64>::zeros(4, 4);
        for i in 0..2 {
            j[(i, 2 + i)] = C64::new(1.0, 0.0);
            j[(2 + i, i)] = C64::new(-1.0, 0.0);
        }
        assert!((s.transpose() * &j * &s - &j).norm() < 1e-12);
        let o = sample_orthogonal(4, &mut rng);
        assert!((o.transpose() * &o - DMatrix::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn sampling_is_deterministic_and_in_range() {
        for f in ALL {
            let grp = g(f, 2);
            let a = sample_eigenangles(grp, 42, 1100);
            let b = sample_eigenangles(grp, 42, 1100);
            assert_eq!(a, b);
            assert_eq!(a.len(), 1100);
            for v in &a {
                assert_eq!(v.len(), grp.free_angles());
                assert!(v.iter().all(|t| (0.0..TAU).contains(t)));
            }
        }
        let om2 = sample_eigenangles(g(Family::OrthogonalMinus, 1), 1, 50);
        assert!(om2.iter().all(|v| v.is_empty()));
    }

    #[test]
    fn sampled_eigenangles_reproduce_the_matrix_char_poly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let grp = g(Family::Symplectic, 3);
        let mut rng2 = rng.clone();
        let m = sample_symplectic(3, &mut rng);
        let angles = sample_one(grp, &mut rng2);
        let s = C64::new(0.4, -0.3);
        let direct = (DMatrix::<C64>::identity(6, 6) - m * s).determinant();
        let via = char_poly_eval(grp, &angles, s).unwrap();
        assert!((direct - via).norm() < 1e-10);
    }

    #[test]
    fn unitary_second_moment_monte_carlo() {
        let grp = g(Family::Unitary, 2);
        let one = C64::new(1.0, 0.0);
        let est =
            monte_carlo_average(grp, |a| C64::new(char_poly_eval(grp, a, one).unwrap().norm_sqr(), 0.0), 11, 20_000)
                .unwrap();
        assert!(est.z_score(C64::new(3.0, 0.0)) < 4.0, "{est:?}");
    }

    #[test]
    fn constant_integrand_has_zero_error() {
        let grp = g(Family::SpecialOrthogonalEven, 2);
        let c = C64::new(2.5, -1.0);
        let est = monte_carlo_average(grp, |_| c, 5, 100).unwrap();
        assert!((est.mean - c).norm() < 1e-14);
        assert!(est.std_error < 1e-14);
    }
}
