//! Tensor periodic-trapezoid quadrature on circular contours, and two-sided
//! checks of the sum-to-integral lemmas.

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::C64;
use crate::symcore::{enumerate_split_permutations, vandermonde};

/// Largest dimension any configuration may allow.
pub const MAX_DIM_CAP: usize = 4;

/// Fractional part of the golden ratio.
const GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusRule {
    /// Resolved from the enclosed points by [`ContourConfig::enclosing`].
    Auto,
    Explicit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridRotation {
    Golden,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourConfig {
    pub nodes_per_dim: usize,
    pub radius_rule: RadiusRule,
    pub center: C64,
    pub dim_cap: usize,
    pub grid_rotation: GridRotation,
}

impl Default for ContourConfig {
    fn default() -> Self {
        ContourConfig {
            nodes_per_dim: 128,
            radius_rule: RadiusRule::Auto,
            center: C64::new(0.0, 0.0),
            dim_cap: 3,
            grid_rotation: GridRotation::Golden,
        }
    }
}

/// Where the auto rule puts the circle's center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterRule {
    Centroid,
    Origin,
}

impl ContourConfig {
    pub fn with_nodes(nodes_per_dim: usize) -> Result<Self> {
        let cfg = ContourConfig { nodes_per_dim, ..Default::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_dim < 16 {
            return Err(Error::InvalidArgument(format!(
                "nodes_per_dim must be at least 16, got {}",
                self.nodes_per_dim
            )));
        }
        if self.dim_cap == 0 || self.dim_cap > MAX_DIM_CAP {
            return Err(Error::InvalidArgument(format!("dim_cap must be in 1..={MAX_DIM_CAP}, got {}", self.dim_cap)));
        }
        if let RadiusRule::Explicit(r) = self.radius_rule {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
            }
        }
        Ok(())
    }

    /// Resolve an `Auto` radius so the circle encloses `points`:
    /// `r = 2 max |p - c| + 0.1` about the chosen center.
    ///
    /// An explicit radius is kept (and the center is left alone).
    pub fn enclosing(&self, points: &[C64], center: CenterRule) -> Result<Self> {
        self.validate()?;
        let mut out = *self;
        if self.radius_rule == RadiusRule::Auto {
            let c = match center {
                CenterRule::Origin => C64::new(0.0, 0.0),
                CenterRule::Centroid if points.is_empty() => C64::new(0.0, 0.0),
                CenterRule::Centroid => points.iter().sum::<C64>() / points.len() as f64,
            };
            let reach = points.iter().map(|p| (p - c).norm()).fold(0.0, f64::max);
            out.center = c;
            out.radius_rule = RadiusRule::Explicit(2.0 * reach + 0.1);
        }
        Ok(out)
    }

    fn radius(&self) -> Result<f64> {
        match self.radius_rule {
            RadiusRule::Explicit(r) => Ok(r),
            RadiusRule::Auto => {
                Err(Error::InvalidArgument("auto radius must be resolved against the enclosed points first".into()))
            }
        }
    }
}

/// Fail when a shared circle is wide enough for `e^{±(z - z')}` to wrap onto another branch.
pub fn check_exponential_room(cfg: &ContourConfig) -> Result<()> {
    let radius = cfg.radius()?;
    if radius >= std::f64::consts::PI {
        return Err(Error::ContourTooTight { radius });
    }
    Ok(())
}

/// `(2πi)^{-dim} ∮⋯∮ integrand dz` over `dim` copies of the configured circle.
///
/// Each dimension uses the trapezoid rule in the angle, i.e.
/// `(1/M) Σ f(z) (z - c)` per variable.
pub fn circular_integral<F>(dim: usize, integrand: F, cfg: &ContourConfig) -> Result<C64>
where
    F: Fn(&[C64]) -> C64 + Sync,
{
    cfg.validate()?;
    if dim > cfg.dim_cap {
        return Err(Error::DimensionCap { dim, cap: cfg.dim_cap });
    }
    if dim == 0 {
        return Ok(integrand(&[]));
    }
    let r = cfg.radius()?;
    let m = cfg.nodes_per_dim;
    let step = std::f64::consts::TAU / m as f64;
    let offsets: Vec<f64> = (0..dim)
        .map(|j| match cfg.grid_rotation {
            GridRotation::Golden => (j as f64 * GOLDEN).fract(),
            GridRotation::None => 0.0,
        })
        .collect();
    // radial vectors (z - c) for each dimension and node
    let radial: Vec<Vec<C64>> =
        offsets.iter().map(|off| (0..m).map(|k| C64::from_polar(r, (k as f64 + off) * step)).collect()).collect();
    let inner = m.pow((dim - 1) as u32);
    let partials: Vec<C64> = (0..m)
        .into_par_iter()
        .map(|outer| {
            let mut z = vec![C64::new(0.0, 0.0); dim];
            let mut acc = C64::new(0.0, 0.0);
            for flat in 0..inner {
                let mut rest = flat;
                let mut jac = radial[0][outer];
                z[0] = cfg.center + radial[0][outer];
                for d in 1..dim {
                    let v = radial[d][rest % m];
                    rest /= m;
                    z[d] = cfg.center + v;
                    jac *= v;
                }
                acc += integrand(&z) * jac;
            }
            acc
        })
        .collect();
    let total: C64 = partials.into_iter().sum();
    Ok(total / (m as f64).powi(dim as i32))
}

/// Relative check that `f` has a simple pole of residue 1 at the origin.
fn check_unit_residue<P: Fn(C64) -> C64>(f: &P) -> Result<()> {
    for dir in [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-0.6, 0.8)] {
        let x = dir * 1e-5;
        let r = x * f(x);
        if (r - 1.0).norm() > 1e-3 {
            return Err(Error::InvalidArgument(format!(
                "pole factor does not have residue 1 at 0 (x·f(x) = {r} at x = {x})"
            )));
        }
    }
    Ok(())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn parity_sign(e: usize) -> f64 {
    if e.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Both sides of a lemma check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaCheck {
    pub lhs: C64,
    pub rhs: C64,
    pub residual: f64,
}

impl LemmaCheck {
    fn new(lhs: C64, rhs: C64) -> Self {
        LemmaCheck { lhs, rhs, residual: (lhs - rhs).norm() }
    }
}

/// Split-sum vs contour integral for `G(a; b) = F(a; b) ∏ f(a_i - b_j)`.
///
/// `regular` receives the `m` left and `n - m` right variables.
pub fn lemma_unitary_check<R, P>(regular: R, pole: P, u: &[C64], m: usize, cfg: &ContourConfig) -> Result<LemmaCheck>
where
    R: Fn(&[C64], &[C64]) -> C64 + Sync,
    P: Fn(C64) -> C64 + Sync,
{
    check_unit_residue(&pole)?;
    let n = u.len();
    let g = |a: &[C64], b: &[C64]| -> C64 {
        let mut v = regular(a, b);
        for x in a {
            for y in b {
                v *= pole(x - y);
            }
        }
        v
    };
    let mut lhs = C64::new(0.0, 0.0);
    for sp in enumerate_split_permutations(n, m)? {
        let a: Vec<C64> = sp.left.iter().map(|&i| u[i - 1]).collect();
        let b: Vec<C64> = sp.right.iter().map(|&i| u[i - 1]).collect();
        lhs += g(&a, &b);
    }
    let cfg = cfg.enclosing(u, CenterRule::Centroid)?;
    let integral = circular_integral(
        n,
        |z| {
            let mut den = C64::new(1.0, 0.0);
            for zi in z {
                for uj in u {
                    den *= zi - uj;
                }
            }
            let v = vandermonde(z);
            g(&z[..m], &z[m..]) * v * v / den
        },
        &cfg,
    )?;
    let pref = parity_sign(n * n.saturating_sub(1) / 2) / (factorial(m) * factorial(n - m));
    Ok(LemmaCheck::new(lhs, integral * pref))
}

/// Which sign-sum the symmetric lemma evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymVariant {
    /// `Σ_ε G(εα)` against the `∏ z_j` kernel.
    Plain,
    /// `Σ_ε (∏ε_j) G(εα)` against the `∏ α_j` kernel.
    Signed,
}

/// Which pairs `f(a_i + a_j)` enter `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairProduct {
    /// `i ≤ j`
    Inclusive,
    /// `i < j`
    Strict,
}

fn pair_product<P: Fn(C64) -> C64>(pole: &P, a: &[C64], kind: PairProduct) -> C64 {
    let mut v = C64::new(1.0, 0.0);
    for j in 0..a.len() {
        let upto = if kind == PairProduct::Inclusive { j + 1 } else { j };
        for i in 0..upto {
            v *= pole(a[i] + a[j]);
        }
    }
    v
}

/// The symmetric-kernel contour integral
/// `(-1)^{k(k-1)/2} 2^k / k! (2πi)^{-k} ∮ G(z) Δ(z²)² N(z) / ∏(z_i - α_j)(z_i + α_j) dz`,
/// with `N(z) = ∏ z_j` (plain) or `∏ α_j` (signed). Center 0, radius from `±α`.
pub fn symmetric_kernel_integral<G>(g: G, alphas: &[C64], variant: SymVariant, cfg: &ContourConfig) -> Result<C64>
where
    G: Fn(&[C64]) -> C64 + Sync,
{
    let k = alphas.len();
    let mut enclosed: Vec<C64> = alphas.to_vec();
    enclosed.extend(alphas.iter().map(|a| -a));
    let cfg = cfg.enclosing(&enclosed, CenterRule::Origin)?;
    let alpha_prod: C64 = alphas.iter().product();
    let integral = circular_integral(
        k,
        |z| {
            let mut den = C64::new(1.0, 0.0);
            for zi in z {
                for a in alphas {
                    den *= (zi - a) * (zi + a);
                }
            }
            let sq: Vec<C64> = z.iter().map(|x| x * x).collect();
            let v = vandermonde(&sq);
            let num = match variant {
                SymVariant::Plain => z.iter().product::<C64>(),
                SymVariant::Signed => alpha_prod,
            };
            g(z) * v * v * num / den
        },
        &cfg,
    )?;
    let pref = parity_sign(k * k.saturating_sub(1) / 2) * 2f64.powi(k as i32) / factorial(k);
    Ok(integral * pref)
}

/// Sign-sum vs contour integral for `G(a) = F(a) ∏ f(a_i + a_j)`.
pub fn lemma_sym_check<R, P>(
    regular: R,
    pole: P,
    product: PairProduct,
    alphas: &[C64],
    variant: SymVariant,
    cfg: &ContourConfig,
) -> Result<LemmaCheck>
where
    R: Fn(&[C64]) -> C64 + Sync,
    P: Fn(C64) -> C64 + Sync,
{
    check_unit_residue(&pole)?;
    let k = alphas.len();
    let g = |a: &[C64]| regular(a) * pair_product(&pole, a, product);
    let mut lhs = C64::new(0.0, 0.0);
    for signs in (0..k).map(|_| [1.0, -1.0]).multi_cartesian_product() {
        let a: Vec<C64> = alphas.iter().zip(&signs).map(|(x, s)| x * *s).collect();
        let weight = match variant {
            SymVariant::Plain => 1.0,
            SymVariant::Signed => signs.iter().product(),
        };
        lhs += g(&a) * weight;
    }
    // `multi_cartesian_product` of zero iterators yields nothing
    if k == 0 {
        lhs = g(&[]);
    }
    let rhs = symmetric_kernel_integral(g, alphas, variant, cfg)?;
    Ok(LemmaCheck::new(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(nodes: usize, r: f64) -> ContourConfig {
        ContourConfig { nodes_per_dim: nodes, radius_rule: RadiusRule::Explicit(r), ..Default::default() }
    }

    #[test]
    fn cauchy_kernel_inside_and_outside() {
        let a = C64::new(0.2, -0.1);
        let inside = circular_integral(1, |z| 1.0 / (z[0] - a), &cfg(64, 1.0)).unwrap();
        assert!((inside - 1.0).norm() < 1e-10);
        let far = C64::new(2.5, 0.0);
        let outside = circular_integral(1, |z| 1.0 / (z[0] - far), &cfg(64, 1.0)).unwrap();
        assert!(outside.norm() < 1e-10);
        let b = C64::new(-0.3, 0.3);
        let two = circular_integral(2, |z| 1.0 / ((z[0] - a) * (z[1] - b)), &cfg(64, 1.0)).unwrap();
        assert!((two - 1.0).norm() < 1e-9);
    }

    #[test]
    fn laurent_monomials_are_exact() {
        let m = 32;
        for p in -15i32..=15 {
            let v = circular_integral(1, |z| z[0].powi(p), &cfg(m, 0.8)).unwrap();
            let expect = if p == -1 { 1.0 } else { 0.0 };
            assert!((v - expect).norm() < 1e-12, "power {p}: {v}");
        }
    }

    #[test]
    fn config_validation() {
        assert!(ContourConfig::with_nodes(8).is_err());
        let bad = ContourConfig { dim_cap: 5, ..Default::default() };
        assert!(bad.validate().is_err());
        assert!(matches!(
            circular_integral(4, |_| C64::new(1.0, 0.0), &cfg(16, 1.0)),
            Err(Error::DimensionCap { dim: 4, cap: 3 })
        ));
        assert!(circular_integral(1, |_| C64::new(1.0, 0.0), &ContourConfig::default()).is_err());
    }

    #[test]
    fn auto_radius_rule() {
        let pts = [C64::new(0.1, 0.0), C64::new(-0.3, 0.0)];
        let c = ContourConfig::default().enclosing(&pts, CenterRule::Centroid).unwrap();
        assert!((c.center - C64::new(-0.1, 0.0)).norm() < 1e-15);
        assert_eq!(c.radius_rule, RadiusRule::Explicit(2.0 * 0.2 + 0.1));
        let wide = ContourConfig::default().enclosing(&[C64::new(2.0, 0.0)], CenterRule::Origin).unwrap();
        assert!(matches!(check_exponential_room(&wide), Err(Error::ContourTooTight { .. })));
    }

    fn inv(x: C64) -> C64 {
        1.0 / x
    }

    fn coth_like(x: C64) -> C64 {
        1.0 / (1.0 - (-x).exp())
    }

    #[test]
    fn unitary_lemma_simple_pole() {
        let u = [C64::new(0.1, 0.05), C64::new(-0.15, 0.2)];
        let c = ContourConfig::with_nodes(128).unwrap();
        let r = lemma_unitary_check(|_, _| C64::new(1.0, 0.0), inv, &u, 1, &c).unwrap();
        // 1/(u1-u2) + 1/(u2-u1) = 0
        assert!(r.lhs.norm() < 1e-12);
        assert!(r.residual < 1e-8, "{r:?}");
        let r = lemma_unitary_check(|_, _| C64::new(1.0, 0.0), coth_like, &u, 1, &c).unwrap();
        assert!(r.residual < 1e-7, "{r:?}");
        let r = lemma_unitary_check(|_, b| b.iter().map(|x| x.exp()).product(), coth_like, &u, 0, &c).unwrap();
        assert!(r.residual < 1e-8, "{r:?}");
    }

    #[test]
    fn residue_precondition_is_checked() {
        let u = [C64::new(0.1, 0.0), C64::new(0.2, 0.0)];
        let c = ContourConfig::with_nodes(32).unwrap();
        let err = lemma_unitary_check(|_, _| C64::new(1.0, 0.0), |x| 2.0 / x, &u, 1, &c);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn symmetric_lemma_k1() {
        let a = [C64::new(0.2, 0.1)];
        let c = ContourConfig::with_nodes(128).unwrap();
        for product in [PairProduct::Inclusive, PairProduct::Strict] {
            let r = lemma_sym_check(|_| C64::new(1.0, 0.0), inv, product, &a, SymVariant::Plain, &c).unwrap();
            assert!(r.residual < 1e-8, "{product:?} {r:?}");
        }
        let r = lemma_sym_check(|z| z[0].exp(), inv, PairProduct::Strict, &a, SymVariant::Signed, &c).unwrap();
        assert!(r.residual < 1e-8, "{r:?}");
    }

    #[test]
    fn symmetric_lemma_signed_inclusive_picks_up_origin_residue() {
        // With the diagonal factor f(2z) and no ∏ z_j to cancel it, the kernel
        // has an extra pole at z = 0 inside the contour.
        let a = [C64::new(0.2, 0.0)];
        let c = ContourConfig::with_nodes(128).unwrap();
        let r = lemma_sym_check(|_| C64::new(1.0, 0.0), coth_like, PairProduct::Inclusive, &a, SymVariant::Signed, &c)
            .unwrap();
        assert!(r.residual > 1e-2, "{r:?}");
    }

    #[test]
    fn symmetric_lemma_k2_plain() {
        let a = [C64::new(0.1, 0.0), C64::new(0.25, 0.05)];
        let c = ContourConfig::with_nodes(128).unwrap();
        for product in [PairProduct::Inclusive, PairProduct::Strict] {
            let r = lemma_sym_check(|z| (z[0] + z[1]).exp(), coth_like, product, &a, SymVariant::Plain, &c).unwrap();
            assert!(r.residual < 1e-6, "{product:?} {r:?}");
        }
    }

    #[test]
    fn rotation_does_not_change_smooth_results() {
        let u = [C64::new(0.1, 0.05), C64::new(-0.15, 0.2)];
        let on = ContourConfig::with_nodes(128).unwrap();
        let off = ContourConfig { grid_rotation: GridRotation::None, ..on };
        // m = 0 has no pole factors, so unrotated coincident nodes are harmless
        let a = lemma_unitary_check(|_, b| b[0].exp() * b[1], coth_like, &u, 0, &on).unwrap();
        let b = lemma_unitary_check(|_, b| b[0].exp() * b[1], coth_like, &u, 0, &off).unwrap();
        assert!((a.rhs - b.rhs).norm() < 1e-8);
    }
}
