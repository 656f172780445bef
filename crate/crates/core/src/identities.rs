//! Numerical checks of the polynomial identities behind the symplectic and orthogonal sign sums.
//!
//! Every check evaluates both sides independently and reports
//! `|LHS - RHS| / max(1, Σ|LHS terms| + |RHS|)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::det;
use crate::orthogonal::{all_subset_pairs, IndexSubsetPair};
use crate::scalar::{cabs_f64, cone, cpowi, czero, Real};
use crate::symcore::vandermonde;

/// Polynomial `c_0 + c_1 w + ... + c_n w^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoeffs<T: Real> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> PolyCoeffs<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a polynomial needs at least one coefficient".into()));
        }
        Ok(PolyCoeffs { coeffs })
    }

    /// Expand `∏ (1 - r_m w)`.
    pub fn from_linear_factors(roots: &[Complex<T>]) -> Self {
        let mut c = vec![cone::<T>()];
        for r in roots {
            let mut next = vec![czero::<T>(); c.len() + 1];
            for (i, ci) in c.iter().enumerate() {
                next[i] = next[i].clone() + ci.clone();
                next[i + 1] = next[i + 1].clone() - ci.clone() * r.clone();
            }
            c = next;
        }
        PolyCoeffs { coeffs: c }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn eval(&self, w: &Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(czero::<T>(), |acc, c| acc * w.clone() + c.clone())
    }
}

fn residual<T: Real>(lhs: &Complex<T>, rhs: &Complex<T>, term_mass: f64) -> f64 {
    let scale = (term_mass + cabs_f64(rhs)).max(1.0);
    cabs_f64(&(lhs.clone() - rhs.clone())) / scale
}

/// `Δ(w)` with `w_j` replaced by zero.
fn vandermonde_zeroed<T: Real>(shifts: &[Complex<T>], j: usize) -> Complex<T> {
    let mut v = shifts.to_vec();
    v[j] = czero();
    vandermonde(&v)
}

fn product<T: Real>(items: impl Iterator<Item = Complex<T>>) -> Complex<T> {
    items.fold(cone::<T>(), |acc, x| acc * x)
}

/// `Σ_j Δ|_{w_j=0} ∏_m (1 - w_j w_m)` against `(1 - w_1²⋯w_n²) Δ`.
pub fn identity1_residual<T: Real>(shifts: &[Complex<T>]) -> Result<f64> {
    if shifts.is_empty() {
        return Err(Error::InvalidArgument("need n ≥ 1".into()));
    }
    let mut lhs = czero::<T>();
    let mut mass = 0.0;
    for (j, wj) in shifts.iter().enumerate() {
        let t = vandermonde_zeroed(shifts, j) * product(shifts.iter().map(|wm| cone::<T>() - wj.clone() * wm.clone()));
        mass += cabs_f64(&t);
        lhs = lhs + t;
    }
    let sq = product(shifts.iter().map(|w| w.clone() * w.clone()));
    let rhs = (cone::<T>() - sq) * vandermonde(shifts);
    Ok(residual(&lhs, &rhs, mass))
}

/// `det[f(w_i), w_i, ..., w_i^{n-1}]` against `(c_0 + (-1)^{n-1} c_n w_1⋯w_n) Δ`.
pub fn lemma1_residual<T: Real>(f: &PolyCoeffs<T>, shifts: &[Complex<T>]) -> Result<f64> {
    let n = shifts.len();
    if n == 0 || f.order() != n {
        return Err(Error::InvalidArgument(format!("polynomial of order {} with {} shifts", f.order(), n)));
    }
    let rows: Vec<Vec<Complex<T>>> =
        shifts.iter().map(|w| std::iter::once(f.eval(w)).chain((1..n).map(|p| cpowi(w, p as i64))).collect()).collect();
    let mass: f64 = rows.iter().map(|r| cabs_f64(&r[0])).sum::<f64>() * cabs_f64(&vandermonde(shifts)).max(1.0);
    let lhs = det(rows);
    let c = f.coeffs();
    let mut top = c[n].clone() * product(shifts.iter().cloned());
    if n.is_multiple_of(2) {
        top = -top;
    }
    let rhs = (c[0].clone() + top) * vandermonde(shifts);
    Ok(residual(&lhs, &rhs, mass))
}

/// `(-1)^{S(C,D)}` as a complex unit.
fn sign_of<T: Real>(pair: &IndexSubsetPair) -> Complex<T> {
    if pair.sign_statistic().is_multiple_of(2) {
        cone()
    } else {
        -cone::<T>()
    }
}

fn pick<T: Real>(idx: &[usize], shifts: &[Complex<T>]) -> Vec<Complex<T>> {
    idx.iter().map(|&i| shifts[i - 1].clone()).collect()
}

/// Each term of `Σ (-1)^{S(C,D)} ∏_C w^{n-1} Δ(C) Δ(D) ∏_{C×D} (1 - w_α w_β)`.
pub fn identity2_terms<T: Real>(shifts: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = shifts.len();
    all_subset_pairs(n)
        .map(|pair| {
            let wc = pick(pair.a(), shifts);
            let wd = pick(pair.b(), shifts);
            let mut t = sign_of::<T>(&pair) * product(wc.iter().map(|w| cpowi(w, n as i64 - 1)));
            t = t * vandermonde(&wc) * vandermonde(&wd);
            for a in &wc {
                for b in &wd {
                    t = t * (cone::<T>() - a.clone() * b.clone());
                }
            }
            t
        })
        .collect()
}

fn zero_sum_residual<T: Real>(terms: &[Complex<T>]) -> f64 {
    let sum = terms.iter().fold(czero::<T>(), |acc, t| acc + t.clone());
    let mass: f64 = terms.iter().map(cabs_f64).sum();
    cabs_f64(&sum) / mass.max(1.0)
}

/// The signed subset sum that vanishes identically, normalized by its term mass.
pub fn identity2_residual<T: Real>(shifts: &[Complex<T>]) -> Result<f64> {
    if shifts.len() < 2 {
        return Err(Error::InvalidArgument("need n ≥ 2".into()));
    }
    Ok(zero_sum_residual(&identity2_terms(shifts)))
}

/// Which subsets `C` enter an `F`-type sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CardinalityFilter {
    All,
    Even,
    Odd,
}

impl CardinalityFilter {
    fn admits(self, c: usize) -> bool {
        match self {
            CardinalityFilter::All => true,
            CardinalityFilter::Even => c.is_multiple_of(2),
            CardinalityFilter::Odd => c % 2 == 1,
        }
    }
}

/// Terms of `Σ (-1)^{S(C,D)} ∏_C w^r Δ(C) Δ(D) ∏_{C×D} (x² - w_α w_β) x^{e(|D|)}`
/// with `e(d) = d² + slope·d + offset`.
fn x_weighted_terms<T: Real>(
    shifts: &[Complex<T>],
    x: &Complex<T>,
    r: i64,
    slope: i64,
    offset: i64,
    filter: CardinalityFilter,
) -> Vec<Complex<T>> {
    let x2 = x.clone() * x.clone();
    all_subset_pairs(shifts.len())
        .filter(|p| filter.admits(p.a().len()))
        .map(|pair| {
            let wc = pick(pair.a(), shifts);
            let wd = pick(pair.b(), shifts);
            let d = wd.len() as i64;
            let mut t = sign_of::<T>(&pair) * product(wc.iter().map(|w| cpowi(w, r)));
            t = t * vandermonde(&wc) * vandermonde(&wd);
            for a in &wc {
                for b in &wd {
                    t = t * (x2.clone() - a.clone() * b.clone());
                }
            }
            t * cpowi(x, d * d + slope * d + offset)
        })
        .collect()
}

/// Terms of `F_n(w; x; r)`.
pub fn fn_terms<T: Real>(shifts: &[Complex<T>], x: &Complex<T>, r: i64) -> Vec<Complex<T>> {
    let n = shifts.len() as i64;
    x_weighted_terms(shifts, x, r, r - n, 0, CardinalityFilter::All)
}

/// `F_n(w; x; r)`; zero for every `x` when `r = n - 1`.
pub fn fn_eval<T: Real>(shifts: &[Complex<T>], x: &Complex<T>, r: i64) -> Complex<T> {
    fn_terms(shifts, x, r).into_iter().fold(czero::<T>(), |acc, t| acc + t)
}

/// `|F_n(w; x; r)|` over its term mass.
pub fn fn_residual<T: Real>(shifts: &[Complex<T>], x: &Complex<T>, r: i64) -> f64 {
    zero_sum_residual(&fn_terms(shifts, x, r))
}

/// Total degree of each term of `F_n` under `(w, x) → (c w, c x)`.
pub fn fn_degree(n: usize, r: i64) -> i64 {
    r * n as i64 + (n * n.saturating_sub(1) / 2) as i64
}

/// Sign of the linear term in the exponent `|D|² ∓ 2|D| + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity3Exponent {
    /// `|D|² - 2|D| + 1`
    Minus,
    /// `|D|² + 2|D| + 1`
    Plus,
}

/// The `|C|`-even sum with `∏_C w^{n-2}` and the chosen `x` exponent, normalized by term mass.
pub fn identity3_residual<T: Real>(shifts: &[Complex<T>], x: &Complex<T>, exponent: Identity3Exponent) -> Result<f64> {
    let n = shifts.len();
    if n < 2 {
        return Err(Error::InvalidArgument("need n ≥ 2".into()));
    }
    let slope = match exponent {
        Identity3Exponent::Minus => -2,
        Identity3Exponent::Plus => 2,
    };
    let terms = x_weighted_terms(shifts, x, n as i64 - 2, slope, 1, CardinalityFilter::Even);
    Ok(zero_sum_residual(&terms))
}

/// `Σ_j w_j² Δ|_{w_j=0} ∏_{m≠j} (1 - w_m w_j)` against `w_1²⋯w_n² Δ` (odd `n`)
/// or `(w_1²⋯w_n² - w_1⋯w_n) Δ` (even `n`).
pub fn identity4_residual<T: Real>(shifts: &[Complex<T>]) -> Result<f64> {
    if shifts.is_empty() {
        return Err(Error::InvalidArgument("need n ≥ 1".into()));
    }
    let mut lhs = czero::<T>();
    let mut mass = 0.0;
    for (j, wj) in shifts.iter().enumerate() {
        let others =
            shifts.iter().enumerate().filter(|&(m, _)| m != j).map(|(_, wm)| cone::<T>() - wm.clone() * wj.clone());
        let t = wj.clone() * wj.clone() * vandermonde_zeroed(shifts, j) * product(others);
        mass += cabs_f64(&t);
        lhs = lhs + t;
    }
    let p = product(shifts.iter().cloned());
    let sq = p.clone() * p.clone();
    let head = if shifts.len() % 2 == 1 { sq } else { sq - p };
    let rhs = head * vandermonde(shifts);
    Ok(residual(&lhs, &rhs, mass))
}

/// Solve `g(w) = f(w) (1 - w_j w)` for `f`, given `g`'s coefficients `b`:
/// `a_0 = b_0`, `a_i = b_i + w_j a_{i-1}`, and `b_n = -w_j a_{n-1}` must hold.
pub fn symmb_coeff_transform<T: Real>(b: &PolyCoeffs<T>, wj: &Complex<T>) -> Result<PolyCoeffs<T>> {
    let n = b.order();
    if n == 0 {
        return Err(Error::InvalidArgument("g must have order at least 1".into()));
    }
    let bc = b.coeffs();
    let mut a = Vec::with_capacity(n);
    a.push(bc[0].clone());
    for i in 1..n {
        let next = bc[i].clone() + wj.clone() * a[i - 1].clone();
        a.push(next);
    }
    let gap = bc[n].clone() + wj.clone() * a[n - 1].clone();
    let scale: f64 = bc.iter().map(cabs_f64).sum::<f64>().max(1.0);
    let res = cabs_f64(&gap) / scale;
    if res > 1e-10 {
        return Err(Error::Inconsistent { residual: res });
    }
    PolyCoeffs::new(a)
}

/// `f(w_j)` written directly in the `b_i`, split by the parity of `n`.
#[allow(clippy::needless_range_loop)]
pub fn symmb_split_value<T: Real>(b: &PolyCoeffs<T>, wj: &Complex<T>) -> Result<Complex<T>> {
    let n = b.order();
    if n == 0 {
        return Err(Error::InvalidArgument("g must have order at least 1".into()));
    }
    let bc = b.coeffs();
    let head = if n % 2 == 1 { (n - 1) / 2 } else { n / 2 };
    let mut acc = czero::<T>();
    for i in 0..=head {
        for q in 0..=i {
            acc = acc + cpowi(wj, (2 * i - q) as i64) * bc[q].clone();
        }
    }
    for i in head + 1..n {
        for q in 0..n - i {
            acc = acc - cpowi(wj, (2 * i + q) as i64 - n as i64) * bc[n - q].clone();
        }
    }
    Ok(acc)
}

/// Largest residual per identity over a batch of trials.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IdentityMaxima {
    pub identity1: f64,
    pub lemma1: f64,
    pub identity2: f64,
    /// `F_n` at `r = n - 1` for `x = 0` and `x = ±√(w_a w_b)`.
    pub fn_witness: f64,
    /// `F_n` at `r = n - 1` for the supplied random `x`.
    pub fn_random: f64,
    pub identity3: f64,
    /// Identity 3 with the `|D|² + 2|D| + 1` exponent; not expected to vanish.
    pub identity3_plus: f64,
    pub identity4: f64,
}

impl IdentityMaxima {
    pub fn merge(&mut self, other: &IdentityMaxima) {
        self.identity1 = self.identity1.max(other.identity1);
        self.lemma1 = self.lemma1.max(other.lemma1);
        self.identity2 = self.identity2.max(other.identity2);
        self.fn_witness = self.fn_witness.max(other.fn_witness);
        self.fn_random = self.fn_random.max(other.fn_random);
        self.identity3 = self.identity3.max(other.identity3);
        self.identity3_plus = self.identity3_plus.max(other.identity3_plus);
        self.identity4 = self.identity4.max(other.identity4);
    }

    /// Largest residual among the identities that should vanish.
    pub fn worst(&self) -> f64 {
        [self.identity1, self.lemma1, self.identity2, self.fn_witness, self.fn_random, self.identity3, self.identity4]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Run every check at one shift vector. Lemma 1 uses `f` with coefficients `(w_1, ..., w_n, lead)`.
/// The `n ≥ 2` checks are skipped for a single shift.
pub fn identity_trial<T: Real>(shifts: &[Complex<T>], xs: &[Complex<T>], lead: Complex<T>) -> Result<IdentityMaxima> {
    let n = shifts.len();
    let mut out = IdentityMaxima {
        identity1: identity1_residual(shifts)?,
        identity4: identity4_residual(shifts)?,
        ..Default::default()
    };
    let coeffs: Vec<Complex<T>> = shifts.iter().cloned().chain(std::iter::once(lead)).collect();
    out.lemma1 = lemma1_residual(&PolyCoeffs::new(coeffs)?, shifts)?;
    if n < 2 {
        return Ok(out);
    }
    out.identity2 = identity2_residual(shifts)?;
    let r = n as i64 - 1;
    let mut witnesses = vec![czero::<T>()];
    for a in 0..n {
        for b in a + 1..n {
            let root = crate::scalar::csqrt(&(shifts[a].clone() * shifts[b].clone()));
            witnesses.push(-root.clone());
            witnesses.push(root);
        }
    }
    for x in &witnesses {
        out.fn_witness = out.fn_witness.max(fn_residual(shifts, x, r));
    }
    for x in xs {
        out.fn_random = out.fn_random.max(fn_residual(shifts, x, r));
    }
    for x in witnesses.iter().chain(xs) {
        out.identity3 = out.identity3.max(identity3_residual(shifts, x, Identity3Exponent::Minus)?);
        out.identity3_plus = out.identity3_plus.max(identity3_residual(shifts, x, Identity3Exponent::Plus)?);
    }
    Ok(out)
}
