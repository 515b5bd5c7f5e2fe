//! The spectral side: lattice enumeration on `T^n`, cumulative spectral
//! sums, heat-regularized sums and energy-weighted sums.
//!
//! Eigenvalues of the flat unit torus are `lambda_k = 2 pi |k|`, `k` in
//! `Z^n`, with exponential eigenfunctions; for a real measure the sum over
//! the real orthonormal basis `{1, sqrt2 cos, sqrt2 sin}` collapses to a sum
//! of `|mu_hat(k)|^2` over the full lattice (validated against
//! [`real_basis_oracle`]). All sweeps reduce lattice fibers in a fixed
//! order, so results are identical for any thread count.

use crate::distdist::DistanceProfile;
use crate::error::{Error, Result};
use crate::measures::{AxisSpec, MeasureModel};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Number of lattice points with `2 pi |k| <= lambda` in `Z^n`.
pub fn lattice_count(n: usize, lambda: f64) -> u64 {
    let kmax = lambda / (2.0 * PI);
    count_ball(n, kmax * kmax)
}

fn count_ball(n: usize, radius_sq: f64) -> u64 {
    if radius_sq < 0.0 {
        return 0;
    }
    if n == 1 {
        return 2 * radius_sq.sqrt().floor() as u64 + 1;
    }
    let kmax = radius_sq.sqrt().floor() as i64;
    let mut acc = 0;
    for k in -kmax..=kmax {
        acc += count_ball(n - 1, radius_sq - (k * k) as f64);
    }
    acc
}

/// Cached evaluator of `mu_hat(k)`: digit-axis coefficient tables are
/// precomputed once so lattice sweeps cost one table product per point.
enum CoeffEval {
    Subtorus { s: usize, normal_offset: Vec<f64> },
    Digit { full: Vec<bool>, tables: Vec<Option<Vec<Complex64>>>, kmax: i64, normal_offset: Vec<f64> },
    Weighted { s: usize, normal_offset: Vec<f64>, modes: Vec<(Vec<i64>, f64)> },
    Mixture(Vec<CoeffEval>),
}

impl CoeffEval {
    fn new(mu: &MeasureModel, kmax: i64) -> Self {
        match mu {
            MeasureModel::SubtorusLebesgue { s, normal_offset, .. } => {
                CoeffEval::Subtorus { s: *s, normal_offset: normal_offset.clone() }
            }
            MeasureModel::DigitSelfSimilar { axes, normal_offset, .. } => {
                let mut full = Vec::new();
                let mut tables = Vec::new();
                for axis in axes {
                    match axis {
                        AxisSpec::Full => {
                            full.push(true);
                            tables.push(None);
                        }
                        AxisSpec::Digits(d) => {
                            full.push(false);
                            let mut t = vec![Complex64::new(0.0, 0.0); (2 * kmax + 1) as usize];
                            for k in 0..=kmax {
                                let v = d.fourier(k);
                                t[(k + kmax) as usize] = v;
                                t[(kmax - k) as usize] = v.conj();
                            }
                            tables.push(Some(t));
                        }
                    }
                }
                CoeffEval::Digit { full, tables, kmax, normal_offset: normal_offset.clone() }
            }
            MeasureModel::FourierWeighted { s, normal_offset, modes, .. } => CoeffEval::Weighted {
                s: *s,
                normal_offset: normal_offset.clone(),
                modes: modes.iter().map(|m| (m.k.clone(), m.amplitude)).collect(),
            },
            MeasureModel::Mixture(cs) => {
                CoeffEval::Mixture(cs.iter().map(|c| CoeffEval::new(c, kmax)).collect())
            }
        }
    }

    fn normal_phase(offset: &[f64], kn: &[i64]) -> Complex64 {
        let ang: f64 = offset.iter().zip(kn).map(|(&o, &k)| 2.0 * PI * k as f64 * o).sum();
        Complex64::new(ang.cos(), -ang.sin())
    }

    fn value(&self, k: &[i64]) -> Complex64 {
        match self {
            CoeffEval::Subtorus { s, normal_offset } => {
                if k[..*s].iter().any(|&c| c != 0) {
                    Complex64::new(0.0, 0.0)
                } else {
                    Self::normal_phase(normal_offset, &k[*s..])
                }
            }
            CoeffEval::Digit { full, tables, kmax, normal_offset } => {
                let t = full.len();
                let mut prod = Self::normal_phase(normal_offset, &k[t..]);
                for i in 0..t {
                    if full[i] {
                        if k[i] != 0 {
                            return Complex64::new(0.0, 0.0);
                        }
                    } else {
                        let table = tables[i].as_ref().unwrap();
                        prod *= table[(k[i] + kmax) as usize];
                    }
                }
                prod
            }
            CoeffEval::Weighted { s, normal_offset, modes } => {
                let phase = Self::normal_phase(normal_offset, &k[*s..]);
                let kt = &k[..*s];
                if kt.iter().all(|&c| c == 0) {
                    return phase;
                }
                for (km, a) in modes {
                    let plus = kt.iter().zip(km).all(|(&x, &y)| x == y);
                    let minus = kt.iter().zip(km).all(|(&x, &y)| x == -y);
                    if plus || minus {
                        return phase * (0.5 * a);
                    }
                }
                Complex64::new(0.0, 0.0)
            }
            CoeffEval::Mixture(evs) => evs.iter().map(|e| e.value(k)).sum(),
        }
    }
}

/// A sweep of `(lambda, N_mu(lambda))` with measure metadata.
#[derive(Debug, Clone)]
pub struct KuznecovSeries {
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    pub n: usize,
    pub s: f64,
    /// closed-form averaged density, when the measure admits one
    pub a_exact: Option<f64>,
    pub mass_sq: f64,
}

impl KuznecovSeries {
    /// Laplace-Stieltjes transform `sum jumps * exp(-t lambda^2)` of the
    /// counting function, bucketing each jump at its grid point.
    pub fn laplace_transform(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        let mut prev = 0.0;
        for (&l, &v) in self.lambdas.iter().zip(&self.values) {
            acc += (v - prev) * (-t * l * l).exp();
            prev = v;
        }
        acc
    }

    /// `(lambda, N, ratio)` rows; ratio is `N / (C A lambda^(n-s))` when the
    /// averaged density is known, `N / lambda^(n-s)` otherwise.
    pub fn rows(&self, c_ns: f64) -> Vec<[f64; 3]> {
        let norm = self.a_exact.map(|a| c_ns * a).unwrap_or(1.0);
        self.lambdas
            .iter()
            .zip(&self.values)
            .map(|(&l, &v)| [l, v, v / (norm * l.powf(self.n as f64 - self.s))])
            .collect()
    }
}

fn check_budget(n: usize, lambda_max: f64, budget: u64) -> Result<()> {
    let kmax = lambda_max / (2.0 * PI) + 1.0;
    let est = (2.0 * kmax + 1.0).powi(n as i32);
    if est > budget as f64 {
        return Err(Error::Budget(format!(
            "lattice enumeration needs ~{est:.2e} points, budget is {budget}"
        )));
    }
    Ok(())
}

/// Default lattice budget for sweeps.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Sum `weight(|k|^2) |mu_hat(k)|^2` into per-grid-point buckets selected by
/// `2 pi |k| <= lambda_i`, then prefix-sum. Fibers over the first coordinate
/// run in parallel and merge in fixed order.
fn fiber_sweep(
    mu: &MeasureModel,
    grid: &[f64],
    weight: impl Fn(f64) -> f64 + Sync,
) -> Vec<f64> {
    let n = mu.ambient_dim();
    let lambda_max = *grid.last().unwrap();
    let kmax_f = lambda_max / (2.0 * PI);
    let kmax = kmax_f.floor() as i64;
    let eval = CoeffEval::new(mu, kmax);
    let fiber_bins: Vec<Vec<f64>> = (-kmax..=kmax)
        .into_par_iter()
        .map(|k1| {
            let mut bins = vec![0.0f64; grid.len()];
            let mut k = vec![0i64; n];
            k[0] = k1;
            let rem = kmax_f * kmax_f - (k1 * k1) as f64;
            if rem >= 0.0 {
                fill_rec(&eval, &mut k, 1, rem, (k1 * k1) as f64, grid, &weight, &mut bins);
            }
            bins
        })
        .collect();
    let mut bins = vec![0.0f64; grid.len()];
    for fb in fiber_bins {
        for (b, v) in bins.iter_mut().zip(fb) {
            *b += v;
        }
    }
    for i in 1..bins.len() {
        bins[i] += bins[i - 1];
    }
    bins
}

#[allow(clippy::too_many_arguments)]
fn fill_rec(
    eval: &CoeffEval,
    k: &mut Vec<i64>,
    dim: usize,
    rem: f64,
    norm2_acc: f64,
    grid: &[f64],
    weight: &(impl Fn(f64) -> f64 + Sync),
    bins: &mut [f64],
) {
    if dim == k.len() {
        let lam = 2.0 * PI * norm2_acc.sqrt();
        let idx = grid.partition_point(|&g| g < lam);
        if idx < grid.len() {
            let c = eval.value(k).norm_sqr();
            if c != 0.0 {
                bins[idx] += weight(norm2_acc) * c;
            }
        }
        return;
    }
    let km = rem.sqrt().floor() as i64;
    for ki in -km..=km {
        k[dim] = ki;
        let used = (ki * ki) as f64;
        fill_rec(eval, k, dim + 1, rem - used, norm2_acc + used, grid, weight, bins);
    }
    k[dim] = 0;
}

/// Cumulative spectral sum `N_mu(lambda) = sum_{2 pi |k| <= lambda} |mu_hat(k)|^2`.
pub fn kuznecov_sum(mu: &MeasureModel, lambda: f64) -> Result<f64> {
    if lambda < 0.0 {
        return Err(Error::domain("kuznecov_sum", "lambda must be >= 0"));
    }
    check_budget(mu.ambient_dim(), lambda, DEFAULT_BUDGET)?;
    Ok(fiber_sweep(mu, &[lambda], |_| 1.0)[0])
}

/// Sweep `N_mu` over an increasing grid of `lambda` values in one lattice
/// pass with per-fiber coefficient caching.
pub fn kuznecov_sweep(mu: &MeasureModel, grid: &[f64], budget: u64) -> Result<KuznecovSeries> {
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) || grid[0] < 0.0 {
        return Err(Error::domain("kuznecov_sweep", "grid must be increasing and nonnegative"));
    }
    check_budget(mu.ambient_dim(), *grid.last().unwrap(), budget)?;
    let values = fiber_sweep(mu, grid, |_| 1.0);
    let mass = mu.total_mass();
    Ok(KuznecovSeries {
        lambdas: grid.to_vec(),
        values,
        n: mu.ambient_dim(),
        s: mu.dimension(),
        a_exact: mu.averaged_density_exact(),
        mass_sq: mass * mass,
    })
}

/// Heat-regularized sum `H_mu(t) = sum_k exp(-t (2 pi |k|)^2) |mu_hat(k)|^2`,
/// truncated where the Gaussian tail falls below `epsilon` relative weight.
pub fn heat_sum(mu: &MeasureModel, t: f64, epsilon: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::domain("heat_sum", format!("t = {t} not in (0, 1]")));
    }
    if !(epsilon > 0.0 && epsilon <= 1e-6) {
        return Err(Error::domain("heat_sum", format!("epsilon = {epsilon} not in (0, 1e-6]")));
    }
    let n = mu.ambient_dim() as f64;
    let mass = mu.total_mass();
    let cutoff = (((mass * mass / epsilon).ln().max(1.0)) / t).sqrt()
        + 2.0 * PI * n.sqrt() / t.sqrt();
    check_budget(mu.ambient_dim(), cutoff, DEFAULT_BUDGET)?;
    Ok(fiber_sweep(mu, &[cutoff], |norm2| (-t * 4.0 * PI * PI * norm2).exp())[0])
}

/// Report of an energy-weighted spectral sum
/// `sum_k (1 + (2 pi |k|)^2)^(-(n-u)/2) |mu_hat(k)|^2` truncated at
/// `2 pi |k| <= max_lambda`.
#[derive(Debug, Clone, Copy)]
pub struct WeightedSumReport {
    pub u: f64,
    pub max_lambda: f64,
    pub value: f64,
    /// contribution of the last decade below the cutoff: the empirical
    /// truncation-error proxy (there is no constructive tail bound)
    pub last_decade: f64,
    pub converged: bool,
}

/// Energy-weighted spectral sum with an empirical convergence diagnostic.
pub fn hr_weighted_sum(mu: &MeasureModel, u: f64, max_lambda: f64) -> Result<WeightedSumReport> {
    let n = mu.ambient_dim() as f64;
    if !(u > 0.0 && u < n) {
        return Err(Error::domain("hr_weighted_sum", format!("u = {u} not in (0, n)")));
    }
    check_budget(mu.ambient_dim(), max_lambda, DEFAULT_BUDGET)?;
    let expo = -0.5 * (n - u);
    let grid = [max_lambda / 10.0, max_lambda];
    let partial = fiber_sweep(mu, &grid, move |norm2| {
        (1.0 + 4.0 * PI * PI * norm2).powf(expo)
    });
    let value = partial[1];
    let last_decade = partial[1] - partial[0];
    Ok(WeightedSumReport {
        u,
        max_lambda,
        value,
        last_decade,
        converged: last_decade < 0.05 * value,
    })
}

/// One grid point of the spectral-sum-vs-energy inequality chain.
#[derive(Debug, Clone, Copy)]
pub struct HrRow {
    pub lambda: f64,
    pub n_value: f64,
    pub bound: f64,
    /// `bound / n_value`; the chain holds iff every slack is >= 1
    pub slack: f64,
}

#[derive(Debug, Clone)]
pub struct HrInequalityReport {
    pub rows: Vec<HrRow>,
    pub weighted: WeightedSumReport,
    pub all_hold: bool,
}

/// Verifies `N_mu(lambda) <= (1 + lambda^2)^((n-u)/2) * W` pointwise over the
/// grid, with `W` the weighted sum truncated at (at least) the grid maximum.
/// The inequality is exact for the computed partial sums.
pub fn hr_inequality_check(
    mu: &MeasureModel,
    u: f64,
    grid: &[f64],
) -> Result<HrInequalityReport> {
    let series = kuznecov_sweep(mu, grid, DEFAULT_BUDGET)?;
    let weighted = hr_weighted_sum(mu, u, *grid.last().unwrap())?;
    let n = mu.ambient_dim() as f64;
    let rows: Vec<HrRow> = series
        .lambdas
        .iter()
        .zip(&series.values)
        .map(|(&lambda, &nv)| {
            let bound = (1.0 + lambda * lambda).powf(0.5 * (n - u)) * weighted.value;
            HrRow { lambda, n_value: nv, bound, slack: bound / nv }
        })
        .collect();
    let all_hold = rows.iter().all(|r| r.slack >= 1.0 - 1e-12);
    Ok(HrInequalityReport { rows, weighted, all_hold })
}

/// Direct evaluation of the spectral sum over the explicit real orthonormal
/// basis `{1} u {sqrt2 cos(2 pi k.x), sqrt2 sin(2 pi k.x)}` with `k` ranging
/// over lexicographically-positive representatives. Small scales only; used
/// to validate the full-lattice reduction.
pub fn real_basis_oracle(mu: &MeasureModel, lambda: f64) -> Result<f64> {
    let n = mu.ambient_dim();
    if n > 2 {
        return Err(Error::Unsupported("oracle implemented for n <= 2".into()));
    }
    if !(0.0..=50.0).contains(&lambda) {
        return Err(Error::domain("real_basis_oracle", "oracle scale is lambda <= 50"));
    }
    let mass = mu.total_mass();
    let mut total = mass * mass; // constant eigenfunction
    let kmax = (lambda / (2.0 * PI)).floor() as i64;
    let mut reps: Vec<Vec<i64>> = Vec::new();
    if n == 1 {
        for k in 1..=kmax {
            reps.push(vec![k]);
        }
    } else {
        for k1 in -kmax..=kmax {
            for k2 in -kmax..=kmax {
                // representative: first nonzero coordinate positive
                let positive = k1 > 0 || (k1 == 0 && k2 > 0);
                if positive {
                    reps.push(vec![k1, k2]);
                }
            }
        }
    }
    for k in reps {
        let norm = (k.iter().map(|&c| (c * c) as f64).sum::<f64>()).sqrt();
        if 2.0 * PI * norm > lambda {
            continue;
        }
        let c = mu.fourier_coefficient(&k);
        let cos_part = 2f64.sqrt() * c.re;
        let sin_part = -(2f64.sqrt()) * c.im;
        total += cos_part * cos_part + sin_part * sin_part;
    }
    Ok(total)
}

/// Distinct eigenvalues `2 pi |k|` of `T^n` up to `lambda_max` (oracle
/// scale), for building jump-aligned grids.
pub fn eigenvalues_up_to(n: usize, lambda_max: f64) -> Vec<f64> {
    let kmax2 = (lambda_max / (2.0 * PI)).powi(2).floor() as i64;
    let km = (kmax2 as f64).sqrt().floor() as i64;
    fn rec(dim: usize, n: usize, acc: i64, km: i64, kmax2: i64, out: &mut Vec<i64>) {
        if dim == n {
            out.push(acc);
            return;
        }
        for k in 0..=km {
            let a = acc + k * k;
            if a > kmax2 {
                break;
            }
            rec(dim + 1, n, a, km, kmax2, out);
        }
    }
    let mut norms2: Vec<i64> = Vec::new();
    rec(0, n, 0, km, kmax2, &mut norms2);
    norms2.sort_unstable();
    norms2.dedup();
    norms2.iter().map(|&m| 2.0 * PI * (m as f64).sqrt()).collect()
}

/// Relative gap between `H_mu(t) (4 pi t)^(n/2)` and `G(t)` together with
/// the analytic non-minimal-image bound; on the flat torus the two sides
/// agree up to images at distance >= 1/2.
#[derive(Debug, Clone, Copy)]
pub struct PoissonGap {
    pub t: f64,
    pub heat_side: f64,
    pub gaussian_side: f64,
    pub rel_gap: f64,
    pub image_bound: f64,
}

/// Compare the heat sum against the Gaussian average of a profile at `t`.
pub fn poisson_gap(mu: &MeasureModel, profile: &DistanceProfile, t: f64) -> Result<PoissonGap> {
    let n = mu.ambient_dim() as f64;
    let h = heat_sum(mu, t, 1e-12)?;
    let heat_side = h * (4.0 * PI * t).powf(0.5 * n);
    let gaussian_side = profile.gaussian_average(t)?;
    let mass_sq = mu.total_mass() * mu.total_mass();
    // every non-minimal image sits at distance >= 1/2; 3^n - 1 near images
    let image_bound = mass_sq * ((3f64.powf(n)) - 1.0) * (-1.0 / (16.0 * t)).exp();
    Ok(PoissonGap {
        t,
        heat_side,
        gaussian_side,
        rel_gap: (heat_side - gaussian_side).abs() / heat_side.abs().max(1e-300),
        image_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{DigitAxis, Mode};

    fn circle() -> MeasureModel {
        MeasureModel::subtorus(2, 1, vec![0.25]).unwrap()
    }

    fn cantor_circle() -> MeasureModel {
        MeasureModel::digit_self_similar(
            2,
            vec![AxisSpec::Digits(DigitAxis::new(3, vec![0, 2]).unwrap())],
            vec![0.5],
        )
        .unwrap()
    }

    #[test]
    fn circle_counts() {
        // N(lambda) = 2 floor(lambda/2pi) + 1 on the circle
        assert_eq!(kuznecov_sum(&circle(), 100.0).unwrap(), 31.0);
        let sweep = kuznecov_sweep(&circle(), &[10.0, 100.0, 1000.0], DEFAULT_BUDGET).unwrap();
        assert_eq!(sweep.values, vec![3.0, 31.0, 319.0]);
        assert_eq!(kuznecov_sum(&circle(), 0.0).unwrap(), 1.0);
    }

    #[test]
    fn sweeps_are_monotone() {
        let grid: Vec<f64> = (1..=60).map(|i| 2.0 * i as f64).collect();
        for mu in [circle(), cantor_circle()] {
            let sweep = kuznecov_sweep(&mu, &grid, DEFAULT_BUDGET).unwrap();
            for w in sweep.values.windows(2) {
                assert!(w[1] >= w[0]);
            }
            assert!(sweep.values[0] >= sweep.mass_sq - 1e-12);
        }
        assert!(kuznecov_sweep(&circle(), &[5.0, 4.0], DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn budget_guard() {
        let mu = MeasureModel::subtorus(3, 1, vec![0.3, 0.3]).unwrap();
        assert!(matches!(
            kuznecov_sweep(&mu, &[1e6], DEFAULT_BUDGET),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn cantor_sum_matches_direct_summation() {
        // independent direct double loop over the lattice ball
        let mu = cantor_circle();
        let lambda = 50.0;
        let got = kuznecov_sum(&mu, lambda).unwrap();
        let axis = DigitAxis::new(3, vec![0, 2]).unwrap();
        let kmax = (lambda / (2.0 * PI)).floor() as i64;
        let mut direct = 0.0;
        let mut pts = 0;
        for k1 in -kmax - 1..=kmax + 1 {
            for k2 in -kmax - 1..=kmax + 1 {
                let norm = (((k1 * k1 + k2 * k2) as f64).sqrt()) * 2.0 * PI;
                if norm <= lambda {
                    direct += axis.fourier(k1).norm_sqr();
                    pts += 1;
                }
            }
        }
        assert!(pts <= 197);
        assert!((got - direct).abs() / direct < 1e-9, "{got} vs {direct}");
    }

    #[test]
    fn real_basis_oracle_agrees() {
        let fw = MeasureModel::fourier_weighted(
            2,
            1,
            vec![0.4],
            vec![Mode { k: vec![2], amplitude: 0.2 }],
        )
        .unwrap();
        let mix = MeasureModel::mixture(vec![circle(), cantor_circle()]).unwrap();
        let models = [circle(), cantor_circle(), fw, mix];
        let lambdas = [0.0, 6.0, 13.0, 20.0, 35.0, 50.0];
        let mut cases = 0;
        for mu in &models {
            for &l in &lambdas {
                let a = kuznecov_sum(mu, l).unwrap();
                let b = real_basis_oracle(mu, l).unwrap();
                assert!(
                    (a - b).abs() <= 1e-10 * a.max(1.0),
                    "lambda={l}: lattice {a} vs real basis {b}"
                );
                cases += 1;
            }
        }
        assert!(cases >= 20);
        assert!((real_basis_oracle(&circle(), 20.0).unwrap() - 7.0).abs() < 1e-12);
        assert!(real_basis_oracle(&circle(), 60.0).is_err());
    }

    #[test]
    fn fourier_weighted_jump_across_mode() {
        // crossing 2 pi |k1| adds the two conjugate modes: 2 (a/2)^2
        let fw = MeasureModel::fourier_weighted(
            2,
            1,
            vec![0.0],
            vec![Mode { k: vec![3], amplitude: 0.2 }],
        )
        .unwrap();
        let l = 2.0 * PI * 3.0;
        let before = kuznecov_sum(&fw, l - 0.5).unwrap();
        let after = kuznecov_sum(&fw, l + 0.01).unwrap();
        // the shell |k| = 3 also adds normal-direction points; isolate the
        // tangential mode by differencing against the plain circle
        let c_before = kuznecov_sum(&circle(), l - 0.5).unwrap();
        let c_after = kuznecov_sum(&circle(), l + 0.01).unwrap();
        let mode_jump = (after - before) - (c_after - c_before);
        assert!(
            (mode_jump - 2.0 * 0.1f64 * 0.1).abs() < 1e-12,
            "mode jump {mode_jump}"
        );
    }

    #[test]
    fn heat_sum_circle() {
        // H(t) ~ 1/(2 sqrt(pi t)) for the circle
        let t = 1e-3;
        let h = heat_sum(&circle(), t, 1e-10).unwrap();
        let want = 0.5 / (PI * t).sqrt();
        assert!((h - want).abs() / want < 1e-3, "{h} vs {want}");
        // monotone decreasing
        assert!(heat_sum(&circle(), 2e-3, 1e-10).unwrap() < h);
        // large t leaves only the constant mode
        let tail = heat_sum(&circle(), 1.0, 1e-10).unwrap();
        assert!((tail - 1.0).abs() < 1e-12);
        assert!(heat_sum(&circle(), 0.0, 1e-10).is_err());
        assert!(heat_sum(&circle(), 1e-3, 1e-3).is_err());
    }

    #[test]
    fn weyl_lattice_count() {
        // #{|k| <= lambda/2pi} / lambda^2 -> vol(B^2)/(2 pi)^2 = 1/(4 pi)
        let lambda = 1000.0;
        let c = lattice_count(2, lambda) as f64;
        let want = lambda * lambda / (4.0 * PI);
        assert!((c - want).abs() / want < 0.01, "{c} vs {want}");
    }

    #[test]
    fn laplace_transform_identity_at_oracle_scale() {
        // with the grid refined to every eigenvalue jump, the Stieltjes sum
        // against exp(-t lambda^2) equals the heat sum
        let grid = eigenvalues_up_to(2, 50.0);
        for mu in [circle(), cantor_circle()] {
            let series = kuznecov_sweep(&mu, &grid, DEFAULT_BUDGET).unwrap();
            for t in [0.02, 0.05, 0.1] {
                let via_series = series.laplace_transform(t);
                let direct = heat_sum(&mu, t, 1e-12).unwrap();
                // eigenvalues beyond 50 are cut by exp(-t 2500) <= 2e-22
                assert!(
                    (via_series - direct).abs() < 1e-9 * direct,
                    "t={t}: {via_series} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn poisson_identity_flat_torus() {
        // H (4 pi t)^(n/2) = G + images: exact to 1e-10 at t <= 0.002
        let circle_profile = DistanceProfile::exact_subtorus(&circle()).unwrap();
        let cantor_profile = DistanceProfile::torus_exact(&cantor_circle()).unwrap();
        for (mu, profile) in [(circle(), circle_profile), (cantor_circle(), cantor_profile)] {
            for t in [5e-4, 1e-3, 2e-3] {
                let gap = poisson_gap(&mu, &profile, t).unwrap();
                assert!(
                    gap.rel_gap < 1e-10,
                    "t={t}: rel gap {} (H-side {}, G-side {})",
                    gap.rel_gap,
                    gap.heat_side,
                    gap.gaussian_side
                );
            }
        }
    }

    #[test]
    fn poisson_gap_tracks_image_term_at_moderate_t() {
        let profile = DistanceProfile::exact_subtorus(&circle()).unwrap();
        let gap = poisson_gap(&circle(), &profile, 0.05).unwrap();
        // visible gap, but within the analytic image bound
        assert!(gap.rel_gap > 1e-3);
        assert!((gap.heat_side - gap.gaussian_side).abs() <= gap.image_bound);
    }

    #[test]
    fn weighted_sum_circle() {
        let w3 = hr_weighted_sum(&circle(), 0.5, 1000.0).unwrap();
        let w4 = hr_weighted_sum(&circle(), 0.5, 10_000.0).unwrap();
        assert!((w4.value - w3.value) / w4.value < 0.02, "{} vs {}", w3.value, w4.value);
        assert!(w4.converged);
        // k = 0 alone: the weight at lambda = 0 is exactly 1
        let w0 = hr_weighted_sum(&circle(), 0.5, 1.0).unwrap();
        assert_eq!(w0.value, 1.0);
        assert!(hr_weighted_sum(&circle(), 2.5, 100.0).is_err());
    }

    #[test]
    fn hr_inequality_chain() {
        let grid: Vec<f64> = (1..=20).map(|i| 50.0 * i as f64).collect();
        for mu in [circle(), cantor_circle()] {
            let rep = hr_inequality_check(&mu, 0.5, &grid).unwrap();
            assert!(rep.all_hold, "inequality chain failed");
            for r in &rep.rows {
                assert!(r.slack >= 1.0);
            }
        }
        // equality is approached when the whole spectrum sits at one point:
        // below the first nonzero eigenvalue only k = 0 contributes
        let rep = hr_inequality_check(&circle(), 0.5, &[1e-6]).unwrap();
        assert!((rep.rows[0].slack - 1.0).abs() < 1e-9, "slack {}", rep.rows[0].slack);
    }

    #[test]
    fn cantor_growth_bounded_by_energy_exponent() {
        // N(lambda) <= C lambda^(n-u) for u < s: the normalized ratio stays
        // bounded along the sweep
        let grid: Vec<f64> = (1..=30).map(|i| 20.0 * i as f64).collect();
        let series = kuznecov_sweep(&cantor_circle(), &grid, DEFAULT_BUDGET).unwrap();
        let u = 0.5;
        let mut max_ratio = 0.0f64;
        for (&l, &v) in series.lambdas.iter().zip(&series.values) {
            max_ratio = max_ratio.max(v / l.powf(2.0 - u));
        }
        assert!(max_ratio < 1.0, "ratio {max_ratio}");
    }
}
