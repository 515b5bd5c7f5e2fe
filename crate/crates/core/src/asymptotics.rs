//! Convergence diagnostics tying computed spectral data to the limit laws:
//! normalized-ratio sweeps, exponent fits, Laplace-transform (Abelian and
//! Tauberian) consistency checks, and oscillation verdicts.

use crate::error::{Error, Result};
use crate::measures::MeasureModel;
use crate::quad::composite_gl16;
use crate::specfun::{constant_bundle, gamma_fn};
use crate::spectral::{heat_sum, poisson_gap, KuznecovSeries, PoissonGap};
use crate::distdist::DistanceProfile;

/// Geometric grid with `per_decade` points per factor of 10.
pub fn geometric_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && per_decade > 0);
    let step = 10f64.powf(1.0 / per_decade as f64);
    let mut g = vec![lo];
    let mut x = lo;
    while x * step < hi {
        x *= step;
        g.push(x);
    }
    g.push(hi);
    g
}

/// Log-period-aware grid: multiples of `base^(1/per_period)`, so that a
/// `log base`-periodic oscillation is sampled phase-uniformly.
pub fn period_grid(lo: f64, hi: f64, base: f64, per_period: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && base > 1.0 && per_period > 0);
    let step = base.powf(1.0 / per_period as f64);
    let mut g = vec![lo];
    let mut x = lo;
    while x * step < hi {
        x *= step;
        g.push(x);
    }
    g.push(hi);
    g
}

/// Outcome of a normalized-ratio sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converges,
    Oscillates,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Converges => "converges",
            Verdict::Oscillates => "oscillates",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Ratio sweep diagnostics over a spectral series.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub lambdas: Vec<f64>,
    /// `N / (C A lambda^(n-s))` when the averaged density is known,
    /// `N / lambda^(n-s)` otherwise
    pub ratios: Vec<f64>,
    pub normalized: bool,
    pub fitted_exponent: f64,
    pub fit_halfwidth: f64,
    /// oscillation amplitude (max-min)/mean over the final log-period
    pub amplitude_final: f64,
    /// same over the previous log-period
    pub amplitude_prev: f64,
    /// the multiplicative window used for amplitudes
    pub period: f64,
    pub verdict: Verdict,
}

fn window_amplitude(lambdas: &[f64], ratios: &[f64], lo: f64, hi: f64) -> f64 {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    let mut cnt = 0usize;
    for (&l, &r) in lambdas.iter().zip(ratios) {
        if l > lo && l <= hi {
            min = min.min(r);
            max = max.max(r);
            sum += r;
            cnt += 1;
        }
    }
    if cnt < 3 {
        return f64::NAN;
    }
    (max - min) / (sum / cnt as f64)
}

/// Classification thresholds. A decaying saw-tooth (smooth measures) shows
/// an amplitude that at least halves from one period window to the next; a
/// genuine log-periodic oscillation keeps a stable amplitude above 2%.
const CONVERGE_AMP: f64 = 0.005;
const OSCILLATE_AMP: f64 = 0.02;

/// Normalized-ratio sweep: divides out the predicted power law and
/// classifies the remainder behavior over the last two period windows.
///
/// `a` overrides the series' own averaged density; `period` is the
/// multiplicative window (e.g. `3.0` for base-3 digit measures, `10.0`
/// otherwise).
pub fn ratio_sweep(
    series: &KuznecovSeries,
    a: Option<f64>,
    period: f64,
) -> Result<SweepReport> {
    if series.lambdas.len() < 10 {
        return Err(Error::domain("ratio_sweep", "need at least 10 grid points"));
    }
    let bundle = constant_bundle(series.n as u32, series.s)?;
    let a_used = a.or(series.a_exact);
    let norm = a_used.map(|av| bundle.c_ns * av).unwrap_or(1.0);
    let expo = series.n as f64 - series.s;
    let ratios: Vec<f64> = series
        .lambdas
        .iter()
        .zip(&series.values)
        .map(|(&l, &v)| v / (norm * l.powf(expo)))
        .collect();
    let (fitted_exponent, fit_halfwidth) = fit_exponent(series, 1.5)?;
    let hi = *series.lambdas.last().unwrap();
    let amplitude_final = window_amplitude(&series.lambdas, &ratios, hi / period, hi);
    let amplitude_prev =
        window_amplitude(&series.lambdas, &ratios, hi / (period * period), hi / period);
    let verdict = if amplitude_final.is_nan() || amplitude_prev.is_nan() {
        Verdict::Inconclusive
    } else if amplitude_final < CONVERGE_AMP
        || (amplitude_final < OSCILLATE_AMP && amplitude_final <= 0.5 * amplitude_prev)
    {
        Verdict::Converges
    } else if amplitude_final > OSCILLATE_AMP
        && amplitude_prev > OSCILLATE_AMP
        && (amplitude_final - amplitude_prev).abs() <= 0.5 * amplitude_prev
    {
        Verdict::Oscillates
    } else {
        Verdict::Inconclusive
    };
    Ok(SweepReport {
        lambdas: series.lambdas.clone(),
        ratios,
        normalized: a_used.is_some(),
        fitted_exponent,
        fit_halfwidth,
        amplitude_final,
        amplitude_prev,
        period,
        verdict,
    })
}

/// Least-squares slope of `log N` against `log lambda` over the final
/// `window_decades`, with a two-standard-error halfwidth.
pub fn fit_exponent(series: &KuznecovSeries, window_decades: f64) -> Result<(f64, f64)> {
    let hi = *series.lambdas.last().unwrap();
    let lo = hi / 10f64.powf(window_decades);
    let pts: Vec<(f64, f64)> = series
        .lambdas
        .iter()
        .zip(&series.values)
        .filter(|&(&l, &v)| l >= lo && v > 0.0)
        .map(|(&l, &v)| (l.ln(), v.ln()))
        .collect();
    if pts.len() < 10 {
        return Err(Error::domain("fit_exponent", "fewer than 10 points in the fit window"));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts
        .iter()
        .map(|p| {
            let e = p.1 - (intercept + slope * p.0);
            e * e
        })
        .sum();
    let se = (rss / (n - 2.0) / sxx).sqrt();
    Ok((slope, 2.0 * se))
}

/// Result of a Laplace-transform power-law check.
#[derive(Debug, Clone)]
pub struct KaramataReport {
    /// `(t, scaled transform)` rows; scaled values approach 1
    pub rows: Vec<(f64, f64)>,
    /// maximum relative deviation from 1 on the final decade of `t`
    pub max_dev_final_decade: f64,
}

/// Abelian direction on synthetic data: for the counting function
/// `N(S) = a S^beta`, the numerically integrated Laplace-Stieltjes
/// transform must reproduce `a Gamma(beta+1) t^(-beta)`.
///
/// The transform is evaluated as an honest Stieltjes sum over a fine
/// geometric jump grid, not via the closed form.
pub fn karamata_synthetic_check(beta: f64, a: f64, t_grid: &[f64]) -> Result<KaramataReport> {
    if !(beta > 0.0 && a > 0.0) {
        return Err(Error::domain("karamata_check", "need beta > 0, a > 0"));
    }
    if t_grid.is_empty() || t_grid.iter().any(|&t| t <= 0.0) {
        return Err(Error::domain("karamata_check", "t grid must be positive"));
    }
    let t_min = t_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let t_max = t_grid.iter().cloned().fold(0.0, f64::max);
    let s_min = 1e-8 / t_max;
    let s_max = 50.0 / t_min;
    let steps = ((s_max / s_min).ln() / 5e-4).ceil() as usize;
    let target = a * gamma_fn(beta + 1.0)?;
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        // sum jumps of N(S) = a S^beta over the geometric grid
        let mut acc = a * s_min.powf(beta); // initial jump from S = 0
        let ratio = (s_max / s_min).powf(1.0 / steps as f64);
        let mut s_prev = s_min;
        let mut n_prev = a * s_min.powf(beta);
        for i in 1..=steps {
            let s = s_min * ratio.powi(i as i32);
            let nv = a * s.powf(beta);
            // midpoint weight of the jump
            acc += (nv - n_prev) * (-t * 0.5 * (s + s_prev)).exp();
            s_prev = s;
            n_prev = nv;
        }
        rows.push((t, acc * t.powf(beta) / target));
    }
    let max_dev_final_decade = max_dev_final_decade(&rows);
    Ok(KaramataReport { rows, max_dev_final_decade })
}

fn max_dev_final_decade(rows: &[(f64, f64)]) -> f64 {
    let t_min = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    rows.iter()
        .filter(|r| r.0 <= 10.0 * t_min)
        .map(|r| (r.1 - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Both directions of the Abelian/Tauberian correspondence on spectral
/// data: the heat sum must satisfy `H(t) t^beta -> c_transform` as `t -> 0`
/// and the counting function `N(S) S^(-beta) -> c_transform/Gamma(beta+1)`
/// as `S -> infinity`.
#[derive(Debug, Clone)]
pub struct KaramataSpectralReport {
    /// `(t, H(t) t^beta / c_transform)` rows
    pub transform_rows: Vec<(f64, f64)>,
    /// `(S, N(S) S^(-beta) Gamma(beta+1) / c_transform)` rows
    pub counting_rows: Vec<(f64, f64)>,
    pub max_dev_transform: f64,
    pub max_dev_counting: f64,
}

pub fn karamata_spectral_check(
    mu: &MeasureModel,
    series: &KuznecovSeries,
    beta: f64,
    c_transform: f64,
    t_grid: &[f64],
) -> Result<KaramataSpectralReport> {
    if !(beta > 0.0 && c_transform > 0.0) {
        return Err(Error::domain("karamata_check", "need beta > 0, c > 0"));
    }
    let mut transform_rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let h = heat_sum(mu, t, 1e-10)?;
        transform_rows.push((t, h * t.powf(beta) / c_transform));
    }
    let gamma = gamma_fn(beta + 1.0)?;
    let counting_rows: Vec<(f64, f64)> = series
        .lambdas
        .iter()
        .zip(&series.values)
        .map(|(&l, &v)| {
            let s_var = l * l;
            (s_var, v * s_var.powf(-beta) * gamma / c_transform)
        })
        .collect();
    let max_dev_transform = max_dev_final_decade(&transform_rows);
    // counting: final decade of S at the top of the sweep
    let s_max = counting_rows.last().map(|r| r.0).unwrap_or(1.0);
    let max_dev_counting = counting_rows
        .iter()
        .filter(|r| r.0 >= s_max / 10.0)
        .map(|r| (r.1 - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(KaramataSpectralReport {
        transform_rows,
        counting_rows,
        max_dev_transform,
        max_dev_counting,
    })
}

/// Heat-side vs geometry-side comparison over a `t` grid.
#[derive(Debug, Clone)]
pub struct HeatGaussianReport {
    pub rows: Vec<PoissonGap>,
    /// largest relative gap among rows with `t <= tight_t`
    pub max_tight_gap: f64,
    pub tight_t: f64,
}

/// Compares `H_mu(t) (4 pi t)^(n/2)` with `G(t)` over the grid; rows with
/// `t <= 0.002` belong to the tight regime where non-minimal images are
/// below 3e-14 and the two sides must coincide to quadrature accuracy.
pub fn heat_vs_gaussian_check(
    mu: &MeasureModel,
    profile: &DistanceProfile,
    t_grid: &[f64],
) -> Result<HeatGaussianReport> {
    let tight_t = 2e-3;
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        rows.push(poisson_gap(mu, profile, t)?);
    }
    let max_tight_gap = rows
        .iter()
        .filter(|g| g.t <= tight_t)
        .map(|g| g.rel_gap)
        .fold(0.0, f64::max);
    Ok(HeatGaussianReport { rows, max_tight_gap, tight_t })
}

/// Residual power fit: how fast does `N - C A lambda^(n-s)` grow?
#[derive(Debug, Clone)]
pub struct RemainderReport {
    /// envelope slope of `log |residual|` vs `log lambda`
    pub residual_slope: f64,
    pub halfwidth: f64,
    /// `(lambda, residual)` rows
    pub rows: Vec<(f64, f64)>,
}

/// Fits the growth exponent of the residual around the predicted leading
/// term. Oscillating residuals are handled by fitting the envelope (the
/// per-bin maximum of `|residual|` over small grid bins).
pub fn abelian_remainder_check(series: &KuznecovSeries, a: f64) -> Result<RemainderReport> {
    let bundle = constant_bundle(series.n as u32, series.s)?;
    let expo = series.n as f64 - series.s;
    let rows: Vec<(f64, f64)> = series
        .lambdas
        .iter()
        .zip(&series.values)
        .map(|(&l, &v)| (l, v - bundle.c_ns * a * l.powf(expo)))
        .collect();
    // envelope: max |residual| per bin of 5 grid points
    let mut env: Vec<(f64, f64)> = Vec::new();
    for chunk in rows.chunks(5) {
        let l = chunk[chunk.len() / 2].0;
        let m = chunk.iter().map(|r| r.1.abs()).fold(0.0, f64::max);
        if m > 0.0 {
            env.push((l.ln(), m.ln()));
        }
    }
    if env.len() < 5 {
        return Err(Error::domain("abelian_remainder_check", "too few usable residuals"));
    }
    let n = env.len() as f64;
    let mx = env.iter().map(|p| p.0).sum::<f64>() / n;
    let my = env.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = env.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = env.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = env
        .iter()
        .map(|p| {
            let e = p.1 - (intercept + slope * p.0);
            e * e
        })
        .sum();
    let halfwidth = 2.0 * (rss / (n - 2.0) / sxx).sqrt();
    Ok(RemainderReport { residual_slope: slope, halfwidth, rows })
}

/// Quadrature of `int_0^infty x^(beta-1) e^(-x) dx` used as an
/// independent check of the Gamma normalization in Tauberian constants.
pub fn gamma_by_quadrature(beta: f64) -> f64 {
    // [0,1]: substitute x = w^(1/beta) to remove the endpoint singularity
    let inner = composite_gl16(&|w: f64| (-w.powf(1.0 / beta)).exp(), 0.0, 1.0, 64) / beta;
    let outer = composite_gl16(&|x: f64| x.powf(beta - 1.0) * (-x).exp(), 1.0, 60.0, 256);
    beta * (inner + outer)
}
