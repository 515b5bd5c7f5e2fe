//! Distance distributions `F(r)`, normalized coefficients `a(r) = F(r)/r^s`,
//! Gaussian pair averages `G(t)` and Riesz energies.
//!
//! A [`DistanceProfile`] is one coherent distance law: its CDF, its Gaussian
//! average and its energies all refer to the same underlying pair geometry.
//! Five representations are supported:
//!
//! * `Empirical` - sorted Monte Carlo pair distances (any measure);
//! * `Renewal` - the self-similar law of a digit axis in the *separated*
//!   (unwrapped) geometry, where `F(r) = F(b r)/|D|` holds exactly and
//!   `a(r)` is exactly log-periodic;
//! * `DigitExact` - the exact torus-metric law of a digit axis, including
//!   the wrap-around pair mass (a higher-order `O(r^{2s})` correction that
//!   the pure renewal law does not see: digit sets touching both ends of
//!   `[0, 1]` put pairs on both sides of `0 = 1`);
//! * `ExactSubtorus` - closed forms for circles (`s = 1`, optionally with
//!   cosine density modes) and the flat 2-torus sheet (`s = 2`);
//! * `Synthetic` - piecewise log-linear levels `F(r) = level(r) r^s`, the
//!   block profiles used to realize liminf/limsup behavior of `G`.

pub mod transfer;

use crate::error::{Error, Result};
use crate::measures::{AxisSpec, MeasureModel};
use crate::quad::{adaptive_simpson, composite_gl16};
use crate::specfun::scale_weight;
use rayon::prelude::*;
use std::f64::consts::PI;
pub use transfer::{PairLaw, PairMetric};

/// How a Riesz energy value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyMethod {
    Layercake,
    MonteCarlo,
}

impl EnergyMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            EnergyMethod::Layercake => "layercake",
            EnergyMethod::MonteCarlo => "montecarlo",
        }
    }
}

/// A Riesz energy `I_u = iint d(x,y)^(-u) dmu dmu` with its provenance.
#[derive(Debug, Clone, Copy)]
pub struct EnergyEstimate {
    pub u: f64,
    pub value: f64,
    pub method: EnergyMethod,
    pub stderr: Option<f64>,
}

#[derive(Debug, Clone)]
enum ProfileKind {
    Empirical {
        dists: Vec<f64>,
        seed: u64,
    },
    Renewal {
        law: PairLaw,
        base: u32,
        branch_count: usize,
        /// one log-period of (r, F) pairs, kept for export and inspection
        table: Vec<(f64, f64)>,
    },
    DigitExact {
        law: PairLaw,
    },
    ExactSubtorus {
        s: usize,
        /// (|k|, amplitude) of density modes; only allowed for s = 1
        modes: Vec<(f64, f64)>,
    },
    Synthetic {
        /// (ln r, ln level) nodes, decreasing in ln r; level is constant
        /// beyond both ends
        nodes: Vec<(f64, f64)>,
    },
}

/// A distance distribution with metadata (`s`, total pair mass, diameter).
#[derive(Debug, Clone)]
pub struct DistanceProfile {
    kind: ProfileKind,
    s: f64,
    mass_sq: f64,
    diam: f64,
}

fn single_digit_axis(mu: &MeasureModel) -> Result<&crate::measures::DigitAxis> {
    match mu {
        MeasureModel::DigitSelfSimilar { axes, .. } => match axes.as_slice() {
            [AxisSpec::Digits(d)] => Ok(d),
            _ => Err(Error::Unsupported(
                "exact digit profiles need exactly one tangential digit axis".into(),
            )),
        },
        _ => Err(Error::Unsupported("not a digit self-similar measure".into())),
    }
}

impl DistanceProfile {
    /// Monte Carlo profile: `pair_count` i.i.d. pairs from the normalized
    /// measure, torus distances sorted ascending.
    pub fn empirical(mu: &MeasureModel, pair_count: usize, seed: u64) -> Result<Self> {
        if pair_count < 1000 {
            return Err(Error::domain("empirical_profile", "need at least 1000 pairs"));
        }
        let pts = mu.sample(seed, 2 * pair_count);
        let mut dists: Vec<f64> = (0..pair_count)
            .into_par_iter()
            .map(|i| pts[2 * i].dist(&pts[2 * i + 1]))
            .collect();
        dists.par_sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let mass = mu.total_mass();
        Ok(DistanceProfile {
            kind: ProfileKind::Empirical { dists, seed },
            s: mu.dimension(),
            mass_sq: mass * mass,
            diam: 0.5 * (mu.ambient_dim() as f64).sqrt(),
        })
    }

    /// Exact self-similar profile of a single-axis digit measure in the
    /// separated geometry: `F(r) = F(br)/|D|` holds exactly for `r <= 1/b`
    /// and `a(r) = F(r)/r^s` is exactly log-periodic with period `ln b`.
    pub fn renewal(mu: &MeasureModel) -> Result<Self> {
        let axis = single_digit_axis(mu)?;
        let law = PairLaw::new(axis);
        let b = axis.base();
        let (lo, hi) = ((b as f64).powi(-2), (b as f64).powi(-1));
        let table: Vec<(f64, f64)> = (0..=256)
            .map(|i| {
                let r = lo * (hi / lo).powf(i as f64 / 256.0);
                (r, law.cdf(r, PairMetric::Euclidean))
            })
            .collect();
        let mass = mu.total_mass();
        Ok(DistanceProfile {
            kind: ProfileKind::Renewal {
                law,
                base: b,
                branch_count: axis.digits().len(),
                table,
            },
            s: mu.dimension(),
            mass_sq: mass * mass,
            diam: 1.0,
        })
    }

    /// Exact torus-metric profile of a single-axis digit measure. Unlike
    /// [`DistanceProfile::renewal`] this includes the wrap-around pairs and
    /// therefore matches empirical torus distances and the spectral side.
    pub fn torus_exact(mu: &MeasureModel) -> Result<Self> {
        let axis = single_digit_axis(mu)?;
        let law = PairLaw::new(axis);
        let mass = mu.total_mass();
        Ok(DistanceProfile {
            kind: ProfileKind::DigitExact { law },
            s: mu.dimension(),
            mass_sq: mass * mass,
            diam: 0.5,
        })
    }

    /// Closed-form profile of a subtorus measure: `s = 1` circles (with
    /// optional density modes) and the plain `s = 2` sheet.
    pub fn exact_subtorus(mu: &MeasureModel) -> Result<Self> {
        let (s, modes): (usize, Vec<(f64, f64)>) = match mu {
            MeasureModel::SubtorusLebesgue { s, .. } => (*s, Vec::new()),
            MeasureModel::FourierWeighted { s, modes, .. } => {
                (*s, modes.iter().map(|m| (m.norm(), m.amplitude)).collect())
            }
            _ => {
                return Err(Error::Unsupported(
                    "closed-form profiles exist for subtorus measures only".into(),
                ))
            }
        };
        match (s, modes.is_empty()) {
            (1, _) => {}
            (2, true) => {}
            _ => {
                return Err(Error::Unsupported(format!(
                    "no closed-form profile for s = {s} with density modes"
                )))
            }
        }
        let diam = if s == 1 { 0.5 } else { 0.5 * 2f64.sqrt() };
        Ok(DistanceProfile {
            kind: ProfileKind::ExactSubtorus { s, modes },
            s: s as f64,
            mass_sq: 1.0,
            diam,
        })
    }

    /// Piecewise-constant levels on log-scale blocks: `F(r) = level(r) r^s`
    /// with level transitions smoothed over log ramps. `blocks` are
    /// `(r_break, level)` with strictly decreasing breakpoints; level `i`
    /// rules on `[r_{i+1}, r_i)`, the first level extends up to `diam` and
    /// the last one down to 0. Rejects configurations where an upward level
    /// jump (as r decreases) is too steep for `F` to stay nondecreasing.
    pub fn synthetic_blocks(blocks: &[(f64, f64)], s: f64, diam: f64) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidModel("no blocks".into()));
        }
        if !(s > 0.0) || !(diam > 0.0) {
            return Err(Error::InvalidModel("need s > 0 and diam > 0".into()));
        }
        for w in blocks.windows(2) {
            if w[1].0 >= w[0].0 {
                return Err(Error::InvalidModel("breakpoints must strictly decrease".into()));
            }
        }
        if blocks.iter().any(|&(r, l)| r <= 0.0 || r > diam || l <= 0.0) {
            return Err(Error::InvalidModel("breakpoints in (0, diam], levels > 0".into()));
        }
        // nodes in (ln r, ln level), descending ln r; ramps replace jumps
        let mut nodes: Vec<(f64, f64)> = Vec::new();
        nodes.push((diam.ln(), blocks[0].1.ln()));
        for i in 0..blocks.len() - 1 {
            let v_break = blocks[i + 1].0.ln();
            let (l_hi, l_lo) = (blocks[i].1.ln(), blocks[i + 1].1.ln());
            if (l_hi - l_lo).abs() < 1e-15 {
                continue;
            }
            // ramp spans [v_break, v_break + h]: level l_hi above, l_lo below
            let gap = nodes.last().unwrap().0 - v_break;
            let mut h = (10f64.ln()).min(0.5 * gap);
            // monotone F needs d(ln level)/d(ln r) >= -s on the ramp
            let needed = (l_lo - l_hi) / s;
            if needed > 0.0 {
                // level jumps up as r decreases
                if needed > 0.95 * gap {
                    return Err(Error::InvalidModel(format!(
                        "level jump at r = {} too steep for a nondecreasing F",
                        blocks[i + 1].0
                    )));
                }
                h = h.max(1.05 * needed);
            }
            nodes.push((v_break + h, l_hi));
            nodes.push((v_break, l_lo));
        }
        let last_level = blocks.last().unwrap().1.ln();
        let v_end = nodes.last().unwrap().0 - 1.0;
        nodes.push((v_end, last_level));
        let mass_sq = blocks[0].1 * diam.powf(s);
        Ok(DistanceProfile {
            kind: ProfileKind::Synthetic { nodes },
            s,
            mass_sq,
            diam,
        })
    }

    /// Constant-level synthetic profile: `F(r) = level * r^s`.
    pub fn synthetic_const(level: f64, s: f64, diam: f64) -> Result<Self> {
        Self::synthetic_blocks(&[(diam, level)], s, diam)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn mass_sq(&self) -> f64 {
        self.mass_sq
    }

    pub fn diam(&self) -> f64 {
        self.diam
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            ProfileKind::Empirical { .. } => "empirical",
            ProfileKind::Renewal { .. } => "renewal",
            ProfileKind::DigitExact { .. } => "torus-exact",
            ProfileKind::ExactSubtorus { .. } => "exact-subtorus",
            ProfileKind::Synthetic { .. } => "synthetic",
        }
    }

    fn synthetic_level(nodes: &[(f64, f64)], v: f64) -> f64 {
        // nodes descend in v = ln r; clamp outside, interpolate inside
        if v >= nodes[0].0 {
            return nodes[0].1.exp();
        }
        if v <= nodes[nodes.len() - 1].0 {
            return nodes[nodes.len() - 1].1.exp();
        }
        for w in nodes.windows(2) {
            if v <= w[0].0 && v >= w[1].0 {
                let t = (v - w[1].0) / (w[0].0 - w[1].0);
                return (w[1].1 + t * (w[0].1 - w[1].1)).exp();
            }
        }
        nodes[nodes.len() - 1].1.exp()
    }

    /// `F(r)`: the pair mass at distance `<= r`. Clamps to `[0, mass_sq]`
    /// outside `(0, diam)`.
    pub fn f_at(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        if r >= self.diam {
            return self.mass_sq;
        }
        match &self.kind {
            ProfileKind::Empirical { dists, .. } => {
                let cnt = dists.partition_point(|&d| d <= r);
                self.mass_sq * cnt as f64 / dists.len() as f64
            }
            ProfileKind::Renewal { law, base, branch_count, .. } => {
                // canonical reduction into the base period (1/b, 1]
                let b = *base as f64;
                let mut y = r;
                let mut scale = 1.0f64;
                let inv = 1.0 / *branch_count as f64;
                while y <= 1.0 / b {
                    y *= b;
                    scale *= inv;
                    if scale < 1e-300 {
                        return 0.0;
                    }
                }
                self.mass_sq * scale * law.cdf(y, PairMetric::Euclidean)
            }
            ProfileKind::DigitExact { law } => self.mass_sq * law.cdf(r, PairMetric::Torus),
            ProfileKind::ExactSubtorus { s, modes } => {
                self.mass_sq
                    * match s {
                        1 => {
                            let mut f = 2.0 * r;
                            for &(kn, a) in modes {
                                f += a * a * (2.0 * PI * kn * r).sin() / (2.0 * PI * kn);
                            }
                            f
                        }
                        _ => {
                            if r <= 0.5 {
                                PI * r * r
                            } else {
                                // disk area clipped to the unit square
                                let seg = r * r * (0.5 / r).acos()
                                    - 0.5 * (r * r - 0.25).sqrt();
                                PI * r * r - 4.0 * seg
                            }
                        }
                    }
            }
            ProfileKind::Synthetic { nodes } => {
                Self::synthetic_level(nodes, r.ln()) * r.powf(self.s)
            }
        }
    }

    /// Normalized coefficient `a(r) = F(r) / r^s`.
    pub fn coeff_a(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::domain("normalized_coefficient", format!("r = {r} not > 0")));
        }
        Ok(self.f_at(r) / r.powf(self.s))
    }

    /// Gaussian pair average `G(t) = int_0^diam exp(-r^2/(4t)) dF(r)`.
    pub fn gaussian_average(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::domain("gaussian_average", format!("t = {t} not in (0, 1]")));
        }
        Ok(match &self.kind {
            ProfileKind::Empirical { dists, .. } => {
                // exact Stieltjes sum over the sample; chunked fixed-order
                // reduction keeps the result independent of thread count
                let inv4t = 1.0 / (4.0 * t);
                let partials: Vec<f64> = dists
                    .par_chunks(1 << 13)
                    .map(|c| c.iter().map(|&d| (-d * d * inv4t).exp()).sum::<f64>())
                    .collect();
                self.mass_sq * partials.iter().sum::<f64>() / dists.len() as f64
            }
            ProfileKind::Renewal { law, .. } => {
                self.mass_sq * law.gaussian(t, PairMetric::Euclidean)
            }
            ProfileKind::DigitExact { law } => self.mass_sq * law.gaussian(t, PairMetric::Torus),
            ProfileKind::ExactSubtorus { s, modes } => {
                let sq = t.sqrt();
                match s {
                    1 => {
                        // dF = (2 + sum a^2 cos(2 pi k r)) dr on [0, 1/2]
                        let top = 0.5f64.min(45.0 * sq);
                        let kmax = modes.iter().map(|m| m.0).fold(0.0, f64::max);
                        let panels =
                            64usize.max((6.0 * kmax * top).ceil() as usize).min(40_000);
                        let f = |r: f64| {
                            let mut d = 2.0;
                            for &(kn, a) in modes {
                                d += a * a * (2.0 * PI * kn * r).cos();
                            }
                            (-r * r / (4.0 * t)).exp() * d
                        };
                        self.mass_sq * composite_gl16(&f, 0.0, top, panels)
                    }
                    _ => {
                        // dF = 2 pi r dr up to 1/2, then (2 pi - 8 acos(1/(2r))) r dr
                        let inner = 4.0 * PI * t * (1.0 - (-1.0 / (16.0 * t)).exp());
                        let outer = if 45.0 * sq > 0.5 {
                            let f = |r: f64| {
                                (-r * r / (4.0 * t)).exp()
                                    * (2.0 * PI - 8.0 * (0.5 / r).acos())
                                    * r
                            };
                            composite_gl16(&f, 0.5, self.diam, 256)
                        } else {
                            0.0
                        };
                        self.mass_sq * (inner + outer)
                    }
                }
            }
            ProfileKind::Synthetic { nodes } => {
                // scaled form: G = t^(s/2) int w_s(u) a(sqrt(t) u) du + boundary
                let sq = t.sqrt();
                let umax = 45f64.min(self.diam / sq);
                // panel splits at the level nodes (mapped to u) keep the
                // integrand piecewise smooth
                let mut splits: Vec<f64> = vec![0.0, umax];
                for &(v, _) in nodes {
                    let u = (v.exp()) / sq;
                    if u > 1e-12 && u < umax {
                        splits.push(u);
                    }
                }
                splits.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let f = |u: f64| {
                    if u <= 0.0 {
                        return 0.0;
                    }
                    scale_weight(self.s, u) * Self::synthetic_level(nodes, (sq * u).ln())
                };
                let mut acc = 0.0;
                for w in splits.windows(2) {
                    if w[1] > w[0] + 1e-15 {
                        acc += composite_gl16(&f, w[0], w[1], 48);
                    }
                }
                t.powf(0.5 * self.s) * acc
                    + (-self.diam * self.diam / (4.0 * t)).exp() * self.mass_sq
            }
        })
    }

    /// Min and max of `a(r)` over a 200-point log-uniform grid in
    /// `[r_min, r_max]`.
    pub fn density_window(&self, r_min: f64, r_max: f64) -> Result<(f64, f64)> {
        if !(r_min > 0.0 && r_min < r_max && r_max <= self.diam + 1e-12) {
            return Err(Error::domain(
                "density_window",
                format!("need 0 < r_min < r_max <= diam, got [{r_min}, {r_max}]"),
            ));
        }
        let n = 200;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..=n {
            let r = r_min * (r_max / r_min).powf(i as f64 / n as f64);
            let a = self.coeff_a(r)?;
            lo = lo.min(a);
            hi = hi.max(a);
        }
        Ok((lo, hi))
    }

    /// Layer-cake Riesz energy
    /// `I_u = int_0^diam u r^(-u-1) F(r) dr + mass^2 diam^(-u)`, `0 < u < s`.
    pub fn riesz_layercake(&self, u: f64) -> Result<EnergyEstimate> {
        if !(u > 0.0 && u < self.s) {
            return Err(Error::domain(
                "riesz_energy_layercake",
                format!("u = {u} outside (0, s = {})", self.s),
            ));
        }
        let boundary = self.mass_sq * self.diam.powf(-u);
        let value = match &self.kind {
            ProfileKind::Empirical { dists, .. } => {
                // step-exact sum plus a power-law head below the resolution
                let n = dists.len() as f64;
                let r0 = dists[0].max(1e-300);
                let a0 = (self.mass_sq / n) / r0.powf(self.s);
                let head = a0 * u * r0.powf(self.s - u) / (self.s - u);
                let mut acc = 0.0;
                let mut prev = r0;
                let mut count = 0usize;
                for &d in dists.iter() {
                    if d > prev {
                        let f = self.mass_sq * count as f64 / n;
                        acc += f * (prev.powf(-u) - d.powf(-u));
                        prev = d;
                    }
                    count += 1;
                }
                acc += self.mass_sq * (prev.powf(-u) - self.diam.powf(-u));
                head + acc + boundary
            }
            ProfileKind::Renewal { base, branch_count, .. } => {
                // self-similarity turns the small-r tail into a geometric sum
                let b = *base as f64;
                let rho = b.powf(u) / *branch_count as f64;
                let top = self.log_layercake(u, 1.0 / b, self.diam, 2048);
                let period = self.log_layercake(u, 1.0 / (b * b), 1.0 / b, 2048);
                top + period / (1.0 - rho) + boundary
            }
            ProfileKind::DigitExact { law } => {
                // wrap pairs decay like r^(2s), so below a period-aligned
                // cutoff the separated renewal law is correct to a relative
                // O(r_cut^s) and its geometric series sums the tail exactly
                let b = law.base() as f64;
                let branches = law.branch_count() as f64;
                let rho = b.powf(u) / branches;
                let cut_pow = 15i32;
                let r_cut = b.powi(-(cut_pow + 1));
                let main = self.log_layercake(u, r_cut, self.diam, 6144);
                let period = |lo: f64, hi: f64| {
                    let g = |v: f64| {
                        let r = v.exp();
                        u * (-u * v).exp() * self.mass_sq * law.cdf(r, PairMetric::Euclidean)
                    };
                    composite_gl16(&g, lo.ln(), hi.ln(), 2048)
                };
                let j0 = period(b.powi(-2), b.powi(-1));
                let tail = j0 * rho.powi(cut_pow) / (1.0 - rho);
                main + tail + boundary
            }
            ProfileKind::ExactSubtorus { .. } | ProfileKind::Synthetic { .. } => {
                let delta = 1e-6 * self.diam;
                let a0 = self.coeff_a(delta)?;
                let head = a0 * u * delta.powf(self.s - u) / (self.s - u);
                head + self.log_layercake(u, delta, self.diam, 2048) + boundary
            }
        };
        Ok(EnergyEstimate { u, value, method: EnergyMethod::Layercake, stderr: None })
    }

    /// `int u r^(-u-1) F(r) dr` over `[lo, hi]`, integrated in log space.
    fn log_layercake(&self, u: f64, lo: f64, hi: f64, panels: usize) -> f64 {
        let g = |v: f64| {
            let r = v.exp();
            u * (-u * v).exp() * self.f_at(r)
        };
        composite_gl16(&g, lo.ln(), hi.ln(), panels)
    }

    /// `(r, F(r), a(r))` rows for CSV export.
    pub fn rows(&self, grid: &[f64]) -> Vec<[f64; 3]> {
        grid.iter()
            .map(|&r| {
                let f = self.f_at(r);
                [r, f, f / r.powf(self.s)]
            })
            .collect()
    }

    /// The stored one-period base table (renewal profiles only).
    pub fn base_table(&self) -> Option<&[(f64, f64)]> {
        match &self.kind {
            ProfileKind::Renewal { table, .. } => Some(table),
            _ => None,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match &self.kind {
            ProfileKind::Empirical { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    /// Monte Carlo standard error of `F(r)` for empirical profiles.
    pub fn f_stderr(&self, r: f64) -> Option<f64> {
        match &self.kind {
            ProfileKind::Empirical { dists, .. } => {
                let n = dists.len() as f64;
                let p = self.f_at(r) / self.mass_sq;
                Some(self.mass_sq * (p * (1.0 - p) / n).sqrt())
            }
            _ => None,
        }
    }
}

/// Monte Carlo Riesz energy: sample mean of `d(x,y)^(-u)` scaled by the
/// squared total mass, with the sample standard error.
pub fn riesz_energy_montecarlo(
    mu: &MeasureModel,
    u: f64,
    pair_count: usize,
    seed: u64,
) -> Result<EnergyEstimate> {
    if !(u > 0.0 && u < mu.dimension()) {
        return Err(Error::domain(
            "riesz_energy_montecarlo",
            format!("u = {u} outside (0, dim = {})", mu.dimension()),
        ));
    }
    if pair_count < 10_000 {
        return Err(Error::domain("riesz_energy_montecarlo", "need at least 1e4 pairs"));
    }
    let pts = mu.sample(seed, 2 * pair_count);
    let sums: Vec<(f64, f64)> = (0..pair_count)
        .into_par_iter()
        .chunks(1 << 13)
        .map(|idx| {
            let mut s = 0.0;
            let mut s2 = 0.0;
            for i in idx {
                let d = pts[2 * i].dist(&pts[2 * i + 1]).max(1e-300);
                let y = d.powf(-u);
                s += y;
                s2 += y * y;
            }
            (s, s2)
        })
        .collect();
    let n = pair_count as f64;
    let sum: f64 = sums.iter().map(|&(a, _)| a).sum();
    let sum2: f64 = sums.iter().map(|&(_, b)| b).sum();
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0);
    let mass_sq = mu.total_mass() * mu.total_mass();
    Ok(EnergyEstimate {
        u,
        value: mass_sq * mean,
        method: EnergyMethod::MonteCarlo,
        stderr: Some(mass_sq * (var / n).sqrt()),
    })
}

/// Mass of the scale weight `w_s` outside `[1/40, 40]`; the slack allowed in
/// window-based sandwich bounds for `G(t)/t^(s/2)`.
pub fn scale_weight_tail_mass(s: f64) -> f64 {
    adaptive_simpson(&|u| scale_weight(s, u), 0.0, 1.0 / 40.0, 1e-14)
        + adaptive_simpson(&|u| scale_weight(s, u), 40.0, 80.0, 1e-14)
}
