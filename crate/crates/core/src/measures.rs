//! Measure models on the unit flat torus `T^n = R^n/Z^n`.
//!
//! Every model has exact total mass, exact Fourier coefficients
//! `mu_hat(k) = int e^(-2 pi i k.x) dmu(x)`, seeded sampling from the
//! normalized measure and (exact or certified) geodesic ball masses.
//!
//! Layout convention: the first axes are *tangential* (they carry the
//! support), the trailing axes are *normal* and pinned to fixed offsets.
//! Torus distance is computed coordinatewise as `min(|d|, 1 - |d|)` and
//! combined Euclidean-style.

use crate::error::{Error, Result};
use crate::specfun::{ball_multiplier, ball_volume};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Reduce a coordinate into `[0, 1)`.
pub fn wrap_unit(x: f64) -> f64 {
    let y = x - x.floor();
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

/// Distance between two coordinates on the unit circle.
pub fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    let d = d - d.floor();
    d.min(1.0 - d)
}

/// A point of `T^n`, all coordinates in `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    coords: Vec<f64>,
}

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        TorusPoint { coords: coords.into_iter().map(wrap_unit).collect() }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Geodesic (torus) distance.
    pub fn dist(&self, other: &TorusPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| {
                let d = circle_dist(a, b);
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// One tangential axis of a digit self-similar measure: the uniform measure
/// on points `sum_j d_j b^(-j)` with digits drawn from `digits`.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitAxis {
    base: u32,
    digits: Vec<u32>,
}

impl DigitAxis {
    /// Digit gaps must be >= 2 so distinct depth-1 branches are separated
    /// by at least one empty base-`b` interval.
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        if base < 3 {
            return Err(Error::InvalidModel(format!("digit base {base} < 3")));
        }
        if digits.len() < 2 {
            return Err(Error::InvalidModel("need at least 2 digits".into()));
        }
        let mut sorted = digits.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != digits.len() {
            return Err(Error::InvalidModel("duplicate digits".into()));
        }
        if *sorted.last().unwrap() >= base {
            return Err(Error::InvalidModel("digit out of range".into()));
        }
        for w in sorted.windows(2) {
            if w[1] - w[0] < 2 {
                return Err(Error::InvalidModel(format!(
                    "digit gap {} < 2 between {} and {}",
                    w[1] - w[0],
                    w[0],
                    w[1]
                )));
            }
        }
        Ok(DigitAxis { base, digits: sorted })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Hausdorff dimension `log |D| / log b` of the axis measure.
    pub fn dimension(&self) -> f64 {
        (self.digits.len() as f64).ln() / (self.base as f64).ln()
    }

    /// Whether the support reaches both endpoints of `[0, 1]`, i.e. the
    /// closure wraps through `0 = 1` on the circle.
    pub fn touches_both_ends(&self) -> bool {
        self.digits[0] == 0 && *self.digits.last().unwrap() == self.base - 1
    }

    /// Truncation depth for the Fourier product keeping the multiplicative
    /// tail below ~1e-15: beyond depth J the angles are < b^(-40/ln b) ~ e^-40.
    fn fourier_depth(&self, k: i64) -> u32 {
        let b = self.base as f64;
        if k == 0 {
            return 1;
        }
        let need = ((2.0 * PI * k.unsigned_abs() as f64).ln() / b.ln()).ceil() + 40.0 / b.ln();
        40.max(need as u32 + 1)
    }

    /// Axis Fourier coefficient `c_hat(k) = prod_j mean_d e^(-2 pi i k d b^-j)`.
    pub fn fourier(&self, k: i64) -> Complex64 {
        if k == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let depth = self.fourier_depth(k);
        let inv = 1.0 / self.digits.len() as f64;
        let mut prod = Complex64::new(1.0, 0.0);
        let mut bpow: i128 = 1;
        for _ in 0..depth {
            bpow *= self.base as i128;
            let mut f = Complex64::new(0.0, 0.0);
            for &d in &self.digits {
                // exact integer reduction of k*d/b^j keeps large-k phases clean
                let m = ((k as i128) * (d as i128)).rem_euclid(bpow);
                let ang = 2.0 * PI * (m as f64) / (bpow as f64);
                f += Complex64::new(ang.cos(), -ang.sin());
            }
            prod *= f * inv;
        }
        prod
    }

    /// Measure of `[0, x]` for `x` in `[0, 1]` (exact digit walk).
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let b = self.base as f64;
        let inv = 1.0 / self.digits.len() as f64;
        let mut acc = 0.0;
        let mut scale = 1.0;
        let mut t = x;
        for _ in 0..64 {
            let cell = (t * b).floor().min(b - 1.0);
            let d0 = cell as u32;
            let below = self.digits.iter().filter(|&&d| d < d0).count();
            acc += below as f64 * scale * inv;
            if self.digits.contains(&d0) {
                scale *= inv;
                t = t * b - cell;
                if t <= 0.0 {
                    break;
                }
            } else {
                break;
            }
        }
        acc
    }

    /// Measure of the torus interval of radius `rho` around `x`.
    pub fn interval_mass(&self, x: f64, rho: f64) -> f64 {
        if rho >= 0.5 {
            return 1.0;
        }
        let lo = x - rho;
        let hi = x + rho;
        if lo < 0.0 {
            self.cdf(hi) + (1.0 - self.cdf(lo + 1.0))
        } else if hi > 1.0 {
            (1.0 - self.cdf(lo)) + self.cdf(hi - 1.0)
        } else {
            self.cdf(hi) - self.cdf(lo)
        }
    }

    /// Digits needed so the truncated expansion resolves every f64.
    pub fn sample_depth(&self) -> u32 {
        (52.0 / (self.base as f64).log2()).ceil() as u32
    }

    fn sample_coord(&self, rng: &mut ChaCha8Rng) -> f64 {
        let mut x = 0.0;
        let mut w = 1.0 / self.base as f64;
        for _ in 0..self.sample_depth() {
            let d = self.digits[rng.random_range(0..self.digits.len())];
            x += d as f64 * w;
            w /= self.base as f64;
        }
        x
    }
}

/// One tangential axis: full Lebesgue or a digit fractal.
#[derive(Debug, Clone, PartialEq)]
pub enum AxisSpec {
    Full,
    Digits(DigitAxis),
}

impl AxisSpec {
    pub fn dimension(&self) -> f64 {
        match self {
            AxisSpec::Full => 1.0,
            AxisSpec::Digits(d) => d.dimension(),
        }
    }
}

/// A cosine mode of a weighted density on a subtorus: `a cos(2 pi k . x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub k: Vec<i64>,
    pub amplitude: f64,
}

impl Mode {
    pub fn norm(&self) -> f64 {
        self.k.iter().map(|&c| (c * c) as f64).sum::<f64>().sqrt()
    }
}

/// A finite Borel measure on `T^n` with exact Fourier data.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureModel {
    /// Lebesgue measure on the subtorus `{x : x_j = offset_j, j > s}`.
    SubtorusLebesgue { n: usize, s: usize, normal_offset: Vec<f64> },
    /// Product of per-axis laws on the tangential axes, normal axes pinned.
    DigitSelfSimilar { n: usize, axes: Vec<AxisSpec>, normal_offset: Vec<f64> },
    /// `w dV_H` on a subtorus with `w = 1 + sum a_m cos(2 pi k_m . x)`.
    FourierWeighted { n: usize, s: usize, normal_offset: Vec<f64>, modes: Vec<Mode> },
    /// Sum of measures on a common ambient torus.
    Mixture(Vec<MeasureModel>),
}

impl MeasureModel {
    pub fn subtorus(n: usize, s: usize, normal_offset: Vec<f64>) -> Result<Self> {
        if n < 1 || s < 1 || s >= n {
            return Err(Error::InvalidModel(format!("need 1 <= s < n, got s={s}, n={n}")));
        }
        if normal_offset.len() != n - s {
            return Err(Error::InvalidModel(format!(
                "normal offset has {} coords, expected {}",
                normal_offset.len(),
                n - s
            )));
        }
        Ok(MeasureModel::SubtorusLebesgue {
            n,
            s,
            normal_offset: normal_offset.into_iter().map(wrap_unit).collect(),
        })
    }

    pub fn digit_self_similar(
        n: usize,
        axes: Vec<AxisSpec>,
        normal_offset: Vec<f64>,
    ) -> Result<Self> {
        if axes.is_empty() || axes.len() > n {
            return Err(Error::InvalidModel("need 1..=n tangential axes".into()));
        }
        if normal_offset.len() != n - axes.len() {
            return Err(Error::InvalidModel(format!(
                "normal offset has {} coords, expected {}",
                normal_offset.len(),
                n - axes.len()
            )));
        }
        Ok(MeasureModel::DigitSelfSimilar {
            n,
            axes,
            normal_offset: normal_offset.into_iter().map(wrap_unit).collect(),
        })
    }

    pub fn fourier_weighted(
        n: usize,
        s: usize,
        normal_offset: Vec<f64>,
        modes: Vec<Mode>,
    ) -> Result<Self> {
        let base = Self::subtorus(n, s, normal_offset)?;
        let (n, s, normal_offset) = match base {
            MeasureModel::SubtorusLebesgue { n, s, normal_offset } => (n, s, normal_offset),
            _ => unreachable!(),
        };
        let mut total = 0.0;
        for m in &modes {
            if m.k.len() != s {
                return Err(Error::InvalidModel("mode frequency must be tangential".into()));
            }
            if m.k.iter().all(|&c| c == 0) {
                return Err(Error::InvalidModel("mode frequency must be nonzero".into()));
            }
            if m.amplitude <= 0.0 {
                return Err(Error::InvalidModel("mode amplitude must be positive".into()));
            }
            total += m.amplitude;
        }
        if total > 0.25 + 1e-12 {
            return Err(Error::InvalidModel(format!(
                "sum of amplitudes {total} exceeds 1/4"
            )));
        }
        for i in 0..modes.len() {
            for j in (i + 1)..modes.len() {
                if (modes[i].norm() - modes[j].norm()).abs() < 1e-9 {
                    return Err(Error::InvalidModel(
                        "mode frequency magnitudes must be distinct".into(),
                    ));
                }
            }
        }
        Ok(MeasureModel::FourierWeighted { n, s, normal_offset, modes })
    }

    pub fn mixture(components: Vec<MeasureModel>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidModel("empty mixture".into()));
        }
        let n = components[0].ambient_dim();
        if components.iter().any(|c| c.ambient_dim() != n) {
            return Err(Error::InvalidModel("mixture components must share n".into()));
        }
        Ok(MeasureModel::Mixture(components))
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            MeasureModel::SubtorusLebesgue { n, .. }
            | MeasureModel::DigitSelfSimilar { n, .. }
            | MeasureModel::FourierWeighted { n, .. } => *n,
            MeasureModel::Mixture(cs) => cs[0].ambient_dim(),
        }
    }

    /// Hausdorff dimension of the support measure. For mixtures this is the
    /// smallest component dimension (which governs spectral growth).
    pub fn dimension(&self) -> f64 {
        match self {
            MeasureModel::SubtorusLebesgue { s, .. }
            | MeasureModel::FourierWeighted { s, .. } => *s as f64,
            MeasureModel::DigitSelfSimilar { axes, .. } => {
                axes.iter().map(|a| a.dimension()).sum()
            }
            MeasureModel::Mixture(cs) => {
                cs.iter().map(|c| c.dimension()).fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            MeasureModel::SubtorusLebesgue { .. }
            | MeasureModel::DigitSelfSimilar { .. }
            | MeasureModel::FourierWeighted { .. } => 1.0,
            MeasureModel::Mixture(cs) => cs.iter().map(|c| c.total_mass()).sum(),
        }
    }

    fn normal_phase(normal_offset: &[f64], k_normal: &[i64]) -> Complex64 {
        let ang: f64 = normal_offset
            .iter()
            .zip(k_normal)
            .map(|(&o, &k)| 2.0 * PI * k as f64 * o)
            .sum();
        Complex64::new(ang.cos(), -ang.sin())
    }

    /// Exact `mu_hat(k)`.
    pub fn fourier_coefficient(&self, k: &[i64]) -> Complex64 {
        assert_eq!(k.len(), self.ambient_dim(), "frequency dimension mismatch");
        match self {
            MeasureModel::SubtorusLebesgue { s, normal_offset, .. } => {
                if k[..*s].iter().any(|&c| c != 0) {
                    Complex64::new(0.0, 0.0)
                } else {
                    Self::normal_phase(normal_offset, &k[*s..])
                }
            }
            MeasureModel::DigitSelfSimilar { axes, normal_offset, .. } => {
                let t = axes.len();
                let mut prod = Self::normal_phase(normal_offset, &k[t..]);
                for (i, axis) in axes.iter().enumerate() {
                    match axis {
                        AxisSpec::Full => {
                            if k[i] != 0 {
                                return Complex64::new(0.0, 0.0);
                            }
                        }
                        AxisSpec::Digits(d) => prod *= d.fourier(k[i]),
                    }
                }
                prod
            }
            MeasureModel::FourierWeighted { s, normal_offset, modes, .. } => {
                let phase = Self::normal_phase(normal_offset, &k[*s..]);
                let kt = &k[..*s];
                if kt.iter().all(|&c| c == 0) {
                    return phase;
                }
                for m in modes {
                    let plus = kt.iter().zip(&m.k).all(|(&a, &b)| a == b);
                    let minus = kt.iter().zip(&m.k).all(|(&a, &b)| a == -b);
                    if plus || minus {
                        return phase * (0.5 * m.amplitude);
                    }
                }
                Complex64::new(0.0, 0.0)
            }
            MeasureModel::Mixture(cs) => {
                cs.iter().map(|c| c.fourier_coefficient(k)).sum()
            }
        }
    }

    /// Closed-form averaged density `A = lim F(r) / (vol(B^s) r^s)` when the
    /// measure admits one; `None` for genuinely oscillating (digit) models
    /// and for mixtures of unequal dimensions.
    pub fn averaged_density_exact(&self) -> Option<f64> {
        match self {
            MeasureModel::SubtorusLebesgue { .. } => Some(1.0),
            MeasureModel::FourierWeighted { modes, .. } => {
                let sum_sq: f64 = modes.iter().map(|m| m.amplitude * m.amplitude).sum();
                Some(1.0 + 0.5 * sum_sq)
            }
            MeasureModel::DigitSelfSimilar { axes, .. } => {
                if axes.iter().all(|a| matches!(a, AxisSpec::Full)) {
                    Some(1.0)
                } else {
                    None
                }
            }
            MeasureModel::Mixture(cs) => {
                let dims: Vec<f64> = cs.iter().map(|c| c.dimension()).collect();
                if dims.windows(2).any(|w| (w[0] - w[1]).abs() > 1e-12) {
                    return None;
                }
                cs.iter().map(|c| c.averaged_density_exact()).sum()
            }
        }
    }

    fn sample_one(&self, rng: &mut ChaCha8Rng) -> TorusPoint {
        match self {
            MeasureModel::SubtorusLebesgue { n, s, normal_offset } => {
                let mut c = Vec::with_capacity(*n);
                for _ in 0..*s {
                    c.push(rng.random::<f64>());
                }
                c.extend_from_slice(normal_offset);
                TorusPoint::new(c)
            }
            MeasureModel::DigitSelfSimilar { n, axes, normal_offset } => {
                let mut c = Vec::with_capacity(*n);
                for axis in axes {
                    match axis {
                        AxisSpec::Full => c.push(rng.random::<f64>()),
                        AxisSpec::Digits(d) => c.push(d.sample_coord(rng)),
                    }
                }
                c.extend_from_slice(normal_offset);
                TorusPoint::new(c)
            }
            MeasureModel::FourierWeighted { n, s, normal_offset, modes } => {
                // rejection against the 5/4 envelope (w <= 5/4 since sum a <= 1/4)
                loop {
                    let x: Vec<f64> = (0..*s).map(|_| rng.random::<f64>()).collect();
                    let w = 1.0
                        + modes
                            .iter()
                            .map(|m| {
                                let ang: f64 = m
                                    .k
                                    .iter()
                                    .zip(&x)
                                    .map(|(&ki, &xi)| 2.0 * PI * ki as f64 * xi)
                                    .sum();
                                m.amplitude * ang.cos()
                            })
                            .sum::<f64>();
                    if rng.random::<f64>() * 1.25 <= w {
                        let mut c = Vec::with_capacity(*n);
                        c.extend_from_slice(&x);
                        c.extend_from_slice(normal_offset);
                        return TorusPoint::new(c);
                    }
                }
            }
            MeasureModel::Mixture(cs) => {
                let total = self.total_mass();
                let u = rng.random::<f64>() * total;
                let mut acc = 0.0;
                for c in cs {
                    acc += c.total_mass();
                    if u < acc {
                        return c.sample_one(rng);
                    }
                }
                cs.last().unwrap().sample_one(rng)
            }
        }
    }

    /// `count` i.i.d. draws from the normalized measure. Deterministic for a
    /// given seed, independent of thread count: the work is chunked with one
    /// counter-based stream per chunk and reassembled in chunk order.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<TorusPoint> {
        const CHUNK: usize = 1 << 14;
        let chunks = count.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|ci| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(ci as u64 + 1);
                let take = CHUNK.min(count - ci * CHUNK);
                (0..take).map(|_| self.sample_one(&mut rng)).collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }

    /// Mass of the geodesic ball `B(x, r)`, `0 < r <= 1/2`.
    ///
    /// Exact for Lebesgue-type variants. For digit variants with a single
    /// tangential axis the intersection is an interval and the digit walk is
    /// exact; multi-axis digit supports fall back to a certified tree cover
    /// (midpoint of the bracketing bounds).
    pub fn ball_mass(&self, x: &TorusPoint, r: f64) -> Result<f64> {
        if !(r > 0.0 && r <= 0.5) {
            return Err(Error::domain("ball_mass", format!("r = {r} not in (0, 1/2]")));
        }
        assert_eq!(x.dim(), self.ambient_dim(), "point dimension mismatch");
        match self {
            MeasureModel::SubtorusLebesgue { s, normal_offset, .. } => {
                let rho2 = Self::tangential_radius_sq(x, *s, normal_offset, r);
                Ok(match rho2 {
                    None => 0.0,
                    Some(p2) => ball_volume(*s as f64)? * p2.sqrt().powi(*s as i32),
                })
            }
            MeasureModel::FourierWeighted { s, normal_offset, modes, .. } => {
                let rho2 = Self::tangential_radius_sq(x, *s, normal_offset, r);
                let Some(p2) = rho2 else { return Ok(0.0) };
                let rho = p2.sqrt();
                let lead = ball_volume(*s as f64)? * rho.powi(*s as i32);
                let mut corr = 0.0;
                for m in modes {
                    let tau = 2.0 * PI * m.norm() * rho;
                    let ang: f64 = m
                        .k
                        .iter()
                        .zip(x.coords())
                        .map(|(&ki, &xi)| 2.0 * PI * ki as f64 * xi)
                        .sum();
                    corr += m.amplitude * ball_multiplier(*s as u32, tau)? * ang.cos();
                }
                Ok(lead * (1.0 + corr))
            }
            MeasureModel::DigitSelfSimilar { axes, normal_offset, .. } => {
                let t = axes.len();
                let nd2: f64 = normal_offset
                    .iter()
                    .zip(&x.coords()[t..])
                    .map(|(&o, &xi)| {
                        let d = circle_dist(o, xi);
                        d * d
                    })
                    .sum();
                if nd2 > r * r {
                    return Ok(0.0);
                }
                let rho = (r * r - nd2).sqrt();
                if rho == 0.0 {
                    return Ok(0.0);
                }
                match axes.as_slice() {
                    [AxisSpec::Digits(d)] => Ok(d.interval_mass(x.coords()[0], rho)),
                    [AxisSpec::Full] => Ok((2.0 * rho).min(1.0)),
                    _ => Ok(Self::digit_tree_ball(axes, &x.coords()[..t], rho)),
                }
            }
            MeasureModel::Mixture(cs) => {
                let mut acc = 0.0;
                for c in cs {
                    acc += c.ball_mass(x, r)?;
                }
                Ok(acc)
            }
        }
    }

    fn tangential_radius_sq(
        x: &TorusPoint,
        s: usize,
        normal_offset: &[f64],
        r: f64,
    ) -> Option<f64> {
        let nd2: f64 = normal_offset
            .iter()
            .zip(&x.coords()[s..])
            .map(|(&o, &xi)| {
                let d = circle_dist(o, xi);
                d * d
            })
            .sum();
        if nd2 >= r * r {
            None
        } else {
            Some(r * r - nd2)
        }
    }

    /// Certified tree cover for product supports: recursive cell descent,
    /// boundary cells at the depth cap contribute half their mass.
    fn digit_tree_ball(axes: &[AxisSpec], center: &[f64], rho: f64) -> f64 {
        struct Cell {
            lo: Vec<f64>,
            w: Vec<f64>,
            mass: f64,
        }
        let depth_width: Vec<f64> = axes
            .iter()
            .map(|a| {
                let b = match a {
                    AxisSpec::Full => 3.0,
                    AxisSpec::Digits(d) => d.base() as f64,
                };
                let depth = ((1.0 / rho).ln() / b.ln()).ceil() + 2.0;
                b.powf(-depth)
            })
            .collect();
        let mut inside = 0.0;
        let mut boundary = 0.0;
        let mut stack = vec![Cell {
            lo: vec![0.0; axes.len()],
            w: vec![1.0; axes.len()],
            mass: 1.0,
        }];
        while let Some(c) = stack.pop() {
            // per-axis min/max torus distance from center to the cell interval
            let mut dmin2 = 0.0;
            let mut dmax2 = 0.0;
            for i in 0..axes.len() {
                let (lo, hi) = (c.lo[i], c.lo[i] + c.w[i]);
                let xi = center[i];
                let inside_seg = (xi >= lo && xi <= hi)
                    || (xi + 1.0 >= lo && xi + 1.0 <= hi)
                    || (xi - 1.0 >= lo && xi - 1.0 <= hi);
                let dmin = if inside_seg {
                    0.0
                } else {
                    circle_dist(xi, lo).min(circle_dist(xi, hi))
                };
                let dmax = if c.w[i] >= 1.0 {
                    0.5
                } else {
                    circle_dist(xi, lo).max(circle_dist(xi, hi))
                };
                dmin2 += dmin * dmin;
                dmax2 += dmax * dmax;
            }
            if dmax2 <= rho * rho {
                inside += c.mass;
                continue;
            }
            if dmin2 > rho * rho {
                continue;
            }
            // refine the coarsest axis still above its target width
            let mut split_axis = None;
            let mut worst = 0.0;
            for i in 0..axes.len() {
                if c.w[i] > depth_width[i] && c.w[i] > worst {
                    worst = c.w[i];
                    split_axis = Some(i);
                }
            }
            let Some(i) = split_axis else {
                boundary += c.mass;
                continue;
            };
            match &axes[i] {
                AxisSpec::Full => {
                    for part in 0..3 {
                        let mut lo = c.lo.clone();
                        let mut w = c.w.clone();
                        w[i] /= 3.0;
                        lo[i] += part as f64 * w[i];
                        stack.push(Cell { lo, w, mass: c.mass / 3.0 });
                    }
                }
                AxisSpec::Digits(d) => {
                    let b = d.base() as f64;
                    for &dg in d.digits() {
                        let mut lo = c.lo.clone();
                        let mut w = c.w.clone();
                        w[i] /= b;
                        lo[i] += dg as f64 * w[i];
                        stack.push(Cell { lo, w, mass: c.mass / d.digits().len() as f64 });
                    }
                }
            }
        }
        inside + 0.5 * boundary
    }
}
