//! Exact pair-distance laws for digit self-similar axis measures.
//!
//! For an axis measure with base `b` and digit set `D`, two independent
//! points differ by `Z = sum_j (d_j - e_j) b^(-j)` with i.i.d. digit
//! differences. Conditioning on the first `k` digit pairs leaves
//! `Z = m b^(-k) + b^(-k) W` where `m` is an integer prefix offset and `W`
//! is a fresh copy of the full difference law on `[-1, 1]`. Both the CDF
//! and smooth expectations of `Z` can therefore be computed exactly:
//!
//! * the CDF by a threshold-driven state walk that only ever keeps the
//!   handful of prefix offsets whose displacement interval straddles the
//!   threshold (everything else resolves to 0 or 1 immediately);
//! * Gaussian expectations by pushing the offset distribution to a fixed
//!   depth as a dense array and closing each cell with the exact moments
//!   of `W` against derivatives of the Gaussian.
//!
//! The torus metric is handled through the displacement itself
//! (`tau(z) = min(|z|, 1 - |z|)`), so wrap-around pairs - present whenever
//! the digit set touches both ends of `[0, 1]` - are accounted for exactly.

use crate::measures::DigitAxis;

/// Metric on the axis circle used for pair distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMetric {
    /// `min(|z|, 1 - |z|)`: the circle distance, including wrap pairs.
    Torus,
    /// `|z|`: the idealized separated (unwrapped) geometry; this is the
    /// metric under which the renewal recursion `F(r) = F(br)/|D|` is exact.
    Euclidean,
}

/// Exact pair-distance law of one digit axis.
#[derive(Debug, Clone)]
pub struct PairLaw {
    base: u32,
    branches: usize,
    /// digit differences d' - d with probabilities
    diffs: Vec<(i64, f64)>,
    /// even moments E[W^j], j = 0..=8, of the full difference law
    moments: [f64; 9],
}

impl PairLaw {
    pub fn base(&self) -> u32 {
        self.base
    }

    /// Number of digit branches `|D|` of the underlying axis.
    pub fn branch_count(&self) -> usize {
        self.branches
    }

    pub fn new(axis: &DigitAxis) -> Self {
        let digits = axis.digits();
        let p = 1.0 / (digits.len() * digits.len()) as f64;
        let mut diffs: Vec<(i64, f64)> = Vec::new();
        for &d in digits {
            for &e in digits {
                let delta = e as i64 - d as i64;
                match diffs.iter_mut().find(|(v, _)| *v == delta) {
                    Some((_, q)) => *q += p,
                    None => diffs.push((delta, p)),
                }
            }
        }
        diffs.sort_by_key(|&(v, _)| v);
        let moments = Self::difference_moments(axis.base(), &diffs);
        PairLaw { base: axis.base(), branches: digits.len(), diffs, moments }
    }

    /// Even moments of `W = X - Y` from `W = (Delta + W') / b`.
    fn difference_moments(base: u32, diffs: &[(i64, f64)]) -> [f64; 9] {
        let b = base as f64;
        // raw moments of the digit difference (odd ones vanish by symmetry)
        let mut dmom = [0.0f64; 9];
        for j in 0..=8 {
            dmom[j] = diffs.iter().map(|&(v, q)| q * (v as f64).powi(j as i32)).sum();
        }
        let binom = |n: usize, k: usize| -> f64 {
            let mut c = 1.0;
            for i in 0..k {
                c = c * (n - i) as f64 / (i + 1) as f64;
            }
            c
        };
        let mut m = [0.0f64; 9];
        m[0] = 1.0;
        for j in 1..=8 {
            if j % 2 == 1 {
                m[j] = 0.0;
                continue;
            }
            let bj = b.powi(-(j as i32));
            let mut rhs = 0.0;
            for i in 1..=j {
                rhs += binom(j, i) * dmom[i] * m[j - i];
            }
            m[j] = bj * rhs / (1.0 - bj);
        }
        m
    }

    fn metric_range(metric: PairMetric, lo: f64, hi: f64) -> (f64, f64) {
        // distance range of the displacement interval [lo, hi] in [-2, 2]
        let f = |z: f64| -> f64 {
            match metric {
                PairMetric::Euclidean => z.abs(),
                PairMetric::Torus => {
                    let a = z.abs();
                    a.min((1.0 - a).abs().min((2.0 - a).abs()))
                }
            }
        };
        let mut min = f(lo).min(f(hi));
        let mut max = f(lo).max(f(hi));
        // critical points of the metric as a function of the displacement
        for c in [-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0] {
            if lo < c && c < hi {
                min = min.min(f(c));
                max = max.max(f(c));
            }
        }
        (min, max)
    }

    /// Exact CDF `P(dist(X, Y) <= r)` of the pair law under `metric`.
    pub fn cdf(&self, r: f64, metric: PairMetric) -> f64 {
        if r < 0.0 {
            return 0.0;
        }
        let maxdist = match metric {
            PairMetric::Torus => 0.5,
            PairMetric::Euclidean => 1.0,
        };
        if r >= maxdist {
            return 1.0;
        }
        let mut inside = 0.0f64;
        // straddling states at the current depth: (prefix offset, mass)
        let mut states: Vec<(i128, f64)> = vec![(0, 1.0)];
        let mut width = 1.0f64;
        for _depth in 0..75 {
            if states.is_empty() {
                break;
            }
            let mut next: Vec<(i128, f64)> = Vec::with_capacity(states.len() * 2);
            width /= self.base as f64;
            for &(m, mass) in &states {
                for &(delta, q) in &self.diffs {
                    let child = m * self.base as i128 + delta as i128;
                    let lo = (child - 1) as f64 * width;
                    let hi = (child + 1) as f64 * width;
                    let (dmin, dmax) = Self::metric_range(metric, lo, hi);
                    let cmass = mass * q;
                    if dmax <= r {
                        inside += cmass;
                    } else if dmin > r {
                        // outside
                    } else {
                        match next.iter_mut().find(|(v, _)| *v == child) {
                            Some((_, acc)) => *acc += cmass,
                            None => next.push((child, cmass)),
                        }
                    }
                }
            }
            let straddle: f64 = next.iter().map(|&(_, m)| m).sum();
            if straddle < 1e-18 {
                return inside + 0.5 * straddle;
            }
            states = next;
        }
        let rest: f64 = states.iter().map(|&(_, m)| m).sum();
        inside + 0.5 * rest
    }

    /// Exact `E[exp(-dist(X, Y)^2 / (4t))]` under `metric`.
    ///
    /// Pushes the offset distribution to depth `k*` with `b^(-k*)` a small
    /// fraction of `sqrt(t)`, then closes each cell with moments of `W`
    /// against Hermite-weighted Gaussian derivatives. The closure error is
    /// of order `(b^(-k*)/(2 sqrt(t)))^8`, i.e. machine-negligible.
    pub fn gaussian(&self, t: f64, metric: PairMetric) -> f64 {
        assert!(t > 0.0, "t must be positive");
        let b = self.base as f64;
        let sq = t.sqrt();
        // leaf width <= 0.02 sqrt(t), capped to keep the array tractable
        let kstar = ((1.0 / (0.02 * sq)).ln() / b.ln()).ceil().clamp(2.0, 13.0) as u32;
        let width = b.powi(-(kstar as i32));
        let half = self.base.pow(kstar) as i64 - 1;
        let len = (2 * half + 1) as usize;
        let mut arr = vec![1.0f64; 1];
        let mut offset = 0i64; // arr[i] = P(prefix offset = i - offset)
        for _ in 0..kstar {
            let new_offset = offset * self.base as i64 + (self.base as i64 - 1);
            let mut new_arr = vec![0.0f64; (2 * new_offset + 1) as usize];
            for (i, &p) in arr.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                let m = i as i64 - offset;
                for &(delta, q) in &self.diffs {
                    let child = m * self.base as i64 + delta;
                    new_arr[(child + new_offset) as usize] += p * q;
                }
            }
            arr = new_arr;
            offset = new_offset;
        }
        debug_assert_eq!(arr.len(), len);

        // per-cell closure coefficients c_j = (w / (2 sqrt t))^j M_j / j!
        let ratio = width / (2.0 * sq);
        let c2 = ratio.powi(2) * self.moments[2] / 2.0;
        let c4 = ratio.powi(4) * self.moments[4] / 24.0;
        let c6 = ratio.powi(6) * self.moments[6] / 720.0;
        let cell = |z: f64| -> f64 {
            // E[g(z + w W)] for g = exp(-(.)^2/(4t)), even moments only
            let x = z / (2.0 * sq);
            let x2 = x * x;
            if x2 > 700.0 {
                return 0.0;
            }
            let h2 = 4.0 * x2 - 2.0;
            let h4 = (16.0 * x2 - 48.0) * x2 + 12.0;
            let h6 = ((64.0 * x2 - 480.0) * x2 + 720.0) * x2 - 120.0;
            (-x2).exp() * (1.0 + c2 * h2 + c4 * h4 + c6 * h6)
        };
        let mut acc = 0.0;
        for (i, &p) in arr.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let z = (i as i64 - offset) as f64 * width;
            let v = match metric {
                PairMetric::Euclidean => cell(z),
                PairMetric::Torus => {
                    // nearest image of the displacement
                    let zr = z - z.round();
                    cell(zr)
                }
            };
            acc += p * v;
        }
        acc
    }
}
