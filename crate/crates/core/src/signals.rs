//! Deterministic, seedable driver-pattern generators, noise injection,
//! and the (phase-aligned) NRMSE comparison metric.

use crate::error::{Error, Result};
use crate::linalg::CubicSpline;
use crate::rng::{RootSeed, SeedRng};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Default number of emitted samples discarded from ODE-derived
/// generators before recording starts.
pub const DEFAULT_BURN_IN: usize = 500;

/// What kind of driver pattern to generate.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PatternKind {
    /// `sin(2 pi n / period)`, one channel.
    Sine { period: f64 },
    /// Integer-periodic pattern with values drawn uniformly and then
    /// shift-scaled so that min/max hit exactly `lo`/`hi`.
    RandomPeriodic {
        period: usize,
        seed: u64,
        lo: f64,
        hi: f64,
    },
    /// Weighted sum of sines: `sum_k w_k sin(2 pi n / period_k + phase_k)`.
    SineMix {
        weights: Vec<f64>,
        periods: Vec<f64>,
        phases: Vec<f64>,
    },
    /// Lorenz system, Euler step 1/200, subsampled by 15; channels (x, z)
    /// normalized to `[0, 1]`.
    Lorenz { burn_in: usize },
    /// Roessler system, Euler step 1/200, subsampled by 150; channels
    /// (x, y) normalized to `[0, 1]`.
    Roessler { burn_in: usize },
    /// Mackey-Glass delay system, Euler step 1/10; channels
    /// (x(t), x(t - tau)) normalized to `[0, 1]`.
    MackeyGlass { burn_in: usize },
    /// Henon map; channels (x, y) normalized to `[0, 1]`.
    Henon { burn_in: usize },
    /// Sine whose instantaneous period ramps between two values under a
    /// per-step mixture schedule `mu` (0 = `period_from`, 1 = `period_to`).
    SineFreqMorph {
        period_from: f64,
        period_to: f64,
        mu: Vec<f64>,
    },
    /// Per-step value blend `(1 - mu) a + mu b` of two equally shaped
    /// base patterns.
    Blend {
        a: Box<PatternKind>,
        b: Box<PatternKind>,
        mu: Vec<f64>,
    },
}

/// A pattern request: what to generate and for how many steps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternSpec {
    pub kind: PatternKind,
    pub length: usize,
}

impl PatternSpec {
    pub fn new(kind: PatternKind, length: usize) -> Self {
        PatternSpec { kind, length }
    }

    pub fn sine(period: f64, length: usize) -> Self {
        Self::new(PatternKind::Sine { period }, length)
    }

    pub fn random_periodic(period: usize, seed: u64, lo: f64, hi: f64, length: usize) -> Self {
        Self::new(
            PatternKind::RandomPeriodic {
                period,
                seed,
                lo,
                hi,
            },
            length,
        )
    }

    /// Channel count implied by the kind (chaotic generators emit 2).
    pub fn channels(&self) -> usize {
        self.kind.channels()
    }
}

impl PatternKind {
    pub fn channels(&self) -> usize {
        match self {
            PatternKind::Lorenz { .. }
            | PatternKind::Roessler { .. }
            | PatternKind::MackeyGlass { .. }
            | PatternKind::Henon { .. } => 2,
            PatternKind::Blend { a, .. } => a.channels(),
            _ => 1,
        }
    }
}

/// A multichannel discrete-time signal, `channels x length`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Signal {
    data: DMatrix<f64>,
}

impl Signal {
    pub fn from_matrix(data: DMatrix<f64>) -> Self {
        Signal { data }
    }

    pub fn from_channel(values: Vec<f64>) -> Self {
        let n = values.len();
        Signal {
            data: DMatrix::from_row_slice(1, n, &values),
        }
    }

    pub fn channels(&self) -> usize {
        self.data.nrows()
    }

    pub fn len(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.data.ncols() == 0
    }

    /// Sample at step `n` as a column-slice of all channels.
    pub fn sample(&self, n: usize) -> nalgebra::DVectorView<'_, f64> {
        self.data.column(n)
    }

    pub fn value(&self, channel: usize, n: usize) -> f64 {
        self.data[(channel, n)]
    }

    pub fn channel(&self, c: usize) -> Vec<f64> {
        self.data.row(c).iter().cloned().collect()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    /// Population variance per channel.
    pub fn channel_variance(&self, c: usize) -> f64 {
        variance(self.data.row(c).iter().cloned())
    }

    /// Keep steps `[from, to)`.
    pub fn window(&self, from: usize, to: usize) -> Signal {
        Signal {
            data: self.data.columns(from, to - from).into_owned(),
        }
    }

    /// CSV export: one row per timestep, one column per channel.
    pub fn write_csv(&self, mut w: impl Write, header: bool) -> Result<()> {
        if header {
            let names: Vec<String> = (0..self.channels()).map(|c| format!("ch{c}")).collect();
            writeln!(w, "{}", names.join(","))?;
        }
        for n in 0..self.len() {
            let row: Vec<String> = (0..self.channels())
                .map(|c| format!("{}", self.data[(c, n)]))
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Generate the requested pattern. Deterministic for a fixed spec.
pub fn gen(spec: &PatternSpec) -> Result<Signal> {
    if spec.length == 0 {
        return Err(Error::invalid("pattern length must be positive"));
    }
    let l = spec.length;
    let data = gen_kind(&spec.kind, l)?;
    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("pattern generator output".into()));
    }
    Ok(Signal { data })
}

fn gen_kind(kind: &PatternKind, l: usize) -> Result<DMatrix<f64>> {
    match kind {
        PatternKind::Sine { period } => {
            if *period <= 0.0 {
                return Err(Error::invalid("sine period must be positive"));
            }
            Ok(DMatrix::from_fn(1, l, |_, n| {
                (2.0 * std::f64::consts::PI * n as f64 / period).sin()
            }))
        }
        PatternKind::RandomPeriodic {
            period,
            seed,
            lo,
            hi,
        } => {
            if *period == 0 {
                return Err(Error::invalid("random-periodic period must be positive"));
            }
            if !(lo < hi) {
                return Err(Error::invalid("random-periodic needs lo < hi"));
            }
            let mut rng: SeedRng = RootSeed(*seed).stream("random-periodic");
            let mut vals: Vec<f64> = (0..*period).map(|_| rng.random::<f64>()).collect();
            let (vmin, vmax) = vals
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                    (a.min(v), b.max(v))
                });
            if vmax - vmin < 1e-12 {
                // Degenerate draw (period 1 or all-equal): center the value.
                let center = 0.5 * (lo + hi);
                vals.iter_mut().for_each(|v| *v = center);
            } else {
                for v in vals.iter_mut() {
                    *v = lo + (*v - vmin) * (hi - lo) / (vmax - vmin);
                }
            }
            Ok(DMatrix::from_fn(1, l, |_, n| vals[n % period]))
        }
        PatternKind::SineMix {
            weights,
            periods,
            phases,
        } => {
            if weights.len() != periods.len() || weights.len() != phases.len() {
                return Err(Error::invalid("sine-mix component lists must match"));
            }
            if periods.iter().any(|p| *p <= 0.0) {
                return Err(Error::invalid("sine-mix periods must be positive"));
            }
            Ok(DMatrix::from_fn(1, l, |_, n| {
                weights
                    .iter()
                    .zip(periods)
                    .zip(phases)
                    .map(|((w, p), ph)| w * (2.0 * std::f64::consts::PI * n as f64 / p + ph).sin())
                    .sum()
            }))
        }
        PatternKind::Lorenz { burn_in } => {
            let total = l + burn_in;
            let mut s = [10.1, 1.05, 28.04];
            let dt = 1.0 / 200.0;
            let mut out = DMatrix::zeros(2, total);
            for n in 0..total {
                for _ in 0..15 {
                    let [x, y, z] = s;
                    s = [
                        x + dt * 10.0 * (y - x),
                        y + dt * (28.0 * x - y - x * z),
                        z + dt * (x * y - 8.0 / 3.0 * z),
                    ];
                }
                out[(0, n)] = s[0];
                out[(1, n)] = s[2];
            }
            Ok(normalize_01(out.columns(*burn_in, l).into_owned()))
        }
        PatternKind::Roessler { burn_in } => {
            let total = l + burn_in;
            let mut s = [0.6, -2.0, 0.03];
            let dt = 1.0 / 200.0;
            let mut out = DMatrix::zeros(2, total);
            for n in 0..total {
                for _ in 0..150 {
                    let [x, y, z] = s;
                    s = [
                        x + dt * (-(y + z)),
                        y + dt * (x + 0.2 * y),
                        z + dt * (0.2 + x * z - 8.0 * z),
                    ];
                }
                out[(0, n)] = s[0];
                out[(1, n)] = s[1];
            }
            Ok(normalize_01(out.columns(*burn_in, l).into_owned()))
        }
        PatternKind::MackeyGlass { burn_in } => {
            let total = l + burn_in;
            let dt = 0.1;
            let delay_steps = (17.0 / dt) as usize;
            let mut hist: Vec<f64> = vec![1.2; delay_steps + 1];
            let mut x = 1.2;
            let mut out = DMatrix::zeros(2, total);
            for n in 0..total {
                let x_tau = hist[0];
                x += dt * (0.2 * x_tau / (1.0 + x_tau.powi(10)) - 0.1 * x);
                hist.remove(0);
                hist.push(x);
                out[(0, n)] = x;
                out[(1, n)] = hist[0];
            }
            Ok(normalize_01(out.columns(*burn_in, l).into_owned()))
        }
        PatternKind::Henon { burn_in } => {
            let total = l + burn_in;
            let mut x = 0.3;
            let mut y = 0.3;
            let mut out = DMatrix::zeros(2, total);
            for n in 0..total {
                let xn = y + 1.0 - 1.4 * x * x;
                let yn = 0.3 * x;
                x = xn;
                y = yn;
                out[(0, n)] = x;
                out[(1, n)] = y;
            }
            Ok(normalize_01(out.columns(*burn_in, l).into_owned()))
        }
        PatternKind::SineFreqMorph {
            period_from,
            period_to,
            mu,
        } => {
            if *period_from <= 0.0 || *period_to <= 0.0 {
                return Err(Error::invalid("morph periods must be positive"));
            }
            if mu.len() != l {
                return Err(Error::invalid("morph schedule length must equal length"));
            }
            let mut phase = 0.0f64;
            let mut out = DMatrix::zeros(1, l);
            for n in 0..l {
                out[(0, n)] = phase.sin();
                let period = (1.0 - mu[n]) * period_from + mu[n] * period_to;
                phase += 2.0 * std::f64::consts::PI / period;
            }
            Ok(out)
        }
        PatternKind::Blend { a, b, mu } => {
            if mu.len() != l {
                return Err(Error::invalid("blend schedule length must equal length"));
            }
            if a.channels() != b.channels() {
                return Err(Error::dim("blend operands disagree in channels"));
            }
            let sa = gen_kind(a, l)?;
            let sb = gen_kind(b, l)?;
            let mut out = sa.clone();
            for n in 0..l {
                for c in 0..out.nrows() {
                    out[(c, n)] = (1.0 - mu[n]) * sa[(c, n)] + mu[n] * sb[(c, n)];
                }
            }
            Ok(out)
        }
    }
}

fn normalize_01(mut m: DMatrix<f64>) -> DMatrix<f64> {
    for c in 0..m.nrows() {
        let (lo, hi) = m
            .row(c)
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                (a.min(v), b.max(v))
            });
        let span = (hi - lo).max(1e-300);
        for n in 0..m.ncols() {
            m[(c, n)] = (m[(c, n)] - lo) / span;
        }
    }
    m
}

/// A linear ramp schedule: `pre` steps at `from`, `ramp` steps moving
/// linearly to `to`, `post` steps at `to`.
pub fn ramp_schedule(from: f64, to: f64, pre: usize, ramp: usize, post: usize) -> Vec<f64> {
    let mut mu = Vec::with_capacity(pre + ramp + post);
    mu.extend(std::iter::repeat(from).take(pre));
    for i in 0..ramp {
        mu.push(from + (to - from) * i as f64 / (ramp.max(1) - 1).max(1) as f64);
    }
    mu.extend(std::iter::repeat(to).take(post));
    mu
}

/// Additive Gaussian i.i.d. noise scaled per channel so that
/// `signal variance / noise variance = snr`.
pub fn add_noise(signal: &Signal, snr: f64, seed: u64) -> Result<Signal> {
    if !(snr > 0.0) {
        return Err(Error::invalid("snr must be positive"));
    }
    let mut rng = RootSeed(seed).stream("signal-noise");
    let mut data = signal.data.clone();
    for c in 0..signal.channels() {
        let var = signal.channel_variance(c);
        if var <= 0.0 {
            return Err(Error::invalid("cannot scale noise for zero-variance channel"));
        }
        let sd = (var / snr).sqrt();
        for n in 0..signal.len() {
            let z: f64 = StandardNormal.sample(&mut rng);
            data[(c, n)] += sd * z;
        }
    }
    Ok(Signal { data })
}

fn variance(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = values.clone().count() as f64;
    if n == 0.0 {
        return 0.0;
    }
    let mean = values.clone().sum::<f64>() / n;
    values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

/// Plain (unaligned) NRMSE: `sqrt(mean((y - p)^2) / var(p))`, pooled
/// over channels.
pub fn nrmse(target: &Signal, produced: &Signal) -> Result<f64> {
    if target.channels() != produced.channels() || target.len() != produced.len() {
        return Err(Error::dim("nrmse needs equally shaped signals"));
    }
    let mut se = 0.0;
    let mut var = 0.0;
    for c in 0..target.channels() {
        for n in 0..target.len() {
            let d = produced.value(c, n) - target.value(c, n);
            se += d * d;
        }
        var += target.channel_variance(c);
    }
    if var <= 0.0 {
        return Err(Error::invalid("nrmse target has zero variance"));
    }
    let mse = se / (target.len() * target.channels()) as f64;
    Ok((mse / (var / target.channels() as f64)).sqrt())
}

/// Phase-aligned NRMSE for single-channel signals.
///
/// A `template_len`-step template from the start of `target` is shifted
/// over `produced`; integer shifts are compared on the raw samples, and
/// fractional shifts on cubic-spline oversampled versions (factor
/// `oversample`). The minimum over all candidate shifts is returned.
pub fn nrmse_aligned(
    target: &Signal,
    produced: &Signal,
    template_len: usize,
    oversample: usize,
) -> Result<f64> {
    if target.channels() != 1 || produced.channels() != 1 {
        return Err(Error::dim("aligned nrmse works on single-channel signals"));
    }
    if template_len < 4 || target.len() < template_len {
        return Err(Error::invalid("template must hold at least 4 target samples"));
    }
    if produced.len() < template_len {
        return Err(Error::invalid("produced signal shorter than template"));
    }
    if oversample == 0 {
        return Err(Error::invalid("oversample factor must be positive"));
    }
    let tmpl: Vec<f64> = target.channel(0)[..template_len].to_vec();
    let prod: Vec<f64> = produced.channel(0);
    let tmpl_var = variance(tmpl.iter().cloned());
    if tmpl_var <= 0.0 {
        return Err(Error::invalid("aligned nrmse target has zero variance"));
    }

    // Integer-shift candidates on the raw samples.
    let mut best = f64::INFINITY;
    for k in 0..=(prod.len() - template_len) {
        let mse = tmpl
            .iter()
            .zip(&prod[k..k + template_len])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            / template_len as f64;
        best = best.min(mse / tmpl_var);
    }

    // Fractional shifts on the oversampled interior of the template.
    if oversample > 1 && template_len >= 4 && prod.len() >= 4 {
        let knots_t: Vec<f64> = (0..template_len).map(|i| i as f64).collect();
        let sp_t = CubicSpline::fit(&knots_t, &tmpl)?;
        let knots_p: Vec<f64> = (0..prod.len()).map(|i| i as f64).collect();
        let sp_p = CubicSpline::fit(&knots_p, &prod)?;
        // Interior template: knots [1, template_len - 2].
        let t_inner = template_len - 3;
        let nt = t_inner * oversample + 1;
        let tv: Vec<f64> = (0..nt)
            .map(|i| sp_t.eval(1.0 + i as f64 / oversample as f64))
            .collect();
        let tv_var = variance(tv.iter().cloned());
        if tv_var > 0.0 {
            let max_shift = ((prod.len() - 1 - t_inner) as f64 * oversample as f64 - 1.0) as usize;
            for s in 0..=max_shift {
                if s % oversample == 0 {
                    continue; // integer shifts already handled exactly
                }
                let off = s as f64 / oversample as f64;
                let mse = tv
                    .iter()
                    .enumerate()
                    .map(|(i, &t)| {
                        let p = sp_p.eval(off + 1.0 + i as f64 / oversample as f64);
                        (t - p) * (t - p)
                    })
                    .sum::<f64>()
                    / nt as f64;
                best = best.min(mse / tv_var);
            }
        }
    }
    Ok(best.sqrt())
}

/// Mean period of an oscillatory single-channel series, measured from
/// linearly interpolated upward zero crossings of the mean-removed
/// signal. Returns `None` when fewer than two crossings exist.
pub fn estimate_period(values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n < 3 {
        return None;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let mut crossings = Vec::new();
    for i in 1..n {
        let a = values[i - 1] - mean;
        let b = values[i] - mean;
        if a < 0.0 && b >= 0.0 {
            let frac = if (b - a).abs() > 1e-300 { -a / (b - a) } else { 0.0 };
            crossings.push((i - 1) as f64 + frac);
        }
    }
    if crossings.len() < 2 {
        return None;
    }
    let span = crossings.last().unwrap() - crossings.first().unwrap();
    Some(span / (crossings.len() - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sine_period_four_cycles_through_known_values() {
        let s = gen(&PatternSpec::sine(4.0, 8)).unwrap();
        let expect = [0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0];
        for (n, e) in expect.iter().enumerate() {
            assert_relative_eq!(s.value(0, n), *e, epsilon = 1e-12);
        }
    }

    #[test]
    fn lorenz_parameters_and_range() {
        let s = gen(&PatternSpec::new(PatternKind::Lorenz { burn_in: 200 }, 600)).unwrap();
        assert_eq!(s.channels(), 2);
        for c in 0..2 {
            for n in 0..s.len() {
                let v = s.value(c, n);
                assert!((0.0..=1.0).contains(&v));
            }
        }
        // A non-trivial trajectory, not a fixed point.
        assert!(s.channel_variance(0) > 1e-3);
    }

    #[test]
    fn chaotic_generators_emit_unit_range() {
        for kind in [
            PatternKind::Roessler { burn_in: 100 },
            PatternKind::MackeyGlass { burn_in: 100 },
            PatternKind::Henon { burn_in: 100 },
        ] {
            let s = gen(&PatternSpec::new(kind, 400)).unwrap();
            for c in 0..2 {
                let ch = s.channel(c);
                let lo = ch.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = ch.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                assert!(lo >= 0.0 && hi <= 1.0);
                assert_relative_eq!(lo, 0.0, epsilon = 1e-12);
                assert_relative_eq!(hi, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn random_periodic_is_exactly_periodic_and_deterministic() {
        let spec = PatternSpec::random_periodic(5, 77, -0.9, 0.9, 40);
        let s = gen(&spec).unwrap();
        let s2 = gen(&spec).unwrap();
        assert_eq!(s.channel(0), s2.channel(0));
        for n in 0..35 {
            assert_eq!(s.value(0, n), s.value(0, n + 5));
        }
        let ch = s.channel(0);
        let lo = ch.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ch.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_relative_eq!(lo, -0.9, epsilon = 1e-12);
        assert_relative_eq!(hi, 0.9, epsilon = 1e-12);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(gen(&PatternSpec::sine(0.0, 10)).is_err());
        assert!(gen(&PatternSpec::sine(4.0, 0)).is_err());
        assert!(gen(&PatternSpec::random_periodic(0, 1, -1.0, 1.0, 10)).is_err());
    }

    #[test]
    fn noise_variance_matches_snr() {
        // snr 0.5 on a unit-variance signal: noise variance 2 within 5%.
        let n = 20_000;
        let base = Signal::from_channel(
            (0..n)
                .map(|i| 2.0f64.sqrt() * (2.0 * std::f64::consts::PI * i as f64 / 7.3).sin())
                .collect(),
        );
        let var0 = base.channel_variance(0);
        assert_relative_eq!(var0, 1.0, epsilon = 1e-2);
        let noisy = add_noise(&base, 0.5, 99).unwrap();
        let diff: Vec<f64> = noisy
            .channel(0)
            .iter()
            .zip(base.channel(0))
            .map(|(a, b)| a - b)
            .collect();
        let nv = variance(diff.iter().cloned());
        assert!((nv - 2.0).abs() < 0.1, "noise variance {nv}");
        // Determinism under a fixed seed.
        let noisy2 = add_noise(&base, 0.5, 99).unwrap();
        assert_eq!(noisy.channel(0), noisy2.channel(0));
    }

    #[test]
    fn zero_variance_noise_rejected() {
        let flat = Signal::from_channel(vec![1.0; 100]);
        assert!(add_noise(&flat, 1.0, 0).is_err());
    }

    #[test]
    fn plain_nrmse_basics() {
        let p = gen(&PatternSpec::sine(9.3, 400)).unwrap();
        assert_relative_eq!(nrmse(&p, &p).unwrap(), 0.0, epsilon = 1e-15);
        // Constant offset c on a variance-1 signal gives |c|.
        let scaled = Signal::from_channel(
            p.channel(0)
                .iter()
                .map(|v| v * (2.0f64).sqrt() + 0.25)
                .collect(),
        );
        let base = Signal::from_channel(p.channel(0).iter().map(|v| v * (2.0f64).sqrt()).collect());
        assert_relative_eq!(nrmse(&base, &scaled).unwrap(), 0.25, epsilon = 1e-9);
        let flat = Signal::from_channel(vec![0.5; 400]);
        assert!(nrmse(&flat, &p).is_err());
    }

    #[test]
    fn nrmse_uncorrelated_pair_is_sqrt2() {
        // Monte Carlo oracle: two independent unit-variance streams.
        let mut rng = RootSeed(5).stream("nrmse-mc");
        let n = 100_000;
        let a: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let b: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let v = nrmse(&Signal::from_channel(a), &Signal::from_channel(b)).unwrap();
        assert!((v - 2.0f64.sqrt()).abs() < 0.05, "got {v}");
    }

    #[test]
    fn aligned_nrmse_finds_integer_shift_exactly() {
        let long = gen(&PatternSpec::sine(8.83, 500)).unwrap();
        let target = long.window(0, 100);
        let produced = long.window(3, 450);
        let v = nrmse_aligned(&target, &produced, 20, 20).unwrap();
        assert!(v <= 1e-12, "got {v}");
    }

    #[test]
    fn aligned_nrmse_handles_sign_flip_of_alternating_pattern() {
        // Period-2 alternating target; produced = -target aligns after a
        // half-period shift. Exhaustive integer-shift search is the oracle.
        let target = Signal::from_channel((0..60).map(|n| if n % 2 == 0 { 0.8 } else { -0.8 }).collect());
        let produced = Signal::from_channel(target.channel(0).iter().map(|v| -v).collect());
        let v = nrmse_aligned(&target, &produced, 12, 8).unwrap();
        assert!(v <= 1e-12, "got {v}");
    }

    #[test]
    fn aligned_nrmse_fractional_shift_is_small() {
        // Shift by half a step: only the splined search can get close.
        let period = 11.137;
        let a: Vec<f64> = (0..300)
            .map(|n| (2.0 * std::f64::consts::PI * n as f64 / period).sin())
            .collect();
        let b: Vec<f64> = (0..300)
            .map(|n| (2.0 * std::f64::consts::PI * (n as f64 + 0.5) / period).sin())
            .collect();
        let v = nrmse_aligned(
            &Signal::from_channel(a),
            &Signal::from_channel(b),
            30,
            20,
        )
        .unwrap();
        assert!(v < 0.02, "got {v}");
    }

    #[test]
    fn aligned_never_exceeds_plain() {
        let mut rng = RootSeed(8).stream("aligned-prop");
        for _ in 0..20 {
            let p = gen(&PatternSpec::sine(5.0 + 10.0 * rng.random::<f64>(), 120)).unwrap();
            let noisy = add_noise(&p, 1.0 + 4.0 * rng.random::<f64>(), rng.random()).unwrap();
            let plain = nrmse(&p, &noisy).unwrap();
            let aligned = nrmse_aligned(&p, &noisy, p.len(), 10).unwrap();
            assert!(
                aligned <= plain + 1e-12,
                "aligned {aligned} > plain {plain}"
            );
        }
    }

    #[test]
    fn period_estimate_recovers_sine_period() {
        let s = gen(&PatternSpec::sine(8.83, 400)).unwrap();
        let p = estimate_period(&s.channel(0)).unwrap();
        assert!((p - 8.83).abs() < 0.05, "got {p}");
    }

    #[test]
    fn freq_morph_ramps_period() {
        let mu = ramp_schedule(0.0, 1.0, 50, 200, 50);
        let spec = PatternSpec::new(
            PatternKind::SineFreqMorph {
                period_from: 8.0,
                period_to: 12.0,
                mu,
            },
            300,
        );
        let s = gen(&spec).unwrap();
        let head = estimate_period(&s.channel(0)[..50]).unwrap();
        let tail = estimate_period(&s.channel(0)[250..]).unwrap();
        assert!((head - 8.0).abs() < 0.3, "head {head}");
        assert!((tail - 12.0).abs() < 0.5, "tail {tail}");
    }
}
