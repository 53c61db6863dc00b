//! Seeded simulators for the eleven synthetic data-generating processes.
//!
//! Every recursive model starts from a zero state and discards the first
//! `burn_in` draws. Gaussian innovations come from the Marsaglia polar
//! method on top of a ChaCha8 stream, so a `(spec, cfg)` pair always yields
//! the same series.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tsio::{Dataset, TimeSeries, MIN_LEN};

pub const DEFAULT_BURN_IN: usize = 500;

/// Model family and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    WhiteNoise,
    /// `Y_t = sum_i phi_i Y_{t-i} + e_t`.
    Ar {
        phi: Vec<f64>,
    },
    /// Cumulative sum of an AR(1) with coefficient `phi`.
    Arima {
        phi: f64,
    },
    /// AR(1) filtered through fractional integration of order `d`.
    Arfima {
        phi: f64,
        d: f64,
    },
    /// Two-regime threshold autoregression switching on `Y_{t-1} <= threshold`.
    Setar {
        alpha: f64,
        beta: f64,
        gamma: f64,
        threshold: f64,
    },
    /// Hidden Markov chain with Poisson emissions. Without `initial_state`
    /// the start state is drawn from the stationary distribution.
    PoissonHmm {
        transition: Vec<Vec<f64>>,
        lambdas: Vec<f64>,
        initial_state: Option<usize>,
    },
    Garch {
        omega: f64,
        alpha: f64,
        beta: f64,
    },
    /// Recursion on `log sigma_t^2` with leverage term `gamma`.
    Egarch {
        omega: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    /// Poisson INAR(1) with binomial thinning.
    Inar {
        alpha: f64,
        innovation_mean: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenConfig {
    pub length: usize,
    pub seed: u64,
    pub burn_in: usize,
}

impl GenConfig {
    pub fn new(length: usize, seed: u64) -> Self {
        Self {
            length,
            seed,
            burn_in: DEFAULT_BURN_IN,
        }
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }

    fn total(&self) -> usize {
        self.burn_in + self.length
    }

    fn validate(&self) -> Result<()> {
        if self.length < MIN_LEN {
            return Err(Error::Model(format!(
                "length must be at least {MIN_LEN}, got {}",
                self.length
            )));
        }
        Ok(())
    }
}

/// Standard normal deviates by the Marsaglia polar method.
pub struct GaussianStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.rng.random::<f64>() - 1.0;
            let v = 2.0 * self.rng.random::<f64>() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let m = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * m);
                return u * m;
            }
        }
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Model(format!("{name} must be finite, got {v}")))
    }
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::WhiteNoise => Ok(()),
            ModelSpec::Ar { phi } => phi.iter().try_for_each(|&p| finite("phi", p)),
            ModelSpec::Arima { phi } => finite("phi", *phi),
            ModelSpec::Arfima { phi, d } => {
                finite("phi", *phi)?;
                // d = 0 is accepted: the recursion then collapses to the AR(1).
                if !(0.0..0.5).contains(d) {
                    return Err(Error::Model(format!(
                        "ARFIMA d must lie in [0, 0.5), got {d}"
                    )));
                }
                Ok(())
            }
            ModelSpec::Setar {
                alpha,
                beta,
                gamma,
                threshold,
            } => {
                finite("alpha", *alpha)?;
                finite("beta", *beta)?;
                finite("gamma", *gamma)?;
                finite("threshold", *threshold)
            }
            ModelSpec::PoissonHmm {
                transition,
                lambdas,
                initial_state,
            } => {
                let n = transition.len();
                if n == 0 {
                    return Err(Error::Model("HMM needs at least one state".into()));
                }
                if lambdas.len() != n {
                    return Err(Error::Model(format!(
                        "HMM has {n} states but {} emission means",
                        lambdas.len()
                    )));
                }
                for (i, row) in transition.iter().enumerate() {
                    if row.len() != n {
                        return Err(Error::Model(format!(
                            "transition row {i} has {} entries, expected {n}",
                            row.len()
                        )));
                    }
                    if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                        return Err(Error::Model(format!(
                            "transition row {i} has a negative or non-finite entry"
                        )));
                    }
                    let sum: f64 = row.iter().sum();
                    if (sum - 1.0).abs() > 1e-9 {
                        return Err(Error::Model(format!(
                            "transition row {i} sums to {sum}, expected 1"
                        )));
                    }
                }
                if lambdas.iter().any(|l| !l.is_finite() || *l <= 0.0) {
                    return Err(Error::Model("Poisson means must be positive".into()));
                }
                if initial_state.is_some_and(|s| s >= n) {
                    return Err(Error::Model("initial state out of range".into()));
                }
                Ok(())
            }
            ModelSpec::Garch { omega, alpha, beta } => {
                if !(*omega > 0.0 && omega.is_finite()) {
                    return Err(Error::Model(format!(
                        "GARCH omega must be positive, got {omega}"
                    )));
                }
                if !(*alpha >= 0.0 && *beta >= 0.0) {
                    return Err(Error::Model(
                        "GARCH alpha and beta must be non-negative".into(),
                    ));
                }
                if alpha + beta >= 1.0 {
                    return Err(Error::Model(format!(
                        "GARCH alpha + beta must be below 1, got {}",
                        alpha + beta
                    )));
                }
                Ok(())
            }
            ModelSpec::Egarch {
                omega,
                alpha,
                beta,
                gamma,
            } => {
                finite("omega", *omega)?;
                finite("alpha", *alpha)?;
                finite("gamma", *gamma)?;
                if beta.is_nan() || beta.abs() >= 1.0 {
                    return Err(Error::Model(format!(
                        "EGARCH |beta| must be below 1, got {beta}"
                    )));
                }
                Ok(())
            }
            ModelSpec::Inar {
                alpha,
                innovation_mean,
            } => {
                if !(*alpha > 0.0 && *alpha < 1.0) {
                    return Err(Error::Model(format!(
                        "INAR alpha must lie in (0, 1), got {alpha}"
                    )));
                }
                if !(*innovation_mean > 0.0 && innovation_mean.is_finite()) {
                    return Err(Error::Model("INAR innovation mean must be positive".into()));
                }
                Ok(())
            }
        }
    }
}

/// Simulates one realization. Pure in `(spec, cfg)`.
pub fn generate(spec: &ModelSpec, cfg: &GenConfig) -> Result<TimeSeries> {
    spec.validate()?;
    cfg.validate()?;
    let values = match spec {
        ModelSpec::WhiteNoise => ar_values(&[], cfg),
        ModelSpec::Ar { phi } => ar_values(phi, cfg),
        ModelSpec::Arima { phi } => arima_values(*phi, cfg),
        ModelSpec::Arfima { phi, d } => arfima_values(*phi, *d, cfg),
        ModelSpec::Setar {
            alpha,
            beta,
            gamma,
            threshold,
        } => setar_values(*alpha, *beta, *gamma, *threshold, cfg),
        ModelSpec::PoissonHmm {
            transition,
            lambdas,
            initial_state,
        } => hmm_values(transition, lambdas, *initial_state, cfg),
        ModelSpec::Garch { omega, alpha, beta } => garch_values(*omega, *alpha, *beta, cfg),
        ModelSpec::Egarch {
            omega,
            alpha,
            beta,
            gamma,
        } => egarch_values(*omega, *alpha, *beta, *gamma, cfg),
        ModelSpec::Inar {
            alpha,
            innovation_mean,
        } => inar_values(*alpha, *innovation_mean, cfg),
    };
    TimeSeries::new(format!("seed{}", cfg.seed), values)
}

pub fn gen_ar(phi: &[f64], cfg: &GenConfig) -> Result<TimeSeries> {
    generate(&ModelSpec::Ar { phi: phi.to_vec() }, cfg)
}

pub fn gen_arima(phi: f64, cfg: &GenConfig) -> Result<TimeSeries> {
    generate(&ModelSpec::Arima { phi }, cfg)
}

pub fn gen_arfima(phi: f64, d: f64, cfg: &GenConfig) -> Result<TimeSeries> {
    generate(&ModelSpec::Arfima { phi, d }, cfg)
}

pub fn gen_setar(
    alpha: f64,
    beta: f64,
    gamma: f64,
    threshold: f64,
    cfg: &GenConfig,
) -> Result<TimeSeries> {
    generate(
        &ModelSpec::Setar {
            alpha,
            beta,
            gamma,
            threshold,
        },
        cfg,
    )
}

pub fn gen_hmm_poisson(
    transition: Vec<Vec<f64>>,
    lambdas: Vec<f64>,
    cfg: &GenConfig,
) -> Result<TimeSeries> {
    generate(
        &ModelSpec::PoissonHmm {
            transition,
            lambdas,
            initial_state: None,
        },
        cfg,
    )
}

pub fn gen_garch(omega: f64, alpha: f64, beta: f64, cfg: &GenConfig) -> Result<TimeSeries> {
    generate(&ModelSpec::Garch { omega, alpha, beta }, cfg)
}

pub fn gen_egarch(
    omega: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    cfg: &GenConfig,
) -> Result<TimeSeries> {
    generate(
        &ModelSpec::Egarch {
            omega,
            alpha,
            beta,
            gamma,
        },
        cfg,
    )
}

pub fn gen_inar(alpha: f64, innovation_mean: f64, cfg: &GenConfig) -> Result<TimeSeries> {
    generate(
        &ModelSpec::Inar {
            alpha,
            innovation_mean,
        },
        cfg,
    )
}

fn drop_burn_in(mut full: Vec<f64>, cfg: &GenConfig) -> Vec<f64> {
    full.drain(..cfg.burn_in);
    full
}

fn ar_raw(phi: &[f64], cfg: &GenConfig) -> Vec<f64> {
    let mut z = GaussianStream::new(cfg.seed);
    let n = cfg.total();
    let mut y = Vec::with_capacity(n);
    for t in 0..n {
        let mut v = z.sample();
        for (i, p) in phi.iter().enumerate() {
            if t > i {
                v += p * y[t - 1 - i];
            }
        }
        y.push(v);
    }
    y
}

fn ar_values(phi: &[f64], cfg: &GenConfig) -> Vec<f64> {
    drop_burn_in(ar_raw(phi, cfg), cfg)
}

fn arima_values(phi: f64, cfg: &GenConfig) -> Vec<f64> {
    let mut level = 0.0;
    ar_values(&[phi], cfg)
        .into_iter()
        .map(|x| {
            level += x;
            level
        })
        .collect()
}

/// `(1 - phi B)(1 - B)^d Y = e`: the AR(1) output `x` is passed through the
/// truncated AR(inf) expansion of `(1 - B)^d`, i.e.
/// `Y_t = x_t - sum_{k>=1} pi_k Y_{t-k}` over the whole simulated history.
fn arfima_values(phi: f64, d: f64, cfg: &GenConfig) -> Vec<f64> {
    let x = ar_raw(&[phi], cfg);
    let n = x.len();
    let mut pi = vec![1.0; n];
    for k in 1..n {
        pi[k] = pi[k - 1] * ((k as f64 - 1.0 - d) / k as f64);
    }
    let mut y = Vec::with_capacity(n);
    for t in 0..n {
        let mut acc = 0.0;
        for k in 1..=t {
            acc += pi[k] * y[t - k];
        }
        y.push(x[t] - acc);
    }
    drop_burn_in(y, cfg)
}

fn setar_values(alpha: f64, beta: f64, gamma: f64, threshold: f64, cfg: &GenConfig) -> Vec<f64> {
    let mut z = GaussianStream::new(cfg.seed);
    let mut prev = 0.0;
    let y = (0..cfg.total())
        .map(|_| {
            let e = z.sample();
            prev = if prev <= threshold {
                alpha * prev + e
            } else {
                beta * prev + gamma * e
            };
            prev
        })
        .collect();
    drop_burn_in(y, cfg)
}

fn stationary_distribution(transition: &[Vec<f64>]) -> Vec<f64> {
    let n = transition.len();
    let mut pi = vec![1.0 / n as f64; n];
    for _ in 0..100_000 {
        let mut next = vec![0.0; n];
        for (i, row) in transition.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                next[j] += pi[i] * p;
            }
        }
        let delta: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        pi = next;
        if delta < 1e-15 {
            break;
        }
    }
    let total: f64 = pi.iter().sum();
    pi.iter().map(|p| p / total).collect()
}

fn sample_categorical(rng: &mut ChaCha8Rng, probs: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // Rounding left the cumulative sum short of 1: fall back to the last
    // state with positive mass.
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

fn hmm_values(
    transition: &[Vec<f64>],
    lambdas: &[f64],
    initial: Option<usize>,
    cfg: &GenConfig,
) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let emissions: Vec<Poisson<f64>> = lambdas
        .iter()
        .map(|&l| Poisson::new(l).expect("validated Poisson mean"))
        .collect();
    let mut state = match initial {
        Some(s) => s,
        None => sample_categorical(&mut rng, &stationary_distribution(transition)),
    };
    let mut y = Vec::with_capacity(cfg.total());
    for t in 0..cfg.total() {
        if t > 0 {
            state = sample_categorical(&mut rng, &transition[state]);
        }
        y.push(emissions[state].sample(&mut rng));
    }
    drop_burn_in(y, cfg)
}

fn garch_values(omega: f64, alpha: f64, beta: f64, cfg: &GenConfig) -> Vec<f64> {
    let mut z = GaussianStream::new(cfg.seed);
    let (mut prev_eps, mut prev_var) = (0.0, 0.0);
    let y = (0..cfg.total())
        .map(|_| {
            let var = omega + alpha * prev_eps * prev_eps + beta * prev_var;
            let eps = var.sqrt() * z.sample();
            prev_eps = eps;
            prev_var = var;
            eps
        })
        .collect();
    drop_burn_in(y, cfg)
}

fn egarch_values(omega: f64, alpha: f64, beta: f64, gamma: f64, cfg: &GenConfig) -> Vec<f64> {
    let mut z = GaussianStream::new(cfg.seed);
    let (mut prev_z, mut prev_log_var) = (0.0_f64, 0.0_f64);
    let y = (0..cfg.total())
        .map(|_| {
            let log_var = omega + alpha * prev_z.abs() + beta * prev_log_var + gamma * prev_z;
            let shock = z.sample();
            prev_z = shock;
            prev_log_var = log_var;
            (0.5 * log_var).exp() * shock
        })
        .collect();
    drop_burn_in(y, cfg)
}

fn inar_values(alpha: f64, innovation_mean: f64, cfg: &GenConfig) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let arrivals = Poisson::new(innovation_mean).expect("validated Poisson mean");
    let mut prev: u64 = 0;
    let y = (0..cfg.total())
        .map(|_| {
            let survivors = (0..prev).filter(|_| rng.random::<f64>() < alpha).count() as u64;
            prev = survivors + arrivals.sample(&mut rng) as u64;
            prev as f64
        })
        .collect();
    drop_burn_in(y, cfg)
}

/// The eleven parameterizations used for the synthetic benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    Wn,
    Ar1Neg,
    Ar1Pos,
    Ar2,
    Arima,
    Arfima,
    Setar,
    Hmm,
    Garch,
    Egarch,
    Inar,
}

impl Preset {
    pub const ALL: [Preset; 11] = [
        Preset::Wn,
        Preset::Ar1Neg,
        Preset::Ar1Pos,
        Preset::Ar2,
        Preset::Arima,
        Preset::Arfima,
        Preset::Setar,
        Preset::Hmm,
        Preset::Garch,
        Preset::Egarch,
        Preset::Inar,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Preset::Wn => "wn",
            Preset::Ar1Neg => "ar1_neg",
            Preset::Ar1Pos => "ar1_pos",
            Preset::Ar2 => "ar2",
            Preset::Arima => "arima",
            Preset::Arfima => "arfima",
            Preset::Setar => "setar",
            Preset::Hmm => "hmm",
            Preset::Garch => "garch",
            Preset::Egarch => "egarch",
            Preset::Inar => "inar",
        }
    }

    /// Class label written into generated datasets.
    pub fn label(self) -> &'static str {
        match self {
            Preset::Wn => "WN",
            Preset::Ar1Neg => "AR(1)-0.5",
            Preset::Ar1Pos => "AR(1)0.5",
            Preset::Ar2 => "AR(2)",
            Preset::Arima => "ARIMA",
            Preset::Arfima => "ARFIMA",
            Preset::Setar => "SETAR",
            Preset::Hmm => "HMM",
            Preset::Garch => "GARCH",
            Preset::Egarch => "EGARCH",
            Preset::Inar => "INAR",
        }
    }

    pub fn from_name(name: &str) -> Option<Preset> {
        Preset::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn spec(self) -> ModelSpec {
        match self {
            Preset::Wn => ModelSpec::WhiteNoise,
            Preset::Ar1Neg => ModelSpec::Ar { phi: vec![-0.5] },
            Preset::Ar1Pos => ModelSpec::Ar { phi: vec![0.5] },
            Preset::Ar2 => ModelSpec::Ar {
                phi: vec![1.5, -0.75],
            },
            Preset::Arima => ModelSpec::Arima { phi: 0.7 },
            Preset::Arfima => ModelSpec::Arfima { phi: 0.5, d: 0.4 },
            Preset::Setar => ModelSpec::Setar {
                alpha: 0.5,
                beta: -1.8,
                gamma: 2.0,
                threshold: -1.0,
            },
            Preset::Hmm => ModelSpec::PoissonHmm {
                transition: vec![vec![0.9, 0.1], vec![0.1, 0.9]],
                lambdas: vec![10.0, 15.0],
                initial_state: None,
            },
            Preset::Garch => ModelSpec::Garch {
                omega: 1e-6,
                alpha: 0.1,
                beta: 0.8,
            },
            Preset::Egarch => ModelSpec::Egarch {
                omega: 1e-6 - 0.1 * (2.0 / std::f64::consts::PI).sqrt(),
                alpha: 0.1,
                beta: 0.01,
                gamma: 0.3,
            },
            Preset::Inar => ModelSpec::Inar {
                alpha: 0.5,
                innovation_mean: 1.0,
            },
        }
    }
}

/// Generates `per_model` realizations of each `(label, spec)` pair, in
/// order. Series `i` (0-based over the whole output) uses seed
/// `base_seed + i` and id `row{i}`.
pub fn generate_dataset(
    models: &[(String, ModelSpec)],
    per_model: usize,
    length: usize,
    base_seed: u64,
    burn_in: usize,
) -> Result<Dataset> {
    use rayon::prelude::*;

    let jobs: Vec<(usize, &String, &ModelSpec)> = models
        .iter()
        .flat_map(|(label, spec)| std::iter::repeat_n((label, spec), per_model))
        .enumerate()
        .map(|(i, (l, s))| (i, l, s))
        .collect();
    let series = jobs
        .par_iter()
        .map(|&(i, label, spec)| {
            let cfg =
                GenConfig::new(length, base_seed.wrapping_add(i as u64)).with_burn_in(burn_in);
            let s = generate(spec, &cfg)?;
            Ok(TimeSeries::new(format!("row{i}"), s.values().to_vec())?.with_label(label.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(series)
}

/// Shorthand for [`generate_dataset`] over presets with their default
/// parameters and labels.
pub fn generate_presets(
    presets: &[Preset],
    per_model: usize,
    length: usize,
    base_seed: u64,
) -> Result<Dataset> {
    let models: Vec<_> = presets
        .iter()
        .map(|p| (p.label().to_string(), p.spec()))
        .collect();
    generate_dataset(&models, per_model, length, base_seed, DEFAULT_BURN_IN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean(x: &[f64]) -> f64 {
        x.iter().sum::<f64>() / x.len() as f64
    }

    fn variance(x: &[f64]) -> f64 {
        let m = mean(x);
        x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64
    }

    fn acf(x: &[f64], lag: usize) -> f64 {
        let m = mean(x);
        let denom: f64 = x.iter().map(|v| (v - m).powi(2)).sum();
        let num: f64 = x.windows(lag + 1).map(|w| (w[0] - m) * (w[lag] - m)).sum();
        num / denom
    }

    fn excess_kurtosis(x: &[f64]) -> f64 {
        let m = mean(x);
        let n = x.len() as f64;
        let m2 = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
        let m4 = x.iter().map(|v| (v - m).powi(4)).sum::<f64>() / n;
        m4 / (m2 * m2) - 3.0
    }

    fn cfg(seed: u64) -> GenConfig {
        GenConfig::new(10_000, seed)
    }

    #[test]
    fn white_noise_moments() {
        let y = generate(&ModelSpec::WhiteNoise, &cfg(1)).unwrap();
        let (m, v) = (mean(y.values()), variance(y.values()));
        assert!((-0.05..=0.05).contains(&m), "mean {m}");
        assert!((0.95..=1.05).contains(&v), "variance {v}");
    }

    #[test]
    fn deterministic_per_seed() {
        for preset in Preset::ALL {
            let a = generate(&preset.spec(), &GenConfig::new(300, 42)).unwrap();
            let b = generate(&preset.spec(), &GenConfig::new(300, 42)).unwrap();
            assert_eq!(a.values(), b.values(), "{}", preset.name());
            let c = generate(&preset.spec(), &GenConfig::new(300, 43)).unwrap();
            assert_ne!(a.values(), c.values(), "{}", preset.name());
        }
    }

    #[test]
    fn ar1_lag_one_autocorrelation() {
        let pos = gen_ar(&[0.5], &cfg(3)).unwrap();
        let r = acf(pos.values(), 1);
        assert!((0.45..=0.55).contains(&r), "{r}");
        let neg = gen_ar(&[-0.5], &cfg(3)).unwrap();
        let r = acf(neg.values(), 1);
        assert!((-0.55..=-0.45).contains(&r), "{r}");
    }

    #[test]
    fn ar2_is_pseudo_periodic() {
        // phi = (1.5, -0.75) has complex roots with argument acos(0.866) = pi/6,
        // a 12-sample damped cycle: the ACF dips below zero and swings back.
        let y = gen_ar(&[1.5, -0.75], &cfg(5)).unwrap();
        let r: Vec<f64> = (1..=12).map(|k| acf(y.values(), k)).collect();
        assert!(r[0] > 0.8, "{r:?}");
        assert!(r[5] < -0.3, "lag 6 {r:?}");
        assert!(r[11] > 0.0, "lag 12 {r:?}");
    }

    #[test]
    fn arima_differences_are_ar1() {
        let y = gen_arima(0.7, &cfg(7)).unwrap();
        let diff: Vec<f64> = y.values().windows(2).map(|w| w[1] - w[0]).collect();
        let r = acf(&diff, 1);
        assert!((0.65..=0.75).contains(&r), "{r}");
    }

    #[test]
    fn arima_variance_grows() {
        // Ensemble variance of a random walk grows linearly in t: averaged
        // over the second half it is about three times the first half.
        let runs: Vec<Vec<f64>> = (0..100)
            .map(|seed| {
                gen_arima(0.7, &GenConfig::new(2000, seed))
                    .unwrap()
                    .values()
                    .to_vec()
            })
            .collect();
        let ensemble_var = |t: usize| {
            let m = runs.iter().map(|r| r[t]).sum::<f64>() / runs.len() as f64;
            runs.iter().map(|r| (r[t] - m).powi(2)).sum::<f64>() / (runs.len() - 1) as f64
        };
        let first: f64 = (0..1000).map(ensemble_var).sum();
        let second: f64 = (1000..2000).map(ensemble_var).sum();
        assert!(second > 2.0 * first, "{first} vs {second}");
    }

    #[test]
    fn arfima_with_zero_d_is_ar1() {
        let a = gen_arfima(0.5, 0.0, &GenConfig::new(2000, 11)).unwrap();
        let b = gen_ar(&[0.5], &GenConfig::new(2000, 11)).unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn arfima_has_long_memory() {
        let hits = (0..10)
            .filter(|&seed| acf(gen_arfima(0.5, 0.4, &cfg(seed)).unwrap().values(), 50) > 0.05)
            .count();
        assert!(hits >= 9, "{hits}/10");
    }

    #[test]
    fn arfima_rejects_bad_d() {
        assert!(gen_arfima(0.5, 0.5, &cfg(0)).is_err());
        assert!(gen_arfima(0.5, -0.1, &cfg(0)).is_err());
    }

    #[test]
    fn setar_with_coinciding_regimes_is_ar1() {
        let a = gen_setar(0.5, 0.5, 1.0, -1.0, &GenConfig::new(1000, 2)).unwrap();
        let b = gen_ar(&[0.5], &GenConfig::new(1000, 2)).unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn setar_visits_both_regimes() {
        let y = gen_setar(0.5, -1.8, 2.0, -1.0, &cfg(9)).unwrap();
        let lower = y.values().iter().filter(|&&v| v <= -1.0).count() as f64 / y.len() as f64;
        assert!((0.01..=0.99).contains(&lower), "{lower}");
    }

    #[test]
    fn hmm_mean() {
        let y = gen_hmm_poisson(
            vec![vec![0.9, 0.1], vec![0.1, 0.9]],
            vec![10.0, 15.0],
            &cfg(13),
        )
        .unwrap();
        let m = mean(y.values());
        assert!((12.0..=13.0).contains(&m), "{m}");
        assert!(y.values().iter().all(|v| v.fract() == 0.0 && *v >= 0.0));
    }

    #[test]
    fn hmm_absorbing_chain() {
        let spec = ModelSpec::PoissonHmm {
            transition: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            lambdas: vec![10.0, 15.0],
            initial_state: Some(0),
        };
        let m = mean(generate(&spec, &cfg(17)).unwrap().values());
        assert!((9.7..=10.3).contains(&m), "{m}");
    }

    #[test]
    fn hmm_rows_must_sum_to_one() {
        let err = gen_hmm_poisson(
            vec![vec![0.9, 0.2], vec![0.1, 0.9]],
            vec![10.0, 15.0],
            &cfg(0),
        );
        assert!(err.is_err());
    }

    #[test]
    fn garch_unconditional_variance() {
        let y = gen_garch(1e-6, 0.1, 0.8, &cfg(19)).unwrap();
        let v = variance(y.values());
        assert!((0.7e-5..=1.3e-5).contains(&v), "{v}");
    }

    #[test]
    fn garch_without_dynamics_is_iid() {
        let y = gen_garch(2.0, 0.0, 0.0, &cfg(23)).unwrap();
        let v = variance(y.values());
        assert!((1.9..=2.1).contains(&v), "{v}");
    }

    #[test]
    fn garch_rejects_explosive() {
        assert!(gen_garch(1e-6, 0.5, 0.5, &cfg(0)).is_err());
        assert!(gen_garch(0.0, 0.1, 0.5, &cfg(0)).is_err());
    }

    #[test]
    fn egarch_heavy_tails() {
        let spec = Preset::Egarch.spec();
        let hits = (0..10)
            .filter(|&seed| excess_kurtosis(generate(&spec, &cfg(seed)).unwrap().values()) > 0.0)
            .count();
        assert!(hits >= 9, "{hits}/10");
    }

    #[test]
    fn inar_counts() {
        let y = gen_inar(0.5, 1.0, &cfg(29)).unwrap();
        assert!(y.values().iter().all(|v| v.fract() == 0.0 && *v >= 0.0));
        let m = mean(y.values());
        assert!((1.8..=2.2).contains(&m), "{m}");
        let r = acf(y.values(), 1);
        assert!((0.45..=0.55).contains(&r), "{r}");
    }

    #[test]
    fn inar_rejects_alpha() {
        assert!(gen_inar(1.0, 1.0, &cfg(0)).is_err());
        assert!(gen_inar(0.0, 1.0, &cfg(0)).is_err());
    }

    #[test]
    fn length_must_be_mappable() {
        assert!(generate(&ModelSpec::WhiteNoise, &GenConfig::new(1, 0)).is_err());
    }

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(Preset::from_name(p.name()), Some(p));
        }
        assert_eq!(Preset::from_name("nope"), None);
    }

    #[test]
    fn dataset_seeds_and_labels() {
        let ds = generate_presets(&[Preset::Ar1Pos], 2, 100, 5).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.labels().unwrap(), vec!["AR(1)0.5", "AR(1)0.5"]);
        let second = gen_ar(&[0.5], &GenConfig::new(100, 6)).unwrap();
        assert_eq!(ds.series()[1].values(), second.values());
    }
}
