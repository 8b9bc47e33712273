//! Subcommand definitions and their execution.

use clap::{Args, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use chartheta::bounds::{a_quantity, cos_sum_check, large_value_bound, BoundProfile, F_MIN_Q};
use chartheta::lfunc::{central_moment, large_value_counts, shifted_moment, ShiftTuple};
use chartheta::numtheory::{is_prime, sieve};
use chartheta::randmodel::model_moment;
use chartheta::theta::{mellin_check, mellin_check_auto, theta_moment, Method};
use chartheta::{build_group, Family, Parity};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{BoundEval, CharacterRow, Payload};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Batch,
    Naive,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Character table: index, exponent tuple, parity, conductor, primitivity
    CharTable(CharTableArgs),
    /// Theta moment S_2k over even or odd primitive characters
    ThetaMoment(ThetaMomentArgs),
    /// Theta moments for every prime in a range
    ThetaScan(ThetaScanArgs),
    /// Central L-moment over primitive characters
    LMoment(LMomentArgs),
    /// Shifted moment sum_chi prod_i |L(1/2 + i t_i, chi)|
    ShiftedMoment(ShiftedMomentArgs),
    /// Large-value counts N_t(q, V) on a grid of V
    LargeValues(LargeValuesArgs),
    /// Theta series against its Mellin integral (even primitive characters)
    MellinCheck(MellinCheckArgs),
    /// Evaluate the analytic bound shapes
    BoundEval(BoundEvalArgs),
    /// Prime cosine sum against its main term
    #[command(name = "lemma-cos")]
    #[serde(rename = "lemma-cos")]
    CosSum(CosSumArgs),
    /// Steinhaus random-model moment estimate
    RandModel(RandModelArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CharTableArgs {
    #[arg(long)]
    pub q: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ThetaMomentArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value = "even")]
    pub parity: Parity,
    /// Truncation tolerance; defaults to the run tolerance
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, value_enum, default_value = "batch")]
    pub method: MethodArg,
}

#[derive(Debug, Args, Serialize)]
pub struct ThetaScanArgs {
    /// Inclusive range `A:B`
    #[arg(long)]
    pub prime_range: String,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value = "even")]
    pub parity: Parity,
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct LMomentArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub k: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct ShiftedMomentArgs {
    #[arg(long)]
    pub q: u64,
    /// Comma-separated, even count
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub shifts: Vec<f64>,
    #[arg(long, default_value = "star")]
    pub family: Family,
    /// Exponent slack in the comparison bound
    #[arg(long, default_value_t = 0.1)]
    pub bound_eps: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct LargeValuesArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub shifts: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub vmin: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub vmax: f64,
    #[arg(long, default_value_t = 21)]
    pub vsteps: usize,
    #[arg(long, default_value = "nonquadratic")]
    pub family: Family,
}

#[derive(Debug, Args, Serialize)]
pub struct MellinCheckArgs {
    #[arg(long)]
    pub q: u64,
    /// Character index; all even primitive characters when absent
    #[arg(long)]
    pub character: Option<usize>,
    /// Half-width H of the integration window (chosen automatically when
    /// neither height nor step is given)
    #[arg(long)]
    pub height: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundEvalArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub shifts: Option<Vec<f64>>,
    /// Half the number of shifts; all-zero shifts when `--shifts` is absent
    #[arg(long)]
    pub k: Option<usize>,
    /// Threshold V for the large-value bound
    #[arg(long = "V", alias = "v")]
    pub v: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct CosSumArgs {
    #[arg(long)]
    pub z: u64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub a: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct RandModelArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub eta: u32,
    #[arg(long)]
    pub eps: Option<f64>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CharTable(_) => "char-table",
            Command::ThetaMoment(_) => "theta-moment",
            Command::ThetaScan(_) => "theta-scan",
            Command::LMoment(_) => "l-moment",
            Command::ShiftedMoment(_) => "shifted-moment",
            Command::LargeValues(_) => "large-values",
            Command::MellinCheck(_) => "mellin-check",
            Command::BoundEval(_) => "bound-eval",
            Command::CosSum(_) => "lemma-cos",
            Command::RandModel(_) => "rand-model",
        }
    }

    pub fn args_json(&self) -> serde_json::Result<serde_json::Value> {
        let tagged = serde_json::to_value(self)?;
        Ok(tagged.get(self.name()).cloned().unwrap_or(serde_json::Value::Null))
    }

    pub fn run(&self, config: &RunConfig) -> Result<Payload, CliError> {
        match self {
            Command::CharTable(a) => char_table(a),
            Command::ThetaMoment(a) => {
                require_q(a.q, 3)?;
                let g = build_group(a.q)?;
                let method = match a.method {
                    MethodArg::Batch => Method::Batch,
                    MethodArg::Naive => Method::Naive,
                };
                let eps = a.eps.unwrap_or(config.tol);
                Ok(Payload::Moments(vec![theta_moment(&g, a.k, a.parity, eps, method)?]))
            }
            Command::ThetaScan(a) => theta_scan(a, config),
            Command::LMoment(a) => {
                require_q(a.q, 3)?;
                let g = build_group(a.q)?;
                Ok(Payload::Moments(vec![central_moment(&g, a.k, config.tol)?]))
            }
            Command::ShiftedMoment(a) => {
                require_q(a.q, 3)?;
                let g = build_group(a.q)?;
                let t = ShiftTuple::new(a.shifts.clone())?;
                Ok(Payload::ShiftedMoment(shifted_moment(&g, &t, config.tol, a.family, a.bound_eps)?))
            }
            Command::LargeValues(a) => {
                require_q(a.q, 3)?;
                if a.vsteps < 2 || !(a.vmin <= a.vmax) {
                    return Err(CliError::Usage("need vmin <= vmax and vsteps >= 2".into()));
                }
                let g = build_group(a.q)?;
                let t = ShiftTuple::new(a.shifts.clone())?;
                let grid: Vec<f64> = (0..a.vsteps)
                    .map(|i| a.vmin + (a.vmax - a.vmin) * i as f64 / (a.vsteps - 1) as f64)
                    .collect();
                Ok(Payload::LargeValues(large_value_counts(&g, &t, &grid, config.tol, a.family)?))
            }
            Command::MellinCheck(a) => mellin(a, config),
            Command::BoundEval(a) => bound_eval(a),
            Command::CosSum(a) => {
                if a.z < 3 {
                    return Err(CliError::Usage(format!("z must be >= 3, got {}", a.z)));
                }
                let limit = usize::try_from(a.z)
                    .map_err(|_| CliError::Usage(format!("z = {} is too large", a.z)))?;
                let primes = sieve(limit)?;
                let rows = a
                    .a
                    .iter()
                    .map(|&x| cos_sum_check(a.z, x, &primes))
                    .collect::<Result<_, _>>()?;
                Ok(Payload::CosSum(rows))
            }
            Command::RandModel(a) => {
                require_q(a.q, 3)?;
                let eps = a.eps.unwrap_or(config.tol);
                Ok(Payload::RandModel(model_moment(a.q, a.k, a.samples, config.seed, eps, a.eta)?))
            }
        }
    }
}

fn require_q(q: u64, min: u64) -> Result<(), CliError> {
    if q < min {
        return Err(CliError::Usage(format!("q must be >= {min}, got q = {q}")));
    }
    Ok(())
}

fn char_table(a: &CharTableArgs) -> Result<Payload, CliError> {
    require_q(a.q, 1)?;
    let g = build_group(a.q)?;
    Ok(Payload::CharTable(
        g.characters()
            .map(|c| CharacterRow {
                index: c.index,
                primitive: c.is_primitive(a.q),
                exponents: c.exponents,
                parity: c.parity,
                conductor: c.conductor,
            })
            .collect(),
    ))
}

fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("prime range must look like A:B, got `{s}`"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn theta_scan(a: &ThetaScanArgs, config: &RunConfig) -> Result<Payload, CliError> {
    let (lo, hi) = parse_range(&a.prime_range)?;
    require_q(lo.max(hi), 3)?;
    let eps = a.eps.unwrap_or(config.tol);
    let primes: Vec<u64> = (lo.max(3)..=hi).filter(|&p| is_prime(p)).collect();
    let rows = primes
        .par_iter()
        .map(|&p| theta_moment(&build_group(p)?, a.k, a.parity, eps, Method::Batch))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Payload::Moments(rows))
}

fn mellin(a: &MellinCheckArgs, config: &RunConfig) -> Result<Payload, CliError> {
    require_q(a.q, 3)?;
    let g = build_group(a.q)?;
    let chars: Vec<usize> = match a.character {
        Some(c) => vec![c],
        None => (1..g.len())
            .filter(|&c| g.parity(c) == Parity::Even && g.is_primitive(c))
            .collect(),
    };
    if chars.is_empty() {
        return Err(CliError::Usage(format!("q = {} has no even primitive characters", a.q)));
    }
    let rows = chars
        .iter()
        .map(|&c| match (a.height, a.step) {
            (None, None) => mellin_check_auto(&g, c, config.tol),
            (h, s) => mellin_check(&g, c, h.unwrap_or(8.0), s.unwrap_or(1.0 / 64.0), config.tol),
        })
        .collect::<Result<_, _>>()?;
    Ok(Payload::Mellin(rows))
}

fn bound_eval(a: &BoundEvalArgs) -> Result<Payload, CliError> {
    require_q(a.q, F_MIN_Q)?;
    let t = match (&a.shifts, a.k) {
        (Some(s), k) => {
            let t = ShiftTuple::new(s.clone())?;
            if let Some(k) = k {
                if k != t.k() {
                    return Err(CliError::Usage(format!(
                        "--k {k} does not match {} shifts",
                        t.shifts().len()
                    )));
                }
            }
            t
        }
        (None, Some(k)) => ShiftTuple::central(k)?,
        (None, None) => return Err(CliError::Usage("give --shifts or --k".into())),
    };
    let profile = BoundProfile::new(a.q, &t, a.eps)?;
    let (av, regime) = match a.v {
        Some(v) => (
            Some(a_quantity(v, profile.w, t.k())?),
            Some(large_value_bound(a.q, v, profile.w, t.k())?),
        ),
        None => (None, None),
    };
    Ok(Payload::BoundEval(BoundEval { profile, v: a.v, a: av, regime }))
}
