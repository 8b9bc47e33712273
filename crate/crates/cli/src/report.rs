//! Report payloads, the JSON envelope and the CSV layout.

use serde::{Deserialize, Serialize};

use chartheta::bounds::{BoundProfile, CosSumCheck, RegimeBound};
use chartheta::lfunc::{LargeValueHistogram, ShiftedMomentReport};
use chartheta::randmodel::ModelMomentEstimate;
use chartheta::theta::MellinCheckResult;
use chartheta::{MomentReport, Parity};

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterRow {
    pub index: usize,
    pub exponents: Vec<u64>,
    pub parity: Parity,
    pub conductor: u64,
    pub primitive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEval {
    pub profile: BoundProfile,
    pub v: Option<f64>,
    pub a: Option<f64>,
    pub regime: Option<RegimeBound>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "kebab-case")]
pub enum Payload {
    CharTable(Vec<CharacterRow>),
    Moments(Vec<MomentReport>),
    ShiftedMoment(ShiftedMomentReport),
    LargeValues(LargeValueHistogram),
    Mellin(Vec<MellinCheckResult>),
    BoundEval(BoundEval),
    CosSum(Vec<CosSumCheck>),
    RandModel(ModelMomentEstimate),
}

fn e17(x: f64) -> String {
    format!("{x:.17e}")
}

impl Payload {
    pub fn csv_header(&self) -> &'static str {
        match self {
            Payload::CharTable(_) => "index,exponents,parity,conductor,primitive",
            Payload::Moments(_) => MomentReport::CSV_HEADER,
            Payload::ShiftedMoment(_) => ShiftedMomentReport::CSV_HEADER,
            Payload::LargeValues(_) => LargeValueHistogram::CSV_HEADER,
            Payload::Mellin(_) => MellinCheckResult::CSV_HEADER,
            Payload::BoundEval(_) => "quantity,value",
            Payload::CosSum(_) => CosSumCheck::CSV_HEADER,
            Payload::RandModel(_) => {
                "q,k,eta,samples,seed,estimate,std_error,median_of_means,weight_square_sum,normalization,normalized"
            }
        }
    }

    pub fn csv_rows(&self) -> Vec<String> {
        match self {
            Payload::CharTable(rows) => rows
                .iter()
                .map(|r| {
                    let e: Vec<String> = r.exponents.iter().map(u64::to_string).collect();
                    format!("{},{},{},{},{}", r.index, e.join(";"), r.parity, r.conductor, r.primitive)
                })
                .collect(),
            Payload::Moments(rows) => rows.iter().map(MomentReport::csv_row).collect(),
            Payload::ShiftedMoment(r) => vec![r.csv_row()],
            Payload::LargeValues(h) => h.csv_rows(),
            Payload::Mellin(rows) => rows.iter().map(MellinCheckResult::csv_row).collect(),
            Payload::BoundEval(b) => {
                let p = &b.profile;
                let mut out = vec![format!("W,{}", e17(p.w)), format!("shifted_moment_bound,{}", e17(p.shifted_moment_bound))];
                for t in &p.pairs {
                    out.push(format!("F[{}.{}],{}", t.i, t.j, e17(t.f)));
                    out.push(format!("E[{}.{}],{}", t.i, t.j, e17(t.e)));
                }
                if let Some(v) = b.v {
                    out.push(format!("V,{}", e17(v)));
                }
                if let Some(a) = b.a {
                    out.push(format!("A,{}", e17(a)));
                }
                if let Some(r) = b.regime {
                    out.push(format!("regime,{:?}", r.regime));
                    out.push(format!("regime_value,{}", e17(r.value)));
                }
                out
            }
            Payload::CosSum(rows) => rows.iter().map(CosSumCheck::csv_row).collect(),
            Payload::RandModel(m) => vec![format!(
                "{},{},{},{},{},{},{},{},{},{},{}",
                m.q,
                m.k,
                m.eta,
                m.samples,
                m.seed,
                e17(m.estimate),
                e17(m.std_error),
                e17(m.median_of_means),
                e17(m.weight_square_sum),
                e17(m.normalization),
                e17(m.normalized)
            )],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub tool: String,
    pub version: String,
    pub command_line: Vec<String>,
    pub command: String,
    pub args: serde_json::Value,
    pub config: RunConfig,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
    pub payload: Payload,
}

impl ReportEnvelope {
    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// CSV with a comment preamble. Worker count, output location and
    /// timestamp are left out so reruns are byte-identical.
    pub fn to_csv(&self) -> serde_json::Result<String> {
        let snapshot = serde_json::json!({ "tol": self.config.tol, "seed": self.config.seed });
        let mut out = format!(
            "# {} {}\n# command {} {}\n# config {}\n{}\n",
            self.tool,
            self.version,
            self.command,
            serde_json::to_string(&self.args)?,
            serde_json::to_string(&snapshot)?,
            self.payload.csv_header()
        );
        for row in self.payload.csv_rows() {
            out.push_str(&row);
            out.push('\n');
        }
        Ok(out)
    }
}

pub fn timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|v| v.parse().ok()) {
        return t;
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}
