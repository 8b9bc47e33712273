//! Serializable report records shared by the moment computations.

use serde::{Deserialize, Serialize};

use crate::characters::{CharacterGroup, Parity};

/// Which characters a moment sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Primitive, even, non-principal characters.
    EvenPrimitive,
    /// Primitive odd characters.
    OddPrimitive,
    /// All primitive characters.
    Star,
    /// All characters with `chi^2 != chi_0`, primitive or not.
    Nonquadratic,
    /// Primitive characters with `chi^2 != chi_0`.
    PrimitiveNonquadratic,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::EvenPrimitive => "even",
            Family::OddPrimitive => "odd",
            Family::Star => "star",
            Family::Nonquadratic => "nonquadratic",
            Family::PrimitiveNonquadratic => "primitive-nonquadratic",
        }
    }
}

impl Family {
    pub fn contains(self, group: &CharacterGroup, index: usize) -> bool {
        let primitive = group.is_primitive(index);
        let nonquadratic = !group.is_real(index);
        match self {
            Family::EvenPrimitive => {
                primitive && index != 0 && group.parity(index) == Parity::Even
            }
            Family::OddPrimitive => primitive && group.parity(index) == Parity::Odd,
            Family::Star => primitive,
            Family::Nonquadratic => nonquadratic,
            Family::PrimitiveNonquadratic => primitive && nonquadratic,
        }
    }

    /// Character indices in the family, ascending.
    pub fn members(self, group: &CharacterGroup) -> Vec<usize> {
        (0..group.len()).filter(|&i| self.contains(group, i)).collect()
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "even" | "even-primitive" => Ok(Family::EvenPrimitive),
            "odd" | "odd-primitive" => Ok(Family::OddPrimitive),
            "star" | "primitive" => Ok(Family::Star),
            "nonquadratic" => Ok(Family::Nonquadratic),
            "primitive-nonquadratic" => Ok(Family::PrimitiveNonquadratic),
            other => Err(format!(
                "unknown family `{other}` (expected star|nonquadratic|primitive-nonquadratic|even|odd)"
            )),
        }
    }
}

/// Aggregate moment record: raw sum, normalization and their ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub q: u64,
    pub k: u32,
    pub family: Family,
    pub raw: f64,
    pub normalization: f64,
    pub ratio: f64,
    /// Truncation / evaluation tolerance used.
    pub eps: f64,
    pub family_size: usize,
    /// Family had no members; `raw` is 0 and `ratio` meaningless.
    pub empty: bool,
    /// Members whose computed value is indistinguishable from 0.
    pub near_zero: usize,
}

impl MomentReport {
    pub const CSV_HEADER: &'static str = "q,k,parity,raw,normalization,ratio,eps,family_size";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.17e},{:.17e},{:.17e},{:e},{}",
            self.q,
            self.k,
            self.family.label(),
            self.raw,
            self.normalization,
            self.ratio,
            self.eps,
            self.family_size
        )
    }
}

/// Order-independent sum: sorts before a compensated fold, so any
/// permutation of the same multiset gives identical bits.
pub fn canonical_sum(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    crate::sum::compensated_sum(values)
}
