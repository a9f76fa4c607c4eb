use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive};

use super::ScanError;
use crate::algebra::{format_rat, parse_rat, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamRange {
    Fixed(Rat),
    /// `lo, lo + step, ...` up to the last value not exceeding `hi`.
    Range { lo: Rat, hi: Rat, step: Rat },
}

impl ParamRange {
    pub fn values(&self) -> Vec<Rat> {
        match self {
            ParamRange::Fixed(v) => vec![v.clone()],
            ParamRange::Range { lo, hi, step } => {
                let n = ((hi - lo) / step).floor().to_usize().unwrap_or(0);
                (0..=n)
                    .map(|i| lo + step * Rat::from_integer(i.into()))
                    .collect()
            }
        }
    }

    /// Number of values.
    pub fn count(&self) -> usize {
        match self {
            ParamRange::Fixed(_) => 1,
            ParamRange::Range { lo, hi, step } => {
                ((hi - lo) / step).floor().to_usize().unwrap_or(0) + 1
            }
        }
    }

    pub fn is_range(&self) -> bool {
        matches!(self, ParamRange::Range { .. })
    }
}

impl fmt::Display for ParamRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamRange::Fixed(v) => f.write_str(&format_rat(v)),
            ParamRange::Range { lo, hi, step } => write!(
                f,
                "{}:{}:{}",
                format_rat(lo),
                format_rat(hi),
                format_rat(step)
            ),
        }
    }
}

/// Parameter grid written `name=lo:hi:step` or `name=value`, comma
/// separated. Ranges include `hi` when `hi - lo` is a multiple of `step`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GridSpec {
    pub params: BTreeMap<String, ParamRange>,
}

impl GridSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, range: ParamRange) -> Self {
        self.params.insert(name.to_string(), range);
        self
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        if self.params.is_empty() {
            return 0;
        }
        self.params.values().map(ParamRange::count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn ranged(&self) -> Vec<&str> {
        self.params
            .iter()
            .filter(|(_, r)| r.is_range())
            .map(|(n, _)| n.as_str())
            .collect()
    }

    /// Points in lexicographic order: parameters by name, each by value.
    /// `expected` must be exactly the set of assigned names.
    pub fn enumerate(&self, expected: &[String]) -> Result<Vec<BTreeMap<String, Rat>>, ScanError> {
        for name in expected {
            if !self.params.contains_key(name) {
                return Err(ScanError::Grid(format!("parameter `{name}` is not assigned")));
            }
        }
        if let Some(extra) = self.params.keys().find(|k| !expected.contains(k)) {
            return Err(ScanError::Grid(format!("unknown parameter `{extra}`")));
        }
        if self.params.is_empty() {
            return Ok(Vec::new());
        }
        let mut points = vec![BTreeMap::new()];
        for (name, range) in &self.params {
            let values = range.values();
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.insert(name.clone(), v.clone());
                        q
                    })
                })
                .collect();
        }
        Ok(points)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .params
            .iter()
            .map(|(n, r)| format!("{n}={r}"))
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for GridSpec {
    type Err = ScanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut spec = GridSpec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| ScanError::Grid(format!("expected name=value in `{part}`")))?;
            let name = name.trim();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ScanError::Grid(format!("bad parameter name `{name}`")));
            }
            let num = |t: &str| {
                parse_rat(t).map_err(|_| ScanError::Grid(format!("bad number `{t}` in `{part}`")))
            };
            let fields: Vec<&str> = value.split(':').collect();
            let range = match fields.as_slice() {
                [v] => ParamRange::Fixed(num(v)?),
                [lo, hi, step] => {
                    let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
                    if !step.is_positive() {
                        return Err(ScanError::Grid(format!("step must be positive in `{part}`")));
                    }
                    if lo > hi {
                        return Err(ScanError::Grid(format!("empty range in `{part}`")));
                    }
                    ParamRange::Range { lo, hi, step }
                }
                _ => return Err(ScanError::Grid(format!("expected lo:hi:step in `{part}`"))),
            };
            if spec.params.insert(name.to_string(), range).is_some() {
                return Err(ScanError::Grid(format!("parameter `{name}` given twice")));
            }
        }
        Ok(spec)
    }
}
