//! Mat geometries and per-operation cost tables, with the three built-in presets.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// P×Q processing elements, each an M-row by N-column array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatDesign {
    pub name: String,
    pub p: usize,
    pub q: usize,
    pub m: usize,
    pub n: usize,
}

impl MatDesign {
    pub fn new(name: impl Into<String>, p: usize, q: usize, m: usize, n: usize) -> Result<Self> {
        let d = Self { name: name.into(), p, q, m, n };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.q == 0 || self.m == 0 || self.n == 0 {
            return Err(SimError::Config(format!("mat `{}` has a zero dimension", self.name)));
        }
        Ok(())
    }

    pub fn pes(&self) -> usize {
        self.p * self.q
    }

    /// Total cells, P·Q·M·N.
    pub fn cells(&self) -> u128 {
        self.p as u128 * self.q as u128 * self.m as u128 * self.n as u128
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpCost {
    pub latency_ns: f64,
    pub energy_nj: f64,
}

impl OpCost {
    pub const fn new(latency_ns: f64, energy_nj: f64) -> Self {
        Self { latency_ns, energy_nj }
    }
}

/// Row-operation costs of one mat. Missing entries are `None`; pricing a
/// trace that needs one is a config error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostTable {
    pub read_not: Option<OpCost>,
    pub and_or: Option<OpCost>,
    pub mult: Option<OpCost>,
    pub write: Option<OpCost>,
    pub add: Option<OpCost>,
    #[serde(default)]
    pub sub: Option<OpCost>,
    pub shift: Option<OpCost>,
    /// One full segment-pair permutation, register traffic included.
    pub permutation: Option<OpCost>,
    pub comm_time_fraction: f64,
    pub comm_energy_fraction: f64,
}

impl CostTable {
    pub fn validate(&self) -> Result<()> {
        let entries = [
            ("read_not", self.read_not),
            ("and_or", self.and_or),
            ("mult", self.mult),
            ("write", self.write),
            ("add", self.add),
            ("sub", self.sub),
            ("shift", self.shift),
            ("permutation", self.permutation),
        ];
        for (name, e) in entries {
            if let Some(c) = e {
                if !(c.latency_ns > 0.0 && c.energy_nj > 0.0) || !c.latency_ns.is_finite() || !c.energy_nj.is_finite() {
                    return Err(SimError::Config(format!("cost entry `{name}` must be strictly positive")));
                }
            }
        }
        for (name, f) in [("comm_time_fraction", self.comm_time_fraction), ("comm_energy_fraction", self.comm_energy_fraction)] {
            if !(f > 0.0 && f < 1.0) {
                return Err(SimError::Config(format!("`{name}` must lie in (0, 1), got {f}")));
            }
        }
        Ok(())
    }
}

/// A mat geometry together with its cost table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Design {
    pub mat: MatDesign,
    pub costs: CostTable,
}

impl Design {
    pub fn validate(&self) -> Result<()> {
        self.mat.validate()?;
        self.costs.validate()
    }

    pub fn name(&self) -> &str {
        &self.mat.name
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "design1" => Ok(design1()),
            "design2" => Ok(design2()),
            "design3" => Ok(design3()),
            other => Err(SimError::Config(format!(
                "unknown design `{other}` (expected design1, design2 or design3)"
            ))),
        }
    }

    pub fn presets() -> Vec<Self> {
        vec![design1(), design2(), design3()]
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: Self = serde_json::from_str(s)?;
        d.validate()?;
        Ok(d)
    }
}

const COMM_TIME: f64 = 0.562;
const COMM_ENERGY: f64 = 0.377;

#[allow(clippy::too_many_arguments)]
fn table(
    read: OpCost,
    and_or: OpCost,
    mult: OpCost,
    write: OpCost,
    add: OpCost,
    sub: OpCost,
    shift: OpCost,
    perm: OpCost,
) -> CostTable {
    CostTable {
        read_not: Some(read),
        and_or: Some(and_or),
        mult: Some(mult),
        write: Some(write),
        add: Some(add),
        sub: Some(sub),
        shift: Some(shift),
        permutation: Some(perm),
        comm_time_fraction: COMM_TIME,
        comm_energy_fraction: COMM_ENERGY,
    }
}

pub fn design1() -> Design {
    Design {
        mat: MatDesign { name: "design1".into(), p: 16, q: 16, m: 1024, n: 1024 },
        costs: table(
            OpCost::new(5.24, 17.36),
            OpCost::new(5.28, 18.44),
            OpCost::new(5.28, 18.44),
            OpCost::new(5.08, 14.58),
            OpCost::new(12.87, 19.97),
            OpCost::new(17.96, 21.43),
            OpCost::new(5.24, 17.36),
            OpCost::new(36.13, 93.58),
        ),
    }
}

pub fn design2() -> Design {
    Design {
        mat: MatDesign { name: "design2".into(), p: 32, q: 32, m: 512, n: 512 },
        costs: table(
            OpCost::new(2.64, 5.51),
            OpCost::new(2.68, 18.40),
            OpCost::new(2.68, 18.40),
            OpCost::new(2.46, 6.78),
            OpCost::new(10.20, 96.30),
            OpCost::new(12.70, 103.08),
            OpCost::new(2.64, 5.51),
            OpCost::new(17.80, 69.50),
        ),
    }
}

pub fn design3() -> Design {
    Design {
        mat: MatDesign { name: "design3".into(), p: 64, q: 64, m: 256, n: 256 },
        costs: table(
            OpCost::new(1.42, 1.66),
            OpCost::new(1.48, 2.50),
            OpCost::new(1.48, 2.50),
            OpCost::new(1.26, 0.96),
            OpCost::new(9.04, 47.30),
            OpCost::new(10.30, 48.21),
            OpCost::new(1.42, 1.66),
            OpCost::new(9.40, 10.50),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate_and_round_trip() {
        for d in Design::presets() {
            d.validate().unwrap();
            let back = Design::from_json(&serde_json::to_string(&d).unwrap()).unwrap();
            assert_eq!(back, d);
        }
        assert_eq!(Design::preset("Design2").unwrap().mat.n, 512);
        assert!(Design::preset("design4").is_err());
    }

    #[test]
    fn rejects_bad_entries() {
        let mut d = design1();
        d.costs.add = Some(OpCost::new(0.0, 1.0));
        assert!(d.validate().is_err());
        let mut d = design1();
        d.costs.comm_time_fraction = 1.0;
        assert!(d.validate().is_err());
        assert!(MatDesign::new("z", 0, 1, 1, 1).is_err());
        assert!(Design::from_json(r#"{"mat":{"name":"x","p":1,"q":1,"m":1,"n":1,"extra":2},"costs":{}}"#).is_err());
    }
}
