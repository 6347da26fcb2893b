//! State and chart-coordinate files (JSON).

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use planetary_charts::geom::Vec3;
use planetary_charts::phase_space::{to_heliocentric, FullState, HelioState, MassParams};
use planetary_charts::regular_charts::{rps_to_cartesian, RpsCoords};
use planetary_charts::verify::{build_chart, ChartKind, ChartSpec, Target};

use crate::CliError;

/// Masses plus either heliocentric (`y`, `x`) or full (`p`, `q`) Cartesian data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub m0: f64,
    pub mu: f64,
    pub m: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<[f64; 3]>>,
}

/// Coordinates of one chart, flat in the chart's label order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartFile {
    pub chart: String,
    pub m0: f64,
    pub mu: f64,
    pub m: Vec<f64>,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
    pub labels: Vec<String>,
    pub coords: Vec<f64>,
}

fn vecs(v: &[[f64; 3]]) -> Vec<Vec3> {
    v.iter().map(|&a| Vec3(a)).collect()
}

fn arrays(v: &[Vec3]) -> Vec<[f64; 3]> {
    v.iter().map(|a| a.0).collect()
}

fn masses(m0: f64, mu: f64, m: &[f64]) -> Result<MassParams, CliError> {
    MassParams::new(m0, mu, m.to_vec()).map_err(|e| CliError::Usage(format!("invalid masses: {e}")))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("cannot parse {what}: {e}")))
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        parse(text, "state file")
    }

    pub fn masses(&self) -> Result<MassParams, CliError> {
        masses(self.m0, self.mu, &self.m)
    }

    pub fn helio(&self) -> Result<HelioState, CliError> {
        let n = self.m.len();
        let hs = match (&self.y, &self.x, &self.p, &self.q) {
            (Some(y), Some(x), None, None) => HelioState {
                y: vecs(y),
                x: vecs(x),
            },
            (None, None, Some(p), Some(q)) => {
                if p.len() != n + 1 || q.len() != n + 1 {
                    return Err(CliError::Usage(format!(
                        "p and q need {} rows (sun first)",
                        n + 1
                    )));
                }
                to_heliocentric(&FullState {
                    p: vecs(p),
                    q: vecs(q),
                })
            }
            _ => {
                return Err(CliError::Usage(
                    "state needs either y and x or p and q".into(),
                ))
            }
        };
        if hs.y.len() != n || hs.x.len() != n {
            return Err(CliError::Usage(format!("y and x need {n} rows")));
        }
        if hs.to_flat().iter().any(|v| !v.is_finite()) {
            return Err(CliError::Usage("non-finite state component".into()));
        }
        Ok(hs)
    }

    pub fn from_helio(mp: &MassParams, hs: &HelioState) -> Self {
        StateFile {
            m0: mp.m0,
            mu: mp.mu,
            m: mp.m.clone(),
            y: Some(arrays(&hs.y)),
            x: Some(arrays(&hs.x)),
            p: None,
            q: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state serializes") + "\n"
    }
}

impl ChartFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        parse(text, "chart file")
    }

    pub fn masses(&self) -> Result<MassParams, CliError> {
        masses(self.m0, self.mu, &self.m)
    }

    pub fn kind(&self) -> Result<ChartKind, CliError> {
        self.chart
            .parse()
            .map_err(|e| CliError::Usage(format!("{e}")))
    }

    pub fn from_chart(chart: &ChartSpec, mp: &MassParams, coords: Vec<f64>) -> Self {
        ChartFile {
            chart: chart.name.clone(),
            m0: mp.m0,
            mu: mp.mu,
            m: mp.m.clone(),
            parameters: chart.parameter_slots.iter().cloned().collect(),
            labels: chart.labels.clone(),
            coords,
        }
    }

    /// The chart these coordinates belong to, checked against the file.
    pub fn chart(&self, mp: &MassParams) -> Result<ChartSpec, CliError> {
        let chart = build_chart(self.kind()?, mp, self.parameters.get("G").copied())?;
        if self.coords.len() != chart.dim {
            return Err(CliError::Usage(format!(
                "chart {} needs {} coordinates, got {}",
                chart.name,
                chart.dim,
                self.coords.len()
            )));
        }
        if !self.labels.is_empty() && self.labels != chart.labels {
            return Err(CliError::Usage(format!(
                "labels do not match chart {}",
                chart.name
            )));
        }
        if !chart.in_domain(&self.coords) {
            return Err(CliError::Usage(format!(
                "coordinates outside the domain of {}",
                chart.name
            )));
        }
        Ok(chart)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("chart file serializes") + "\n"
    }
}

/// Heliocentric state represented by chart coordinates.
pub fn helio_from_chart(
    chart: &ChartSpec,
    mp: &MassParams,
    coords: &[f64],
) -> Result<HelioState, CliError> {
    match chart.target {
        Target::Coords => {
            let t = (chart.inverse)(coords)?;
            Ok(rps_to_cartesian(&RpsCoords::from_vec(&t, mp.n()), mp)?)
        }
        _ => Ok(chart.helio_target(coords)?),
    }
}
