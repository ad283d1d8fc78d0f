//! Run configuration: a flat `key = value` file merged with command-line
//! overrides, then parsed into typed values.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use classical_weights::moments::TriangleWeightParams;
use classical_weights::poly::{MatPoly2, Poly2};
use classical_weights::scalar::{parse_rational, Rational, Scalar};
use classical_weights::weight::{DomainEdges, Edge, WeightFactor, WeightSpec};
use serde::Serialize;

pub const KEYS: &[&str] = &[
    "alpha",
    "beta",
    "gamma",
    "factors",
    "phi11",
    "phi12",
    "phi22",
    "edges",
    "degree",
    "f",
    "degree-min",
    "degree-max",
    "max-order",
    "nodes",
    "format",
    "output",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Format::Json => f.write_str("json"),
            Format::Csv => f.write_str("csv"),
        }
    }
}

/// Raw key-value settings; later insertions override earlier ones.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", lineno + 1))?;
            s.set(key.trim(), value.trim())
                .with_context(|| format!("line {}", lineno + 1))?;
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        Self::parse_file(&text).with_context(|| format!("in config file {}", path.display()))
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            bail!("unknown config key `{key}`");
        }
        self.values.insert(key, value.to_string());
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// How the weight was specified.
#[derive(Clone, Debug)]
pub enum WeightInput {
    Triangle(TriangleWeightParams<Rational>),
    Factors(WeightSpec<Rational>),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub weight: WeightInput,
    pub phi: MatPoly2<Rational>,
    pub edges: DomainEdges<Rational>,
    pub degree: u32,
    pub f: Option<Poly2<Rational>>,
    pub degree_min: u32,
    pub degree_max: u32,
    pub max_order: u32,
    pub nodes: usize,
    pub format: Format,
    pub output: Option<String>,
}

fn rational(key: &str, text: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| anyhow!("`{key}`: cannot parse `{text}` as a number"))
}

fn poly(key: &str, text: &str) -> Result<Poly2<Rational>> {
    Poly2::parse(text).map_err(|e| anyhow!("`{key}`: {e}"))
}

fn unsigned<T: std::str::FromStr>(key: &str, text: &str) -> Result<T> {
    text.trim()
        .parse()
        .map_err(|_| anyhow!("`{key}`: expected a nonnegative integer, got `{text}`"))
}

/// `form : exponent ; form : exponent ; ...`
fn parse_factors(text: &str) -> Result<WeightSpec<Rational>> {
    let mut factors = Vec::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (form, exp) = item
            .rsplit_once(':')
            .ok_or_else(|| anyhow!("`factors`: expected `form:exponent`, got `{item}`"))?;
        factors.push(WeightFactor {
            form: poly("factors", form)?,
            exponent: rational("factors", exp)?,
        });
    }
    WeightSpec::new(factors).map_err(|e| anyhow!("`factors`: {e}"))
}

/// `form : n1, n2 ; ...`
fn parse_edges(text: &str) -> Result<DomainEdges<Rational>> {
    let mut edges = Vec::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (form, normal) = item
            .rsplit_once(':')
            .ok_or_else(|| anyhow!("`edges`: expected `form:n1,n2`, got `{item}`"))?;
        let (n1, n2) = normal
            .split_once(',')
            .ok_or_else(|| anyhow!("`edges`: normal `{normal}` needs two components"))?;
        edges.push(Edge {
            form: poly("edges", form)?,
            normal: [rational("edges", n1)?, rational("edges", n2)?],
        });
    }
    DomainEdges::new(edges).map_err(|e| anyhow!("`edges`: {e}"))
}

impl RunConfig {
    pub fn resolve(s: &Settings) -> Result<Self> {
        let exponent = |k: &str| {
            s.get(k)
                .map_or(Ok(Rational::from_i64(0)), |v| rational(k, v))
        };
        let weight = match s.get("factors") {
            Some(text) => {
                if ["alpha", "beta", "gamma"]
                    .iter()
                    .any(|k| s.get(k).is_some())
                {
                    bail!("`factors` cannot be combined with `alpha`/`beta`/`gamma`");
                }
                WeightInput::Factors(parse_factors(text)?)
            }
            None => WeightInput::Triangle(
                TriangleWeightParams::new(
                    exponent("alpha")?,
                    exponent("beta")?,
                    exponent("gamma")?,
                )
                .map_err(|e| anyhow!("{e}"))?,
            ),
        };
        let tri = MatPoly2::<Rational>::triangle();
        let entry = |k: &str, default: &Poly2<Rational>| {
            s.get(k).map_or(Ok(default.clone()), |v| poly(k, v))
        };
        let phi = MatPoly2::symmetric(
            entry("phi11", tri.get(0, 0))?,
            entry("phi12", tri.get(0, 1))?,
            entry("phi22", tri.get(1, 1))?,
        );
        let edges = match s.get("edges") {
            Some(text) => parse_edges(text)?,
            None => DomainEdges::triangle(),
        };
        let number = |k: &str, default: u32| s.get(k).map_or(Ok(default), |v| unsigned(k, v));
        let degree = number("degree", 4)?;
        let degree_min = number("degree-min", 0)?;
        let degree_max = number("degree-max", 10)?;
        if degree_min > degree_max {
            bail!("`degree-min` ({degree_min}) exceeds `degree-max` ({degree_max})");
        }
        let nodes: usize = s.get("nodes").map_or(Ok(8), |v| unsigned("nodes", v))?;
        if nodes == 0 {
            bail!("`nodes` must be at least 1");
        }
        let format = match s.get("format").unwrap_or("json") {
            "json" => Format::Json,
            "csv" => Format::Csv,
            other => bail!("`format`: expected json or csv, got `{other}`"),
        };
        Ok(RunConfig {
            weight,
            phi,
            edges,
            degree,
            f: s.get("f").map(|v| poly("f", v)).transpose()?,
            degree_min,
            degree_max,
            max_order: number("max-order", 6)?,
            nodes,
            format,
            output: s.get("output").map(str::to_string),
        })
    }

    /// The triangle exponents; the solver and the moment tools only handle
    /// this weight.
    pub fn triangle(&self) -> Result<&TriangleWeightParams<Rational>> {
        match &self.weight {
            WeightInput::Triangle(p) => Ok(p),
            WeightInput::Factors(_) => {
                bail!("this subcommand needs `alpha`, `beta`, `gamma` rather than `factors`")
            }
        }
    }

    pub fn weight_spec(&self) -> WeightSpec<Rational> {
        match &self.weight {
            WeightInput::Triangle(p) => WeightSpec::triangle(p),
            WeightInput::Factors(w) => w.clone(),
        }
    }

    pub fn resolved(&self) -> ResolvedConfig {
        let (alpha, beta, gamma, factors) = match &self.weight {
            WeightInput::Triangle(p) => (
                Some(p.alpha().to_string()),
                Some(p.beta().to_string()),
                Some(p.gamma().to_string()),
                None,
            ),
            WeightInput::Factors(w) => (
                None,
                None,
                None,
                Some(
                    w.factors()
                        .iter()
                        .map(|f| FactorReport {
                            form: f.form.to_string(),
                            exponent: f.exponent.to_string(),
                        })
                        .collect(),
                ),
            ),
        };
        ResolvedConfig {
            alpha,
            beta,
            gamma,
            factors,
            phi11: self.phi.get(0, 0).to_string(),
            phi12: self.phi.get(0, 1).to_string(),
            phi22: self.phi.get(1, 1).to_string(),
            edges: self
                .edges
                .edges()
                .iter()
                .map(|e| EdgeReport {
                    form: e.form.to_string(),
                    normal: [e.normal[0].to_string(), e.normal[1].to_string()],
                })
                .collect(),
            degree: self.degree,
            f: self.f.as_ref().map(ToString::to_string),
            degree_min: self.degree_min,
            degree_max: self.degree_max,
            max_order: self.max_order,
            nodes: self.nodes,
            format: self.format,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorReport {
    pub form: String,
    pub exponent: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeReport {
    pub form: String,
    pub normal: [String; 2],
}

/// Every setting after defaults and overrides, as embedded in reports.
#[derive(Clone, Debug, Serialize)]
pub struct ResolvedConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<FactorReport>>,
    pub phi11: String,
    pub phi12: String,
    pub phi22: String,
    pub edges: Vec<EdgeReport>,
    pub degree: u32,
    pub f: Option<String>,
    pub degree_min: u32,
    pub degree_max: u32,
    pub max_order: u32,
    pub nodes: usize,
    pub format: Format,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_override() {
        let mut s = Settings::parse_file("# weights\nalpha = 1/2\n degree=3 # inline\n").unwrap();
        s.set("degree", "5").unwrap();
        let c = RunConfig::resolve(&s).unwrap();
        assert_eq!(c.degree, 5);
        assert_eq!(c.triangle().unwrap().alpha(), &Rational::from_ratio(1, 2));
        assert_eq!(c.phi, MatPoly2::triangle());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Settings::parse_file("colour = red").is_err());
        assert!(Settings::parse_file("alpha").is_err());
        let bad = |text: &str| RunConfig::resolve(&Settings::parse_file(text).unwrap()).is_err();
        assert!(bad("alpha = -1"));
        assert!(bad("degree = -2"));
        assert!(bad("format = xml"));
        assert!(bad("factors = x1:0\nalpha = 1"));
        assert!(bad("factors = x1^2:1"));
        assert!(bad("phi11 = x1 +"));
    }

    #[test]
    fn factor_and_edge_lists() {
        let s = Settings::parse_file(
            "factors = x1:1/2; 1 - x1 - x2:0.25\nedges = x1:-1,0; 1-x1-x2:1,1",
        )
        .unwrap();
        let c = RunConfig::resolve(&s).unwrap();
        assert_eq!(c.weight_spec().factors().len(), 2);
        assert_eq!(c.edges.edges().len(), 2);
        assert!(c.triangle().is_err());
    }
}
