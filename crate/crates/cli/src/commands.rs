use anyhow::anyhow;
use classical_weights::galerkin::{
    assemble, build_basis, eig_orthonormal, solve_weak_with, GalerkinError,
};
use classical_weights::linalg::norm2;
use classical_weights::moments::{dirichlet_moment, MomentTable};
use classical_weights::poly::{MatPoly2, Poly2};
use classical_weights::quadrature::triangle_rule;
use classical_weights::scalar::Rational;
use classical_weights::weight::{compat_system_check, edge_check, pearson_check, Orientation};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, ResolvedConfig, RunConfig};

/// Why a run did not succeed; each maps to an exit status.
#[derive(Debug)]
pub enum Failure {
    /// A numerical kernel broke down (loss of definiteness, no convergence).
    Numerical(anyhow::Error),
    /// The configuration is unusable for this subcommand.
    Config(anyhow::Error),
}

impl From<GalerkinError> for Failure {
    fn from(e: GalerkinError) -> Self {
        Failure::Numerical(anyhow!("galerkin: {e}"))
    }
}

pub struct Report {
    pub body: String,
    /// Names of failed verification checks; nonempty means exit status 1.
    pub failed: Vec<String>,
}

fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

#[derive(Serialize)]
struct PearsonReport {
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    psi1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    psi2: Option<String>,
    #[serde(rename = "detD", skip_serializing_if = "Option::is_none")]
    det_d: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
}

#[derive(Serialize)]
struct EdgeResult {
    edge: usize,
    form: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    failing_component: Option<usize>,
}

#[derive(Serialize)]
struct CompatResult {
    orientation: String,
    pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    residuals: Vec<[[String; 2]; 2]>,
}

#[derive(Serialize)]
struct VerifyReport {
    config: ResolvedConfig,
    pearson: PearsonReport,
    boundary: Vec<EdgeResult>,
    compat: Vec<CompatResult>,
    classical: bool,
}

fn mat_strings(m: &MatPoly2<Rational>) -> [[String; 2]; 2] {
    let e = |i, j| m.get(i, j).to_string();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn verify_weight(cfg: &RunConfig) -> Result<Report, Failure> {
    let mut failed = Vec::new();
    let pearson = match pearson_check(&cfg.phi, &cfg.weight_spec()) {
        Ok(data) => PearsonReport {
            pass: true,
            psi1: Some(data.psi[0].to_string()),
            psi2: Some(data.psi[1].to_string()),
            det_d: Some(data.det().to_string()),
            failure: None,
        },
        Err(e) => {
            failed.push(format!(
                "weight-verify: pearson check failed ({}): {e}",
                e.stage()
            ));
            PearsonReport {
                pass: false,
                psi1: None,
                psi2: None,
                det_d: None,
                failure: Some(e.stage().to_string()),
            }
        }
    };
    let boundary: Vec<EdgeResult> = cfg
        .edges
        .edges()
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let failing = edge_check(&cfg.phi, e);
            if let Some(c) = failing {
                failed.push(format!(
                    "weight-verify: boundary check failed on edge {} ({} = 0), component {c} of Phi n",
                    k + 1,
                    e.form
                ));
            }
            EdgeResult {
                edge: k + 1,
                form: e.form.to_string(),
                pass: failing.is_none(),
                failing_component: failing,
            }
        })
        .collect();
    let compat: Vec<CompatResult> = Orientation::BOTH
        .iter()
        .map(|&o| match compat_system_check(&cfg.phi, o) {
            Ok(()) => CompatResult {
                orientation: o.to_string(),
                pass: true,
                residuals: Vec::new(),
            },
            Err(e) => CompatResult {
                orientation: o.to_string(),
                pass: false,
                residuals: e.residuals.iter().map(mat_strings).collect(),
            },
        })
        .collect();
    // The orientation of the auxiliary system is a convention; one passing
    // convention is enough.
    if !compat.iter().any(|c| c.pass) {
        failed.push("weight-verify: auxiliary system fails under both orientations".into());
    }
    let classical = failed.is_empty();
    let body = match cfg.format {
        Format::Json => json(&VerifyReport {
            config: cfg.resolved(),
            pearson,
            boundary,
            compat,
            classical,
        }),
        Format::Csv => {
            let mut rows = vec![vec![
                "pearson".into(),
                String::new(),
                pearson.pass.to_string(),
                match (&pearson.psi1, &pearson.psi2, &pearson.failure) {
                    (Some(a), Some(b), _) => format!("psi1 = {a}; psi2 = {b}"),
                    (_, _, Some(f)) => f.clone(),
                    _ => String::new(),
                },
            ]];
            rows.extend(boundary.iter().map(|e| {
                vec![
                    "boundary".into(),
                    e.edge.to_string(),
                    e.pass.to_string(),
                    e.form.clone(),
                ]
            }));
            rows.extend(compat.iter().map(|c| {
                vec![
                    "compat".into(),
                    c.orientation.clone(),
                    c.pass.to_string(),
                    String::new(),
                ]
            }));
            rows.push(vec![
                "classical".into(),
                String::new(),
                classical.to_string(),
                String::new(),
            ]);
            csv_table(&["check", "item", "pass", "detail"], rows)
        }
    };
    Ok(Report { body, failed })
}

#[derive(Serialize)]
struct MomentEntry {
    m: u32,
    n: u32,
    value: f64,
    ratio: String,
}

#[derive(Serialize)]
struct MomentsReport {
    config: ResolvedConfig,
    total_mass: f64,
    moments: Vec<MomentEntry>,
}

pub fn moments(cfg: &RunConfig) -> Result<Report, Failure> {
    let p = cfg.triangle().map_err(Failure::Config)?;
    let order = cfg.max_order;
    let table = MomentTable::new(p, 2 * order);
    let entries: Vec<MomentEntry> = (0..=order)
        .flat_map(|m| (0..=order).map(move |n| (m, n)))
        .map(|(m, n)| MomentEntry {
            m,
            n,
            value: dirichlet_moment(m, n, p),
            ratio: table.ratio(m, n).to_string(),
        })
        .collect();
    let body = match cfg.format {
        Format::Json => json(&MomentsReport {
            config: cfg.resolved(),
            total_mass: table.mass(),
            moments: entries,
        }),
        Format::Csv => csv_table(
            &["m", "n", "moment", "ratio"],
            entries.into_iter().map(|e| {
                vec![
                    e.m.to_string(),
                    e.n.to_string(),
                    csv_float(e.value),
                    e.ratio,
                ]
            }),
        ),
    };
    Ok(Report {
        body,
        failed: Vec::new(),
    })
}

#[derive(Serialize)]
struct Node {
    x1: f64,
    x2: f64,
    weight: f64,
}

#[derive(Serialize)]
struct QuadratureReport {
    config: ResolvedConfig,
    points: usize,
    exactness_degree: u32,
    nodes: Vec<Node>,
}

pub fn quadrature(cfg: &RunConfig) -> Result<Report, Failure> {
    let p = cfg.triangle().map_err(Failure::Config)?;
    let rule =
        triangle_rule(cfg.nodes, p).map_err(|e| Failure::Numerical(anyhow!("quadrature: {e}")))?;
    let nodes: Vec<Node> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&(x1, x2), &weight)| Node { x1, x2, weight })
        .collect();
    let body = match cfg.format {
        Format::Json => json(&QuadratureReport {
            config: cfg.resolved(),
            points: rule.len(),
            exactness_degree: rule.exactness_degree,
            nodes,
        }),
        Format::Csv => csv_table(
            &["index", "x1", "x2", "weight"],
            nodes.iter().enumerate().map(|(k, n)| {
                vec![
                    k.to_string(),
                    csv_float(n.x1),
                    csv_float(n.x2),
                    csv_float(n.weight),
                ]
            }),
        ),
    };
    Ok(Report {
        body,
        failed: Vec::new(),
    })
}

#[derive(Serialize)]
struct Term {
    x1: u32,
    x2: u32,
    coefficient: f64,
}

#[derive(Serialize)]
struct SolveReport {
    config: ResolvedConfig,
    degree: u32,
    dimension: usize,
    coefficients: Vec<f64>,
    solution: Vec<Term>,
    residual: f64,
}

fn terms(p: &Poly2<f64>) -> Vec<Term> {
    p.terms()
        .map(|(m, &c)| Term {
            x1: m.x1,
            x2: m.x2,
            coefficient: c,
        })
        .collect()
}

pub fn solve(cfg: &RunConfig) -> Result<Report, Failure> {
    let p = cfg.triangle().map_err(Failure::Config)?;
    let f = cfg
        .f
        .as_ref()
        .ok_or_else(|| Failure::Config(anyhow!("`solve` needs a right-hand side `f`")))?;
    let basis = build_basis(cfg.degree, p)?;
    let gram = assemble(&basis, &cfg.phi);
    let sol = solve_weak_with(&basis, &gram, f)?;
    let rhs = basis.project(f);
    let r: Vec<f64> = gram
        .a()
        .mul_vec(&sol.coeffs)
        .iter()
        .zip(&rhs)
        .map(|(a, b)| a - b)
        .collect();
    let residual = norm2(&r);
    let body = match cfg.format {
        Format::Json => json(&SolveReport {
            config: cfg.resolved(),
            degree: sol.degree,
            dimension: basis.len(),
            coefficients: sol.coeffs.clone(),
            solution: terms(&sol.solution),
            residual,
        }),
        Format::Csv => csv_table(
            &["x1", "x2", "coefficient"],
            terms(&sol.solution)
                .into_iter()
                .map(|t| vec![t.x1.to_string(), t.x2.to_string(), csv_float(t.coefficient)]),
        ),
    };
    Ok(Report {
        body,
        failed: Vec::new(),
    })
}

struct EigSummary {
    degree: u32,
    values: Vec<f64>,
    residual: f64,
    orthogonality: f64,
}

fn eig_summary(cfg: &RunConfig, degree: u32) -> Result<EigSummary, Failure> {
    let p = cfg.triangle().map_err(Failure::Config)?;
    let basis = build_basis(degree, p)?;
    let gram = assemble(&basis, &cfg.phi);
    let eig = eig_orthonormal(degree, &gram)?;
    Ok(EigSummary {
        degree,
        residual: eig.max_residual(&gram),
        orthogonality: eig.orthogonality_defect(&gram.m),
        values: eig.values,
    })
}

#[derive(Serialize)]
struct EigReport {
    config: ResolvedConfig,
    degree: u32,
    dimension: usize,
    values: Vec<f64>,
    reciprocals: Vec<f64>,
    max_residual: f64,
    orthogonality_defect: f64,
    lower_bound_margin: f64,
}

pub fn eig(cfg: &RunConfig) -> Result<Report, Failure> {
    let s = eig_summary(cfg, cfg.degree)?;
    let body = match cfg.format {
        Format::Json => json(&EigReport {
            config: cfg.resolved(),
            degree: s.degree,
            dimension: s.values.len(),
            reciprocals: s.values.iter().map(|v| 1.0 / v).collect(),
            max_residual: s.residual,
            orthogonality_defect: s.orthogonality,
            lower_bound_margin: s.values[0] - 2.0,
            values: s.values,
        }),
        Format::Csv => csv_table(
            &["index", "value", "reciprocal"],
            s.values
                .iter()
                .enumerate()
                .map(|(k, v)| vec![k.to_string(), csv_float(*v), csv_float(1.0 / v)]),
        ),
    };
    Ok(Report {
        body,
        failed: Vec::new(),
    })
}

const SERIES: usize = 10;

#[derive(Serialize)]
struct ConvergeRow {
    degree: u32,
    /// Lowest Ritz values, up to ten.
    values: Vec<f64>,
    orthogonality_defect: f64,
    lower_bound_margin: f64,
}

#[derive(Serialize)]
struct ConvergeReport {
    config: ResolvedConfig,
    rows: Vec<ConvergeRow>,
}

pub fn converge(cfg: &RunConfig) -> Result<Report, Failure> {
    cfg.triangle().map_err(Failure::Config)?;
    let rows: Vec<ConvergeRow> = (cfg.degree_min..=cfg.degree_max)
        .into_par_iter()
        .map(|d| {
            let s = eig_summary(cfg, d)?;
            Ok(ConvergeRow {
                degree: d,
                lower_bound_margin: s.values[0] - 2.0,
                values: s.values.into_iter().take(SERIES).collect(),
                orthogonality_defect: s.orthogonality,
            })
        })
        .collect::<Result<_, Failure>>()?;
    let body = match cfg.format {
        Format::Json => json(&ConvergeReport {
            config: cfg.resolved(),
            rows,
        }),
        Format::Csv => {
            let mut header = vec!["degree".to_string()];
            header.extend((0..SERIES).map(|k| format!("nu{k}")));
            header.push("orthogonality_defect".into());
            header.push("lower_bound_margin".into());
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            csv_table(
                &header,
                rows.iter().map(|r| {
                    let mut row = vec![r.degree.to_string()];
                    row.extend(
                        (0..SERIES)
                            .map(|k| r.values.get(k).map_or(String::new(), |v| csv_float(*v))),
                    );
                    row.push(csv_float(r.orthogonality_defect));
                    row.push(csv_float(r.lower_bound_margin));
                    row
                }),
            )
        }
    };
    Ok(Report {
        body,
        failed: Vec::new(),
    })
}
