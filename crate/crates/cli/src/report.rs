use serde::Serialize;

use qid_core::closedform::{
    pmax_discrimination, pmax_identification, pmax_identification_qubit, qubit_pmax_via_racah, racah_matrices,
};
use qid_core::montecarlo::{haar_moment_check, mc_mean_discrimination, mc_mean_identification};
use qid_core::povm::{build_optimal_povm, mean_success_optimal_spectral, validate_povm};
use qid_core::spectral::decompose_a;
use qid_core::symspace::{oracle_deviation, CompressedSpace, Reference};

use crate::args::{Command, McKind};
use crate::number::{format_f64, to_json};
use crate::svg;

pub enum Failure {
    Usage(String),
}

impl From<qid_core::Error> for Failure {
    fn from(e: qid_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

#[derive(Debug, Serialize)]
pub struct Pmax {
    pub p_identification: f64,
    pub p_discrimination_limit: f64,
    pub method_agreement: bool,
    #[serde(skip)]
    d: usize,
    #[serde(skip)]
    n: usize,
}

#[derive(Debug, Serialize)]
pub struct Block {
    pub labels: Vec<String>,
    pub eigenvalue: f64,
    pub predicted_multiplicity: usize,
    pub observed_multiplicity: usize,
    pub max_deviation: f64,
}

#[derive(Debug, Serialize)]
pub struct Spectrum {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub dim: usize,
    pub blocks: Vec<Block>,
    pub max_deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct PovmCheck {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub pairs: usize,
    pub seed: u64,
    pub tol: f64,
    pub min_eigenvalues: [f64; 3],
    pub completeness_residual: f64,
    pub noerror_residual_max: f64,
    pub operator_residual: f64,
    pub exchange_residual: f64,
    pub hermiticity_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct MonteCarlo {
    pub kind: &'static str,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    pub mean: f64,
    pub stderr: Option<f64>,
    pub target: f64,
    pub agreement: bool,
}

#[derive(Debug, Serialize)]
pub struct FigureRow {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub p_identification: f64,
    pub p_discrimination: f64,
}

#[derive(Debug, Serialize)]
pub struct RacahEntry {
    pub two_j: u32,
    pub entries: [[f64; 2]; 2],
    pub orthogonality_residual: f64,
}

#[derive(Debug, Serialize)]
pub struct Racah {
    #[serde(rename = "N")]
    pub n: usize,
    pub matrices: Vec<RacahEntry>,
    pub p_identification: f64,
    pub closed_form: f64,
    pub agreement: bool,
}

#[derive(Debug, Serialize)]
pub struct Oracle {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub s01_deviation: f64,
    pub s02_deviation: f64,
    pub passed: bool,
}

#[derive(Debug)]
pub enum Report {
    Pmax(Pmax),
    Spectrum(Spectrum),
    PovmCheck(PovmCheck),
    MonteCarlo(MonteCarlo),
    Figure(Vec<FigureRow>),
    Racah(Racah),
    Oracle(Oracle),
}

pub(crate) fn execute(command: &Command) -> Result<Report, Failure> {
    Ok(match *command {
        Command::Pmax { d, n, tol } => {
            let closed = pmax_identification(d, n)?;
            let spectral = mean_success_optimal_spectral(d, n)?;
            Report::Pmax(Pmax {
                p_identification: closed,
                p_discrimination_limit: pmax_discrimination(d)?,
                method_agreement: (closed - spectral).abs() <= tol,
                d,
                n,
            })
        }
        Command::Spectrum { d, n, tol } => {
            let space = CompressedSpace::new(d, n)?;
            let dim = space.dim();
            let decomposition = match decompose_a(&space) {
                Ok(x) => x,
                Err(qid_core::Error::UnassignedEigenvalue { value }) => {
                    eprintln!("qid: eigenvalue {} matches no predicted block", format_f64(value));
                    return Ok(Report::Spectrum(Spectrum {
                        d,
                        n,
                        dim,
                        blocks: Vec::new(),
                        max_deviation: f64::INFINITY,
                        passed: false,
                    }));
                }
                Err(e) => return Err(e.into()),
            };
            let blocks: Vec<Block> = decomposition
                .blocks()
                .iter()
                .map(|b| Block {
                    labels: b.labels.iter().map(ToString::to_string).collect(),
                    eigenvalue: b.eigenvalue,
                    predicted_multiplicity: b.predicted_multiplicity,
                    observed_multiplicity: b.observed_multiplicity,
                    max_deviation: b.max_deviation,
                })
                .collect();
            let max_deviation = blocks.iter().map(|b| b.max_deviation).fold(0.0, f64::max);
            let counts = blocks
                .iter()
                .all(|b| b.predicted_multiplicity == b.observed_multiplicity);
            Report::Spectrum(Spectrum {
                d,
                n,
                dim,
                blocks,
                max_deviation,
                passed: counts && max_deviation <= tol,
            })
        }
        Command::PovmCheck { d, n, pairs, tol, seed } => {
            let povm = build_optimal_povm(d, n)?;
            let r = validate_povm(&povm, pairs, tol, seed)?;
            Report::PovmCheck(PovmCheck {
                d,
                n,
                pairs,
                seed,
                tol,
                min_eigenvalues: r.min_eigenvalues,
                completeness_residual: r.completeness_residual,
                noerror_residual_max: r.noerror_residual_max,
                operator_residual: r.operator_residual,
                exchange_residual: r.exchange_residual,
                hermiticity_residual: r.hermiticity_residual,
                passed: r.passed(),
            })
        }
        Command::Mc {
            d,
            n,
            kind,
            samples,
            seed,
            tol,
        } => Report::MonteCarlo(match kind {
            McKind::Identification => {
                let est = mc_mean_identification(d, n, samples, seed)?;
                let target = pmax_identification(d, n)?;
                MonteCarlo {
                    kind: "identification",
                    d,
                    n: Some(n),
                    samples,
                    seed,
                    mean: est.mean,
                    stderr: Some(est.stderr),
                    target,
                    agreement: est.agrees_with(target, tol),
                }
            }
            McKind::Discrimination => {
                let est = mc_mean_discrimination(d, samples, seed)?;
                let target = pmax_discrimination(d)?;
                MonteCarlo {
                    kind: "discrimination",
                    d,
                    n: None,
                    samples,
                    seed,
                    mean: est.mean,
                    stderr: Some(est.stderr),
                    target,
                    agreement: est.agrees_with(target, tol),
                }
            }
            McKind::Moment => {
                let deviation = haar_moment_check(d, n, samples, seed)?;
                MonteCarlo {
                    kind: "moment",
                    d,
                    n: Some(n),
                    samples,
                    seed,
                    mean: deviation,
                    stderr: None,
                    target: 0.0,
                    agreement: deviation <= tol,
                }
            }
        }),
        Command::Figure { ref d, ref n, .. } => {
            let mut rows = Vec::new();
            for &dd in &d.0 {
                let limit = pmax_discrimination(dd)?;
                for nn in n.clone() {
                    rows.push(FigureRow {
                        d: dd,
                        n: nn,
                        p_identification: pmax_identification(dd, nn)?,
                        p_discrimination: limit,
                    });
                }
            }
            Report::Figure(rows)
        }
        Command::Racah { n, tol } => {
            let matrices: Vec<RacahEntry> = racah_matrices(n)?
                .into_iter()
                .map(|r| RacahEntry {
                    two_j: r.two_total,
                    orthogonality_residual: r.orthogonality_residual(),
                    entries: r.entries,
                })
                .collect();
            let p = qubit_pmax_via_racah(n)?;
            let closed = pmax_identification_qubit(n)?;
            let orthogonal = matrices.iter().all(|m| m.orthogonality_residual <= tol);
            Report::Racah(Racah {
                n,
                matrices,
                p_identification: p,
                closed_form: closed,
                agreement: orthogonal && (p - closed).abs() <= tol,
            })
        }
        Command::Oracle { d, n, tol } => {
            let space = CompressedSpace::new(d, n)?;
            let s01 = oracle_deviation(&space, Reference::First)?;
            let s02 = oracle_deviation(&space, Reference::Second)?;
            Report::Oracle(Oracle {
                d,
                n,
                s01_deviation: s01,
                s02_deviation: s02,
                passed: s01 <= tol && s02 <= tol,
            })
        }
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn table(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| csv_field(c)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

impl Report {
    pub fn passed(&self) -> bool {
        match self {
            Report::Pmax(r) => r.method_agreement,
            Report::Spectrum(r) => r.passed,
            Report::PovmCheck(r) => r.passed,
            Report::MonteCarlo(r) => r.agreement,
            Report::Figure(_) => true,
            Report::Racah(r) => r.agreement,
            Report::Oracle(r) => r.passed,
        }
    }

    pub fn json(&self) -> String {
        let mut s = match self {
            Report::Pmax(r) => to_json(r),
            Report::Spectrum(r) => to_json(r),
            Report::PovmCheck(r) => to_json(r),
            Report::MonteCarlo(r) => to_json(r),
            Report::Figure(r) => to_json(r),
            Report::Racah(r) => to_json(r),
            Report::Oracle(r) => to_json(r),
        };
        s.push('\n');
        s
    }

    pub fn csv(&self) -> String {
        let f = |v: f64| format_f64(v);
        match self {
            Report::Pmax(r) => table(
                "d,N,p_identification,p_discrimination_limit,method_agreement",
                [vec![
                    r.d.to_string(),
                    r.n.to_string(),
                    f(r.p_identification),
                    f(r.p_discrimination_limit),
                    r.method_agreement.to_string(),
                ]],
            ),
            Report::Spectrum(r) => table(
                "labels,eigenvalue,predicted_multiplicity,observed_multiplicity,max_deviation",
                r.blocks.iter().map(|b| {
                    vec![
                        b.labels.join(" "),
                        f(b.eigenvalue),
                        b.predicted_multiplicity.to_string(),
                        b.observed_multiplicity.to_string(),
                        f(b.max_deviation),
                    ]
                }),
            ),
            Report::PovmCheck(r) => table(
                "d,N,pairs,seed,tol,min_eigenvalue_e0,min_eigenvalue_e1,min_eigenvalue_e2,completeness_residual,\
                 noerror_residual_max,operator_residual,exchange_residual,hermiticity_residual,passed",
                [vec![
                    r.d.to_string(),
                    r.n.to_string(),
                    r.pairs.to_string(),
                    r.seed.to_string(),
                    f(r.tol),
                    f(r.min_eigenvalues[0]),
                    f(r.min_eigenvalues[1]),
                    f(r.min_eigenvalues[2]),
                    f(r.completeness_residual),
                    f(r.noerror_residual_max),
                    f(r.operator_residual),
                    f(r.exchange_residual),
                    f(r.hermiticity_residual),
                    r.passed.to_string(),
                ]],
            ),
            Report::MonteCarlo(r) => table(
                "kind,d,N,samples,seed,mean,stderr,target,agreement",
                [vec![
                    r.kind.to_string(),
                    r.d.to_string(),
                    opt(r.n),
                    r.samples.to_string(),
                    r.seed.to_string(),
                    f(r.mean),
                    opt(r.stderr.map(f)),
                    f(r.target),
                    r.agreement.to_string(),
                ]],
            ),
            Report::Figure(rows) => table(
                "d,N,p_identification,p_discrimination",
                rows.iter().map(|r| {
                    vec![
                        r.d.to_string(),
                        r.n.to_string(),
                        f(r.p_identification),
                        f(r.p_discrimination),
                    ]
                }),
            ),
            Report::Racah(r) => table(
                "two_j,r_plus_plus,r_plus_minus,r_minus_plus,r_minus_minus,orthogonality_residual",
                r.matrices.iter().map(|m| {
                    vec![
                        m.two_j.to_string(),
                        f(m.entries[0][0]),
                        f(m.entries[0][1]),
                        f(m.entries[1][0]),
                        f(m.entries[1][1]),
                        f(m.orthogonality_residual),
                    ]
                }),
            ),
            Report::Oracle(r) => table(
                "d,N,s01_deviation,s02_deviation,passed",
                [vec![
                    r.d.to_string(),
                    r.n.to_string(),
                    f(r.s01_deviation),
                    f(r.s02_deviation),
                    r.passed.to_string(),
                ]],
            ),
        }
    }

    /// SVG line chart for figure reports.
    pub fn chart(&self) -> Option<String> {
        match self {
            Report::Figure(rows) => Some(svg::line_chart(rows)),
            _ => None,
        }
    }
}
