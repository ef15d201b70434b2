//! File formats: lattice and calibration JSON, labelled CSV matrices with
//! JSON sidecars, configuration-graph edge lists.
//!
//! Matrices are written as CSV with a header row and a label column. Numbers
//! use Rust's shortest round-trip float formatting, so identical inputs give
//! byte-identical files. Every writer goes through [`write_atomic`].

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::analysis::{CalibrationProblem, CalibrationResult, FitParameter, Observation, ParameterBounds};
use crate::configspace::ConfigGraph;
use crate::correlations::{CorrelationMatrix, PortEfficiencies};
use crate::error::{Error, Result};
use crate::lattice::{CouplingModel, Waveguide, WaveguideLattice};
use crate::nonclassicality::{CountMatrix, ViolationReport};
use crate::scalar::Real;

/// Writes `contents` to a temporary file beside `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().ok_or_else(|| Error::invalid(format!("`{}` is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::Io(e)
    })
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn read_json<D: for<'de> Deserialize<'de>>(path: &Path) -> Result<D> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

// ---------------------------------------------------------------- lattice

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteConfig {
    pub label: String,
    pub x_um: f64,
    pub y_um: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaConfig {
    Uniform(f64),
    PerSite(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub c_ref: f64,
    pub d_ref_um: f64,
    pub decay_um: f64,
    pub cutoff_um: f64,
    #[serde(default = "default_true")]
    pub pin_nearest: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingConfig {
    Model(ModelConfig),
    Matrix(Vec<Vec<f64>>),
}

/// JSON lattice description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub sites: Vec<SiteConfig>,
    pub beta_cm: BetaConfig,
    pub coupling: CouplingConfig,
    pub length_cm: f64,
}

impl LatticeConfig {
    pub fn to_lattice<T: Real>(&self) -> Result<WaveguideLattice<T>> {
        let sites: Vec<Waveguide<T>> =
            self.sites.iter().map(|s| Waveguide::new(s.label.clone(), T::lit(s.x_um), T::lit(s.y_um))).collect();
        let n = sites.len();
        let beta = match &self.beta_cm {
            BetaConfig::Uniform(b) => vec![T::lit(*b); n],
            BetaConfig::PerSite(v) => v.iter().map(|&b| T::lit(b)).collect(),
        };
        let length = T::lit(self.length_cm);
        match &self.coupling {
            CouplingConfig::Model(m) => {
                let model = CouplingModel::new(
                    T::lit(m.c_ref),
                    T::lit(m.d_ref_um),
                    T::lit(m.decay_um),
                    T::lit(m.cutoff_um),
                    m.pin_nearest,
                )?;
                WaveguideLattice::from_model(sites, beta, model, length)
            }
            CouplingConfig::Matrix(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Parse(format!("coupling matrix must be {n}x{n}")));
                }
                let c = DMatrix::from_fn(n, n, |i, j| T::lit(rows[i][j]));
                WaveguideLattice::new(sites, beta, c, length)
            }
        }
    }

    pub fn from_lattice<T: Real>(lattice: &WaveguideLattice<T>) -> Self {
        let sites = lattice
            .sites()
            .iter()
            .map(|s| SiteConfig { label: s.label.clone(), x_um: s.x_um.as_f64(), y_um: s.y_um.as_f64() })
            .collect();
        let beta: Vec<f64> = lattice.beta().iter().map(|b| b.as_f64()).collect();
        let beta_cm =
            if beta.iter().all(|&b| b == beta[0]) { BetaConfig::Uniform(beta[0]) } else { BetaConfig::PerSite(beta) };
        let coupling = match lattice.model() {
            Some(m) => CouplingConfig::Model(ModelConfig {
                c_ref: m.c_ref.as_f64(),
                d_ref_um: m.d_ref_um.as_f64(),
                decay_um: m.decay_um.as_f64(),
                cutoff_um: m.cutoff_um.as_f64(),
                pin_nearest: m.pin_nearest,
            }),
            None => CouplingConfig::Matrix(
                lattice.coupling().row_iter().map(|r| r.iter().map(|c| c.as_f64()).collect()).collect(),
            ),
        };
        LatticeConfig { sites, beta_cm, coupling, length_cm: lattice.length_cm().as_f64() }
    }
}

pub fn read_lattice<T: Real>(path: &Path) -> Result<WaveguideLattice<T>> {
    read_json::<LatticeConfig>(path)?.to_lattice()
}

pub fn write_lattice<T: Real>(path: &Path, lattice: &WaveguideLattice<T>) -> Result<()> {
    write_json(path, &LatticeConfig::from_lattice(lattice))
}

// ---------------------------------------------------------------- matrices

/// A numeric matrix read from CSV, with optional header and label column.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    pub column_labels: Option<Vec<String>>,
    pub row_labels: Option<Vec<String>>,
    pub values: DMatrix<f64>,
}

fn format_num(x: f64) -> String {
    format!("{x}")
}

/// Renders a labelled square matrix as CSV text.
pub fn matrix_csv<T: Real>(labels: &[String], m: &DMatrix<T>) -> Result<String> {
    matrix_csv_with(labels, m, |x| format_num(x.as_f64()))
}

fn matrix_csv_with<X>(labels: &[String], m: &DMatrix<X>, fmt: impl Fn(&X) -> String) -> Result<String>
where
    X: nalgebra::Scalar,
{
    if labels.len() != m.nrows() || labels.len() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for a {}x{} matrix",
            labels.len(),
            m.nrows(),
            m.ncols()
        )));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(labels.iter().cloned());
    w.write_record(&header)?;
    for (i, row) in m.row_iter().enumerate() {
        let mut rec = vec![labels[i].clone()];
        rec.extend(row.iter().map(&fmt));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_matrix_csv<T: Real>(path: &Path, labels: &[String], m: &DMatrix<T>) -> Result<()> {
    write_atomic(path, matrix_csv(labels, m)?.as_bytes())
}

/// Parses CSV text into a numeric matrix. A first row containing any
/// non-numeric cell is a header; a first column that is non-numeric (or empty)
/// in every row is a label column. Any other non-numeric cell is an error.
pub fn parse_matrix_csv(text: &str) -> Result<LabeledMatrix> {
    let mut rdr =
        csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows: Vec<Vec<String>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.iter().all(|c| c.is_empty()) {
            continue;
        }
        rows.push(rec.iter().map(str::to_string).collect());
    }
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix file".into()));
    }
    let numeric = |s: &str| s.parse::<f64>().is_ok();
    let header = if rows[0].iter().any(|c| !numeric(c)) { Some(rows.remove(0)) } else { None };
    if rows.is_empty() {
        return Err(Error::Parse("matrix file has a header but no rows".into()));
    }
    let has_label_col = rows.iter().all(|r| !r.is_empty() && !numeric(&r[0]));
    let skip = usize::from(has_label_col);
    let ncols = rows[0].len() - skip;
    let mut values = DMatrix::zeros(rows.len(), ncols);
    for (i, r) in rows.iter().enumerate() {
        if r.len() - skip != ncols {
            return Err(Error::Parse(format!("row {} has {} cells, expected {}", i + 1, r.len() - skip, ncols)));
        }
        for (j, cell) in r[skip..].iter().enumerate() {
            values[(i, j)] = cell
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("non-numeric cell `{cell}` at row {}, column {}", i + 1, j + 1)))?;
        }
    }
    let column_labels = header.map(|h| h[(h.len() - ncols).min(h.len())..].to_vec());
    let row_labels = has_label_col.then(|| rows.iter().map(|r| r[0].clone()).collect());
    Ok(LabeledMatrix { column_labels, row_labels, values })
}

pub fn read_matrix_csv(path: &Path) -> Result<LabeledMatrix> {
    parse_matrix_csv(&fs::read_to_string(path)?)
}

// ---------------------------------------------------------------- propagator

/// Writes `U` as `<prefix>_real.csv` and `<prefix>_imag.csv` (row = output guide).
pub fn write_propagator_csv<T: Real>(
    dir: &Path,
    prefix: &str,
    labels: &[String],
    u: &DMatrix<Complex<T>>,
) -> Result<Vec<PathBuf>> {
    let re = u.map(|c| c.re);
    let im = u.map(|c| c.im);
    let paths = vec![dir.join(format!("{prefix}_real.csv")), dir.join(format!("{prefix}_imag.csv"))];
    write_matrix_csv(&paths[0], labels, &re)?;
    write_matrix_csv(&paths[1], labels, &im)?;
    Ok(paths)
}

// ---------------------------------------------------------------- correlations

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMetadata {
    pub kind: String,
    pub input_pair: [String; 2],
    pub input_indices: [usize; 2],
    pub indistinguishability: f64,
    pub z_cm: f64,
    pub loss_applied: bool,
    pub unordered_total: f64,
}

/// Writes `<stem>.csv` and its `<stem>.json` sidecar.
pub fn write_correlations<T: Real>(
    dir: &Path,
    stem: &str,
    kind: &str,
    labels: &[String],
    c: &CorrelationMatrix<T>,
    z_cm: T,
) -> Result<Vec<PathBuf>> {
    let csv_path = dir.join(format!("{stem}.csv"));
    let json_path = dir.join(format!("{stem}.json"));
    write_matrix_csv(&csv_path, labels, &c.gamma)?;
    let (q, r) = c.input_pair;
    let meta = CorrelationMetadata {
        kind: kind.to_string(),
        input_pair: [labels[q].clone(), labels[r].clone()],
        input_indices: [q, r],
        indistinguishability: c.indistinguishability.as_f64(),
        z_cm: z_cm.as_f64(),
        loss_applied: c.loss_applied,
        unordered_total: c.unordered_total().as_f64(),
    };
    write_json(&json_path, &meta)?;
    Ok(vec![csv_path, json_path])
}

// ---------------------------------------------------------------- counts & violations

pub fn counts_csv(labels: &[String], counts: &CountMatrix) -> Result<String> {
    matrix_csv_with(labels, counts.counts(), |c| c.to_string())
}

/// Reads a labelled (or bare) symmetric matrix of non-negative integer counts.
pub fn read_counts_csv(path: &Path) -> Result<(Option<Vec<String>>, CountMatrix)> {
    let m = read_matrix_csv(path)?;
    if !m.values.is_square() {
        return Err(Error::Parse("count matrix must be square".into()));
    }
    let mut counts = DMatrix::zeros(m.values.nrows(), m.values.ncols());
    for (dst, &x) in counts.iter_mut().zip(m.values.iter()) {
        if !(x >= 0.0) || x.fract() != 0.0 || x > u64::MAX as f64 {
            return Err(Error::Parse(format!("count `{x}` is not a non-negative integer")));
        }
        *dst = x as u64;
    }
    let labels = m.column_labels.or(m.row_labels);
    let counts = CountMatrix::new(counts).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((labels, counts))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationMetadata {
    pub seed: Option<u64>,
    pub resamples: Option<usize>,
    pub budget: Option<f64>,
    pub total_counts: Option<u64>,
    pub method: String,
    pub rng: String,
    pub significant_pairs_3sigma: Vec<[String; 2]>,
}

/// Writes `v.csv`, `sigma.csv` (when present) and `sigmas.csv` plus
/// `violations.json`.
pub fn write_violation_report<T: Real>(
    dir: &Path,
    labels: &[String],
    report: &ViolationReport<T>,
    meta: &ViolationMetadata,
) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let v_path = dir.join("v.csv");
    write_matrix_csv(&v_path, labels, &report.v)?;
    out.push(v_path);
    if let Some(sigma) = &report.sigma {
        let p = dir.join("sigma.csv");
        write_matrix_csv(&p, labels, sigma)?;
        out.push(p);
    }
    if let Some(s) = &report.sigmas_violated {
        let p = dir.join("sigmas.csv");
        write_matrix_csv(&p, labels, s)?;
        out.push(p);
    }
    let p = dir.join("violations.json");
    write_json(&p, meta)?;
    out.push(p);
    Ok(out)
}

// ---------------------------------------------------------------- graph

/// `(vertices.csv, edges.csv)` contents for a configuration graph.
pub fn graph_csv<T: Real>(g: &ConfigGraph<T>) -> Result<(String, String)> {
    let mut vw = csv::Writer::from_writer(Vec::new());
    vw.write_record(["label", "potential"])?;
    for (i, p) in g.potentials().iter().enumerate() {
        vw.write_record([g.vertex_label(i), format_num(p.as_f64())])?;
    }
    let mut ew = csv::Writer::from_writer(Vec::new());
    ew.write_record(["vertex_a", "vertex_b", "amplitude"])?;
    for e in g.edges() {
        ew.write_record([g.vertex_label(e.a), g.vertex_label(e.b), format_num(e.amplitude.as_f64())])?;
    }
    let finish = |w: csv::Writer<Vec<u8>>| -> Result<String> {
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    };
    Ok((finish(vw)?, finish(ew)?))
}

pub fn write_graph<T: Real>(dir: &Path, g: &ConfigGraph<T>) -> Result<Vec<PathBuf>> {
    let (v, e) = graph_csv(g)?;
    let paths = vec![dir.join("vertices.csv"), dir.join("edges.csv")];
    write_atomic(&paths[0], v.as_bytes())?;
    write_atomic(&paths[1], e.as_bytes())?;
    Ok(paths)
}

// ---------------------------------------------------------------- calibration

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyConfig {
    pub eta_in: Vec<f64>,
    pub eta_out: Vec<f64>,
}

impl EfficiencyConfig {
    pub fn to_efficiencies<T: Real>(&self) -> Result<PortEfficiencies<T>> {
        PortEfficiencies::new(
            self.eta_in.iter().map(|&x| T::lit(x)).collect(),
            self.eta_out.iter().map(|&x| T::lit(x)).collect(),
        )
    }

    pub fn from_efficiencies<T: Real>(e: &PortEfficiencies<T>) -> Self {
        EfficiencyConfig {
            eta_in: e.eta_in.iter().map(|x| x.as_f64()).collect(),
            eta_out: e.eta_out.iter().map(|x| x.as_f64()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationConfig {
    /// Label of the guide the light was launched into.
    pub input: String,
    pub intensities: Vec<f64>,
}

/// A free parameter: `c_ref`, `decay_um`, `coupling` (with `sites`), or
/// `beta` / `eta_in` / `eta_out` (with `site`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeParameterConfig {
    pub parameter: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub site: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sites: Option<[String; 2]>,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationConfig {
    pub observations: Vec<ObservationConfig>,
    pub free: Vec<FreeParameterConfig>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub efficiencies: Option<EfficiencyConfig>,
}

fn default_tolerance() -> f64 {
    1e-10
}

fn default_restarts() -> usize {
    crate::analysis::DEFAULT_RESTARTS
}

impl CalibrationConfig {
    pub fn to_problem<T: Real>(&self, lattice: &WaveguideLattice<T>, seed: u64) -> Result<CalibrationProblem<T>> {
        let observed = self
            .observations
            .iter()
            .map(|o| {
                Ok(Observation {
                    input: lattice.site_index(&o.input)?,
                    intensities: o.intensities.iter().map(|&x| T::lit(x)).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let free = self
            .free
            .iter()
            .map(|f| {
                let site = || {
                    f.site
                        .as_deref()
                        .ok_or_else(|| Error::Parse(format!("parameter `{}` needs a `site`", f.parameter)))
                        .and_then(|s| lattice.site_index(s))
                };
                let parameter = match f.parameter.as_str() {
                    "c_ref" => FitParameter::CouplingScale,
                    "decay_um" => FitParameter::DecayLength,
                    "coupling" => {
                        let [a, b] = f
                            .sites
                            .as_ref()
                            .ok_or_else(|| Error::Parse("parameter `coupling` needs `sites`".into()))?;
                        FitParameter::Coupling(lattice.site_index(a)?, lattice.site_index(b)?)
                    }
                    "beta" => FitParameter::Beta(site()?),
                    "eta_in" => FitParameter::EtaIn(site()?),
                    "eta_out" => FitParameter::EtaOut(site()?),
                    other => return Err(Error::Parse(format!("unknown fit parameter `{other}`"))),
                };
                Ok(ParameterBounds { parameter, lower: T::lit(f.lower), upper: T::lit(f.upper) })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut problem = CalibrationProblem::new(observed, free, T::lit(self.tolerance));
        problem.restarts = self.restarts;
        problem.seed = seed;
        problem.efficiencies = self.efficiencies.as_ref().map(|e| e.to_efficiencies()).transpose()?;
        Ok(problem)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub residual: f64,
    pub initial_residual: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub parameters: Vec<(String, f64)>,
    pub efficiencies: EfficiencyConfig,
}

impl FitReport {
    pub fn from_result<T: Real>(r: &CalibrationResult<T>) -> Self {
        let labels = r.lattice.labels();
        let name = |p: FitParameter| match p {
            FitParameter::CouplingScale => "c_ref".to_string(),
            FitParameter::DecayLength => "decay_um".to_string(),
            FitParameter::Coupling(a, b) => format!("coupling[{}-{}]", labels[a], labels[b]),
            FitParameter::Beta(q) => format!("beta[{}]", labels[q]),
            FitParameter::EtaIn(q) => format!("eta_in[{}]", labels[q]),
            FitParameter::EtaOut(q) => format!("eta_out[{}]", labels[q]),
        };
        FitReport {
            residual: r.residual.as_f64(),
            initial_residual: r.initial_residual.as_f64(),
            evaluations: r.evaluations,
            converged: r.converged,
            parameters: r.parameters.iter().map(|(p, v)| (name(*p), v.as_f64())).collect(),
            efficiencies: EfficiencyConfig::from_efficiencies(&r.efficiencies),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_swiss_cross;

    #[test]
    fn lattice_json_round_trip() {
        let model = CouplingModel::evanescent(1.5, 18.0).unwrap();
        let lat = build_swiss_cross(18.0, 19.0, 1.5, 0.2, 1.4, &model).unwrap();
        let cfg = LatticeConfig::from_lattice(&lat);
        let text = serde_json::to_string(&cfg).unwrap();
        let back: LatticeConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_lattice::<f64>().unwrap(), lat);
        let explicit = lat.with_coupling(lat.coupling().clone()).unwrap();
        let back = LatticeConfig::from_lattice(&explicit).to_lattice::<f64>().unwrap();
        assert_eq!(back, explicit);
    }

    #[test]
    fn parses_documented_schema() {
        let text = r#"{
            "sites": [{"label": "a", "x_um": 0, "y_um": 0}, {"label": "b", "x_um": 18, "y_um": 0}],
            "beta_cm": [0.1, 0.2],
            "coupling": {"matrix": [[0, 1.5], [1.5, 0]]},
            "length_cm": 1.4
        }"#;
        let lat: WaveguideLattice<f64> = serde_json::from_str::<LatticeConfig>(text).unwrap().to_lattice().unwrap();
        assert_eq!(lat.hamiltonian(), DMatrix::from_row_slice(2, 2, &[0.1, 1.5, 1.5, 0.2]));
        let text = r#"{
            "sites": [{"label": "a", "x_um": 0, "y_um": 0}, {"label": "b", "x_um": 18, "y_um": 0}],
            "beta_cm": 0,
            "coupling": {"model": {"c_ref": 1.5, "d_ref_um": 18, "decay_um": 6, "cutoff_um": 30}},
            "length_cm": 1.4
        }"#;
        let lat: WaveguideLattice<f64> = serde_json::from_str::<LatticeConfig>(text).unwrap().to_lattice().unwrap();
        assert_eq!(lat.coupling()[(0, 1)], 1.5);
        assert!(lat.model().unwrap().pin_nearest);
    }

    #[test]
    fn matrix_csv_round_trip_and_errors() {
        let labels = vec!["X1".to_string(), "X4".to_string()];
        let m = DMatrix::from_row_slice(2, 2, &[0.5, 0.1, 0.1, 1.0 / 3.0]);
        let text = matrix_csv(&labels, &m).unwrap();
        assert!(text.starts_with(",X1,X4\nX1,0.5,0.1\n"));
        let back = parse_matrix_csv(&text).unwrap();
        assert_eq!(back.values, m);
        assert_eq!(back.column_labels.as_deref(), Some(&labels[..]));
        assert_eq!(back.row_labels.as_deref(), Some(&labels[..]));

        let bare = parse_matrix_csv("1,2,3\n4,5,6\n").unwrap();
        assert_eq!(bare.values.shape(), (2, 3));
        assert!(bare.column_labels.is_none() && bare.row_labels.is_none());
        assert!(matches!(parse_matrix_csv(",a,b\na,1,x\nb,2,3\n"), Err(Error::Parse(_))));
        assert!(parse_matrix_csv("1,2\n3\n").is_err());
        assert!(parse_matrix_csv("").is_err());
    }

    #[test]
    fn counts_csv_round_trip() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let counts = CountMatrix::new(DMatrix::from_row_slice(2, 2, &[3, 1, 1, 7])).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("counts.csv");
        write_atomic(&p, counts_csv(&labels, &counts).unwrap().as_bytes()).unwrap();
        let (l, back) = read_counts_csv(&p).unwrap();
        assert_eq!(back, counts);
        assert_eq!(l.unwrap(), labels);
        write_atomic(&p, b",a,b\na,1.5,0\nb,0,1\n").unwrap();
        assert!(read_counts_csv(&p).is_err());
        write_atomic(&p, b",a,b\na,1,2\nb,0,1\n").unwrap();
        assert!(read_counts_csv(&p).is_err());
    }
}
