//! Reproducible sweeps over graph families: equatorial root moduli of
//! ground states, spectral gaps, and gaps under random phase shifts.

use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::{enum_connected, enum_trees};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::hamiltonian::{build_epr_like, build_phase_shifted, spectral_data, star_spectrum_analytic, MAX_QUBITS};
use crate::ly::equatorial_scan;

pub const CSV_HEADER: &str = "# lytensor-study v1";
/// Root-modulus rows pass iff `margin >= -LY_TOLERANCE`.
pub const LY_TOLERANCE: f64 = 1e-8;
/// Gap rows pass iff `margin >= -GAP_TOLERANCE`.
pub const GAP_TOLERANCE: f64 = 1e-9;
/// Cross-check rows pass iff `|margin| <= CHECK_TOLERANCE`.
pub const CHECK_TOLERANCE: f64 = 1e-9;
/// Roots up to this multiple of `s^{-1/2}` are kept for plotting.
pub const ROOT_WINDOW: f64 = 1.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StudyKind {
    LyRadius,
    SpectralGap,
    PhaseShifted,
}

impl StudyKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StudyKind::LyRadius => "ly-radius",
            StudyKind::SpectralGap => "spectral-gap",
            StudyKind::PhaseShifted => "phase-shifted",
        }
    }
}

impl FromStr for StudyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ly-radius" => Ok(StudyKind::LyRadius),
            "gap" | "spectral-gap" => Ok(StudyKind::SpectralGap),
            "phase" | "phase-shifted" => Ok(StudyKind::PhaseShifted),
            _ => invalid(format!("unknown study '{s}' (ly-radius, gap, phase)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Trees,
    Connected,
    Paths,
    Cycles,
    Stars,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trees" => Ok(Family::Trees),
            "connected" => Ok(Family::Connected),
            "paths" => Ok(Family::Paths),
            "cycles" => Ok(Family::Cycles),
            "stars" => Ok(Family::Stars),
            _ => invalid(format!("unknown family '{s}' (trees, connected, paths, cycles, stars)")),
        }
    }
}

/// Graphs of a family on exactly `n` vertices. Families without a member
/// of that size (cycles below 3, stars below 3) yield nothing.
pub fn family_graphs(family: Family, n: usize, dedup: bool) -> Result<Vec<Graph>> {
    match family {
        Family::Trees => enum_trees(n, dedup),
        Family::Connected => enum_connected(n, dedup),
        Family::Paths => Ok(if n >= 1 { vec![Graph::path(n)?] } else { Vec::new() }),
        Family::Cycles => Ok(if n >= 3 { vec![Graph::cycle(n)?] } else { Vec::new() }),
        Family::Stars => Ok(if n >= 3 { vec![Graph::star(n)?] } else { Vec::new() }),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub study: StudyKind,
    pub n_min: usize,
    pub n_max: usize,
    pub family: Family,
    /// Random `s` values per graph (ly-radius) or grid points (gap studies).
    pub samples: usize,
    pub seed: u64,
    pub dedup: bool,
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_min < 2 || self.n_min > self.n_max {
            return invalid(format!("need 2 <= n_min <= n_max, got {}..{}", self.n_min, self.n_max));
        }
        if self.n_max > MAX_QUBITS {
            return Err(Error::TooLarge {
                what: "qubits for a study",
                value: self.n_max,
                cap: MAX_QUBITS,
            });
        }
        if self.samples == 0 {
            return invalid("samples must be positive");
        }
        Ok(())
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyRecord {
    pub study: String,
    pub graph_id: String,
    pub n: usize,
    pub s: f64,
    pub metric: f64,
    pub reference: f64,
    pub margin: f64,
    pub sector: String,
    pub pass: bool,
}

/// An equatorial root near the circle of radius `s^{-1/2}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub graph_id: String,
    pub n: usize,
    pub s: f64,
    pub y: String,
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StudyOutput {
    pub records: Vec<StudyRecord>,
    pub roots: Vec<RootRecord>,
}

impl StudyOutput {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf29ce484222325u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x100000001b3)
    })
}

/// Generator owned by one graph, so rows do not depend on scheduling.
pub fn graph_rng(seed: u64, graph_id: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ fnv1a(graph_id))
}

/// `g` with one uniform phase in `[0, 2π)` per edge, drawn from its own generator.
pub fn random_phases(g: &Graph, seed: u64) -> Result<Graph> {
    let mut rng = graph_rng(seed, &g.id());
    let thetas: Vec<f64> = (0..g.edges().len())
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    g.with_phases(&thetas)
}

/// `k` uniform points from 0.01 to 0.99 inclusive (`0.5` when `k = 1`).
pub fn s_grid(k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![0.5];
    }
    (0..k).map(|i| 0.01 + 0.98 * i as f64 / (k - 1) as f64).collect()
}

/// `k` uniform samples in `(0.05, 0.95)`.
pub fn s_random(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    (0..k).map(|_| rng.gen_range(0.05..0.95)).collect()
}

fn record(study: &str, g: &Graph, s: f64, metric: f64, reference: f64, sector: &str, pass: bool) -> StudyRecord {
    StudyRecord {
        study: study.to_string(),
        graph_id: g.id(),
        n: g.n_vertices(),
        s,
        metric,
        reference,
        margin: metric - reference,
        sector: sector.to_string(),
        pass,
    }
}

fn error_row(study: &str, g: &Graph, s: f64, reference: f64, e: &Error) -> StudyRecord {
    log::warn!("{study} failed on {} at s={s}: {e}", g.id());
    record(study, g, s, f64::NAN, reference, "error", false)
}

fn check_row(study: &str, g: &Graph, s: f64, metric: f64, reference: f64, sector: &str) -> StudyRecord {
    let pass = (metric - reference).abs() <= CHECK_TOLERANCE;
    record(&format!("{study}-check"), g, s, metric, reference, sector, pass)
}

fn ly_radius_item(g: &Graph, s: f64) -> (Vec<StudyRecord>, Vec<RootRecord>) {
    let study = StudyKind::LyRadius.as_str();
    let reference = s.powf(-0.5);
    let run = || -> Result<_> {
        let h = build_epr_like(g, s)?;
        let spec = spectral_data(&h)?;
        let psi = spec.ground_state(g.n_vertices())?;
        let scan = equatorial_scan(&psi, Some(ROOT_WINDOW * reference))?;
        Ok((spec, scan))
    };
    match run() {
        Err(e) => (vec![error_row(study, g, s, reference, &e)], Vec::new()),
        Ok((spec, scan)) => {
            let sector = spec.ground_sector.map_or("none", |p| p.as_str());
            let metric = scan.min_modulus;
            let mut rows = vec![record(
                study,
                g,
                s,
                metric,
                reference,
                sector,
                metric - reference >= -LY_TOLERANCE,
            )];
            if g.is_star() {
                if let Ok(a) = star_spectrum_analytic(g.n_vertices(), s) {
                    rows.push(check_row("ly-radius-star", g, s, spec.lambda1, a.lambda1_even, sector));
                }
            }
            let roots = scan
                .near_roots
                .into_iter()
                .map(|r| RootRecord {
                    graph_id: g.id(),
                    n: g.n_vertices(),
                    s,
                    y: r.y,
                    re: r.root.re,
                    im: r.root.im,
                    modulus: r.root.norm(),
                })
                .collect();
            (rows, roots)
        }
    }
}

fn gap_item(kind: StudyKind, g: &Graph, phased: &Graph, s: f64) -> Vec<StudyRecord> {
    let study = kind.as_str();
    let reference = 1.0 - s * s;
    let gap_of = |graph: &Graph| -> Result<crate::hamiltonian::SpectralData> {
        let h = match kind {
            StudyKind::PhaseShifted => build_phase_shifted(graph, s)?,
            _ => build_epr_like(graph, s)?,
        };
        spectral_data(&h)
    };
    let spec = match gap_of(phased) {
        Ok(v) => v,
        Err(e) => return vec![error_row(study, g, s, reference, &e)],
    };
    let sector = spec.lambda2_sector.map_or("none", |p| p.as_str());
    let mut rows = vec![record(
        study,
        g,
        s,
        spec.gap,
        reference,
        sector,
        spec.gap - reference >= -GAP_TOLERANCE,
    )];
    let prefix = if kind == StudyKind::PhaseShifted {
        "phase-shifted"
    } else {
        "spectral-gap"
    };
    if g.is_star() {
        if let Ok(a) = star_spectrum_analytic(g.n_vertices(), s) {
            rows.push(check_row(&format!("{prefix}-star"), g, s, spec.gap, a.gap, sector));
        }
    }
    if kind == StudyKind::PhaseShifted && g.is_tree() {
        match gap_of(g) {
            Ok(plain) => rows.push(check_row("phase-shifted-tree", g, s, spec.gap, plain.gap, sector)),
            Err(e) => rows.push(error_row("phase-shifted-tree-check", g, s, f64::NAN, &e)),
        }
    }
    rows
}

/// Runs a study. Work items `(graph, s)` run in parallel; rows are sorted
/// by `(graph_id, s, study)` so the output does not depend on scheduling.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyOutput> {
    cfg.validate()?;
    let mut graphs = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        graphs.extend(family_graphs(cfg.family, n, cfg.dedup)?);
    }
    let mut items: Vec<(Graph, Graph, f64)> = Vec::new();
    for g in graphs {
        let (phased, svals) = match cfg.study {
            StudyKind::LyRadius => (g.clone(), s_random(&mut graph_rng(cfg.seed, &g.id()), cfg.samples)),
            StudyKind::SpectralGap => (g.clone(), s_grid(cfg.samples)),
            StudyKind::PhaseShifted => (random_phases(&g, cfg.seed)?, s_grid(cfg.samples)),
        };
        items.extend(svals.into_iter().map(|s| (g.clone(), phased.clone(), s)));
    }
    let parts: Vec<(Vec<StudyRecord>, Vec<RootRecord>)> = items
        .par_iter()
        .map(|(g, phased, s)| match cfg.study {
            StudyKind::LyRadius => ly_radius_item(g, *s),
            kind => (gap_item(kind, g, phased, *s), Vec::new()),
        })
        .collect();
    let mut out = StudyOutput::default();
    for (rows, roots) in parts {
        out.records.extend(rows);
        out.roots.extend(roots);
    }
    out.records.sort_by(|a, b| {
        (a.graph_id.as_str(), a.s, a.study.as_str())
            .partial_cmp(&(b.graph_id.as_str(), b.s, b.study.as_str()))
            .expect("s values are finite")
    });
    out.roots.sort_by(|a, b| {
        (a.graph_id.as_str(), a.s, a.y.as_str(), a.modulus, a.re, a.im)
            .partial_cmp(&(b.graph_id.as_str(), b.s, b.y.as_str(), b.modulus, b.re, b.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidArgument(format!("csv: {other:?}")),
    }
}

fn write_rows<W: Write, T: Serialize>(mut w: W, rows: &[T], header: &[&str]) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    let mut cw = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    cw.write_record(header).map_err(csv_error)?;
    for r in rows {
        cw.serialize(r).map_err(csv_error)?;
    }
    cw.flush()?;
    Ok(())
}

/// Columns `study,graph_id,n,s,metric,reference,margin,sector,pass` after
/// a version comment line.
pub fn write_records<W: Write>(w: W, rows: &[StudyRecord]) -> Result<()> {
    write_rows(
        w,
        rows,
        &[
            "study",
            "graph_id",
            "n",
            "s",
            "metric",
            "reference",
            "margin",
            "sector",
            "pass",
        ],
    )
}

/// Columns `graph_id,n,s,y,re,im,modulus` after a version comment line.
pub fn write_roots<W: Write>(w: W, rows: &[RootRecord]) -> Result<()> {
    write_rows(w, rows, &["graph_id", "n", "s", "y", "re", "im", "modulus"])
}

/// Reads a file written by [`write_records`].
pub fn read_records<R: std::io::Read>(r: R) -> Result<Vec<StudyRecord>> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    rd.deserialize().map(|row| row.map_err(csv_error)).collect()
}
