//! Symmetry-reduced enumeration of orientations, witness search, and machine
//! checks of the structural claims about grid labelings.

use crate::digraph::{
    automorphisms, bits_to_string, canonical_form, constraint_pairs, girth, longest_dipath,
    DigraphError, OrientedGraph,
};
use crate::lattice::{build_patch, Coord, GridError, PatchSpec, UnderlyingGrid};
use crate::solver::{solve_lambda, SolveError};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Cap on the edge count of an exhaustive orientation sweep.
pub const SWEEP_EDGE_CAP: usize = 20;

#[derive(Error, Debug)]
pub enum ExplorerError {
    #[error("sweep too large: {0} edges exceeds the cap of {1}")]
    TooManyEdges(usize, usize),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// One symmetry class of orientations.
#[derive(Clone, Debug, Serialize)]
pub struct OrientationReport {
    /// Lexicographically smallest direction bitstring of the class.
    pub canonical: String,
    #[serde(rename = "classSize")]
    pub class_size: u64,
    #[serde(rename = "longestDipath")]
    pub longest_dipath: usize,
    pub girth: Option<usize>,
    /// `None` when the per-class solve budget was exhausted.
    pub lambda: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HistEntry {
    #[serde(rename = "longestDipath")]
    pub longest_dipath: usize,
    pub lambda: u32,
    pub count: u64,
}

/// Full result of an orientation sweep over one patch.
#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub patch: String,
    #[serde(rename = "includeReversal")]
    pub include_reversal: bool,
    #[serde(rename = "edgeCount")]
    pub edge_count: usize,
    #[serde(rename = "totalOrientations")]
    pub total_orientations: u64,
    pub reports: Vec<OrientationReport>,
    pub histogram: Vec<HistEntry>,
    #[serde(rename = "maxLambda")]
    pub max_lambda: Option<u32>,
}

fn run_with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) if j >= 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .expect("thread pool builds")
            .install(f),
        _ => f(),
    }
}

/// Classifies every orientation of `grid` by canonical form and solves one
/// representative per class. Output ordering is by canonical bitstring, so
/// results are byte-identical regardless of the worker count.
pub fn enumerate_orientations(
    grid: &UnderlyingGrid,
    label: &str,
    include_reversal: bool,
    budget_per_solve: Option<u64>,
    jobs: Option<usize>,
) -> Result<SweepSummary, ExplorerError> {
    let m = grid.edge_count();
    if m > SWEEP_EDGE_CAP {
        return Err(ExplorerError::TooManyEdges(m, SWEEP_EDGE_CAP));
    }
    let group = automorphisms(grid)?;
    let total = 1u64 << m;
    let mut classes: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
    for code in 0..total {
        let d = OrientedGraph::orient_code(grid.clone(), code)?;
        *classes
            .entry(canonical_form(&d, &group, include_reversal))
            .or_insert(0) += 1;
    }
    let g = girth(grid);
    let class_list: Vec<(Vec<bool>, u64)> = classes.into_iter().collect();
    let reports: Vec<OrientationReport> = run_with_jobs(jobs, || {
        class_list
            .par_iter()
            .map(|(bits, size)| {
                let d = OrientedGraph::orient(grid.clone(), bits.clone())
                    .expect("canonical bits match the grid");
                let (l, _) = longest_dipath(&d);
                let lambda = match solve_lambda(&d, budget_per_solve) {
                    Ok(r) => Some(r.lambda),
                    Err(SolveError::BudgetExhausted { .. }) => None,
                    Err(e) => panic!("sweep solve failed: {e}"),
                };
                OrientationReport {
                    canonical: bits_to_string(bits),
                    class_size: *size,
                    longest_dipath: l,
                    girth: g,
                    lambda,
                }
            })
            .collect()
    });
    let mut histogram: BTreeMap<(usize, u32), u64> = BTreeMap::new();
    for r in &reports {
        if let Some(lam) = r.lambda {
            *histogram.entry((r.longest_dipath, lam)).or_insert(0) += r.class_size;
        }
    }
    let max_lambda = reports.iter().filter_map(|r| r.lambda).max();
    Ok(SweepSummary {
        patch: label.to_string(),
        include_reversal,
        edge_count: m,
        total_orientations: total,
        reports,
        histogram: histogram
            .into_iter()
            .map(|((l, lam), count)| HistEntry {
                longest_dipath: l,
                lambda: lam,
                count,
            })
            .collect(),
        max_lambda,
    })
}

/// Finds some orientation of `grid` with the exact target longest-dipath
/// length and lambda, scanning orientation codes in ascending order.
pub fn find_witness(
    grid: &UnderlyingGrid,
    target_dipath: usize,
    target_lambda: u32,
    budget_per_solve: Option<u64>,
) -> Result<Option<OrientedGraph>, ExplorerError> {
    let m = grid.edge_count();
    if m > SWEEP_EDGE_CAP {
        return Err(ExplorerError::TooManyEdges(m, SWEEP_EDGE_CAP));
    }
    for code in 0..(1u64 << m) {
        let d = OrientedGraph::orient_code(grid.clone(), code)?;
        if longest_dipath(&d).0 != target_dipath {
            continue;
        }
        match solve_lambda(&d, budget_per_solve) {
            Ok(r) if r.lambda == target_lambda => return Ok(Some(d)),
            Ok(_) => {}
            Err(SolveError::BudgetExhausted { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(None)
}

/// A structured counterexample or notice inside a check report.
#[derive(Clone, Debug, Serialize)]
pub struct Finding {
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub patch: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<u32>>,
}

/// Outcome of one machine check. `passed == false` means a refutation
/// finding (or an unmet structural claim), carried in `findings`.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub summary: Vec<String>,
    pub findings: Vec<Finding>,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            passed: true,
            summary: Vec::new(),
            findings: Vec::new(),
        }
    }

    fn note(&mut self, line: String) {
        self.summary.push(line);
    }

    fn fail(&mut self, finding: Finding) {
        self.passed = false;
        self.findings.push(finding);
    }
}

fn pairwise_constrained(cp: &crate::digraph::ConstraintPairs, nodes: &[usize]) -> bool {
    nodes
        .iter()
        .enumerate()
        .all(|(i, &a)| nodes[i + 1..].iter().all(|&b| cp.constrained(a, b)))
}

/// Checks the sufficient condition for lambda = 6 on the 3x3 squared grid:
/// whenever the center's four neighbors are pairwise at directed distance
/// <= 2 and the corners satisfy every attainable mutual-distance-2 relation
/// (adjacent corner pairs, and each corner against the center), the
/// orientation has lambda = 6 and its longest dipath has length 8.
pub fn check_square_center_property() -> Result<CheckReport, ExplorerError> {
    let mut report = CheckReport::new("square-center");
    let grid = build_patch(&PatchSpec::SquareRect { w: 3, h: 3 })?;
    let at = |x, y| grid.index_of(Coord::new(x, y)).expect("3x3 coordinate");
    let center = at(1, 1);
    let neighbors = [at(0, 1), at(2, 1), at(1, 0), at(1, 2)];
    let corners = [at(0, 0), at(0, 2), at(2, 0), at(2, 2)];
    let corner_pairs = [
        (at(0, 0), at(0, 2)),
        (at(0, 0), at(2, 0)),
        (at(0, 2), at(2, 2)),
        (at(2, 0), at(2, 2)),
    ];

    let mut qualifying = 0u64;
    for code in 0..(1u64 << grid.edge_count()) {
        let d = OrientedGraph::orient_code(grid.clone(), code)?;
        let cp = constraint_pairs(&d);
        let ok = pairwise_constrained(&cp, &neighbors)
            && corner_pairs.iter().all(|&(a, b)| cp.constrained(a, b))
            && corners.iter().all(|&c| cp.constrained(c, center));
        if !ok {
            continue;
        }
        qualifying += 1;
        let (l, _) = longest_dipath(&d);
        let r = solve_lambda(&d, None)?;
        if r.lambda != 6 || l != 8 {
            report.fail(Finding {
                message: format!(
                    "qualifying orientation has lambda = {} and longest dipath {l}, expected 6 and 8",
                    r.lambda
                ),
                patch: Some("squareRect(3,3)".into()),
                orientation: Some(d.bit_string()),
                labels: Some(r.witness.colors().to_vec()),
            });
        }
    }
    if qualifying == 0 {
        report.fail(Finding {
            message: "no orientation satisfies the center condition".into(),
            patch: Some("squareRect(3,3)".into()),
            orientation: None,
            labels: None,
        });
    }
    report.note(format!("qualifying orientations: {qualifying}"));
    report.note("every qualifying orientation has lambda = 6 and longest dipath 8".into());
    Ok(report)
}

/// Classifies the lambda = 4 orientations of the triangular wheel: under one
/// of the two group modes they must form exactly 4 classes with
/// longest-dipath multiset {2, 2, 2, 4}, and every witness labeling must use
/// colors from {0, 2, 4} only.
pub fn check_triangular_wheel_classes(jobs: Option<usize>) -> Result<CheckReport, ExplorerError> {
    let mut report = CheckReport::new("tri-wheel");
    let grid = build_patch(&PatchSpec::TriWheel)?;
    let mut matching_mode = None;
    for include_reversal in [false, true] {
        let sweep = enumerate_orientations(&grid, "triWheel()", include_reversal, None, jobs)?;
        let lam4: Vec<&OrientationReport> = sweep
            .reports
            .iter()
            .filter(|r| r.lambda == Some(4))
            .collect();
        let mut dipaths: Vec<usize> = lam4.iter().map(|r| r.longest_dipath).collect();
        dipaths.sort_unstable();
        let mode = if include_reversal {
            "automorphisms+reversal"
        } else {
            "automorphisms"
        };
        report.note(format!(
            "lambda=4 classes under {mode}: {} with dipath lengths {dipaths:?}",
            lam4.len()
        ));
        if lam4.len() == 4 && dipaths == [2, 2, 2, 4] {
            matching_mode = Some(mode);
            for r in &lam4 {
                let bits: Vec<bool> = r.canonical.chars().map(|c| c == '1').collect();
                let d = OrientedGraph::orient(grid.clone(), bits)?;
                let solved = solve_lambda(&d, None)?;
                let off = solved
                    .witness
                    .colors()
                    .iter()
                    .any(|&c| c != 0 && c != 2 && c != 4);
                if off {
                    report.fail(Finding {
                        message: "lambda=4 witness uses a color outside {0, 2, 4}".into(),
                        patch: Some("triWheel()".into()),
                        orientation: Some(r.canonical.clone()),
                        labels: Some(solved.witness.colors().to_vec()),
                    });
                }
            }
        }
    }
    match matching_mode {
        Some(mode) => report.note(format!(
            "exactly 4 classes with dipath multiset {{2,2,2,4}} under {mode}"
        )),
        None => report.fail(Finding {
            message: "no group mode yields exactly 4 lambda=4 classes with dipaths {2,2,2,4}"
                .into(),
            patch: Some("triWheel()".into()),
            orientation: None,
            labels: None,
        }),
    }
    Ok(report)
}

/// Checks the distance-2 lemma on the wheel: every orientation whose six rim
/// nodes are pairwise at directed distance <= 2 has lambda >= 7 and a
/// longest dipath of length >= 5.
pub fn check_dist2_lemma() -> Result<CheckReport, ExplorerError> {
    let mut report = CheckReport::new("dist2-lemma");
    let grid = build_patch(&PatchSpec::TriWheel)?;
    let center = grid.index_of(Coord::new(0, 0)).expect("wheel center");
    let rim: Vec<usize> = (0..grid.node_count()).filter(|&i| i != center).collect();

    let mut qualifying = 0u64;
    let mut min_lambda = u32::MAX;
    let mut min_dipath = usize::MAX;
    for code in 0..(1u64 << grid.edge_count()) {
        let d = OrientedGraph::orient_code(grid.clone(), code)?;
        let cp = constraint_pairs(&d);
        if !pairwise_constrained(&cp, &rim) {
            continue;
        }
        qualifying += 1;
        let (l, _) = longest_dipath(&d);
        let r = solve_lambda(&d, None)?;
        min_lambda = min_lambda.min(r.lambda);
        min_dipath = min_dipath.min(l);
        if r.lambda < 7 || l < 5 {
            report.fail(Finding {
                message: format!(
                    "rim-constrained orientation has lambda = {} and longest dipath {l}",
                    r.lambda
                ),
                patch: Some("triWheel()".into()),
                orientation: Some(d.bit_string()),
                labels: Some(r.witness.colors().to_vec()),
            });
        }
    }
    if qualifying == 0 {
        report.fail(Finding {
            message: "no orientation has all rim nodes pairwise at distance <= 2".into(),
            patch: Some("triWheel()".into()),
            orientation: None,
            labels: None,
        });
    } else {
        report.note(format!(
            "qualifying orientations: {qualifying}, min lambda {min_lambda}, min longest dipath {min_dipath}"
        ));
    }
    Ok(report)
}

/// Sweeps the hexagonal patches and reports whether any orientation needs
/// lambda = 5. A lambda = 5 witness is a refutation finding.
pub fn check_hexagonal_conjecture(
    max_hexagons: u32,
    jobs: Option<usize>,
) -> Result<CheckReport, ExplorerError> {
    let mut report = CheckReport::new("hex-conjecture");
    let mut specs = vec![PatchSpec::HexStar];
    for k in 1..=max_hexagons {
        specs.push(PatchSpec::HexCycle { k });
    }
    let mut realized: BTreeSet<(usize, u32)> = BTreeSet::new();
    let mut max_lambda = 0u32;
    for spec in &specs {
        let grid = build_patch(spec)?;
        let sweep = enumerate_orientations(&grid, &spec.to_string(), true, None, jobs)?;
        for r in &sweep.reports {
            let lam = r.lambda.expect("hex sweeps run unbudgeted");
            realized.insert((r.longest_dipath, lam));
            max_lambda = max_lambda.max(lam);
            if lam >= 5 {
                let bits: Vec<bool> = r.canonical.chars().map(|c| c == '1').collect();
                let d = OrientedGraph::orient(grid.clone(), bits)?;
                let solved = solve_lambda(&d, None)?;
                report.fail(Finding {
                    message: format!("orientation of {spec} requires lambda = {lam}"),
                    patch: Some(spec.to_string()),
                    orientation: Some(r.canonical.clone()),
                    labels: Some(solved.witness.colors().to_vec()),
                });
            }
        }
    }
    report.note(format!("patches swept: {}", specs.len()));
    report.note(format!("max lambda observed: {max_lambda}"));
    report.note(format!(
        "realized (longest dipath, lambda) pairs: {realized:?}"
    ));
    report.note(if max_lambda <= 4 {
        "conjecture supported: no orientation requires lambda = 5".into()
    } else {
        "conjecture REFUTED: a lambda >= 5 orientation exists".into()
    });
    Ok(report)
}

/// An input to the girth-5 conjecture harness.
pub enum GraphInput {
    Grid(UnderlyingGrid, String),
    Oriented(OrientedGraph, String),
}

/// Tests the girth-5 conjecture (girth >= 5 implies lambda <= 5) on the
/// supplied graphs: grids are swept over all orientations, oriented inputs
/// are solved directly. Inputs of girth < 5 are skipped with a notice.
pub fn check_girth5_conjecture(
    inputs: &[GraphInput],
    jobs: Option<usize>,
) -> Result<CheckReport, ExplorerError> {
    let mut report = CheckReport::new("girth5");
    let mut max_lambda = 0u32;
    let mut tested = 0u64;
    for input in inputs {
        let (grid, label) = match input {
            GraphInput::Grid(g, label) => (g, label),
            GraphInput::Oriented(d, label) => (d.underlying(), label),
        };
        match girth(grid) {
            Some(g) if g >= 5 => {}
            Some(g) => {
                report.note(format!("skipped {label}: girth {g} < 5"));
                continue;
            }
            None => {
                report.note(format!("skipped {label}: acyclic (no girth)"));
                continue;
            }
        }
        match input {
            GraphInput::Grid(g, label) => {
                let sweep = enumerate_orientations(g, label, true, None, jobs)?;
                for r in &sweep.reports {
                    let lam = r.lambda.expect("girth5 sweeps run unbudgeted");
                    tested += r.class_size;
                    max_lambda = max_lambda.max(lam);
                    if lam > 5 {
                        report.fail(Finding {
                            message: format!(
                                "orientation of {label} (girth >= 5) requires lambda = {lam}"
                            ),
                            patch: Some(label.clone()),
                            orientation: Some(r.canonical.clone()),
                            labels: None,
                        });
                    }
                }
            }
            GraphInput::Oriented(d, label) => {
                let r = solve_lambda(d, None)?;
                tested += 1;
                max_lambda = max_lambda.max(r.lambda);
                if r.lambda > 5 {
                    report.fail(Finding {
                        message: format!("{label} (girth >= 5) requires lambda = {}", r.lambda),
                        patch: Some(label.clone()),
                        orientation: Some(d.bit_string()),
                        labels: Some(r.witness.colors().to_vec()),
                    });
                }
            }
        }
    }
    report.note(format!("orientations tested: {tested}"));
    report.note(format!("max lambda observed: {max_lambda}"));
    report.note(if report.passed {
        "conjecture supported on all tested inputs".into()
    } else {
        "conjecture REFUTED on a tested input".into()
    });
    Ok(report)
}

/// The Petersen graph as a custom grid (girth 5, 3-regular, NOT planar).
/// Some of its orientations need lambda = 6, so it is useful input for the
/// generic girth-5 check but says nothing about the planar conjecture.
pub fn petersen() -> UnderlyingGrid {
    let mut edges = Vec::new();
    for i in 0..5usize {
        edges.push((i, (i + 1) % 5)); // outer cycle
        edges.push((i, i + 5)); // spokes
        edges.push((i + 5, (i + 2) % 5 + 5)); // inner pentagram
    }
    UnderlyingGrid::custom(10, &edges).expect("Petersen graph is valid")
}

/// The dodecahedral graph (generalized Petersen graph GP(10,2)) as a custom
/// grid: planar, 3-regular, girth 5 — a genuine test case for the planar
/// girth-5 conjecture.
pub fn dodecahedron() -> UnderlyingGrid {
    let mut edges = Vec::new();
    for i in 0..10usize {
        edges.push((i, (i + 1) % 10)); // outer cycle
        edges.push((i, i + 10)); // spokes
        edges.push((i + 10, (i + 2) % 10 + 10)); // inner decagram
    }
    UnderlyingGrid::custom(20, &edges).expect("dodecahedral graph is valid")
}

/// Default input set for the girth-5 harness: a two-hexagon grid sweep and
/// 100 seeded random orientations of the dodecahedron. All inputs are
/// planar with girth >= 5, so a lambda > 5 here really would refute the
/// conjecture.
pub fn default_girth5_inputs() -> Result<Vec<GraphInput>, ExplorerError> {
    let mut inputs = vec![GraphInput::Grid(
        build_patch(&PatchSpec::HexCycle { k: 2 })?,
        "hexCycle(2)".to_string(),
    )];
    let dod = dodecahedron();
    let m = dod.edge_count();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6c32315f);
    for i in 0..100 {
        let bits: Vec<bool> = (0..m).map(|_| rng.gen::<bool>()).collect();
        inputs.push(GraphInput::Oriented(
            OrientedGraph::orient(dod.clone(), bits)?,
            format!("dodecahedron#{i}"),
        ));
    }
    Ok(inputs)
}

/// Hand-assembled instance for the triangular table row with longest dipath
/// >= 6 and lambda = 8: three wheel copies, each with its rim pairwise at
/// directed distance <= 2, whose centers are joined pairwise by directed
/// length-2 paths through fresh middle nodes.
pub fn three_wheel_instance() -> Result<OrientedGraph, ExplorerError> {
    let wheel = build_patch(&PatchSpec::TriWheel)?;
    let center = wheel.index_of(Coord::new(0, 0)).expect("wheel center");
    let rim: Vec<usize> = (0..wheel.node_count()).filter(|&i| i != center).collect();
    // smallest orientation code whose rim is pairwise constrained
    let mut chosen = None;
    for code in 0..(1u64 << wheel.edge_count()) {
        let d = OrientedGraph::orient_code(wheel.clone(), code)?;
        if pairwise_constrained(&constraint_pairs(&d), &rim) {
            chosen = Some(d);
            break;
        }
    }
    let wheel_arcs = chosen.expect("a qualifying wheel orientation exists").arcs();
    let n_wheel = wheel.node_count();
    let mut arcs = Vec::new();
    for copy in 0..3 {
        for &(u, v) in &wheel_arcs {
            arcs.push((u + copy * n_wheel, v + copy * n_wheel));
        }
    }
    let centers = [center, center + n_wheel, center + 2 * n_wheel];
    let middles = [3 * n_wheel, 3 * n_wheel + 1, 3 * n_wheel + 2];
    arcs.push((centers[0], middles[0]));
    arcs.push((middles[0], centers[1]));
    arcs.push((centers[0], middles[1]));
    arcs.push((middles[1], centers[2]));
    arcs.push((centers[1], middles[2]));
    arcs.push((middles[2], centers[2]));
    Ok(OrientedGraph::from_arcs(3 * n_wheel + 3, &arcs)?)
}

/// Status of a summary-table cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellStatus {
    Found,
    NeedsLargerPatch,
    Missing,
    Open,
}

/// One (grid family, longest dipath, lambda) cell of the summary table.
#[derive(Clone, Debug, Serialize)]
pub struct TableCell {
    pub family: String,
    pub dipath: String,
    pub lambda: u32,
    pub patches: Vec<String>,
    pub status: CellStatus,
    /// Whether an asserted cell failing to produce a witness on its own
    /// construction patch counts as a failure.
    pub required: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub cells: Vec<TableCell>,
    #[serde(rename = "allRequiredFound")]
    pub all_required_found: bool,
}

struct CellSpec {
    family: &'static str,
    dipath: usize,
    dipath_label: &'static str,
    lambda: u32,
    patches: &'static [&'static str],
    required: bool,
}

const TABLE_CELLS: &[CellSpec] = &[
    CellSpec { family: "squared", dipath: 3, dipath_label: "3", lambda: 3, patches: &["squareRect(3,3)"], required: true },
    CellSpec { family: "squared", dipath: 3, dipath_label: "3", lambda: 4, patches: &["squareRect(3,3)"], required: true },
    CellSpec { family: "squared", dipath: 4, dipath_label: "4", lambda: 4, patches: &["squareRect(3,3)"], required: true },
    CellSpec { family: "squared", dipath: 4, dipath_label: "4", lambda: 5, patches: &["squareRect(3,3)"], required: true },
    CellSpec { family: "squared", dipath: 8, dipath_label: "8", lambda: 6, patches: &["squareRect(3,3)"], required: true },
    CellSpec { family: "triangular", dipath: 3, dipath_label: "3", lambda: 4, patches: &["triTail()"], required: true },
    CellSpec { family: "triangular", dipath: 3, dipath_label: "3", lambda: 5, patches: &["triDiamond()"], required: true },
    CellSpec { family: "triangular", dipath: 4, dipath_label: "4", lambda: 4, patches: &["triWheel()"], required: true },
    CellSpec { family: "triangular", dipath: 4, dipath_label: "4", lambda: 5, patches: &["triWheel()"], required: true },
    CellSpec { family: "triangular", dipath: 4, dipath_label: "4", lambda: 6, patches: &["triWheel()"], required: true },
    CellSpec { family: "triangular", dipath: 5, dipath_label: "5", lambda: 7, patches: &["triWheel()"], required: true },
    CellSpec { family: "hexagonal", dipath: 3, dipath_label: "3", lambda: 3, patches: &["hexCycle(1)"], required: true },
    CellSpec { family: "hexagonal", dipath: 3, dipath_label: "3", lambda: 4, patches: &["hexCycle(1)", "hexCycle(2)"], required: true },
    CellSpec { family: "hexagonal", dipath: 4, dipath_label: "4", lambda: 4, patches: &["hexCycle(1)"], required: true },
];

/// Cells the table leaves open (marked "?"); reported, never asserted.
const OPEN_CELLS: &[(&str, &str, u32)] = &[
    ("squared", "4..7", 6),
    ("triangular", "3", 6),
    ("triangular", "4", 7),
    ("triangular", "5", 8),
    ("hexagonal", ">=4", 5),
];

/// Reproduces the summary table of known (longest dipath, lambda) values by
/// witness search over the built-in patches, plus a direct solve of the
/// three-wheel construction for the (>= 6, 8) triangular row.
pub fn paper_table(jobs: Option<usize>) -> Result<TableReport, ExplorerError> {
    let cells: Vec<TableCell> = run_with_jobs(jobs, || {
        TABLE_CELLS
            .par_iter()
            .map(|spec| {
                let mut witness = None;
                for patch_name in spec.patches {
                    let patch_spec: PatchSpec =
                        patch_name.parse().expect("built-in patch spec parses");
                    let grid = build_patch(&patch_spec).expect("built-in patch builds");
                    if let Some(d) = find_witness(&grid, spec.dipath, spec.lambda, None)
                        .expect("witness sweep over a built-in patch")
                    {
                        witness = Some((patch_name.to_string(), d.bit_string()));
                        break;
                    }
                }
                let status = match (&witness, spec.required) {
                    (Some(_), _) => CellStatus::Found,
                    (None, true) => CellStatus::Missing,
                    (None, false) => CellStatus::NeedsLargerPatch,
                };
                TableCell {
                    family: spec.family.to_string(),
                    dipath: spec.dipath_label.to_string(),
                    lambda: spec.lambda,
                    patches: spec.patches.iter().map(|s| s.to_string()).collect(),
                    status,
                    required: spec.required,
                    witness: witness.map(|(p, bits)| format!("{p}:{bits}")),
                }
            })
            .collect()
    });
    let mut cells = cells;

    // triangular (>= 6, 8): direct solve of the hand-assembled construction
    let inst = three_wheel_instance()?;
    let (l, _) = longest_dipath(&inst);
    let lam = solve_lambda(&inst, None)?.lambda;
    let found = l >= 6 && lam == 8;
    cells.push(TableCell {
        family: "triangular".to_string(),
        dipath: ">=6".to_string(),
        lambda: 8,
        patches: vec!["threeWheelInstance".to_string()],
        status: if found { CellStatus::Found } else { CellStatus::Missing },
        required: true,
        witness: found.then(|| format!("threeWheelInstance:{}", inst.bit_string())),
    });

    for &(family, dipath, lambda) in OPEN_CELLS {
        cells.push(TableCell {
            family: family.to_string(),
            dipath: dipath.to_string(),
            lambda,
            patches: Vec::new(),
            status: CellStatus::Open,
            required: false,
        witness: None,
        });
    }
    let all_required_found = cells
        .iter()
        .all(|c| !c.required || c.status == CellStatus::Found);
    Ok(TableReport {
        cells,
        all_required_found,
    })
}

/// Random connected grids and trees used by the structural property tests.
pub fn random_oriented_tree(rng: &mut impl Rng, max_nodes: usize) -> OrientedGraph {
    let n = rng.gen_range(2..=max_nodes);
    let mut arcs = Vec::new();
    for child in 1..n {
        let parent = rng.gen_range(0..child);
        if rng.gen::<bool>() {
            arcs.push((parent, child));
        } else {
            arcs.push((child, parent));
        }
    }
    OrientedGraph::from_arcs(n, &arcs).expect("random tree is a valid oriented graph")
}

/// A random connected node-induced sub-digraph of `d` (arcs restricted to
/// the kept nodes), for subgraph-monotonicity tests.
pub fn random_induced_subdigraph(rng: &mut impl Rng, d: &OrientedGraph) -> OrientedGraph {
    let n = d.node_count();
    let adj = d.underlying().adjacency();
    let size = rng.gen_range(1..=n);
    let start = rng.gen_range(0..n);
    let mut kept = vec![start];
    let mut frontier: Vec<usize> = adj[start].clone();
    while kept.len() < size && !frontier.is_empty() {
        let idx = rng.gen_range(0..frontier.len());
        let next = frontier.swap_remove(idx);
        if kept.contains(&next) {
            continue;
        }
        kept.push(next);
        for &nb in &adj[next] {
            if !kept.contains(&nb) {
                frontier.push(nb);
            }
        }
    }
    kept.sort_unstable();
    let remap: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let arcs: Vec<(usize, usize)> = d
        .arcs()
        .into_iter()
        .filter(|(u, v)| remap.contains_key(u) && remap.contains_key(v))
        .map(|(u, v)| (remap[&u], remap[&v]))
        .collect();
    // the BFS growth keeps the node set connected
    OrientedGraph::from_arcs(kept.len(), &arcs).expect("induced subgraph is valid")
}

/// Random orientation of a grid.
pub fn random_orientation(rng: &mut impl Rng, grid: &UnderlyingGrid) -> OrientedGraph {
    let bits: Vec<bool> = (0..grid.edge_count()).map(|_| rng.gen::<bool>()).collect();
    OrientedGraph::orient(grid.clone(), bits).expect("bit count matches")
}

/// Picks a deterministic pseudo-random sample of members from a canonical
/// class by applying group elements to the representative.
pub fn class_members_sample(
    grid: &UnderlyingGrid,
    canonical: &str,
    count: usize,
    seed: u64,
) -> Result<Vec<OrientedGraph>, ExplorerError> {
    let group = automorphisms(grid)?;
    let bits: Vec<bool> = canonical.chars().map(|c| c == '1').collect();
    let rep = OrientedGraph::orient(grid.clone(), bits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = Vec::new();
    for _ in 0..count {
        let perm = group.choose(&mut rng).expect("group is nonempty");
        let mut img = vec![false; grid.edge_count()];
        let edges = grid.edges();
        for (i, &(a, b)) in edges.iter().enumerate() {
            let (src, dst) = if rep.direction_bits()[i] { (b, a) } else { (a, b) };
            let (ps, pd) = (perm[src], perm[dst]);
            let j = grid
                .edge_index(ps, pd)
                .expect("automorphism maps edges to edges");
            img[j] = ps > pd;
        }
        sample.push(OrientedGraph::orient(grid.clone(), img)?);
    }
    Ok(sample)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::brute_force_lambda;

    #[test]
    fn k3_enumeration_matches_brute_force() {
        let k3 = UnderlyingGrid::custom(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let sweep = enumerate_orientations(&k3, "K3", true, None, None).unwrap();
        assert_eq!(sweep.total_orientations, 8);
        assert_eq!(
            sweep.reports.iter().map(|r| r.class_size).sum::<u64>(),
            8
        );
        // both classes have longest dipath 2 and lambda 4
        assert_eq!(sweep.reports.len(), 2);
        for r in &sweep.reports {
            assert_eq!(r.longest_dipath, 2);
            assert_eq!(r.lambda, Some(4));
            let bits: Vec<bool> = r.canonical.chars().map(|c| c == '1').collect();
            let d = OrientedGraph::orient(k3.clone(), bits).unwrap();
            assert_eq!(brute_force_lambda(&d, 10).unwrap(), Some(4));
        }
    }

    #[test]
    fn c4_orbit_sum() {
        let c4 = build_patch(&PatchSpec::SquareRect { w: 2, h: 2 }).unwrap();
        for rev in [false, true] {
            let sweep = enumerate_orientations(&c4, "C4", rev, None, None).unwrap();
            assert_eq!(sweep.reports.iter().map(|r| r.class_size).sum::<u64>(), 16);
        }
    }

    #[test]
    fn sweep_capacity_guard() {
        let big = build_patch(&PatchSpec::SquareRect { w: 4, h: 4 }).unwrap();
        assert!(big.edge_count() > SWEEP_EDGE_CAP);
        assert!(matches!(
            enumerate_orientations(&big, "4x4", true, None, None),
            Err(ExplorerError::TooManyEdges(_, _))
        ));
    }

    #[test]
    fn find_witness_examples() {
        let sq = build_patch(&PatchSpec::SquareRect { w: 3, h: 3 }).unwrap();
        let w = find_witness(&sq, 3, 4, None).unwrap().expect("(3,4) exists");
        assert_eq!(longest_dipath(&w).0, 3);
        assert_eq!(solve_lambda(&w, None).unwrap().lambda, 4);

        // the ditree bound rules out lambda = 5 on a path
        let p4 = UnderlyingGrid::custom(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(find_witness(&p4, 3, 5, None).unwrap().is_none());
    }

    #[test]
    fn three_wheel_instance_shape() {
        let inst = three_wheel_instance().unwrap();
        assert_eq!(inst.node_count(), 24);
        assert_eq!(inst.arcs().len(), 3 * 12 + 6);
    }

    #[test]
    fn class_members_share_lambda() {
        let wheel = build_patch(&PatchSpec::TriWheel).unwrap();
        let sweep = enumerate_orientations(&wheel, "triWheel()", true, None, None).unwrap();
        // spot-check a handful of classes
        for r in sweep.reports.iter().step_by(sweep.reports.len() / 10) {
            let members = class_members_sample(&wheel, &r.canonical, 2, 7).unwrap();
            for m in members {
                assert_eq!(Some(solve_lambda(&m, None).unwrap().lambda), r.lambda);
            }
        }
    }

    #[test]
    fn petersen_is_girth_5() {
        let p = petersen();
        assert_eq!(p.node_count(), 10);
        assert_eq!(p.edge_count(), 15);
        assert_eq!(girth(&p), Some(5));
    }

    #[test]
    fn dodecahedron_is_girth_5() {
        let d = dodecahedron();
        assert_eq!(d.node_count(), 20);
        assert_eq!(d.edge_count(), 30);
        assert_eq!(girth(&d), Some(5));
        assert!(d.adjacency().iter().all(|a| a.len() == 3));
    }

    // Petersen is not planar, so a lambda = 6 orientation of it does not
    // touch the girth-5 conjecture; this pins that such orientations exist
    // and that the check reports them as findings.
    #[test]
    fn petersen_admits_lambda_6() {
        let pet = petersen();
        let mut rng = ChaCha8Rng::seed_from_u64(0x6c32315f);
        let mut seen_6 = false;
        for _ in 0..100 {
            let d = random_orientation(&mut rng, &pet);
            if solve_lambda(&d, None).unwrap().lambda == 6 {
                seen_6 = true;
                let report =
                    check_girth5_conjecture(&[GraphInput::Oriented(d, "pet".into())], None)
                        .unwrap();
                assert!(!report.passed);
                break;
            }
        }
        assert!(seen_6);
    }
}
