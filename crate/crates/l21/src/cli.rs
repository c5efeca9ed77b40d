//! Command-line front end: grid I/O, solving, verification, metrics,
//! orientation sweeps, the claim-check suites, and DOT export.
//!
//! Exit codes: 0 success, 1 malformed input, 2 capacity/budget exceeded,
//! 3 verification failure, 4 witness not found, 5 refutation finding.

use crate::digraph::{metrics, DigraphError, OrientedGraph};
use crate::explorer::{
    check_dist2_lemma, check_girth5_conjecture, check_hexagonal_conjecture,
    check_square_center_property, check_triangular_wheel_classes, default_girth5_inputs,
    enumerate_orientations, find_witness, paper_table, CheckReport, ExplorerError, GraphInput,
    TableReport,
};
use crate::lattice::{patch, GridDoc, GridError, PatchSpec, TilingKind, UnderlyingGrid};
use crate::solver::{lower_bound, solve_lambda, upper_bound, verify, Labeling, SolveError};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_CAPACITY: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;
pub const EXIT_NOT_FOUND: i32 = 4;
pub const EXIT_REFUTATION: i32 = 5;

#[derive(Parser)]
#[command(
    name = "l21",
    about = "Exact oriented L(2,1)-labeling of finite grid patches and small digraphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Square,
    Triangular,
    Hexagonal,
}

impl KindArg {
    fn tiling(self) -> TilingKind {
        match self {
            KindArg::Square => TilingKind::Square,
            KindArg::Triangular => TilingKind::Triangular,
            KindArg::Hexagonal => TilingKind::Hexagonal,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckName {
    SquareCenter,
    TriWheel,
    Dist2Lemma,
    HexConjecture,
    Girth5,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a built-in patch, optionally with an orientation
    Gen {
        /// Tiling the patch must belong to
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Patch spec, e.g. squareRect(3,3), triWheel(), hexCycle(2)
        #[arg(long)]
        patch: String,
        /// Orient the patch with this direction bitstring (one bit per edge)
        #[arg(long, conflicts_with = "random")]
        orient: Option<String>,
        /// Orient the patch uniformly at random with this seed
        #[arg(long)]
        random: Option<u64>,
    },
    /// Compute lambda and a witness labeling for an oriented input
    Solve {
        #[arg(long)]
        input: PathBuf,
        /// Node-expansion budget for the search
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Verify a labeling against an oriented input
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// CSV file of `nodeIndex,color` lines
        #[arg(long)]
        labels: PathBuf,
    },
    /// Report longest dipath, girth, bipartiteness, and lambda bounds
    Metrics {
        #[arg(long)]
        input: PathBuf,
    },
    /// Sweep all orientations of a grid, one solve per symmetry class
    Enumerate {
        #[arg(long)]
        input: PathBuf,
        /// Group classes by automorphisms only (no global arc reversal)
        #[arg(long)]
        no_reversal: bool,
        /// Worker threads (default: L21_JOBS, then all cores)
        #[arg(long)]
        jobs: Option<usize>,
        /// Node-expansion budget per class solve
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Find an orientation with the exact longest-dipath length and lambda
    Witness {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        dipath: usize,
        #[arg(long)]
        lambda: u32,
    },
    /// Run one of the named claim checks
    Check {
        #[arg(long, value_enum)]
        name: CheckName,
        /// Largest hexagon-cycle patch swept by hex-conjecture
        #[arg(long, default_value_t = 2)]
        max_hex: u32,
        /// Extra input files for girth5 (grids are swept, orientations solved)
        #[arg(long)]
        graphs: Vec<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Reproduce the summary table of known (dipath, lambda) values
    PaperTable {
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Emit the oriented input as a DOT digraph
    ExportDot {
        #[arg(long)]
        input: PathBuf,
        /// Optional CSV file of `nodeIndex,color` labels
        #[arg(long)]
        labels: Option<PathBuf>,
    },
}

/// Failures carrying their process exit code and a message for stderr.
#[derive(Debug)]
pub struct CliFailure {
    pub code: i32,
    pub message: String,
}

fn malformed(msg: impl Into<String>) -> CliFailure {
    CliFailure {
        code: EXIT_MALFORMED,
        message: msg.into(),
    }
}

fn capacity(msg: impl Into<String>) -> CliFailure {
    CliFailure {
        code: EXIT_CAPACITY,
        message: msg.into(),
    }
}

impl From<GridError> for CliFailure {
    fn from(e: GridError) -> Self {
        malformed(e.to_string())
    }
}

impl From<DigraphError> for CliFailure {
    fn from(e: DigraphError) -> Self {
        match e {
            DigraphError::TooLarge(_, _) => capacity(e.to_string()),
            _ => malformed(e.to_string()),
        }
    }
}

impl From<SolveError> for CliFailure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::SizeMismatch { .. } => malformed(e.to_string()),
            SolveError::Capacity(_) | SolveError::BudgetExhausted { .. } => {
                capacity(e.to_string())
            }
        }
    }
}

impl From<ExplorerError> for CliFailure {
    fn from(e: ExplorerError) -> Self {
        match e {
            ExplorerError::TooManyEdges(_, _) => capacity(e.to_string()),
            ExplorerError::Digraph(d) => d.into(),
            ExplorerError::Solve(s) => s.into(),
            ExplorerError::Grid(g) => g.into(),
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliFailure> {
    std::fs::read_to_string(path)
        .map_err(|e| malformed(format!("cannot read {}: {e}", path.display())))
}

fn load_doc(path: &Path) -> Result<GridDoc, CliFailure> {
    Ok(GridDoc::parse(&read_file(path)?)?)
}

fn load_grid(path: &Path) -> Result<UnderlyingGrid, CliFailure> {
    Ok(load_doc(path)?.build_grid()?)
}

fn load_oriented(path: &Path) -> Result<OrientedGraph, CliFailure> {
    let text = read_file(path)?;
    let doc = GridDoc::parse(&text)?;
    if doc.arcs.is_none() {
        return Err(malformed(format!(
            "{} has no \"arcs\"; an oriented input is required",
            path.display()
        )));
    }
    Ok(OrientedGraph::from_json(&text)?)
}

/// Parses a `nodeIndex,color` CSV into a labeling with one color per node.
fn load_labels(path: &Path, n: usize) -> Result<Labeling, CliFailure> {
    let text = read_file(path)?;
    let mut colors: Vec<Option<u32>> = vec![None; n];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let err = || malformed(format!("labels line {}: expected `nodeIndex,color`, got {line:?}", lineno + 1));
        let (idx, color) = line.split_once(',').ok_or_else(err)?;
        let idx: usize = idx.trim().parse().map_err(|_| err())?;
        let color: u32 = color.trim().parse().map_err(|_| err())?;
        if idx >= n {
            return Err(malformed(format!(
                "labels line {}: node index {idx} out of range (n = {n})",
                lineno + 1
            )));
        }
        if colors[idx].replace(color).is_some() {
            return Err(malformed(format!("labels: node {idx} assigned twice")));
        }
    }
    let colors: Vec<u32> = colors
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| malformed(format!("labels: node {i} has no color"))))
        .collect::<Result<_, _>>()?;
    Ok(Labeling::new(colors))
}

fn jobs_or_env(jobs: Option<usize>) -> Result<Option<usize>, CliFailure> {
    if jobs.is_some() {
        return Ok(jobs);
    }
    match std::env::var("L21_JOBS") {
        Ok(v) => v
            .parse::<usize>()
            .map(Some)
            .map_err(|_| malformed(format!("L21_JOBS must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn emit<T: Serialize>(out: &mut impl std::io::Write, value: &T) {
    serde_json::to_writer_pretty(&mut *out, value).expect("report serializes");
    writeln!(out).expect("stdout writable");
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SolveOutput {
    lambda: u32,
    witness: Vec<u32>,
    lower_bound_used: u32,
    upper_bound_used: u32,
    nodes_expanded: u64,
    elapsed_ms: u128,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MetricsOutput {
    longest_dipath: usize,
    dipath_witness: Vec<usize>,
    /// `null` means the underlying graph is acyclic (infinite girth).
    girth: Option<usize>,
    bipartite: bool,
    lower: u32,
    upper: u32,
}

fn export_dot(d: &OrientedGraph, labels: Option<&Labeling>) -> String {
    let mut out = String::from("digraph l21 {\n");
    for v in 0..d.node_count() {
        let label = match labels {
            Some(f) => format!("{v}: {}", f.colors()[v]),
            None => format!("{v}"),
        };
        out.push_str(&format!("  n{v} [label=\"{label}\"];\n"));
    }
    for (u, v) in d.arcs() {
        out.push_str(&format!("  n{u} -> n{v};\n"));
    }
    out.push_str("}\n");
    out
}

fn check_exit(report: &CheckReport) -> i32 {
    if report.passed {
        EXIT_OK
    } else {
        EXIT_REFUTATION
    }
}

fn run_command(cmd: Command, out: &mut impl std::io::Write) -> Result<i32, CliFailure> {
    match cmd {
        Command::Gen {
            kind,
            patch: patch_str,
            orient,
            random,
        } => {
            let spec: PatchSpec = patch_str.parse()?;
            let grid = patch(kind.tiling(), &spec)?;
            let bits: Option<Vec<bool>> = match (orient, random) {
                (Some(s), _) => {
                    if s.len() != grid.edge_count() || !s.chars().all(|c| c == '0' || c == '1') {
                        return Err(malformed(format!(
                            "--orient needs {} bits of 0/1, got {s:?}",
                            grid.edge_count()
                        )));
                    }
                    Some(s.chars().map(|c| c == '1').collect())
                }
                (None, Some(seed)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    Some((0..grid.edge_count()).map(|_| rng.gen::<bool>()).collect())
                }
                (None, None) => None,
            };
            match bits {
                Some(bits) => {
                    let d = OrientedGraph::orient(grid, bits)?;
                    writeln!(out, "{}", d.to_json()).expect("stdout writable");
                }
                None => writeln!(out, "{}", grid.to_json()).expect("stdout writable"),
            }
            Ok(EXIT_OK)
        }
        Command::Solve { input, budget } => {
            let d = load_oriented(&input)?;
            let r = solve_lambda(&d, budget)?;
            emit(
                out,
                &SolveOutput {
                    lambda: r.lambda,
                    witness: r.witness.colors().to_vec(),
                    lower_bound_used: r.lower_bound_used,
                    upper_bound_used: r.upper_bound_used,
                    nodes_expanded: r.nodes_expanded,
                    elapsed_ms: r.elapsed.as_millis(),
                },
            );
            Ok(EXIT_OK)
        }
        Command::Verify { input, labels } => {
            let d = load_oriented(&input)?;
            let f = load_labels(&labels, d.node_count())?;
            let violations = verify(&d, &f)?;
            if violations.is_empty() {
                Ok(EXIT_OK)
            } else {
                emit(out, &violations);
                Ok(EXIT_VERIFICATION)
            }
        }
        Command::Metrics { input } => {
            let d = load_oriented(&input)?;
            let m = metrics(&d);
            emit(
                out,
                &MetricsOutput {
                    longest_dipath: m.longest_dipath,
                    dipath_witness: m.dipath_witness,
                    girth: m.girth,
                    bipartite: m.bipartite,
                    lower: lower_bound(&d),
                    upper: upper_bound(&d),
                },
            );
            Ok(EXIT_OK)
        }
        Command::Enumerate {
            input,
            no_reversal,
            jobs,
            budget,
        } => {
            let grid = load_grid(&input)?;
            let label = input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "input".to_string());
            let summary = enumerate_orientations(
                &grid,
                &label,
                !no_reversal,
                budget,
                jobs_or_env(jobs)?,
            )?;
            emit(out, &summary);
            Ok(EXIT_OK)
        }
        Command::Witness {
            input,
            dipath,
            lambda,
        } => {
            let grid = load_grid(&input)?;
            match find_witness(&grid, dipath, lambda, None)? {
                Some(d) => {
                    writeln!(out, "{}", d.to_json()).expect("stdout writable");
                    Ok(EXIT_OK)
                }
                None => Err(CliFailure {
                    code: EXIT_NOT_FOUND,
                    message: format!(
                        "no orientation with longest dipath {dipath} and lambda {lambda}"
                    ),
                }),
            }
        }
        Command::Check {
            name,
            max_hex,
            graphs,
            jobs,
        } => {
            let jobs = jobs_or_env(jobs)?;
            let report = match name {
                CheckName::SquareCenter => check_square_center_property()?,
                CheckName::TriWheel => check_triangular_wheel_classes(jobs)?,
                CheckName::Dist2Lemma => check_dist2_lemma()?,
                CheckName::HexConjecture => check_hexagonal_conjecture(max_hex, jobs)?,
                CheckName::Girth5 => {
                    let inputs = if graphs.is_empty() {
                        default_girth5_inputs()?
                    } else {
                        let mut inputs = Vec::new();
                        for path in &graphs {
                            let text = read_file(path)?;
                            let doc = GridDoc::parse(&text)?;
                            let label = path.display().to_string();
                            if doc.arcs.is_some() {
                                inputs.push(GraphInput::Oriented(
                                    OrientedGraph::from_json(&text)?,
                                    label,
                                ));
                            } else {
                                inputs.push(GraphInput::Grid(doc.build_grid()?, label));
                            }
                        }
                        inputs
                    };
                    check_girth5_conjecture(&inputs, jobs)?
                }
            };
            emit(out, &report);
            Ok(check_exit(&report))
        }
        Command::PaperTable { jobs } => {
            let report: TableReport = paper_table(jobs_or_env(jobs)?)?;
            emit(out, &report);
            Ok(EXIT_OK)
        }
        Command::ExportDot { input, labels } => {
            let d = load_oriented(&input)?;
            let f = labels
                .map(|p| load_labels(&p, d.node_count()))
                .transpose()?;
            write!(out, "{}", export_dot(&d, f.as_ref())).expect("stdout writable");
            Ok(EXIT_OK)
        }
    }
}

/// Parses `argv` and runs the selected subcommand, writing to `out`.
/// Returns the process exit code; error text goes to stderr.
pub fn run<I, T>(argv: I, out: &mut impl std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return EXIT_OK;
        }
        Err(e) => {
            eprint!("{e}");
            return EXIT_MALFORMED;
        }
    };
    match run_command(cli.cmd, out) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run(std::iter::once("l21").chain(args.iter().copied()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn gen_round_trip_is_byte_identical() {
        for (kind, spec) in [
            ("square", "squareRect(3,3)"),
            ("triangular", "triWheel()"),
            ("triangular", "triDiamond()"),
            ("triangular", "triTail()"),
            ("hexagonal", "hexCycle(2)"),
            ("hexagonal", "hexStar()"),
        ] {
            let (code, text) = run_capture(&["gen", "--kind", kind, "--patch", spec]);
            assert_eq!(code, EXIT_OK);
            let grid = UnderlyingGrid::from_json(&text).unwrap();
            assert_eq!(format!("{}\n", grid.to_json()), text);
        }
    }

    #[test]
    fn gen_rejects_kind_mismatch() {
        let (code, _) = run_capture(&["gen", "--kind", "square", "--patch", "triWheel()"]);
        assert_eq!(code, EXIT_MALFORMED);
    }

    #[test]
    fn solve_directed_path() {
        let dir = std::env::temp_dir().join("l21-cli-test-solve");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("p4.json");
        // directed path a -> b -> c -> d
        std::fs::write(
            &path,
            r#"{"kind":"custom","n":4,"edges":[[0,1],[1,2],[2,3]],"arcs":[[0,1],[1,2],[2,3]]}"#,
        )
        .unwrap();
        let (code, text) = run_capture(&["solve", "--input", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["lambda"], 3);
    }

    #[test]
    fn verify_path_labeling() {
        let dir = std::env::temp_dir().join("l21-cli-test-verify");
        std::fs::create_dir_all(&dir).unwrap();
        let input = dir.join("p4.json");
        std::fs::write(
            &input,
            r#"{"kind":"custom","n":4,"edges":[[0,1],[1,2],[2,3]],"arcs":[[0,1],[1,2],[2,3]]}"#,
        )
        .unwrap();
        let good = dir.join("good.csv");
        std::fs::write(&good, "0,1\n1,3\n2,0\n3,2\n").unwrap();
        let (code, _) = run_capture(&[
            "verify",
            "--input",
            input.to_str().unwrap(),
            "--labels",
            good.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK);

        let bad = dir.join("bad.csv");
        std::fs::write(&bad, "0,0\n1,1\n2,2\n3,3\n").unwrap();
        let (code, text) = run_capture(&[
            "verify",
            "--input",
            input.to_str().unwrap(),
            "--labels",
            bad.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_VERIFICATION);
        assert!(text.contains("adjacentTooClose"));
    }

    #[test]
    fn witness_not_found_exits_4() {
        let dir = std::env::temp_dir().join("l21-cli-test-witness");
        std::fs::create_dir_all(&dir).unwrap();
        let input = dir.join("p4.json");
        std::fs::write(&input, r#"{"kind":"custom","n":4,"edges":[[0,1],[1,2],[2,3]]}"#).unwrap();
        let (code, _) = run_capture(&[
            "witness",
            "--input",
            input.to_str().unwrap(),
            "--dipath",
            "3",
            "--lambda",
            "9",
        ]);
        assert_eq!(code, EXIT_NOT_FOUND);
    }

    #[test]
    fn malformed_json_exits_1() {
        let dir = std::env::temp_dir().join("l21-cli-test-bad");
        std::fs::create_dir_all(&dir).unwrap();
        let input = dir.join("bad.json");
        std::fs::write(&input, "{ not json").unwrap();
        let (code, _) = run_capture(&["solve", "--input", input.to_str().unwrap()]);
        assert_eq!(code, EXIT_MALFORMED);
    }

    #[test]
    fn labels_csv_validation() {
        let dir = std::env::temp_dir().join("l21-cli-test-labels");
        std::fs::create_dir_all(&dir).unwrap();
        let input = dir.join("p2.json");
        std::fs::write(&input, r#"{"kind":"custom","n":2,"edges":[[0,1]],"arcs":[[0,1]]}"#)
            .unwrap();
        for bad in ["0,0\n", "0,0\n1,2\n1,3\n", "0,0\n5,2\n", "zero,0\n1,2\n"] {
            let labels = dir.join("labels.csv");
            std::fs::write(&labels, bad).unwrap();
            let (code, _) = run_capture(&[
                "verify",
                "--input",
                input.to_str().unwrap(),
                "--labels",
                labels.to_str().unwrap(),
            ]);
            assert_eq!(code, EXIT_MALFORMED, "csv {bad:?}");
        }
    }

    #[test]
    fn export_dot_shape() {
        let dir = std::env::temp_dir().join("l21-cli-test-dot");
        std::fs::create_dir_all(&dir).unwrap();
        let input = dir.join("p3.json");
        std::fs::write(
            &input,
            r#"{"kind":"custom","n":3,"edges":[[0,1],[1,2]],"arcs":[[0,1],[2,1]]}"#,
        )
        .unwrap();
        let (code, text) = run_capture(&["export-dot", "--input", input.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        assert!(text.starts_with("digraph l21 {"));
        assert!(text.contains("n0 -> n1;"));
        assert!(text.contains("n2 -> n1;"));
    }
}
