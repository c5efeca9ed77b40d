//! Exact computation of the oriented labeling number: verification, bounds,
//! the backtracking engine with forward checking, and a brute-force oracle.

use crate::digraph::{constraint_pairs, longest_dipath, ConstraintPairs, OrientedGraph};
use crate::lattice::{TilingKind, UnderlyingGrid};
use std::time::{Duration, Instant};
use thiserror::Error;

/// Color domains are bitmasks, so spans beyond 63 are out of reach. Instances
/// here are far below that.
const MAX_SPAN: u32 = 63;

#[derive(Error, Debug)]
pub enum SolveError {
    #[error("labeling has {got} colors but the graph has {expected} nodes")]
    SizeMismatch { expected: usize, got: usize },
    #[error("instance too large: {0}")]
    Capacity(String),
    #[error(
        "node-expansion budget exhausted: lambda is bracketed in [{lower_proven}, {upper}] \
         after {nodes_expanded} expansions"
    )]
    BudgetExhausted {
        lower_proven: u32,
        upper: u32,
        nodes_expanded: u64,
    },
}

/// A color assignment indexed by node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    colors: Vec<u32>,
}

impl Labeling {
    pub fn new(colors: Vec<u32>) -> Self {
        Labeling { colors }
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Maximum color used (0 for the empty labeling).
    pub fn span(&self) -> u32 {
        self.colors.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ViolationKind {
    /// A P1 pair whose colors differ by less than 2.
    AdjacentTooClose,
    /// A P2 pair with equal colors.
    Distance2Equal,
}

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct Violation {
    pub pair: (usize, usize),
    pub kind: ViolationKind,
    pub colors: (u32, u32),
}

/// The exact labeling number together with its witness and search
/// statistics.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub lambda: u32,
    pub witness: Labeling,
    pub lower_bound_used: u32,
    pub upper_bound_used: u32,
    pub nodes_expanded: u64,
    pub elapsed: Duration,
}

fn check_pairs(pairs: &ConstraintPairs, colors: &[u32]) -> Vec<Violation> {
    let mut violations = Vec::new();
    for &(u, v) in pairs.p1() {
        let (a, b) = (colors[u], colors[v]);
        if a.abs_diff(b) < 2 {
            violations.push(Violation {
                pair: (u, v),
                kind: ViolationKind::AdjacentTooClose,
                colors: (a, b),
            });
        }
    }
    for &(u, v) in pairs.p2() {
        let (a, b) = (colors[u], colors[v]);
        if a == b {
            violations.push(Violation {
                pair: (u, v),
                kind: ViolationKind::Distance2Equal,
                colors: (a, b),
            });
        }
    }
    violations
}

/// Empty iff `f` is a valid oriented L(2,1)-labeling of `d`; otherwise every
/// violated pair is listed.
pub fn verify(d: &OrientedGraph, f: &Labeling) -> Result<Vec<Violation>, SolveError> {
    if f.len() != d.node_count() {
        return Err(SolveError::SizeMismatch {
            expected: d.node_count(),
            got: f.len(),
        });
    }
    Ok(check_pairs(&constraint_pairs(d), f.colors()))
}

/// Greedy clique in the constraint graph P1 ∪ P2, grown from each seed node
/// in decreasing constraint-degree order. Returns the span forced by the best
/// clique found: k mutually constrained nodes need k distinct colors (span
/// >= k-1), and one more color is forced when some member is P1-adjacent to
/// all the others (it blocks two colors even at an extreme).
fn clique_bound(pairs: &ConstraintPairs) -> u32 {
    let n = pairs.node_count();
    let (a1, a2) = pairs.adjacency();
    let mut order: Vec<usize> = (0..n).collect();
    let degree = |v: usize| a1[v].len() * 2 + a2[v].len();
    order.sort_by_key(|&v| (std::cmp::Reverse(degree(v)), v));

    let mut best = 0u32;
    for &seed in &order {
        let mut clique = vec![seed];
        for &cand in &order {
            if cand == seed {
                continue;
            }
            if clique.iter().all(|&m| pairs.constrained(cand, m)) {
                clique.push(cand);
            }
        }
        let k = clique.len() as u32;
        if k < 2 {
            continue;
        }
        let dominating = clique
            .iter()
            .any(|&v| clique.iter().all(|&w| w == v || pairs.is_p1(v, w)));
        let bound = if dominating { k } else { k - 1 };
        best = best.max(bound);
    }
    best
}

fn dipath_bound(longest: usize, has_arcs: bool) -> u32 {
    if !has_arcs {
        0
    } else if longest == 1 {
        2
    } else if longest <= 3 {
        3
    } else {
        4
    }
}

/// Lower bound on the labeling number from the dipath ladder and a greedy
/// mutual-constraint clique.
pub fn lower_bound(d: &OrientedGraph) -> u32 {
    let pairs = constraint_pairs(d);
    let (longest, _) = longest_dipath(d);
    dipath_bound(longest, d.underlying().edge_count() > 0).max(clique_bound(&pairs))
}

/// Upper bound: the tiling bound Delta + 2 for lattice grids, the undirected
/// labeling number for small custom graphs, and the trivial 2(n-1) otherwise.
pub fn upper_bound(d: &OrientedGraph) -> u32 {
    upper_bound_of_grid(d.underlying())
}

fn upper_bound_of_grid(grid: &UnderlyingGrid) -> u32 {
    match grid.kind() {
        TilingKind::Square => 6,
        TilingKind::Triangular => 8,
        TilingKind::Hexagonal => 5,
        TilingKind::Custom => {
            let n = grid.node_count();
            if n <= 10 {
                solve_lambda_undirected(grid, None)
                    .expect("small undirected instance solves within bounds")
                    .lambda
            } else {
                2 * (n as u32 - 1)
            }
        }
    }
}

/// Undirected upper bound that never recurses into another solve.
fn trivial_upper_bound(grid: &UnderlyingGrid) -> u32 {
    match grid.kind() {
        TilingKind::Square => 6,
        TilingKind::Triangular => 8,
        TilingKind::Hexagonal => 5,
        TilingKind::Custom => 2 * (grid.node_count().max(1) as u32 - 1),
    }
}

struct Engine<'a> {
    order: Vec<usize>,
    a1: Vec<Vec<usize>>,
    a2: Vec<Vec<usize>>,
    pairs: &'a ConstraintPairs,
    nodes_expanded: u64,
    budget: Option<u64>,
}

enum SearchOutcome {
    Feasible(Vec<u32>),
    Infeasible,
    OutOfBudget,
}

impl<'a> Engine<'a> {
    fn new(pairs: &'a ConstraintPairs, budget: Option<u64>) -> Self {
        let n = pairs.node_count();
        let (a1, a2) = pairs.adjacency();
        // static order: decreasing constraint degree, index tie-break
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(a1[v].len() * 2 + a2[v].len()), v));
        Engine {
            order,
            a1,
            a2,
            pairs,
            nodes_expanded: 0,
            budget,
        }
    }

    /// Backtracking feasibility for colors `{0..=sigma}` with forward
    /// checking. Ascending value order under the static variable order makes
    /// the first solution the lexicographically smallest witness.
    fn feasible(&mut self, sigma: u32) -> SearchOutcome {
        let n = self.pairs.node_count();
        let full: u64 = if sigma as usize + 1 >= 64 {
            u64::MAX
        } else {
            (1u64 << (sigma + 1)) - 1
        };
        let mut domains = vec![full; n];
        let mut colors = vec![u32::MAX; n];
        let mut assigned = vec![false; n];
        match self.assign(0, sigma, &mut domains, &mut colors, &mut assigned) {
            Some(true) => SearchOutcome::Feasible(colors),
            Some(false) => SearchOutcome::Infeasible,
            None => SearchOutcome::OutOfBudget,
        }
    }

    fn assign(
        &mut self,
        depth: usize,
        sigma: u32,
        domains: &mut [u64],
        colors: &mut [u32],
        assigned: &mut [bool],
    ) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let v = self.order[depth];
        let mut dom = domains[v];
        while dom != 0 {
            let c = dom.trailing_zeros();
            dom &= dom - 1;
            if let Some(b) = self.budget {
                if self.nodes_expanded >= b {
                    return None;
                }
            }
            self.nodes_expanded += 1;
            colors[v] = c;
            assigned[v] = true;

            // forward checking: prune uncolored neighbors, remember what we
            // touched so the domains can be restored
            let near: u64 = {
                let lo = c.saturating_sub(1);
                let hi = (c + 1).min(sigma);
                let upto = if hi >= 63 { u64::MAX } else { (1u64 << (hi + 1)) - 1 };
                upto & !((1u64 << lo) - 1)
            };
            let mut trail: Vec<(usize, u64)> = Vec::new();
            let mut dead = false;
            for &u in &self.a1[v] {
                if !assigned[u] {
                    let old = domains[u];
                    let new = old & !near;
                    if new != old {
                        trail.push((u, old));
                        domains[u] = new;
                        if new == 0 {
                            dead = true;
                            break;
                        }
                    }
                }
            }
            if !dead {
                for &u in &self.a2[v] {
                    if !assigned[u] {
                        let old = domains[u];
                        let new = old & !(1u64 << c);
                        if new != old {
                            trail.push((u, old));
                            domains[u] = new;
                            if new == 0 {
                                dead = true;
                                break;
                            }
                        }
                    }
                }
            }
            if !dead {
                match self.assign(depth + 1, sigma, domains, colors, assigned) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => {
                        for (u, old) in trail {
                            domains[u] = old;
                        }
                        assigned[v] = false;
                        colors[v] = u32::MAX;
                        return None;
                    }
                }
            }
            for (u, old) in trail {
                domains[u] = old;
            }
            assigned[v] = false;
            colors[v] = u32::MAX;
        }
        Some(false)
    }
}

fn solve_on_pairs(
    pairs: &ConstraintPairs,
    lower: u32,
    upper: u32,
    budget: Option<u64>,
) -> Result<SolveResult, SolveError> {
    if upper > MAX_SPAN {
        return Err(SolveError::Capacity(format!(
            "upper bound {upper} exceeds the supported span of {MAX_SPAN}"
        )));
    }
    let start = Instant::now();
    let mut engine = Engine::new(pairs, budget);
    for sigma in lower..=upper {
        match engine.feasible(sigma) {
            SearchOutcome::Feasible(colors) => {
                return Ok(SolveResult {
                    lambda: sigma,
                    witness: Labeling::new(colors),
                    lower_bound_used: lower,
                    upper_bound_used: upper,
                    nodes_expanded: engine.nodes_expanded,
                    elapsed: start.elapsed(),
                });
            }
            SearchOutcome::Infeasible => {}
            SearchOutcome::OutOfBudget => {
                return Err(SolveError::BudgetExhausted {
                    lower_proven: sigma,
                    upper,
                    nodes_expanded: engine.nodes_expanded,
                });
            }
        }
    }
    unreachable!("the upper bound always admits a labeling");
}

/// Exact lambda of the oriented graph, with a verifying witness.
/// Deterministic: identical inputs yield identical witnesses.
pub fn solve_lambda(d: &OrientedGraph, budget: Option<u64>) -> Result<SolveResult, SolveError> {
    let pairs = constraint_pairs(d);
    let (longest, _) = longest_dipath(d);
    let lower = dipath_bound(longest, d.underlying().edge_count() > 0).max(clique_bound(&pairs));
    let upper = upper_bound(d).max(lower);
    solve_on_pairs(&pairs, lower, upper, budget)
}

/// Exact undirected lambda of a grid, through the same engine with P1 = all
/// edges and P2 = all pairs at undirected distance exactly 2.
pub fn solve_lambda_undirected(
    grid: &UnderlyingGrid,
    budget: Option<u64>,
) -> Result<SolveResult, SolveError> {
    let pairs = ConstraintPairs::of_undirected(grid);
    let lower = if grid.edge_count() > 0 { 2 } else { 0 }.max(clique_bound(&pairs));
    let upper = trivial_upper_bound(grid).max(lower);
    solve_on_pairs(&pairs, lower, upper, budget)
}

/// Smallest sigma <= `sigma_max` admitting a valid labeling, by exhaustive
/// enumeration of all functions `V -> {0..=sigma}`. `None` if no such sigma
/// exists within the cap.
pub fn brute_force_lambda(d: &OrientedGraph, sigma_max: u32) -> Result<Option<u32>, SolveError> {
    let n = d.node_count();
    let total = ((sigma_max as f64) + 1.0).powi(n as i32);
    if total > 1e7 {
        return Err(SolveError::Capacity(format!(
            "(sigma_max+1)^n = {total:.0} exceeds the brute-force cap of 1e7"
        )));
    }
    let pairs = constraint_pairs(d);
    for sigma in 0..=sigma_max {
        let base = sigma as u64 + 1;
        let mut colors = vec![0u32; n];
        loop {
            if check_pairs(&pairs, &colors).is_empty() {
                return Ok(Some(sigma));
            }
            // odometer increment in base sigma+1
            let mut i = 0;
            loop {
                if i == n {
                    break;
                }
                colors[i] += 1;
                if colors[i] as u64 == base {
                    colors[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
            if i == n {
                break;
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::OrientedGraph;
    use crate::lattice::{build_patch, PatchSpec, UnderlyingGrid};

    fn dipath(n: usize) -> OrientedGraph {
        let arcs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        OrientedGraph::from_arcs(n, &arcs).unwrap()
    }

    fn directed_triangle() -> OrientedGraph {
        OrientedGraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn cyclic_c4() -> OrientedGraph {
        OrientedGraph::from_arcs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn verify_dipath_labeling() {
        let d = dipath(4);
        let f = Labeling::new(vec![1, 3, 0, 2]);
        assert!(verify(&d, &f).unwrap().is_empty());
    }

    #[test]
    fn verify_flags_adjacent_endpoints() {
        // dipath labeling around a square: endpoints 1 and 2 come in adjacency
        let d = OrientedGraph::from_arcs(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let f = Labeling::new(vec![1, 3, 0, 2]);
        let violations = verify(&d, &f).unwrap();
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].pair, (0, 3));
        assert_eq!(violations[0].kind, ViolationKind::AdjacentTooClose);
    }

    #[test]
    fn verify_single_node() {
        let g =
            UnderlyingGrid::build(crate::lattice::TilingKind::Square, &[crate::lattice::Coord::new(0, 0)])
                .unwrap();
        let d = OrientedGraph::orient(g, vec![]).unwrap();
        assert!(verify(&d, &Labeling::new(vec![0])).unwrap().is_empty());
        assert!(matches!(
            verify(&d, &Labeling::new(vec![0, 1])),
            Err(SolveError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn verify_flags_distance2_equal() {
        let d = dipath(3);
        let violations = verify(&d, &Labeling::new(vec![0, 2, 0])).unwrap();
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].kind, ViolationKind::Distance2Equal);
    }

    #[test]
    fn lower_bound_ladder() {
        assert_eq!(lower_bound(&dipath(2)), 2);
        assert_eq!(lower_bound(&dipath(4)), 3);
        assert_eq!(lower_bound(&dipath(5)), 4);
    }

    #[test]
    fn upper_bound_tilings() {
        let sq = OrientedGraph::orient_code(
            build_patch(&PatchSpec::SquareRect { w: 3, h: 3 }).unwrap(),
            0,
        )
        .unwrap();
        assert_eq!(upper_bound(&sq), 6);
        let tri =
            OrientedGraph::orient_code(build_patch(&PatchSpec::TriWheel).unwrap(), 0).unwrap();
        assert_eq!(upper_bound(&tri), 8);
        let hex =
            OrientedGraph::orient_code(build_patch(&PatchSpec::HexCycle { k: 1 }).unwrap(), 0)
                .unwrap();
        assert_eq!(upper_bound(&hex), 5);
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_lambda(&dipath(4), None).unwrap().lambda, 3);
        assert_eq!(solve_lambda(&directed_triangle(), None).unwrap().lambda, 4);
        assert_eq!(solve_lambda(&cyclic_c4(), None).unwrap().lambda, 4);
        let g = UnderlyingGrid::build(
            crate::lattice::TilingKind::Square,
            &[crate::lattice::Coord::new(0, 0)],
        )
        .unwrap();
        let single = OrientedGraph::orient(g, vec![]).unwrap();
        assert_eq!(solve_lambda(&single, None).unwrap().lambda, 0);
    }

    #[test]
    fn solve_witness_verifies_and_brackets() {
        for d in [dipath(4), directed_triangle(), cyclic_c4()] {
            let r = solve_lambda(&d, None).unwrap();
            assert!(verify(&d, &r.witness).unwrap().is_empty());
            assert_eq!(r.witness.span(), r.lambda);
            assert!(r.lower_bound_used <= r.lambda && r.lambda <= r.upper_bound_used);
        }
    }

    #[test]
    fn solve_is_deterministic() {
        let d = OrientedGraph::orient_code(
            build_patch(&PatchSpec::SquareRect { w: 3, h: 3 }).unwrap(),
            0b011010011010,
        )
        .unwrap();
        let a = solve_lambda(&d, None).unwrap();
        let b = solve_lambda(&d, None).unwrap();
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.nodes_expanded, b.nodes_expanded);
    }

    #[test]
    fn solve_undirected_examples() {
        let p4 = UnderlyingGrid::custom(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(solve_lambda_undirected(&p4, None).unwrap().lambda, 3);
        let c6 = build_patch(&PatchSpec::HexCycle { k: 1 }).unwrap();
        assert_eq!(solve_lambda_undirected(&c6, None).unwrap().lambda, 4);
        let sq33 = build_patch(&PatchSpec::SquareRect { w: 3, h: 3 }).unwrap();
        assert_eq!(solve_lambda_undirected(&sq33, None).unwrap().lambda, 6);
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_lambda(&dipath(3), 8).unwrap(), Some(3));
        assert_eq!(brute_force_lambda(&dipath(2), 8).unwrap(), Some(2));
        assert_eq!(brute_force_lambda(&dipath(3), 2).unwrap(), None);
    }

    #[test]
    fn brute_force_capacity_guard() {
        let arcs: Vec<(usize, usize)> = (0..19).map(|i| (i, i + 1)).collect();
        let big = OrientedGraph::from_arcs(20, &arcs).unwrap();
        assert!(matches!(
            brute_force_lambda(&big, 10),
            Err(SolveError::Capacity(_))
        ));
    }

    #[test]
    fn budget_exhaustion_reports_bracket() {
        let d = OrientedGraph::orient_code(
            build_patch(&PatchSpec::SquareRect { w: 3, h: 3 }).unwrap(),
            0b101010101010,
        )
        .unwrap();
        match solve_lambda(&d, Some(1)) {
            Err(SolveError::BudgetExhausted { lower_proven, upper, .. }) => {
                assert!(lower_proven <= upper);
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn solver_matches_brute_force_on_cyclic_c4_derivation() {
        // sigma = 3 infeasible, sigma = 4 feasible, checked exhaustively
        assert_eq!(brute_force_lambda(&cyclic_c4(), 3).unwrap(), None);
        assert_eq!(brute_force_lambda(&cyclic_c4(), 4).unwrap(), Some(4));
    }
}
