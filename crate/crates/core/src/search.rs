//! Exhaustive, symmetry-reduced backtracking search for avoiding colorings:
//! t-colorings of the complete r-uniform hypergraph on n vertices containing
//! no s-colored matching of size k.
//!
//! Edges are colored in colex rank order. Color canonicalization is always
//! on: color c may first appear only after all colors below c have appeared,
//! which loses nothing up to color renaming. A partial coloring is pruned
//! exactly when its already-colored edges contain an s-colored matching of
//! size k; extending a coloring never removes matchings, so the prune is
//! sound and the traversal is complete. An optional lex-leader test under
//! vertex permutations (off by default) strengthens the reduction.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::coloring::{ColorSet, Coloring};
use crate::combinatorics::{binomial, rank_subset};
use crate::error::{Error, Result};
use crate::matching::{edge_table, find_s_colored_matching, partial_matching_exists, EdgeTable};

/// Node and wall-clock limits for a search run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 1_000_000_000,
            max_time: Some(Duration::from_secs(600)),
        }
    }
}

/// Symmetry reduction options. Color canonicalization is always on; the
/// vertex lex-leader test runs every `d` depth levels when enabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SymmetryOptions {
    pub vertex_lex_leader: Option<usize>,
}

impl SymmetryOptions {
    /// The certificate's `SYMMETRY` field.
    pub fn render(&self) -> String {
        match self.vertex_lex_leader {
            None => "color".to_string(),
            Some(d) => format!("color,vertex-d={d}"),
        }
    }
}

/// An avoidance-search instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchProblem {
    pub n: usize,
    pub r: usize,
    pub t: usize,
    pub s: usize,
    pub k: usize,
    pub budget: Budget,
    pub symmetry: SymmetryOptions,
}

impl SearchProblem {
    pub fn new(n: usize, r: usize, t: usize, s: usize, k: usize) -> Result<Self> {
        // Validates (n, r) ranges and t through the shared constructors.
        Coloring::monochromatic(n, r, t)?;
        if s < 1 || s > t {
            return Err(Error::InvalidInput(format!("need 1 <= s <= t, got s={s}, t={t}")));
        }
        if k < 1 {
            return Err(Error::InvalidInput("need k >= 1".into()));
        }
        Ok(SearchProblem {
            n,
            r,
            t,
            s,
            k,
            budget: Budget::default(),
            symmetry: SymmetryOptions::default(),
        })
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_vertex_lex_leader(mut self, period: usize) -> Self {
        self.symmetry.vertex_lex_leader = Some(period.max(1));
        self
    }
}

/// Result of a search run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// An avoiding coloring, with the number of nodes visited before it.
    Found { coloring: Coloring, nodes: u64 },
    /// The full canonical search tree was traversed; no avoiding coloring
    /// exists (up to the recorded symmetry reduction).
    Exhausted { nodes: u64 },
    /// The node or time budget ran out first.
    BudgetExceeded { nodes: u64 },
}

impl SearchOutcome {
    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes, .. }
            | SearchOutcome::Exhausted { nodes }
            | SearchOutcome::BudgetExceeded { nodes } => *nodes,
        }
    }
}

enum Walk {
    Found(Vec<u8>),
    Done,
    Budget,
}

struct Searcher<'a> {
    problem: &'a SearchProblem,
    table: &'a EdgeTable,
    colors: Vec<u8>,
    /// For each color, the s-subsets of colors containing it.
    subsets_through: Vec<Vec<ColorSet>>,
    nodes: u64,
    deadline: Option<Instant>,
    /// Shared across parallel workers; local searches leave these unused.
    cancel: Option<&'a AtomicBool>,
    shared_nodes: Option<&'a AtomicU64>,
    lex: LexLeader,
}

fn subsets_through(t: usize, s: usize) -> Vec<Vec<ColorSet>> {
    let mut all = Vec::new();
    collect_subsets(t, s, 0, ColorSet::empty(), &mut all);
    (0..t as u8)
        .map(|c| all.iter().copied().filter(|q| q.contains(c)).collect())
        .collect()
}

fn collect_subsets(t: usize, s: usize, from: u8, acc: ColorSet, out: &mut Vec<ColorSet>) {
    if acc.len() == s {
        out.push(acc);
        return;
    }
    for c in from..t as u8 {
        let mut next = acc;
        next.insert(c);
        collect_subsets(t, s, c + 1, next, out);
    }
}

impl<'a> Searcher<'a> {
    fn new(problem: &'a SearchProblem, table: &'a EdgeTable, start: Instant) -> Self {
        let num_edges = table.masks.len();
        Searcher {
            problem,
            table,
            colors: vec![0; num_edges],
            subsets_through: subsets_through(problem.t, problem.s),
            nodes: 0,
            deadline: problem.budget.max_time.map(|d| start + d),
            cancel: None,
            shared_nodes: None,
            lex: LexLeader::new(problem.n, problem.r),
        }
    }

    fn over_budget(&mut self) -> bool {
        if let Some(shared) = self.shared_nodes {
            if self.nodes.is_multiple_of(1024) {
                shared.fetch_add(1024, Ordering::Relaxed);
                if shared.load(Ordering::Relaxed) > self.problem.budget.max_nodes {
                    return true;
                }
            }
        } else if self.nodes > self.problem.budget.max_nodes {
            return true;
        }
        if self.nodes.is_multiple_of(4096) {
            if let Some(deadline) = self.deadline {
                if Instant::now() > deadline {
                    return true;
                }
            }
            if let Some(cancel) = self.cancel {
                if cancel.load(Ordering::Relaxed) {
                    return true;
                }
            }
        }
        false
    }

    /// Does assigning color `c` to the edge at `depth` complete an s-colored
    /// matching of size k among the colored edges? Any new matching must use
    /// the new edge, so only color subsets containing `c` are checked, with
    /// the new edge forced in.
    fn completes_matching(&self, depth: usize, c: u8) -> bool {
        let forced = self.table.masks[depth];
        self.subsets_through[c as usize].iter().any(|&q| {
            partial_matching_exists(
                self.table,
                &self.colors,
                depth + 1,
                q,
                forced,
                self.problem.k - 1,
            )
        })
    }

    fn dfs(&mut self, depth: usize, used_colors: usize) -> Walk {
        self.nodes += 1;
        if self.over_budget() {
            return Walk::Budget;
        }
        if depth == self.colors.len() {
            return Walk::Found(self.colors.clone());
        }
        if let Some(period) = self.problem.symmetry.vertex_lex_leader {
            if depth > 0 && depth.is_multiple_of(period) && self.lex.smaller_relabeling_exists(&self.colors, depth) {
                return Walk::Done;
            }
        }
        let limit = used_colors.min(self.problem.t - 1);
        for c in 0..=limit as u8 {
            self.colors[depth] = c;
            if !self.completes_matching(depth, c) {
                match self.dfs(depth + 1, used_colors.max(c as usize + 1)) {
                    Walk::Done => {}
                    stop => return stop,
                }
            }
        }
        Walk::Done
    }

    /// Enumerates the live canonical prefixes at `split_depth` for the
    /// parallel driver; returns None if the budget ran out first.
    fn frontier(&mut self, split_depth: usize) -> Option<Vec<(Vec<u8>, usize)>> {
        let mut out = Vec::new();
        if self.frontier_rec(0, 0, split_depth, &mut out) {
            Some(out)
        } else {
            None
        }
    }

    fn frontier_rec(
        &mut self,
        depth: usize,
        used_colors: usize,
        split_depth: usize,
        out: &mut Vec<(Vec<u8>, usize)>,
    ) -> bool {
        self.nodes += 1;
        if self.over_budget() {
            return false;
        }
        if let Some(period) = self.problem.symmetry.vertex_lex_leader {
            if depth > 0 && depth.is_multiple_of(period) && self.lex.smaller_relabeling_exists(&self.colors, depth) {
                return true;
            }
        }
        if depth == split_depth {
            out.push((self.colors[..depth].to_vec(), used_colors));
            return true;
        }
        let limit = used_colors.min(self.problem.t - 1);
        for c in 0..=limit as u8 {
            self.colors[depth] = c;
            if !self.completes_matching(depth, c)
                && !self.frontier_rec(depth + 1, used_colors.max(c as usize + 1), split_depth, out)
            {
                return false;
            }
        }
        true
    }
}

/// Lex-leader test under vertex permutations combined with canonical color
/// renaming, by pruned backtracking over preimage assignments.
///
/// The test asks whether some permutation of the vertices, after renaming
/// colors to first-appearance order, yields a strictly smaller color
/// sequence on the colored prefix. Comparison stops at the first position
/// whose preimage edge is uncolored, so only conclusive improvements prune.
/// The lex-least full coloring of every orbit passes the test at all of its
/// prefixes, so pruning on a positive answer keeps the search complete.
///
/// Automorphism-rich prefixes (many permutations comparing equal) can make
/// the backtracking itself exponential, so each test carries a work cap; a
/// capped-out test reports "no smaller relabeling", which merely skips an
/// optional prune and keeps both Found and Exhausted claims sound.
struct LexLeader {
    n: usize,
    r: usize,
    /// Vertex lists per rank, for preimage rank computation.
    edge_verts: Vec<Vec<usize>>,
    /// Rank boundaries: edges with max vertex v occupy block_start[v]..block_start[v+1].
    block_start: Vec<usize>,
}

/// Preimage assignments examined per lex-leader test before giving up.
const LEX_LEADER_WORK_CAP: u64 = 50_000;

enum BlockCmp {
    Smaller,
    Equal,
    Abandon,
}

struct LexState<'c> {
    colors: &'c [u8],
    m: usize,
    preimage: Vec<usize>,
    used: u32,
    /// Canonical renaming of permuted colors, with an undo log.
    sigma: Vec<Option<u8>>,
    sigma_next: u8,
    sigma_log: Vec<u8>,
    work_left: u64,
}

impl LexLeader {
    fn new(n: usize, r: usize) -> Self {
        let total = binomial(n, r) as usize;
        let mut edge_verts = Vec::with_capacity(total);
        for combo in crate::combinatorics::ColexCombinations::new(n, r) {
            edge_verts.push(combo);
        }
        let block_start: Vec<usize> = (0..=n).map(|v| binomial(v, r) as usize).collect();
        LexLeader { n, r, edge_verts, block_start }
    }

    /// `colors[..m]` must be color-canonical (first appearance order), which
    /// the search guarantees.
    fn smaller_relabeling_exists(&self, colors: &[u8], m: usize) -> bool {
        // A canonical single-color prefix is all zeros and maps to itself
        // under every permutation; skip the test outright.
        if colors[..m].iter().all(|&c| c == 0) {
            return false;
        }
        // Vertices beyond the max vertex of the last colored edge cannot
        // affect the comparison.
        let vmax = *self.edge_verts[m - 1].last().unwrap();
        let mut state = LexState {
            colors,
            m,
            preimage: vec![usize::MAX; self.n],
            used: 0,
            sigma: vec![None; 16],
            sigma_next: 0,
            sigma_log: Vec::new(),
            work_left: LEX_LEADER_WORK_CAP,
        };
        self.descend(&mut state, 0, vmax)
    }

    fn descend(&self, state: &mut LexState, u: usize, vmax: usize) -> bool {
        if u > vmax {
            // All colored positions compared equal: no improvement here.
            return false;
        }
        for w in 0..self.n {
            if state.used & (1 << w) != 0 {
                continue;
            }
            if state.work_left == 0 {
                return false;
            }
            state.work_left -= 1;
            state.preimage[u] = w;
            state.used |= 1 << w;
            let mark = state.sigma_log.len();
            let verdict = self.compare_block(state, u);
            let found = match verdict {
                BlockCmp::Smaller => true,
                BlockCmp::Equal => self.descend(state, u + 1, vmax),
                BlockCmp::Abandon => false,
            };
            // Roll back this branch's color bindings and the preimage.
            while state.sigma_log.len() > mark {
                let c = state.sigma_log.pop().unwrap();
                state.sigma[c as usize] = None;
                state.sigma_next -= 1;
            }
            state.used &= !(1 << w);
            state.preimage[u] = usize::MAX;
            if found {
                return true;
            }
        }
        false
    }

    /// Compares the colored positions whose edges have max vertex `u`
    /// against the canonically renamed permuted colors.
    fn compare_block(&self, state: &mut LexState, u: usize) -> BlockCmp {
        let lo = self.block_start[u];
        let hi = self.block_start[u + 1].min(state.m);
        let mut scratch = Vec::with_capacity(self.r);
        for rank in lo..hi {
            scratch.clear();
            for &v in &self.edge_verts[rank] {
                scratch.push(state.preimage[v]);
            }
            scratch.sort_unstable();
            let pre_rank = rank_subset(&scratch);
            if pre_rank >= state.m {
                // Preimage edge uncolored: comparison is inconclusive for
                // every extension of this assignment.
                return BlockCmp::Abandon;
            }
            let orig = state.colors[pre_rank];
            let canon = match state.sigma[orig as usize] {
                Some(c) => c,
                None => {
                    let c = state.sigma_next;
                    state.sigma[orig as usize] = Some(c);
                    state.sigma_next += 1;
                    state.sigma_log.push(orig);
                    c
                }
            };
            match canon.cmp(&state.colors[rank]) {
                std::cmp::Ordering::Less => return BlockCmp::Smaller,
                std::cmp::Ordering::Greater => return BlockCmp::Abandon,
                std::cmp::Ordering::Equal => {}
            }
        }
        BlockCmp::Equal
    }
}

fn validate_problem(p: &SearchProblem) -> Result<()> {
    SearchProblem::new(p.n, p.r, p.t, p.s, p.k).map(|_| ())
}

/// Runs the search single-worker. Deterministic: fixed options visit nodes
/// in a fixed order and return the identical outcome across runs.
pub fn search_avoiding(problem: &SearchProblem) -> Result<SearchOutcome> {
    validate_problem(problem)?;
    let table = edge_table(problem.n, problem.r);
    let mut searcher = Searcher::new(problem, &table, Instant::now());
    let outcome = match searcher.dfs(0, 0) {
        Walk::Found(colors) => SearchOutcome::Found {
            coloring: Coloring::new(problem.n, problem.r, problem.t, colors)?,
            nodes: searcher.nodes,
        },
        Walk::Done => SearchOutcome::Exhausted { nodes: searcher.nodes },
        Walk::Budget => SearchOutcome::BudgetExceeded { nodes: searcher.nodes },
    };
    Ok(outcome)
}

/// Runs the search with `workers` parallel workers owning disjoint subtrees
/// rooted at fixed-depth canonical prefixes. A Found result short-circuits
/// the other workers; Exhausted is claimed only after every subtree
/// completes. Node totals for Exhausted runs are deterministic; a Found
/// coloring may vary with scheduling when `workers > 1`.
pub fn search_avoiding_parallel(problem: &SearchProblem, workers: usize) -> Result<SearchOutcome> {
    validate_problem(problem)?;
    if workers <= 1 {
        return search_avoiding(problem);
    }
    let table = edge_table(problem.n, problem.r);
    let num_edges = table.masks.len();
    let start = Instant::now();

    // Deep enough to give every worker several subtrees.
    let mut split_depth = 0usize;
    let mut width = 1u64;
    while split_depth < num_edges && width < workers as u64 * 8 {
        split_depth += 1;
        width = width.saturating_mul(problem.t as u64);
    }

    let mut root = Searcher::new(problem, &table, start);
    let Some(frontier) = root.frontier(split_depth) else {
        return Ok(SearchOutcome::BudgetExceeded { nodes: root.nodes });
    };
    if split_depth == num_edges {
        // The frontier nodes are complete avoiding colorings already.
        if let Some((colors, _)) = frontier.into_iter().next() {
            return Ok(SearchOutcome::Found {
                coloring: Coloring::new(problem.n, problem.r, problem.t, colors)?,
                nodes: root.nodes,
            });
        }
        return Ok(SearchOutcome::Exhausted { nodes: root.nodes });
    }

    let cancel = AtomicBool::new(false);
    let shared_nodes = AtomicU64::new(root.nodes);
    let found: Mutex<Option<Vec<u8>>> = Mutex::new(None);
    let budget_hit = AtomicBool::new(false);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Internal(format!("cannot build worker pool: {e}")))?;
    let local_nodes: u64 = pool.install(|| {
        frontier
            .par_iter()
            .map(|(prefix, used_colors)| {
                if cancel.load(Ordering::Relaxed) {
                    return 0u64;
                }
                let mut searcher = Searcher::new(problem, &table, start);
                searcher.cancel = Some(&cancel);
                searcher.shared_nodes = Some(&shared_nodes);
                searcher.colors[..prefix.len()].copy_from_slice(prefix);
                // The prefix nodes were counted by the frontier pass.
                searcher.nodes = 0;
                match searcher.dfs(split_depth, *used_colors) {
                    Walk::Found(colors) => {
                        let mut slot = found.lock().unwrap();
                        if slot.is_none() {
                            *slot = Some(colors);
                        }
                        cancel.store(true, Ordering::Relaxed);
                    }
                    Walk::Budget => {
                        if !cancel.swap(true, Ordering::Relaxed) {
                            budget_hit.store(true, Ordering::Relaxed);
                        }
                    }
                    Walk::Done => {}
                }
                // dfs counts its entry node; subtract the re-visited root of
                // each subtree so totals match the single-worker traversal.
                searcher.nodes.saturating_sub(1)
            })
            .sum()
    });

    let nodes = root.nodes + local_nodes;
    let found = found.into_inner().unwrap();
    if let Some(colors) = found {
        return Ok(SearchOutcome::Found {
            coloring: Coloring::new(problem.n, problem.r, problem.t, colors)?,
            nodes,
        });
    }
    if budget_hit.load(Ordering::Relaxed) {
        return Ok(SearchOutcome::BudgetExceeded { nodes });
    }
    Ok(SearchOutcome::Exhausted { nodes })
}

/// A serialized, independently re-checkable record of a search outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub text: String,
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.text)
    }
}

/// Renders the certificate for an outcome, re-validating Found colorings
/// through the independent matching engine first.
pub fn certify(outcome: &SearchOutcome, problem: &SearchProblem) -> Result<Certificate> {
    let header = |word: &str, nodes: u64| {
        format!(
            "PROBLEM {} {} {} {} {}\nOUTCOME {word}\nNODES {nodes}\nSYMMETRY {}\nTOOL hypermatch {}\n",
            problem.n,
            problem.r,
            problem.t,
            problem.s,
            problem.k,
            problem.symmetry.render(),
            env!("CARGO_PKG_VERSION"),
        )
    };
    let text = match outcome {
        SearchOutcome::Found { coloring, nodes } => {
            if coloring.n() != problem.n || coloring.r() != problem.r || coloring.t() != problem.t {
                return Err(Error::Internal(
                    "found coloring does not match the problem dimensions".into(),
                ));
            }
            if find_s_colored_matching(coloring, problem.s, problem.k)?.is_some() {
                return Err(Error::Internal(
                    "search returned a coloring that contains an s-colored matching \
                     of the forbidden size"
                        .into(),
                ));
            }
            format!("{}{}", header("FOUND", *nodes), coloring.serialize())
        }
        SearchOutcome::Exhausted { nodes } => header("EXHAUSTED", *nodes),
        SearchOutcome::BudgetExceeded { nodes } => header("BUDGET", *nodes),
    };
    Ok(Certificate { text })
}

/// Re-parsed view of a certificate after an independent check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateCheck {
    pub n: usize,
    pub r: usize,
    pub t: usize,
    pub s: usize,
    pub k: usize,
    pub outcome: String,
    pub nodes: u64,
    /// True when a FOUND coloring was present and passed re-validation.
    pub revalidated: bool,
}

/// Parses a certificate and, for FOUND outcomes, re-validates the embedded
/// coloring against the stated problem with the independent matching engine.
pub fn check_certificate(text: &str) -> Result<CertificateCheck> {
    let mut lines = text.lines();
    let problem_line = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, column: 0, message: "empty certificate".into() })?;
    let fields: Vec<&str> = problem_line.split(' ').collect();
    if fields.len() != 6 || fields[0] != "PROBLEM" {
        return Err(Error::Parse {
            line: 1,
            column: 0,
            message: "expected `PROBLEM n r t s k`".into(),
        });
    }
    let num = |i: usize| -> Result<usize> {
        fields[i].parse::<usize>().map_err(|_| Error::Parse {
            line: 1,
            column: i,
            message: format!("bad integer {:?}", fields[i]),
        })
    };
    let (n, r, t, s, k) = (num(1)?, num(2)?, num(3)?, num(4)?, num(5)?);
    let outcome = lines
        .next()
        .and_then(|l| l.strip_prefix("OUTCOME "))
        .ok_or_else(|| Error::Parse { line: 2, column: 0, message: "expected OUTCOME".into() })?
        .to_string();
    let nodes = lines
        .next()
        .and_then(|l| l.strip_prefix("NODES "))
        .and_then(|v| v.parse::<u64>().ok())
        .ok_or_else(|| Error::Parse { line: 3, column: 0, message: "expected NODES".into() })?;
    let _symmetry = lines
        .next()
        .and_then(|l| l.strip_prefix("SYMMETRY "))
        .ok_or_else(|| Error::Parse { line: 4, column: 0, message: "expected SYMMETRY".into() })?;
    let _tool = lines
        .next()
        .and_then(|l| l.strip_prefix("TOOL "))
        .ok_or_else(|| Error::Parse { line: 5, column: 0, message: "expected TOOL".into() })?;

    let mut revalidated = false;
    if outcome == "FOUND" {
        let header_len: usize = text
            .lines()
            .take(5)
            .map(|l| l.len() + 1)
            .sum();
        let body = &text[header_len..];
        let coloring = Coloring::deserialize(body)?;
        if coloring.n() != n || coloring.r() != r || coloring.t() != t {
            return Err(Error::Internal(
                "certificate coloring does not match the stated problem".into(),
            ));
        }
        if find_s_colored_matching(&coloring, s, k)?.is_some() {
            return Err(Error::Internal(
                "re-validation failure: certificate coloring contains an s-colored \
                 matching of the forbidden size"
                    .into(),
            ));
        }
        revalidated = true;
    }
    Ok(CertificateCheck { n, r, t, s, k, outcome, nodes, revalidated })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_graph_instances() {
        // K4 with 2 colors admits a coloring with no monochromatic
        // 2-matching (all three perfect matchings bichromatic).
        let p = SearchProblem::new(4, 2, 2, 1, 2).unwrap();
        let outcome = search_avoiding(&p).unwrap();
        match &outcome {
            SearchOutcome::Found { coloring, .. } => {
                assert!(find_s_colored_matching(coloring, 1, 2).unwrap().is_none());
            }
            other => panic!("expected Found, got {other:?}"),
        }

        // K5 with 2 colors always has a monochromatic 2-matching.
        let p = SearchProblem::new(5, 2, 2, 1, 2).unwrap();
        let outcome = search_avoiding(&p).unwrap();
        assert!(matches!(outcome, SearchOutcome::Exhausted { .. }), "{outcome:?}");
        assert!(outcome.nodes() > 0);
    }

    #[test]
    fn six_vertex_hypergraph_found() {
        let p = SearchProblem::new(6, 3, 2, 1, 2).unwrap();
        match search_avoiding(&p).unwrap() {
            SearchOutcome::Found { coloring, .. } => {
                assert!(find_s_colored_matching(&coloring, 1, 2).unwrap().is_none());
            }
            other => panic!("expected Found, got {other:?}"),
        }
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let p = SearchProblem::new(7, 3, 2, 1, 2)
            .unwrap()
            .with_budget(Budget { max_nodes: 10, max_time: None });
        let outcome = search_avoiding(&p).unwrap();
        assert!(matches!(outcome, SearchOutcome::BudgetExceeded { .. }));
        let cert = certify(&outcome, &p).unwrap();
        assert!(cert.text.contains("OUTCOME BUDGET"));
    }

    #[test]
    fn single_worker_deterministic() {
        let p = SearchProblem::new(5, 2, 2, 1, 2).unwrap();
        let a = search_avoiding(&p).unwrap();
        let b = search_avoiding(&p).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            certify(&a, &p).unwrap().text,
            certify(&b, &p).unwrap().text
        );
    }

    #[test]
    fn parallel_agrees_with_single_worker() {
        for (n, r, t, s, k) in [(5, 2, 2, 1, 2), (4, 2, 2, 1, 2), (6, 3, 2, 1, 2)] {
            let p = SearchProblem::new(n, r, t, s, k).unwrap();
            let single = search_avoiding(&p).unwrap();
            let parallel = search_avoiding_parallel(&p, 4).unwrap();
            match (&single, &parallel) {
                (SearchOutcome::Exhausted { nodes: a }, SearchOutcome::Exhausted { nodes: b }) => {
                    assert_eq!(a, b, "parallel exhaustion node count must match")
                }
                (SearchOutcome::Found { .. }, SearchOutcome::Found { coloring, .. }) => {
                    assert!(find_s_colored_matching(coloring, s, k).unwrap().is_none());
                }
                other => panic!("outcome kind mismatch: {other:?}"),
            }
        }
    }

    #[test]
    fn certificates_roundtrip_and_tamper_detection() {
        let p = SearchProblem::new(4, 2, 2, 1, 2).unwrap();
        let outcome = search_avoiding(&p).unwrap();
        let cert = certify(&outcome, &p).unwrap();
        let check = check_certificate(&cert.text).unwrap();
        assert_eq!(check.outcome, "FOUND");
        assert!(check.revalidated);
        assert_eq!((check.n, check.r, check.t, check.s, check.k), (4, 2, 2, 1, 2));

        // Tamper with the coloring body: flip the first digit.
        let tampered = {
            let mut lines: Vec<String> = cert.text.lines().map(String::from).collect();
            let body = lines.last().unwrap().clone();
            let flipped: String = body
                .chars()
                .enumerate()
                .map(|(i, ch)| if i == 0 { if ch == '0' { '1' } else { '0' } } else { ch })
                .collect();
            *lines.last_mut().unwrap() = flipped;
            lines.join("\n") + "\n"
        };
        let err = check_certificate(&tampered).unwrap_err();
        assert!(matches!(err, Error::Internal(_)), "{err}");
    }

    #[test]
    fn exhausted_certificate_shape() {
        let p = SearchProblem::new(5, 2, 2, 1, 2).unwrap();
        let outcome = search_avoiding(&p).unwrap();
        let cert = certify(&outcome, &p).unwrap();
        assert!(cert.text.starts_with("PROBLEM 5 2 2 1 2\nOUTCOME EXHAUSTED\nNODES "));
        assert!(cert.text.contains("\nSYMMETRY color\n"));
        let check = check_certificate(&cert.text).unwrap();
        assert_eq!(check.outcome, "EXHAUSTED");
        assert!(!check.revalidated);
        assert_eq!(check.nodes, outcome.nodes());
    }

    #[test]
    fn vertex_lex_leader_preserves_outcomes() {
        // Cross-check the optional symmetry reduction against the plain
        // search on instances small enough to settle both ways.
        for (n, r, t, s, k) in [(4, 2, 2, 1, 2), (5, 2, 2, 1, 2), (5, 2, 3, 2, 2), (6, 3, 2, 1, 2)] {
            let plain = SearchProblem::new(n, r, t, s, k).unwrap();
            let reduced = plain.with_vertex_lex_leader(4);
            let a = search_avoiding(&plain).unwrap();
            let b = search_avoiding(&reduced).unwrap();
            match (&a, &b) {
                (SearchOutcome::Found { .. }, SearchOutcome::Found { coloring, .. }) => {
                    assert!(find_s_colored_matching(coloring, s, k).unwrap().is_none());
                }
                (SearchOutcome::Exhausted { nodes: na }, SearchOutcome::Exhausted { nodes: nb }) => {
                    assert!(nb <= na, "lex-leader must not enlarge the tree");
                }
                other => panic!("outcome kind mismatch: {other:?}"),
            }
        }
    }

    #[test]
    fn rejects_invalid_problems() {
        assert!(SearchProblem::new(5, 2, 2, 3, 2).is_err());
        assert!(SearchProblem::new(5, 2, 2, 0, 2).is_err());
        assert!(SearchProblem::new(5, 2, 2, 1, 0).is_err());
        assert!(SearchProblem::new(5, 7, 2, 1, 2).is_err());
    }

    /// Brute-force reference for the lex-leader comparator on complete
    /// colorings: canonicalize every vertex permutation's color sequence by
    /// first appearance and compare against the original.
    fn brute_force_smaller_exists(colors: &[u8], n: usize, r: usize) -> bool {
        let edges: Vec<Vec<usize>> =
            crate::combinatorics::ColexCombinations::new(n, r).collect();
        let mut preimage: Vec<usize> = (0..n).collect();
        permute_and_check(&mut preimage, 0, &edges, colors)
    }

    fn permute_and_check(
        preimage: &mut Vec<usize>,
        at: usize,
        edges: &[Vec<usize>],
        colors: &[u8],
    ) -> bool {
        if at == preimage.len() {
            let mut sigma = [None::<u8>; 16];
            let mut next = 0u8;
            for (i, edge) in edges.iter().enumerate() {
                let mut pre: Vec<usize> = edge.iter().map(|&v| preimage[v]).collect();
                pre.sort_unstable();
                let orig = colors[rank_subset(&pre)];
                let canon = *sigma[orig as usize].get_or_insert_with(|| {
                    let c = next;
                    next += 1;
                    c
                });
                match canon.cmp(&colors[i]) {
                    std::cmp::Ordering::Less => return true,
                    std::cmp::Ordering::Greater => return false,
                    std::cmp::Ordering::Equal => {}
                }
            }
            return false;
        }
        for i in at..preimage.len() {
            preimage.swap(at, i);
            if permute_and_check(preimage, at + 1, edges, colors) {
                preimage.swap(at, i);
                return true;
            }
            preimage.swap(at, i);
        }
        false
    }

    #[test]
    fn lex_leader_matches_brute_force_on_complete_colorings() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(83);
        for &(n, r, t) in &[(4usize, 2usize, 2usize), (5, 2, 2), (5, 2, 3), (4, 3, 2)] {
            let m = binomial(n, r) as usize;
            let lex = LexLeader::new(n, r);
            for _ in 0..200 {
                // Canonical color sequences only (first appearance order),
                // matching what the search feeds the test.
                let mut colors = vec![0u8; m];
                let mut used = 0usize;
                for slot in colors.iter_mut() {
                    *slot = rng.random_range(0..=used.min(t - 1)) as u8;
                    used = used.max(*slot as usize + 1);
                }
                let expected = brute_force_smaller_exists(&colors, n, r);
                let got = lex.smaller_relabeling_exists(&colors, m);
                assert_eq!(got, expected, "n={n} r={r} t={t} colors={colors:?}");
            }
        }
    }
}
