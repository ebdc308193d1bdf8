//! Exact matching computations under color filters, and the two closed-form
//! vertex-count bounds.
//!
//! All matching routines are exact. A maximum matching is found by branch and
//! bound over the lowest uncovered vertex; ties between maximum matchings are
//! broken toward the lexicographically least sorted sequence of edge ranks,
//! so outputs are deterministic.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::coloring::{ColorSet, Coloring};
use crate::combinatorics::{binomial, rank_subset, unrank_edge, ColexCombinations, EdgeId, VertexSet};
use crate::error::{Error, Result};

/// Per-(n, r) lookup tables: vertex bitmask of every edge rank, and the ranks
/// through each vertex. Shared across calls since they do not depend on the
/// coloring.
pub(crate) struct EdgeTable {
    pub n: usize,
    pub r: usize,
    pub masks: Vec<u32>,
    pub by_vertex: Vec<Vec<usize>>,
}

impl EdgeTable {
    fn build(n: usize, r: usize) -> EdgeTable {
        let total = binomial(n, r) as usize;
        let mut masks = Vec::with_capacity(total);
        let mut by_vertex = vec![Vec::new(); n];
        for (rank, combo) in ColexCombinations::new(n, r).enumerate() {
            let mask = combo.iter().fold(0u32, |m, &v| m | (1 << v));
            masks.push(mask);
            for &v in &combo {
                by_vertex[v].push(rank);
            }
        }
        EdgeTable { n, r, masks, by_vertex }
    }
}

type TableCache = Mutex<HashMap<(usize, usize), Arc<EdgeTable>>>;

pub(crate) fn edge_table(n: usize, r: usize) -> Arc<EdgeTable> {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry((n, r))
        .or_insert_with(|| Arc::new(EdgeTable::build(n, r)))
        .clone()
}

/// A set of pairwise vertex-disjoint edges together with the exact set of
/// colors its edges carry under the coloring it certifies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<EdgeId>,
    colorset: ColorSet,
}

impl Matching {
    /// Builds a matching from edge ranks, reading colors back from the
    /// coloring. Ranks are stored sorted ascending.
    pub fn from_edges(mut edges: Vec<EdgeId>, coloring: &Coloring) -> Result<Self> {
        edges.sort();
        let table = edge_table(coloring.n(), coloring.r());
        let mut used = 0u32;
        let mut colorset = ColorSet::empty();
        for &id in &edges {
            if id.0 >= table.masks.len() {
                return Err(Error::InvalidInput(format!("edge rank {} out of range", id.0)));
            }
            let mask = table.masks[id.0];
            if used & mask != 0 {
                return Err(Error::InvalidInput(format!(
                    "edges are not pairwise disjoint at rank {}",
                    id.0
                )));
            }
            used |= mask;
            colorset.insert(coloring.color(id));
        }
        Ok(Matching { edges, colorset })
    }

    pub fn empty() -> Self {
        Matching { edges: Vec::new(), colorset: ColorSet::empty() }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn colorset(&self) -> ColorSet {
        self.colorset
    }

    /// Bitmask of all covered vertices.
    pub fn covered(&self, coloring: &Coloring) -> u32 {
        let table = edge_table(coloring.n(), coloring.r());
        self.edges.iter().fold(0u32, |m, &id| m | table.masks[id.0])
    }

    /// Independent re-validation: pairwise disjointness, ranks in range, and
    /// the stored colorset equal to the colors read back from the coloring.
    pub fn validate(&self, coloring: &Coloring) -> Result<()> {
        let rebuilt = Matching::from_edges(self.edges.clone(), coloring)?;
        if rebuilt.colorset != self.colorset {
            return Err(Error::Internal(format!(
                "matching colorset {} does not match colors read from the coloring ({})",
                self.colorset, rebuilt.colorset
            )));
        }
        Ok(())
    }

    /// Renders the bit-exact witness text block:
    /// a `MATCHING size=.. colors=..` line, then one line per edge
    /// (`r` sorted vertex indices, space-separated), lines sorted
    /// lexicographically as strings.
    pub fn render_witness(&self, n: usize, r: usize) -> Result<String> {
        let mut lines: Vec<String> = Vec::with_capacity(self.edges.len());
        for &id in &self.edges {
            lines.push(unrank_edge(id, n, r)?.to_string());
        }
        lines.sort();
        let mut out = format!("MATCHING size={} colors={}\n", self.edges.len(), self.colorset);
        for line in lines {
            out.push_str(&line);
            out.push('\n');
        }
        Ok(out)
    }

    /// Re-reads a witness block against the coloring it certifies, checking
    /// the declared size and colors against the edges read back.
    pub fn parse_witness(text: &str, coloring: &Coloring) -> Result<Matching> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            column: 0,
            message: "empty witness block".into(),
        })?;
        let rest = header.strip_prefix("MATCHING size=").ok_or_else(|| Error::Parse {
            line: 1,
            column: 0,
            message: "expected `MATCHING size=.. colors=..`".into(),
        })?;
        let (size_text, colors_text) = rest.split_once(" colors=").ok_or_else(|| Error::Parse {
            line: 1,
            column: 0,
            message: "expected ` colors=` in witness header".into(),
        })?;
        let size: usize = size_text.parse().map_err(|_| Error::Parse {
            line: 1,
            column: 0,
            message: format!("bad size {size_text:?}"),
        })?;
        let mut declared = ColorSet::empty();
        if !colors_text.is_empty() {
            for part in colors_text.split(',') {
                let c: u8 = part.parse().map_err(|_| Error::Parse {
                    line: 1,
                    column: 0,
                    message: format!("bad color {part:?}"),
                })?;
                declared.insert(c);
            }
        }
        let mut edges = Vec::with_capacity(size);
        for (i, line) in lines.enumerate() {
            let verts: Vec<usize> = line
                .split(' ')
                .map(|w| {
                    w.parse::<usize>().map_err(|_| Error::Parse {
                        line: i + 2,
                        column: 0,
                        message: format!("bad vertex {w:?}"),
                    })
                })
                .collect::<Result<_>>()?;
            let mut sorted = verts;
            sorted.sort_unstable();
            let edge = crate::combinatorics::Edge::new(&sorted)?;
            edges.push(crate::combinatorics::rank_edge(&edge, coloring.n(), coloring.r())?);
        }
        let matching = Matching::from_edges(edges, coloring)?;
        if matching.len() != size {
            return Err(Error::Internal(format!(
                "witness declares size {size} but lists {} edges",
                matching.len()
            )));
        }
        if matching.colorset() != declared {
            return Err(Error::Internal(format!(
                "witness declares colors {declared} but the coloring gives {}",
                matching.colorset()
            )));
        }
        Ok(matching)
    }
}

/// Parameters of the two vertex-count bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundParams {
    pub t: usize,
    pub s: usize,
    pub k: usize,
    pub r: usize,
}

impl BoundParams {
    pub fn new(t: usize, s: usize, k: usize, r: usize) -> Result<Self> {
        if s < 1 || s > t {
            return Err(Error::InvalidInput(format!("need 1 <= s <= t, got s={s}, t={t}")));
        }
        if k < 1 {
            return Err(Error::InvalidInput("need k >= 1".into()));
        }
        if r < 2 {
            return Err(Error::InvalidInput(format!("need r >= 2, got r={r}")));
        }
        Ok(BoundParams { t, s, k, r })
    }
}

/// Vertex count forcing a monochromatic matching of size k:
/// `(t-1)(k-1) + kr`.
pub fn afl_bound(p: &BoundParams) -> usize {
    (p.t - 1) * (p.k - 1) + p.k * p.r
}

/// Vertex count conjectured to force an s-colored matching of size k:
/// `kr + floor((k-1)(t-s) / (1 + r + ... + r^(s-1)))`.
pub fn conjecture_bound(p: &BoundParams) -> usize {
    let denom: u64 = (0..p.s).map(|i| (p.r as u64).pow(i as u32)).sum();
    let num = (p.k as u64 - 1) * (p.t as u64 - p.s as u64);
    p.k * p.r + (num / denom) as usize
}

/// Search context shared by the exact matching routines.
struct MatchCtx<'a> {
    table: &'a EdgeTable,
    colors: &'a [u8],
    allowed: ColorSet,
    restrict: u32,
    /// Only edges with rank strictly below this limit exist (used by the
    /// avoidance search over partially colored hypergraphs).
    rank_limit: usize,
}

impl<'a> MatchCtx<'a> {
    fn eligible(&self, rank: usize) -> bool {
        rank < self.rank_limit
            && self.allowed.contains(self.colors[rank])
            && self.table.masks[rank] & !self.restrict == 0
    }

    /// Number of usable vertices with index >= `pivot` not yet covered.
    fn avail(&self, used: u32, pivot: usize) -> usize {
        let ge = if pivot >= 32 { 0 } else { u32::MAX << pivot };
        (self.restrict & !used & ge).count_ones() as usize
    }

    /// Maximum matching size over eligible edges disjoint from `used`.
    fn max_size(&self, used: u32, pivot: usize, count: usize, best: &mut usize) {
        let mut pivot = pivot;
        while pivot < self.table.n && (self.restrict & !used) & (1 << pivot) == 0 {
            pivot += 1;
        }
        if pivot >= self.table.n {
            *best = (*best).max(count);
            return;
        }
        if count + self.avail(used, pivot) / self.table.r <= *best {
            return;
        }
        for &rank in &self.table.by_vertex[pivot] {
            if self.eligible(rank) && self.table.masks[rank] & used == 0 {
                self.max_size(used | self.table.masks[rank], pivot + 1, count + 1, best);
            }
        }
        // Leave `pivot` uncovered.
        self.max_size(used, pivot + 1, count, best);
    }

    /// Decision: does a matching of `need` eligible edges, all of rank
    /// strictly greater than `floor`, disjoint from `used`, exist?
    fn exists(&self, used: u32, pivot: usize, need: usize, floor: Option<usize>) -> bool {
        if need == 0 {
            return true;
        }
        let mut pivot = pivot;
        while pivot < self.table.n && (self.restrict & !used) & (1 << pivot) == 0 {
            pivot += 1;
        }
        if pivot >= self.table.n {
            return false;
        }
        if need > self.avail(used, pivot) / self.table.r {
            return false;
        }
        for &rank in &self.table.by_vertex[pivot] {
            if floor.is_some_and(|f| rank <= f) {
                continue;
            }
            if self.eligible(rank)
                && self.table.masks[rank] & used == 0
                && self.exists(used | self.table.masks[rank], pivot + 1, need - 1, floor)
            {
                return true;
            }
        }
        self.exists(used, pivot + 1, need, floor)
    }

    /// Lexicographically least sorted rank sequence of a matching of exactly
    /// `size` eligible edges, or `None` if none exists.
    fn lex_least(&self, size: usize) -> Option<Vec<EdgeId>> {
        if size == 0 {
            return Some(Vec::new());
        }
        if !self.exists(0, 0, size, None) {
            return None;
        }
        let mut chosen: Vec<EdgeId> = Vec::with_capacity(size);
        let mut used = 0u32;
        let mut floor: Option<usize> = None;
        for pos in 0..size {
            let remaining = size - pos - 1;
            let mut advanced = false;
            for rank in floor.map_or(0, |f| f + 1)..self.rank_limit {
                if !self.eligible(rank) || self.table.masks[rank] & used != 0 {
                    continue;
                }
                if self.exists(used | self.table.masks[rank], 0, remaining, Some(rank)) {
                    chosen.push(EdgeId(rank));
                    used |= self.table.masks[rank];
                    floor = Some(rank);
                    advanced = true;
                    break;
                }
            }
            debug_assert!(advanced, "feasible prefix must extend");
            if !advanced {
                return None;
            }
        }
        Some(chosen)
    }
}

fn restrict_mask(coloring: &Coloring, restrict_to: Option<&VertexSet>) -> u32 {
    match restrict_to {
        Some(s) => s.bits(),
        None => VertexSet::full(coloring.n()).expect("validated n").bits(),
    }
}

/// Maximum-cardinality matching using only edges whose color lies in
/// `allowed_colors` and whose vertices lie in `restrict_to` (default: all
/// vertices). Exact; among maximum matchings the lexicographically least
/// sorted rank sequence is returned.
pub fn max_matching(
    coloring: &Coloring,
    allowed_colors: ColorSet,
    restrict_to: Option<&VertexSet>,
) -> Matching {
    let table = edge_table(coloring.n(), coloring.r());
    let ctx = MatchCtx {
        table: &table,
        colors: coloring.colors(),
        allowed: allowed_colors,
        restrict: restrict_mask(coloring, restrict_to),
        rank_limit: coloring.edge_count(),
    };
    let mut best = 0usize;
    ctx.max_size(0, 0, 0, &mut best);
    let edges = ctx.lex_least(best).expect("size came from the same search");
    Matching::from_edges(edges, coloring).expect("search produces disjoint eligible edges")
}

/// Lexicographically least matching of exactly `size` edges under the given
/// filters, if one exists.
fn matching_of_size(
    coloring: &Coloring,
    allowed: ColorSet,
    restrict_to: Option<&VertexSet>,
    size: usize,
) -> Option<Matching> {
    let table = edge_table(coloring.n(), coloring.r());
    let ctx = MatchCtx {
        table: &table,
        colors: coloring.colors(),
        allowed,
        restrict: restrict_mask(coloring, restrict_to),
        rank_limit: coloring.edge_count(),
    };
    let edges = ctx.lex_least(size)?;
    Some(Matching::from_edges(edges, coloring).expect("search produces disjoint eligible edges"))
}

/// Iterates the `C(t, s)` color subsets in lexicographic order of their
/// sorted color lists.
fn color_subsets(t: usize, s: usize) -> Vec<ColorSet> {
    // Lex order over sorted s-tuples from 0..t.
    let mut out = Vec::new();
    let mut combo: Vec<u8> = (0..s as u8).collect();
    loop {
        out.push(ColorSet::from_colors(&combo));
        // Lex successor.
        let mut i = s;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if (combo[i] as usize) < t - (s - i) {
                combo[i] += 1;
                for j in i + 1..s {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Best s-colored matching of size at least `k`, if any: the best
/// [`max_matching`] over all `C(t, s)` color subsets. The first subset (in
/// lexicographic order) achieving the maximum size wins.
pub fn find_s_colored_matching(coloring: &Coloring, s: usize, k: usize) -> Result<Option<Matching>> {
    if s < 1 || s > coloring.t() {
        return Err(Error::InvalidInput(format!(
            "need 1 <= s <= t, got s={s}, t={}",
            coloring.t()
        )));
    }
    let mut best: Option<Matching> = None;
    for subset in color_subsets(coloring.t(), s) {
        let m = max_matching(coloring, subset, None);
        if best.as_ref().is_none_or(|b| m.len() > b.len()) {
            best = Some(m);
        }
    }
    Ok(best.filter(|m| m.len() >= k))
}

/// Monochromatic matching of size exactly `k` within `restrict_to`, if one
/// exists: least color first, then least rank sequence.
pub fn find_mono_matching(
    coloring: &Coloring,
    k: usize,
    restrict_to: Option<&VertexSet>,
) -> Result<Option<(u8, Matching)>> {
    if k < 1 {
        return Err(Error::InvalidInput("need k >= 1".into()));
    }
    for c in 0..coloring.t() as u8 {
        if let Some(m) = matching_of_size(coloring, ColorSet::single(c), restrict_to, k) {
            return Ok(Some((c, m)));
        }
    }
    Ok(None)
}

/// Streams every unordered partition of `{0, ..., n-1}` into `n/r` disjoint
/// r-sets, exactly once, as lists of edge ranks.
///
/// Canonical order: each successive edge contains the least uncovered vertex,
/// with its remaining vertices chosen in lexicographic order.
pub fn enumerate_perfect_matchings(n: usize, r: usize) -> Result<PerfectMatchings> {
    // Validates (n, r).
    unrank_edge(EdgeId(0), n, r)?;
    if !n.is_multiple_of(r) {
        return Err(Error::InvalidInput(format!("r={r} does not divide n={n}")));
    }
    Ok(PerfectMatchings {
        n,
        r,
        stack: Vec::with_capacity(n / r),
        primed: false,
        exhausted: false,
    })
}

struct PmFrame {
    /// Candidate edges for this level: (vertex mask, rank), ordered
    /// lexicographically by the partner tuple.
    candidates: Vec<(u32, usize)>,
    idx: usize,
}

pub struct PerfectMatchings {
    n: usize,
    r: usize,
    stack: Vec<PmFrame>,
    primed: bool,
    exhausted: bool,
}

impl PerfectMatchings {
    fn used(&self) -> u32 {
        self.stack.iter().map(|f| f.candidates[f.idx].0).fold(0, |a, b| a | b)
    }

    fn push_frame(&mut self) {
        let used = self.used();
        let free: Vec<usize> = (0..self.n).filter(|&v| used & (1 << v) == 0).collect();
        let pivot = free[0];
        let rest = &free[1..];
        let mut candidates = Vec::with_capacity(binomial(rest.len(), self.r - 1) as usize);
        let mut verts = vec![0usize; self.r];
        verts[0] = pivot;
        // Lexicographic (r-1)-combinations of the remaining free vertices.
        for partners in lex_combinations(rest, self.r - 1) {
            let mut mask = 1u32 << pivot;
            for (i, &p) in partners.iter().enumerate() {
                verts[i + 1] = p;
                mask |= 1 << p;
            }
            candidates.push((mask, rank_subset(&verts)));
        }
        self.stack.push(PmFrame { candidates, idx: 0 });
    }

    fn descend(&mut self) {
        while self.stack.len() < self.n / self.r {
            self.push_frame();
        }
    }

    fn advance(&mut self) -> bool {
        while let Some(frame) = self.stack.last_mut() {
            frame.idx += 1;
            if frame.idx < frame.candidates.len() {
                return true;
            }
            self.stack.pop();
        }
        false
    }
}

impl Iterator for PerfectMatchings {
    type Item = Vec<EdgeId>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.exhausted {
            return None;
        }
        if !self.primed {
            self.primed = true;
            self.descend();
        } else if self.advance() {
            self.descend();
        } else {
            self.exhausted = true;
            return None;
        }
        Some(
            self.stack
                .iter()
                .map(|f| EdgeId(f.candidates[f.idx].1))
                .collect(),
        )
    }
}

/// Lexicographic k-combinations drawn from an ascending candidate list.
fn lex_combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > items.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < items.len() - (k - i) {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Exact matching decision over a partially colored hypergraph: do `need`
/// edges of rank below `rank_limit`, colored within `allowed`, pairwise
/// disjoint and disjoint from `used`, exist? Used by the avoidance search.
pub(crate) fn partial_matching_exists(
    table: &EdgeTable,
    colors: &[u8],
    rank_limit: usize,
    allowed: ColorSet,
    used: u32,
    need: usize,
) -> bool {
    let ctx = MatchCtx {
        table,
        colors,
        allowed,
        restrict: VertexSet::full(table.n).expect("validated n").bits(),
        rank_limit,
    };
    ctx.exists(used, 0, need, None)
}
