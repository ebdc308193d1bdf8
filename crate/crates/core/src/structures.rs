//! Detectors for the structures arising in 3-uniform colorings: B-sets,
//! B+-sets, A-sets, monochromatic K6s, rainbow K5s, disks, pair color
//! profiles, and the balanced-partition witness extraction.
//!
//! Every detector is an unconditional definitional scanner: it checks the
//! defining property directly, so each returned structure re-validates
//! against its definition by construction.

use crate::coloring::{ColorSet, Coloring};
use crate::combinatorics::{rank_subset, ColexCombinations, EdgeId, VertexSet};
use crate::error::{Error, Result};
use crate::matching::Matching;

/// Cap on the number of rainbow 5-sets listed in a [`StructureReport`];
/// the total count is always exact.
pub const RAINBOW_LIST_CAP: usize = 100;

fn require_r3(coloring: &Coloring) -> Result<()> {
    if coloring.r() != 3 {
        return Err(Error::InvalidInput(format!(
            "structure detectors apply to 3-uniform colorings, got r={}",
            coloring.r()
        )));
    }
    Ok(())
}

fn require_members(coloring: &Coloring, set: &VertexSet, want: usize, what: &str) -> Result<Vec<usize>> {
    if set.n() != coloring.n() {
        return Err(Error::InvalidInput(format!(
            "{what} lives on {} vertices but the coloring has {}",
            set.n(),
            coloring.n()
        )));
    }
    if set.len() != want {
        return Err(Error::InvalidInput(format!(
            "{what} must have exactly {want} vertices, got {}",
            set.len()
        )));
    }
    Ok(set.members())
}

/// Colors of all `C(m, 3)` triples induced by `members`.
fn induced_colors(coloring: &Coloring, members: &[usize]) -> ColorSet {
    let mut present = ColorSet::empty();
    for combo in ColexCombinations::new(members.len(), 3) {
        let verts = [members[combo[0]], members[combo[1]], members[combo[2]]];
        present.insert(coloring.color(EdgeId(rank_subset(&verts))));
    }
    present
}

/// The 10 partitions of a 6-set into two disjoint triples, as pairs of edge
/// ranks, in canonical order: the triple containing the least member, its
/// partners in lexicographic order.
fn six_set_partitions(members: &[usize]) -> Vec<(EdgeId, EdgeId)> {
    debug_assert_eq!(members.len(), 6);
    let mut out = Vec::with_capacity(10);
    for i in 1..5 {
        for j in (i + 1)..6 {
            let first = [members[0], members[i], members[j]];
            let second: Vec<usize> = (1..6)
                .filter(|&x| x != i && x != j)
                .map(|x| members[x])
                .collect();
            out.push((
                EdgeId(rank_subset(&first)),
                EdgeId(rank_subset(&second)),
            ));
        }
    }
    out
}

/// Full set of colors avoided by a 6-set that has no monochromatic disjoint
/// edge pair; empty when the set is not a B-set.
pub fn b_set_avoided_colors(coloring: &Coloring, six: &VertexSet) -> Result<ColorSet> {
    require_r3(coloring)?;
    let members = require_members(coloring, six, 6, "B-set candidate")?;
    for (a, b) in six_set_partitions(&members) {
        if coloring.color(a) == coloring.color(b) {
            return Ok(ColorSet::empty());
        }
    }
    let present = induced_colors(coloring, &members);
    let mut avoided = ColorSet::empty();
    for c in 0..coloring.t() as u8 {
        if !present.contains(c) {
            avoided.insert(c);
        }
    }
    Ok(avoided)
}

/// Is `six` a B-set: some color avoided by all 20 induced edges, and no
/// disjoint pair of induced edges monochromatic? Returns the least avoided
/// color.
pub fn is_b_set(coloring: &Coloring, six: &VertexSet) -> Result<Option<u8>> {
    let avoided = b_set_avoided_colors(coloring, six)?;
    Ok(avoided.iter().next())
}

/// Is `seven` a B+-set: some color absent from all 35 induced edges and no
/// two disjoint induced edges of the same color? Equivalently, every 6-subset
/// is a B-set avoiding the same color.
pub fn is_b_plus_set(coloring: &Coloring, seven: &VertexSet) -> Result<Option<u8>> {
    require_r3(coloring)?;
    let members = require_members(coloring, seven, 7, "B+-set candidate")?;
    // Disjoint pairs inside 7 vertices: a triple and a triple from its
    // 4-vertex complement.
    for combo in ColexCombinations::new(7, 3) {
        let s = [members[combo[0]], members[combo[1]], members[combo[2]]];
        let cs = coloring.color(EdgeId(rank_subset(&s)));
        let rest: Vec<usize> = (0..7).filter(|i| !combo.contains(i)).map(|i| members[i]).collect();
        for skip in 0..4 {
            let t: Vec<usize> = (0..4).filter(|&x| x != skip).map(|x| rest[x]).collect();
            if coloring.color(EdgeId(rank_subset(&t))) == cs {
                return Ok(None);
            }
        }
    }
    let present = induced_colors(coloring, &members);
    Ok(present.least_missing(coloring.t()))
}

/// Is `six` an A-set: does it contain a monochromatic perfect matching (two
/// disjoint same-colored triples)? Returns the first such partition in
/// canonical order.
pub fn is_a_set(coloring: &Coloring, six: &VertexSet) -> Result<Option<(u8, Matching)>> {
    require_r3(coloring)?;
    let members = require_members(coloring, six, 6, "A-set candidate")?;
    for (a, b) in six_set_partitions(&members) {
        let c = coloring.color(a);
        if c == coloring.color(b) {
            let m = Matching::from_edges(vec![a, b], coloring)?;
            return Ok(Some((c, m)));
        }
    }
    Ok(None)
}

/// All 6-subsets (containing `through`, if given) whose 20 induced edges
/// share one color, in colex order of the subsets.
pub fn find_mono_k6(
    coloring: &Coloring,
    through: Option<(usize, usize)>,
) -> Result<Vec<(VertexSet, u8)>> {
    require_r3(coloring)?;
    let n = coloring.n();
    if n < 6 {
        return Err(Error::InvalidInput(format!("need n >= 6, got n={n}")));
    }
    if let Some((u, v)) = through {
        if u == v || u >= n || v >= n {
            return Err(Error::InvalidInput(format!(
                "pair ({u}, {v}) invalid for n={n}"
            )));
        }
    }
    let mut out = Vec::new();
    for members in ColexCombinations::new(n, 6) {
        if let Some((u, v)) = through {
            if !members.contains(&u) || !members.contains(&v) {
                continue;
            }
        }
        if let Some(c) = mono_color_of(coloring, &members) {
            out.push((VertexSet::from_members(n, &members)?, c));
        }
    }
    Ok(out)
}

/// The common color of all induced triples, if there is one.
fn mono_color_of(coloring: &Coloring, members: &[usize]) -> Option<u8> {
    let mut color = None;
    for combo in ColexCombinations::new(members.len(), 3) {
        let verts = [members[combo[0]], members[combo[1]], members[combo[2]]];
        let c = coloring.color(EdgeId(rank_subset(&verts)));
        match color {
            None => color = Some(c),
            Some(prev) if prev != c => return None,
            _ => {}
        }
    }
    color
}

/// Least (in colex order) 5-subset whose 10 induced edges use at least three
/// colors, if any.
pub fn find_rainbow_k5(coloring: &Coloring) -> Result<Option<VertexSet>> {
    require_r3(coloring)?;
    if coloring.n() < 5 || coloring.t() < 3 {
        return Err(Error::InvalidInput(format!(
            "rainbow detection needs n >= 5 and t >= 3, got n={}, t={}",
            coloring.n(),
            coloring.t()
        )));
    }
    let (list, _) = rainbow_scan(coloring, 1);
    Ok(list.into_iter().next())
}

/// Collects up to `cap` rainbow 5-sets in colex order plus the exact total.
fn rainbow_scan(coloring: &Coloring, cap: usize) -> (Vec<VertexSet>, usize) {
    let n = coloring.n();
    if n < 5 || coloring.t() < 3 {
        return (Vec::new(), 0);
    }
    let mut list = Vec::new();
    let mut total = 0usize;
    for members in ColexCombinations::new(n, 5) {
        if induced_colors(coloring, &members).len() >= 3 {
            total += 1;
            if list.len() < cap {
                list.push(VertexSet::from_members(n, &members).expect("members < n"));
            }
        }
    }
    (list, total)
}

/// Three monochromatic complete 6-vertex subhypergraphs of pairwise distinct
/// colors, pairwise intersecting in exactly 2 vertices, with empty common
/// intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disk {
    pub sets: [VertexSet; 3],
    pub colors: [u8; 3],
}

impl Disk {
    /// Definitional re-validation against a coloring.
    pub fn validate(&self, coloring: &Coloring) -> Result<()> {
        for (i, set) in self.sets.iter().enumerate() {
            let members = require_members(coloring, set, 6, "disk component")?;
            match mono_color_of(coloring, &members) {
                Some(c) if c == self.colors[i] => {}
                got => {
                    return Err(Error::Internal(format!(
                        "disk component {i} is not monochromatic in color {} (got {got:?})",
                        self.colors[i]
                    )))
                }
            }
        }
        if self.colors[0] == self.colors[1]
            || self.colors[0] == self.colors[2]
            || self.colors[1] == self.colors[2]
        {
            return Err(Error::Internal("disk colors are not pairwise distinct".into()));
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if self.sets[i].intersection(&self.sets[j]).len() != 2 {
                return Err(Error::Internal(format!(
                    "disk components {i} and {j} do not intersect in exactly 2 vertices"
                )));
            }
        }
        let triple = self.sets[0]
            .intersection(&self.sets[1])
            .intersection(&self.sets[2]);
        if !triple.is_empty() {
            return Err(Error::Internal("disk components share a common vertex".into()));
        }
        Ok(())
    }
}

/// Searches the monochromatic-K6 census for a disk. First triple found, with
/// the census in colex order.
pub fn find_disk(coloring: &Coloring) -> Result<Option<Disk>> {
    if coloring.n() != 12 || coloring.r() != 3 || coloring.t() != 3 {
        return Err(Error::InvalidInput(format!(
            "disk detection needs (n, r, t) = (12, 3, 3), got ({}, {}, {})",
            coloring.n(),
            coloring.r(),
            coloring.t()
        )));
    }
    let monos = find_mono_k6(coloring, None)?;
    let m = monos.len();
    for i in 0..m {
        for j in (i + 1)..m {
            if monos[i].1 == monos[j].1 {
                continue;
            }
            if monos[i].0.intersection(&monos[j].0).len() != 2 {
                continue;
            }
            for k in (j + 1)..m {
                if monos[k].1 == monos[i].1 || monos[k].1 == monos[j].1 {
                    continue;
                }
                if monos[k].0.intersection(&monos[i].0).len() != 2
                    || monos[k].0.intersection(&monos[j].0).len() != 2
                {
                    continue;
                }
                let triple = monos[i]
                    .0
                    .intersection(&monos[j].0)
                    .intersection(&monos[k].0);
                if triple.is_empty() {
                    let disk = Disk {
                        sets: [monos[i].0, monos[j].0, monos[k].0],
                        colors: [monos[i].1, monos[j].1, monos[k].1],
                    };
                    disk.validate(coloring)?;
                    return Ok(Some(disk));
                }
            }
        }
    }
    Ok(None)
}

/// Exact set of colors appearing on the `C(n-2, r-2)` edges containing both
/// `u` and `v`.
pub fn pair_color_profile(coloring: &Coloring, u: usize, v: usize) -> Result<ColorSet> {
    let n = coloring.n();
    if u == v || u >= n || v >= n {
        return Err(Error::InvalidInput(format!(
            "pair ({u}, {v}) invalid for n={n}"
        )));
    }
    let others: Vec<usize> = (0..n).filter(|&x| x != u && x != v).collect();
    let mut profile = ColorSet::empty();
    for combo in ColexCombinations::new(others.len(), coloring.r() - 2) {
        let mut verts: Vec<usize> = combo.iter().map(|&i| others[i]).collect();
        verts.push(u);
        verts.push(v);
        verts.sort_unstable();
        profile.insert(coloring.color(EdgeId(rank_subset(&verts))));
    }
    Ok(profile)
}

/// Which side of a balanced partition a witness refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionSide {
    Given,
    Complement,
}

/// Outcome of the balanced-partition scan: either a partition-respecting
/// perfect matching using at most 2 colors, or a certified B-set side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionWitness {
    TwoColoredPm(Matching),
    BSide { side: PartitionSide, avoided_color: u8 },
}

/// Scans all 10 x 10 combinations of (perfect matching of `side`) x (perfect
/// matching of its complement). If some combined 4-edge matching uses at most
/// 2 colors it is returned; otherwise one of the two sides is a B-set and is
/// reported (the given side is checked first).
pub fn balanced_partition_report(coloring: &Coloring, side: &VertexSet) -> Result<PartitionWitness> {
    require_r3(coloring)?;
    if coloring.n() != 12 {
        return Err(Error::InvalidInput(format!(
            "balanced partition analysis needs n = 12, got n={}",
            coloring.n()
        )));
    }
    if coloring.t() > 3 {
        return Err(Error::InvalidInput(format!(
            "balanced partition analysis needs t <= 3, got t={}",
            coloring.t()
        )));
    }
    let members = require_members(coloring, side, 6, "partition side")?;
    let complement = side.complement();
    let co_members = complement.members();
    let side_partitions = six_set_partitions(&members);
    let co_partitions = six_set_partitions(&co_members);
    for &(a, b) in &side_partitions {
        for &(c, d) in &co_partitions {
            let colors = ColorSet::from_colors(&[
                coloring.color(a),
                coloring.color(b),
                coloring.color(c),
                coloring.color(d),
            ]);
            if colors.len() <= 2 {
                let m = Matching::from_edges(vec![a, b, c, d], coloring)?;
                return Ok(PartitionWitness::TwoColoredPm(m));
            }
        }
    }
    if let Some(color) = is_b_set(coloring, side)? {
        return Ok(PartitionWitness::BSide { side: PartitionSide::Given, avoided_color: color });
    }
    if let Some(color) = is_b_set(coloring, &complement)? {
        return Ok(PartitionWitness::BSide { side: PartitionSide::Complement, avoided_color: color });
    }
    // Unreachable for t <= 3: if no partition-respecting combined matching is
    // 2-colored, the case analysis over the sides' matchings forces one side
    // to avoid a color with no monochromatic disjoint pair.
    Err(Error::Internal(
        "balanced partition produced neither a 2-colored matching nor a B-set side".into(),
    ))
}

/// Census of every structure the detectors know about, for one coloring.
#[derive(Debug, Clone)]
pub struct StructureReport {
    pub n: usize,
    pub r: usize,
    pub t: usize,
    pub b_set_count: usize,
    pub a_set_count: usize,
    pub mono_k6: Vec<(VertexSet, u8)>,
    pub rainbow_k5: Vec<VertexSet>,
    pub rainbow_k5_total: usize,
    pub disk: Option<Disk>,
    /// For each vertex pair (u, v), u < v in lexicographic order, the exact
    /// set of colors on edges containing both.
    pub pair_profiles: Vec<((usize, usize), ColorSet)>,
    /// Histogram over unordered pairs of distinct monochromatic K6s, indexed
    /// by intersection size 0..=6.
    pub mono_k6_intersections: [usize; 7],
}

/// Runs every detector over a 3-uniform coloring and assembles the census.
/// Each listed structure is re-validated against its definition.
pub fn analyze(coloring: &Coloring) -> Result<StructureReport> {
    require_r3(coloring)?;
    let n = coloring.n();
    if n < 6 {
        return Err(Error::InvalidInput(format!(
            "structure census needs n >= 6, got n={n}"
        )));
    }
    let mut b_set_count = 0usize;
    let mut a_set_count = 0usize;
    let mut mono_k6 = Vec::new();
    for members in ColexCombinations::new(n, 6) {
        let set = VertexSet::from_members(n, &members)?;
        let is_b = is_b_set(coloring, &set)?.is_some();
        let a = is_a_set(coloring, &set)?;
        if is_b {
            b_set_count += 1;
        }
        if let Some((_, m)) = &a {
            m.validate(coloring)?;
            a_set_count += 1;
        }
        if is_b && a.is_some() {
            return Err(Error::Internal(format!(
                "set {set} classified as both an A-set and a B-set"
            )));
        }
        if let Some(c) = mono_color_of(coloring, &members) {
            mono_k6.push((set, c));
        }
    }
    let (rainbow_k5, rainbow_k5_total) = rainbow_scan(coloring, RAINBOW_LIST_CAP);
    let disk = if n == 12 && coloring.t() == 3 {
        find_disk(coloring)?
    } else {
        None
    };
    if let Some(d) = &disk {
        d.validate(coloring)?;
    }
    let mut pair_profiles = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            pair_profiles.push(((u, v), pair_color_profile(coloring, u, v)?));
        }
    }
    let mut mono_k6_intersections = [0usize; 7];
    for i in 0..mono_k6.len() {
        for j in (i + 1)..mono_k6.len() {
            mono_k6_intersections[mono_k6[i].0.intersection(&mono_k6[j].0).len()] += 1;
        }
    }
    Ok(StructureReport {
        n,
        r: coloring.r(),
        t: coloring.t(),
        b_set_count,
        a_set_count,
        mono_k6,
        rainbow_k5,
        rainbow_k5_total,
        disk,
        pair_profiles,
        mono_k6_intersections,
    })
}

impl StructureReport {
    /// Human-readable rendering with stable field order, followed by a
    /// machine-readable block.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("coloring: n={} r={} t={}\n", self.n, self.r, self.t));
        out.push_str(&format!("b-set count: {}\n", self.b_set_count));
        out.push_str(&format!("a-set count: {}\n", self.a_set_count));
        out.push_str(&format!("mono K6 count: {}\n", self.mono_k6.len()));
        for (set, c) in &self.mono_k6 {
            out.push_str(&format!("  color={c} {set}\n"));
        }
        if self.rainbow_k5_total == 0 {
            out.push_str("rainbow K5: none\n");
        } else {
            out.push_str(&format!(
                "rainbow K5: present (total {}, listing {})\n",
                self.rainbow_k5_total,
                self.rainbow_k5.len()
            ));
            for set in &self.rainbow_k5 {
                out.push_str(&format!("  {set}\n"));
            }
        }
        match &self.disk {
            None => out.push_str("disk: none\n"),
            Some(d) => {
                out.push_str("disk: present\n");
                for i in 0..3 {
                    out.push_str(&format!(
                        "  X{} color={} {}\n",
                        i + 1,
                        d.colors[i],
                        d.sets[i]
                    ));
                }
            }
        }
        let mut profile_hist = vec![0usize; self.t + 1];
        for (_, p) in &self.pair_profiles {
            profile_hist[p.len()] += 1;
        }
        out.push_str("pair color profiles:");
        for (sz, count) in profile_hist.iter().enumerate().skip(1) {
            out.push_str(&format!(" {sz}-color:{count}"));
        }
        out.push('\n');
        out.push_str("mono K6 pair intersection sizes:");
        if self.mono_k6.len() < 2 {
            out.push_str(" none");
        } else {
            for (sz, count) in self.mono_k6_intersections.iter().enumerate() {
                if *count > 0 {
                    out.push_str(&format!(" {sz}:{count}"));
                }
            }
        }
        out.push('\n');
        out.push_str(&format!(
            "REPORT n={} r={} t={} b_sets={} a_sets={} mono_k6={} rainbow_k5={} disk={}\n",
            self.n,
            self.r,
            self.t,
            self.b_set_count,
            self.a_set_count,
            self.mono_k6.len(),
            self.rainbow_k5_total,
            if self.disk.is_some() { 1 } else { 0 }
        ));
        out
    }
}
