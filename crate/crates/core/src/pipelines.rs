//! Constructive extraction of 2-colored matchings at the three certified
//! sizes, plus deterministic coloring generators for testing.
//!
//! Extraction target 1: any 3-coloring of a complete 3-uniform hypergraph on
//! 12 vertices has a 2-colored perfect matching (4 edges). Target 2: on 16
//! vertices, a 2-colored matching of size 5. Target 3: on 19 vertices, size
//! 6. Targets 2 and 3 are extracted by the constructive route: a
//! monochromatic matching (guaranteed by the `(t-1)(k-1)+kr` bound), then
//! either an edge of the same color in the uncovered remainder or a
//! monochromatic disjoint pair there (guaranteed because 2-colored 7-sets
//! always contain one).

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::Coloring;
use crate::combinatorics::{binomial, unrank_edge, ColexCombinations, EdgeId, VertexSet};
use crate::error::{Error, Result};
use crate::matching::{edge_table, enumerate_perfect_matchings, find_mono_matching, Matching};

/// One applied rule with its witness fragment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceStep {
    /// Step 1: monochromatic matching of the required size.
    MonoMatching { color: u8, matching: Matching },
    /// Branch 2: an edge of the same color inside the uncovered remainder.
    SameColorEdge { color: u8, edge: EdgeId },
    /// Branch 2: the least-rank edge on the 4 vertices left over.
    FillerEdge { edge: EdgeId },
    /// Branch 3: a monochromatic disjoint pair inside the remainder.
    MonoPair { color: u8, matching: Matching },
}

impl TraceStep {
    fn render(&self, n: usize, r: usize) -> Result<String> {
        let edge_text = |id: EdgeId| -> Result<String> {
            let e = unrank_edge(id, n, r)?;
            Ok(e.vertices()
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("."))
        };
        let edges_text = |m: &Matching| -> Result<String> {
            let parts: Vec<String> = m
                .edges()
                .iter()
                .map(|&id| edge_text(id))
                .collect::<Result<_>>()?;
            Ok(parts.join(","))
        };
        Ok(match self {
            TraceStep::MonoMatching { color, matching } => format!(
                "STEP mono-matching color={color} size={} edges={}",
                matching.len(),
                edges_text(matching)?
            ),
            TraceStep::SameColorEdge { color, edge } => {
                format!("STEP same-color-edge color={color} edge={}", edge_text(*edge)?)
            }
            TraceStep::FillerEdge { edge } => {
                format!("STEP filler-edge edge={}", edge_text(*edge)?)
            }
            TraceStep::MonoPair { color, matching } => format!(
                "STEP mono-pair color={color} edges={}",
                edges_text(matching)?
            ),
        })
    }
}

/// Ordered record of the rules applied by an extraction, ending in the final
/// matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionTrace {
    pub steps: Vec<TraceStep>,
    pub final_matching: Matching,
}

fn require_dims(coloring: &Coloring, n: usize) -> Result<()> {
    if coloring.n() != n || coloring.r() != 3 || coloring.t() != 3 {
        return Err(Error::InvalidInput(format!(
            "expected (n, r, t) = ({n}, 3, 3), got ({}, {}, {})",
            coloring.n(),
            coloring.r(),
            coloring.t()
        )));
    }
    Ok(())
}

/// The 15400 perfect matchings of a 12-vertex 3-uniform hypergraph, each as
/// a sorted rank quadruple. Built once.
fn perfect_matchings_12() -> &'static [[usize; 4]] {
    static PMS: OnceLock<Vec<[usize; 4]>> = OnceLock::new();
    PMS.get_or_init(|| {
        enumerate_perfect_matchings(12, 3)
            .expect("12 is divisible by 3")
            .map(|pm| {
                let mut ranks = [pm[0].0, pm[1].0, pm[2].0, pm[3].0];
                ranks.sort_unstable();
                ranks
            })
            .collect()
    })
}

/// A 2-colored perfect matching of a 3-colored 12-vertex hypergraph: the
/// least (by sorted rank sequence) of the 15400 perfect matchings that uses
/// at most 2 colors. A coloring without one would be a counterexample to the
/// guarantee; that case is reported as [`Error::ExtractionFailed`].
pub fn thm1_extract(coloring: &Coloring) -> Result<Matching> {
    require_dims(coloring, 12)?;
    let mut best: Option<[usize; 4]> = None;
    for pm in perfect_matchings_12() {
        let mut colors = 0u8;
        for &rank in pm {
            colors |= 1 << coloring.color(EdgeId(rank));
        }
        if colors.count_ones() <= 2 && best.is_none_or(|b| *pm < b) {
            best = Some(*pm);
        }
    }
    match best {
        Some(ranks) => Matching::from_edges(ranks.iter().map(|&r| EdgeId(r)).collect(), coloring),
        None => Err(Error::ExtractionFailed(
            "no 2-colored perfect matching in this 12-vertex 3-coloring; \
             this coloring disproves the size-4 guarantee"
                .into(),
        )),
    }
}

/// Shared constructive pipeline behind extraction targets 2 and 3.
fn extract_mono_then_remainder(
    coloring: &Coloring,
    mono_size: usize,
    final_size: usize,
) -> Result<(Matching, ExtractionTrace)> {
    let table = edge_table(coloring.n(), coloring.r());
    let mut steps = Vec::new();

    let (c1, m1) = find_mono_matching(coloring, mono_size, None)?.ok_or_else(|| {
        Error::ExtractionFailed(format!(
            "no monochromatic matching of size {mono_size} on {} vertices; \
             this coloring disproves the (t-1)(k-1)+kr bound",
            coloring.n()
        ))
    })?;
    steps.push(TraceStep::MonoMatching { color: c1, matching: m1.clone() });

    let covered = m1.covered(coloring);
    let full = VertexSet::full(coloring.n())?.bits();
    let remainder = full & !covered;
    debug_assert_eq!(remainder.count_ones(), 7);

    let mut edges: Vec<EdgeId> = m1.edges().to_vec();
    let same_color_edge = (0..coloring.edge_count())
        .find(|&rank| table.masks[rank] & !remainder == 0 && coloring.color(EdgeId(rank)) == c1);
    if let Some(e) = same_color_edge {
        // Branch 2: extend the monochromatic matching by the same-colored
        // edge, then any (least-rank) edge on the 4 vertices left over.
        steps.push(TraceStep::SameColorEdge { color: c1, edge: EdgeId(e) });
        let left = remainder & !table.masks[e];
        let filler = (0..coloring.edge_count())
            .find(|&rank| table.masks[rank] & !left == 0)
            .ok_or_else(|| Error::Internal("4 leftover vertices must carry an edge".into()))?;
        steps.push(TraceStep::FillerEdge { edge: EdgeId(filler) });
        edges.push(EdgeId(e));
        edges.push(EdgeId(filler));
    } else {
        // Branch 3: the remainder avoids the first color, so it is colored
        // with at most 2 colors and must contain a monochromatic disjoint
        // pair.
        let u_set = VertexSet::from_bits(coloring.n(), remainder)?;
        let (c2, m2) = find_mono_matching(coloring, 2, Some(&u_set))?.ok_or_else(|| {
            Error::ExtractionFailed(
                "uncovered 7 vertices are 2-colored but contain no monochromatic \
                 disjoint pair; this coloring disproves the 7-vertex pair guarantee"
                    .into(),
            )
        })?;
        steps.push(TraceStep::MonoPair { color: c2, matching: m2.clone() });
        edges.extend_from_slice(m2.edges());
    }

    let final_matching = Matching::from_edges(edges, coloring)?;
    if final_matching.len() != final_size || final_matching.colorset().len() > 2 {
        return Err(Error::Internal(format!(
            "extraction assembled an invalid witness: size {}, colors {}",
            final_matching.len(),
            final_matching.colorset()
        )));
    }
    let trace = ExtractionTrace { steps, final_matching: final_matching.clone() };
    Ok((final_matching, trace))
}

/// A 2-colored matching of size 5 in a 3-colored 16-vertex hypergraph, with
/// the extraction trace.
pub fn thm2_extract(coloring: &Coloring) -> Result<(Matching, ExtractionTrace)> {
    require_dims(coloring, 16)?;
    extract_mono_then_remainder(coloring, 3, 5)
}

/// A 2-colored matching of size 6 in a 3-colored 19-vertex hypergraph, with
/// the extraction trace.
pub fn thm3_extract(coloring: &Coloring) -> Result<(Matching, ExtractionTrace)> {
    require_dims(coloring, 19)?;
    extract_mono_then_remainder(coloring, 4, 6)
}

/// Renders the witness certificate for an extraction: header, one line per
/// trace step, then the matching witness block.
pub fn extraction_certificate(
    which: u8,
    coloring: &Coloring,
    matching: &Matching,
    trace: Option<&ExtractionTrace>,
) -> Result<String> {
    let mut out = format!(
        "EXTRACT target={which} n={} r={} t={}\n",
        coloring.n(),
        coloring.r(),
        coloring.t()
    );
    if let Some(trace) = trace {
        for step in &trace.steps {
            out.push_str(&step.render(coloring.n(), coloring.r())?);
            out.push('\n');
        }
    }
    out.push_str(&matching.render_witness(coloring.n(), coloring.r())?);
    Ok(out)
}

/// Renders a counterexample certificate: written only if an extraction
/// fails, which would disprove one of the guarantees. Carries the full
/// coloring for independent inspection.
pub fn counterexample_certificate(which: u8, coloring: &Coloring, reason: &str) -> String {
    format!(
        "EXTRACT target={which} n={} r={} t={}\nOUTCOME COUNTEREXAMPLE\nREASON {reason}\n{}",
        coloring.n(),
        coloring.r(),
        coloring.t(),
        coloring.serialize()
    )
}

/// Named coloring generators. All are deterministic given the seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    /// Independent uniform color per edge.
    Uniform,
    /// Color of an edge e is `|e ∩ P| mod t` for a fixed vertex set P
    /// (chosen from the seed when not given).
    Split { pivot: Option<VertexSet> },
    /// Three monochromatic 6-sets of distinct colors pairwise intersecting
    /// in 2 vertices, boundary-crossing edges colored 0; needs (12, 3, 3).
    PlantedDisk,
    /// All edges color 0 except `exceptions` random edges with random
    /// nonzero colors.
    NearMono { exceptions: usize },
}

impl GeneratorSpec {
    /// Parses `uniform`, `split`, `planted-disk`, or `near-mono(M)`.
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "uniform" => Ok(GeneratorSpec::Uniform),
            "split" => Ok(GeneratorSpec::Split { pivot: None }),
            "planted-disk" => Ok(GeneratorSpec::PlantedDisk),
            _ => {
                if let Some(rest) = text.strip_prefix("near-mono(") {
                    if let Some(num) = rest.strip_suffix(')') {
                        let exceptions = num.parse::<usize>().map_err(|_| {
                            Error::InvalidInput(format!("cannot parse near-mono count {num:?}"))
                        })?;
                        return Ok(GeneratorSpec::NearMono { exceptions });
                    }
                }
                Err(Error::InvalidInput(format!(
                    "unknown generator {text:?}; expected uniform, split, planted-disk, \
                     or near-mono(M)"
                )))
            }
        }
    }
}

impl std::fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GeneratorSpec::Uniform => write!(f, "uniform"),
            GeneratorSpec::Split { pivot: None } => write!(f, "split"),
            GeneratorSpec::Split { pivot: Some(p) } => write!(f, "split({p})"),
            GeneratorSpec::PlantedDisk => write!(f, "planted-disk"),
            GeneratorSpec::NearMono { exceptions } => write!(f, "near-mono({exceptions})"),
        }
    }
}

/// Builds a coloring from a generator spec, deterministically from the seed.
pub fn generate_coloring(
    n: usize,
    r: usize,
    t: usize,
    spec: &GeneratorSpec,
    seed: u64,
) -> Result<Coloring> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = binomial(n, r) as usize;
    match spec {
        GeneratorSpec::Uniform => {
            // Validates (n, r, t) up front so the digit loop cannot panic.
            Coloring::monochromatic(n, r, t)?;
            let colors: Vec<u8> = (0..len).map(|_| rng.random_range(0..t) as u8).collect();
            Coloring::new(n, r, t, colors)
        }
        GeneratorSpec::Split { pivot } => {
            let p = match pivot {
                Some(p) => {
                    if p.n() != n {
                        return Err(Error::InvalidInput(format!(
                            "split pivot set lives on {} vertices, coloring has {n}",
                            p.n()
                        )));
                    }
                    *p
                }
                None => {
                    let members: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
                    VertexSet::from_members(n, &members)?
                }
            };
            let mut colors = Vec::with_capacity(len);
            for combo in ColexCombinations::new(n, r) {
                let overlap = combo.iter().filter(|&&v| p.contains(v)).count();
                colors.push((overlap % t) as u8);
            }
            Coloring::new(n, r, t, colors)
        }
        GeneratorSpec::PlantedDisk => {
            if n != 12 || r != 3 || t != 3 {
                return Err(Error::InvalidInput(format!(
                    "planted-disk needs (n, r, t) = (12, 3, 3), got ({n}, {r}, {t})"
                )));
            }
            Ok(planted_disk(seed).0)
        }
        GeneratorSpec::NearMono { exceptions } => {
            Coloring::monochromatic(n, r, t)?;
            if *exceptions > len {
                return Err(Error::InvalidInput(format!(
                    "near-mono exception count {exceptions} exceeds edge count {len}"
                )));
            }
            let mut colors = vec![0u8; len];
            // Partial Fisher-Yates to pick `exceptions` distinct ranks.
            let mut ranks: Vec<usize> = (0..len).collect();
            for i in 0..*exceptions {
                let j = rng.random_range(i..len);
                ranks.swap(i, j);
            }
            for &rank in &ranks[..*exceptions] {
                colors[rank] = if t >= 2 { rng.random_range(1..t) as u8 } else { 0 };
            }
            Coloring::new(n, r, t, colors)
        }
    }
}

/// The planted-disk construction with its three 6-sets, for tests that need
/// to compare against the plant. Vertices are scrambled by a seeded
/// permutation; edges inside the second set get color 1, inside the third
/// color 2, everything else (including the first set) color 0.
pub fn planted_disk(seed: u64) -> (Coloring, [VertexSet; 3]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..12).collect();
    for i in (1..12).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    let template: [&[usize]; 3] = [&[0, 1, 4, 5, 6, 7], &[0, 1, 2, 3, 8, 9], &[2, 3, 4, 5, 10, 11]];
    let sets: Vec<VertexSet> = template
        .iter()
        .map(|m| {
            let members: Vec<usize> = m.iter().map(|&v| perm[v]).collect();
            VertexSet::from_members(12, &members).expect("perm stays in range")
        })
        .collect();
    let mut colors = Vec::with_capacity(220);
    for combo in ColexCombinations::new(12, 3) {
        let inside = |x: &VertexSet| combo.iter().all(|&v| x.contains(v));
        colors.push(if inside(&sets[1]) {
            1u8
        } else if inside(&sets[2]) {
            2u8
        } else {
            0u8
        });
    }
    let coloring = Coloring::new(12, 3, 3, colors).expect("template covers all edges");
    (coloring, [sets[0], sets[1], sets[2]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::ColorSet;
    use crate::structures::{find_disk, find_rainbow_k5};

    #[test]
    fn thm1_on_monochromatic_coloring() {
        let c = Coloring::monochromatic(12, 3, 3).unwrap();
        let m = thm1_extract(&c).unwrap();
        assert_eq!(m.len(), 4);
        assert_eq!(m.colorset(), ColorSet::single(0));
        m.validate(&c).unwrap();
        // Least rank sequence: the canonical first partition.
        let ranks: Vec<usize> = m.edges().iter().map(|e| e.0).collect();
        let first: Vec<usize> = enumerate_perfect_matchings(12, 3)
            .unwrap()
            .next()
            .unwrap()
            .iter()
            .map(|e| e.0)
            .collect();
        let mut first_sorted = first.clone();
        first_sorted.sort_unstable();
        assert_eq!(ranks, first_sorted);
    }

    #[test]
    fn thm1_vertex_zero_structure() {
        // Edges containing vertex 0 are color 1, all others color 0. Every
        // perfect matching has exactly one edge through vertex 0, so every
        // witness uses exactly both colors.
        let mut colors = Vec::new();
        for combo in ColexCombinations::new(12, 3) {
            colors.push(if combo[0] == 0 { 1u8 } else { 0u8 });
        }
        let c = Coloring::new(12, 3, 3, colors).unwrap();
        let m = thm1_extract(&c).unwrap();
        assert_eq!(m.colorset(), ColorSet::from_colors(&[0, 1]));
        m.validate(&c).unwrap();
    }

    #[test]
    fn thm1_rejects_wrong_dimensions() {
        let c = Coloring::monochromatic(9, 3, 3).unwrap();
        assert!(thm1_extract(&c).is_err());
        let c = Coloring::monochromatic(12, 3, 2).unwrap();
        assert!(thm1_extract(&c).is_err());
    }

    #[test]
    fn thm2_monochromatic_takes_same_color_branch() {
        let c = Coloring::monochromatic(16, 3, 3).unwrap();
        let (m, trace) = thm2_extract(&c).unwrap();
        assert_eq!(m.len(), 5);
        assert_eq!(m.colorset(), ColorSet::single(0));
        m.validate(&c).unwrap();
        assert_eq!(trace.steps.len(), 3);
        assert!(matches!(trace.steps[0], TraceStep::MonoMatching { color: 0, .. }));
        assert!(matches!(trace.steps[1], TraceStep::SameColorEdge { color: 0, .. }));
        assert!(matches!(trace.steps[2], TraceStep::FillerEdge { .. }));
    }

    /// 9 vertices monochromatic color 0, all other edges color 1, so the
    /// uncovered 7-set has no color-0 edge and the pair branch runs.
    fn remainder_pair_coloring_16() -> Coloring {
        let mut colors = Vec::new();
        for combo in ColexCombinations::new(16, 3) {
            colors.push(if combo.iter().all(|&v| v < 9) { 0u8 } else { 1u8 });
        }
        Coloring::new(16, 3, 3, colors).unwrap()
    }

    #[test]
    fn thm2_pair_branch() {
        let c = remainder_pair_coloring_16();
        let (m, trace) = thm2_extract(&c).unwrap();
        assert_eq!(m.len(), 5);
        assert!(m.colorset().len() <= 2);
        m.validate(&c).unwrap();
        assert_eq!(trace.steps.len(), 2);
        let (c1, covered) = match &trace.steps[0] {
            TraceStep::MonoMatching { color, matching } => {
                assert_eq!(matching.len(), 3);
                assert_eq!(matching.colorset(), ColorSet::single(*color));
                (*color, matching.covered(&c))
            }
            other => panic!("unexpected first step {other:?}"),
        };
        assert_eq!(c1, 0);
        match &trace.steps[1] {
            TraceStep::MonoPair { color, matching } => {
                assert_ne!(*color, c1);
                assert_eq!(matching.len(), 2);
                assert_eq!(matching.colorset(), ColorSet::single(*color));
                // The pair lives inside the uncovered 7 vertices.
                assert_eq!(matching.covered(&c) & covered, 0);
            }
            other => panic!("unexpected second step {other:?}"),
        }
    }

    #[test]
    fn thm3_monochromatic_and_pair_branch() {
        let c = Coloring::monochromatic(19, 3, 3).unwrap();
        let (m, trace) = thm3_extract(&c).unwrap();
        assert_eq!(m.len(), 6);
        assert_eq!(m.colorset(), ColorSet::single(0));
        assert!(matches!(trace.steps[0], TraceStep::MonoMatching { .. }));

        // 12 vertices color 0, the rest color 1: forces the pair branch.
        let mut colors = Vec::new();
        for combo in ColexCombinations::new(19, 3) {
            colors.push(if combo.iter().all(|&v| v < 12) { 0u8 } else { 1u8 });
        }
        let c = Coloring::new(19, 3, 3, colors).unwrap();
        let (m, trace) = thm3_extract(&c).unwrap();
        assert_eq!(m.len(), 6);
        assert!(m.colorset().len() <= 2);
        m.validate(&c).unwrap();
        assert!(matches!(trace.steps[1], TraceStep::MonoPair { .. }));
    }

    #[test]
    fn generators_are_deterministic() {
        for spec in [
            GeneratorSpec::Uniform,
            GeneratorSpec::Split { pivot: None },
            GeneratorSpec::PlantedDisk,
            GeneratorSpec::NearMono { exceptions: 7 },
        ] {
            let a = generate_coloring(12, 3, 3, &spec, 99).unwrap();
            let b = generate_coloring(12, 3, 3, &spec, 99).unwrap();
            assert_eq!(a, b, "{spec} not deterministic");
            let c = generate_coloring(12, 3, 3, &spec, 100).unwrap();
            assert_ne!(a, c, "{spec} ignored the seed");
        }
    }

    #[test]
    fn near_mono_zero_is_monochromatic() {
        let c = generate_coloring(12, 3, 3, &GeneratorSpec::NearMono { exceptions: 0 }, 5).unwrap();
        assert_eq!(c, Coloring::monochromatic(12, 3, 3).unwrap());
        let c = generate_coloring(12, 3, 3, &GeneratorSpec::NearMono { exceptions: 5 }, 5).unwrap();
        let nonzero = c.colors().iter().filter(|&&x| x != 0).count();
        assert_eq!(nonzero, 5);
    }

    #[test]
    fn planted_disk_recovered_by_detector() {
        for seed in 0..10 {
            let (c, sets) = planted_disk(seed);
            let disk = find_disk(&c).unwrap().expect("planted disk must be found");
            disk.validate(&c).unwrap();
            // The unique mono K6s of colors 1 and 2 are the planted sets.
            let by_color = |want: u8| disk.sets[disk.colors.iter().position(|&x| x == want).unwrap()];
            assert_eq!(by_color(1), sets[1]);
            assert_eq!(by_color(2), sets[2]);
            assert!(find_rainbow_k5(&c).unwrap().is_some());
        }
    }

    #[test]
    fn generator_spec_parsing() {
        assert_eq!(GeneratorSpec::parse("uniform").unwrap(), GeneratorSpec::Uniform);
        assert_eq!(
            GeneratorSpec::parse("split").unwrap(),
            GeneratorSpec::Split { pivot: None }
        );
        assert_eq!(GeneratorSpec::parse("planted-disk").unwrap(), GeneratorSpec::PlantedDisk);
        assert_eq!(
            GeneratorSpec::parse("near-mono(17)").unwrap(),
            GeneratorSpec::NearMono { exceptions: 17 }
        );
        assert!(GeneratorSpec::parse("near-mono(x)").is_err());
        assert!(GeneratorSpec::parse("gaussian").is_err());
    }

    #[test]
    fn certificate_rendering_is_stable() {
        let c = Coloring::monochromatic(16, 3, 3).unwrap();
        let (m, trace) = thm2_extract(&c).unwrap();
        let cert1 = extraction_certificate(2, &c, &m, Some(&trace)).unwrap();
        let cert2 = extraction_certificate(2, &c, &m, Some(&trace)).unwrap();
        assert_eq!(cert1, cert2);
        assert!(cert1.starts_with("EXTRACT target=2 n=16 r=3 t=3\n"));
        assert!(cert1.contains("STEP mono-matching color=0 size=3"));
        assert!(cert1.contains("MATCHING size=5 colors=0\n"));
    }
}
