//! Acceptance suite: one test per criterion, each printing a pass line and
//! enforcing its stated time budget.

use std::time::{Duration, Instant};

use hypermatch::{
    afl_bound, certify, conjecture_bound, enumerate_perfect_matchings, find_rainbow_k5,
    find_s_colored_matching, generate_coloring, max_matching, pipelines::planted_disk,
    search_avoiding, thm1_extract, thm2_extract, thm3_extract, unrank_edge, BoundParams,
    ColorSet, Coloring, ExtractionTrace, GeneratorSpec, Matching, SearchOutcome, SearchProblem,
    TraceStep, VertexSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn finish(criterion: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed <= budget,
        "criterion {criterion}: took {elapsed:?}, budget {budget:?}"
    );
    println!("criterion {criterion}: pass ({elapsed:?})");
}

#[test]
fn criterion_1_bound_reproduction() {
    let start = Instant::now();
    let p = |t, s, k, r| BoundParams::new(t, s, k, r).unwrap();
    assert_eq!(conjecture_bound(&p(3, 2, 4, 3)), 12);
    assert_eq!(conjecture_bound(&p(3, 2, 5, 3)), 16);
    assert_eq!(conjecture_bound(&p(3, 2, 6, 3)), 19);
    assert_eq!(afl_bound(&p(3, 1, 3, 3)), 13);
    assert_eq!(afl_bound(&p(3, 1, 4, 3)), 18);
    finish("1 (bound reproduction)", start, Duration::from_millis(1));
}

#[test]
fn criterion_2_no_b_plus_certificate() {
    let start = Instant::now();
    // Exhaustion: every 2-coloring of the 7-vertex 3-uniform hypergraph has
    // a monochromatic 2-matching.
    let p7 = SearchProblem::new(7, 3, 2, 1, 2).unwrap();
    let outcome7 = search_avoiding(&p7).unwrap();
    assert!(
        matches!(outcome7, SearchOutcome::Exhausted { .. }),
        "expected exhaustion, got {outcome7:?}"
    );
    let cert = certify(&outcome7, &p7).unwrap();
    assert!(cert.text.contains("OUTCOME EXHAUSTED"));
    assert!(outcome7.nodes() > 0);

    // One vertex fewer: an avoiding coloring exists and re-validates.
    let p6 = SearchProblem::new(6, 3, 2, 1, 2).unwrap();
    let outcome6 = search_avoiding(&p6).unwrap();
    match &outcome6 {
        SearchOutcome::Found { coloring, .. } => {
            assert!(find_s_colored_matching(coloring, 1, 2).unwrap().is_none());
        }
        other => panic!("expected Found, got {other:?}"),
    }
    certify(&outcome6, &p6).unwrap();
    finish("2 (7-vertex exhaustion / 6-vertex witness)", start, Duration::from_secs(60));
}

/// Raw brute force for graph instances: does any of the `2^edges` colorings
/// avoid a monochromatic 2-matching? Independent of the search engine.
fn brute_force_avoider_exists_graph(n: usize) -> bool {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    let m = edges.len();
    'coloring: for bits in 0u32..(1 << m) {
        for i in 0..m {
            for j in (i + 1)..m {
                let (a, b) = (edges[i], edges[j]);
                let disjoint = a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1;
                let same_color = (bits >> i) & 1 == (bits >> j) & 1;
                if disjoint && same_color {
                    continue 'coloring;
                }
            }
        }
        return true;
    }
    false
}

#[test]
fn criterion_3_afl_tiny_instances() {
    let start = Instant::now();
    let p5 = SearchProblem::new(5, 2, 2, 1, 2).unwrap();
    let outcome5 = search_avoiding(&p5).unwrap();
    assert!(matches!(outcome5, SearchOutcome::Exhausted { .. }));
    assert!(!brute_force_avoider_exists_graph(5), "brute force disagrees at n=5");

    let p4 = SearchProblem::new(4, 2, 2, 1, 2).unwrap();
    let outcome4 = search_avoiding(&p4).unwrap();
    match &outcome4 {
        SearchOutcome::Found { coloring, .. } => {
            assert!(find_s_colored_matching(coloring, 1, 2).unwrap().is_none());
        }
        other => panic!("expected Found, got {other:?}"),
    }
    assert!(brute_force_avoider_exists_graph(4), "brute force disagrees at n=4");
    finish("3 (5-vertex graph exhaustion vs 1024-case brute force)", start, Duration::from_secs(1));
}

fn assert_valid_pm_witness(coloring: &Coloring, m: &Matching) {
    m.validate(coloring).unwrap();
    assert_eq!(m.len(), 4);
    assert!(m.colorset().len() <= 2, "witness uses {} colors", m.colorset().len());
    let full = VertexSet::full(12).unwrap().bits();
    assert_eq!(m.covered(coloring), full, "witness is not perfect");
}

#[test]
fn criterion_4_perfect_matching_extraction_at_scale() {
    let start = Instant::now();
    for trial in 0..10_000u64 {
        let coloring = generate_coloring(12, 3, 3, &GeneratorSpec::Uniform, trial).unwrap();
        let m = thm1_extract(&coloring).unwrap_or_else(|e| panic!("uniform trial {trial}: {e}"));
        assert_valid_pm_witness(&coloring, &m);
    }
    for trial in 0..100u64 {
        let specs = [
            GeneratorSpec::Split { pivot: None },
            GeneratorSpec::NearMono { exceptions: (trial % 30) as usize },
            GeneratorSpec::PlantedDisk,
        ];
        for spec in specs {
            let coloring = generate_coloring(12, 3, 3, &spec, 10_000 + trial).unwrap();
            let m = thm1_extract(&coloring)
                .unwrap_or_else(|e| panic!("{spec} trial {trial}: {e}"));
            assert_valid_pm_witness(&coloring, &m);
        }
    }
    finish("4 (10300 extractions at n=12)", start, Duration::from_secs(300));
}

/// Trace faithfulness: the first fragment is monochromatic of the required
/// size; branch 2 edges carry the first fragment's color inside the
/// uncovered vertices; branch 3 pairs are monochromatic, disjoint from the
/// first fragment, and of a different color.
fn assert_faithful_trace(
    coloring: &Coloring,
    matching: &Matching,
    trace: &ExtractionTrace,
    mono_size: usize,
    final_size: usize,
) {
    matching.validate(coloring).unwrap();
    assert_eq!(matching.len(), final_size);
    assert!(matching.colorset().len() <= 2);
    assert_eq!(&trace.final_matching, matching);

    let (c1, m1) = match &trace.steps[0] {
        TraceStep::MonoMatching { color, matching } => {
            m_assert_mono(coloring, matching, *color, mono_size);
            (*color, matching)
        }
        other => panic!("first step must be the monochromatic matching, got {other:?}"),
    };
    let covered = m1.covered(coloring);
    let edge_mask = |id| unrank_edge(id, coloring.n(), coloring.r()).unwrap().bitmask();
    match &trace.steps[1] {
        TraceStep::SameColorEdge { color, edge } => {
            assert_eq!(*color, c1);
            assert_eq!(coloring.color(*edge), c1);
            let e_mask = edge_mask(*edge);
            assert_eq!(e_mask & covered, 0, "same-color edge not in the remainder");
            match &trace.steps[2] {
                TraceStep::FillerEdge { edge: filler } => {
                    let f_mask = edge_mask(*filler);
                    assert_eq!(f_mask & (covered | e_mask), 0, "filler edge overlaps");
                }
                other => panic!("expected filler edge, got {other:?}"),
            }
            assert_eq!(trace.steps.len(), 3);
        }
        TraceStep::MonoPair { color, matching: m2 } => {
            assert_ne!(*color, c1, "pair color must differ when no same-color edge exists");
            m_assert_mono(coloring, m2, *color, 2);
            assert_eq!(m2.covered(coloring) & covered, 0, "pair not in the remainder");
            assert_eq!(trace.steps.len(), 2);
        }
        other => panic!("unexpected second step {other:?}"),
    }
}

fn m_assert_mono(coloring: &Coloring, m: &Matching, color: u8, size: usize) {
    m.validate(coloring).unwrap();
    assert_eq!(m.len(), size);
    assert_eq!(m.colorset(), ColorSet::single(color));
}

#[test]
fn criterion_5_size_5_and_6_extractions() {
    let start = Instant::now();
    for trial in 0..1000u64 {
        let coloring = generate_coloring(16, 3, 3, &GeneratorSpec::Uniform, trial).unwrap();
        let (m, trace) = thm2_extract(&coloring).unwrap_or_else(|e| panic!("n=16 trial {trial}: {e}"));
        assert_faithful_trace(&coloring, &m, &trace, 3, 5);
    }
    for trial in 0..1000u64 {
        let coloring = generate_coloring(19, 3, 3, &GeneratorSpec::Uniform, trial).unwrap();
        let (m, trace) = thm3_extract(&coloring).unwrap_or_else(|e| panic!("n=19 trial {trial}: {e}"));
        assert_faithful_trace(&coloring, &m, &trace, 4, 6);
    }
    finish("5 (1000 extractions each at n=16 and n=19)", start, Duration::from_secs(300));
}

#[test]
fn criterion_6_disk_implies_rainbow() {
    let start = Instant::now();
    for seed in 0..100u64 {
        let (coloring, _planted) = planted_disk(seed);
        assert!(
            find_rainbow_k5(&coloring).unwrap().is_some(),
            "seed {seed}: no rainbow 5-set"
        );
        // Build the specific 5-set from the detected disk: two vertices from
        // X1 and X2's intersection, two from X2 and X3's, one from X1 and
        // X3's; its three boundary edges realize all three colors.
        let disk = hypermatch::find_disk(&coloring).unwrap().expect("disk present");
        let x12 = disk.sets[0].intersection(&disk.sets[1]).members();
        let x23 = disk.sets[1].intersection(&disk.sets[2]).members();
        let x13 = disk.sets[0].intersection(&disk.sets[2]).members();
        let (v1, v2, v3, v4, v5) = (x12[0], x12[1], x23[0], x23[1], x13[0]);
        let color_of = |a: usize, b: usize, c: usize| {
            let mut verts = [a, b, c];
            verts.sort_unstable();
            let edge = hypermatch::Edge::new(&verts).unwrap();
            coloring.color_of_edge(&edge).unwrap()
        };
        assert_eq!(color_of(v1, v2, v5), disk.colors[0], "seed {seed}");
        assert_eq!(color_of(v1, v2, v3), disk.colors[1], "seed {seed}");
        assert_eq!(color_of(v3, v4, v5), disk.colors[2], "seed {seed}");
        // The induced 5-set therefore uses at least three colors.
        let mut seen = ColorSet::empty();
        let five = [v1, v2, v3, v4, v5];
        for i in 0..5 {
            for j in (i + 1)..5 {
                for k in (j + 1)..5 {
                    seen.insert(color_of(five[i], five[j], five[k]));
                }
            }
        }
        assert!(seen.len() >= 3, "seed {seed}: proof 5-set is not rainbow");
    }
    finish("6 (100 planted disks force rainbow 5-sets)", start, Duration::from_secs(10));
}

/// Independent oracle: maximum matching size by enumerating every subset of
/// pairwise disjoint eligible edges.
fn brute_force_max_matching(eligible: &[u32]) -> usize {
    fn go(masks: &[u32], i: usize, used: u32) -> usize {
        if i == masks.len() {
            return 0;
        }
        let skip = go(masks, i + 1, used);
        if masks[i] & used == 0 {
            skip.max(1 + go(masks, i + 1, used | masks[i]))
        } else {
            skip
        }
    }
    go(eligible, 0, 0)
}

#[test]
fn criterion_7_matching_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..200 {
        let r = if rng.random_bool(0.5) { 2 } else { 3 };
        let n = rng.random_range(r.max(4)..=9);
        let t = rng.random_range(1..=3);
        let len = hypermatch::binomial(n, r) as usize;
        let colors: Vec<u8> = (0..len).map(|_| rng.random_range(0..t) as u8).collect();
        let coloring = Coloring::new(n, r, t, colors).unwrap();

        // Arbitrary color filter, possibly empty.
        let mut allowed = ColorSet::empty();
        for c in 0..t as u8 {
            if rng.random_bool(0.6) {
                allowed.insert(c);
            }
        }
        // Arbitrary vertex restriction, sometimes absent.
        let restrict = if rng.random_bool(0.5) {
            let members: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.7)).collect();
            Some(VertexSet::from_members(n, &members).unwrap())
        } else {
            None
        };

        let got = max_matching(&coloring, allowed, restrict.as_ref());
        got.validate(&coloring).unwrap();
        assert!(got.colorset().is_subset_of(&allowed));
        if let Some(rs) = &restrict {
            let allowed_bits = rs.bits();
            assert_eq!(got.covered(&coloring) & !allowed_bits, 0);
        }

        let restrict_bits = restrict.map_or(u32::MAX, |rs| rs.bits());
        let mut eligible = Vec::new();
        for rank in 0..len {
            let mask = unrank_edge(hypermatch::EdgeId(rank), n, r).unwrap().bitmask();
            if allowed.contains(coloring.color(hypermatch::EdgeId(rank))) && mask & !restrict_bits == 0 {
                eligible.push(mask);
            }
        }
        let oracle = brute_force_max_matching(&eligible);
        assert_eq!(got.len(), oracle, "trial {trial}: n={n} r={r} t={t}");
    }
    finish("7 (200 instances vs brute-force oracle)", start, Duration::from_secs(30));
}

#[test]
fn max_matching_tie_break_is_lexicographic() {
    // Among all maximum matchings, the returned sorted rank sequence is the
    // lexicographically least; cross-checked by enumerating every maximum
    // matching.
    fn all_max_matchings(eligible: &[(usize, u32)]) -> Vec<Vec<usize>> {
        let mut best: Vec<Vec<usize>> = vec![Vec::new()];
        let mut stack: Vec<(usize, u32, Vec<usize>)> = vec![(0, 0, Vec::new())];
        while let Some((i, used, chosen)) = stack.pop() {
            if i == eligible.len() {
                match chosen.len().cmp(&best[0].len()) {
                    std::cmp::Ordering::Greater => best = vec![chosen],
                    std::cmp::Ordering::Equal => best.push(chosen),
                    std::cmp::Ordering::Less => {}
                }
                continue;
            }
            let (rank, mask) = eligible[i];
            stack.push((i + 1, used, chosen.clone()));
            if mask & used == 0 {
                let mut next = chosen;
                next.push(rank);
                stack.push((i + 1, used | mask, next));
            }
        }
        best
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4096);
    for _ in 0..100 {
        let n = rng.random_range(5..9);
        let r = if rng.random_bool(0.5) { 2 } else { 3 };
        let t = rng.random_range(1..=3);
        let len = hypermatch::binomial(n, r) as usize;
        let colors: Vec<u8> = (0..len).map(|_| rng.random_range(0..t) as u8).collect();
        let coloring = Coloring::new(n, r, t, colors).unwrap();
        let allowed = ColorSet::all(t);

        let eligible: Vec<(usize, u32)> = (0..len)
            .map(|rank| {
                (rank, unrank_edge(hypermatch::EdgeId(rank), n, r).unwrap().bitmask())
            })
            .collect();
        let mut maxima = all_max_matchings(&eligible);
        for m in &mut maxima {
            m.sort_unstable();
        }
        maxima.sort();
        let got: Vec<usize> = max_matching(&coloring, allowed, None)
            .edges()
            .iter()
            .map(|e| e.0)
            .collect();
        assert_eq!(got, maxima[0], "n={n} r={r}");
    }
    println!("extra check (lexicographic tie-break): pass");
}

#[test]
fn perfect_matching_enumeration_order_is_canonical() {
    // Each successive edge of every emitted partition contains the least
    // vertex not covered by the preceding edges, and partitions appear in
    // lexicographic order of their concatenated vertex tuples.
    let mut previous: Option<Vec<usize>> = None;
    for pm in enumerate_perfect_matchings(9, 3).unwrap() {
        let mut covered = 0u32;
        let mut flattened = Vec::new();
        for id in &pm {
            let edge = unrank_edge(*id, 9, 3).unwrap();
            let least_uncovered = (0..9).find(|v| covered & (1 << v) == 0).unwrap();
            assert_eq!(edge.vertices()[0], least_uncovered);
            covered |= edge.bitmask();
            flattened.extend_from_slice(edge.vertices());
        }
        if let Some(prev) = &previous {
            assert!(*prev < flattened, "enumeration order regressed");
        }
        previous = Some(flattened);
    }
    println!("extra check (canonical enumeration order): pass");
}

#[test]
fn criterion_8_perfect_matching_enumeration_counts() {
    let start = Instant::now();
    // Independent derivation: n! / ((r!)^(n/r) * (n/r)!).
    fn formula(n: u128, r: u128) -> u128 {
        let fact = |x: u128| (1..=x).product::<u128>();
        fact(n) / (fact(r).pow((n / r) as u32) * fact(n / r))
    }
    assert_eq!(formula(12, 3), 15_400);
    assert_eq!(formula(6, 3), 10);
    assert_eq!(enumerate_perfect_matchings(12, 3).unwrap().count(), 15_400);
    assert_eq!(enumerate_perfect_matchings(6, 3).unwrap().count(), 10);
    finish("8 (perfect matching enumeration counts)", start, Duration::from_secs(5));
}

#[test]
fn criterion_9_certificate_determinism() {
    let start = Instant::now();
    // Criteria 2 and 3: search certificates.
    for (n, r, t, s, k) in [(7, 3, 2, 1, 2), (6, 3, 2, 1, 2), (5, 2, 2, 1, 2), (4, 2, 2, 1, 2)] {
        let p = SearchProblem::new(n, r, t, s, k).unwrap();
        let a = certify(&search_avoiding(&p).unwrap(), &p).unwrap();
        let b = certify(&search_avoiding(&p).unwrap(), &p).unwrap();
        assert_eq!(a.text, b.text, "search certificate differs for n={n}");
    }
    // Criteria 4 and 5: extraction certificates on seeded colorings.
    for seed in [0u64, 1, 2] {
        let c12 = generate_coloring(12, 3, 3, &GeneratorSpec::Uniform, seed).unwrap();
        let m_a = thm1_extract(&c12).unwrap();
        let m_b = thm1_extract(&c12).unwrap();
        let cert_a = hypermatch::extraction_certificate(1, &c12, &m_a, None).unwrap();
        let cert_b = hypermatch::extraction_certificate(1, &c12, &m_b, None).unwrap();
        assert_eq!(cert_a, cert_b);

        let c16 = generate_coloring(16, 3, 3, &GeneratorSpec::Uniform, seed).unwrap();
        let (m_a, t_a) = thm2_extract(&c16).unwrap();
        let (m_b, t_b) = thm2_extract(&c16).unwrap();
        assert_eq!(
            hypermatch::extraction_certificate(2, &c16, &m_a, Some(&t_a)).unwrap(),
            hypermatch::extraction_certificate(2, &c16, &m_b, Some(&t_b)).unwrap()
        );

        let c19 = generate_coloring(19, 3, 3, &GeneratorSpec::Uniform, seed).unwrap();
        let (m_a, t_a) = thm3_extract(&c19).unwrap();
        let (m_b, t_b) = thm3_extract(&c19).unwrap();
        assert_eq!(
            hypermatch::extraction_certificate(3, &c19, &m_a, Some(&t_a)).unwrap(),
            hypermatch::extraction_certificate(3, &c19, &m_b, Some(&t_b)).unwrap()
        );
    }
    // Criterion 6: the disk census and report are reproducible.
    let (disk_coloring, _) = planted_disk(7);
    let report_a = hypermatch::analyze(&disk_coloring).unwrap().render();
    let report_b = hypermatch::analyze(&disk_coloring).unwrap().render();
    assert_eq!(report_a, report_b);
    finish("9 (byte-identical certificates across reruns)", start, Duration::from_secs(120));
}
