//! Ranked representation of r-subsets and vertex sets.
//!
//! Edges of the complete r-uniform hypergraph on `n` vertices are identified
//! with their rank in colexicographic order: for `S = {a1 < a2 < ... < ar}`,
//! `rank(S) = sum_i C(a_i, i)`. This rank is prefix-stable: the first
//! `C(v, r)` ranks are exactly the r-subsets of `{0, ..., v-1}`.

use crate::error::{Error, Result};

/// Largest supported vertex count. Vertex sets are stored as `u32` bitmasks.
pub const MAX_N: usize = 32;
/// Largest supported uniformity.
pub const MAX_R: usize = 5;

/// Exact binomial coefficient; 0 when `k > n`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u64 = 1;
    for i in 1..=k {
        result = result * (n - (k - i)) as u64 / i as u64;
    }
    result
}

/// A subset of `{0, ..., n-1}` with its ambient vertex count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    bits: u32,
    n: usize,
}

impl VertexSet {
    /// The empty subset of an `n`-vertex ground set.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::InvalidInput(format!(
                "vertex count {n} exceeds maximum {MAX_N}"
            )));
        }
        Ok(VertexSet { bits: 0, n })
    }

    /// The full ground set `{0, ..., n-1}`.
    pub fn full(n: usize) -> Result<Self> {
        let mut s = Self::empty(n)?;
        s.bits = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        Ok(s)
    }

    /// Builds a set from explicit members, rejecting members `>= n`.
    pub fn from_members(n: usize, members: &[usize]) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for &v in members {
            if v >= n {
                return Err(Error::InvalidInput(format!(
                    "vertex {v} out of range for n={n}"
                )));
            }
            s.bits |= 1 << v;
        }
        Ok(s)
    }

    /// Reconstructs a set from a raw bitmask. Bits at or above `n` are an error.
    pub fn from_bits(n: usize, bits: u32) -> Result<Self> {
        let full = Self::full(n)?;
        if bits & !full.bits != 0 {
            return Err(Error::InvalidInput(format!(
                "bitmask {bits:#x} has members outside 0..{n}"
            )));
        }
        Ok(VertexSet { bits, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.bits & (1 << v) != 0
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        debug_assert_eq!(self.n, other.n);
        VertexSet { bits: self.bits | other.bits, n: self.n }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        debug_assert_eq!(self.n, other.n);
        VertexSet { bits: self.bits & other.bits, n: self.n }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        debug_assert_eq!(self.n, other.n);
        VertexSet { bits: self.bits & !other.bits, n: self.n }
    }

    pub fn complement(&self) -> VertexSet {
        let full = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        VertexSet { bits: full & !self.bits, n: self.n }
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.n;
        (0..n).filter(move |&v| self.bits & (1 << v) != 0)
    }

    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl std::fmt::Display for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// An edge of an r-uniform hypergraph: a strictly increasing r-tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    verts: Vec<usize>,
}

impl Edge {
    /// Validates strict increase and the supported uniformity range.
    pub fn new(verts: &[usize]) -> Result<Self> {
        if verts.is_empty() || verts.len() > MAX_R {
            return Err(Error::InvalidInput(format!(
                "edge must have between 1 and {MAX_R} vertices, got {}",
                verts.len()
            )));
        }
        for w in verts.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidInput(format!(
                    "edge vertices must be strictly increasing, got {verts:?}"
                )));
            }
        }
        Ok(Edge { verts: verts.to_vec() })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.verts
    }

    pub fn r(&self) -> usize {
        self.verts.len()
    }

    pub fn bitmask(&self) -> u32 {
        self.verts.iter().fold(0u32, |m, &v| m | (1 << v))
    }

    /// True iff the vertex sets do not intersect.
    pub fn is_disjoint(&self, other: &Edge) -> bool {
        self.bitmask() & other.bitmask() == 0
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, v) in self.verts.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// True iff two edges share no vertex.
pub fn disjoint(e1: &Edge, e2: &Edge) -> bool {
    e1.is_disjoint(e2)
}

/// Colexicographic rank of an edge, in `[0, C(n, r))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

impl std::fmt::Display for EdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_dims(n: usize, r: usize) -> Result<()> {
    if !(2..=MAX_R).contains(&r) {
        return Err(Error::InvalidInput(format!(
            "uniformity r={r} outside supported range 2..={MAX_R}"
        )));
    }
    if n < r || n > MAX_N {
        return Err(Error::InvalidInput(format!(
            "vertex count n={n} outside supported range {r}..={MAX_N}"
        )));
    }
    Ok(())
}

/// Colex rank of `edge` among the r-subsets of `{0, ..., n-1}`.
pub fn rank_edge(edge: &Edge, n: usize, r: usize) -> Result<EdgeId> {
    check_dims(n, r)?;
    if edge.r() != r {
        return Err(Error::InvalidInput(format!(
            "edge has {} vertices, expected r={r}",
            edge.r()
        )));
    }
    if *edge.vertices().last().unwrap() >= n {
        return Err(Error::InvalidInput(format!(
            "edge {edge} out of range for n={n}"
        )));
    }
    Ok(EdgeId(rank_subset(edge.vertices())))
}

/// Colex rank of a strictly increasing subset, independent of `n`.
pub(crate) fn rank_subset(verts: &[usize]) -> usize {
    verts
        .iter()
        .enumerate()
        .map(|(i, &a)| binomial(a, i + 1) as usize)
        .sum()
}

/// Inverse of [`rank_edge`].
pub fn unrank_edge(id: EdgeId, n: usize, r: usize) -> Result<Edge> {
    check_dims(n, r)?;
    let total = binomial(n, r) as usize;
    if id.0 >= total {
        return Err(Error::InvalidInput(format!(
            "edge rank {} out of range for C({n},{r})={total}",
            id.0
        )));
    }
    let mut verts = vec![0usize; r];
    let mut m = id.0 as u64;
    for i in (1..=r).rev() {
        // Largest a with C(a, i) <= m.
        let mut a = i - 1;
        while binomial(a + 1, i) <= m {
            a += 1;
        }
        m -= binomial(a, i);
        verts[i - 1] = a;
    }
    Edge::new(&verts)
}

/// Iterates the k-subsets of `{0, ..., n-1}` in colexicographic order.
///
/// The position of a subset in this stream equals its colex rank.
pub struct ColexCombinations {
    n: usize,
    k: usize,
    current: Vec<usize>,
    done: bool,
}

impl ColexCombinations {
    pub fn new(n: usize, k: usize) -> Self {
        ColexCombinations {
            n,
            k,
            current: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for ColexCombinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = self.current.clone();
        // Colex successor: bump the least position that has room before the
        // next element, resetting everything below it.
        let k = self.k;
        let mut i = 0;
        loop {
            if i == k {
                self.done = true;
                break;
            }
            let limit = if i + 1 < k { self.current[i + 1] } else { self.n };
            if self.current[i] + 1 < limit {
                self.current[i] += 1;
                for j in 0..i {
                    self.current[j] = j;
                }
                break;
            }
            i += 1;
        }
        Some(item)
    }
}
