//! Edge colorings of complete r-uniform hypergraphs and their text format.
//!
//! File format, bit-exact:
//! ```text
//! n r t\n
//! <C(n,r) digits, digit i = color of the edge with colex rank i>\n
//! ```
//! Nothing else is allowed, including trailing whitespace.

use crate::combinatorics::{binomial, Edge, EdgeId};
use crate::error::{Error, Result};

/// Largest supported color count; one text digit per edge.
pub const MAX_T: usize = 10;

/// A set of colors, stored as a bitmask over `0..MAX_T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ColorSet(u16);

impl ColorSet {
    pub fn empty() -> Self {
        ColorSet(0)
    }

    /// All of `0..t`.
    pub fn all(t: usize) -> Self {
        ColorSet(((1u32 << t) - 1) as u16)
    }

    pub fn single(c: u8) -> Self {
        ColorSet(1 << c)
    }

    pub fn from_colors(colors: &[u8]) -> Self {
        ColorSet(colors.iter().fold(0u16, |m, &c| m | (1 << c)))
    }

    pub fn insert(&mut self, c: u8) {
        self.0 |= 1 << c;
    }

    pub fn contains(&self, c: u8) -> bool {
        self.0 & (1 << c) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(&self, other: &ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Colors in increasing order.
    pub fn iter(self) -> impl Iterator<Item = u8> {
        (0..16u8).filter(move |&c| self.0 & (1 << c) != 0)
    }

    /// Least color not in the set among `0..t`, if any.
    pub fn least_missing(&self, t: usize) -> Option<u8> {
        (0..t as u8).find(|&c| !self.contains(c))
    }
}

impl std::fmt::Display for ColorSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A t-edge-coloring of the complete r-uniform hypergraph on n vertices.
///
/// `colors[i]` is the color of the edge with colex rank `i`. Immutable after
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    n: usize,
    r: usize,
    t: usize,
    colors: Vec<u8>,
}

impl Coloring {
    pub fn new(n: usize, r: usize, t: usize, colors: Vec<u8>) -> Result<Self> {
        // Reuse the dimension checks behind rank/unrank.
        crate::combinatorics::unrank_edge(EdgeId(0), n, r)?;
        if !(1..=MAX_T).contains(&t) {
            return Err(Error::InvalidInput(format!(
                "color count t={t} outside supported range 1..={MAX_T}"
            )));
        }
        let expected = binomial(n, r) as usize;
        if colors.len() != expected {
            return Err(Error::InvalidInput(format!(
                "expected {expected} edge colors for (n={n}, r={r}), got {}",
                colors.len()
            )));
        }
        if let Some(&bad) = colors.iter().find(|&&c| c as usize >= t) {
            return Err(Error::InvalidInput(format!(
                "edge color {bad} out of range for t={t}"
            )));
        }
        Ok(Coloring { n, r, t, colors })
    }

    /// The all-zero coloring.
    pub fn monochromatic(n: usize, r: usize, t: usize) -> Result<Self> {
        let len = binomial(n, r) as usize;
        Coloring::new(n, r, t, vec![0; len])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn edge_count(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, id: EdgeId) -> u8 {
        self.colors[id.0]
    }

    pub fn color_of_edge(&self, edge: &Edge) -> Result<u8> {
        let id = crate::combinatorics::rank_edge(edge, self.n, self.r)?;
        Ok(self.color(id))
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    /// Set of colors appearing anywhere in the coloring.
    pub fn used_colors(&self) -> ColorSet {
        ColorSet::from_colors(&self.colors)
    }

    /// Renders the two-line text format.
    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(self.colors.len() + 16);
        out.push_str(&format!("{} {} {}\n", self.n, self.r, self.t));
        for &c in &self.colors {
            out.push((b'0' + c) as char);
        }
        out.push('\n');
        out
    }

    /// Parses the two-line text format, rejecting anything malformed.
    pub fn deserialize(text: &str) -> Result<Self> {
        parse_coloring(text)
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_coloring(text: &str) -> Result<Coloring> {
    let header_end = text
        .find('\n')
        .ok_or_else(|| parse_err(1, text.len(), "missing newline after header"))?;
    let header = &text[..header_end];
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 3 {
        return Err(parse_err(
            1,
            0,
            format!("header must be `n r t`, got {fields:?}"),
        ));
    }
    let parse_field = |idx: usize, name: &str| -> Result<usize> {
        fields[idx]
            .parse::<usize>()
            .map_err(|_| parse_err(1, idx, format!("cannot parse {name} from {:?}", fields[idx])))
    };
    let n = parse_field(0, "n")?;
    let r = parse_field(1, "r")?;
    let t = parse_field(2, "t")?;
    if !(1..=MAX_T).contains(&t) {
        return Err(parse_err(1, 4, format!("t={t} outside 1..={MAX_T}")));
    }
    crate::combinatorics::unrank_edge(EdgeId(0), n, r)
        .map_err(|e| parse_err(1, 0, e.to_string()))?;

    let body = &text[header_end + 1..];
    let expected = binomial(n, r) as usize;
    let mut colors = Vec::with_capacity(expected);
    let mut chars = body.char_indices();
    for (col, ch) in chars.by_ref() {
        if ch == '\n' {
            if colors.len() != expected {
                return Err(parse_err(
                    2,
                    col,
                    format!("expected {expected} color digits, got {}", colors.len()),
                ));
            }
            // The digit line's newline must be the last byte of the input.
            if chars.next().is_some() {
                return Err(parse_err(3, 0, "trailing content after coloring"));
            }
            return Coloring::new(n, r, t, colors);
        }
        let d = ch
            .to_digit(10)
            .ok_or_else(|| parse_err(2, col, format!("invalid color character {ch:?}")))?;
        if d as usize >= t {
            return Err(parse_err(2, col, format!("color digit {d} >= t={t}")));
        }
        if colors.len() == expected {
            return Err(parse_err(
                2,
                col,
                format!("more than {expected} color digits"),
            ));
        }
        colors.push(d as u8);
    }
    Err(parse_err(
        2,
        body.len(),
        "missing newline after color digits",
    ))
}
