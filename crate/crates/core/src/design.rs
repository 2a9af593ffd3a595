//! Hamiltonian cycle systems: vertices, canonical cycles, validation and the
//! text file format.
//!
//! A system file looks like
//!
//! ```text
//! # comment lines start with '#'
//! hcs v=7
//! inf 0 1 5 2 4 3
//! inf 1 2 0 3 5 4
//! inf 2 3 1 4 0 5
//! ```
//!
//! Vertices render as `inf`, `<index>` (plain) or `<index>+` / `<index>-`
//! (signed copies produced by doubling).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A vertex label. The derived order puts `Infinity` first, then labels by
/// index, then sign (`+` before `-`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Infinity,
    Plain(u32),
    Signed(u32, Sign),
}

impl Vertex {
    pub fn is_infinity(self) -> bool {
        matches!(self, Vertex::Infinity)
    }

    /// The underlying point index, if any.
    pub fn index(self) -> Option<u32> {
        match self {
            Vertex::Infinity => None,
            Vertex::Plain(i) | Vertex::Signed(i, _) => Some(i),
        }
    }

    /// `z'`: the copy of a signed vertex with the opposite sign.
    pub fn flipped(self) -> Vertex {
        match self {
            Vertex::Signed(i, s) => Vertex::Signed(i, s.flip()),
            other => other,
        }
    }

    fn scheme(self) -> Option<u8> {
        match self {
            Vertex::Infinity => None,
            Vertex::Plain(_) => Some(0),
            Vertex::Signed(..) => Some(1),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Infinity => f.write_str("inf"),
            Vertex::Plain(i) => write!(f, "{i}"),
            Vertex::Signed(i, Sign::Plus) => write!(f, "{i}+"),
            Vertex::Signed(i, Sign::Minus) => write!(f, "{i}-"),
        }
    }
}

impl FromStr for Vertex {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(Vertex::Infinity);
        }
        let (digits, sign) = match s.as_bytes().last() {
            Some(b'+') => (&s[..s.len() - 1], Some(Sign::Plus)),
            Some(b'-') => (&s[..s.len() - 1], Some(Sign::Minus)),
            _ => (s, None),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad vertex {s:?}"));
        }
        let index: u32 = digits.parse().map_err(|_| format!("bad vertex {s:?}"))?;
        Ok(match sign {
            None => Vertex::Plain(index),
            Some(sign) => Vertex::Signed(index, sign),
        })
    }
}

/// Least rotation/reflection of a cyclic sequence of distinct items.
///
/// With distinct entries the least listing starts at the minimum and walks
/// towards its smaller neighbour, so this is linear.
pub(crate) fn canonical_rotation<T: Ord + Copy>(seq: &[T]) -> Vec<T> {
    let n = seq.len();
    let Some((start, _)) = seq.iter().enumerate().min_by_key(|&(_, x)| x) else {
        return Vec::new();
    };
    let next = seq[(start + 1) % n];
    let prev = seq[(start + n - 1) % n];
    if next <= prev {
        (0..n).map(|t| seq[(start + t) % n]).collect()
    } else {
        (0..n).map(|t| seq[(start + n - t) % n]).collect()
    }
}

/// A Hamiltonian cycle stored in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HamCycle {
    seq: Vec<Vertex>,
}

impl HamCycle {
    pub fn new(seq: Vec<Vertex>) -> Result<Self> {
        canonical_cycle(&seq)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// Edges as sorted vertex pairs, in cycle order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let n = self.seq.len();
        (0..n).map(move |t| sorted_pair(self.seq[t], self.seq[(t + 1) % n]))
    }

    /// The cycle read starting from `from` towards `towards` (which must be
    /// a neighbour of `from`).
    pub fn oriented(&self, from: Vertex, towards: Vertex) -> Option<Vec<Vertex>> {
        let n = self.seq.len();
        let p = self.seq.iter().position(|&x| x == from)?;
        if self.seq[(p + 1) % n] == towards {
            Some((0..n).map(|t| self.seq[(p + t) % n]).collect())
        } else if self.seq[(p + n - 1) % n] == towards {
            Some((0..n).map(|t| self.seq[(p + n - t) % n]).collect())
        } else {
            None
        }
    }

    /// The two neighbours of `x`, smaller first.
    pub fn neighbours(&self, x: Vertex) -> Option<(Vertex, Vertex)> {
        let n = self.seq.len();
        let p = self.seq.iter().position(|&y| y == x)?;
        let (a, b) = (self.seq[(p + 1) % n], self.seq[(p + n - 1) % n]);
        Some(sorted_pair(a, b))
    }
}

impl fmt::Display for HamCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, x) in self.seq.iter().enumerate() {
            if t > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

pub fn sorted_pair(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    match a.cmp(&b) {
        Ordering::Greater => (b, a),
        _ => (a, b),
    }
}

/// Canonical form of a cycle: the lexicographically least of its rotations
/// and reflections.
pub fn canonical_cycle(seq: &[Vertex]) -> Result<HamCycle> {
    if seq.len() < 3 {
        return Err(Error::CycleTooShort(seq.len()));
    }
    let mut sorted = seq.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateVertex(w[0]));
    }
    Ok(HamCycle {
        seq: canonical_rotation(seq),
    })
}

/// A set of Hamiltonian cycles on an odd number of vertices.
///
/// Construction guarantees that every cycle visits every vertex exactly
/// once; whether the cycles partition the edges is checked by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleSystem {
    vertices: Vec<Vertex>,
    cycles: Vec<HamCycle>,
}

impl CycleSystem {
    pub fn new(mut vertices: Vec<Vertex>, mut cycles: Vec<HamCycle>) -> Result<Self> {
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        let v = vertices.len();
        if v < 3 || v.is_multiple_of(2) {
            return Err(Error::InvalidSystem(format!(
                "order must be odd and at least 3, got {v}"
            )));
        }
        let mut schemes = vertices.iter().filter_map(|x| x.scheme());
        if let Some(first) = schemes.next() {
            if schemes.any(|s| s != first) {
                return Err(Error::InvalidSystem(
                    "plain and signed labels cannot be mixed".into(),
                ));
            }
        }
        for c in &cycles {
            if c.len() != v {
                return Err(Error::InvalidSystem(format!(
                    "cycle of length {} on {v} vertices",
                    c.len()
                )));
            }
            if let Some(x) = c
                .vertices()
                .iter()
                .find(|x| vertices.binary_search(x).is_err())
            {
                return Err(Error::InvalidSystem(format!(
                    "cycle visits {x}, which is not a vertex of the system"
                )));
            }
        }
        cycles.sort_unstable();
        Ok(CycleSystem { vertices, cycles })
    }

    /// Builds a system whose vertex set is taken from the first cycle.
    pub fn from_cycles(cycles: Vec<HamCycle>) -> Result<Self> {
        let vertices = cycles
            .first()
            .ok_or_else(|| Error::InvalidSystem("no cycles".into()))?
            .vertices()
            .to_vec();
        Self::new(vertices, cycles)
    }

    /// Builds a system from raw (non-canonical) vertex sequences.
    pub fn from_sequences<I>(seqs: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Vertex>>,
    {
        let cycles = seqs
            .into_iter()
            .map(|s| canonical_cycle(&s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_cycles(cycles)
    }

    /// Order of the system (number of vertices).
    pub fn v(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn cycles(&self) -> &[HamCycle] {
        &self.cycles
    }

    pub fn has_infinity(&self) -> bool {
        self.vertices.first() == Some(&Vertex::Infinity)
    }

    /// Position of a vertex in the sorted vertex list.
    pub fn position(&self, x: Vertex) -> Option<usize> {
        self.vertices.binary_search(&x).ok()
    }

    /// Cycles as sequences of vertex positions. Since positions follow the
    /// vertex order, these are canonical in position space too.
    pub fn index_cycles(&self) -> Vec<Vec<u32>> {
        self.cycles
            .iter()
            .map(|c| {
                c.vertices()
                    .iter()
                    .map(|&x| self.position(x).expect("cycle vertex in system") as u32)
                    .collect()
            })
            .collect()
    }

    /// The cycle containing the edge `{a, b}`, if any.
    pub fn cycle_with_edge(&self, a: Vertex, b: Vertex) -> Option<&HamCycle> {
        let e = sorted_pair(a, b);
        self.cycles.iter().find(|c| c.edges().any(|f| f == e))
    }

    /// Applies a vertex relabelling. The map must be injective on the
    /// vertex set.
    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Result<CycleSystem> {
        let vertices: Vec<Vertex> = self.vertices.iter().map(|&x| f(x)).collect();
        let cycles = self
            .cycles
            .iter()
            .map(|c| canonical_cycle(&c.vertices().iter().map(|&x| f(x)).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        CycleSystem::new(vertices, cycles)
    }
}

impl fmt::Display for CycleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "hcs v={}", self.v())?;
        for c in &self.cycles {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for CycleSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_system(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    pub missing_edges: Vec<(Vertex, Vertex)>,
    pub duplicated_edges: Vec<(Vertex, Vertex)>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return f.write_str("ok");
        }
        let show = |edges: &[(Vertex, Vertex)]| {
            edges
                .iter()
                .map(|(a, b)| format!("[{a},{b}]"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        if !self.missing_edges.is_empty() {
            writeln!(
                f,
                "missing {} edge(s): {}",
                self.missing_edges.len(),
                show(&self.missing_edges)
            )?;
        }
        if !self.duplicated_edges.is_empty() {
            writeln!(
                f,
                "duplicated {} edge(s): {}",
                self.duplicated_edges.len(),
                show(&self.duplicated_edges)
            )?;
        }
        Ok(())
    }
}

/// Checks that the cycles partition the edges of the complete graph.
pub fn validate(system: &CycleSystem) -> ValidationReport {
    let v = system.v();
    let mut count = vec![0u32; v * v];
    for cycle in system.index_cycles() {
        for t in 0..v {
            let (a, b) = (cycle[t] as usize, cycle[(t + 1) % v] as usize);
            let (a, b) = (a.min(b), a.max(b));
            count[a * v + b] += 1;
        }
    }
    let mut missing_edges = Vec::new();
    let mut duplicated_edges = Vec::new();
    let vs = system.vertices();
    for a in 0..v {
        for b in a + 1..v {
            match count[a * v + b] {
                0 => missing_edges.push((vs[a], vs[b])),
                1 => {}
                _ => duplicated_edges.push((vs[a], vs[b])),
            }
        }
    }
    ValidationReport {
        ok: missing_edges.is_empty() && duplicated_edges.is_empty(),
        missing_edges,
        duplicated_edges,
    }
}

pub fn serialize_system(system: &CycleSystem) -> String {
    system.to_string()
}

pub fn parse_system(text: &str) -> Result<CycleSystem> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        reason: "missing `hcs v=<order>` header".into(),
    })?;
    let v = parse_header(header, "hcs", "v").map_err(|reason| Error::Parse {
        line: hline,
        reason,
    })?;
    if v < 3 || v % 2 == 0 {
        return Err(Error::Parse {
            line: hline,
            reason: format!("order must be odd and at least 3, got {v}"),
        });
    }

    let mut cycles = Vec::new();
    let mut vertex_set: Option<Vec<Vertex>> = None;
    for (line, text) in lines {
        let err = |reason: String| Error::Parse { line, reason };
        let seq = text
            .split_whitespace()
            .map(|tok| tok.parse::<Vertex>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(err)?;
        if seq.len() != v {
            return Err(err(format!("expected {v} vertices, found {}", seq.len())));
        }
        let cycle = canonical_cycle(&seq).map_err(|e| err(e.to_string()))?;
        let mut set = seq;
        set.sort_unstable();
        match &vertex_set {
            None => vertex_set = Some(set),
            Some(prev) if *prev != set => {
                return Err(err("vertex set differs from the first cycle".into()))
            }
            Some(_) => {}
        }
        cycles.push(cycle);
    }
    let want = (v - 1) / 2;
    if cycles.len() != want {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            reason: format!("expected {want} cycles, found {}", cycles.len()),
        });
    }
    CycleSystem::new(vertex_set.expect("at least one cycle"), cycles).map_err(|e| Error::Parse {
        line: hline,
        reason: e.to_string(),
    })
}

/// Parses `<keyword> <field>=<int>` with arbitrary whitespace.
pub(crate) fn parse_header(
    line: &str,
    keyword: &str,
    field: &str,
) -> std::result::Result<usize, String> {
    let mut toks = line.split_whitespace();
    if toks.next() != Some(keyword) {
        return Err(format!("expected header `{keyword} {field}=...`"));
    }
    let kv = toks.next().ok_or_else(|| format!("missing `{field}=`"))?;
    if toks.next().is_some() {
        return Err("trailing tokens in header".into());
    }
    let value = kv
        .strip_prefix(field)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| format!("expected `{field}=<int>`, found {kv:?}"))?;
    value
        .parse()
        .map_err(|_| format!("bad integer {value:?} in header"))
}

/// Shorthand for plain vertex sequences in tests and examples; `None` is
/// infinity.
pub fn plain_seq(labels: &[Option<u32>]) -> Vec<Vertex> {
    labels
        .iter()
        .map(|l| l.map_or(Vertex::Infinity, Vertex::Plain))
        .collect()
}
