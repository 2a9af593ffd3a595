//! Doubling: three compatible HCS(2n+1) on `{inf} ∪ L` (|L| = 2n) give an
//! HCS(4n+1) on `{inf} ∪ (L × {+, -})`.
//!
//! For matched cycles `A_i, B_i, C_i` read from `inf` as `(a_1..a_2n)`,
//! `(b_1..b_2n)`, `(c_1..c_2n)` with equal first and last entries, the output
//! holds two cycles per `i`:
//!
//! ```text
//! first type:  (inf, a_1, ..., a_2n, b'_2n, ..., b'_1)
//! second type: (inf, c_2n, c'_2n-1, c_2n-2, ..., c'_1, c_1, c'_2, c_3, ..., c'_2n)
//! ```
//!
//! where unprimed points are `+` copies and primed points are `-` copies.

use std::collections::HashMap;

use crate::design::{validate, CycleSystem, HamCycle, Sign, Vertex};
use crate::error::{Error, Result};
use crate::par::{self, Strategy};

/// One matched triple, each entry the cycle read from `inf` without `inf`.
pub type Triple = [Vec<u32>; 3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoublingInput {
    n: usize,
    triples: Vec<Triple>,
}

impl DoublingInput {
    /// Checks shape and the shared-endpoint condition on every triple.
    pub fn from_triples(triples: Vec<Triple>) -> Result<Self> {
        let n = triples.len();
        if n == 0 {
            return Err(Error::Incompatible("no cycles to double".into()));
        }
        let mut labels = triples[0][0].clone();
        labels.sort_unstable();
        if labels.len() != 2 * n || labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Incompatible(format!(
                "expected {n} triples of cycles through {} distinct points",
                2 * n
            )));
        }
        for (i, t) in triples.iter().enumerate() {
            for seq in t {
                let mut s = seq.clone();
                s.sort_unstable();
                if s != labels {
                    return Err(Error::Incompatible(format!(
                        "triple {} does not span the common point set",
                        i + 1
                    )));
                }
            }
            let first = t[0][0];
            let last = t[0][2 * n - 1];
            if t.iter().any(|s| s[0] != first || s[2 * n - 1] != last) {
                return Err(Error::Incompatible(format!(
                    "triple {} breaks the shared first/last neighbour of inf",
                    i + 1
                )));
            }
        }
        Ok(DoublingInput { n, triples })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }
}

/// Matches cycles of the three systems by their unordered pair of
/// `inf`-neighbours and orients each triple the way its `H1` cycle reads in
/// canonical form.
pub fn check_compatible(
    h1: &CycleSystem,
    h2: &CycleSystem,
    h3: &CycleSystem,
) -> Result<DoublingInput> {
    if h1.v() != h2.v() || h1.v() != h3.v() {
        return Err(Error::Incompatible(format!(
            "orders differ: {}, {}, {}",
            h1.v(),
            h2.v(),
            h3.v()
        )));
    }
    if h1.vertices() != h2.vertices() || h1.vertices() != h3.vertices() {
        return Err(Error::Incompatible("vertex sets differ".into()));
    }
    if !h1.has_infinity() {
        return Err(Error::Incompatible("systems must contain inf".into()));
    }
    if h1
        .vertices()
        .iter()
        .any(|x| matches!(x, Vertex::Signed(..)))
    {
        return Err(Error::Incompatible("inputs must use plain labels".into()));
    }

    fn keyed(h: &CycleSystem) -> HashMap<(Vertex, Vertex), &HamCycle> {
        h.cycles()
            .iter()
            .map(|c| {
                (
                    c.neighbours(Vertex::Infinity).expect("inf on every cycle"),
                    c,
                )
            })
            .collect()
    }
    let (k2, k3) = (keyed(h2), keyed(h3));

    let read = |c: &HamCycle, first: Vertex| -> Vec<u32> {
        c.oriented(Vertex::Infinity, first)
            .expect("first is a neighbour of inf")
            .into_iter()
            .skip(1)
            .map(|x| x.index().expect("plain label"))
            .collect()
    };

    let mut triples = Vec::with_capacity(h1.cycles().len());
    for a in h1.cycles() {
        let key = a.neighbours(Vertex::Infinity).expect("inf on every cycle");
        let unmatched = || {
            Error::Incompatible(format!(
                "no partner for the cycle with inf-neighbours {} and {}",
                key.0, key.1
            ))
        };
        let b = k2.get(&key).ok_or_else(unmatched)?;
        let c = k3.get(&key).ok_or_else(unmatched)?;
        triples.push([read(a, key.0), read(b, key.0), read(c, key.0)]);
    }
    DoublingInput::from_triples(triples)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleType {
    First,
    Second,
}

/// The output cycles, oriented from `inf`, in triple order (first type then
/// second type for each triple).
pub fn doubled_cycles(input: &DoublingInput) -> Vec<(CycleType, Vec<Vertex>)> {
    doubled_cycles_with(input, Strategy::Sequential)
}

pub fn doubled_cycles_with(
    input: &DoublingInput,
    strategy: Strategy,
) -> Vec<(CycleType, Vec<Vertex>)> {
    let plus = |x: u32| Vertex::Signed(x, Sign::Plus);
    let minus = |x: u32| Vertex::Signed(x, Sign::Minus);
    let per_triple = par::map_range(strategy, input.triples.len(), |i| {
        let [a, b, c] = &input.triples[i];
        let two_n = a.len();

        let mut first = Vec::with_capacity(2 * two_n + 1);
        first.push(Vertex::Infinity);
        first.extend(a.iter().map(|&x| plus(x)));
        first.extend(b.iter().rev().map(|&x| minus(x)));

        // 1-based j: going down, even j is unprimed; coming up, odd j is
        let mut second = Vec::with_capacity(2 * two_n + 1);
        second.push(Vertex::Infinity);
        for j in (1..=two_n).rev() {
            let x = c[j - 1];
            second.push(if j % 2 == 0 { plus(x) } else { minus(x) });
        }
        for j in 1..=two_n {
            let x = c[j - 1];
            second.push(if j % 2 == 1 { plus(x) } else { minus(x) });
        }
        [(CycleType::First, first), (CycleType::Second, second)]
    });
    per_triple.into_iter().flatten().collect()
}

/// Builds the doubled system and re-validates it.
pub fn double(input: &DoublingInput) -> Result<CycleSystem> {
    let seqs = doubled_cycles_with(input, Strategy::default())
        .into_iter()
        .map(|(_, s)| s);
    let system = CycleSystem::from_sequences(seqs)?;
    let report = validate(&system);
    if !report.ok {
        return Err(Error::ConstructionInvalid(report.to_string()));
    }
    Ok(system)
}
