//! 1-rotational cycle systems over a binary group `G` of order `2n`.
//!
//! The vertex set is `{inf} ∪ G` and `G` acts by right multiplication,
//! fixing `inf`. A starter is a cycle `A = (inf, a_1, ..., a_2n)` with
//! `A·λ = A` whose first-half differences `a_i a_{i+1}^-1`, together with
//! their inverses, are exactly the elements of `G \ {1, λ}`. Translating the
//! starter by one representative of each coset of `{1, λ}` gives the system.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::design::{canonical_cycle, validate, CycleSystem, HamCycle, Vertex};
use crate::error::{Error, Result};
use crate::groups::{Element, FiniteGroup};
use crate::par::{self, Strategy};

/// A verified starter cycle. `alphas` lists the cycle after `inf`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Starter {
    lambda: Element,
    alphas: Vec<Element>,
}

impl Starter {
    /// Wraps `alphas` after checking both starter conditions.
    pub fn new(group: &FiniteGroup, alphas: Vec<Element>) -> Result<Self> {
        let report = verify_starter(group, &alphas)?;
        if !report.is_ok() {
            return Err(Error::NotAStarter(report.to_string()));
        }
        Ok(Starter {
            lambda: group.unique_involution().expect("checked binary"),
            alphas,
        })
    }

    /// `n`, half the group order.
    pub fn n(&self) -> usize {
        self.alphas.len() / 2
    }

    pub fn lambda(&self) -> Element {
        self.lambda
    }

    /// `(a_1, ..., a_2n)`.
    pub fn alphas(&self) -> &[Element] {
        &self.alphas
    }

    /// `(x_1, ..., x_n)`; the second half is forced to `x_n λ, ..., x_1 λ`.
    pub fn half(&self) -> &[Element] {
        &self.alphas[..self.n()]
    }

    /// The cycle `(inf, a_1, ..., a_2n)` as plain vertices.
    pub fn vertices(&self) -> Vec<Vertex> {
        cycle_vertices(&self.alphas)
    }

    /// `A·g`.
    pub fn translate(&self, group: &FiniteGroup, g: Element) -> Vec<Element> {
        translate(group, &self.alphas, g)
    }
}

impl fmt::Display for Starter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("inf")?;
        for a in &self.alphas {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

pub fn cycle_vertices(alphas: &[Element]) -> Vec<Vertex> {
    std::iter::once(Vertex::Infinity)
        .chain(alphas.iter().map(|a| Vertex::Plain(a.index() as u32)))
        .collect()
}

pub fn translate(group: &FiniteGroup, alphas: &[Element], g: Element) -> Vec<Element> {
    alphas.iter().map(|&a| group.mul(a, g)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StarterDefect {
    /// `a_{2n+1-i} != a_i λ` (1-based `i`).
    NotLambdaSymmetric { position: usize },
    /// `a_i a_{i+1}^-1` is `1` or `λ`.
    TrivialDifference { position: usize },
    /// Difference at `position` repeats (up to inversion) the one at `earlier`.
    RepeatedDifference { position: usize, earlier: usize },
    /// An element of `G \ {1, λ}` is not a first-half difference.
    MissingDifference { element: Element },
}

impl fmt::Display for StarterDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotLambdaSymmetric { position } => {
                write!(
                    f,
                    "A·λ != A: entry {position} is not paired with its λ-image"
                )
            }
            Self::TrivialDifference { position } => {
                write!(f, "difference at {position} is 1 or λ")
            }
            Self::RepeatedDifference { position, earlier } => {
                write!(f, "difference at {position} repeats the one at {earlier}")
            }
            Self::MissingDifference { element } => {
                write!(f, "element {element} is not covered by a difference")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StarterReport {
    pub defects: Vec<StarterDefect>,
}

impl StarterReport {
    pub fn is_ok(&self) -> bool {
        self.defects.is_empty()
    }
}

impl fmt::Display for StarterReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let parts: Vec<String> = self.defects.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Checks `A·λ = A` and the difference condition for `A = (inf, alphas)`.
pub fn verify_starter(group: &FiniteGroup, alphas: &[Element]) -> Result<StarterReport> {
    let lambda = group
        .unique_involution()
        .ok_or_else(|| Error::NotBinary(group.name().to_string()))?;
    check_spanning(group, alphas)?;
    let two_n = alphas.len();
    let n = two_n / 2;
    let mut report = StarterReport::default();

    let cycle = canonical_cycle(&cycle_vertices(alphas))?;
    let image = canonical_cycle(&cycle_vertices(&translate(group, alphas, lambda)))?;
    if cycle != image {
        for i in 0..n {
            if alphas[two_n - 1 - i] != group.mul(alphas[i], lambda) {
                report
                    .defects
                    .push(StarterDefect::NotLambdaSymmetric { position: i + 1 });
            }
        }
    }

    let identity = group.identity();
    let mut covered = vec![None::<usize>; group.order()];
    for i in 0..n.saturating_sub(1) {
        let d = group.div(alphas[i], alphas[i + 1]);
        if d == identity || d == lambda {
            report
                .defects
                .push(StarterDefect::TrivialDifference { position: i + 1 });
            continue;
        }
        if let Some(earlier) = covered[d.index()] {
            report.defects.push(StarterDefect::RepeatedDifference {
                position: i + 1,
                earlier,
            });
            continue;
        }
        covered[d.index()] = Some(i + 1);
        covered[group.inv(d).index()] = Some(i + 1);
    }
    for x in group.elements() {
        if x != identity && x != lambda && covered[x.index()].is_none() {
            report
                .defects
                .push(StarterDefect::MissingDifference { element: x });
        }
    }
    Ok(report)
}

fn check_spanning(group: &FiniteGroup, alphas: &[Element]) -> Result<()> {
    if alphas.len() != group.order() {
        return Err(Error::NotSpanning(format!(
            "{} entries for a group of order {}",
            alphas.len(),
            group.order()
        )));
    }
    let mut seen = vec![false; group.order()];
    for &a in alphas {
        if a.index() >= group.order() {
            return Err(Error::NotSpanning(format!("{a} is not an element")));
        }
        if std::mem::replace(&mut seen[a.index()], true) {
            return Err(Error::NotSpanning(format!("{a} appears twice")));
        }
    }
    Ok(())
}

/// Least-index representative of each coset of `{1, λ}`, in index order.
pub fn lambda_transversal(group: &FiniteGroup, lambda: Element) -> Vec<Element> {
    let mut taken = vec![false; group.order()];
    let mut reps = Vec::with_capacity(group.order() / 2);
    for x in group.elements() {
        if !taken[x.index()] {
            reps.push(x);
            taken[x.index()] = true;
            taken[group.mul(x, lambda).index()] = true;
        }
    }
    reps
}

/// The system `{A·x : x in X}` for the least-index transversal `X`.
pub fn develop(group: &FiniteGroup, starter: &Starter) -> Result<CycleSystem> {
    let report = verify_starter(group, starter.alphas())?;
    if !report.is_ok() {
        return Err(Error::NotAStarter(report.to_string()));
    }
    let seqs = lambda_transversal(group, starter.lambda())
        .into_iter()
        .map(|x| cycle_vertices(&starter.translate(group, x)));
    let system = CycleSystem::from_sequences(seqs)?;
    let check = validate(&system);
    if !check.ok {
        return Err(Error::ConstructionInvalid(check.to_string()));
    }
    Ok(system)
}

/// Cycles obtained by translating `seq` (a cycle through `inf`) by each `g`.
pub fn orbit_cycles(
    group: &FiniteGroup,
    alphas: &[Element],
    by: &[Element],
) -> Result<Vec<HamCycle>> {
    by.iter()
        .map(|&g| canonical_cycle(&cycle_vertices(&translate(group, alphas, g))))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Total node budget, split evenly across restarts.
    pub max_nodes: u64,
    pub seed: u64,
    pub restarts: u32,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 10_000_000,
            seed: 0,
            restarts: 8,
        }
    }
}

impl SearchBudget {
    pub fn with_seed(seed: u64) -> Self {
        SearchBudget {
            seed,
            ..Self::default()
        }
    }
}

pub fn find_starter(group: &FiniteGroup, budget: SearchBudget) -> Result<Starter> {
    find_starter_with(group, budget, Strategy::default())
}

/// Backtracking search for a starter.
///
/// The search fixes `a_1 = 1` and extends the half `(x_1, ..., x_n)` one
/// coset of `{1, λ}` at a time, rejecting any step whose difference class
/// `{d, d^-1}` is already used. Each restart shuffles candidate order with
/// its own seeded stream; the reported starter comes from the lowest
/// successful restart, so the answer is independent of `strategy`.
pub fn find_starter_with(
    group: &FiniteGroup,
    budget: SearchBudget,
    strategy: Strategy,
) -> Result<Starter> {
    let lambda = group
        .unique_involution()
        .ok_or_else(|| Error::NotBinary(group.name().to_string()))?;
    if budget.max_nodes == 0 || budget.restarts == 0 {
        return Err(Error::StarterNotFound {
            group: group.name().to_string(),
            nodes: 0,
        });
    }
    let per_restart = (budget.max_nodes / budget.restarts as u64).max(1);
    let total_nodes = AtomicU64::new(0);

    let found = par::find_map_first(strategy, budget.restarts as usize, |restart| {
        let mut search = HalfSearch::new(group, lambda, budget.seed, restart as u64, per_restart);
        let result = search.run();
        total_nodes.fetch_add(search.nodes, Ordering::Relaxed);
        result
    });

    match found {
        Some(half) => {
            let mut alphas = half.clone();
            alphas.extend(half.iter().rev().map(|&x| group.mul(x, lambda)));
            Starter::new(group, alphas)
        }
        None => Err(Error::StarterNotFound {
            group: group.name().to_string(),
            nodes: total_nodes.into_inner(),
        }),
    }
}

struct HalfSearch<'g> {
    group: &'g FiniteGroup,
    lambda: Element,
    rng: ChaCha8Rng,
    coset_of: Vec<usize>,
    class_of: Vec<usize>,
    coset_used: Vec<bool>,
    class_used: Vec<bool>,
    half: Vec<Element>,
    nodes: u64,
    limit: u64,
}

impl<'g> HalfSearch<'g> {
    fn new(group: &'g FiniteGroup, lambda: Element, seed: u64, restart: u64, limit: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(restart);
        let coset_of = group
            .elements()
            .map(|x| x.index().min(group.mul(x, lambda).index()))
            .collect();
        let class_of = group
            .elements()
            .map(|x| x.index().min(group.inv(x).index()))
            .collect();
        HalfSearch {
            group,
            lambda,
            rng,
            coset_of,
            class_of,
            coset_used: vec![false; group.order()],
            class_used: vec![false; group.order()],
            half: Vec::with_capacity(group.order() / 2),
            nodes: 0,
            limit,
        }
    }

    fn run(&mut self) -> Option<Vec<Element>> {
        let start = self.group.identity();
        self.half.push(start);
        self.coset_used[self.coset_of[start.index()]] = true;
        self.extend().then(|| self.half.clone())
    }

    fn extend(&mut self) -> bool {
        let n = self.group.order() / 2;
        if self.half.len() == n {
            return true;
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            return false;
        }
        let last = *self.half.last().expect("search starts non-empty");
        let mut candidates: Vec<Element> = self
            .group
            .elements()
            .filter(|&y| {
                !self.coset_used[self.coset_of[y.index()]]
                    && !self.class_used[self.class_of[self.group.div(last, y).index()]]
            })
            .collect();
        candidates.shuffle(&mut self.rng);
        for y in candidates {
            let coset = self.coset_of[y.index()];
            let class = self.class_of[self.group.div(last, y).index()];
            debug_assert!(self.group.div(last, y) != self.lambda);
            self.coset_used[coset] = true;
            self.class_used[class] = true;
            self.half.push(y);
            if self.extend() {
                return true;
            }
            self.half.pop();
            self.coset_used[coset] = false;
            self.class_used[class] = false;
            if self.nodes > self.limit {
                return false;
            }
        }
        false
    }
}

/// `starter group=<spec>` followed by the cycle with `inf` first.
pub fn serialize_starter(group_spec: &str, starter: &Starter) -> String {
    format!("starter group={group_spec}\n{starter}\n")
}

/// Parses a starter file, returning the group spec and the raw cycle entries
/// after `inf`. The caller builds the group and calls [`Starter::new`].
pub fn parse_starter_file(text: &str) -> Result<(String, Vec<Element>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        reason: "missing `starter group=<spec>` header".into(),
    })?;
    let spec = header
        .strip_prefix("starter")
        .map(str::trim)
        .and_then(|r| r.strip_prefix("group="))
        .map(str::trim)
        .filter(|s| !s.is_empty() && !s.contains(char::is_whitespace))
        .ok_or_else(|| Error::Parse {
            line: hline,
            reason: "expected `starter group=<spec>`".into(),
        })?;
    let (cline, body) = lines.next().ok_or(Error::Parse {
        line: hline + 1,
        reason: "missing starter cycle".into(),
    })?;
    let mut toks = body.split_whitespace();
    if toks.next() != Some("inf") {
        return Err(Error::Parse {
            line: cline,
            reason: "starter cycle must begin with `inf`".into(),
        });
    }
    let alphas = toks
        .map(|t| {
            t.parse::<usize>().map(Element).map_err(|_| Error::Parse {
                line: cline,
                reason: format!("bad element index {t:?}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse {
            line,
            reason: "unexpected content after starter cycle".into(),
        });
    }
    Ok((spec.to_string(), alphas))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_cyclic, parse_group_spec};

    fn els(xs: &[usize]) -> Vec<Element> {
        xs.iter().copied().map(Element).collect()
    }

    #[test]
    fn example_starters_over_z6() {
        let z6 = make_cyclic(6).unwrap();
        // g^k written as k
        assert!(verify_starter(&z6, &els(&[0, 4, 5, 2, 1, 3]))
            .unwrap()
            .is_ok());
        assert!(verify_starter(&z6, &els(&[0, 1, 5, 2, 4, 3]))
            .unwrap()
            .is_ok());
        let bad = verify_starter(&z6, &els(&[0, 1, 2, 3, 4, 5])).unwrap();
        assert!(bad
            .defects
            .iter()
            .any(|d| matches!(d, StarterDefect::NotLambdaSymmetric { .. })));
    }

    #[test]
    fn starter_errors() {
        let z5 = make_cyclic(5).unwrap();
        assert!(matches!(
            verify_starter(&z5, &els(&[0, 1, 2, 3, 4])),
            Err(Error::NotBinary(_))
        ));
        let z6 = make_cyclic(6).unwrap();
        assert!(matches!(
            verify_starter(&z6, &els(&[0, 1, 2])),
            Err(Error::NotSpanning(_))
        ));
        assert!(matches!(
            verify_starter(&z6, &els(&[0, 1, 1, 2, 3, 4])),
            Err(Error::NotSpanning(_))
        ));
    }

    #[test]
    fn difference_defects_are_named() {
        let z6 = make_cyclic(6).unwrap();
        // lambda-symmetric but differences 0-1=-1 and 1-2=-1 repeat
        let r = verify_starter(&z6, &els(&[0, 1, 2, 5, 4, 3])).unwrap();
        assert!(r.defects.contains(&StarterDefect::RepeatedDifference {
            position: 2,
            earlier: 1
        }));
        assert!(r
            .defects
            .iter()
            .any(|d| matches!(d, StarterDefect::MissingDifference { .. })));
    }

    #[test]
    fn develop_examples() {
        let z6 = make_cyclic(6).unwrap();
        let b1 = Starter::new(&z6, els(&[0, 4, 5, 2, 1, 3])).unwrap();
        let h2 = develop(&z6, &b1).unwrap();
        assert_eq!(h2.v(), 7);
        assert_eq!(h2.cycles().len(), 3);

        let z2 = make_cyclic(2).unwrap();
        let s = Starter::new(&z2, els(&[0, 1])).unwrap();
        let k3 = develop(&z2, &s).unwrap();
        assert_eq!(k3.cycles().len(), 1);
        assert_eq!(k3.v(), 3);
    }

    #[test]
    fn search_small_groups() {
        let z2 = make_cyclic(2).unwrap();
        let s = find_starter(&z2, SearchBudget::default()).unwrap();
        assert_eq!(s.alphas(), els(&[0, 1]));

        let z6 = make_cyclic(6).unwrap();
        let s = find_starter(&z6, SearchBudget::default()).unwrap();
        assert!(verify_starter(&z6, s.alphas()).unwrap().is_ok());
        assert!(validate(&develop(&z6, &s).unwrap()).ok);

        let z5 = make_cyclic(5).unwrap();
        assert!(matches!(
            find_starter(&z5, SearchBudget::default()),
            Err(Error::NotBinary(_))
        ));
    }

    #[test]
    fn search_is_reproducible_and_strategy_independent() {
        let g = parse_group_spec("Z2xZ9").unwrap();
        let budget = SearchBudget::with_seed(11);
        let a = find_starter_with(&g, budget, Strategy::Sequential).unwrap();
        let b = find_starter_with(&g, budget, Strategy::Parallel).unwrap();
        let c = find_starter_with(&g, budget, Strategy::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
    }

    #[test]
    fn exhausted_budget_reports_nodes() {
        let g = parse_group_spec("Z2xZ9").unwrap();
        let budget = SearchBudget {
            max_nodes: 2,
            seed: 0,
            restarts: 2,
        };
        match find_starter(&g, budget) {
            Err(Error::StarterNotFound { nodes, .. }) => assert!(nodes >= 2),
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn starter_file_round_trip() {
        let z6 = make_cyclic(6).unwrap();
        let s = Starter::new(&z6, els(&[0, 4, 5, 2, 1, 3])).unwrap();
        let text = serialize_starter("Z6", &s);
        assert_eq!(text, "starter group=Z6\ninf 0 4 5 2 1 3\n");
        let (spec, alphas) = parse_starter_file(&text).unwrap();
        assert_eq!(spec, "Z6");
        assert_eq!(alphas, s.alphas());

        for bad in [
            "",
            "starter\ninf 0 1\n",
            "starter group=Z2\n0 1\n",
            "starter group=Z2\ninf 0 x\n",
            "starter group=Z2\ninf 0 1\ninf 0 1\n",
        ] {
            assert!(parse_starter_file(bad).is_err(), "{bad:?}");
        }
    }
}
