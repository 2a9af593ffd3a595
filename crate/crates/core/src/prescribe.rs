//! Cycle systems with a prescribed full automorphism group.
//!
//! * Odd order `G`: find a starter `C` over `Z2 × G`, build the modified
//!   starter `C*`, and double `(orbit(C*), orbit(C), orbit(C))`. The result
//!   is an HCS(4|G|+1) whose automorphisms are exactly the translations by
//!   `G`. The trivial group is served by a fixed rigid HCS(13).
//! * Binary `H` of order `4m`, odd `d >= 3`: take a starter `A` over
//!   `H × Z_d`, swap one pair of edges of `A` using an element of order 4,
//!   and reassemble the `H`-orbits. The result has full group `H`.

use std::fmt::Write as _;

use crate::autgroup::{automorphism_group, classify, Classification, PermGroup};
use crate::design::{canonical_cycle, sorted_pair, validate, CycleSystem, Sign, Vertex};
use crate::doubling::{check_compatible, double};
use crate::error::{Error, Result};
use crate::groups::{direct_product, is_isomorphic, make_cyclic, pair, Element, FiniteGroup};
use crate::rotational::{
    cycle_vertices, develop, find_starter, lambda_transversal, orbit_cycles, translate,
    SearchBudget, Starter,
};

/// The six 13-cycles on `{inf} ∪ (Z6 × {0, 1})` with no non-trivial
/// automorphism. Point `i_0` is vertex `i+`, point `i_1` is vertex `i-`.
pub fn hardcoded_rigid_hcs13() -> CycleSystem {
    const ROWS: [&str; 6] = [
        "inf 0_0 1_0 5_0 2_0 4_0 3_0 3_1 1_1 2_1 5_1 4_1 0_1",
        "inf 1_0 2_0 0_0 3_0 5_0 4_0 4_1 2_1 3_1 0_1 5_1 1_1",
        "inf 2_0 3_0 1_0 4_0 0_0 5_0 5_1 3_1 4_1 1_1 0_1 2_1",
        "0_0 4_1 5_0 2_1 1_0 3_1 inf 3_0 1_1 2_0 5_1 4_0 0_1",
        "1_0 5_1 0_0 3_1 2_0 4_1 inf 4_0 2_1 3_0 0_1 5_0 1_1",
        "2_0 0_1 1_0 4_1 3_0 5_1 inf 5_0 3_1 4_0 1_1 0_0 2_1",
    ];
    let point = |tok: &str| match tok.split_once('_') {
        None => Vertex::Infinity,
        Some((i, layer)) => Vertex::Signed(
            i.parse().expect("digit"),
            if layer == "0" {
                Sign::Plus
            } else {
                Sign::Minus
            },
        ),
    };
    CycleSystem::from_sequences(ROWS.iter().map(|row| row.split(' ').map(point).collect()))
        .expect("rigid HCS(13) is well formed")
}

/// Builds `C*` from a starter `C = (inf, x_1..x_n, x̄_n..x̄_1)`.
///
/// `k` is the least index in `2..n` with `x_k x_{k+1}^-1` equal to
/// `x_1 x_2^-1 λ` or `x_2 x_1^-1 λ`, and
/// `C* = (inf, x_1, x̄_2..x̄_k, x_{k+1}..x_n, x̄_n..x̄_{k+1}, x_k..x_2, x̄_1)`.
/// Returns `(k, C*)` with `k` 1-based.
pub fn modified_starter(group: &FiniteGroup, c: &Starter) -> Result<(usize, Starter)> {
    let n = c.n();
    if n < 3 {
        return Err(Error::Pipeline(format!(
            "modified starter needs n >= 3, got n = {n}"
        )));
    }
    let lambda = c.lambda();
    let x = c.half();
    let bar = |e: Element| group.mul(e, lambda);
    let targets = [
        group.mul(group.div(x[0], x[1]), lambda),
        group.mul(group.div(x[1], x[0]), lambda),
    ];
    // x is 0-based: x[i - 1] is x_i
    let k = (2..n)
        .find(|&k| targets.contains(&group.div(x[k - 1], x[k])))
        .ok_or_else(|| {
            Error::Pipeline(format!(
                "no index k in 2..{} with x_k x_(k+1)^-1 in {{x_1 x_2^-1 λ, x_2 x_1^-1 λ}} for C = ({c})",
                n - 1
            ))
        })?;

    let mut seq = Vec::with_capacity(2 * n);
    seq.push(x[0]);
    seq.extend(x[1..k].iter().map(|&e| bar(e)));
    seq.extend_from_slice(&x[k..n]);
    seq.extend(x[k..n].iter().rev().map(|&e| bar(e)));
    seq.extend(x[1..k].iter().rev());
    seq.push(bar(x[0]));
    let star = Starter::new(group, seq)?;
    Ok((k, star))
}

#[derive(Debug, Clone)]
pub struct OddStages {
    /// `Z2 × G`, with `λ = (1, e)`.
    pub gamma: FiniteGroup,
    pub starter: Starter,
    pub k: usize,
    pub modified: Starter,
    /// `G`-orbit of `C`.
    pub h: CycleSystem,
    /// `G`-orbit of `C*`.
    pub h_star: CycleSystem,
}

#[derive(Debug, Clone)]
pub struct OddPipelineTrace {
    pub group: String,
    pub order: usize,
    /// `None` when the rigid HCS(13) answers the trivial group.
    pub stages: Option<OddStages>,
}

#[derive(Debug, Clone)]
pub struct OddConstruction {
    pub system: CycleSystem,
    pub trace: OddPipelineTrace,
}

/// Runs the odd-order pipeline and checks that the full automorphism group
/// of the result is isomorphic to `group`.
pub fn construct_odd(group: &FiniteGroup, budget: SearchBudget) -> Result<OddConstruction> {
    let built = construct_odd_unchecked(group, budget)?;
    check_full_group(&built.system, group)?;
    Ok(built)
}

/// The odd-order pipeline without the final isomorphism check.
pub fn construct_odd_unchecked(
    group: &FiniteGroup,
    budget: SearchBudget,
) -> Result<OddConstruction> {
    let n = group.order();
    if n.is_multiple_of(2) {
        return Err(Error::WrongOrder {
            name: group.name().to_string(),
            order: n,
            expected: "odd".into(),
        });
    }
    let mut trace = OddPipelineTrace {
        group: group.name().to_string(),
        order: n,
        stages: None,
    };
    if n == 1 {
        return Ok(OddConstruction {
            system: hardcoded_rigid_hcs13(),
            trace,
        });
    }

    let gamma = direct_product(&make_cyclic(2)?, group)?;
    let starter = find_starter(&gamma, budget)?;
    let (k, modified) = modified_starter(&gamma, &starter)?;
    // least-index transversal of {1, λ} in Z2 × G is {(0, g)} = G
    let h = develop(&gamma, &starter)?;
    let h_star = develop(&gamma, &modified)?;
    let input = check_compatible(&h_star, &h, &h)?;
    let system = double(&input)?;
    if system.v() != 4 * n + 1 {
        return Err(Error::ConstructionInvalid(format!(
            "expected order {}, got {}",
            4 * n + 1,
            system.v()
        )));
    }
    trace.stages = Some(OddStages {
        gamma,
        starter,
        k,
        modified,
        h,
        h_star,
    });
    Ok(OddConstruction { system, trace })
}

/// Computes `Aut(system)` and checks it is isomorphic to `expected`,
/// returning the group on success.
pub fn check_full_group(system: &CycleSystem, expected: &FiniteGroup) -> Result<PermGroup> {
    let aut = automorphism_group(system)?;
    let mismatch = || Error::GroupMismatch {
        expected: expected.name().to_string(),
        found: format!("of order {}", aut.order()),
    };
    if aut.order() != expected.order() {
        return Err(mismatch());
    }
    let abstract_group = aut.to_finite_group("Aut")?;
    match is_isomorphic(&abstract_group, expected)? {
        Some(_) => Ok(aut),
        None => Err(mismatch()),
    }
}

/// Result of replacing `E = {[a_j, a_{j+1}], [a_j λ, a_{j+1} λ]}` by
/// `E* = {[a_j, a_{j+1} λ], [a_j λ, a_{j+1}]}` in a starter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSwap {
    /// Order-4 element of `H` with `a_{j+1} a_j^-1 = x`.
    pub x: Element,
    /// 1-based position in the half.
    pub j: usize,
    /// `a_j^-1 x a_j`; satisfies `E·y = E*`.
    pub y: Element,
    pub removed: [(Element, Element); 2],
    pub added: [(Element, Element); 2],
    /// The swapped cycle after `inf`.
    pub swapped: Vec<Element>,
}

/// Swaps one pair of edges of the starter `a` over `G = H × Z_d`.
///
/// `x` is the least-index order-4 element of `H` that occurs as some
/// `a_{j+1} a_j^-1`, and `j` the least such position. Exactly one of each
/// pair `{x, x^-1}` occurs in that orientation, so a suitable `x` exists
/// whenever `H` has an element of order 4.
pub fn swap_edges(g: &FiniteGroup, h: &FiniteGroup, a: &Starter) -> Result<EdgeSwap> {
    let d = g.order() / h.order();
    let lambda = a.lambda();
    let half = a.half();
    let n = half.len();
    let order4: Vec<Element> = h
        .elements()
        .filter(|&e| h.element_order(e) == 4)
        .map(|e| pair(e, Element(0), d))
        .collect();
    if order4.is_empty() {
        return Err(Error::Pipeline(format!(
            "{} has no element of order 4",
            h.name()
        )));
    }
    let (x, j) = order4
        .iter()
        .find_map(|&x| {
            (1..n)
                .find(|&j| g.div(half[j], half[j - 1]) == x)
                .map(|j| (x, j))
        })
        .ok_or_else(|| {
            Error::Pipeline(format!(
                "no consecutive pair a_j, a_(j+1) of ({a}) differs by an order-4 element"
            ))
        })?;

    let bar = |e: Element| g.mul(e, lambda);
    let (aj, aj1) = (half[j - 1], half[j]);
    let y = g.mul(g.mul(g.inv(aj), x), aj);

    let mut swapped = Vec::with_capacity(2 * n);
    swapped.extend_from_slice(&half[..j]);
    swapped.extend(half[j..].iter().map(|&e| bar(e)));
    swapped.extend(half[j..].iter().rev());
    swapped.extend(half[..j].iter().rev().map(|&e| bar(e)));

    Ok(EdgeSwap {
        x,
        j,
        y,
        removed: [(aj, aj1), (bar(aj), bar(aj1))],
        added: [(aj, bar(aj1)), (bar(aj), aj1)],
        swapped,
    })
}

#[derive(Debug, Clone)]
pub struct BinaryPipelineTrace {
    pub h: FiniteGroup,
    pub d: usize,
    /// `H × Z_d`.
    pub g: FiniteGroup,
    pub starter: Starter,
    pub swap: EdgeSwap,
    /// Least-index transversal of `{1, λ}` in `H`, as elements of `G`.
    pub h_transversal: Vec<Element>,
}

#[derive(Debug, Clone)]
pub struct BinaryConstruction {
    pub system: CycleSystem,
    pub trace: BinaryPipelineTrace,
}

pub fn construct_binary(
    h: &FiniteGroup,
    d: usize,
    budget: SearchBudget,
) -> Result<BinaryConstruction> {
    let built = construct_binary_unchecked(h, d, budget)?;
    check_full_group(&built.system, h)?;
    Ok(built)
}

pub fn construct_binary_unchecked(
    h: &FiniteGroup,
    d: usize,
    budget: SearchBudget,
) -> Result<BinaryConstruction> {
    let lambda_h = h
        .unique_involution()
        .ok_or_else(|| Error::NotBinary(h.name().to_string()))?;
    if !h.order().is_multiple_of(4) {
        return Err(Error::WrongOrder {
            name: h.name().to_string(),
            order: h.order(),
            expected: "a multiple of 4".into(),
        });
    }
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::Pipeline(format!("d must be odd and >= 3, got {d}")));
    }
    let g = direct_product(h, &make_cyclic(d)?)?;
    let starter = find_starter(&g, budget)?;
    let swap = swap_edges(&g, h, &starter)?;

    let h_transversal: Vec<Element> = lambda_transversal(h, lambda_h)
        .into_iter()
        .map(|e| pair(e, Element(0), d))
        .collect();
    let z = pair(h.identity(), Element(1), d);

    let mut cycles = orbit_cycles(&g, &swap.swapped, &h_transversal)?;
    for i in 1..d {
        let a_i = translate(&g, starter.alphas(), g.pow(z, i));
        cycles.extend(orbit_cycles(&g, &a_i, &h_transversal)?);
    }
    let system = CycleSystem::from_cycles(cycles)?;
    let report = validate(&system);
    if !report.ok {
        return Err(Error::ConstructionInvalid(report.to_string()));
    }
    Ok(BinaryConstruction {
        system,
        trace: BinaryPipelineTrace {
            h: h.clone(),
            d,
            g,
            starter,
            swap,
            h_transversal,
        },
    })
}

/// Edges of the cycle `(inf, alphas)` as sorted vertex pairs.
pub fn cycle_edges(alphas: &[Element]) -> Vec<(Vertex, Vertex)> {
    let c = canonical_cycle(&cycle_vertices(alphas)).expect("distinct entries");
    let mut e: Vec<_> = c.edges().collect();
    e.sort_unstable();
    e
}

pub fn element_edge(a: Element, b: Element) -> (Vertex, Vertex) {
    sorted_pair(
        Vertex::Plain(a.index() as u32),
        Vertex::Plain(b.index() as u32),
    )
}

impl OddConstruction {
    /// Plain-text replay log; every line is a `#` comment.
    pub fn trace_report(&self, aut: Option<(&PermGroup, bool)>) -> String {
        let t = &self.trace;
        let mut out = String::new();
        let _ = writeln!(out, "# construct odd group={} order={}", t.group, t.order);
        match &t.stages {
            None => {
                let _ = writeln!(out, "# trivial group: rigid HCS(13)");
            }
            Some(s) => {
                let lambda = s.starter.lambda();
                let _ = writeln!(out, "# gamma={} lambda={}", s.gamma.name(), lambda);
                let _ = writeln!(out, "# starter C: {}", s.starter);
                let _ = writeln!(out, "# k={}", s.k);
                let _ = writeln!(out, "# modified starter C*: {}", s.modified);
                let _ = writeln!(out, "# doubled: H1 = G-orbit of C*, H2 = H3 = G-orbit of C");
            }
        }
        let _ = writeln!(out, "# result v={}", self.system.v());
        if let Some((g, iso)) = aut {
            let _ = writeln!(
                out,
                "# aut order={} class={} isomorphic_to_{}={}",
                g.order(),
                classify(g, self.system.v()),
                t.group,
                iso
            );
        }
        out
    }
}

impl BinaryConstruction {
    pub fn trace_report(&self, aut: Option<(&PermGroup, bool)>) -> String {
        let t = &self.trace;
        let s = &t.swap;
        let mut out = String::new();
        let _ = writeln!(out, "# construct binary group={} d={}", t.h.name(), t.d);
        let _ = writeln!(out, "# G={} lambda={}", t.g.name(), t.starter.lambda());
        let _ = writeln!(out, "# starter A: {}", t.starter);
        let _ = writeln!(out, "# x={} j={} y={}", s.x, s.j, s.y);
        let show = |p: &[(Element, Element); 2]| {
            format!("[{},{}] [{},{}]", p[0].0, p[0].1, p[1].0, p[1].1)
        };
        let _ = writeln!(out, "# E: {}", show(&s.removed));
        let _ = writeln!(out, "# E*: {}", show(&s.added));
        let swapped: Vec<String> = s.swapped.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "# A0*: inf {}", swapped.join(" "));
        let tr: Vec<String> = t.h_transversal.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "# H-transversal: {}", tr.join(" "));
        let _ = writeln!(out, "# result v={}", self.system.v());
        if let Some((g, iso)) = aut {
            let _ = writeln!(
                out,
                "# aut order={} class={} isomorphic_to_{}={}",
                g.order(),
                classify(g, self.system.v()),
                t.h.name(),
                iso
            );
        }
        out
    }
}

/// Whether the classification of a computed group is one of the tags the
/// even-order dichotomy allows.
pub fn conforms(class: Classification) -> bool {
    class != Classification::Other
}
