//! Full automorphism groups of cycle systems.
//!
//! Every cycle is Hamiltonian, so an automorphism is determined by where it
//! sends one fixed cycle `C1`: it must land on some cycle `D`, in one of the
//! `2v` dihedral alignments. Testing those `|S| * 2v` total maps is exact and
//! bounds `|Aut| <= v(v-1)`.

use std::fmt;

use crate::design::{canonical_rotation, validate, CycleSystem, Vertex};
use crate::error::{Error, Result};
use crate::groups::{Element, FiniteGroup};
use crate::par::{self, Strategy};

/// A bijection on vertex positions `0..v` of a [`CycleSystem`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(v: usize) -> Perm {
        Perm {
            images: (0..v as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let v = images.len();
        let mut hit = vec![false; v];
        for &x in &images {
            if x as usize >= v || std::mem::replace(&mut hit[x as usize], true) {
                return Err(Error::NotABijection(v));
            }
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of `system`'s vertices from a label map.
    pub fn from_vertex_map(system: &CycleSystem, f: impl Fn(Vertex) -> Vertex) -> Result<Perm> {
        let images = system
            .vertices()
            .iter()
            .map(|&x| {
                system
                    .position(f(x))
                    .map(|p| p as u32)
                    .ok_or(Error::NotABijection(system.v()))
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as u32;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.images.len())
            .filter(|&x| self.apply(x) == x)
            .collect()
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut m = 1;
        while !p.is_identity() {
            p = p.then(self);
            m += 1;
        }
        m
    }

    /// Disjoint-cycle notation using the system's vertex labels.
    pub fn cycle_notation(&self, labels: &[Vertex]) -> String {
        let mut seen = vec![false; self.images.len()];
        let mut out = String::new();
        for start in 0..self.images.len() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            out.push('(');
            let mut x = start;
            loop {
                seen[x] = true;
                out.push_str(&labels[x].to_string());
                x = self.apply(x);
                if x == start {
                    break;
                }
                out.push(' ');
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

/// The image of each cycle, canonicalised in position space and sorted.
fn mapped_cycles(perm: &[u32], cycles: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = cycles
        .iter()
        .map(|c| {
            let image: Vec<u32> = c.iter().map(|&x| perm[x as usize]).collect();
            canonical_rotation(&image)
        })
        .collect();
    out.sort_unstable();
    out
}

/// Precomputed target cycle set for repeated automorphism tests.
struct Checker {
    cycles: Vec<Vec<u32>>,
}

impl Checker {
    fn new(system: &CycleSystem) -> Self {
        let mut cycles = system.index_cycles();
        cycles.sort_unstable();
        Checker { cycles }
    }

    fn accepts(&self, images: &[u32]) -> bool {
        mapped_cycles(images, &self.cycles) == self.cycles
    }
}

/// Whether `perm` maps the cycle set of `system` onto itself.
pub fn is_automorphism(perm: &Perm, system: &CycleSystem) -> bool {
    perm.len() == system.v() && Checker::new(system).accepts(perm.images())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Trivial,
    OddOrder,
    Binary,
    AGL1p,
    /// Even order, not binary and not AGL(1, p): contradicts the even-order
    /// dichotomy, so treat it as a defect.
    Other,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Trivial => "Trivial",
            Classification::OddOrder => "OddOrder",
            Classification::Binary => "Binary",
            Classification::AGL1p => "AGL1p",
            Classification::Other => "Other",
        })
    }
}

/// An explicitly listed permutation group, elements sorted (identity first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<Perm>,
}

impl PermGroup {
    /// Checks the group axioms on an explicit element list.
    pub fn new(degree: usize, mut elements: Vec<Perm>) -> Result<PermGroup> {
        elements.sort_unstable();
        elements.dedup();
        let bad = |why: &str| Error::InvalidTable(format!("not a permutation group: {why}"));
        if elements.iter().any(|p| p.len() != degree) {
            return Err(bad("degree mismatch"));
        }
        if elements.first() != Some(&Perm::identity(degree)) {
            return Err(bad("missing identity"));
        }
        let group = PermGroup { degree, elements };
        for a in &group.elements {
            if !group.contains(&a.inverse()) {
                return Err(bad("not closed under inverses"));
            }
            for b in &group.elements {
                if !group.contains(&a.then(b)) {
                    return Err(bad("not closed under composition"));
                }
            }
        }
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index_of(p).is_some()
    }

    fn index_of(&self, p: &Perm) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    pub fn involutions(&self) -> Vec<&Perm> {
        self.elements.iter().filter(|p| p.order() == 2).collect()
    }

    /// Elements fixing `point`.
    pub fn stabilizer(&self, point: usize) -> Vec<&Perm> {
        self.elements
            .iter()
            .filter(|p| p.apply(point) == point)
            .collect()
    }

    pub fn fixes_point(&self, point: usize) -> bool {
        self.elements.iter().all(|p| p.apply(point) == point)
    }

    /// Sharply 2-transitive on ordered pairs of distinct points: the orbit of
    /// `(0, 1)` is everything and its stabiliser is trivial.
    pub fn is_sharply_2_transitive(&self) -> bool {
        let v = self.degree;
        if v < 2 {
            return false;
        }
        let mut seen = vec![false; v * v];
        let mut stabiliser = 0;
        for p in &self.elements {
            let (a, b) = (p.apply(0), p.apply(1));
            seen[a * v + b] = true;
            if a == 0 && b == 1 {
                stabiliser += 1;
            }
        }
        let orbit = seen.iter().filter(|&&s| s).count();
        orbit == v * (v - 1) && stabiliser == 1
    }

    /// The abstract group with elements indexed as in [`Self::elements`] and
    /// product `a * b = a then b`.
    pub fn to_finite_group(&self, name: impl Into<String>) -> Result<FiniteGroup> {
        let n = self.order();
        let mut table = Vec::with_capacity(n * n);
        for a in &self.elements {
            for b in &self.elements {
                table.push(self.index_of(&a.then(b)).expect("closed under composition"));
            }
        }
        FiniteGroup::from_table(name, n, table)
    }
}

pub fn classify(group: &PermGroup, v: usize) -> Classification {
    let order = group.order();
    if order == 1 {
        Classification::Trivial
    } else if order % 2 == 1 {
        Classification::OddOrder
    } else if group.involutions().len() == 1 {
        Classification::Binary
    } else if is_prime(v) && order == v * (v - 1) && group.is_sharply_2_transitive() {
        Classification::AGL1p
    } else {
        Classification::Other
    }
}

fn is_prime(v: usize) -> bool {
    v >= 2
        && (2..)
            .take_while(|d| d * d <= v)
            .all(|d| !v.is_multiple_of(d))
}

pub fn automorphism_group(system: &CycleSystem) -> Result<PermGroup> {
    automorphism_group_with(system, Strategy::default())
}

/// Exact automorphism group by aligning the least cycle onto every cycle in
/// every dihedral position.
pub fn automorphism_group_with(system: &CycleSystem, strategy: Strategy) -> Result<PermGroup> {
    let report = validate(system);
    if !report.ok {
        return Err(Error::InvalidSystem(report.to_string()));
    }
    let v = system.v();
    let checker = Checker::new(system);
    let anchor = &checker.cycles[0];
    let candidates = checker.cycles.len() * 2 * v;

    let found = par::filter_map_range(strategy, candidates, |k| {
        let target = &checker.cycles[k / (2 * v)];
        let shift = (k / 2) % v;
        let forward = k % 2 == 0;
        let mut images = vec![0u32; v];
        for (t, &x) in anchor.iter().enumerate() {
            let at = if forward {
                (shift + t) % v
            } else {
                (shift + v - t) % v
            };
            images[x as usize] = target[at];
        }
        checker.accepts(&images).then_some(Perm { images })
    });

    debug_assert!(found.len() <= v * (v - 1));
    PermGroup::new(v, found)
}

/// Largest order accepted by [`brute_force_aut`].
pub const BRUTE_FORCE_MAX_V: usize = 9;

pub fn brute_force_aut(system: &CycleSystem) -> Result<PermGroup> {
    brute_force_aut_with(system, Strategy::default())
}

/// Tests all `v!` permutations. Independent of the alignment method; only
/// for `v <= 9`.
pub fn brute_force_aut_with(system: &CycleSystem, strategy: Strategy) -> Result<PermGroup> {
    let v = system.v();
    if v > BRUTE_FORCE_MAX_V {
        return Err(Error::TooManyVertices {
            v,
            max: BRUTE_FORCE_MAX_V,
        });
    }
    let checker = Checker::new(system);
    // one chunk per choice of images of vertices 0 and 1
    let chunks = par::map_range(strategy, v * (v - 1), |k| {
        let a = (k / (v - 1)) as u32;
        let mut b = (k % (v - 1)) as u32;
        if b >= a {
            b += 1;
        }
        let mut rest: Vec<u32> = (0..v as u32).filter(|&x| x != a && x != b).collect();
        let mut accepted = Vec::new();
        let mut images = vec![0u32; v];
        loop {
            images[0] = a;
            images[1] = b;
            images[2..].copy_from_slice(&rest);
            if checker.accepts(&images) {
                accepted.push(Perm {
                    images: images.clone(),
                });
            }
            if !next_permutation(&mut rest) {
                break;
            }
        }
        accepted
    });
    PermGroup::new(v, chunks.into_iter().flatten().collect())
}

fn next_permutation(xs: &mut [u32]) -> bool {
    let n = xs.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| xs[i] < xs[i + 1]) else {
        return false;
    };
    let j = (i + 1..n)
        .rev()
        .find(|&j| xs[j] > xs[i])
        .expect("xs[i+1] > xs[i]");
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

/// Right translation by `g` on a system labelled by group elements: fixes
/// `inf` and sends label `x` to `x·g`, keeping any sign.
pub fn translation(system: &CycleSystem, group: &FiniteGroup, g: Element) -> Result<Perm> {
    Perm::from_vertex_map(system, |x| match x {
        Vertex::Infinity => Vertex::Infinity,
        Vertex::Plain(i) => Vertex::Plain(group.mul(Element(i as usize), g).index() as u32),
        Vertex::Signed(i, s) => Vertex::Signed(group.mul(Element(i as usize), g).index() as u32, s),
    })
}

/// `order=<n> class=<tag>` followed by one element per line.
pub fn report(system: &CycleSystem, group: &PermGroup) -> String {
    let mut out = format!(
        "order={} class={}\n",
        group.order(),
        classify(group, system.v())
    );
    for p in group.elements() {
        out.push_str(&p.cycle_notation(system.vertices()));
        out.push('\n');
    }
    out
}
