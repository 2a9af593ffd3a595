//! Finite groups as explicit multiplication tables.
//!
//! Every group here is small, so a group is just its Cayley table plus a few
//! cached facts (inverses, element orders, involutions). Element indices are
//! part of the public contract: a direct product `G1 x G2` numbers the pair
//! `(a, b)` as `a * |G2| + b`, so serialized starters stay reproducible.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Largest group order any constructor accepts unless told otherwise.
pub const DEFAULT_ORDER_CAP: usize = 1024;

/// An element of a specific [`FiniteGroup`], identified by its table index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub usize);

impl Element {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    orders: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from a row-major multiplication table, checking the
    /// group axioms. `table[i * n + j]` is the index of `e_i * e_j`.
    pub fn from_table(name: impl Into<String>, order: usize, table: Vec<usize>) -> Result<Self> {
        Self::from_table_capped(name, order, table, DEFAULT_ORDER_CAP)
    }

    pub fn from_table_capped(
        name: impl Into<String>,
        order: usize,
        table: Vec<usize>,
        cap: usize,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        if order > cap {
            return Err(Error::OrderCap { order, cap });
        }
        if table.len() != order * order {
            return Err(Error::InvalidTable(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= order) {
            return Err(Error::InvalidTable(format!("entry {bad} out of range")));
        }
        check_latin(order, &table)?;

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] == x && table[x * order + e] == x))
            .ok_or_else(|| Error::InvalidTable("no two-sided identity".into()))?;

        let inverses = (0..order)
            .map(|x| {
                (0..order)
                    .find(|&y| table[x * order + y] == identity)
                    .expect("latin square rows contain the identity")
            })
            .collect::<Vec<_>>();

        check_associative(order, &table)?;

        let mut group = FiniteGroup {
            name: name.into(),
            order,
            table,
            identity,
            inverses,
            orders: Vec::new(),
        };
        group.orders = (0..order).map(|x| group.compute_order(x)).collect();
        Ok(group)
    }

    fn compute_order(&self, x: usize) -> usize {
        let mut m = 1;
        let mut p = x;
        while p != self.identity {
            p = self.table[p * self.order + x];
            m += 1;
        }
        m
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Element {
        Element(self.identity)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(Element)
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        Element(self.table[a.0 * self.order + b.0])
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        Element(self.inverses[a.0])
    }

    /// `a * b^-1`, the (left) difference used by starter conditions.
    #[inline]
    pub fn div(&self, a: Element, b: Element) -> Element {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Element, k: usize) -> Element {
        (0..k % self.orders[a.0]).fold(self.identity(), |acc, _| self.mul(acc, a))
    }

    /// Least `m >= 1` with `x^m = 1`.
    pub fn element_order(&self, x: Element) -> usize {
        self.orders[x.0]
    }

    pub fn involutions(&self) -> Vec<Element> {
        self.elements().filter(|&x| self.orders[x.0] == 2).collect()
    }

    /// A group is binary when it has exactly one involution.
    pub fn is_binary(&self) -> bool {
        self.unique_involution().is_some()
    }

    /// The involution of a binary group (usually written lambda).
    pub fn unique_involution(&self) -> Option<Element> {
        let mut it = self.elements().filter(|&x| self.orders[x.0] == 2);
        match (it.next(), it.next()) {
            (Some(l), None) => Some(l),
            _ => None,
        }
    }

    /// Sorted multiset of element orders; an isomorphism invariant.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v = self.orders.clone();
        v.sort_unstable();
        v
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The subgroup generated by `gens`, as a membership mask.
    pub fn generated(&self, gens: &[Element]) -> Vec<bool> {
        let mut seen = vec![false; self.order];
        let mut queue = VecDeque::from([self.identity()]);
        seen[self.identity] = true;
        while let Some(a) = queue.pop_front() {
            for &s in gens {
                let b = self.mul(a, s);
                if !seen[b.0] {
                    seen[b.0] = true;
                    queue.push_back(b);
                }
            }
        }
        seen
    }

    /// A small generating set, chosen greedily by descending element order.
    pub fn generators(&self) -> Vec<Element> {
        let mut by_order: Vec<Element> = self.elements().collect();
        by_order.sort_by_key(|&x| (std::cmp::Reverse(self.orders[x.0]), x.0));
        let mut gens = Vec::new();
        let mut inside = self.generated(&gens);
        for x in by_order {
            if !inside[x.0] {
                gens.push(x);
                inside = self.generated(&gens);
            }
        }
        gens
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn check_latin(n: usize, table: &[usize]) -> Result<()> {
    let mut seen = vec![0usize; n];
    for r in 0..n {
        let stamp = r + 1;
        for c in 0..n {
            let x = table[r * n + c];
            if seen[x] == stamp {
                return Err(Error::InvalidTable(format!("row {r} repeats {x}")));
            }
            seen[x] = stamp;
        }
    }
    seen.fill(0);
    for c in 0..n {
        let stamp = c + 1;
        for r in 0..n {
            let x = table[r * n + c];
            if seen[x] == stamp {
                return Err(Error::InvalidTable(format!("column {c} repeats {x}")));
            }
            seen[x] = stamp;
        }
    }
    Ok(())
}

/// Light's associativity test: for a quasigroup with identity it suffices to
/// check `(x*s)*y = x*(s*y)` for `s` in a set whose left-normed products
/// reach every element.
fn check_associative(n: usize, table: &[usize]) -> Result<()> {
    let mul = |a: usize, b: usize| table[a * n + b];
    let mut reached = vec![false; n];
    let mut gens: Vec<usize> = Vec::new();
    while let Some(next) = (0..n).find(|&x| !reached[x]) {
        gens.push(next);
        // closure of the generators under right multiplication by generators
        let mut queue: VecDeque<usize> = gens.iter().copied().collect();
        for &g in &gens {
            reached[g] = true;
        }
        while let Some(a) = queue.pop_front() {
            for &s in &gens {
                let b = mul(a, s);
                if !reached[b] {
                    reached[b] = true;
                    queue.push_back(b);
                }
            }
        }
    }
    for &s in &gens {
        for x in 0..n {
            let xs = mul(x, s);
            for y in 0..n {
                if mul(xs, y) != mul(x, mul(s, y)) {
                    return Err(Error::InvalidTable(format!(
                        "not associative at ({x}, {s}, {y})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The cyclic group `Z_n` with element `i` standing for `i mod n`.
pub fn make_cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    if n > DEFAULT_ORDER_CAP {
        return Err(Error::OrderCap {
            order: n,
            cap: DEFAULT_ORDER_CAP,
        });
    }
    let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
    FiniteGroup::from_table(format!("Z{n}"), n, table)
}

/// Index of a quaternion unit `±u` where `u` is 0=1, 1=i, 2=j, 3=k.
const fn quat(unit: usize, negative: bool) -> usize {
    2 * unit + negative as usize
}

/// The quaternion group `Q8 = {±1, ±i, ±j, ±k}`.
///
/// Indexing: `1, -1, i, -i, j, -j, k, -k` are elements `0..8`.
pub fn make_quaternion8() -> FiniteGroup {
    // product of basis units: (sign, unit)
    fn unit_mul(a: usize, b: usize) -> (bool, usize) {
        match (a, b) {
            (0, u) | (u, 0) => (false, u),
            (a, b) if a == b => (true, 0),
            (1, 2) => (false, 3),
            (2, 3) => (false, 1),
            (3, 1) => (false, 2),
            (2, 1) => (true, 3),
            (3, 2) => (true, 1),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        }
    }
    let mut table = vec![0; 64];
    for x in 0..8 {
        for y in 0..8 {
            let (neg, unit) = unit_mul(x / 2, y / 2);
            let negative = neg ^ (x % 2 == 1) ^ (y % 2 == 1);
            table[x * 8 + y] = quat(unit, negative);
        }
    }
    FiniteGroup::from_table("Q8", 8, table).expect("Q8 table is a group")
}

/// Human-readable name of a quaternion element, for reports.
pub fn quaternion_label(x: Element) -> &'static str {
    ["1", "-1", "i", "-i", "j", "-j", "k", "-k"][x.0]
}

/// `G1 x G2` with pair `(a, b)` at index `a * |G2| + b`.
pub fn direct_product(g1: &FiniteGroup, g2: &FiniteGroup) -> Result<FiniteGroup> {
    direct_product_capped(g1, g2, DEFAULT_ORDER_CAP)
}

pub fn direct_product_capped(
    g1: &FiniteGroup,
    g2: &FiniteGroup,
    cap: usize,
) -> Result<FiniteGroup> {
    let (n1, n2) = (g1.order(), g2.order());
    let n = n1 * n2;
    if n > cap {
        return Err(Error::OrderCap { order: n, cap });
    }
    let mut table = vec![0; n * n];
    for x in 0..n {
        let (x1, x2) = (Element(x / n2), Element(x % n2));
        for y in 0..n {
            let (y1, y2) = (Element(y / n2), Element(y % n2));
            table[x * n + y] = g1.mul(x1, y1).0 * n2 + g2.mul(x2, y2).0;
        }
    }
    FiniteGroup::from_table_capped(format!("{}x{}", g1.name(), g2.name()), n, table, cap)
}

/// Index of the pair `(a, b)` in `G1 x G2` where `|G2| = right_order`.
#[inline]
pub fn pair(a: Element, b: Element, right_order: usize) -> Element {
    Element(a.0 * right_order + b.0)
}

/// Parses `atom ("x" atom)*` with atoms `Z<n>` and `Q8`, left-associated.
pub fn parse_group_spec(spec: &str) -> Result<FiniteGroup> {
    let err = |reason: String| Error::GroupSpec {
        spec: spec.to_string(),
        reason,
    };
    let trimmed = spec.trim();
    if trimmed.is_empty() {
        return Err(err("empty spec".into()));
    }
    let mut acc: Option<FiniteGroup> = None;
    for atom in trimmed.split(['x', 'X']) {
        let atom = atom.trim();
        let g = if atom == "Q8" {
            make_quaternion8()
        } else if let Some(digits) = atom.strip_prefix('Z') {
            let n: usize = digits
                .parse()
                .map_err(|_| err(format!("bad cyclic order in atom {atom:?}")))?;
            if n == 0 {
                return Err(err("Z0 is not a group".into()));
            }
            if n > DEFAULT_ORDER_CAP {
                return Err(Error::OrderCap {
                    order: n,
                    cap: DEFAULT_ORDER_CAP,
                });
            }
            make_cyclic(n)?
        } else if atom.is_empty() {
            return Err(err("empty factor".into()));
        } else {
            return Err(err(format!("unsupported atom {atom:?}")));
        };
        acc = Some(match acc {
            None => g,
            Some(prev) => direct_product(&prev, &g)?,
        });
    }
    Ok(acc.expect("at least one atom"))
}

/// Searches for an isomorphism `G1 -> G2`.
///
/// Returns the witness `map[g1_index] = g2_element` when one exists. Groups
/// are first compared by order and element-order profile; the search then
/// backtracks over images of a greedy generating set of `G1` and the final
/// map is re-verified as a homomorphic bijection.
pub fn is_isomorphic(g1: &FiniteGroup, g2: &FiniteGroup) -> Result<Option<Vec<Element>>> {
    for g in [g1, g2] {
        if g.order() > DEFAULT_ORDER_CAP {
            return Err(Error::OrderCap {
                order: g.order(),
                cap: DEFAULT_ORDER_CAP,
            });
        }
    }
    if g1.order() != g2.order() || g1.order_profile() != g2.order_profile() {
        return Ok(None);
    }
    let gens = g1.generators();
    let mut images = Vec::with_capacity(gens.len());
    let found = extend_images(g1, g2, &gens, &mut images);
    let Some(map) = found else {
        return Ok(None);
    };
    debug_assert!(is_isomorphism(g1, g2, &map));
    if !is_isomorphism(g1, g2, &map) {
        return Ok(None);
    }
    Ok(Some(map))
}

fn extend_images(
    g1: &FiniteGroup,
    g2: &FiniteGroup,
    gens: &[Element],
    images: &mut Vec<Element>,
) -> Option<Vec<Element>> {
    let k = images.len();
    if k == gens.len() {
        return partial_hom(g1, g2, gens, images);
    }
    let want = g1.element_order(gens[k]);
    for cand in g2.elements().filter(|&y| g2.element_order(y) == want) {
        images.push(cand);
        if partial_hom(g1, g2, &gens[..=k], images).is_some() {
            if let Some(map) = extend_images(g1, g2, gens, images) {
                return Some(map);
            }
        }
        images.pop();
    }
    None
}

/// Extends `gens[i] -> images[i]` to the generated subgroup; `None` on
/// conflict or non-injectivity. The returned map is only total when `gens`
/// generates `G1`.
fn partial_hom(
    g1: &FiniteGroup,
    g2: &FiniteGroup,
    gens: &[Element],
    images: &[Element],
) -> Option<Vec<Element>> {
    const UNSET: Element = Element(usize::MAX);
    let mut map = vec![UNSET; g1.order()];
    let mut used = vec![false; g2.order()];
    map[g1.identity().0] = g2.identity();
    used[g2.identity().0] = true;
    let mut queue = VecDeque::from([g1.identity()]);
    while let Some(a) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let b = g1.mul(a, s);
            let img = g2.mul(map[a.0], t);
            if map[b.0] == UNSET {
                if used[img.0] {
                    return None;
                }
                used[img.0] = true;
                map[b.0] = img;
                queue.push_back(b);
            } else if map[b.0] != img {
                return None;
            }
        }
    }
    Some(map)
}

/// Checks that `map` is a bijective homomorphism `G1 -> G2`.
pub fn is_isomorphism(g1: &FiniteGroup, g2: &FiniteGroup, map: &[Element]) -> bool {
    if map.len() != g1.order() || g1.order() != g2.order() {
        return false;
    }
    let mut hit = vec![false; g2.order()];
    for &y in map {
        if y.0 >= g2.order() || std::mem::replace(&mut hit[y.0], true) {
            return false;
        }
    }
    g1.elements().all(|a| {
        g1.elements()
            .all(|b| map[g1.mul(a, b).0] == g2.mul(map[a.0], map[b.0]))
    })
}
