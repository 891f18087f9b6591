use std::collections::HashSet;

use num_integer::Integer;
use serde::Serialize;

use crate::algebra::{int, rat, Rational};
use crate::error::{Error, Result};
use crate::kodaira::{KodairaType, SurfaceData};

/// Component index of a fibre: `0` is the identity component. For `I_n` the
/// index is the position on the cycle, for `III, IV, III*, IV*` the residue in
/// the component group. For `I_n*` index 1 is the near component and 2, 3 the
/// far ones; with `n` odd this matches the residue in Z/4.
pub type Comp = u32;

fn dstar_bits(c: Comp) -> u32 {
    match c {
        0 => 0b00,
        1 => 0b11,
        2 => 0b01,
        _ => 0b10,
    }
}

fn dstar_index(bits: u32) -> Comp {
    match bits {
        0b00 => 0,
        0b11 => 1,
        0b01 => 2,
        _ => 3,
    }
}

pub fn comp_add(kind: KodairaType, a: Comp, b: Comp) -> Comp {
    match kind {
        KodairaType::IStar(n) if n % 2 == 0 => dstar_index(dstar_bits(a) ^ dstar_bits(b)),
        _ => {
            let m = kind.component_group_order().max(1);
            (a + b) % m
        }
    }
}

/// Order of a component in the component group.
pub fn comp_order(kind: KodairaType, a: Comp) -> u64 {
    let mut acc = a;
    let mut k = 1;
    while acc != 0 {
        acc = comp_add(kind, acc, a);
        k += 1;
    }
    k
}

/// Local correction term of the height pairing for a section meeting
/// component `c`; it equals minus the norm of the matching dual vector of
/// the fibre root lattice.
pub fn contribution(kind: KodairaType, c: Comp) -> Result<Rational> {
    if c == 0 {
        return Ok(int(0));
    }
    if c >= kind.component_group_order() {
        return Err(Error::invalid(format!("{kind} has no simple component {c}")));
    }
    Ok(match kind {
        KodairaType::I(n) => rat(i64::from(c) * i64::from(n - c), i64::from(n)),
        KodairaType::IStar(n) if c == 1 && n % 2 == 0 => int(1),
        KodairaType::IStar(n) if c == 2 && n % 2 == 1 => int(1),
        KodairaType::IStar(n) => int(1) + rat(i64::from(n), 4),
        KodairaType::III => rat(1, 2),
        KodairaType::IIIStar => rat(3, 2),
        KodairaType::IV => rat(2, 3),
        KodairaType::IVStar => rat(4, 3),
        KodairaType::II | KodairaType::IIStar => unreachable!("trivial component group"),
    })
}

/// A geometric fibre that carries a nontrivial component group or is additive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Slot {
    pub label: String,
    #[serde(rename = "type")]
    pub kind: KodairaType,
}

/// Finite abelian group `Z/N x Z/N'` embedded into the product of the
/// component groups of the slots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionGroup {
    pub slots: Vec<Slot>,
    /// Invariant factors, e.g. `[4]` or `[3, 3]`; empty for the trivial group.
    pub factors: Vec<u64>,
    /// Component vectors of the generators, one entry per slot.
    pub generators: Vec<Vec<Comp>>,
}

impl TorsionGroup {
    pub fn trivial(slots: Vec<Slot>) -> Self {
        TorsionGroup { slots, factors: Vec::new(), generators: Vec::new() }
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    /// `(N, N')` with `N' | N`, padded with ones.
    pub fn n_pair(&self) -> (u64, u64) {
        (
            self.factors.first().copied().unwrap_or(1),
            self.factors.get(1).copied().unwrap_or(1),
        )
    }

    pub fn name(&self) -> String {
        group_name(&self.factors)
    }

    pub fn zero(&self) -> Vec<Comp> {
        vec![0; self.slots.len()]
    }

    pub fn add(&self, a: &[Comp], b: &[Comp]) -> Vec<Comp> {
        add_vec(&self.slots, a, b)
    }

    /// `sum coords[i] * generators[i]`.
    pub fn element(&self, coords: &[u64]) -> Vec<Comp> {
        let mut acc = self.zero();
        for (g, &k) in self.generators.iter().zip(coords) {
            for _ in 0..k {
                acc = self.add(&acc, g);
            }
        }
        acc
    }

    /// All elements, listed with their coordinates.
    pub fn elements(&self) -> Vec<(Vec<u64>, Vec<Comp>)> {
        let mut coords = vec![Vec::new()];
        for &m in &self.factors {
            coords = coords
                .into_iter()
                .flat_map(|c| {
                    (0..m).map(move |x| {
                        let mut c = c.clone();
                        c.push(x);
                        c
                    })
                })
                .collect();
        }
        coords
            .into_iter()
            .map(|c| {
                let e = self.element(&c);
                (c, e)
            })
            .collect()
    }

    pub fn slot_index(&self, label: &str) -> Option<usize> {
        self.slots.iter().position(|s| s.label == label)
    }

    /// Sum of local contributions of an element.
    pub fn contribution_sum(&self, e: &[Comp]) -> Result<Rational> {
        self.slots
            .iter()
            .zip(e)
            .try_fold(int(0), |acc, (s, &c)| Ok(acc + contribution(s.kind, c)?))
    }
}

pub fn group_name(factors: &[u64]) -> String {
    match factors {
        [] => "trivial".to_string(),
        [n] => format!("Z/{n}"),
        [n, m] if n == m => format!("(Z/{n})^2"),
        fs => fs.iter().map(|n| format!("Z/{n}")).collect::<Vec<_>>().join(" x "),
    }
}

fn add_vec(slots: &[Slot], a: &[Comp], b: &[Comp]) -> Vec<Comp> {
    slots
        .iter()
        .zip(a.iter().zip(b))
        .map(|(s, (&x, &y))| comp_add(s.kind, x, y))
        .collect()
}

fn span(slots: &[Slot], gens: &[&Vec<Comp>]) -> Vec<Vec<Comp>> {
    let zero = vec![0; slots.len()];
    let mut set: HashSet<Vec<Comp>> = HashSet::new();
    set.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = add_vec(slots, &x, g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    let mut v: Vec<_> = set.into_iter().collect();
    v.sort();
    v
}

fn element_order(slots: &[Slot], e: &[Comp]) -> u64 {
    slots
        .iter()
        .zip(e)
        .fold(1, |acc, (s, &c)| acc.lcm(&comp_order(s.kind, c)))
}

/// Torsion subgroup of the Mordell-Weil group, found as the largest group of
/// component vectors whose nonzero elements have height zero: their local
/// contributions add up to `2 chi`, and they meet a non-identity component of
/// every additive fibre.
pub fn torsion_group(s: &SurfaceData) -> Result<TorsionGroup> {
    if s.chi <= 0 {
        return Err(Error::Unsupported("torsion of a product fibration is not finite".into()));
    }
    let slots: Vec<Slot> = s
        .geometric_fibers()
        .into_iter()
        .filter(|g| g.kind.component_group_order() > 1 || g.kind.is_additive())
        .map(|g| Slot { label: g.label, kind: g.kind })
        .collect();
    if slots.iter().any(|x| x.kind.is_additive() && x.kind.component_group_order() == 1) {
        return Ok(TorsionGroup::trivial(slots));
    }
    let target = int(2 * s.chi);
    let mut candidates = Vec::new();
    let mut cur = Vec::with_capacity(slots.len());
    search(&slots, 0, &int(0), &target, &mut cur, &mut candidates)?;
    let cset: HashSet<Vec<Comp>> = candidates.iter().cloned().collect();
    let zero = vec![0; slots.len()];
    let valid = |g: &Vec<Vec<Comp>>| g.iter().all(|e| *e == zero || cset.contains(e));

    let cyclic: Vec<&Vec<Comp>> = candidates
        .iter()
        .filter(|c| valid(&span(&slots, &[*c])))
        .collect();
    let mut best: Vec<Vec<Comp>> = vec![zero.clone()];
    for (i, a) in cyclic.iter().enumerate() {
        let g = span(&slots, &[*a]);
        if g.len() > best.len() {
            best = g;
        }
        for b in cyclic.iter().skip(i + 1) {
            let g = span(&slots, &[*a, *b]);
            if g.len() > best.len() && valid(&g) {
                best = g;
            }
        }
    }
    Ok(structure(slots, &best))
}

fn search(
    slots: &[Slot],
    i: usize,
    acc: &Rational,
    target: &Rational,
    cur: &mut Vec<Comp>,
    out: &mut Vec<Vec<Comp>>,
) -> Result<()> {
    if acc > target {
        return Ok(());
    }
    if i == slots.len() {
        if acc == target {
            out.push(cur.clone());
        }
        return Ok(());
    }
    let kind = slots[i].kind;
    let start = u32::from(kind.is_additive());
    for c in start..kind.component_group_order() {
        let next = acc + contribution(kind, c)?;
        cur.push(c);
        search(slots, i + 1, &next, target, cur, out)?;
        cur.pop();
    }
    Ok(())
}

/// Picks generators in invariant-factor form for a finite subgroup.
fn structure(slots: Vec<Slot>, group: &[Vec<Comp>]) -> TorsionGroup {
    let total = group.len() as u64;
    if total == 1 {
        return TorsionGroup::trivial(slots);
    }
    let mut sorted: Vec<&Vec<Comp>> = group.iter().collect();
    sorted.sort();
    let n = sorted.iter().map(|e| element_order(&slots, e)).max().unwrap();
    let g1 = sorted
        .iter()
        .find(|e| element_order(&slots, e) == n)
        .map(|e| (*e).clone())
        .unwrap();
    if n == total {
        return TorsionGroup { slots, factors: vec![n], generators: vec![g1] };
    }
    let m = total / n;
    let g2 = sorted
        .iter()
        .find(|e| element_order(&slots, e) == m && span(&slots, &[&g1, e]).len() as u64 == total)
        .map(|e| (*e).clone())
        .expect("two-generated torsion");
    TorsionGroup { slots, factors: vec![n, m], generators: vec![g1, g2] }
}

/// Subgroup of a torsion group given by generators in component form.
pub fn subgroup_structure(t: &TorsionGroup, gens: &[Vec<Comp>]) -> TorsionGroup {
    let refs: Vec<&Vec<Comp>> = gens.iter().collect();
    let g = span(&t.slots, &refs);
    structure(t.slots.clone(), &g)
}

/// Witness that the group splits at an `I_n` fibre.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    /// Rotates the fibre with the same order as the element itself.
    pub rotating: Vec<Comp>,
    /// Meets the identity component of the fibre.
    pub fixing: Vec<Comp>,
}

/// Searches for `P, P'` generating the group such that `P` rotates the
/// components of the fibre with order `|P|` and `P'` meets the identity
/// component.
pub fn check_splitting_at_fiber(g: &TorsionGroup, label: &str) -> Result<Option<SplitWitness>> {
    let i = g
        .slot_index(label)
        .ok_or_else(|| Error::invalid(format!("no reducible fibre labelled {label}")))?;
    let kind = g.slots[i].kind;
    if kind.is_additive() {
        return Err(Error::invalid(format!("fibre {label} of type {kind} is not semistable")));
    }
    let elems: Vec<Vec<Comp>> = g.elements().into_iter().map(|(_, e)| e).collect();
    let total = elems.len();
    let rotating: Vec<&Vec<Comp>> = elems
        .iter()
        .filter(|e| comp_order(kind, e[i]) == element_order(&g.slots, e))
        .collect();
    let fixing: Vec<&Vec<Comp>> = elems.iter().filter(|e| e[i] == 0).collect();
    for p in &rotating {
        for q in &fixing {
            if span(&g.slots, &[*p, *q]).len() == total {
                return Ok(Some(SplitWitness { rotating: (*p).clone(), fixing: (*q).clone() }));
            }
        }
    }
    Ok(None)
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Sufficient condition for splitting at every semistable fibre:
/// `|v_p(N) - v_p(N')| <= 1` for all primes `p`.
pub fn check_splitting_valuation(n: u64, n_prime: u64) -> bool {
    let mut m = n.max(n_prime);
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            if valuation(n, p).abs_diff(valuation(n_prime, p)) > 1 {
                return false;
            }
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    true
}
