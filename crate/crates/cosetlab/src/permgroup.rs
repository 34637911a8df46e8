//! Permutation groups over the coset space: stabilizer chains, orbits,
//! rank, two-point stabilizers, normal closures, and the first group
//! axiom (normal closure of the subgroup is the whole group).
//!
//! Points are 0-based. Products compose left to right: `x^(p*q) = (x^p)^q`,
//! matching the left-to-right tracing of words through coset tables.

use crate::low_index::SubgroupRecord;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("images do not form a permutation")]
    NotBijective,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("the two stabilizer points must be distinct")]
    EqualPoints,
    #[error("operation requires a transitive group")]
    NotTransitive,
    #[error("given generators are not contained in the ambient group")]
    NotSubgroup,
}

/// A permutation of `{0, .., n-1}`, stored by its image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(PermError::NotBijective);
            }
            seen[i] = true;
        }
        Ok(Permutation { images: images.into_iter().map(|i| i as u32).collect() })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i as u32 == im)
    }

    /// `self * other`: apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im as usize] = i as u32;
        }
        Permutation { images }
    }

    /// Cycles of length >= 1, each starting at its smallest point, sorted by
    /// that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.image(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.image(p);
            }
            out.push(cycle);
        }
        out
    }

    /// Multiplicative order: lcm of cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    /// Sign: +1 for even permutations, -1 for odd.
    pub fn sign(&self) -> i8 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with 1-based points, e.g. `(1 2)(4 5 6)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<Vec<usize>> =
            self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Whether two permutations commute.
pub fn commutes(x: &Permutation, y: &Permutation) -> bool {
    debug_assert_eq!(x.degree(), y.degree());
    (0..x.degree()).all(|p| y.image(x.image(p)) == x.image(y.image(p)))
}

struct ChainLevel {
    base: usize,
    /// Strong generators first stored at this level. The group of the
    /// level is generated by the union of `gens` over this level and all
    /// deeper ones (deeper generators fix this base but still act on the
    /// rest of the orbit).
    gens: Vec<Permutation>,
    /// `transversal[p]` maps the base point to `p`; `None` outside the orbit.
    transversal: Vec<Option<Permutation>>,
    /// Orbit points in BFS discovery order.
    orbit: Vec<usize>,
}

impl ChainLevel {
    fn new(degree: usize, base: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base] = Some(Permutation::identity(degree));
        ChainLevel { base, gens: Vec::new(), transversal, orbit: vec![base] }
    }
}

/// A permutation group with a stabilizer chain for membership and order.
///
/// The chain's base points run through the hint points first (used for
/// point and two-point stabilizers), then the remaining points in natural
/// order.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<ChainLevel>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(degree {}, order {}, {} gens)", self.degree, self.order(), self.generators.len())
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Self {
        Self::with_base_hint(degree, generators, &[])
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new())
    }

    /// Build with a prescribed prefix of the base point sequence.
    pub fn with_base_hint(degree: usize, generators: Vec<Permutation>, hint: &[usize]) -> Self {
        for g in &generators {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
        }
        let mut base_order: Vec<usize> = hint.to_vec();
        for p in 0..degree {
            if !base_order.contains(&p) {
                base_order.push(p);
            }
        }
        let mut gens: Vec<Permutation> = Vec::new();
        for g in generators {
            if !g.is_identity() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        let mut group = PermGroup { degree, generators: gens.clone(), levels: Vec::new() };
        group.schreier_sims(&base_order, gens);
        group
    }

    /// Deterministic incremental Schreier-Sims: keeps adding sifted residues
    /// of Schreier generators until every level's Schreier generators sift
    /// to the identity through the levels below it.
    fn schreier_sims(&mut self, base_order: &[usize], initial: Vec<Permutation>) {
        if initial.is_empty() || self.degree == 0 {
            return;
        }
        self.levels.push(ChainLevel::new(self.degree, base_order[0]));
        self.levels[0].gens = initial;
        self.recompute_orbit(0);
        let mut k: isize = 0;
        while k >= 0 {
            match self.find_unresolved(k as usize) {
                Some((j, residue)) => {
                    if j == self.levels.len() {
                        self.levels.push(ChainLevel::new(self.degree, base_order[j]));
                    }
                    self.levels[j].gens.push(residue);
                    // the new generator lies in every level group above j
                    for i in (0..=j).rev() {
                        self.recompute_orbit(i);
                    }
                    k = j as isize;
                }
                None => k -= 1,
            }
        }
    }

    /// Generators of the level group: everything stored at this level or
    /// deeper.
    fn level_generators(&self, level: usize) -> Vec<Permutation> {
        self.levels[level..].iter().flat_map(|l| l.gens.iter().cloned()).collect()
    }

    /// Rebuild the orbit and transversal of one level from its full
    /// generator set.
    fn recompute_orbit(&mut self, level: usize) {
        let gens = self.level_generators(level);
        let degree = self.degree;
        let lvl = &mut self.levels[level];
        lvl.transversal = vec![None; degree];
        lvl.transversal[lvl.base] = Some(Permutation::identity(degree));
        lvl.orbit = vec![lvl.base];
        let mut qi = 0;
        while qi < lvl.orbit.len() {
            let p = lvl.orbit[qi];
            qi += 1;
            let t_p = lvl.transversal[p].clone().unwrap();
            for g in &gens {
                let q = g.image(p);
                if lvl.transversal[q].is_none() {
                    lvl.transversal[q] = Some(t_p.then(g));
                    lvl.orbit.push(q);
                }
            }
        }
    }

    /// First Schreier generator of `level` that fails to sift to the
    /// identity below; returns the level where the residue stops.
    fn find_unresolved(&self, level: usize) -> Option<(usize, Permutation)> {
        let gens = self.level_generators(level);
        let lvl = &self.levels[level];
        for &p in &lvl.orbit {
            let t_p = lvl.transversal[p].as_ref().unwrap();
            for g in &gens {
                let q = g.image(p);
                let t_q = lvl.transversal[q].as_ref().unwrap();
                let s = t_p.then(g).then(&t_q.inverse());
                if s.is_identity() {
                    continue;
                }
                let (stop, residue) = self.sift_from(level + 1, s);
                if !residue.is_identity() {
                    return Some((stop, residue));
                }
            }
        }
        None
    }

    /// Sift through levels `from..`, returning the stop level and residue.
    fn sift_from(&self, from: usize, g: Permutation) -> (usize, Permutation) {
        let mut h = g;
        let mut i = from;
        while i < self.levels.len() {
            if h.is_identity() {
                return (i, h);
            }
            let lvl = &self.levels[i];
            let p = h.image(lvl.base);
            match &lvl.transversal[p] {
                None => return (i, h),
                Some(t) => h = h.then(&t.inverse()),
            }
            i += 1;
        }
        (self.levels.len(), h)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (_, residue) = self.sift_from(0, g.clone());
        residue.is_identity()
    }

    /// All elements, in the deterministic chain order. Guarded by callers;
    /// panics if the order exceeds `cap`.
    pub fn elements_capped(&self, cap: usize) -> Vec<Permutation> {
        assert!(
            self.order() <= cap as u128,
            "element enumeration capped at {cap} (order {})",
            self.order()
        );
        let mut out = vec![Permutation::identity(self.degree)];
        for lvl in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * lvl.orbit.len());
            for &p in &lvl.orbit {
                let t = lvl.transversal[p].as_ref().unwrap();
                for h in &out {
                    next.push(h.then(t));
                }
            }
            out = next;
        }
        out
    }

    /// Orbit of one point, sorted.
    pub fn orbit_of(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut orbit = vec![point];
        let mut qi = 0;
        while qi < orbit.len() {
            let p = orbit[qi];
            qi += 1;
            for g in &self.generators {
                let q = g.image(p);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
        }
        orbit.sort_unstable();
        orbit
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit_of(0).len() == self.degree
    }

    /// Number of orbits on ordered pairs (diagonal included).
    pub fn rank(&self) -> Result<usize, PermError> {
        if !self.is_transitive() {
            return Err(PermError::NotTransitive);
        }
        let d = self.degree;
        if d == 0 {
            return Ok(0);
        }
        let mut uf: Vec<usize> = (0..d * d).collect();
        fn find(uf: &mut Vec<usize>, mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for g in &self.generators {
            for a in 0..d {
                for b in 0..d {
                    let x = find(&mut uf, a * d + b);
                    let y = find(&mut uf, g.image(a) * d + g.image(b));
                    if x != y {
                        uf[x] = y;
                    }
                }
            }
        }
        let mut roots = BTreeSet::new();
        for x in 0..d * d {
            let r = find(&mut uf, x);
            roots.insert(r);
        }
        Ok(roots.len())
    }

    /// The subgroup fixing `point`, with full chain support.
    pub fn point_stabilizer(&self, point: usize) -> PermGroup {
        let chain = PermGroup::with_base_hint(self.degree, self.generators.clone(), &[point]);
        let gens = chain.strong_generators_fixing(1);
        PermGroup::new(self.degree, gens)
    }

    /// The subgroup fixing both points pointwise.
    pub fn two_point_stabilizer(&self, alpha: usize, beta: usize) -> Result<PermGroup, PermError> {
        if alpha == beta {
            return Err(PermError::EqualPoints);
        }
        let chain =
            PermGroup::with_base_hint(self.degree, self.generators.clone(), &[alpha, beta]);
        let gens = chain.strong_generators_fixing(2);
        Ok(PermGroup::new(self.degree, gens))
    }

    /// Strong generators lying at chain depth >= `depth` (they fix the
    /// first `depth` base points).
    fn strong_generators_fixing(&self, depth: usize) -> Vec<Permutation> {
        let mut gens = Vec::new();
        for lvl in self.levels.iter().skip(depth) {
            for g in &lvl.gens {
                if !gens.contains(g) {
                    gens.push(g.clone());
                }
            }
        }
        gens
    }

    /// Subgroup equality as element sets: equal orders plus two-way
    /// generator membership.
    pub fn subgroup_eq(&self, other: &PermGroup) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    /// Smallest normal subgroup of `self` containing `sub`.
    pub fn normal_closure(&self, sub: &PermGroup) -> Result<PermGroup, PermError> {
        if !sub.is_subgroup_of(self) {
            return Err(PermError::NotSubgroup);
        }
        let mut gens: Vec<Permutation> = sub.generators.to_vec();
        let mut closure = PermGroup::new(self.degree, gens.clone());
        let mut queue: Vec<Permutation> = gens.clone();
        while let Some(g) = queue.pop() {
            for c in &self.generators {
                let conj = c.inverse().then(&g).then(c);
                if !closure.contains(&conj) {
                    gens.push(conj.clone());
                    queue.push(conj);
                    closure = PermGroup::new(self.degree, gens.clone());
                }
            }
        }
        Ok(closure)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        (0..gens.len()).all(|i| (i + 1..gens.len()).all(|j| commutes(&gens[i], &gens[j])))
    }

    /// A finite abelian group is cyclic iff its exponent equals its order;
    /// for abelian groups the exponent is the lcm of the generator orders.
    pub fn is_cyclic(&self) -> bool {
        if self.is_trivial() {
            return true;
        }
        if !self.is_abelian() {
            return false;
        }
        let exponent = self.generators.iter().fold(1u128, |acc, g| {
            let o = g.order() as u128;
            acc / gcd_u128(acc, o) * o
        });
        exponent == self.order()
    }

    /// Derived subgroup: normal closure of the generator commutators.
    pub fn derived_subgroup(&self) -> PermGroup {
        let mut comms = Vec::new();
        for (i, x) in self.generators.iter().enumerate() {
            for y in self.generators.iter().skip(i + 1) {
                let c = x.inverse().then(&y.inverse()).then(x).then(y);
                if !c.is_identity() && !comms.contains(&c) {
                    comms.push(c);
                }
            }
        }
        let sub = PermGroup::new(self.degree, comms);
        self.normal_closure(&sub).expect("commutators lie in the group")
    }
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd_u128(b, a % b)
    }
}

/// Covering type of a subgroup record, as printed in the `ty` column:
/// cyclic action, regular non-cyclic action, or irregular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoveringType {
    Cyclic,
    Regular,
    Irregular,
}

impl fmt::Display for CoveringType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoveringType::Cyclic => "cyc",
            CoveringType::Regular => "reg",
            CoveringType::Irregular => "irr",
        })
    }
}

/// Classify the coset action: `cyc` when the permutation image is cyclic
/// (this takes precedence), `reg` when the action is regular but the image
/// not cyclic, `irr` otherwise.
pub fn covering_type(record: &SubgroupRecord) -> CoveringType {
    let group = PermGroup::new(record.index, record.table.permutation_rep());
    if group.is_cyclic() {
        CoveringType::Cyclic
    } else if group.order() == record.index as u128 {
        CoveringType::Regular
    } else {
        CoveringType::Irregular
    }
}

/// Axiom (i): the normal closure of the subgroup in the ambient group is
/// the whole group. Evaluated inside the permutation image `P`, where the
/// point-0 stabilizer is the image of the subgroup: `P` is the ambient
/// group modulo the core of the subgroup, so closure-equals-`P` in `P` is
/// equivalent to closure-equals-`G` in `G`.
pub fn axiom_i(record: &SubgroupRecord) -> bool {
    let group = PermGroup::new(record.index, record.table.permutation_rep());
    let stab = group.point_stabilizer(0);
    let closure = group.normal_closure(&stab).expect("stabilizer is a subgroup");
    closure.order() == group.order()
}

/// Recognized family for the structure note.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyGuess {
    Cyclic,
    Dihedral,
    Alternating(usize),
    Symmetric(usize),
    Psl2(usize),
    Unrecognized,
}

/// Order plus structural heuristics for a permutation group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureNote {
    pub order: u128,
    /// Invariant factors of the abelianization, each dividing the next.
    pub abelian_invariants: Vec<u64>,
    /// Simplicity, tested by exhausting normal closures of elements for
    /// orders up to 2000; `None` beyond that.
    pub simple: Option<bool>,
    pub family: FamilyGuess,
}

impl StructureNote {
    /// Short label for tables: family name when recognized, else `-`.
    pub fn label(&self) -> String {
        match &self.family {
            FamilyGuess::Cyclic => format!("Z{}", self.order),
            FamilyGuess::Dihedral => format!("D{}", self.order / 2),
            FamilyGuess::Alternating(n) => format!("A{n}"),
            FamilyGuess::Symmetric(n) => format!("S{n}"),
            FamilyGuess::Psl2(q) => format!("PSL(2,{q})"),
            FamilyGuess::Unrecognized => "-".to_string(),
        }
    }
}

const ELEMENT_ENUM_CAP: usize = 20_000;
const SIMPLICITY_CAP: u128 = 2_000;

/// Order, abelianization, simplicity, and a named-family guess. Family
/// guesses are limited to cyclic, dihedral, alternating/symmetric in their
/// natural degree, and PSL(2,7)/PSL(2,8) by order.
pub fn structure_describe(group: &PermGroup) -> StructureNote {
    let order = group.order();
    let degree = group.degree();
    let abelian_invariants = abelianization_invariants(group);
    let family = if group.is_cyclic() {
        FamilyGuess::Cyclic
    } else if order == 168 {
        FamilyGuess::Psl2(7)
    } else if order == 504 {
        FamilyGuess::Psl2(8)
    } else if (4..=16).contains(&degree) && order == factorial_half(degree) && all_even(group) {
        FamilyGuess::Alternating(degree)
    } else if (3..=16).contains(&degree) && Some(order) == factorial(degree) {
        FamilyGuess::Symmetric(degree)
    } else if order >= 6 && order <= 2 * ELEMENT_ENUM_CAP as u128 && is_dihedral(group) {
        FamilyGuess::Dihedral
    } else {
        FamilyGuess::Unrecognized
    };
    let simple = if order <= SIMPLICITY_CAP { Some(is_simple(group)) } else { None };
    StructureNote { order, abelian_invariants, simple, family }
}

fn factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

fn factorial_half(n: usize) -> u128 {
    factorial(n).map(|f| f / 2).unwrap_or(0)
}

fn all_even(group: &PermGroup) -> bool {
    group.generators().iter().all(|g| g.sign() == 1)
}

fn is_dihedral(group: &PermGroup) -> bool {
    let order = group.order();
    if order % 2 != 0 || order > 2 * ELEMENT_ENUM_CAP as u128 {
        return false;
    }
    let m = (order / 2) as u64;
    let elements = group.elements_capped(ELEMENT_ENUM_CAP);
    let Some(rot) = elements.iter().find(|e| e.order() == m) else {
        return false;
    };
    // powers of the rotation
    let mut cyclic = Vec::new();
    let mut cur = Permutation::identity(group.degree());
    for _ in 0..m {
        cyclic.push(cur.clone());
        cur = cur.then(rot);
    }
    let rot_inv = rot.inverse();
    elements.iter().filter(|e| !cyclic.contains(e)).all(|s| {
        s.then(s).is_identity() && s.inverse().then(rot).then(s) == rot_inv
    })
}

fn is_simple(group: &PermGroup) -> bool {
    let order = group.order();
    if order == 1 {
        return false;
    }
    let elements = group.elements_capped(SIMPLICITY_CAP as usize);
    for g in &elements {
        if g.is_identity() {
            continue;
        }
        let sub = PermGroup::new(group.degree(), vec![g.clone()]);
        let closure = group.normal_closure(&sub).expect("element lies in the group");
        if closure.order() < order {
            return false;
        }
    }
    true
}

/// Invariant factors of `P/P'`, smallest first, each dividing the next.
/// The quotient is enumerated as cosets of the derived subgroup and its
/// isomorphism type recovered from element-order counts.
pub fn abelianization_invariants(group: &PermGroup) -> Vec<u64> {
    let derived = group.derived_subgroup();
    let quotient_order = (group.order() / derived.order()) as u64;
    if quotient_order == 1 {
        return Vec::new();
    }
    // coset representatives of the derived subgroup, by BFS over generators
    let degree = group.degree();
    let mut reps: Vec<Permutation> = vec![Permutation::identity(degree)];
    let mut qi = 0;
    while qi < reps.len() {
        let r = reps[qi].clone();
        qi += 1;
        for g in group.generators() {
            let cand = r.then(g);
            let is_new = reps.iter().all(|s| !derived.contains(&cand.then(&s.inverse())));
            if is_new {
                reps.push(cand);
            }
        }
    }
    assert_eq!(reps.len() as u64, quotient_order, "coset count mismatch");
    // order of each coset in the quotient
    let coset_order = |r: &Permutation| -> u64 {
        let mut k = 1u64;
        let mut acc = r.clone();
        while !derived.contains(&acc) {
            acc = acc.then(r);
            k += 1;
        }
        k
    };
    let orders: Vec<u64> = reps.iter().map(coset_order).collect();
    invariants_from_order_counts(quotient_order, &orders)
}

/// Recover the invariant factors of a finite abelian group from the
/// multiset of its element orders.
fn invariants_from_order_counts(order: u64, element_orders: &[u64]) -> Vec<u64> {
    // partition per prime: lambda(p) with sum = v_p(order)
    let mut partitions: Vec<(u64, Vec<u32>)> = Vec::new();
    let mut rest = order;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            partitions.push((p, partition_for_prime(p, e, element_orders)));
        }
        p += 1;
    }
    if rest > 1 {
        let mut e = 0;
        let mut o = order;
        while o % rest == 0 {
            o /= rest;
            e += 1;
        }
        partitions.push((rest, partition_for_prime(rest, e, element_orders)));
    }
    // combine: invariant factor j (from largest) multiplies p^{lambda_j(p)}
    let max_len = partitions.iter().map(|(_, l)| l.len()).max().unwrap_or(0);
    let mut factors = Vec::new();
    for j in 0..max_len {
        let mut f = 1u64;
        for (p, lambda) in &partitions {
            if j < lambda.len() {
                f *= p.pow(lambda[j]);
            }
        }
        factors.push(f);
    }
    factors.reverse(); // smallest first, each dividing the next
    factors
}

/// Cyclic decomposition exponents (descending) of the p-part, from counts
/// of elements whose order divides p^k.
fn partition_for_prime(p: u64, total_exp: u32, element_orders: &[u64]) -> Vec<u32> {
    // s_k = log_p #{x : x^(p^k) = 1} = sum_i min(lambda_i, k)
    let mut s = vec![0u32];
    for k in 1..=total_exp {
        let pk = p.pow(k);
        let count = element_orders.iter().filter(|&&o| pk % o == 0).count() as u64;
        let mut log = 0u32;
        let mut c = count;
        while c > 1 {
            debug_assert_eq!(c % p, 0, "element-order counts must be p-powers");
            c /= p;
            log += 1;
        }
        s.push(log);
    }
    // m_k = s_k - s_{k-1} counts parts of size >= k; conjugate to get lambda
    let mut lambda = Vec::new();
    for k in 1..=total_exp as usize {
        let m_k = s[k] - s[k - 1];
        // m_k parts have size >= k: extend existing parts, create new ones
        while lambda.len() < m_k as usize {
            lambda.push(0u32);
        }
        for part in lambda.iter_mut().take(m_k as usize) {
            *part = k as u32;
        }
    }
    lambda.sort_unstable_by(|a, b| b.cmp(a));
    lambda
}
