//! Todd-Coxeter coset enumeration and complete coset tables.
//!
//! The enumerator is HLT-style: relators are scanned from every live coset,
//! gaps are filled with fresh coset definitions, and scan mismatches trigger
//! coincidence processing (union-find merging). Completed tables are
//! compacted and standardized, renumbering cosets breadth-first from the
//! subgroup coset so that equal subgroups always yield byte-identical
//! tables, and the Schreier representative of each coset is the
//! shortest-lex word reaching it.
//!
//! Cosets are 0-based here and throughout the crate; coset 0 is the
//! subgroup itself. Human-facing output (reports, figures in the tables)
//! labels cosets 1-based.

use crate::permgroup::Permutation;
use crate::presentations::{Presentation, SubgroupSpec, Word};
use thiserror::Error;

const UNDEF: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CosetError {
    /// Live cosets exceeded the cap before the table closed; the subgroup
    /// index may be infinite or the limit too small.
    #[error("coset enumeration overflow: {live} live cosets exceed the limit of {max_cosets}")]
    Overflow { live: usize, max_cosets: usize },
}

/// Default live-coset cap; every instance in the analysis pipeline closes
/// far below this.
pub const DEFAULT_MAX_COSETS: usize = 2_000_000;

/// A complete, standardized coset table for a finite-index subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    ngens: usize,
    index: usize,
    /// Row-major action: entry at `coset * 2*ngens + col`, where column
    /// `2k` is generator `k+1` and column `2k+1` its inverse.
    action: Vec<u32>,
    reps: Vec<Word>,
}

pub(crate) fn col_of(letter: i32) -> usize {
    if letter > 0 {
        2 * (letter as usize - 1)
    } else {
        2 * ((-letter) as usize - 1) + 1
    }
}

pub(crate) fn letter_of(col: usize) -> i32 {
    let g = (col / 2 + 1) as i32;
    if col % 2 == 0 {
        g
    } else {
        -g
    }
}

impl CosetTable {
    pub(crate) fn from_raw(ngens: usize, index: usize, action: Vec<u32>, reps: Vec<Word>) -> Self {
        debug_assert_eq!(action.len(), index * 2 * ngens);
        debug_assert_eq!(reps.len(), index);
        CosetTable { ngens, index, action, reps }
    }

    /// Number of cosets `d`.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn generator_count(&self) -> usize {
        self.ngens
    }

    /// Image of a coset under one signed generator letter.
    pub fn apply(&self, coset: usize, letter: i32) -> usize {
        self.action[coset * 2 * self.ngens + col_of(letter)] as usize
    }

    /// Image of a coset under a word, read left to right.
    pub fn apply_word(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.apply(c, l))
    }

    /// Coset of the subgroup times `w`: the image of coset 0 under `w`.
    pub fn coset_of(&self, w: &Word) -> usize {
        self.apply_word(0, w)
    }

    /// Shortest-lex Schreier representative of a coset (`rep(0)` is empty).
    pub fn schreier_rep(&self, coset: usize) -> &Word {
        &self.reps[coset]
    }

    pub fn schreier_reps(&self) -> &[Word] {
        &self.reps
    }

    /// One permutation per generator: the action on cosets.
    pub fn permutation_rep(&self) -> Vec<Permutation> {
        (1..=self.ngens)
            .map(|g| {
                Permutation::from_images(
                    (0..self.index).map(|c| self.apply(c, g as i32)).collect(),
                )
                .expect("complete coset table columns are bijections")
            })
            .collect()
    }

    /// Flat standardized form, used as a canonical value for comparisons.
    #[cfg(test)]
    pub(crate) fn flat(&self) -> &[u32] {
        &self.action
    }

    /// Schreier generators of the subgroup: `rep(i) * g * rep(i^g)^-1`,
    /// deduplicated and sorted, identity omitted.
    pub fn schreier_generators(&self) -> SubgroupSpec {
        let mut set = std::collections::BTreeSet::new();
        for i in 0..self.index {
            for g in 1..=self.ngens as i32 {
                let j = self.apply(i, g);
                let w = self.reps[i]
                    .multiply(&Word::generator(g))
                    .multiply(&self.reps[j].inverse());
                if !w.is_identity() {
                    set.insert(w);
                }
            }
        }
        let mut gens: Vec<Word> = set.into_iter().collect();
        gens.sort_by_key(|w| (w.len(), w.letters().to_vec()));
        SubgroupSpec::new(gens)
    }

    /// Check every table invariant against a presentation and subgroup spec.
    /// Used by tests and debug assertions.
    pub fn validate(&self, pres: &Presentation, sub: &SubgroupSpec) -> Result<(), String> {
        let d = self.index;
        let ncols = 2 * self.ngens;
        if pres.generator_count() != self.ngens {
            return Err("generator count mismatch".into());
        }
        // columns are mutually inverse bijections
        for c in 0..ncols {
            let mut seen = vec![false; d];
            for i in 0..d {
                let t = self.action[i * ncols + c] as usize;
                if t >= d {
                    return Err(format!("entry out of range at ({i},{c})"));
                }
                if seen[t] {
                    return Err(format!("column {c} is not a bijection"));
                }
                seen[t] = true;
                let back = self.action[t * ncols + (c ^ 1)] as usize;
                if back != i {
                    return Err(format!("inverse column mismatch at ({i},{c})"));
                }
            }
        }
        // relators close from every coset
        for r in pres.relators() {
            for i in 0..d {
                if self.apply_word(i, r) != i {
                    return Err(format!("relator {:?} open at coset {i}", r));
                }
            }
        }
        // subgroup generators fix coset 0
        for w in &sub.generators {
            if self.coset_of(w) != 0 {
                return Err(format!("subgroup word {:?} moves coset 0", w));
            }
        }
        // Schreier property and transitivity
        for (i, rep) in self.reps.iter().enumerate() {
            if self.coset_of(rep) != i {
                return Err(format!("rep of coset {i} reaches {}", self.coset_of(rep)));
            }
        }
        Ok(())
    }
}

/// Working state of an HLT enumeration.
struct Enumerator {
    ncols: usize,
    table: Vec<u32>,
    parent: Vec<u32>, // union-find
    live: usize,
    max_cosets: usize,
}

impl Enumerator {
    fn new(ngens: usize, max_cosets: usize) -> Self {
        Enumerator {
            ncols: 2 * ngens,
            table: vec![UNDEF; 2 * ngens],
            parent: vec![0],
            live: 1,
            max_cosets,
        }
    }

    fn rows(&self) -> usize {
        self.parent.len()
    }

    fn find(&mut self, mut i: u32) -> u32 {
        while self.parent[i as usize] != i {
            let up = self.parent[self.parent[i as usize] as usize];
            self.parent[i as usize] = up;
            i = up;
        }
        i
    }

    fn is_live(&mut self, i: u32) -> bool {
        self.find(i) == i
    }

    fn get(&mut self, i: u32, c: usize) -> u32 {
        let t = self.table[i as usize * self.ncols + c];
        if t == UNDEF {
            UNDEF
        } else {
            self.find(t)
        }
    }

    fn set(&mut self, i: u32, c: usize, j: u32) {
        self.table[i as usize * self.ncols + c] = j;
    }

    /// Allocate a fresh coset as the image of `(i, c)`.
    fn define(&mut self, i: u32, c: usize) -> Result<u32, CosetError> {
        if self.live >= self.max_cosets || self.rows() >= 4 * self.max_cosets + 16 {
            return Err(CosetError::Overflow { live: self.live, max_cosets: self.max_cosets });
        }
        let n = self.rows() as u32;
        self.parent.push(n);
        self.table.extend(std::iter::repeat(UNDEF).take(self.ncols));
        self.live += 1;
        self.set(i, c, n);
        self.set(n, c ^ 1, i);
        Ok(n)
    }

    /// Record the edge `i --c--> j`, merging cosets on conflicts.
    fn deduce(&mut self, i: u32, c: usize, j: u32) {
        let ti = self.get(i, c);
        if ti != UNDEF {
            if ti != j {
                self.coincidence(ti, j);
            }
            return;
        }
        let tj = self.get(j, c ^ 1);
        if tj != UNDEF {
            if tj != i {
                self.coincidence(tj, i);
            }
            return;
        }
        self.set(i, c, j);
        self.set(j, c ^ 1, i);
    }

    /// Merge the classes of `a` and `b`, transplanting table rows.
    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue: Vec<u32> = Vec::new();
        self.merge(a, b, &mut queue);
        let mut qi = 0;
        while qi < queue.len() {
            let dead = queue[qi];
            qi += 1;
            for c in 0..self.ncols {
                let delta = self.table[dead as usize * self.ncols + c];
                if delta == UNDEF {
                    continue;
                }
                // unhook the reverse edge into the dead coset
                self.table[delta as usize * self.ncols + (c ^ 1)] = UNDEF;
                let mu = self.find(dead);
                let nu = self.find(delta);
                let tmu = self.get(mu, c);
                if tmu != UNDEF {
                    self.merge(nu, tmu, &mut queue);
                } else {
                    let tnu = self.get(nu, c ^ 1);
                    if tnu != UNDEF {
                        self.merge(mu, tnu, &mut queue);
                    } else {
                        self.set(mu, c, nu);
                        self.set(nu, c ^ 1, mu);
                    }
                }
            }
        }
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut Vec<u32>) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        let (keep, kill) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[kill as usize] = keep;
        self.live -= 1;
        queue.push(kill);
    }

    /// Scan a relator (or subgroup word) from `start`, filling every gap
    /// with new definitions. Returns Err only on overflow.
    fn scan_and_fill(&mut self, start: u32, letters: &[i32]) -> Result<(), CosetError> {
        let n = letters.len();
        if n == 0 {
            return Ok(());
        }
        loop {
            let start = self.find(start);
            let mut f = start;
            let mut i = 0;
            while i < n {
                let t = self.get(f, col_of(letters[i]));
                if t == UNDEF {
                    break;
                }
                f = t;
                i += 1;
            }
            if i == n {
                if f != start {
                    self.coincidence(f, start);
                }
                return Ok(());
            }
            let mut b = start;
            let mut j = n - 1;
            while j > i {
                let t = self.get(b, col_of(-letters[j]));
                if t == UNDEF {
                    break;
                }
                b = t;
                j -= 1;
            }
            if j == i {
                self.deduce(f, col_of(letters[i]), b);
                return Ok(());
            }
            // gap of length >= 2: define the next edge and rescan
            self.define(f, col_of(letters[i]))?;
        }
    }

    /// True when every live row is fully defined and every scan closes.
    fn closed(&mut self, relators: &[&Word], sub_words: &[&Word]) -> bool {
        for i in 0..self.rows() as u32 {
            if !self.is_live(i) {
                continue;
            }
            for c in 0..self.ncols {
                if self.get(i, c) == UNDEF {
                    return false;
                }
            }
            for r in relators {
                if self.trace(i, r.letters()) != Some(self.find(i)) {
                    return false;
                }
            }
        }
        let zero = self.find(0);
        for w in sub_words {
            if self.trace(zero, w.letters()) != Some(zero) {
                return false;
            }
        }
        true
    }

    fn trace(&mut self, start: u32, letters: &[i32]) -> Option<u32> {
        let mut c = start;
        for &l in letters {
            let t = self.get(c, col_of(l));
            if t == UNDEF {
                return None;
            }
            c = t;
        }
        Some(c)
    }
}

/// Enumerate the cosets of the subgroup generated by `sub` inside the
/// presented group, returning the complete standardized coset table.
///
/// Fails with [`CosetError::Overflow`] if more than `max_cosets` cosets are
/// live at once, which signals an infinite index or a limit set too small.
pub fn todd_coxeter(
    pres: &Presentation,
    sub: &SubgroupSpec,
    max_cosets: usize,
) -> Result<CosetTable, CosetError> {
    let max_cosets = max_cosets.max(1);
    let mut e = Enumerator::new(pres.generator_count(), max_cosets);
    let relators: Vec<&Word> = pres.relators().iter().collect();
    let sub_words: Vec<&Word> = sub.generators.iter().collect();

    loop {
        for w in &sub_words {
            let zero = e.find(0);
            e.scan_and_fill(zero, w.letters())?;
        }
        let mut a: u32 = 0;
        while (a as usize) < e.rows() {
            if e.is_live(a) {
                for r in &relators {
                    e.scan_and_fill(a, r.letters())?;
                    if !e.is_live(a) {
                        break;
                    }
                }
                if e.is_live(a) {
                    for c in 0..e.ncols {
                        if e.get(a, c) == UNDEF {
                            e.define(a, c)?;
                        }
                    }
                }
            }
            a += 1;
        }
        // Coincidence processing can add entries to rows scanned earlier,
        // so verify closure and loop again if anything is still open.
        if e.closed(&relators, &sub_words) {
            break;
        }
    }
    Ok(standardize(&mut e))
}

/// Compact and renumber a closed enumeration breadth-first from coset 0,
/// producing the canonical table and shortest-lex Schreier representatives.
fn standardize(e: &mut Enumerator) -> CosetTable {
    let ncols = e.ncols;
    let root = e.find(0);
    let mut order: Vec<u32> = vec![root];
    let mut new_of = vec![UNDEF; e.rows()];
    new_of[root as usize] = 0;
    let mut reps: Vec<Word> = vec![Word::identity()];
    let mut qi = 0;
    while qi < order.len() {
        let old = order[qi];
        let here = reps[qi].clone();
        for c in 0..ncols {
            let t = e.get(old, c);
            debug_assert_ne!(t, UNDEF, "standardize requires a closed table");
            if new_of[t as usize] == UNDEF {
                new_of[t as usize] = order.len() as u32;
                order.push(t);
                reps.push(here.multiply(&Word::generator(letter_of(c))));
            }
        }
        qi += 1;
    }
    let d = order.len();
    let mut action = vec![UNDEF; d * ncols];
    for (new, &old) in order.iter().enumerate() {
        for c in 0..ncols {
            let t = e.get(old, c);
            action[new * ncols + c] = new_of[t as usize];
        }
    }
    CosetTable::from_raw(ncols / 2, d, action, reps)
}
