//! Low-index subgroup search: all conjugacy classes of subgroups of a
//! given index in a finitely presented group, by backtracking over partial
//! coset tables.
//!
//! The search branches on the first undefined table cell in row-major
//! order and only ever numbers new cosets in order of first appearance, so
//! each subgroup's standardized table is produced exactly once. Conjugate
//! subgroups are merged afterwards through a canonical form: the minimum,
//! over all base points, of the table renumbered breadth-first from that
//! point.

use crate::coset_enum::{col_of, letter_of, CosetTable};
use crate::presentations::{Presentation, SubgroupSpec, Word};
use thiserror::Error;

const UNDEF: u32 = u32::MAX;

/// Default backtracking budget; indices up to the supported 24 on the
/// catalog groups stay far below this.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LowIndexError {
    /// The node budget ran out; `found` classes were already complete when
    /// the search stopped, so results so far are a strict subset.
    #[error("low-index search exhausted its budget of {budget} nodes at index {index} ({found} classes found before stopping)")]
    BudgetExhausted { budget: u64, index: usize, found: usize },
}

/// One conjugacy class of index-`d` subgroups.
#[derive(Debug, Clone)]
pub struct SubgroupRecord {
    pub index: usize,
    /// Standardized coset table of the class representative.
    pub table: CosetTable,
    /// Schreier generators of the representative subgroup, as words.
    pub generators: SubgroupSpec,
    /// Number of distinct subgroups in the conjugacy class.
    pub conjugates_in_class: usize,
}

/// Tunable limits for the search.
#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    pub node_budget: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { node_budget: DEFAULT_NODE_BUDGET }
    }
}

/// All subgroup conjugacy classes of index exactly `d`, sorted by
/// canonical form.
pub fn low_index_subgroups(
    pres: &Presentation,
    d: usize,
) -> Result<Vec<SubgroupRecord>, LowIndexError> {
    low_index_subgroups_with(pres, d, SearchLimits::default())
}

pub fn low_index_subgroups_with(
    pres: &Presentation,
    d: usize,
    limits: SearchLimits,
) -> Result<Vec<SubgroupRecord>, LowIndexError> {
    assert!(d >= 1, "index must be at least 1");
    let relators: Vec<Vec<i32>> = pres.relators().iter().map(|r| r.letters().to_vec()).collect();
    let mut search = Search {
        ncols: 2 * pres.generator_count(),
        relators,
        target: d,
        nodes_left: limits.node_budget,
        complete: Vec::new(),
    };
    let root = PartialTable { cells: vec![UNDEF; search.ncols], n: 1 };
    let exhausted = search.explore(root).is_err();

    // group complete tables into conjugacy classes by canonical form
    let mut classes: Vec<(Vec<u32>, Vec<u32>, usize)> = Vec::new(); // (canonical, table, class size)
    for cells in &search.complete {
        let (canon, same_as_zero) = canonical_form(cells, d, search.ncols);
        let class_size = d / same_as_zero;
        match classes.binary_search_by(|c| c.0.cmp(&canon)) {
            Ok(_) => {}
            Err(pos) => classes.insert(pos, (canon, cells.clone(), class_size)),
        }
    }
    if exhausted {
        return Err(LowIndexError::BudgetExhausted {
            budget: limits.node_budget,
            index: d,
            found: classes.len(),
        });
    }
    let records = classes
        .into_iter()
        .map(|(_, cells, class_size)| {
            let table = table_from_cells(&cells, d, search.ncols);
            let generators = table.schreier_generators();
            SubgroupRecord { index: d, table, generators, conjugates_in_class: class_size }
        })
        .collect();
    Ok(records)
}

/// Class counts for indices `1..=d_max`.
pub fn eta_sequence(pres: &Presentation, d_max: usize) -> Result<Vec<usize>, LowIndexError> {
    eta_sequence_with(pres, d_max, SearchLimits::default())
}

pub fn eta_sequence_with(
    pres: &Presentation,
    d_max: usize,
    limits: SearchLimits,
) -> Result<Vec<usize>, LowIndexError> {
    (1..=d_max)
        .map(|d| low_index_subgroups_with(pres, d, limits).map(|r| r.len()))
        .collect()
}

#[derive(Clone)]
struct PartialTable {
    cells: Vec<u32>,
    n: usize,
}

impl PartialTable {
    fn get(&self, ncols: usize, coset: u32, c: usize) -> u32 {
        self.cells[coset as usize * ncols + c]
    }

    fn set(&mut self, ncols: usize, coset: u32, c: usize, to: u32) {
        self.cells[coset as usize * ncols + c] = to;
    }
}

struct Search {
    ncols: usize,
    relators: Vec<Vec<i32>>,
    target: usize,
    nodes_left: u64,
    complete: Vec<Vec<u32>>,
}

impl Search {
    /// Depth-first over branch choices at the first undefined cell.
    /// Err(()) signals budget exhaustion.
    fn explore(&mut self, t: PartialTable) -> Result<(), ()> {
        let Some((coset, c)) = self.first_undefined(&t) else {
            if t.n == self.target {
                self.complete.push(t.cells);
            }
            return Ok(());
        };
        // existing cosets whose inverse slot is free
        for j in 0..t.n as u32 {
            if t.get(self.ncols, j, c ^ 1) == UNDEF {
                self.try_branch(&t, coset, c, j, false)?;
            }
        }
        if t.n < self.target {
            self.try_branch(&t, coset, c, t.n as u32, true)?;
        }
        Ok(())
    }

    fn try_branch(
        &mut self,
        t: &PartialTable,
        coset: u32,
        c: usize,
        j: u32,
        fresh: bool,
    ) -> Result<(), ()> {
        if self.nodes_left == 0 {
            return Err(());
        }
        self.nodes_left -= 1;
        let mut t2 = t.clone();
        if fresh {
            t2.cells.extend(std::iter::repeat(UNDEF).take(self.ncols));
            t2.n += 1;
        }
        t2.set(self.ncols, coset, c, j);
        t2.set(self.ncols, j, c ^ 1, coset);
        if self.propagate(&mut t2) && first_in_class(&t2, self.ncols) {
            self.explore(t2)?;
        }
        Ok(())
    }

    fn first_undefined(&self, t: &PartialTable) -> Option<(u32, usize)> {
        t.cells
            .iter()
            .position(|&v| v == UNDEF)
            .map(|pos| ((pos / self.ncols) as u32, pos % self.ncols))
    }

    /// Run relator scans to a fixpoint, forcing single-gap deductions.
    /// Returns false when a scan closes inconsistently.
    fn propagate(&mut self, t: &mut PartialTable) -> bool {
        let mut changed = true;
        while changed {
            changed = false;
            for ri in 0..self.relators.len() {
                for start in 0..t.n as u32 {
                    match self.scan(t, ri, start) {
                        Scan::Dead => return false,
                        Scan::Deduce(f, letter, b) => {
                            let c = col_of(letter);
                            let tf = t.get(self.ncols, f, c);
                            let tb = t.get(self.ncols, b, c ^ 1);
                            if (tf != UNDEF && tf != b) || (tb != UNDEF && tb != f) {
                                return false;
                            }
                            if tf == UNDEF {
                                t.set(self.ncols, f, c, b);
                                t.set(self.ncols, b, c ^ 1, f);
                                changed = true;
                            }
                        }
                        Scan::Fine => {}
                    }
                }
            }
        }
        true
    }

    fn scan(&self, t: &PartialTable, ri: usize, start: u32) -> Scan {
        let rel = &self.relators[ri];
        let n = rel.len();
        let mut f = start;
        let mut i = 0;
        while i < n {
            let to = t.get(self.ncols, f, col_of(rel[i]));
            if to == UNDEF {
                break;
            }
            f = to;
            i += 1;
        }
        if i == n {
            return if f == start { Scan::Fine } else { Scan::Dead };
        }
        let mut b = start;
        let mut j = n - 1;
        while j > i {
            let to = t.get(self.ncols, b, col_of(-rel[j]));
            if to == UNDEF {
                break;
            }
            b = to;
            j -= 1;
        }
        if j == i {
            Scan::Deduce(f, rel[i], b)
        } else {
            Scan::Fine
        }
    }
}

enum Scan {
    Fine,
    Dead,
    Deduce(u32, i32, u32),
}

/// Conjugacy pruning: reject a partial table when renumbering it from some
/// other base point is already lexicographically smaller on a fully defined
/// prefix. Defined cells never change along a branch, so such a table can
/// never complete to the minimal (canonical) representative of its class;
/// the minimal representative itself is never rejected because every one
/// of its complete rebases compares greater or equal.
fn first_in_class(t: &PartialTable, ncols: usize) -> bool {
    let n = t.n;
    let mut old_of = vec![UNDEF; n];
    let mut new_of = vec![UNDEF; n];
    'beta: for beta in 1..n as u32 {
        for x in old_of.iter_mut() {
            *x = UNDEF;
        }
        for x in new_of.iter_mut() {
            *x = UNDEF;
        }
        old_of[0] = beta;
        new_of[beta as usize] = 0;
        let mut next_new: u32 = 1;
        for new_row in 0..n as u32 {
            let old_row = old_of[new_row as usize];
            if old_row == UNDEF {
                // the rebased table ran out of discovered cosets
                continue 'beta;
            }
            for c in 0..ncols {
                let orig = t.get(ncols, new_row, c);
                let via = t.get(ncols, old_row, c);
                if via == UNDEF || orig == UNDEF {
                    // comparison undecidable from the partial data
                    continue 'beta;
                }
                let mut renamed = new_of[via as usize];
                if renamed == UNDEF {
                    renamed = next_new;
                    new_of[via as usize] = renamed;
                    old_of[renamed as usize] = via;
                    next_new += 1;
                }
                if renamed < orig {
                    return false;
                }
                if renamed > orig {
                    continue 'beta;
                }
            }
        }
    }
    true
}

/// Renumber a complete table breadth-first from `base`; returns the flat
/// renumbered cells.
fn rebase(cells: &[u32], d: usize, ncols: usize, base: u32) -> Vec<u32> {
    let mut new_of = vec![UNDEF; d];
    let mut order = vec![base];
    new_of[base as usize] = 0;
    let mut qi = 0;
    while qi < order.len() {
        let old = order[qi];
        qi += 1;
        for c in 0..ncols {
            let to = cells[old as usize * ncols + c];
            if new_of[to as usize] == UNDEF {
                new_of[to as usize] = order.len() as u32;
                order.push(to);
            }
        }
    }
    debug_assert_eq!(order.len(), d, "complete tables are transitive");
    let mut out = vec![UNDEF; d * ncols];
    for (new, &old) in order.iter().enumerate() {
        for c in 0..ncols {
            out[new * ncols + c] = new_of[cells[old as usize * ncols + c] as usize];
        }
    }
    out
}

/// Canonical form (minimum rebase over all base points) and the number of
/// base points whose rebase equals the rebase at 0, i.e. the number of
/// points with the same stabilizer subgroup.
fn canonical_form(cells: &[u32], d: usize, ncols: usize) -> (Vec<u32>, usize) {
    let at_zero = rebase(cells, d, ncols, 0);
    let mut best = at_zero.clone();
    let mut same_as_zero = 1;
    for base in 1..d as u32 {
        let cand = rebase(cells, d, ncols, base);
        if cand == at_zero {
            same_as_zero += 1;
        }
        if cand < best {
            best = cand;
        }
    }
    (best, same_as_zero)
}

/// Build a [`CosetTable`] (with Schreier representatives) from complete
/// standardized cells.
fn table_from_cells(cells: &[u32], d: usize, ncols: usize) -> CosetTable {
    // Schreier reps via BFS in the same order the cells are numbered
    let mut reps: Vec<Option<Word>> = vec![None; d];
    reps[0] = Some(Word::identity());
    let mut order = vec![0u32];
    let mut qi = 0;
    while qi < order.len() {
        let at = order[qi];
        qi += 1;
        let here = reps[at as usize].clone().unwrap();
        for c in 0..ncols {
            let to = cells[at as usize * ncols + c];
            if reps[to as usize].is_none() {
                reps[to as usize] = Some(here.multiply(&Word::generator(letter_of(c))));
                order.push(to);
            }
        }
    }
    let reps: Vec<Word> = reps.into_iter().map(|r| r.expect("transitive")).collect();
    CosetTable::from_raw(ncols / 2, d, cells.to_vec(), reps)
}
