//! Magic-state and MIC detection from permutation gates.
//!
//! Candidate states are common eigenstates of the permutation matrices of
//! the coset group: per-element cycle eigenvectors (Fourier vectors on the
//! cycles) and joint eigenbases of commuting families. A candidate is a
//! MIC fiducial when its orbit under the generalized Pauli group of
//! dimension `d` — displacements `X^a Z^b` over the tensor factorization
//! of `d` into primes — spans all `d²` projector directions, i.e. the Gram
//! matrix of squared overlaps has full rank `d²`.
//!
//! All states are rays: unit norm with the first nonzero amplitude made
//! real positive.

use crate::linalg::{symmetric_eigenvalues, unitary_eig};
use crate::low_index::SubgroupRecord;
use crate::permgroup::{commutes, PermGroup, Permutation};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MicError {
    #[error("joint eigenvectors need pairwise commuting permutations")]
    NonCommuting,
    #[error("displacement index out of range for the subsystem layout")]
    IndexOutOfRange,
    #[error("state dimension {0} does not match system dimension {1}")]
    DimensionMismatch(usize, usize),
}

const PHASE_EPS: f64 = 1e-12;

/// A pure state of dimension `d`: unit norm, canonical global phase.
#[derive(Debug, Clone)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Normalize and canonicalize the phase. Panics on the zero vector.
    pub fn new(amps: Vec<Complex64>) -> Self {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-9, "state vector must be nonzero");
        let mut amps: Vec<Complex64> = amps.into_iter().map(|a| a / norm).collect();
        if let Some(first) = amps.iter().find(|a| a.norm() > PHASE_EPS) {
            let phase = first.conj() / first.norm();
            for a in &mut amps {
                *a *= phase;
            }
        }
        StateVector { amps }
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        StateVector { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Ray equality: overlap magnitude 1 within `tol`.
    pub fn same_ray(&self, other: &StateVector, tol: f64) -> bool {
        self.dim() == other.dim() && (self.overlap(other).norm() - 1.0).abs() <= tol
    }

    /// Quantized amplitude key for deduplication up to phase.
    fn dedupe_key(&self) -> Vec<(i64, i64)> {
        self.amps
            .iter()
            .map(|a| ((a.re * 1e8).round() as i64, (a.im * 1e8).round() as i64))
            .collect()
    }
}

/// Eigenpairs of a permutation matrix (`M e_i = e_{sigma(i)}`): for each
/// cycle of length `L` and each `k < L`, the vector supported on the cycle
/// whose j-th entry along the cycle is `exp(2 pi i k j / L) / sqrt(L)`,
/// with eigenvalue `exp(-2 pi i k / L)`.
pub fn cycle_eigenvectors(sigma: &Permutation) -> Vec<(Complex64, StateVector)> {
    let d = sigma.degree();
    let mut out = Vec::with_capacity(d);
    for cycle in sigma.cycles() {
        let len = cycle.len();
        for k in 0..len {
            let mut amps = vec![Complex64::new(0.0, 0.0); d];
            for (j, &point) in cycle.iter().enumerate() {
                let angle = TAU * (k as f64) * (j as f64) / (len as f64);
                amps[point] = Complex64::from_polar(1.0 / (len as f64).sqrt(), angle);
            }
            let angle = -TAU * (k as f64) / (len as f64);
            out.push((Complex64::from_polar(1.0, angle), StateVector::new(amps)));
        }
    }
    out
}

/// Simultaneous eigenbasis of pairwise commuting permutations, by
/// iterative eigenspace splitting. One-dimensional joint eigenspaces come
/// out as states; leftover degenerate spaces contribute their computed
/// orthonormal basis vectors.
pub fn joint_eigenvectors(family: &[Permutation]) -> Result<Vec<StateVector>, MicError> {
    let Some(first) = family.first() else {
        return Ok(Vec::new());
    };
    let d = first.degree();
    for (i, x) in family.iter().enumerate() {
        for y in family.iter().skip(i + 1) {
            if !commutes(x, y) {
                return Err(MicError::NonCommuting);
            }
        }
    }
    // initial split: eigenspaces of the first permutation, grouped by the
    // exact rational eigenvalue k/L
    let mut groups: std::collections::BTreeMap<(u64, u64), Vec<Vec<Complex64>>> =
        Default::default();
    for cycle in first.cycles() {
        let len = cycle.len() as u64;
        for k in 0..len {
            let g = gcd(k, len);
            let key = (k / g, len / g);
            let mut amps = vec![Complex64::new(0.0, 0.0); d];
            for (j, &point) in cycle.iter().enumerate() {
                let angle = TAU * (k as f64) * (j as f64) / (len as f64);
                amps[point] = Complex64::from_polar(1.0 / (len as f64).sqrt(), angle);
            }
            groups.entry(key).or_default().push(amps);
        }
    }
    let mut spaces: Vec<Vec<Vec<Complex64>>> = groups.into_values().collect();
    for sigma in family.iter().skip(1) {
        let mut next = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            next.extend(split_space(d, space, sigma));
        }
        spaces = next;
    }
    Ok(spaces.into_iter().flatten().map(StateVector::new).collect())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Split one subspace (orthonormal basis columns) by the eigenvalues of
/// the restriction of a permutation matrix.
fn split_space(
    d: usize,
    basis: Vec<Vec<Complex64>>,
    sigma: &Permutation,
) -> Vec<Vec<Vec<Complex64>>> {
    let m = basis.len();
    // images M q for each basis column: (M q)[sigma(i)] = q[i]
    let images: Vec<Vec<Complex64>> = basis
        .iter()
        .map(|q| {
            let mut out = vec![Complex64::new(0.0, 0.0); d];
            for i in 0..d {
                out[sigma.image(i)] = q[i];
            }
            out
        })
        .collect();
    // restriction B[x][y] = <q_x | M q_y>
    let mut b = vec![Complex64::new(0.0, 0.0); m * m];
    for x in 0..m {
        for y in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..d {
                acc += basis[x][i].conj() * images[y][i];
            }
            b[x * m + y] = acc;
        }
    }
    let (vals, vecs) = unitary_eig(m, &b);
    // cluster eigenvalues; distinct roots of unity of order <= d are far
    // apart compared with this tolerance
    let mut used = vec![false; m];
    let mut out = Vec::new();
    for k in 0..m {
        if used[k] {
            continue;
        }
        let mut members = vec![k];
        used[k] = true;
        for l in k + 1..m {
            if !used[l] && (vals[l] - vals[k]).norm() <= 1e-7 {
                used[l] = true;
                members.push(l);
            }
        }
        let mut cols: Vec<Vec<Complex64>> = members
            .iter()
            .map(|&v| {
                (0..d)
                    .map(|i| (0..m).map(|x| basis[x][i] * vecs[v * m + x]).sum::<Complex64>())
                    .collect()
            })
            .collect();
        orthonormalize(&mut cols);
        out.push(cols);
    }
    out
}

fn orthonormalize(cols: &mut Vec<Vec<Complex64>>) {
    let mut kept: Vec<Vec<Complex64>> = Vec::new();
    for col in cols.iter() {
        let mut v = col.clone();
        for u in &kept {
            let proj: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u.iter()) {
                *vi -= proj * ui;
            }
        }
        let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-9 {
            for a in &mut v {
                *a /= norm;
            }
            kept.push(v);
        }
    }
    *cols = kept;
}

/// The generalized Pauli (Weyl-Heisenberg) layout for dimension `d`:
/// one clock/shift pair per prime factor, with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliSystem {
    dimension: usize,
    parts: Vec<usize>,
}

impl PauliSystem {
    pub fn new(dimension: usize) -> Self {
        assert!(dimension >= 1);
        let mut parts = Vec::new();
        let mut rest = dimension;
        let mut p = 2;
        while p * p <= rest {
            while rest % p == 0 {
                parts.push(p);
                rest /= p;
            }
            p += 1;
        }
        if rest > 1 {
            parts.push(rest);
        }
        PauliSystem { dimension, parts }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Prime subsystem dimensions, ascending, with multiplicity.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn displacement_count(&self) -> usize {
        self.dimension * self.dimension
    }

    fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.parts.len()];
        for (slot, &p) in self.parts.iter().enumerate().rev() {
            out[slot] = index % p;
            index /= p;
        }
        out
    }

    /// Apply `X^a Z^b` per subsystem: `X|j> = |j+1 mod p>`,
    /// `Z|j> = w_p^j |j>`. Index/phase manipulation only, no matrices.
    pub fn displacement(
        &self,
        shifts: &[usize],
        clocks: &[usize],
        psi: &StateVector,
    ) -> Result<StateVector, MicError> {
        if shifts.len() != self.parts.len() || clocks.len() != self.parts.len() {
            return Err(MicError::IndexOutOfRange);
        }
        for (k, &p) in self.parts.iter().enumerate() {
            if shifts[k] >= p || clocks[k] >= p {
                return Err(MicError::IndexOutOfRange);
            }
        }
        if psi.dim() != self.dimension {
            return Err(MicError::DimensionMismatch(psi.dim(), self.dimension));
        }
        let d = self.dimension;
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        for j in 0..d {
            let digits = self.digits(j);
            // target digits and accumulated clock phase
            let mut target = 0usize;
            let mut angle = 0f64;
            for (k, &p) in self.parts.iter().enumerate() {
                let t = (digits[k] + shifts[k]) % p;
                target = target * p + t;
                angle += TAU * (clocks[k] as f64) * (digits[k] as f64) / (p as f64);
            }
            amps[target] = Complex64::from_polar(1.0, angle) * psi.amplitudes()[j];
        }
        Ok(StateVector::new(amps))
    }

    /// The `d^2` displaced states of a fiducial candidate, in deterministic
    /// (shift-major) order. Orbit members repeat when the orbit collapses.
    pub fn pauli_orbit(&self, psi: &StateVector) -> Vec<StateVector> {
        let d = self.dimension;
        let mut out = Vec::with_capacity(d * d);
        for a in 0..d {
            let shifts = self.digits(a);
            for b in 0..d {
                let clocks = self.digits(b);
                out.push(self.displacement(&shifts, &clocks, psi).expect("digits are in range"));
            }
        }
        out
    }
}

/// Gram matrix of squared overlaps and its numeric rank: entries
/// `|<psi_i|psi_j>|^2`, rank counted from eigenvalues above
/// `tol * largest` (the matrix is symmetric positive semidefinite, so its
/// eigenvalues are its singular values).
pub fn gram_rank(states: &[StateVector], tol: f64) -> (usize, Vec<f64>) {
    let n = states.len();
    let mut gram = vec![0.0f64; n * n];
    for i in 0..n {
        gram[i * n + i] = 1.0;
        for j in i + 1..n {
            let v = states[i].overlap(&states[j]).norm_sqr();
            gram[i * n + j] = v;
            gram[j * n + i] = v;
        }
    }
    let eigs = symmetric_eigenvalues(n, &gram);
    let largest = eigs.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let rank = if largest == 0.0 {
        0
    } else {
        eigs.iter().filter(|&&x| x.abs() > tol * largest).count()
    };
    (rank, gram)
}

/// Number of distinct off-diagonal Gram values after clustering within an
/// absolute tolerance, plus the sorted cluster values.
pub fn pp_value(gram: &[f64], n: usize, tol: f64) -> (usize, Vec<f64>) {
    let mut offdiag: Vec<f64> = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                offdiag.push(gram[i * n + j]);
            }
        }
    }
    offdiag.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut values = Vec::new();
    let mut start = 0;
    for i in 0..offdiag.len() {
        if i + 1 == offdiag.len() || offdiag[i + 1] - offdiag[start] > tol {
            let cluster = &offdiag[start..=i];
            values.push(cluster.iter().sum::<f64>() / cluster.len() as f64);
            start = i + 1;
        }
    }
    (values.len(), values)
}

/// Stabilizer classification of a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilizerVerdict {
    Stabilizer,
    Magic,
    Unknown,
}

impl std::fmt::Display for StabilizerVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StabilizerVerdict::Stabilizer => "stabilizer",
            StabilizerVerdict::Magic => "magic",
            StabilizerVerdict::Unknown => "unknown",
        })
    }
}

/// The `p+1` mutually unbiased bases of a prime dimension: computational
/// plus the eigenbases of `X Z^k` for `k = 0..p-1`.
fn prime_stabilizer_states(p: usize) -> Vec<StateVector> {
    let mut states: Vec<StateVector> = (0..p).map(|k| StateVector::basis(p, k)).collect();
    for k in 0..p {
        // X Z^k as a matrix: column j has w^{k j} in row j+1 mod p
        let mut m = vec![Complex64::new(0.0, 0.0); p * p];
        for j in 0..p {
            let angle = TAU * (k as f64) * (j as f64) / (p as f64);
            m[((j + 1) % p) * p + j] = Complex64::from_polar(1.0, angle);
        }
        let (_, vecs) = unitary_eig(p, &m);
        for v in 0..p {
            states.push(StateVector::new(vecs[v * p..(v + 1) * p].to_vec()));
        }
    }
    states
}

/// For prime dimension: stabilizer iff the state matches (up to phase) a
/// computational basis vector or a vector of one of the `d` Fourier-type
/// mutually unbiased bases. For composite dimension: stabilizer iff the
/// state splits as a tensor product of per-subsystem stabilizer states
/// under the prime factorization; non-product states are inconclusive.
pub fn stabilizer_check(sys: &PauliSystem, psi: &StateVector) -> StabilizerVerdict {
    const TOL: f64 = 1e-9;
    if sys.dimension == 1 {
        // the unique ray of a one-dimensional space
        return StabilizerVerdict::Stabilizer;
    }
    if sys.parts.len() == 1 {
        let p = sys.dimension;
        for s in prime_stabilizer_states(p) {
            if psi.same_ray(&s, TOL) {
                return StabilizerVerdict::Stabilizer;
            }
        }
        return StabilizerVerdict::Magic;
    }
    // composite: peel tensor factors left to right
    let mut rest = psi.amplitudes().to_vec();
    let mut rest_parts = sys.parts.clone();
    let mut verdicts = Vec::new();
    while rest_parts.len() > 1 {
        let p = rest_parts[0];
        let q: usize = rest_parts[1..].iter().product();
        match split_rank_one(&rest, p, q) {
            Some((u, v)) => {
                verdicts.push(stabilizer_check(&PauliSystem::new(p), &StateVector::new(u)));
                rest = v;
                rest_parts.remove(0);
            }
            None => return StabilizerVerdict::Unknown,
        }
    }
    verdicts.push(stabilizer_check(&PauliSystem::new(rest_parts[0]), &StateVector::new(rest)));
    if verdicts.iter().any(|v| *v == StabilizerVerdict::Magic) {
        StabilizerVerdict::Magic
    } else {
        StabilizerVerdict::Stabilizer
    }
}

/// Factor `amps` (viewed as a p-by-q matrix) as an outer product within
/// tolerance, or report that it is entangled.
fn split_rank_one(
    amps: &[Complex64],
    p: usize,
    q: usize,
) -> Option<(Vec<Complex64>, Vec<Complex64>)> {
    let (mut bi, mut bj, mut best) = (0, 0, 0.0f64);
    for i in 0..p {
        for j in 0..q {
            let m = amps[i * q + j].norm();
            if m > best {
                best = m;
                bi = i;
                bj = j;
            }
        }
    }
    if best < 1e-9 {
        return None;
    }
    let pivot = amps[bi * q + bj];
    let u: Vec<Complex64> = (0..p).map(|i| amps[i * q + bj]).collect();
    let v: Vec<Complex64> = (0..q).map(|j| amps[bi * q + j] / pivot).collect();
    for i in 0..p {
        for j in 0..q {
            if (u[i] * v[j] - amps[i * q + j]).norm() > 1e-8 {
                return None;
            }
        }
    }
    Some((u, v))
}

/// Scan limits and tolerances for [`mic_scan`].
#[derive(Debug, Clone, Copy)]
pub struct ScanBudget {
    /// When the group order is at most this, every element (and every
    /// greedily built maximal commuting family) is used: the exhaustive
    /// mode whose negatives are hard verdicts. Beyond it the scan falls
    /// back to the seeded heuristic and flags itself as budget-limited.
    pub element_cap: usize,
    pub seed: u64,
    /// Random elements drawn in heuristic mode.
    pub random_samples: usize,
    /// Relative threshold for the Gram rank test.
    pub rank_tol: f64,
    /// Absolute tolerance for clustering Gram values into pp classes.
    pub cluster_tol: f64,
}

impl Default for ScanBudget {
    fn default() -> Self {
        ScanBudget {
            element_cap: 20_000,
            seed: 0,
            random_samples: 128,
            rank_tol: 1e-8,
            cluster_tol: 1e-8,
        }
    }
}

/// Cap on how many elements seed commuting families; beyond this the
/// family stage is truncated and negatives are flagged budget-limited.
const FAMILY_SEED_CAP: usize = 4096;

/// Outcome of a MIC scan over one subgroup record.
#[derive(Debug, Clone)]
pub struct MicReport {
    pub dimension: usize,
    pub candidates_tested: usize,
    pub is_mic: bool,
    pub fiducial: Option<StateVector>,
    /// Gram rank of the fiducial orbit, or the best rank seen if no MIC.
    pub gram_rank: usize,
    pub pp: Option<usize>,
    pub pp_values: Vec<f64>,
    pub stabilizer_verdict: StabilizerVerdict,
    /// True when the scan was heuristic (group too large for the element
    /// cap), so a negative verdict means "not found under budget".
    pub budget_exhausted: bool,
}

/// Scan the eigenstates of a coset action for a MIC fiducial.
pub fn mic_scan(record: &SubgroupRecord, budget: &ScanBudget) -> MicReport {
    let d = record.index;
    let sys = PauliSystem::new(d);
    let group = PermGroup::new(d, record.table.permutation_rep());
    let order = group.order();
    let exhaustive = order <= budget.element_cap as u128;

    let mut elements: Vec<Permutation> = if exhaustive {
        let mut e = group.elements_capped(budget.element_cap);
        e.sort();
        e
    } else {
        heuristic_elements(&group, budget)
    };
    elements.dedup();

    // candidate states: per-element cycle eigenvectors first, then joint
    // eigenbases of greedily built maximal commuting families
    let mut candidates: Vec<StateVector> = Vec::new();
    let mut seen: std::collections::BTreeSet<Vec<(i64, i64)>> = Default::default();
    let mut push = |s: StateVector, candidates: &mut Vec<StateVector>| {
        if seen.insert(s.dedupe_key()) {
            candidates.push(s);
        }
    };
    for e in &elements {
        for (_, v) in cycle_eigenvectors(e) {
            push(v, &mut candidates);
        }
    }
    let families_truncated = elements.len() > FAMILY_SEED_CAP;
    let seeds = elements.len().min(FAMILY_SEED_CAP);
    let mut family_keys: std::collections::BTreeSet<Vec<usize>> = Default::default();
    for s in 0..seeds {
        let mut family: Vec<usize> = vec![s];
        for (h, other) in elements.iter().enumerate() {
            if h != s && family.iter().all(|&f| commutes(&elements[f], other)) {
                family.push(h);
            }
        }
        family.sort_unstable();
        if !family_keys.insert(family.clone()) {
            continue;
        }
        let members: Vec<Permutation> = family.into_iter().map(|i| elements[i].clone()).collect();
        if let Ok(vs) = joint_eigenvectors(&members) {
            for v in vs {
                push(v, &mut candidates);
            }
        }
    }

    // every candidate is evaluated; among full-rank fiducials the one with
    // the fewest distinct Gram values wins (ties broken by scan order), so
    // a SIC is always preferred over coarser MICs of the same class
    let mut best_rank = 0usize;
    let mut tested = 0usize;
    let mut found: Option<(usize, Vec<f64>, StateVector)> = None;
    for cand in &candidates {
        tested += 1;
        let orbit = sys.pauli_orbit(cand);
        let (rank, gram) = gram_rank(&orbit, budget.rank_tol);
        best_rank = best_rank.max(rank);
        if rank == d * d {
            let (pp, pp_values) = pp_value(&gram, d * d, budget.cluster_tol);
            if found.as_ref().map_or(true, |(best_pp, _, _)| pp < *best_pp) {
                found = Some((pp, pp_values, cand.clone()));
            }
            if pp == 1 {
                break;
            }
        }
    }
    match found {
        Some((pp, pp_values, fiducial)) => MicReport {
            dimension: d,
            candidates_tested: tested,
            is_mic: true,
            stabilizer_verdict: stabilizer_check(&sys, &fiducial),
            fiducial: Some(fiducial),
            gram_rank: d * d,
            pp: Some(pp),
            pp_values,
            budget_exhausted: false,
        },
        None => MicReport {
            dimension: d,
            candidates_tested: tested,
            is_mic: false,
            fiducial: None,
            gram_rank: best_rank,
            pp: None,
            pp_values: Vec::new(),
            stabilizer_verdict: StabilizerVerdict::Unknown,
            budget_exhausted: !exhaustive || families_truncated,
        },
    }
}

/// Heuristic element pool: generators, products of generator letters up to
/// length 4, and seeded random words.
fn heuristic_elements(group: &PermGroup, budget: &ScanBudget) -> Vec<Permutation> {
    let degree = group.degree();
    let mut alphabet: Vec<Permutation> = group.generators().to_vec();
    for g in group.generators() {
        alphabet.push(g.inverse());
    }
    let mut pool: Vec<Permutation> = vec![Permutation::identity(degree)];
    let mut frontier = vec![Permutation::identity(degree)];
    for _ in 0..4 {
        let mut next = Vec::new();
        for e in &frontier {
            for a in &alphabet {
                let prod = e.then(a);
                if !pool.contains(&prod) {
                    pool.push(prod.clone());
                    next.push(prod);
                }
            }
        }
        frontier = next;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.random_samples {
        let mut e = Permutation::identity(degree);
        let len = rng.gen_range(5..=20);
        for _ in 0..len {
            let pick = rng.gen_range(0..alphabet.len());
            e = e.then(&alphabet[pick]);
        }
        if !pool.contains(&e) {
            pool.push(e);
        }
    }
    pool.sort();
    pool
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    #[test]
    fn cycle_eigenvectors_of_identity_and_transposition() {
        let id3 = Permutation::identity(3);
        let vs = cycle_eigenvectors(&id3);
        assert_eq!(vs.len(), 3);
        for (k, (lam, v)) in vs.iter().enumerate() {
            assert!((lam - c(1.0, 0.0)).norm() < 1e-12);
            assert!(v.same_ray(&StateVector::basis(3, k), 1e-12));
        }
        // the transposition swapping the last two points
        let t = perm(&[0, 2, 1]);
        let vs = cycle_eigenvectors(&t);
        assert_eq!(vs.len(), 3);
        let expect = [
            StateVector::basis(3, 0),
            StateVector::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]),
            StateVector::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]),
        ];
        for e in &expect {
            assert!(vs.iter().any(|(_, v)| v.same_ray(e, 1e-12)));
        }
    }

    #[test]
    fn eigen_residual_bound() {
        // residual check ||Mv - lambda v|| <= 1e-10 on assorted permutations
        let perms = [
            perm(&[1, 2, 3, 4, 0]),
            perm(&[1, 0, 3, 2, 4]),
            perm(&[2, 3, 4, 0, 1]),
            perm(&[0, 2, 1, 4, 3]),
        ];
        for sigma in &perms {
            for (lam, v) in cycle_eigenvectors(sigma) {
                let d = sigma.degree();
                let mut mv = vec![c(0.0, 0.0); d];
                for i in 0..d {
                    mv[sigma.image(i)] = v.amplitudes()[i];
                }
                let res: f64 = (0..d)
                    .map(|i| (mv[i] - lam * v.amplitudes()[i]).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(res <= 1e-10, "residual {res}");
            }
        }
    }

    #[test]
    fn joint_eigenvectors_of_disjoint_transpositions() {
        let a = perm(&[1, 0, 2, 3]);
        let b = perm(&[0, 1, 3, 2]);
        let vs = joint_eigenvectors(&[a, b]).unwrap();
        assert_eq!(vs.len(), 4);
        let expect = [
            StateVector::new(vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
            StateVector::new(vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
            StateVector::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]),
            StateVector::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]),
        ];
        for e in &expect {
            assert!(vs.iter().any(|v| v.same_ray(e, 1e-10)));
        }
        // identity-only family returns the standard basis
        let vs = joint_eigenvectors(&[Permutation::identity(2)]).unwrap();
        assert_eq!(vs.len(), 2);
        // non-commuting input is rejected
        let err = joint_eigenvectors(&[perm(&[1, 0, 2]), perm(&[0, 2, 1])]).unwrap_err();
        assert_eq!(err, MicError::NonCommuting);
    }

    #[test]
    fn pauli_system_factorizations() {
        assert_eq!(PauliSystem::new(4).parts(), &[2, 2]);
        assert_eq!(PauliSystem::new(9).parts(), &[3, 3]);
        assert_eq!(PauliSystem::new(6).parts(), &[2, 3]);
        assert_eq!(PauliSystem::new(8).parts(), &[2, 2, 2]);
        assert_eq!(PauliSystem::new(10).parts(), &[2, 5]);
        assert_eq!(PauliSystem::new(7).parts(), &[7]);
        assert_eq!(PauliSystem::new(4).displacement_count(), 16);
    }

    #[test]
    fn displacement_basics() {
        let sys = PauliSystem::new(2);
        let zero = StateVector::basis(2, 0);
        // identity displacement
        let same = sys.displacement(&[0], &[0], &zero).unwrap();
        assert!(same.same_ray(&zero, 1e-12));
        // X|0> = |1>
        let x = sys.displacement(&[1], &[0], &zero).unwrap();
        assert!(x.same_ray(&StateVector::basis(2, 1), 1e-12));
        // out of range
        assert_eq!(sys.displacement(&[2], &[0], &zero).unwrap_err(), MicError::IndexOutOfRange);
    }

    #[test]
    fn qubit_stabilizer_orbit_collapses() {
        let sys = PauliSystem::new(2);
        let orbit = sys.pauli_orbit(&StateVector::basis(2, 0));
        assert_eq!(orbit.len(), 4);
        for s in &orbit {
            assert!((s.norm() - 1.0).abs() < 1e-12);
        }
        // up to phase the orbit is {|0>, |1>} twice
        let zero = StateVector::basis(2, 0);
        let one = StateVector::basis(2, 1);
        let n_zero = orbit.iter().filter(|s| s.same_ray(&zero, 1e-9)).count();
        let n_one = orbit.iter().filter(|s| s.same_ray(&one, 1e-9)).count();
        assert_eq!((n_zero, n_one), (2, 2));
        let (rank, _) = gram_rank(&orbit, 1e-8);
        assert!(rank < 4);
    }

    #[test]
    fn hesse_fiducial_gives_nine_distinct_states_and_a_sic() {
        let sys = PauliSystem::new(3);
        let fid = StateVector::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
        let orbit = sys.pauli_orbit(&fid);
        assert_eq!(orbit.len(), 9);
        for (i, a) in orbit.iter().enumerate() {
            for b in orbit.iter().skip(i + 1) {
                assert!(a.overlap(b).norm() < 1.0 - 1e-6, "orbit members must be distinct rays");
            }
        }
        let (rank, gram) = gram_rank(&orbit, 1e-8);
        assert_eq!(rank, 9);
        let (pp, values) = pp_value(&gram, 9, 1e-8);
        assert_eq!(pp, 1);
        assert!((values[0] - 0.25).abs() < 1e-9, "SIC overlap 1/(d+1), got {}", values[0]);
    }

    #[test]
    fn gram_rank_edge_cases() {
        // orthonormal basis: rank d, identity Gram
        let basis: Vec<StateVector> = (0..4).map(|k| StateVector::basis(4, k)).collect();
        let (rank, gram) = gram_rank(&basis, 1e-8);
        assert_eq!(rank, 4);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((gram[i * 4 + j] - expect).abs() < 1e-12);
            }
        }
        // repeated state: rank 1
        let rep: Vec<StateVector> = (0..5).map(|_| StateVector::basis(3, 1)).collect();
        assert_eq!(gram_rank(&rep, 1e-8).0, 1);
    }

    #[test]
    fn qubit_sic_tetrahedron_has_rank_four() {
        // Bloch vectors of a regular tetrahedron; pairwise |<a|b>|^2 = 1/3
        let tetra_angle = 109.471_220_634_490_7_f64.to_radians();
        let dirs = [
            (0.0f64, 0.0f64),
            (tetra_angle, 0.0),
            (tetra_angle, 120.0f64.to_radians()),
            (tetra_angle, 240.0f64.to_radians()),
        ];
        let states: Vec<StateVector> = dirs
            .iter()
            .map(|&(theta, phi)| {
                StateVector::new(vec![
                    c((theta / 2.0).cos(), 0.0),
                    Complex64::from_polar((theta / 2.0).sin(), phi),
                ])
            })
            .collect();
        for i in 0..4 {
            for j in i + 1..4 {
                let ov = states[i].overlap(&states[j]).norm_sqr();
                assert!((ov - 1.0 / 3.0).abs() < 1e-9);
            }
        }
        assert_eq!(gram_rank(&states, 1e-8).0, 4);
    }

    #[test]
    fn stabilizer_check_examples() {
        let s2 = PauliSystem::new(2);
        assert_eq!(stabilizer_check(&s2, &StateVector::basis(2, 0)), StabilizerVerdict::Stabilizer);
        let plus_i = StateVector::new(vec![c(1.0, 0.0), c(0.0, 1.0)]);
        assert_eq!(stabilizer_check(&s2, &plus_i), StabilizerVerdict::Stabilizer);
        let magic_qubit = StateVector::new(vec![c(1.0, 0.0), c(0.5, 0.5)]);
        assert_eq!(stabilizer_check(&s2, &magic_qubit), StabilizerVerdict::Magic);

        let s3 = PauliSystem::new(3);
        let hesse = StateVector::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(stabilizer_check(&s3, &hesse), StabilizerVerdict::Magic);
        let fourier = StateVector::new(vec![c(1.0, 0.0); 3]);
        assert_eq!(stabilizer_check(&s3, &fourier), StabilizerVerdict::Stabilizer);

        // composite: a product basis state is stabilizer, an entangled
        // state is inconclusive
        let s4 = PauliSystem::new(4);
        assert_eq!(stabilizer_check(&s4, &StateVector::basis(4, 0)), StabilizerVerdict::Stabilizer);
        let bell = StateVector::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(stabilizer_check(&s4, &bell), StabilizerVerdict::Unknown);
        // stabilizer x magic product is magic
        let prod = StateVector::new(vec![c(1.0, 0.0), c(0.5, 0.5), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(stabilizer_check(&s4, &prod), StabilizerVerdict::Magic);
    }

    #[test]
    fn prime_stabilizer_states_never_give_mics() {
        for p in [2usize, 3, 5, 7] {
            let sys = PauliSystem::new(p);
            for s in prime_stabilizer_states(p) {
                let orbit = sys.pauli_orbit(&s);
                let (rank, _) = gram_rank(&orbit, 1e-8);
                assert!(rank < p * p, "stabilizer state gave rank {rank} in dim {p}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn displacement_is_unitary_and_invertible(
            dim in 2usize..=6,
            seed in 0u64..1000,
        ) {
            let sys = PauliSystem::new(dim);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let amps: Vec<Complex64> =
                (0..dim).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            if amps.iter().map(|a| a.norm_sqr()).sum::<f64>() < 1e-6 {
                return Ok(());
            }
            let psi = StateVector::new(amps);
            let parts = sys.parts().to_vec();
            let shifts: Vec<usize> = parts.iter().map(|&p| rng.gen_range(0..p)).collect();
            let clocks: Vec<usize> = parts.iter().map(|&p| rng.gen_range(0..p)).collect();
            let moved = sys.displacement(&shifts, &clocks, &psi).unwrap();
            prop_assert!((moved.norm() - 1.0).abs() < 1e-12);
            let back_shifts: Vec<usize> =
                parts.iter().zip(&shifts).map(|(&p, &a)| (p - a) % p).collect();
            let back_clocks: Vec<usize> =
                parts.iter().zip(&clocks).map(|(&p, &b)| (p - b) % p).collect();
            let back = sys.displacement(&back_shifts, &back_clocks, &moved).unwrap();
            prop_assert!(back.same_ray(&psi, 1e-10));
        }

        #[test]
        fn gram_rank_is_phase_and_order_invariant(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = 3usize;
            let states: Vec<StateVector> = (0..5)
                .map(|_| {
                    let amps: Vec<Complex64> = (0..d)
                        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect();
                    StateVector::new(amps)
                })
                .collect();
            let (rank, _) = gram_rank(&states, 1e-8);
            prop_assert!(rank <= 5.min(d * d));
            // relabeling the list leaves the rank unchanged
            let mut shuffled = states.clone();
            shuffled.reverse();
            prop_assert_eq!(gram_rank(&shuffled, 1e-8).0, rank);
        }
    }
}
