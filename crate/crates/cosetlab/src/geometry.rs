//! Point/line incidence geometry on the coset space.
//!
//! Unordered point pairs are partitioned by their two-point stabilizer
//! subgroup, compared as element sets. Within one class, a line is a
//! maximal set of points all of whose pairs lie in the class; the second
//! group axiom ("no geometry") holds exactly when no line has three or
//! more points. A line is contextual when two of its cosets' Schreier
//! representatives fail to commute in the permutation representation.
//!
//! Pairs with trivial stabilizer are convention-dependent: excluded, they
//! only ever form 2-point lines (the simplex picture); included, they are
//! clustered into maximal lines like any other class.

use crate::coset_enum::CosetTable;
use crate::linalg::symmetric_eigenvalues;
use crate::permgroup::{commutes, PermGroup, Permutation};
use std::fmt;

/// How pairs with trivial two-point stabilizer participate in lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StabilizerConvention {
    #[default]
    TrivialExcluded,
    TrivialIncluded,
}

impl fmt::Display for StabilizerConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StabilizerConvention::TrivialExcluded => "trivial-excluded",
            StabilizerConvention::TrivialIncluded => "trivial-included",
        })
    }
}

/// A line: a maximal set of points sharing one two-point stabilizer.
#[derive(Debug, Clone)]
pub struct Line {
    /// Sorted 0-based points, at least two.
    pub points: Vec<usize>,
    /// Index into [`IncidenceGeometry::stabilizers`].
    pub stabilizer: usize,
}

/// The incidence geometry of a transitive permutation group.
pub struct IncidenceGeometry {
    degree: usize,
    convention: StabilizerConvention,
    lines: Vec<Line>,
    stabilizers: Vec<PermGroup>,
}

impl IncidenceGeometry {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn convention(&self) -> StabilizerConvention {
        self.convention
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn stabilizer_of(&self, line: &Line) -> &PermGroup {
        &self.stabilizers[line.stabilizer]
    }

    pub fn line_stabilizer_order(&self, line: &Line) -> u128 {
        self.stabilizer_of(line).order()
    }

    /// Lines with at least three points.
    pub fn big_lines(&self) -> impl Iterator<Item = &Line> {
        self.lines.iter().filter(|l| l.points.len() >= 3)
    }
}

/// Partition pairs by equal stabilizer and form maximal lines.
pub fn build_geometry(group: &PermGroup, convention: StabilizerConvention) -> IncidenceGeometry {
    let d = group.degree();
    // equality classes of two-point stabilizers over unordered pairs
    let mut stabilizers: Vec<PermGroup> = Vec::new();
    let mut class_pairs: Vec<Vec<(usize, usize)>> = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            let stab = group.two_point_stabilizer(a, b).expect("a < b");
            let mut found = None;
            for (i, s) in stabilizers.iter().enumerate() {
                if s.order() == stab.order() && s.subgroup_eq(&stab) {
                    found = Some(i);
                    break;
                }
            }
            match found {
                Some(i) => class_pairs[i].push((a, b)),
                None => {
                    stabilizers.push(stab);
                    class_pairs.push(vec![(a, b)]);
                }
            }
        }
    }
    let mut lines: Vec<Line> = Vec::new();
    for (i, pairs) in class_pairs.iter().enumerate() {
        let trivial = stabilizers[i].order() == 1;
        if trivial && convention == StabilizerConvention::TrivialExcluded {
            for &(a, b) in pairs {
                lines.push(Line { points: vec![a, b], stabilizer: i });
            }
            continue;
        }
        // maximal cliques of the class graph
        let mut adj = vec![0u32; d];
        for &(a, b) in pairs {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        let involved: u32 = pairs.iter().fold(0, |m, &(a, b)| m | (1 << a) | (1 << b));
        for clique in maximal_cliques(d, &adj, involved) {
            let points: Vec<usize> = (0..d).filter(|p| clique & (1 << p) != 0).collect();
            if points.len() >= 2 {
                lines.push(Line { points, stabilizer: i });
            }
        }
    }
    lines.sort_by(|a, b| a.points.cmp(&b.points));
    IncidenceGeometry { degree: d, convention, lines, stabilizers }
}

/// Bron-Kerbosch with pivoting over a bitmask graph (degree <= 32).
fn maximal_cliques(n: usize, adj: &[u32], involved: u32) -> Vec<u32> {
    let mut out = Vec::new();
    fn bron(n: usize, adj: &[u32], r: u32, mut p: u32, mut x: u32, out: &mut Vec<u32>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        // pivot: vertex of p|x with most neighbors in p
        let mut pivot = usize::MAX;
        let mut best = -1i32;
        for v in 0..n {
            if (p | x) & (1 << v) != 0 {
                let cnt = (p & adj[v]).count_ones() as i32;
                if cnt > best {
                    best = cnt;
                    pivot = v;
                }
            }
        }
        let candidates = p & !adj[pivot];
        for v in 0..n {
            if candidates & (1 << v) == 0 {
                continue;
            }
            bron(n, adj, r | (1 << v), p & adj[v], x & adj[v], out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    bron(n, adj, 0, involved, 0, &mut out);
    out.sort_unstable();
    out
}

/// Axiom (ii), "no geometry": no line carries three or more points.
pub fn axiom_ii(geom: &IncidenceGeometry) -> bool {
    !has_triangle(geom)
}

pub fn has_triangle(geom: &IncidenceGeometry) -> bool {
    geom.big_lines().next().is_some()
}

/// Permutation realizing one word through the coset action.
fn word_permutation(table: &CosetTable, w: &crate::presentations::Word) -> Permutation {
    Permutation::from_images((0..table.index()).map(|c| table.apply_word(c, w)).collect())
        .expect("words act as bijections")
}

/// Indices of the lines whose coset representatives do not all commute.
pub fn contextual_lines(geom: &IncidenceGeometry, table: &CosetTable) -> Vec<usize> {
    let perms: Vec<Permutation> = (0..table.index())
        .map(|c| word_permutation(table, table.schreier_rep(c)))
        .collect();
    geom.lines
        .iter()
        .enumerate()
        .filter(|(_, line)| {
            line.points.iter().enumerate().any(|(k, &a)| {
                line.points[k + 1..].iter().any(|&b| !commutes(&perms[a], &perms[b]))
            })
        })
        .map(|(i, _)| i)
        .collect()
}

/// Contextual triples inside lines of size >= 3: 3-subsets of a line whose
/// representatives contain a non-commuting pair. Returned as
/// `(line index, [points])`.
pub fn contextual_triangles(
    geom: &IncidenceGeometry,
    table: &CosetTable,
) -> Vec<(usize, [usize; 3])> {
    let perms: Vec<Permutation> = (0..table.index())
        .map(|c| word_permutation(table, table.schreier_rep(c)))
        .collect();
    let mut out = Vec::new();
    for (li, line) in geom.lines.iter().enumerate() {
        if line.points.len() < 3 {
            continue;
        }
        let pts = &line.points;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                for k in j + 1..pts.len() {
                    let (a, b, c) = (pts[i], pts[j], pts[k]);
                    if !commutes(&perms[a], &perms[b])
                        || !commutes(&perms[a], &perms[c])
                        || !commutes(&perms[b], &perms[c])
                    {
                        out.push((li, [a, b, c]));
                    }
                }
            }
        }
    }
    out
}

/// Verdict bundle for one geometry.
#[derive(Debug, Clone)]
pub struct GeometryVerdict {
    pub has_triangle: bool,
    pub axiom_ii: bool,
    pub contextual_lines: Vec<usize>,
    pub recognized: Recognition,
}

pub fn verdict(geom: &IncidenceGeometry, table: &CosetTable) -> GeometryVerdict {
    let tri = has_triangle(geom);
    GeometryVerdict {
        has_triangle: tri,
        axiom_ii: !tri,
        contextual_lines: contextual_lines(geom, table),
        recognized: recognize(geom),
    }
}

/// Relabeling-invariant fingerprint: line statistics plus the degree
/// sequence and rounded adjacency spectrum of the collinearity graph
/// (edges join points sharing a line of size >= 3; with no such line the
/// graph defaults to the complete graph).
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFingerprint {
    pub points: usize,
    pub line_count: usize,
    /// (line size, how many lines of that size), ascending.
    pub line_sizes: Vec<(usize, usize)>,
    pub degree_sequence: Vec<usize>,
    pub spectrum: Vec<f64>,
}

impl fmt::Display for GraphFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> =
            self.line_sizes.iter().map(|(s, c)| format!("{s}^{c}")).collect();
        write!(f, "fp[{}p {}l {}]", self.points, self.line_count, sizes.join(","))
    }
}

/// Recognition result: a catalog name when the geometry matches one of the
/// constructed candidates, plus the fingerprint either way.
#[derive(Debug, Clone, PartialEq)]
pub struct Recognition {
    pub name: Option<String>,
    pub fingerprint: GraphFingerprint,
}

impl fmt::Display for Recognition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => f.write_str(n),
            None => write!(f, "{}", self.fingerprint),
        }
    }
}

/// Match against the candidate library: complete graph (simplex),
/// complete multipartite, complement of the line graph of a complete
/// bipartite graph, the Fano plane, `[n_3]` configurations, and the
/// Mermin-pentagram shape.
pub fn recognize(geom: &IncidenceGeometry) -> Recognition {
    let n = geom.degree;
    let big: Vec<&Line> = geom.big_lines().collect();
    let collinearity = collinearity_graph(geom);
    let fingerprint = fingerprint_of(geom, &collinearity);

    let name = if big.is_empty() {
        Some(format!("K_{n}"))
    } else if is_fano(n, &big) {
        Some("Fano".to_string())
    } else if is_pentagram_shape(n, &big) {
        Some("Mermin-pentagram".to_string())
    } else if is_n3_configuration(n, &big) {
        Some(format!("[{n}_3]"))
    } else if let Some(parts) = multipartite_parts(n, &collinearity) {
        if parts.iter().all(|&p| p == 1) {
            Some(format!("K_{n}"))
        } else {
            let parts: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
            Some(format!("K({})", parts.join(",")))
        }
    } else {
        rook_complement_name(n, &collinearity)
    };
    Recognition { name, fingerprint }
}

fn collinearity_graph(geom: &IncidenceGeometry) -> Vec<u32> {
    let n = geom.degree;
    let mut adj = vec![0u32; n];
    let mut any = false;
    for line in geom.big_lines() {
        any = true;
        for (i, &a) in line.points.iter().enumerate() {
            for &b in &line.points[i + 1..] {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
    }
    if !any {
        // defaults to the complete graph
        for (a, row) in adj.iter_mut().enumerate() {
            *row = (((1u64 << n) - 1) as u32) & !(1 << a);
        }
    }
    adj
}

fn fingerprint_of(geom: &IncidenceGeometry, adj: &[u32]) -> GraphFingerprint {
    let n = geom.degree;
    let mut size_counts: std::collections::BTreeMap<usize, usize> = Default::default();
    for l in &geom.lines {
        *size_counts.entry(l.points.len()).or_default() += 1;
    }
    let mut degree_sequence: Vec<usize> =
        adj.iter().map(|r| r.count_ones() as usize).collect();
    degree_sequence.sort_unstable_by(|a, b| b.cmp(a));
    let mut matrix = vec![0.0f64; n * n];
    for a in 0..n {
        for b in 0..n {
            if adj[a] & (1 << b) != 0 {
                matrix[a * n + b] = 1.0;
            }
        }
    }
    let spectrum: Vec<f64> = symmetric_eigenvalues(n, &matrix)
        .into_iter()
        .map(|x| (x * 1e6).round() / 1e6)
        .collect();
    GraphFingerprint {
        points: n,
        line_count: geom.lines.len(),
        line_sizes: size_counts.into_iter().collect(),
        degree_sequence,
        spectrum,
    }
}

fn lines_per_point(n: usize, big: &[&Line]) -> Vec<usize> {
    let mut count = vec![0usize; n];
    for l in big {
        for &p in &l.points {
            count[p] += 1;
        }
    }
    count
}

fn is_fano(n: usize, big: &[&Line]) -> bool {
    if n != 7 || big.len() != 7 || big.iter().any(|l| l.points.len() != 3) {
        return false;
    }
    if lines_per_point(n, big).iter().any(|&c| c != 3) {
        return false;
    }
    // candidate: lines {i, i+1, i+3} mod 7
    let fano: Vec<Vec<usize>> =
        (0..7).map(|i| { let mut l = vec![i, (i + 1) % 7, (i + 3) % 7]; l.sort_unstable(); l }).collect();
    let ours: Vec<Vec<usize>> = big.iter().map(|l| l.points.clone()).collect();
    hypergraphs_isomorphic(7, &ours, &fano)
}

/// Pentagram shape: exactly five 4-point lines, pairwise meeting in at
/// most one point, with every point on exactly two of them. Smaller lines
/// may coexist (the clique partition also emits triangles inside the same
/// stabilizer class).
fn is_pentagram_shape(n: usize, big: &[&Line]) -> bool {
    if n != 10 {
        return false;
    }
    let fours: Vec<&&Line> = big.iter().filter(|l| l.points.len() == 4).collect();
    if fours.len() != 5 {
        return false;
    }
    let mut per_point = vec![0usize; n];
    for l in &fours {
        for &p in &l.points {
            per_point[p] += 1;
        }
    }
    if per_point.iter().any(|&c| c != 2) {
        return false;
    }
    fours.iter().enumerate().all(|(i, a)| {
        fours[i + 1..]
            .iter()
            .all(|b| a.points.iter().filter(|p| b.points.contains(p)).count() <= 1)
    })
}

fn is_n3_configuration(n: usize, big: &[&Line]) -> bool {
    big.len() == n
        && big.iter().all(|l| l.points.len() == 3)
        && lines_per_point(n, big).iter().all(|&c| c == 3)
}

/// Parts of a complete multipartite collinearity graph (complement must be
/// a disjoint union of cliques), ascending; `None` otherwise.
fn multipartite_parts(n: usize, adj: &[u32]) -> Option<Vec<usize>> {
    let full = ((1u64 << n) - 1) as u32;
    let comp: Vec<u32> = (0..n).map(|a| full & !adj[a] & !(1 << a)).collect();
    let mut seen = vec![false; n];
    let mut parts = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        // connected component of the complement
        let mut comp_mask = 1u32 << start;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if comp[v] & (1 << w) != 0 && !seen[w] {
                    seen[w] = true;
                    comp_mask |= 1 << w;
                    stack.push(w);
                }
            }
        }
        // component must be a clique in the complement
        for v in 0..n {
            if comp_mask & (1 << v) != 0 && (comp[v] & comp_mask) != comp_mask & !(1 << v) {
                return None;
            }
        }
        parts.push(comp_mask.count_ones() as usize);
    }
    parts.sort_unstable();
    Some(parts)
}

/// Name the graph `co-L(K(m,k))` (vertices of an m-by-k grid, adjacent iff
/// they differ in both coordinates) if isomorphic to one.
fn rook_complement_name(n: usize, adj: &[u32]) -> Option<String> {
    for m in 2..=n {
        if n % m != 0 {
            continue;
        }
        let k = n / m;
        if k < m {
            break;
        }
        let mut cand = vec![0u32; n];
        for r in 0..m {
            for c in 0..k {
                for r2 in 0..m {
                    for c2 in 0..k {
                        if r != r2 && c != c2 {
                            cand[r * k + c] |= 1 << (r2 * k + c2);
                        }
                    }
                }
            }
        }
        if graphs_isomorphic(n, adj, &cand) {
            return Some(format!("co-L(K({m},{k}))"));
        }
    }
    None
}

/// Graph isomorphism by color refinement plus backtracking; intended for
/// graphs on at most 25 vertices.
pub(crate) fn graphs_isomorphic(n: usize, a: &[u32], b: &[u32]) -> bool {
    let deg = |adj: &[u32]| {
        let mut d: Vec<usize> = adj.iter().map(|r| r.count_ones() as usize).collect();
        d.sort_unstable();
        d
    };
    if deg(a) != deg(b) {
        return false;
    }
    let color_a = refine_colors(n, a);
    let color_b = refine_colors(n, b);
    let mut hist_a = color_a.clone();
    let mut hist_b = color_b.clone();
    hist_a.sort_unstable();
    hist_b.sort_unstable();
    if hist_a != hist_b {
        return false;
    }
    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    backtrack_iso(n, a, b, &color_a, &color_b, 0, &mut mapping, &mut used)
}

fn refine_colors(n: usize, adj: &[u32]) -> Vec<u64> {
    let mut color: Vec<u64> = adj.iter().map(|r| r.count_ones() as u64).collect();
    for _ in 0..n {
        let mut next: Vec<u64> = Vec::with_capacity(n);
        for v in 0..n {
            let mut neigh: Vec<u64> =
                (0..n).filter(|&w| adj[v] & (1 << w) != 0).map(|w| color[w]).collect();
            neigh.sort_unstable();
            let mut h: u64 = color[v].wrapping_mul(0x9e3779b97f4a7c15);
            for c in neigh {
                h = h.rotate_left(7) ^ c.wrapping_mul(0xc2b2ae3d27d4eb4f);
            }
            next.push(h);
        }
        if next == color {
            break;
        }
        color = next;
    }
    color
}

#[allow(clippy::too_many_arguments)]
fn backtrack_iso(
    n: usize,
    a: &[u32],
    b: &[u32],
    ca: &[u64],
    cb: &[u64],
    v: usize,
    mapping: &mut [usize],
    used: &mut [bool],
) -> bool {
    if v == n {
        return true;
    }
    for w in 0..n {
        if used[w] || ca[v] != cb[w] {
            continue;
        }
        let ok = (0..v).all(|u| {
            let adj_a = a[v] & (1 << u) != 0;
            let adj_b = b[w] & (1 << mapping[u]) != 0;
            adj_a == adj_b
        });
        if ok {
            mapping[v] = w;
            used[w] = true;
            if backtrack_iso(n, a, b, ca, cb, v + 1, mapping, used) {
                return true;
            }
            used[w] = false;
            mapping[v] = usize::MAX;
        }
    }
    false
}

/// Hypergraph isomorphism on sorted lines, by point-map backtracking.
fn hypergraphs_isomorphic(n: usize, a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let bset: std::collections::BTreeSet<Vec<usize>> = b.iter().cloned().collect();
    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        n: usize,
        a: &[Vec<usize>],
        bset: &std::collections::BTreeSet<Vec<usize>>,
        v: usize,
        mapping: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if v == n {
            return a.iter().all(|line| {
                let mut img: Vec<usize> = line.iter().map(|&p| mapping[p]).collect();
                img.sort_unstable();
                bset.contains(&img)
            });
        }
        for w in 0..n {
            if used[w] {
                continue;
            }
            mapping[v] = w;
            used[w] = true;
            // prune: any fully-mapped line must land on a line
            let consistent = a.iter().all(|line| {
                if line.iter().any(|&p| mapping[p] == usize::MAX) {
                    return true;
                }
                let mut img: Vec<usize> = line.iter().map(|&p| mapping[p]).collect();
                img.sort_unstable();
                bset.contains(&img)
            });
            if consistent && rec(n, a, bset, v + 1, mapping, used) {
                return true;
            }
            used[w] = false;
            mapping[v] = usize::MAX;
        }
        false
    }
    rec(n, a, &bset, 0, &mut mapping, &mut used)
}
