//! Acceptance suite: each test prints one pass/fail line for its
//! criterion. Run with `cargo test --test acceptance -- --nocapture` to
//! see the lines.

use cosetlab::coset_enum::todd_coxeter;
use cosetlab::geometry::{axiom_ii, build_geometry, StabilizerConvention};
use cosetlab::low_index::{eta_sequence, low_index_subgroups};
use cosetlab::mic::{
    cycle_eigenvectors, gram_rank, mic_scan, PauliSystem, ScanBudget, StateVector,
};
use cosetlab::permgroup::{axiom_i, PermGroup, Permutation};
use cosetlab::presentations::{catalog_lookup, parse_presentation, Presentation, SubgroupSpec, Word};
use cosetlab::report::{analyze, RuleVerdict, RunConfig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdictline(n: usize, ok: bool, what: &str) {
    println!("criterion {n} {}: {what}", if ok { "PASS" } else { "FAIL" });
}

#[test]
fn c1_eta_sequence_reproduction() {
    let fig8 = catalog_lookup("fig8-0surgery").unwrap();
    let got_fig8 = eta_sequence(&fig8.presentation, 12).unwrap();
    let want_fig8 = vec![1, 1, 1, 2, 2, 5, 1, 2, 2, 4, 3, 17];
    let tref = catalog_lookup("trefoil-0surgery").unwrap();
    let got_tref = eta_sequence(&tref.presentation, 12).unwrap();
    let want_tref = vec![1, 1, 2, 2, 1, 5, 3, 2, 4, 1, 1, 12];
    let ok = got_fig8 == want_fig8 && got_tref == want_tref;
    verdictline(1, ok, "eta sequences at indices 1..12 for both surgery groups");
    assert_eq!(got_fig8, want_fig8);
    assert_eq!(got_tref, want_tref);
    // the catalog oracles must agree with what we just computed
    assert_eq!(fig8.eta_oracle.unwrap(), want_fig8);
    assert_eq!(tref.eta_oracle.unwrap(), want_tref);
}

#[test]
fn c2_row_count_reproduction() {
    let tref = catalog_lookup("trefoil").unwrap().presentation;
    let eta_tref = eta_sequence(&tref, 7).unwrap();
    let fig8 = catalog_lookup("fig8").unwrap().presentation;
    let eta_fig8 = eta_sequence(&fig8, 6).unwrap();
    let ok = eta_tref[1..7] == [1, 2, 3, 2, 8, 7] && eta_fig8[1..6] == [1, 1, 2, 4, 11];
    verdictline(2, ok, "class counts: trefoil d=2..7 and fig8 d=2..6");
    assert_eq!(&eta_tref[1..7], &[1, 2, 3, 2, 8, 7]);
    assert_eq!(&eta_fig8[1..6], &[1, 1, 2, 4, 11]);
    // row multiplicities sum back to the class counts through the pipeline
    let config = RunConfig {
        group: "trefoil".into(),
        index_lo: 2,
        index_hi: 6,
        ..RunConfig::default()
    };
    let report = analyze(&tref, &config);
    for d in 2..=6 {
        let total: usize =
            report.rows.iter().filter(|r| r.d == d).map(|r| r.multiplicity).sum();
        assert_eq!(total, eta_tref[d - 1], "multiplicity sum at trefoil d={d}");
    }
}

#[test]
fn c3_gq22_demo() {
    // The full pair partition of the index-15 action is the projective
    // 3-space picture (35 lines of 3, stabilizer orders 3 and 4); the
    // generalized quadrangle of order two is its order-4 stabilizer class.
    let entry = catalog_lookup("a6-demo").unwrap();
    let records = low_index_subgroups(&entry.presentation, 15).unwrap();
    assert!(!records.is_empty(), "a6-demo must have index-15 subgroups");
    let mut found = false;
    for record in &records {
        let group = PermGroup::new(15, record.table.permutation_rep());
        if group.order() != 360 {
            continue;
        }
        if group.rank().unwrap() != 3 {
            continue;
        }
        let geom = build_geometry(&group, StabilizerConvention::TrivialExcluded);
        let doily: Vec<usize> = geom
            .lines()
            .iter()
            .enumerate()
            .filter(|(_, l)| l.points.len() >= 3 && geom.line_stabilizer_order(l) == 4)
            .map(|(i, _)| i)
            .collect();
        if doily.len() != 15 {
            continue;
        }
        if doily.iter().any(|&i| geom.lines()[i].points.len() != 3) {
            continue;
        }
        let mut per_point = vec![0usize; 15];
        for &i in &doily {
            for &p in &geom.lines()[i].points {
                per_point[p] += 1;
            }
        }
        if per_point.iter().any(|&c| c != 3) {
            continue;
        }
        // at least one contextual line avoiding coset 0 (the subgroup coset)
        let ctx = cosetlab::geometry::contextual_lines(&geom, &record.table);
        let has_ctx_line_avoiding_e = doily
            .iter()
            .any(|i| !geom.lines()[*i].points.contains(&0) && ctx.contains(i));
        if !has_ctx_line_avoiding_e {
            continue;
        }
        // coset enumeration over the record's own Schreier generators
        // reproduces the table: index 15, image of order 360
        let table = todd_coxeter(&entry.presentation, &record.generators, 10_000).unwrap();
        assert_eq!(table.index(), 15);
        let image = PermGroup::new(15, table.permutation_rep());
        assert_eq!(image.order(), 360);
        found = true;
        break;
    }
    verdictline(3, found, "a6-demo d=15: |P|=360, rank 3, doily line statistics, contextual line off e");
    assert!(found, "no index-15 class reproduces the generalized quadrangle statistics");
}

#[test]
fn c4_mic_verdicts_with_pp() {
    let budget = ScanBudget::default();
    let tref = catalog_lookup("trefoil").unwrap().presentation;
    let fig80 = catalog_lookup("fig8-0surgery").unwrap().presentation;

    // trefoil d=3, irregular class (order 6)
    let recs = low_index_subgroups(&tref, 3).unwrap();
    let rec = recs
        .iter()
        .find(|r| PermGroup::new(3, r.table.permutation_rep()).order() == 6)
        .expect("trefoil d=3 has an order-6 class");
    let mic3 = mic_scan(rec, &budget);
    let d3_ok = mic3.is_mic
        && mic3.pp == Some(1)
        && (mic3.pp_values[0] - 0.25).abs() <= 1e-9;

    // trefoil d=4, order-12 class
    let recs = low_index_subgroups(&tref, 4).unwrap();
    let rec = recs
        .iter()
        .find(|r| PermGroup::new(4, r.table.permutation_rep()).order() == 12)
        .expect("trefoil d=4 has an order-12 class");
    let mic4 = mic_scan(rec, &budget);
    let d4_ok = mic4.is_mic && mic4.pp == Some(2);

    // trefoil d=5, order-60 class
    let recs = low_index_subgroups(&tref, 5).unwrap();
    let rec = recs
        .iter()
        .find(|r| PermGroup::new(5, r.table.permutation_rep()).order() == 60)
        .expect("trefoil d=5 has an order-60 class");
    let mic5 = mic_scan(rec, &budget);
    let d5_mic_ok = mic5.is_mic;
    let d5_pp_ok = mic5.pp == Some(1)
        && mic5.pp_values.len() == 1
        && (mic5.pp_values[0] - 1.0 / 6.0).abs() <= 1e-9;

    // fig8-0surgery d=6: the class whose geometry is the octahedron
    // K(2,2,2) (its triangles come from the shared trivial stabilizer, so
    // the trivial-included convention exhibits them)
    let recs = low_index_subgroups(&fig80, 6).unwrap();
    let mut d6_ok = false;
    for rec in &recs {
        let group = PermGroup::new(6, rec.table.permutation_rep());
        let geom = build_geometry(&group, StabilizerConvention::TrivialIncluded);
        let name = cosetlab::geometry::recognize(&geom).name;
        if name.as_deref() == Some("K(2,2,2)") {
            let mic6 = mic_scan(rec, &budget);
            d6_ok = mic6.is_mic && mic6.pp == Some(2);
        }
    }

    println!(
        "criterion 4 detail: d=3 mic/pp {}/{:?}; d=4 {}/{:?}; d=5 {}/{:?} values {:?}; d=6 K(2,2,2) {}",
        mic3.is_mic, mic3.pp, mic4.is_mic, mic4.pp, mic5.is_mic, mic5.pp, mic5.pp_values, d6_ok
    );
    let ok = d3_ok && d4_ok && d5_mic_ok && d5_pp_ok && d6_ok;
    verdictline(4, ok, "MIC verdicts with pp: trefoil d=3/4/5, fig8-0surgery d=6");
    assert!(d3_ok, "trefoil d=3 must be a MIC with pp=1, value 1/4");
    assert!(d4_ok, "trefoil d=4 (order 12) must be a MIC with pp=2");
    assert!(d6_ok, "fig8-0surgery d=6 must have a K(2,2,2) class with MIC pp=2");
    assert!(d5_mic_ok, "trefoil d=5 (order 60) must be a MIC");
    // Known gap: the paper reports pp=1 here, but no eigenstate of the
    // degree-5 alternating action is an equiangular fiducial (all discrete
    // candidates and all degenerate eigenspaces were scanned exhaustively);
    // the best this pipeline honestly finds is pp in {3,4,6}.
    assert!(
        d5_pp_ok,
        "trefoil d=5: expected pp=1 at value 1/6, got pp={:?} values {:?}",
        mic5.pp, mic5.pp_values
    );
}

#[test]
fn c5_axiom_i_column() {
    // Table rows pinned by (index, |P|): the listed class must carry the
    // listed axiom-(i) value
    let pres = catalog_lookup("fig8-0surgery").unwrap().presentation;
    let expectations: [(usize, u128, bool); 7] = [
        (4, 12, true),
        (6, 12, false),
        (9, 36, true),
        (11, 55, true),
        (16, 48, true),
        (19, 171, true),
        (20, 120, true),
    ];
    // each table row is pinned by (d, |P|); several indices carry further
    // classes of the same order that the table does not show, so the row
    // value must be realized by some class of that order
    let mut all_ok = true;
    for (d, order, expect) in expectations {
        let recs = low_index_subgroups(&pres, d).unwrap();
        let matching: Vec<_> = recs
            .iter()
            .filter(|r| PermGroup::new(d, r.table.permutation_rep()).order() == order)
            .collect();
        assert!(!matching.is_empty(), "no class of order {order} at d={d}");
        let realized = matching.iter().any(|rec| axiom_i(rec) == expect);
        if !realized {
            all_ok = false;
        }
        assert!(realized, "axiom (i) = {expect} not realized at d={d}, |P|={order}");
    }
    verdictline(5, all_ok, "axiom (i) column for fig8-0surgery d in {4,6,9,11,16,19,20}");
}

#[test]
fn c6_contextuality_exceptions() {
    // fig8-0surgery d=4 under the trivial-included convention: the
    // order-12 class is the contextual exception, with a contextual
    // triangle whose representatives have the {w, w*g, w*g^-1} shape
    let pres = catalog_lookup("fig8-0surgery").unwrap().presentation;
    let config = RunConfig {
        group: "fig8-0surgery".into(),
        index_lo: 4,
        index_hi: 4,
        convention: "incl".into(),
        ..RunConfig::default()
    };
    let report = analyze(&pres, &config);
    let row = report
        .rows
        .iter()
        .find(|r| r.p_order == "12")
        .expect("fig8-0surgery d=4 has an order-12 class");
    let verdict_ok = row.verdict == RuleVerdict::ExceptionContextual;

    // triangle shape {w, w*g, w*g^-1}: one vertex has a one-letter word w
    // and the other two are the cosets of w*g and w*g^-1 for a generator g
    // (the canonical reps of those cosets may be shorter words)
    let recs = low_index_subgroups(&pres, 4).unwrap();
    let rec = recs
        .iter()
        .find(|r| PermGroup::new(4, r.table.permutation_rep()).order() == 12)
        .unwrap();
    let group = PermGroup::new(4, rec.table.permutation_rep());
    let geom = build_geometry(&group, StabilizerConvention::TrivialIncluded);
    let triangles = cosetlab::geometry::contextual_triangles(&geom, &rec.table);
    let gens = pres.generator_count() as i32;
    let shape_ok = triangles.iter().any(|(_, t)| {
        t.iter().any(|&apex| {
            let w: &Word = rec.table.schreier_rep(apex);
            if w.len() != 1 {
                return false;
            }
            let others: Vec<usize> = t.iter().copied().filter(|&p| p != apex).collect();
            (1..=gens).any(|g| {
                let fwd = rec.table.apply_word(apex, &Word::generator(g));
                let bwd = rec.table.apply_word(apex, &Word::generator(-g));
                (fwd == others[0] && bwd == others[1]) || (fwd == others[1] && bwd == others[0])
            })
        })
    });

    // fig8 d=7: MIC classes carry the Fano plane with order-4 line
    // stabilizers
    let fig8 = catalog_lookup("fig8").unwrap().presentation;
    let recs7 = low_index_subgroups(&fig8, 7).unwrap();
    let budget = ScanBudget::default();
    let mut fano_classes = 0usize;
    let mut fano_ok = true;
    for rec in &recs7 {
        let group = PermGroup::new(7, rec.table.permutation_rep());
        if group.order() == 7 {
            continue; // the cyclic cover
        }
        let geom = build_geometry(&group, StabilizerConvention::TrivialExcluded);
        let name = cosetlab::geometry::recognize(&geom).name;
        let mic = mic_scan(rec, &budget);
        if !mic.is_mic {
            continue;
        }
        fano_classes += 1;
        if name.as_deref() != Some("Fano") {
            fano_ok = false;
        }
        for line in geom.big_lines() {
            // order 4 and elementary abelian
            let stab = geom.stabilizer_of(line);
            if stab.order() != 4
                || !stab.is_abelian()
                || stab.generators().iter().any(|g| g.order() > 2)
            {
                fano_ok = false;
            }
        }
    }
    let ok = verdict_ok && shape_ok && fano_ok && fano_classes > 0;
    verdictline(6, ok, "contextual exceptions: fig8-0surgery d=4 triangle shape, fig8 d=7 Fano with order-4 stabilizers");
    assert!(verdict_ok, "fig8-0surgery d=4 (order 12) must be exception-contextual under incl");
    assert!(shape_ok, "no contextual triangle of shape {{w, w*g, w*g^-1}} found");
    assert!(fano_classes > 0, "fig8 d=7 must have MIC classes");
    assert!(fano_ok, "fig8 d=7 MIC classes must be Fano with order-4 line stabilizers");
}

#[test]
fn c7_false_detection_negatives() {
    let pres = catalog_lookup("fig8").unwrap().presentation;
    let recs = low_index_subgroups(&pres, 8).unwrap();
    let budget = ScanBudget::default();
    let mut found = false;
    for rec in &recs {
        if !axiom_i(rec) {
            continue;
        }
        let group = PermGroup::new(8, rec.table.permutation_rep());
        let geom = build_geometry(&group, StabilizerConvention::TrivialExcluded);
        if !axiom_ii(&geom) {
            continue;
        }
        let mic = mic_scan(rec, &budget);
        if !mic.is_mic {
            // the scan must be a hard negative, not a budget artifact
            assert!(!mic.budget_exhausted, "negative must come from the exhaustive scan");
            found = true;
        }
    }
    verdictline(7, found, "fig8 d=8: some class with both axioms true has no MIC (exhaustive scan)");
    assert!(found, "expected at least one false-detection-shaped class at fig8 d=8");
}

// ---------------------------------------------------------------------
// criterion 8: property suites
// ---------------------------------------------------------------------

#[test]
fn c8a_relator_closure_on_random_low_index_outputs() {
    let mut tables = Vec::new();
    for name in ["trefoil", "fig8", "trefoil-0surgery", "fig8-0surgery", "a6-demo"] {
        let pres = catalog_lookup(name).unwrap().presentation;
        for d in 1..=6 {
            for rec in low_index_subgroups(&pres, d).unwrap() {
                rec.table.validate(&pres, &rec.generators).unwrap();
                tables.push((pres.clone(), rec));
            }
        }
    }
    assert!(tables.len() >= 50, "expected a healthy table population");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut audits = 0;
    while audits < 1000 {
        let (pres, rec) = &tables[rng.gen_range(0..tables.len())];
        if pres.relators().is_empty() {
            continue;
        }
        let coset = rng.gen_range(0..rec.table.index());
        let relator = &pres.relators()[rng.gen_range(0..pres.relators().len())];
        assert_eq!(rec.table.apply_word(coset, relator), coset, "relator must close");
        audits += 1;
    }
    verdictline(8, true, "(a) relator closure on 1000 random low-index table audits");
}

/// Brute-force closure of permutation generators.
fn closure(degree: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let mut elems = vec![Permutation::identity(degree)];
    let mut frontier = elems.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for e in &frontier {
            for g in gens {
                let prod = e.then(g);
                if !elems.contains(&prod) {
                    elems.push(prod.clone());
                    next.push(prod);
                }
            }
        }
        frontier = next;
    }
    elems
}

/// All subgroups of a small permutation group, as sorted element lists.
fn all_subgroups(degree: usize, elements: &[Permutation]) -> Vec<Vec<Permutation>> {
    let mut subgroups: std::collections::BTreeSet<Vec<Permutation>> = Default::default();
    subgroups.insert(vec![Permutation::identity(degree)]);
    let mut frontier: Vec<Vec<Permutation>> = subgroups.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for sub in &frontier {
            for g in elements {
                if sub.contains(g) {
                    continue;
                }
                let mut gens: Vec<Permutation> = sub.clone();
                gens.push(g.clone());
                let mut grown = closure(degree, &gens);
                grown.sort();
                if subgroups.insert(grown.clone()) {
                    next.push(grown);
                }
            }
        }
        frontier = next;
    }
    subgroups.into_iter().collect()
}

fn word_perm(w: &Word, images: &[Permutation], degree: usize) -> Permutation {
    let mut acc = Permutation::identity(degree);
    for &letter in w.letters() {
        let g = &images[letter.unsigned_abs() as usize - 1];
        let step = if letter > 0 { g.clone() } else { g.inverse() };
        acc = acc.then(&step);
    }
    acc
}

#[test]
fn c8b_low_index_matches_brute_force_on_finite_quotients() {
    // presentations of finite groups plus faithful permutation models
    let perm = |v: &[usize]| Permutation::from_images(v.to_vec()).unwrap();
    let cases: Vec<(&str, usize, usize, Vec<Permutation>)> = vec![
        ("< a, b | a^2, b^3, (a*b)^2 >", 6, 3, vec![perm(&[1, 0, 2]), perm(&[1, 2, 0])]),
        ("< a, b | a^2, b^3, a*b*a^-1*b^-1 >", 6, 5, vec![perm(&[1, 0, 2, 3, 4]), perm(&[0, 1, 3, 4, 2])]),
        ("< a, b | a^4, b^2, (a*b)^2 >", 8, 4, vec![perm(&[1, 2, 3, 0]), perm(&[3, 2, 1, 0])]),
        // quaternion group acting regularly
        ("< a, b | a^4, a^2*b^-2, b^-1*a*b*a >", 8, 8, vec![
            perm(&[1, 2, 3, 0, 5, 6, 7, 4]),
            perm(&[4, 7, 6, 5, 2, 1, 0, 3]),
        ]),
        ("< a, b | a^2, b^3, (a*b)^3 >", 12, 4, vec![perm(&[1, 0, 3, 2]), perm(&[0, 2, 3, 1])]),
        ("< a, b | a^6, b^2, (a*b)^2 >", 12, 6, vec![
            perm(&[1, 2, 3, 4, 5, 0]),
            perm(&[5, 4, 3, 2, 1, 0]),
        ]),
        ("< a, b | a^2, b^3, (a*b)^4 >", 24, 4, vec![perm(&[1, 0, 2, 3]), perm(&[0, 2, 3, 1])]),
        // S4 x C2 on 6 points, order 48
        ("< a, b, c | a^2, b^3, (a*b)^4, c^2, a*c*a^-1*c^-1, b*c*b^-1*c^-1 >", 48, 6, vec![
            perm(&[1, 0, 2, 3, 4, 5]),
            perm(&[0, 2, 3, 1, 4, 5]),
            perm(&[0, 1, 2, 3, 5, 4]),
        ]),
    ];
    for (text, order, degree, images) in cases {
        let pres = parse_presentation(text).unwrap();
        // the model satisfies the relators and has the expected order
        for r in pres.relators() {
            assert!(word_perm(r, &images, degree).is_identity(), "relator fails in model for {text}");
        }
        let elements = closure(degree, &images);
        assert_eq!(elements.len(), order, "model order for {text}");
        // the presentation defines exactly this group: coset enumeration of
        // the trivial subgroup closes at the group order
        let table = todd_coxeter(&pres, &SubgroupSpec::trivial(), 10_000).unwrap();
        assert_eq!(table.index(), order, "presented group order for {text}");

        // brute-force subgroup classes per index vs the low-index search
        let subgroups = all_subgroups(degree, &elements);
        let mut class_reps: Vec<Vec<Permutation>> = Vec::new();
        'subs: for sub in &subgroups {
            for rep in &class_reps {
                if rep.len() != sub.len() {
                    continue;
                }
                // conjugate by every element
                let conjugate = elements.iter().any(|g| {
                    let gi = g.inverse();
                    sub.iter().all(|h| {
                        let conj = gi.then(h).then(g);
                        rep.contains(&conj)
                    })
                });
                if conjugate {
                    continue 'subs;
                }
            }
            class_reps.push(sub.clone());
        }
        for d in 1..=order.min(12) {
            if order % d != 0 {
                assert!(low_index_subgroups(&pres, d).unwrap().is_empty());
                continue;
            }
            let expected =
                class_reps.iter().filter(|s| s.len() == order / d).count();
            let got = low_index_subgroups(&pres, d).unwrap().len();
            assert_eq!(got, expected, "class count at d={d} for {text}");
        }
    }
    verdictline(8, true, "(b) low-index class counts match brute-force subgroup enumeration on finite quotients");
}

/// Recognize a float as a small rational (continued fractions, denominator
/// capped); used by the exact-rank oracle.
fn to_rational(x: f64) -> Option<num_rational::BigRational> {
    use num_bigint::BigInt;
    let negative = x < 0.0;
    let x = x.abs();
    let (mut a, mut b) = (x, 1.0f64);
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..40 {
        let ai = (a / b).floor();
        let (p2, q2) = (ai as i64 * p1 + p0, ai as i64 * q1 + q0);
        // Gram entries of these orbits have tiny denominators when they are
        // rational at all; a tight cap keeps accidental near-rationals out
        if q2 > 1_000 {
            break;
        }
        let r = a - ai * b;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        if r.abs() < 1e-13 {
            break;
        }
        a = b;
        b = r;
    }
    if q1 == 0 {
        return None;
    }
    let approx = p1 as f64 / q1 as f64;
    if (approx - x).abs() > 1e-10 {
        return None;
    }
    let p = if negative { -p1 } else { p1 };
    Some(num_rational::BigRational::new(BigInt::from(p), BigInt::from(q1)))
}

/// Exact Gaussian elimination rank over the rationals.
fn exact_rank(gram: &[f64], n: usize) -> Option<usize> {
    use num_traits::Zero;
    let mut m: Vec<Vec<num_rational::BigRational>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(to_rational(gram[i * n + j])?);
        }
        m.push(row);
    }
    let mut rank = 0;
    let mut col = 0;
    while col < n && rank < n {
        if let Some(p) = (rank..n).find(|&r| !m[r][col].is_zero()) {
            m.swap(rank, p);
            let pv = m[rank][col].clone();
            for r in rank + 1..n {
                if !m[r][col].is_zero() {
                    let f = &m[r][col] / &pv;
                    for c in col..n {
                        let sub = &f * &m[rank][c];
                        m[r][c] = &m[r][c] - sub;
                    }
                }
            }
            rank += 1;
        }
        col += 1;
    }
    Some(rank)
}

#[test]
fn c8c_gram_rank_vs_exact_elimination() {
    // orbit Grams with recognizable rational entries, dimensions 2..6
    let mut checked = 0;
    let cases: Vec<StateVector> = vec![
        StateVector::basis(2, 0),
        StateVector::new(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ]),
        StateVector::new(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(-0.5, 3f64.sqrt() / 2.0),
            Complex64::new(-0.5, -(3f64.sqrt()) / 2.0),
        ]),
        StateVector::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]),
        StateVector::new(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]),
        StateVector::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]),
    ];
    for psi in &cases {
        let d = psi.dim();
        let sys = PauliSystem::new(d);
        let orbit = sys.pauli_orbit(psi);
        let (numeric, gram) = gram_rank(&orbit, 1e-8);
        if let Some(exact) = exact_rank(&gram, d * d) {
            assert_eq!(numeric, exact, "rank mismatch in dimension {d}");
            checked += 1;
        }
    }
    assert!(checked >= 4, "expected most Grams to be rational-recognizable, got {checked}");
    verdictline(8, true, "(c) numeric Gram rank equals exact rational elimination on d<=6 orbits");
}

#[test]
fn c8d_unitarity_and_eigen_residual_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let d = rng.gen_range(2..=8);
        let sys = PauliSystem::new(d);
        let amps: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if amps.iter().map(|a| a.norm_sqr()).sum::<f64>() < 1e-6 {
            continue;
        }
        let psi = StateVector::new(amps);
        let shifts: Vec<usize> = sys.parts().iter().map(|&p| rng.gen_range(0..p)).collect();
        let clocks: Vec<usize> = sys.parts().iter().map(|&p| rng.gen_range(0..p)).collect();
        let moved = sys.displacement(&shifts, &clocks, &psi).unwrap();
        assert!((moved.norm() - 1.0).abs() <= 1e-12, "displacement must be norm-preserving");
        let back_s: Vec<usize> =
            sys.parts().iter().zip(&shifts).map(|(&p, &a)| (p - a) % p).collect();
        let back_c: Vec<usize> =
            sys.parts().iter().zip(&clocks).map(|(&p, &b)| (p - b) % p).collect();
        let back = sys.displacement(&back_s, &back_c, &moved).unwrap();
        assert!(back.same_ray(&psi, 1e-10), "inverse displacement must return the ray");

        // eigen-residual on a random permutation of the same degree
        let mut images: Vec<usize> = (0..d).collect();
        for i in (1..d).rev() {
            images.swap(i, rng.gen_range(0..=i));
        }
        let sigma = Permutation::from_images(images).unwrap();
        for (lam, v) in cycle_eigenvectors(&sigma) {
            let mut mv = vec![Complex64::new(0.0, 0.0); d];
            for i in 0..d {
                mv[sigma.image(i)] = v.amplitudes()[i];
            }
            let res: f64 = (0..d)
                .map(|i| (mv[i] - lam * v.amplitudes()[i]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-10, "eigen-residual {res} exceeds 1e-10");
        }
    }
    verdictline(8, true, "(d) displacement unitarity/invertibility and eigen-residual bounds");
}

/// Independent axiom (i): enumerate the quotient by the normal closure.
/// `N = <<H>>` makes `G/N` the group presented by the relators plus H's
/// generators, so axiom (i) holds iff that quotient collapses to one coset.
fn axiom_i_by_quotient(pres: &Presentation, gens: &SubgroupSpec) -> bool {
    let mut relators = pres.relators().to_vec();
    relators.extend(gens.generators.iter().cloned());
    let quotient =
        Presentation::new(pres.generator_names().to_vec(), relators).unwrap();
    let table = todd_coxeter(&quotient, &SubgroupSpec::trivial(), 1_000_000).unwrap();
    table.index() == 1
}

#[test]
fn c8e_axiom_i_vs_direct_normal_closure_enumeration() {
    let mut compared = 0;
    for name in ["trefoil", "fig8", "trefoil-0surgery", "fig8-0surgery"] {
        let pres = catalog_lookup(name).unwrap().presentation;
        for d in 1..=8 {
            for rec in low_index_subgroups(&pres, d).unwrap() {
                let fast = axiom_i(&rec);
                let slow = axiom_i_by_quotient(&pres, &rec.generators);
                assert_eq!(fast, slow, "axiom (i) routes disagree for {name} d={d}");
                compared += 1;
            }
        }
    }
    assert!(compared >= 80, "expected a broad comparison, got {compared}");
    verdictline(8, true, "(e) axiom (i) equals the normal-closure quotient enumeration for d<=8");
}
