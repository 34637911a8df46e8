//! Cross-module integration checks on catalog groups.

use cosetlab::low_index::low_index_subgroups;
use cosetlab::permgroup::{covering_type, structure_describe, CoveringType, PermGroup};
use cosetlab::presentations::catalog_lookup;

#[test]
fn covering_types_of_trefoil_covers() {
    let pres = catalog_lookup("trefoil").unwrap().presentation;
    // the double cover is cyclic
    let recs = low_index_subgroups(&pres, 2).unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(covering_type(&recs[0]), CoveringType::Cyclic);
    // degree 6 carries a regular non-cyclic cover and a cyclic one
    let recs = low_index_subgroups(&pres, 6).unwrap();
    let types: Vec<CoveringType> = recs.iter().map(covering_type).collect();
    assert!(types.contains(&CoveringType::Regular));
    assert!(types.contains(&CoveringType::Cyclic));
    assert!(types.contains(&CoveringType::Irregular));
    // regular means order equals degree; cyclic covers here are regular too
    for (rec, ty) in recs.iter().zip(&types) {
        let order = PermGroup::new(6, rec.table.permutation_rep()).order();
        if *ty == CoveringType::Regular {
            assert_eq!(order, 6);
        }
    }
}

#[test]
fn structure_labels_on_knot_covers() {
    // degree-5 irregular cover of the trefoil is the alternating group
    let pres = catalog_lookup("trefoil").unwrap().presentation;
    let recs = low_index_subgroups(&pres, 5).unwrap();
    let labels: Vec<String> = recs
        .iter()
        .map(|r| structure_describe(&PermGroup::new(5, r.table.permutation_rep())).label())
        .collect();
    assert!(labels.contains(&"A5".to_string()));
    assert!(labels.contains(&"Z5".to_string()));
    // figure-eight degree-7 irregular covers land on the simple group of
    // order 168
    let fig8 = catalog_lookup("fig8").unwrap().presentation;
    let recs = low_index_subgroups(&fig8, 7).unwrap();
    let psl_count = recs
        .iter()
        .filter(|r| {
            let g = PermGroup::new(7, r.table.permutation_rep());
            structure_describe(&g).label() == "PSL(2,7)"
        })
        .count();
    assert_eq!(psl_count, 8);
}

#[test]
fn class_multiplicities_at_fig8_degree_five() {
    // degree 5: one cyclic class, one single irregular class, and one
    // analysis shared by two classes
    let pres = catalog_lookup("fig8").unwrap().presentation;
    let recs = low_index_subgroups(&pres, 5).unwrap();
    assert_eq!(recs.len(), 4);
    let orders: Vec<u128> =
        recs.iter().map(|r| PermGroup::new(5, r.table.permutation_rep()).order()).collect();
    // conjugate counts are consistent: class sizes divide the index bound
    for rec in &recs {
        assert!(rec.conjugates_in_class >= 1 && rec.conjugates_in_class <= 5);
    }
    assert!(orders.contains(&5));
}
