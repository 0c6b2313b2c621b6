use preproj_core::catalog::{
    algebra_by_name, b2_suite, leclerc_algebra, leclerc_defaults, leclerc_module, list, resolve, ALGEBRAS,
};
use preproj_core::linalg::Rational;
use preproj_core::pimod::{decompose, ext1_dim, hom_dim, is_crystal, is_rigid, iso_test, ModuleRep};
use preproj_core::starop::{generic_extension, star_table};
use preproj_core::Error;

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

#[test]
fn b2_entries_are_certified_and_distinct() {
    let suite = b2_suite(8, 0).unwrap();
    let ranks: Vec<(String, Vec<i64>)> =
        suite.entries.iter().chain(&suite.projectives).map(|e| (e.name.clone(), e.module.require_rank().unwrap())).collect();
    let expected = [
        ("M1", [1, 0]), ("M2", [0, 1]), ("M3", [1, 1]), ("M4", [1, 1]),
        ("M5", [1, 2]), ("M6", [1, 2]), ("P1", [2, 2]), ("P2", [1, 2]),
    ];
    for ((name, rank), (en, er)) in ranks.iter().zip(expected) {
        assert_eq!((name.as_str(), rank.as_slice()), (en, &er[..]));
    }
    for e in suite.entries.iter().chain(&suite.projectives) {
        let f = e.flags;
        assert!(f.locally_free && f.crystal && f.rigid && f.indecomposable, "{}", e.name);
    }
    for (i, a) in suite.entries.iter().enumerate() {
        for b in &suite.entries[i + 1..] {
            assert!(!iso_test(&a.module, &b.module, 8, 0).unwrap(), "{} ~ {}", a.name, b.name);
        }
    }
}

#[test]
fn b2_table_matches() {
    let suite = b2_suite(8, 0).unwrap();
    let t = star_table(&suite.named(), &suite.named_projectives(), 8, 0);
    for (r, row) in t.cells.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            let cell = cell.as_ref().unwrap();
            assert!(cell.star.certified);
            assert_eq!(cell.labels, suite.expected[r][c], "cell {r},{c}");
        }
    }
    assert!(t.labeler.known.iter().all(|(n, _)| !n.starts_with('X')));
}

#[test]
fn leclerc_members_at_distinct_points_are_distinct() {
    let alg = leclerc_algebra();
    let points = [(1, 0), (0, 1), (1, 1), (2, 3), (-1, 1), (5, 2)];
    let ms: Vec<ModuleRep> = points.iter().map(|&(l, m)| leclerc_module(&alg, &q(l), &q(m)).unwrap()).collect();
    for (i, a) in ms.iter().enumerate() {
        assert_eq!(a.require_rank().unwrap(), vec![1, 2, 2, 2, 1]);
        assert!(is_crystal(a).unwrap());
        for (j, b) in ms.iter().enumerate() {
            let (h, e) = (hom_dim(a, b).unwrap(), ext1_dim(a, b).unwrap());
            if i == j {
                assert_eq!((h, e), (3, 2));
            } else {
                assert_eq!((h, e), (2, 0), "{:?} vs {:?}", points[i], points[j]);
                assert!(!iso_test(a, b, 8, 0).unwrap());
            }
        }
    }
}

#[test]
fn leclerc_member_depends_on_the_projective_point_only() {
    let alg = leclerc_algebra();
    let a = leclerc_module(&alg, &q(1), &q(2)).unwrap();
    let b = leclerc_module(&alg, &q(-3), &q(-6)).unwrap();
    assert!(iso_test(&a, &b, 8, 0).unwrap());
    assert!(matches!(leclerc_module(&alg, &q(0), &q(0)), Err(Error::Shape(_))));
}

#[test]
fn leclerc_generic_self_extension_is_rigid() {
    let alg = leclerc_algebra();
    let m = leclerc_module(&alg, &q(2), &q(3)).unwrap();
    let s = generic_extension(&m, &m, 8, 0).unwrap();
    assert!(s.rigid);
    let parts = decompose(s.module(), 0).unwrap();
    assert_eq!(parts.len(), 2);
    for p in &parts {
        assert_eq!(p.dims(), &[1, 2, 2, 2, 1]);
        assert!(is_rigid(p).unwrap().rigid);
    }
}

#[test]
fn leclerc_defaults_are_three_points() {
    assert_eq!(leclerc_defaults().len(), 3);
}

#[test]
fn labels_resolve() {
    let m3 = resolve("B2:M3=1/1/2", "B2", 8, 0).unwrap();
    assert_eq!(m3.require_rank().unwrap(), vec![1, 1]);
    let e1 = resolve("E1", "B2", 8, 0).unwrap();
    assert_eq!(e1.dims(), &[2, 0]);
    let s12 = resolve("A2:S1/S2", "B2", 8, 0).unwrap();
    assert_eq!(s12.dims(), &[1, 1]);
    let l = resolve("A5:L[1:1]", "B2", 8, 0).unwrap();
    assert_eq!(l.dims(), &[1, 2, 2, 2, 1]);
    assert!(matches!(resolve("B2:M9", "B2", 8, 0), Err(Error::Format(_))));
    assert!(matches!(resolve("A2:Q1", "B2", 8, 0), Err(Error::Format(_))));
}

#[test]
fn every_listed_label_resolves() {
    for (label, _) in list() {
        if label.contains('<') {
            continue;
        }
        resolve(&label, "B2", 8, 0).unwrap_or_else(|e| panic!("{label}: {e}"));
    }
    for name in ALGEBRAS {
        assert!(algebra_by_name(name).is_some());
    }
}
