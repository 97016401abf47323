use super::*;
use crate::pairing::{is_isomorphic, DEFAULT_BOUND};

fn sylow(p: u64, factors: &[u64], values: &[(i64, u64)]) -> SylowPairing {
    SylowPairing::new(p, PairingGram::from_fractions(factors, values).unwrap()).unwrap()
}

fn class(s: &str) -> PairingClass {
    s.parse().unwrap()
}

#[test]
fn text_round_trip() {
    for s in ["1", "A2", "E4", "A2+A4", "A3+B3", "A2+A2+A3", "A3+E4", "F16", "C8+D32"] {
        assert_eq!(class(s).to_string(), s);
    }
    assert_eq!(class("B3+B3").to_string(), "A3+A3");
    assert_eq!(class("E4+A3").to_string(), "A3+E4");
    for bad in ["", "A1", "B2", "C4", "E2", "F4", "G3", "A6", "Ax", "A3++B3"] {
        assert!(bad.parse::<PairingClass>().is_err(), "{bad}");
    }
}

#[test]
fn symbol_forms() {
    let e4 = class("E4");
    assert_eq!(e4.group().factors_u64().unwrap(), vec![2, 2]);
    assert_eq!(e4.order(), BigUint::from(4u32));
    let b5 = class("B5").pairing();
    assert_eq!(b5.value(0, 0), BigRational::new(2.into(), 5.into()));
    let f16 = class("F16").pairing();
    assert_eq!(f16.group().factors_u64().unwrap(), vec![4, 4]);
    assert_eq!(f16.value(0, 0), BigRational::new(1.into(), 2.into()));
    assert_eq!(f16.value(0, 1), BigRational::new(1.into(), 4.into()));
}

#[test]
fn odd_examples() {
    assert_eq!(classify_odd_p(&sylow(3, &[3], &[(1, 3)])).unwrap(), class("A3"));
    assert_eq!(classify_odd_p(&sylow(3, &[3], &[(2, 3)])).unwrap(), class("B3"));
    let bb = sylow(3, &[3, 3], &[(2, 3), (0, 1), (0, 1), (2, 3)]);
    assert_eq!(classify_odd_p(&bb).unwrap().to_string(), "A3+A3");
    // hyperbolic plane over Z/3: needs the g_i + g_j move
    let h = sylow(3, &[3, 3], &[(0, 1), (1, 3), (1, 3), (0, 1)]);
    let c = classify_odd_p(&h).unwrap();
    assert!(is_isomorphic(&c.pairing(), &h.pairing, DEFAULT_BOUND).unwrap());
    // q(g) = 0 ties with δ(g, h); g + h would be isotropic here
    let tie = sylow(3, &[3, 3], &[(0, 1), (1, 3), (1, 3), (1, 3)]);
    assert_eq!(classify_odd_p(&tie).unwrap(), class("A3+B3"));
    assert_eq!(classify_odd_p(&sylow(5, &[25], &[(2, 25)])).unwrap(), class("B25"));
    assert!(matches!(classify_odd_p(&sylow(2, &[2], &[(1, 2)])), Err(Error::WrongPrime { .. })));
    let degenerate = sylow(3, &[3, 3], &[(1, 3), (0, 1), (0, 1), (0, 1)]);
    assert_eq!(classify_odd_p(&degenerate), Err(Error::DegeneratePairing));
}

#[test]
fn binary_examples() {
    let cat = Catalog::binary();
    assert_eq!(classify_p2(&sylow(2, &[2], &[(1, 2)]), &cat).unwrap(), class("A2"));
    let e = sylow(2, &[2, 2], &[(0, 1), (1, 2), (1, 2), (0, 1)]);
    assert_eq!(classify_p2(&e, &cat).unwrap().to_string(), "E4");
    assert_eq!(classify_p2(&sylow(2, &[8], &[(5, 8)]), &cat).unwrap(), class("C8"));
    assert_eq!(classify_p2(&sylow(2, &[8], &[(3, 8)]), &cat).unwrap(), class("D8"));
    // A2 + E4 is A2 + A2 + A2
    let joined = class("A2+E4").pairing();
    let s = SylowPairing::new(2, joined).unwrap();
    assert_eq!(classify_p2(&s, &cat).unwrap().to_string(), "A2+A2+A2");
    let big = sylow(2, &[128], &[(1, 128)]);
    assert!(matches!(classify_p2(&big, &cat), Err(Error::OrderExceedsBound { .. })));
}

#[test]
fn aut_counts_of_small_classes() {
    let two = [
        ("1", 1),
        ("A2", 1),
        ("A4", 2),
        ("B4", 2),
        ("A2+A2", 2),
        ("E4", 6),
        ("A8", 4),
        ("B8", 4),
        ("C8", 4),
        ("D8", 4),
        ("A2+A4", 2),
        ("A2+A2+A2", 6),
    ];
    let three = [("1", 1), ("A3", 2), ("B3", 2), ("A9", 2), ("B9", 2), ("A3+A3", 8), ("A3+B3", 4)];
    let joint = [("A2+A2+A3", 4, 48), ("A2+A2+B3", 4, 48), ("A3+E4", 12, 144), ("B3+E4", 12, 144)];
    for (c, aut) in two.iter().chain(three.iter()) {
        assert_eq!(class(c).aut_count(DEFAULT_BOUND).unwrap(), *aut, "{c}");
    }
    for (c, aut, ratio) in joint {
        assert_eq!(class(c).aut_count(DEFAULT_BOUND).unwrap(), aut, "{c}");
        assert_eq!(class(c).expected_ratio(DEFAULT_BOUND).unwrap(), BigUint::from(ratio as u32));
    }
}

#[test]
fn binary_catalog_up_to_eight() {
    let cat = Catalog::new(2, 8).unwrap();
    let mut names: Vec<String> = cat.entries().iter().map(|e| e.class.to_string()).collect();
    names.sort();
    let mut table = ["1", "A2", "A4", "B4", "A2+A2", "E4", "A8", "B8", "C8", "D8", "A2+A4", "A2+A2+A2"];
    table.sort();
    assert_eq!(names, table);
}

#[test]
fn catalog_classes_are_distinct_and_canonical() {
    let cat = Catalog::binary();
    for e in cat.entries() {
        let s = SylowPairing::new(2, e.class.pairing()).unwrap();
        assert_eq!(classify_p2(&s, &cat).unwrap(), e.class);
        assert_eq!(e.aut, count_aut_pairing(&e.class.pairing(), DEFAULT_BOUND).unwrap());
    }
    for (i, a) in cat.entries().iter().enumerate() {
        for b in &cat.entries()[i + 1..] {
            if a.class.group() == b.class.group() {
                assert!(!is_isomorphic(&a.class.pairing(), &b.class.pairing(), DEFAULT_BOUND).unwrap());
            }
        }
    }
}

#[test]
fn cyclic_mass_is_one_over_order() {
    // ∑ over pairings on Z/p^m of 1/(|Γ||Aut|) = p^{-m}
    for p in [2u64, 3, 5] {
        let cat = Catalog::new(p, 64).unwrap();
        let mut m = 1;
        while p.pow(m) <= 64 {
            let q = p.pow(m);
            let total: BigRational = cat
                .entries()
                .iter()
                .filter(|e| e.class.group().factors_u64().unwrap() == vec![q])
                .map(CatalogEntry::weight)
                .sum();
            assert_eq!(total, BigRational::new(1.into(), BigInt::from(q)), "p^m = {q}");
            m += 1;
        }
    }
}

#[test]
fn odd_classification_matches_catalog() {
    let cat = Catalog::new(3, 81).unwrap();
    for e in cat.entries() {
        let s = SylowPairing::new(3, e.class.pairing()).unwrap();
        assert_eq!(classify_odd_p(&s).unwrap(), e.class);
    }
}

#[test]
fn joint_classification() {
    let cat = Catalog::binary();
    let p = PairingGram::from_fractions(&[6], &[(1, 6)]).unwrap();
    assert_eq!(classify(&p, &cat).unwrap().to_string(), "A2+B3");
    let k4 = crate::pairing::jacobian_with_pairing(&crate::graph::Graph::complete(4)).unwrap();
    let c = classify(&k4, &cat).unwrap();
    assert!(is_isomorphic(&c.pairing(), &k4, DEFAULT_BOUND).unwrap());
}

