use std::collections::BTreeSet;

use proptest::prelude::*;
use tyurin_core::lattice::{lattice_quotient, IntMatrix};
use tyurin_core::toric::{
    cox_degree, enumerate_monomials, sublattice_index, wp1146_simplex, CoxDegree, GElement, LatticePolytope, G_MODULI,
};

fn anticanonical() -> CoxDegree {
    cox_degree([1, 1, 1, 1])
}

#[test]
fn dual_lattice_points_are_the_anticanonical_monomials() {
    let u = wp1146_simplex();
    let simplex = LatticePolytope::new(&u).unwrap();
    let dual = simplex.polar_dual().unwrap().to_lattice().expect("integral dual");
    let from_points: BTreeSet<[i64; 4]> = dual
        .lattice_points()
        .unwrap()
        .into_iter()
        .map(|m| {
            let mut d = [0; 4];
            for (di, ui) in d.iter_mut().zip(&u) {
                *di = m[0] * ui[0] + m[1] * ui[1] + m[2] * ui[2] + 1;
            }
            d
        })
        .collect();
    assert!(from_points.iter().all(|d| d.iter().all(|&x| x >= 0)));
    let listed: BTreeSet<[i64; 4]> = enumerate_monomials(anticanonical()).into_iter().collect();
    assert_eq!(from_points, listed);
    assert_eq!(listed.len(), 9);
}

#[test]
fn exhaustive_scan_of_weighted_degree_twelve() {
    let weights = [1, 1, 4, 6];
    let mut hits = BTreeSet::new();
    for d0 in 0..=12 {
        for d1 in 0..=12 {
            for d2 in 0..=3 {
                for d3 in 0..=2 {
                    let d = [d0, d1, d2, d3];
                    let z: i64 = d.iter().zip(weights).map(|(a, w)| a * w).sum();
                    if z == 12 && cox_degree(d).g_element == GElement::identity() {
                        hits.insert(d);
                    }
                }
            }
        }
    }
    let listed: BTreeSet<[i64; 4]> = enumerate_monomials(anticanonical()).into_iter().collect();
    assert_eq!(hits, listed);
}

#[test]
fn character_group_census() {
    // the 72 normal forms of Z12² ⊕ Z3 ⊕ Z2 modulo the diagonal
    let mut forms = BTreeSet::new();
    for a in 0..12 {
        for b in 0..12 {
            for c in 0..3 {
                for d in 0..2 {
                    forms.insert(GElement::normalize([a, b, c, d]));
                }
            }
        }
    }
    assert_eq!(forms.len(), 72);
    for g in &forms {
        assert_eq!(g.tuple()[0], 0);
        assert_eq!(GElement::normalize(g.tuple()), *g);
    }
    let members: Vec<GElement> = forms
        .iter()
        .copied()
        .filter(|g| GElement::satisfies_constraint(g.tuple()))
        .collect();
    let rows = IntMatrix::from_rows(&[wp1146_simplex()[1], wp1146_simplex()[2], wp1146_simplex()[3]]);
    let index = sublattice_index(&rows).unwrap();
    assert_eq!(members.len() as u64, index);
    assert_eq!(lattice_quotient(&rows).unwrap().order(), index);
    // closed under addition, and every monomial degree lands inside
    for a in &members {
        for b in &members {
            assert!(members.contains(&a.add(b)));
        }
    }
    for d0 in 0..6 {
        for d1 in 0..6 {
            for d2 in 0..3 {
                for d3 in 0..2 {
                    assert!(members.contains(&cox_degree([d0, d1, d2, d3]).g_element));
                }
            }
        }
    }
    assert_eq!(G_MODULI, [12, 12, 3, 2]);
}

fn exps() -> impl Strategy<Value = [i64; 4]> {
    proptest::array::uniform4(0i64..12)
}

proptest! {
    #[test]
    fn degree_is_additive(a in exps(), b in exps()) {
        let sum = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
        prop_assert_eq!(cox_degree(sum), cox_degree(a).add(&cox_degree(b)));
    }

    #[test]
    fn enumerated_monomials_have_the_target_degree(d in exps()) {
        let target = cox_degree(d);
        let found = enumerate_monomials(target);
        prop_assert!(found.contains(&d));
        for m in &found {
            prop_assert_eq!(cox_degree(*m), target);
        }
        let mut sorted = found.clone();
        sorted.sort();
        prop_assert_eq!(sorted, found);
    }
}
