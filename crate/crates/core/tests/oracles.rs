mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tanaka_core::cr_universal::build_universal_cr;
use tanaka_core::free_lie::{witt_dimension, FreeLieAlgebra, Tree, DEFAULT_BASIS_CAP};
use tanaka_core::prolongation::prolong_until_zero;
use tanaka_core::symbol::build_symbol;

#[test]
fn hall_sizes_match_lyndon_enumeration() {
    for k in 1..=4 {
        let f = FreeLieAlgebra::hall_basis(k, 6).unwrap();
        for d in 1..=6 {
            let expected = lyndon_count(k, d);
            assert_eq!(f.dims()[d - 1] as u64, expected, "k={k} d={d}");
            assert_eq!(witt_dimension(k, d), expected as u128);
        }
    }
}

fn random_tree(rng: &mut ChaCha8Rng, k: usize, degree: usize) -> Tree {
    if degree == 1 {
        return Tree::Leaf(rng.gen_range(0..k));
    }
    let left = rng.gen_range(1..degree);
    Tree::node(random_tree(rng, k, left), random_tree(rng, k, degree - left))
}

#[test]
fn rewriting_agrees_with_associative_embedding() {
    let f = FreeLieAlgebra::hall_basis(3, 6).unwrap();
    let polys: Vec<Poly> = f.basis().iter().map(|h| tree_poly(h.tree())).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let d = rng.gen_range(1..=6);
        let t = random_tree(&mut rng, 3, d);
        let x = f.hall_rewrite(&t);
        let mut expanded = Poly::new();
        for (i, c) in x.iter() {
            poly_add(&mut expanded, &polys[i], c);
        }
        assert_eq!(expanded, tree_poly(&t), "tree of degree {d}");
    }
}

#[test]
fn bracket_table_agrees_with_associative_embedding() {
    let f = FreeLieAlgebra::hall_basis(2, 5).unwrap();
    let g = f.graded();
    let polys: Vec<Poly> = f.basis().iter().map(|h| tree_poly(h.tree())).collect();
    for a in 0..g.total_dim() {
        for b in 0..g.total_dim() {
            if g.degree_of(a) + g.degree_of(b) > 5 {
                continue;
            }
            let t = Tree::node(f.monomial(a).tree().clone(), f.monomial(b).tree().clone());
            let mut expanded = Poly::new();
            if let Some(x) = g.bracket_basis(a, b) {
                for (i, c) in x.iter() {
                    poly_add(&mut expanded, &polys[i], c);
                }
            }
            assert_eq!(expanded, tree_poly(&t));
        }
    }
}

#[test]
fn heisenberg_brute_force() {
    assert_eq!(brute_force_prolongation(&RealAlgebra::heisenberg(), 5), vec![2, 2, 1, 0]);
}

#[test]
fn prolongation_matches_brute_force() {
    for (n, mu, max_level) in [(1, 2, 5), (1, 3, 4), (1, 4, 4), (1, 5, 3), (2, 2, 2)] {
        let s = build_symbol(build_universal_cr(n, mu, DEFAULT_BASIS_CAP).unwrap(), &[]).unwrap();
        let ours = prolong_until_zero(&s, max_level).unwrap();
        let oracle = brute_force_prolongation(&RealAlgebra::from_symbol(&s), max_level);
        assert_eq!(ours.real_dims(), oracle, "n={n} mu={mu}");
    }
}

#[test]
fn prolongation_with_ideal_matches_brute_force() {
    let ideal = vec!["[E1,[E1,[E1,F1]]] + [F1,[F1,[E1,F1]]]".to_string()];
    let s = build_symbol(build_universal_cr(1, 4, DEFAULT_BASIS_CAP).unwrap(), &ideal).unwrap();
    let ours = prolong_until_zero(&s, 4).unwrap();
    let oracle = brute_force_prolongation(&RealAlgebra::from_symbol(&s), 4);
    assert_eq!(ours.real_dims(), oracle);
    assert_eq!(oracle[1], 0);
}
