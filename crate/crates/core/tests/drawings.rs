mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wgg_core::drawings::{
    draw_complete_bipartite, draw_tree, hexagonal_instance, min_piercing, tree_layout, Drawing,
};
use wgg_core::geom::{general_position_check, DiametralDisk, Point, Tolerance};
use wgg_core::verify::quick_reject;

fn all_points(d: &Drawing) -> Vec<Point> {
    d.instance
        .vertices
        .iter()
        .chain(&d.instance.witnesses)
        .copied()
        .collect()
}

#[test]
fn small_trees_are_in_general_position() {
    let tol = Tolerance::default();
    for n in 2..=7 {
        for parents in common::rooted_trees(n) {
            let d = draw_tree(&common::tree_from(&parents), &tol).unwrap();
            let pts = all_points(&d);
            let bad = general_position_check(&pts, &Tolerance::for_points(pts.iter()));
            assert!(
                bad.is_empty(),
                "{parents:?}: {:?}",
                &bad[..bad.len().min(3)]
            );
        }
    }
}

#[test]
fn bipartite_drawings_are_in_general_position() {
    let tol = Tolerance::default();
    for m in 2..=6 {
        for n in 1..=m {
            let d = draw_complete_bipartite(m, n, &tol).unwrap();
            let pts = all_points(&d);
            let bad = general_position_check(&pts, &Tolerance::for_points(pts.iter()));
            assert!(bad.is_empty(), "K_{m},{n}: {:?}", &bad[..bad.len().min(3)]);
        }
    }
}

#[test]
fn bipartite_disks_split_by_colour() {
    let tol = Tolerance::default();
    for m in 2..=8 {
        for n in 1..=m {
            let d = draw_complete_bipartite(m, n, &tol).unwrap();
            let v = &d.instance.vertices;
            for i in 0..m + n {
                for j in i + 1..m + n {
                    let disk = DiametralDisk::new(v[i], v[j]).unwrap();
                    let hit = d.instance.witnesses.iter().any(|&w| disk.blocks(w, &tol));
                    assert_eq!(hit, (i < m) == (j < m), "K_{m},{n} pair ({i}, {j})");
                }
            }
        }
    }
}

#[test]
fn hexagon_piercing_number() {
    let h = hexagonal_instance(1).unwrap();
    let k = min_piercing(
        &h.diametral_disks(),
        &Tolerance::for_points(h.points.iter()),
    );
    println!("minimum piercing of the 6 hexagon disks: {k:?}");
    assert_eq!(k, Some(3));
}

#[test]
fn tree_drawings_pass_the_wedge_filter() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in [3, 8, 15, 25] {
        let t = common::TreeSpec::prufer(&mut rng, n).tree();
        let d = draw_tree(&t, &Tolerance::default()).unwrap();
        assert_eq!(quick_reject(&d.embedded()), None);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_layout_reach_and_planarity(seed in any::<u64>(), n in 2usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = common::TreeSpec::random_parent(&mut rng, n).tree();
        let (pos, state) = tree_layout(&t);
        for j in 1..n {
            for k in t.descendants(j) {
                prop_assert!(pos[k].dist(pos[j]) < state[j].reach);
            }
        }
        prop_assert!(common::non_crossing(&pos, &t.edges()));
    }

    #[test]
    fn random_trees_round_trip(seed in any::<u64>(), n in 1usize..26) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = common::TreeSpec::prufer(&mut rng, n).tree();
        let tol = Tolerance::default();
        let d = draw_tree(&t, &tol).unwrap();
        prop_assert!(d.round_trips(&tol));
        prop_assert!(common::non_crossing(&d.instance.vertices, &d.expected));
        prop_assert_eq!(d.instance.witnesses.len(), 2 * (n - 1));
    }
}
