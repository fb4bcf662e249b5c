use flipgame_core::basis::{PiSystem, SimpleBasis};
use flipgame_core::classify::Classifier;
use flipgame_core::oracle::{all_graphs, bfs_partition, find_witness, Limits, OrbitPartition};
use flipgame_core::{Config, GraphSpec, Parity};
use proptest::prelude::*;

fn all_states(n: usize) -> impl Iterator<Item = Config> {
    (0..1u64 << n).map(move |s| Config::from_u64(n, s))
}

#[test]
fn classify_matches_bfs_up_to_nine() {
    let lim = Limits::default();
    for g in all_graphs(9) {
        let cls = Classifier::new(&g).unwrap();
        let part = bfs_partition(&g, None, &lim).unwrap();
        let n = g.n();
        assert!(
            part.matches_keys(|s| cls.classify(&Config::from_u64(n, s as u64))),
            "{g}"
        );
    }
}

#[test]
fn feigning_moves_do_not_change_the_partition() {
    let lim = Limits::default();
    for g in all_graphs(7) {
        let strict = bfs_partition(&g, None, &lim).unwrap();
        let masks = g.word_masks().unwrap();
        let gens: Vec<usize> = (1..=g.n()).collect();
        // matrix action: u + u_v · column_v, which is the feigning move
        let feigning = OrbitPartition::from_step(g.n(), &gens, |x, v| {
            x ^ (masks[v - 1] as u32 * (x >> (v - 1) & 1))
        });
        assert_eq!(strict, feigning, "{g}");
    }
}

#[test]
fn sn_weight_rules_hold_on_every_state() {
    for g in all_graphs(9) {
        let p = PiSystem::new(&g);
        let b = SimpleBasis::new(&p).unwrap();
        for u in all_states(g.n()) {
            let got = b.sn_action(&g, &p, &u).simple_weight;
            assert_eq!(got, b.predicted_sn_weight(&p, &u), "{g} u={u}");
        }
    }
}

#[test]
fn sw_of_standard_matches_coordinates() {
    for g in all_graphs(10) {
        let p = PiSystem::new(&g);
        let b = SimpleBasis::new(&p).unwrap();
        for i in 1..=g.n() {
            assert_eq!(
                b.sw_of_standard(&p, i),
                b.simple_weight(&Config::unit(g.n(), i)),
                "{g} i={i}"
            );
        }
    }
}

#[test]
fn index_sets_are_the_weights_of_unit_vectors() {
    for g in all_graphs(10) {
        let cls = Classifier::new(&g).unwrap();
        let n = g.n();
        let mut i_set = Vec::new();
        let mut j_set = Vec::new();
        for v in 1..=n {
            let e = Config::unit(n, v);
            let sw = cls.basis().simple_weight(&e);
            if cls.basis().in_u(&e) {
                i_set.push(sw);
            } else {
                j_set.push(sw);
            }
        }
        i_set.sort_unstable();
        i_set.dedup();
        j_set.sort_unstable();
        j_set.dedup();
        let sets = cls.index_sets();
        assert_eq!(sets.i, i_set, "{g}");
        match cls.pi().parity() {
            Parity::Odd => assert_eq!(sets.j, None),
            Parity::Even => assert_eq!(sets.j.as_ref(), Some(&j_set), "{g}"),
        }
    }
}

#[test]
fn large_graphs_classify_consistently() {
    // beyond the oracle: a random walk of legal moves never changes the label
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for n in [40usize, 64, 65, 130] {
        let attach: Vec<usize> = (1..n).filter(|_| rng.gen_bool(0.2)).chain([n / 2]).collect();
        let g = GraphSpec::new(n, &attach).unwrap();
        let cls = Classifier::new(&g).unwrap();
        let mut u = Config::zeros(n);
        for i in 0..n {
            u.set(i, rng.gen());
        }
        let label = cls.classify(&u);
        for _ in 0..300 {
            let black: Vec<usize> = u.ones().map(|i| i + 1).collect();
            if black.is_empty() {
                break;
            }
            let v = black[rng.gen_range(0..black.len())];
            u = g.apply_move(&u, v, true).unwrap();
            assert_eq!(cls.classify(&u), label, "{g}");
        }
    }
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = GraphSpec> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::btree_set(1..n, 1..n).prop_map(move |s| {
            GraphSpec::new(n, &s.into_iter().collect::<Vec<_>>()).unwrap()
        })
    })
}

fn arb_with_configs() -> impl Strategy<Value = (GraphSpec, Config, Config, Vec<usize>)> {
    arb_graph(24).prop_flat_map(|g| {
        let n = g.n();
        (
            Just(g),
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(1..n.max(2), 0..12),
        )
            .prop_map(|(g, a, b, path)| {
                let to_cfg = |bits: Vec<bool>| {
                    let mut c = Config::zeros(bits.len());
                    for (i, x) in bits.into_iter().enumerate() {
                        c.set(i, x);
                    }
                    c
                };
                (g, to_cfg(a), to_cfg(b), path)
            })
    })
}

proptest! {
    #[test]
    fn simple_coordinates_round_trip_and_are_linear((g, u, v, _) in arb_with_configs()) {
        let p = PiSystem::new(&g);
        let b = SimpleBasis::new(&p).unwrap();
        let cu = b.simple_coords(&u);
        prop_assert_eq!(b.combine(&cu), u.clone());
        prop_assert_eq!(b.simple_coords(&(&u ^ &v)), &cu ^ &b.simple_coords(&v));
    }

    #[test]
    fn legal_moves_preserve_the_label((g, u, _, _) in arb_with_configs()) {
        let cls = Classifier::new(&g).unwrap();
        let label = cls.classify(&u);
        for v in 1..=g.n() {
            if let Ok(w) = g.apply_move(&u, v, true) {
                prop_assert_eq!(cls.classify(&w), label.clone());
            }
        }
    }

    #[test]
    fn path_moves_preserve_the_subgroup_key((g, u, _, path) in arb_with_configs()) {
        let cls = Classifier::new(&g).unwrap();
        let key = cls.path_subgroup_key(&u);
        let mut w = u.clone();
        for v in path.into_iter().filter(|&v| v < g.n()) {
            g.feign(&mut w, v);
            prop_assert_eq!(cls.path_subgroup_key(&w), key);
        }
    }

    #[test]
    fn decision_agrees_with_search((g, u, v, _) in arb_with_configs()) {
        prop_assume!(g.n() <= 14);
        let cls = Classifier::new(&g).unwrap();
        let witness = find_witness(&g, &u, &v, &Limits::default()).unwrap();
        prop_assert_eq!(witness.is_some(), cls.reachable(&u, &v).unwrap());
    }
}
