mod common;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use proptest::prelude::*;

use hierapprox::expand::{canonical, expand};
use hierapprox::hardgen::{eval_circuit, gen_mtg_chain, parse_circuit, serialize_circuit};
use hierapprox::hiersat::{
    bipartite_graph, expand_formula, flat_assignment, fmax_3sat, half_clauses, hmax_3sat, parse_formula,
    serialize_formula, tform,
};
use hierapprox::hsolution::{parse_solution, serialize_solution};
use hierapprox::indset::{hind_set, is_maximal_independent};
use hierapprox::maxcut::{cut_size, fmax_cut, hmax_cut};
use hierapprox::oracle::{
    multigraph_equal, random_circuit, random_collision_free_spec, random_formula, random_graph, SpecParams,
};
use hierapprox::simplify::{make_simple, pin_closure};
use hierapprox::spec::{parse_spec, serialize_spec, stats, validate};
use hierapprox::vcover::{bipartite_maximum_matching, greedy_maximal_matching, hvc};
use hierapprox::{FlatGraph, VertexPath};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 96,
        ..ProptestConfig::default()
    }
}

/// Clause vertices identified by their variable neighbourhoods.
fn clause_shapes(g: &FlatGraph, is_clause: impl Fn(&VertexPath) -> bool) -> BTreeMap<Vec<String>, usize> {
    let adj = g.adjacency();
    let mut bag = BTreeMap::new();
    for (v, label) in g.vertices.iter().enumerate() {
        if is_clause(label) {
            let mut nb: Vec<String> = adj[v].iter().map(|&w| g.vertices[w].to_string()).collect();
            nb.sort();
            *bag.entry(nb).or_insert(0) += 1;
        }
    }
    bag
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn spec_text_round_trip(seed in any::<u64>()) {
        let spec = spec_corpus_entry(seed);
        prop_assert!(validate(&spec).is_empty());
        prop_assert_eq!(parse_spec(&serialize_spec(&spec)).unwrap(), spec);
    }

    #[test]
    fn stats_match_expansion(seed in any::<u64>()) {
        let spec = spec_corpus_entry(seed);
        let st = stats(&spec);
        let g = expand(&spec, 500).unwrap();
        prop_assert_eq!(st.expansion_vertices, BigUint::from(g.vertex_count()));
        prop_assert_eq!(st.expansion_edges, BigUint::from(g.edges.len()));
        let deg = g.adjacency().iter().map(Vec::len).max().unwrap_or(0);
        prop_assert_eq!(st.max_degree, BigUint::from(deg));
        for v in &g.vertices {
            prop_assert_eq!(&canonical(&spec, v).unwrap(), v);
        }
    }

    #[test]
    fn vertex_cover_is_twice_a_maximal_matching(seed in any::<u64>()) {
        let spec = spec_corpus_entry(seed);
        let r = hvc(&spec).unwrap();
        let g = expand(&spec, 500).unwrap();
        let cover = r.solution.flatten(500).unwrap();
        prop_assert_eq!(BigUint::from(cover.len()), r.psi.clone());
        prop_assert!(g.edges.iter().all(|&(a, b)| cover.contains(&g.vertices[a]) || cover.contains(&g.vertices[b])));
        prop_assert!(r.levels.iter().all(|l| l.private_partner_holds()));
    }

    #[test]
    fn cut_value_is_recounted(seed in any::<u64>()) {
        let spec = spec_corpus_entry(seed);
        let r = hmax_cut(&spec).unwrap();
        let g = expand(&spec, 500).unwrap();
        let ones = r.solution.flatten(500).unwrap();
        let side: Vec<bool> = g.vertices.iter().map(|v| ones.contains(v)).collect();
        prop_assert_eq!(BigUint::from(cut_size(&g, &side)), r.e.clone());
        prop_assert!(r.e * 2u32 >= BigUint::from(g.edges.len()));
    }

    #[test]
    fn independent_set_is_maximal(seed in any::<u64>()) {
        let spec = spec_corpus_entry(seed);
        let r = hind_set(&spec, None).unwrap();
        let g = expand(&spec, 500).unwrap();
        let set = r.solution.flatten(500).unwrap();
        let chosen: Vec<bool> = g.vertices.iter().map(|v| set.contains(v)).collect();
        prop_assert!(is_maximal_independent(&g, &chosen));
    }

    #[test]
    fn solutions_survive_text(seed in any::<u64>()) {
        let spec = spec_corpus_entry(seed);
        let sol = hvc(&spec).unwrap().solution;
        prop_assert_eq!(parse_solution(&serialize_solution(&sol)).unwrap(), sol);
    }

    #[test]
    fn simplification_keeps_the_expansion(seed in any::<u64>()) {
        let s = random_collision_free_spec(seed, &SpecParams::default());
        let t = make_simple(&s);
        prop_assert!(t.is_simple());
        prop_assert!(multigraph_equal(&expand(&s, 500).unwrap(), &expand(&t, 500).unwrap()));
        prop_assert!(t.size() <= SIMPLIFY_SIZE_C * s.size() * s.size());
        prop_assert!(pin_closure(&t).cells.iter().all(Vec::is_empty));
        if s.is_simple() {
            prop_assert_eq!(t, s);
        }
    }

    #[test]
    fn formula_guarantees(seed in any::<u64>()) {
        let f = random_formula(seed, 500);
        prop_assert_eq!(parse_formula(&serialize_formula(&f)).unwrap(), f.clone());
        let cnf = expand_formula(&f, 500).unwrap();
        prop_assert_eq!(BigUint::from(cnf.clauses.len()), f.expansion_clauses());
        let r = hmax_3sat(&f).unwrap();
        let truth = flat_assignment(&cnf, &r.solution).unwrap();
        prop_assert!(BigUint::from(cnf.satisfied(&truth)) >= r.heu);
        prop_assert!(r.heu >= half_clauses(&BigUint::from(cnf.clauses.len())));
    }

    #[test]
    fn tform_expands_to_the_bipartite_graph(seed in any::<u64>()) {
        let f = random_formula(seed, 500);
        let spec = tform(&f).unwrap();
        prop_assert!(spec.size() <= TFORM_SIZE_C * f.size());
        let cnf = expand_formula(&f, 500).unwrap();
        let flat = bipartite_graph(&cnf);
        let hier = expand(&spec, 2000).unwrap();
        prop_assert_eq!(hier.vertex_count(), flat.vertex_count());
        prop_assert_eq!(hier.edges.len(), flat.edges.len());
        let vars: std::collections::HashSet<&VertexPath> = cnf.variables.iter().collect();
        let a = clause_shapes(&hier, |v| !vars.contains(v));
        let b = clause_shapes(&flat, |v| !vars.contains(v));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn chain_identity(seed in any::<u64>(), cells in 1usize..=4) {
        let c = random_circuit(seed, cells);
        prop_assert_eq!(parse_circuit(&serialize_circuit(&c)).unwrap(), c.clone());
        let base = eval_circuit(&c, 1 << 20).unwrap();
        let m = gen_mtg_chain(&c).unwrap();
        let d = eval_circuit(&m.circuit, 1 << 20).unwrap();
        let gained = BigUint::from(d.true_gates - base.true_gates);
        prop_assert_eq!(gained, if base.output { m.chain_length } else { BigUint::default() });
        let (cs, ds) = (c.size(), m.circuit.size());
        prop_assert!(ds <= MTG_SIZE_C * cs * cs);
    }

    #[test]
    fn flat_greedy_guarantees(seed in any::<u64>(), n in 1usize..12, density in 0u32..90) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, density);
        let order: Vec<usize> = (0..n).collect();
        let cut = fmax_cut(&g, &order);
        prop_assert_eq!(cut.size, cut_size(&g, &cut.side_one));
        prop_assert!(2 * cut.size >= g.edges.len());
        let mm = greedy_maximal_matching(n, &g.edges);
        let mut used = vec![false; n];
        for &(a, b) in &mm {
            prop_assert!(!used[a] && !used[b]);
            used[a] = true;
            used[b] = true;
        }
        prop_assert!(g.edges.iter().all(|&(a, b)| used[a] || used[b]));
        // each matched edge gives two disjoint edges of the bipartite double cover
        let m = bipartite_maximum_matching(n, &g.adjacency());
        prop_assert!(m.iter().flatten().count() >= 2 * mm.len());
    }

    #[test]
    fn flat_sat_greedy(seed in any::<u64>()) {
        let f = random_formula(seed, 60);
        let cnf = expand_formula(&f, 60).unwrap();
        let order: Vec<usize> = (0..cnf.variables.len()).collect();
        let (truth, heu) = fmax_3sat(&cnf, &order);
        prop_assert!(cnf.satisfied(&truth) >= heu);
        prop_assert!(2 * heu >= cnf.clauses.len());
    }
}
