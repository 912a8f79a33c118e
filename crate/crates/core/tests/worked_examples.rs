use num_bigint::BigUint;

use hierapprox::expand::expand;
use hierapprox::hardgen::{eval_circuit, gen_mtg_chain};
use hierapprox::hiersat::{expand_formula, hmax_3sat};
use hierapprox::indset::hind_set;
use hierapprox::maxcut::hmax_cut;
use hierapprox::oracle::{exact_max_3sat, exact_max_cut, exact_max_independent_set, exact_min_vertex_cover, fixtures};
use hierapprox::simplify::make_simple;
use hierapprox::spec::stats;
use hierapprox::vcover::hvc;

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

#[test]
fn chain3_is_a_six_path() {
    let spec = fixtures::chain(3);
    let g = expand(&spec, 100).unwrap();
    assert_eq!((g.vertex_count(), g.edges.len()), (6, 5));
    assert_eq!(exact_min_vertex_cover(&g).unwrap(), 3);
    assert_eq!(exact_max_independent_set(&g).unwrap(), 3);
    assert_eq!(exact_max_cut(&g).unwrap(), 5);
    // every level matches its own u-v edge
    assert_eq!(hvc(&spec).unwrap().psi, big(6));
    assert_eq!(hmax_cut(&spec).unwrap().e, big(5));
    assert_eq!(hind_set(&spec, None).unwrap().size, big(3));
}

#[test]
fn towers_grow_exponentially() {
    for k in 1..=10 {
        let spec = fixtures::tower(k);
        let st = stats(&spec);
        let g = expand(&spec, 1 << 12).unwrap();
        let vertices = 2 * ((1u64 << k) - 1);
        assert_eq!(st.expansion_vertices, big(vertices));
        assert_eq!(g.vertex_count() as u64, vertices);
        assert_eq!(g.edges.len() as u64, vertices - 1);
    }
    let st = stats(&fixtures::tower(25));
    assert_eq!(st.expansion_vertices, big(67_108_862));
    assert_eq!(st.tree_nodes, big((1 << 25) - 1));
    // a perfect matching: every a-b pair
    assert_eq!(hvc(&fixtures::tower(25)).unwrap().psi, big(67_108_862));
}

#[test]
fn pinpair_simplifies_to_a_caller_edge() {
    let spec = fixtures::pinpair();
    assert!(!spec.is_simple());
    let simple = make_simple(&spec);
    assert!(simple.is_simple());
    assert_eq!(hvc(&spec).unwrap_err().code(), "not-simple");
    assert!(hvc(&simple).is_ok());
}

#[test]
fn nested_formula_values() {
    let f = fixtures::nested_formula();
    let cnf = expand_formula(&f, 100).unwrap();
    assert_eq!(cnf.clauses.len(), 7);
    assert_eq!(cnf.variables.len(), 14);
    // every clause has a private variable, so all are satisfiable together
    assert_eq!(exact_max_3sat(&cnf).unwrap(), 7);
    let r = hmax_3sat(&f).unwrap();
    assert!(r.heu >= big(4) && r.heu <= big(7));
}

#[test]
fn two_call_circuit_chain() {
    let c = fixtures::two_call_circuit();
    let m = gen_mtg_chain(&c).unwrap();
    // size 18; both cells have size 9 and get 162 chain gates, the first twice
    assert_eq!(c.size(), 18);
    assert_eq!(m.chain_length, big(2 * 162 + 162));
    let d = eval_circuit(&m.circuit, 1 << 12).unwrap();
    assert_eq!((d.output, d.true_gates), (false, 0));
    let mut one = c.clone();
    one.cells[1].inputs[0].1 = true;
    let m = gen_mtg_chain(&one).unwrap();
    let d = eval_circuit(&m.circuit, 1 << 12).unwrap();
    assert_eq!(d.true_gates, 5 + 486);
}
