use std::collections::BTreeSet;

use sha2::{Digest, Sha256};

use pathpart::bounds::{counting_chain, epsilon_sandwich};
use pathpart::generators::{
    illustration_fixture, illustration_label, ILLUSTRATION_GRAPH, ILLUSTRATION_PATHS,
};
use pathpart::moves::assert_fixpoint_claims;
use pathpart::{Layering, Vertex};

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn label_set(names: &[&str]) -> BTreeSet<Vertex> {
    names
        .iter()
        .map(|n| illustration_label(n).unwrap())
        .collect()
}

#[test]
fn data_files_are_frozen() {
    assert_eq!(
        hex(&Sha256::digest(ILLUSTRATION_GRAPH.as_bytes())),
        "7a2df7fec542cf3141436441756a03db78b97ead8ba688fb9951b7e3be1ef2d9"
    );
    assert_eq!(
        hex(&Sha256::digest(ILLUSTRATION_PATHS.as_bytes())),
        "cfaf107c1ef27952def62d5c3165f2e3639327ae32897095f5ebe03328cf0aa6"
    );
}

#[test]
fn potential_and_classes() {
    let (g, p) = illustration_fixture();
    assert_eq!(g.vertex_count(), 38);
    assert_eq!(g.edge_count(), 42);
    let pot = p.potential();
    assert_eq!((pot.path_count, pot.p1, pot.p2), (11, 1, 3));
    let st = p.stats(None);
    assert_eq!(st.singletons, label_set(&["x1"]));
    assert_eq!(
        st.pair_ends,
        label_set(&["x2", "x3", "x4", "x5", "x6", "x7"])
    );
    assert_eq!(st.centers5, label_set(&["w5", "w6", "w7", "w8"]));
    assert_eq!(st.centers3, label_set(&["w1"]));
    assert!(st.interior4.is_superset(&label_set(&["w2", "w3", "w4"])));
}

#[test]
fn layers_match_the_listing() {
    let (g, p) = illustration_fixture();
    let l = Layering::build(&g, &p);
    assert_eq!(
        l.x_layers[0],
        label_set(&["x1", "x2", "x3", "x4", "x5", "x6", "x7"])
    );
    assert_eq!(
        l.x_layers[1],
        label_set(&[
            "x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9", "x10", "x11", "x12", "x13",
            "x14", "x15"
        ])
    );
    assert_eq!(l.w_layers[0], label_set(&["w1", "w2", "w3", "w4", "w5"]));
    assert_eq!(l.w_layers[1], label_set(&["w6", "w7"]));
    assert_eq!(l.w_layers[2], label_set(&["w8"]));
    assert!(l.w_layers[3].is_empty());
    assert_eq!(l.depth(), 4);
    let x: BTreeSet<Vertex> = (1..=21)
        .map(|i| illustration_label(&format!("x{i}")).unwrap())
        .collect();
    assert_eq!(l.x_union, x);
}

#[test]
fn alpha_of_w8_has_three_steps() {
    let (g, p) = illustration_fixture();
    let l = Layering::build(&g, &p);
    let w8 = illustration_label("w8").unwrap();
    let a = l.alpha_sequence(&p, w8).unwrap();
    assert_eq!(a.len(), 3);
    assert_eq!(a.last_w(), w8);
    for (t, step) in a.steps.iter().enumerate() {
        assert!(g.has_edge(step.x, step.w));
        assert_eq!(l.w_layer_of[&step.w], t + 1);
        assert_eq!(l.x_layer_of[&step.x], t + 1);
    }
}

#[test]
fn every_w_is_in_the_allowed_classes() {
    let (g, p) = illustration_fixture();
    let l = Layering::build(&g, &p);
    let report = assert_fixpoint_claims(&g, &p, &l).unwrap();
    assert!(report.w_classes.passed);
    assert_eq!(l.good_order.len() + l.bad.len(), l.w_union.len());
    // The drawing is an illustration, not an optimum: moves exist.
    assert!(!report.fixpoint);
    let eps = epsilon_sandwich(&g, &p, &l);
    assert!(eps.disjoint);
    let c = counting_chain(&g, &p, &l);
    assert_eq!(c.p, l.prime_paths.len());
    assert_eq!(c.n1 + c.n2, 38);
}
