//! Fixed instances shared by the benchmarks.

use matroid_xf_core::{BasePolytope, Caps, Graph, Matroid};

pub fn fano() -> Matroid {
    Matroid::binary(&[
        vec![1, 0, 0, 1, 1, 0, 1],
        vec![0, 1, 0, 1, 0, 1, 1],
        vec![0, 0, 1, 0, 1, 1, 1],
    ])
    .expect("Fano matrix is loopless")
}

pub fn complete_graph(n: usize) -> Matroid {
    Matroid::graphic(Graph::complete(n)).expect("K_n has no loops")
}

/// Named instances, smallest first.
pub fn instances() -> Vec<(&'static str, Matroid)> {
    vec![
        ("U(2,4)", Matroid::uniform(2, 4).unwrap()),
        ("U(3,6)", Matroid::uniform(3, 6).unwrap()),
        ("K4", complete_graph(4)),
        ("Fano", fano()),
        ("K5", complete_graph(5)),
    ]
}

pub fn polytope(m: Matroid) -> BasePolytope {
    BasePolytope::new(m, &Caps::default()).expect("instance within default caps")
}
