mod common;

use common::{max_separated, Graph, GOLDEN};
use num_complex::Complex64;
use torus2c_core::{certify_separated, greedy_separated, FlFunction, FourierSeries, FourierTerm, SkewProduct};

fn systems() -> Vec<SkewProduct> {
    let wavy = FourierSeries::new(vec![FourierTerm::new(1u32.into(), Complex64::new(0.1, 0.05)).unwrap()]).unwrap();
    vec![
        SkewProduct::new(GOLDEN, FlFunction::linear(1)).unwrap(),
        SkewProduct::new(GOLDEN, FlFunction::fourier(2, wavy)).unwrap(),
    ]
}

#[test]
fn clique_search_on_known_graphs() {
    // 5-cycle plus a triangle hanging off vertex 0
    let mut g = Graph::new(7);
    for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (5, 6), (6, 0)] {
        g.add_edge(a, b);
    }
    assert_eq!(g.max_clique(), 3);
    let mut k = Graph::new(70);
    for a in 0..10 {
        for b in a + 1..10 {
            k.add_edge(a * 7, b * 7);
        }
    }
    assert_eq!(k.max_clique(), 10);
}

#[test]
fn greedy_never_beats_exhaustive_search() {
    for t in systems() {
        for n in 1..=3 {
            let eps = 0.45;
            let greedy = greedy_separated(&t, n, eps, 64).unwrap();
            assert_eq!(certify_separated(&t, &greedy.points, n, eps), None);
            let best = max_separated(&t, n, eps, 64);
            assert!(
                best >= greedy.count(),
                "n={n}: exhaustive {best} < greedy {}",
                greedy.count()
            );
        }
    }
}
