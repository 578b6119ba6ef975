use std::time::Instant;
use toric::cohomology::ordinary_cohomology;
use toric::fan::example_4_3_triple;
use toric::isosearch::{preserves_pontrjagin, ring_isomorphisms};

fn main() {
    let t0 = Instant::now();
    let triple = example_4_3_triple();
    let rings: Vec<_> = triple
        .iter()
        .map(|f| ordinary_cohomology(f).unwrap())
        .collect();
    println!("setup: {:?}", t0.elapsed());
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let t = Instant::now();
        let isos = ring_isomorphisms(&rings[i], &rings[j], 3).unwrap();
        let found = isos.len();
        let preserving = isos
            .iter()
            .filter(|m| preserves_pontrjagin(m, &rings[i], &rings[j]).unwrap())
            .count();
        println!(
            "pair ({},{}): {} isos, {} preserve p, {:?}",
            i, j, found, preserving, t.elapsed()
        );
    }
    println!("total: {:?}", t0.elapsed());
}
