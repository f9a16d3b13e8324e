// Graph incidence matrices: cycles, girth and the cycle-based MASC test.

use masckit::graph::{enumerate_simple_cycles, girth, masc_contains_graph, max_uniform_sparsity, nsc_graph, DirectedSimpleGraph};
use masckit::SupportSet;

pub fn run_example() -> masckit::Result<()> {
    // two cycles sharing an edge: lengths 3 and 5
    let g = DirectedSimpleGraph::theta(1, 2, 4)?;
    println!("{} vertices, {} edges", g.vertex_count(), g.edge_count());
    for c in enumerate_simple_cycles(&g)? {
        println!("  cycle {:?}", c.edges);
    }
    println!("girth {:?}", girth(&g));
    for s in 1..=3 {
        println!("nsc({s}) = {}", nsc_graph(s, &g)?);
    }
    println!("every support of size <= {} is recoverable", max_uniform_sparsity(&g));

    for edges in [vec![0], vec![0, 1]] {
        let s = SupportSet::new(g.edge_count(), edges)?;
        let v = masc_contains_graph(&g, &s)?;
        println!("{s}: {}", v.label());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> masckit::Result<()> {
    run_example()
}
