// Seeded Erdos-Renyi graphs around the cycle threshold.

use masckit::experiment::critical_probability;
use masckit::graph::{erdos_renyi, girth, max_uniform_sparsity};

pub fn run_example() -> masckit::Result<()> {
    let v = 30;
    let pc = critical_probability(v);
    for scale in [0.25, 0.5, 1.0, 2.0] {
        let g = erdos_renyi(v, (scale * pc).min(1.0), 1)?;
        println!(
            "p={:.4} edges={} girth={:?} uniform s={}",
            scale * pc,
            g.edge_count(),
            girth(&g),
            max_uniform_sparsity(&g)
        );
    }
    // same seed, same graph
    assert_eq!(erdos_renyi(v, pc, 9)?, erdos_renyi(v, pc, 9)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> masckit::Result<()> {
    run_example()
}
