// Partial DFT measurements at prime length: membership and sparsity levels.

use masckit::dft::{coherence_lower_bound, masc_contains_dft, s_max_exact, s_max_sampled, PartialDftSpec, DEFAULT_GAMMA_CAP};
use masckit::SupportSet;

pub fn run_example() -> masckit::Result<()> {
    let spec = PartialDftSpec::contiguous(19, 7)?;
    println!("n=19, {} rows observed", spec.omega().len());

    for idx in [vec![0], vec![0, 1], vec![0, 9], vec![0, 1, 2, 3]] {
        let s = SupportSet::new(19, idx)?;
        let v = masc_contains_dft(&spec, &s)?;
        println!("{s}: {} (margin {:.4})", v.label(), v.margin.to_f64());
    }

    let bound = coherence_lower_bound(&spec)?;
    println!("coherence bound {} -> s <= {}", bound.bound, bound.s_guaranteed);
    println!("sampled MRSL {}", s_max_sampled(&spec, 300, 42)?);
    println!("exact MRSL {}", s_max_exact(&spec, DEFAULT_GAMMA_CAP)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> masckit::Result<()> {
    run_example()
}
