// Monte Carlo recovery rates, compared against the MASC verdict.

use masckit::linalg::{nullspace_basis, RealMatrix};
use masckit::masc::nullspace_constant;
use masckit::recovery::{mrsl_naive, recovery_rate, TrialConfig};

pub fn run_example() -> masckit::Result<()> {
    let phi = RealMatrix::from_integers(3, 5, &[1, 0, 0, 1, 1, 0, 1, 0, 1, -1, 0, 0, 1, -1, 1])?;
    let b = nullspace_basis(&phi)?;
    for s in 1..=3 {
        let r = recovery_rate(&phi, &TrialConfig::new(s, 200, 7))?;
        let nsc = nullspace_constant(s, &b)?;
        println!("s={s} rate={:.3} nsc={nsc}", r.rate());
    }
    // largest s for which 200 random trials all succeed
    println!("naive MRSL estimate: {}", mrsl_naive(&phi, 200, 7)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> masckit::Result<()> {
    run_example()
}
