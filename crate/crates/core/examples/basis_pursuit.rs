// Recover a sparse signal by l1-minimization.

use masckit::linalg::RealMatrix;
use masckit::recovery::{basis_pursuit, RecoveryProblem};

pub fn run_example() -> masckit::Result<()> {
    let phi = RealMatrix::from_integers(3, 6, &[1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 1, 1])?;
    let x_bar = [0.0, 0.0, 0.0, 1.5, 0.0, 0.0];
    let p = RecoveryProblem::from_signal(&phi, &x_bar)?;
    let sol = basis_pursuit(&p)?;
    println!("x_hat = {:?}", sol.x);
    println!("status {:?} after {} pivots", sol.status, sol.pivots);
    let err: f64 = sol.x.iter().zip(x_bar).map(|(a, b)| (a - b).abs()).sum();
    assert!(err < 1e-8, "not recovered: {err}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> masckit::Result<()> {
    run_example()
}
