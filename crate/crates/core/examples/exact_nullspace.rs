// Exact rational nullspace of a small integer matrix.
//
// ```text
// cargo run --example exact_nullspace
// ```

use masckit::linalg::text::rational_string;
use masckit::linalg::{nullspace_basis, RealMatrix};

pub fn run_example() -> masckit::Result<()> {
    // incidence matrix of a directed triangle
    let phi = RealMatrix::from_integers(3, 3, &[-1, 0, 1, 1, -1, 0, 0, 1, -1])?;
    let b = nullspace_basis(&phi)?;
    println!("rank {} dim null {}", phi.rank(), b.dim());
    for v in b.vectors() {
        let text: Vec<String> = v.iter().map(rational_string).collect();
        println!("  [{}]", text.join(", "));
        assert!(phi.mul_vec_rational(v).iter().all(num_traits::Zero::is_zero));
    }
    assert_eq!(b.dim(), 1);
    Ok(())
}

#[allow(dead_code)]
fn main() -> masckit::Result<()> {
    run_example()
}
