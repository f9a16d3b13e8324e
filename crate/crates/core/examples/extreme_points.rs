// Extreme points of the nullspace cross-section and the MASC they induce.

use masckit::linalg::text::rational_string;
use masckit::linalg::{nullspace_basis, RealMatrix};
use masckit::masc::{enumerate_extreme_points, masc_contains, masc_enumerate, nullspace_constant};
use masckit::SupportSet;

pub fn run_example() -> masckit::Result<()> {
    let phi = RealMatrix::from_integers(1, 4, &[1, 1, 1, 2])?;
    let b = nullspace_basis(&phi)?;

    let points = enumerate_extreme_points(&b)?;
    println!("{} extreme points (up to sign)", points.len());
    for p in &points {
        let text: Vec<String> = p.vector().iter().map(rational_string).collect();
        println!("  [{}]", text.join(", "));
    }

    for s in 1..=3 {
        println!("nsc({s}) = {}", rational_string(&nullspace_constant(s, &b)?));
    }

    let s = SupportSet::new(4, [3])?;
    let v = masc_contains(&b, &s, None)?;
    println!("{s}: {} margin {}", v.label(), v.margin.to_f64());

    let complex = masc_enumerate(&b, 4)?;
    println!("MASC has {} faces", complex.face_count());
    assert_eq!(complex.contains(&s), v.in_masc);
    Ok(())
}

#[allow(dead_code)]
fn main() -> masckit::Result<()> {
    run_example()
}
