//! The quadratic algebra L for each splitting type, with beta units and
//! the coset representatives of o_L^x.

use gsp4_bessel::hecke::verify_beta_units;
use gsp4_bessel::padic::{build_field_data, qi};

fn main() {
    for (p, a, b, c) in [(3, 1, 0, 1), (2, -1, 1, 1), (5, 5, 0, 1), (5, 0, 1, 1)] {
        let fd = build_field_data(p, a, b, c).unwrap();
        println!("p={} (a,b,c)=({},{},{}) d={} case={}", p, a, b, c, fd.d, fd.case.name());
        let units: Vec<bool> = (0..p).map(|w| fd.beta_wm(&qi(w as i64), 0).1).collect();
        println!("  beta_w^0 unit for w = 0..{}: {:?}", p - 1, units);
        println!("  residues with alpha + w a unit: {:?}", fd.unit_residues());
        let reps = fd.unit_coset_reps(1).unwrap();
        println!("  {} coset representatives at m = 1", reps.len());
        let bad = verify_beta_units(&fd, 2).iter().filter(|r| !r.passed()).count();
        println!("  beta-unit rows failing: {}", bad);
    }
    println!("{:?}", build_field_data(5, 1, 0, 5).unwrap_err().to_string());
}
