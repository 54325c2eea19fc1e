//! Hecke and Atkin-Lehner conditions over a sweep of frames, and the
//! character sums.

use gsp4_bessel::bessel::{BesselCtx, LambdaSpec};
use gsp4_bessel::hecke::{char_sum, verify_hecke};
use gsp4_bessel::padic::build_field_data;
use gsp4_bessel::report::summarize;

fn main() {
    for (p, abc, m0) in [(3, (1, 0, 1), 1), (5, (5, 0, 1), 0), (5, (0, 1, 1), 1)] {
        let fd = build_field_data(p, abc.0, abc.1, abc.2).unwrap();
        let lambda = LambdaSpec::new(&fd, m0, 0, None).unwrap();
        let ctx = BesselCtx::new(fd, lambda, 1).unwrap();
        let rows = verify_hecke(&ctx, -2..=3, 0..=3);
        let s = summarize(&rows);
        println!("{} p={} m0={}: {} pass, {} fail", ctx.fd.case.name(), p, m0, s.pass, s.fail);
        for m in 0..3 {
            let (got, want) = char_sum(&ctx, m).unwrap();
            println!("  char sum m={}: {} (predicted {:?})", m, got, want.map(|w| w.to_string()));
        }
    }
}
