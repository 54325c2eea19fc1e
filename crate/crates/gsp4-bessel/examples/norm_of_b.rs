//! The norm of B: truncated sum, geometric completion, and the closed form.

use gsp4_bessel::bessel::{BesselCtx, LambdaSpec};
use gsp4_bessel::hecke::{norm_check, norm_closed_form, norm_sums};
use gsp4_bessel::padic::build_field_data;
use gsp4_bessel::scalars::{Scalar, UnitRootExp};

fn main() {
    let fd = build_field_data(3, 1, 0, 1).unwrap();
    let lambda = LambdaSpec::new(&fd, 1, 0, None).unwrap();
    let ctx = BesselCtx::new(fd, lambda, 1).unwrap();
    let sums = norm_sums(&ctx, 4, 4).unwrap();
    println!("inert q=3 m0=1");
    println!("  truncated {}", sums.truncated);
    println!("  completed {}", sums.completed);
    println!("  closed    {}", norm_closed_form(&ctx).unwrap());
    for r in norm_check(&ctx, 4, 4).unwrap() {
        println!("  {} {:?}", r.check, r.status);
    }

    // split with a non-real lam; the closed form involves |1 + omega lam^-1|^2
    let fd = build_field_data(5, 0, 1, 1).unwrap();
    let lambda = LambdaSpec::new(&fd, 1, 0, Some(Scalar::root(UnitRootExp::new(1, 6)))).unwrap();
    let ctx = BesselCtx::new(fd, lambda, -1).unwrap();
    let sums = norm_sums(&ctx, 4, 4).unwrap();
    println!("split q=5 m0=1: completed {} closed {}", sums.completed, norm_closed_form(&ctx).unwrap());
}
