//! Dimension, test vectors, table values and reduction of an arbitrary
//! group element to its coset address.

use gsp4_bessel::bessel::{b_eval, b_table, parse_address, reduce, BesselCtx, CosetAddress, LambdaSpec};
use gsp4_bessel::grp::{center, random_iwahori};
use gsp4_bessel::padic::{build_field_data, qi};
use gsp4_bessel::scalars::Scalar;
use rand::SeedableRng;

fn main() {
    let fd = build_field_data(5, 0, 1, 1).unwrap();
    let lambda = LambdaSpec::new(&fd, 0, 0, None).unwrap();
    // omega = -Omega(varpi)
    let ctx = BesselCtx::new(fd, lambda, -1).unwrap();
    println!("split p=5, m0=0, lam symbolic: {:?}", ctx.dim_and_testvector());

    for a in ["h(1,0)", "h(-1,1)·s1s2", "h(0,0)·W+·s1·s2", "h(2,2)·s2s1s2"] {
        let addr = parse_address(a).unwrap();
        println!("B({}) = {}", addr, b_table(&ctx, &addr).unwrap());
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let addr = CosetAddress::sweep(&ctx.fd, 0..=1, 1)[7];
    let g = center(&qi(25)).unwrap().mul(&addr.frame(&ctx.fd).unwrap()).mul(&random_iwahori(5, &mut rng));
    let red = reduce(&ctx, &g).unwrap();
    println!("z g k reduces to {} (expected {}), B = {}", red.addr, addr, b_eval(&ctx, &g).unwrap());

    let fd = build_field_data(5, 0, 1, 1).unwrap();
    let lambda = LambdaSpec::new(&fd, 0, 0, Some(Scalar::one())).unwrap();
    let ctx = BesselCtx::new(fd, lambda, -1).unwrap();
    println!("lam = Omega(varpi): {:?}", ctx.dim_and_testvector());
}
