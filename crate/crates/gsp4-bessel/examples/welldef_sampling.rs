//! Samples the stabilizer R ∩ f I f^-1 of a few frames and checks the
//! character is trivial on it unless B vanishes there.

use gsp4_bessel::bessel::{BesselCtx, CosetAddress, LambdaSpec, WTag};
use gsp4_bessel::grp::Weyl;
use gsp4_bessel::hecke::{coset_volume, welldef_check};
use gsp4_bessel::padic::build_field_data;
use gsp4_bessel::scalars::Scalar;
use rand::SeedableRng;

fn main() {
    let fd = build_field_data(5, 5, 0, 1).unwrap();
    let lambda = LambdaSpec::new(&fd, 0, 0, Some(Scalar::from_int(-1))).unwrap();
    let ctx = BesselCtx::new(fd, lambda, -1).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for a in [
        CosetAddress::tagged(-1, WTag::W0, Weyl::S2),
        CosetAddress::plain(-1, 1, Weyl::S1S2),
        CosetAddress::plain(0, 2, Weyl::E),
        CosetAddress::plain(-2, 0, Weyl::S2S1S2),
    ] {
        let row = welldef_check(&ctx, &a, 200, &mut rng).unwrap();
        let vol = coset_volume(&ctx.fd, &a).unwrap();
        println!("{:<22} {:?} {:<28} vol {}", a.to_string(), row.status, row.lhs, vol);
    }
}
