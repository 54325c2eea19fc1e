//! The local zeta integral against every class of tau, and the identity
//! Z(s) = Y'(s) L(3s + 1/2, pi x tau~).

use gsp4_bessel::bessel::{BesselCtx, LambdaSpec};
use gsp4_bessel::padic::build_field_data;
use gsp4_bessel::scalars::Scalar;
use gsp4_bessel::zeta::{l_factor, verify_integral_theorem, whittaker_newform, TauClass, TauSpec, ZetaContext};

fn main() {
    let fd = build_field_data(5, 5, 0, 1).unwrap();
    let lambda = LambdaSpec::new(&fd, 0, 0, Some(Scalar::from_int(-1))).unwrap();
    let bessel = BesselCtx::new(fd, lambda, -1).unwrap();
    for class in TauClass::ALL {
        let tau = TauSpec::symbolic(class);
        let w2 = whittaker_newform(&tau, 5, 2).unwrap();
        let z = ZetaContext::new(bessel.clone(), tau).unwrap();
        let t = verify_integral_theorem(&z).unwrap();
        println!("{}", class);
        println!("  W(diag(p^2,1)) = {}", w2);
        println!("  Z(s) = {}", t.zeta);
        println!("  L    = {}", l_factor(&z).unwrap());
        println!("  difference {} series agrees {}", t.difference, t.series_ok);
    }
}
