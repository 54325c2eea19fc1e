//! [K^H : I] by enumerating flags over F_q, against (1+q)^2 (1+q^2).

use gsp4_bessel::hecke::{flag_index, poincare};

fn main() {
    for q in [2, 3] {
        println!("q={} index {} formula {}", q, flag_index(q).unwrap(), poincare(q));
    }
}
