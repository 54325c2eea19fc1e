//! Where the section W^# can be nonzero among the frames h(0,m) t.

use gsp4_bessel::bessel::CosetAddress;
use gsp4_bessel::padic::build_field_data;
use gsp4_bessel::zeta::wsharp_support;

fn main() {
    let fd = build_field_data(3, 1, 0, 1).unwrap();
    for a in CosetAddress::sweep(&fd, 0..=0, 2) {
        println!("{:<22} {}", a.to_string(), wsharp_support(&fd, &a).unwrap());
    }
}
