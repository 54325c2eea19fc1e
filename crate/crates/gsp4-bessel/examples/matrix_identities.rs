//! The named matrices and the identity suite, plus a Bruhat cell lookup.

use gsp4_bessel::grp::{bruhat_cell, h_lm, in_iwahori, matrix_identity_suite, random_iwahori, s1, s2, FMat};
use gsp4_bessel::padic::build_field_data;
use rand::SeedableRng;

fn main() {
    let fd = build_field_data(3, 1, 0, 1).unwrap();
    let rows = matrix_identity_suite(&fd);
    let failed = rows.iter().filter(|r| !r.passed()).count();
    println!("{} identity rows, {} failing", rows.len(), failed);

    println!("h(1,2) = {}", h_lm(3, 1, 2).unwrap());
    let w = s1().mul(&s2());
    println!("s1 s2 similitude = {}", w.similitude().unwrap());
    println!("s1 s2 in I: {}", in_iwahori(&w, 3));

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let k = random_iwahori(3, &mut rng).mul(&s2()).mul(&random_iwahori(3, &mut rng));
    let (cell, _) = bruhat_cell(&k, 3).unwrap();
    println!("random k in I s2 I lies in cell {:?}", cell);
    println!("identity in I: {}", in_iwahori(&FMat::identity(), 3));
}
