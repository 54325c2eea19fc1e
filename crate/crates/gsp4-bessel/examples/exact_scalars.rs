//! Cyclotomic scalars, indeterminates and rational functions in X = q^-s.

use gsp4_bessel::scalars::{geometric_closed_form, parse_ratfun, parse_scalar, Scalar, UnitRootExp, Var};

fn main() {
    let z3 = Scalar::root(UnitRootExp::new(1, 3));
    // 1 + z + z^2 = 0
    println!("1 + z3 + z3^2 = {}", Scalar::one() + z3.clone() + z3.powi(2));
    // sqrt(q) is a Gauss sum in Q(zeta_q)
    println!("sqrt(5)^3 = {}", Scalar::sqrt_p_pow(5, 3));

    let lam = Scalar::var(Var::Lam);
    let x = (&lam + &Scalar::one()) * (&lam - &Scalar::one()).inv().unwrap();
    println!("(lam+1)/(lam-1) = {}", x);
    println!("parsed back equal: {}", parse_scalar(&x.to_string()).unwrap() == x);

    // sum_l (r X^3)^l
    let g = geometric_closed_form(&Scalar::one(), &Scalar::frac(1, 25), 3).unwrap();
    println!("geometric series = {}", g);
    println!("first terms = {:?}", g.series(7).unwrap().iter().map(|c| c.to_string()).collect::<Vec<_>>());
    println!("{}", parse_ratfun("1/(1 - at*X^3)").unwrap());
}
