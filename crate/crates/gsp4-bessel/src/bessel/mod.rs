//! Characters, coset addresses, the Bessel value table, and reduction of
//! group elements to addresses.

pub mod address;
pub mod lambda;
pub mod reduce;
pub mod table;

pub use address::{parse_address, CosetAddress, WTag};
pub use lambda::{psi, theta_eval, LambdaSpec};
pub use reduce::{b_eval, reduce, Reduction};
pub use table::b_table;

use crate::error::{Error, Result};
use crate::padic::{Case, FieldData, LElem};
use crate::scalars::Scalar;

/// Everything the table and the reduction depend on.
#[derive(Clone, Debug)]
pub struct BesselCtx {
    pub fd: FieldData,
    pub lambda: LambdaSpec,
    /// `omega = -Omega(varpi)`.
    pub omega: i64,
}

/// Outcome of the test-vector criterion.  With a symbolic `lam` the split
/// answer is "yes unless `lam` equals the given value".
#[derive(Clone, Debug, PartialEq)]
pub enum TestVector {
    Yes,
    No,
    UnlessLamIs(Scalar),
}

impl BesselCtx {
    pub fn new(fd: FieldData, lambda: LambdaSpec, omega: i64) -> Result<BesselCtx> {
        if omega != 1 && omega != -1 {
            return Err(Error::ParamDomain(format!("omega must be +1 or -1, got {}", omega)));
        }
        Ok(BesselCtx { fd, lambda, omega })
    }

    pub fn q(&self) -> u64 {
        self.fd.p
    }

    pub fn omega_s(&self) -> Scalar {
        Scalar::from_int(self.omega)
    }

    pub fn lambda_eval(&self, z: &LElem) -> Result<Scalar> {
        self.lambda.eval(&self.fd, z)
    }

    /// `Lambda = Omega o N` with `L` a field.
    pub fn is_dim_zero(&self) -> bool {
        self.lambda.m0 == 0
            && match self.fd.case {
                Case::Inert => true,
                Case::Ramified => self.lambda.unif == Scalar::from_int(-self.omega),
                Case::Split => false,
            }
    }

    /// Split, unramified, with `omega Lambda((1, varpi)) = -1` decided true.
    pub fn is_split_degenerate(&self) -> bool {
        self.fd.case == Case::Split
            && self.lambda.m0 == 0
            && !self.lambda.is_symbolic()
            && self.lambda.unif == Scalar::from_int(-self.omega)
    }

    pub fn dim_and_testvector(&self) -> (u32, TestVector) {
        if self.is_dim_zero() {
            return (0, TestVector::No);
        }
        if self.lambda.m0 > 1 {
            return (1, TestVector::No);
        }
        if self.fd.case == Case::Split && self.lambda.m0 == 0 {
            if self.lambda.is_symbolic() {
                return (1, TestVector::UnlessLamIs(Scalar::from_int(-self.omega)));
            }
            if self.is_split_degenerate() {
                return (1, TestVector::No);
            }
        }
        (1, TestVector::Yes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::build_field_data;

    fn ctx(p: u64, abc: (i64, i64, i64), m0: u32, unif: Option<Scalar>, omega: i64) -> BesselCtx {
        let fd = build_field_data(p, abc.0, abc.1, abc.2).unwrap();
        let l = LambdaSpec::new(&fd, m0, 0, unif).unwrap();
        BesselCtx::new(fd, l, omega).unwrap()
    }

    #[test]
    fn dims() {
        assert_eq!(ctx(3, (1, 0, 1), 0, None, -1).dim_and_testvector(), (0, TestVector::No));
        assert_eq!(ctx(3, (1, 0, 1), 1, None, -1).dim_and_testvector(), (1, TestVector::Yes));
        assert_eq!(ctx(3, (1, 0, 1), 2, None, -1).dim_and_testvector(), (1, TestVector::No));
        // ramified: dim 0 exactly when Lambda(varpi_L) = Omega(varpi) = -omega
        assert_eq!(ctx(5, (5, 0, 1), 0, Some(Scalar::one()), -1).dim_and_testvector().0, 0);
        assert_eq!(ctx(5, (5, 0, 1), 0, Some(Scalar::one()), 1).dim_and_testvector().0, 1);
        // split: Lambda((1,varpi)) = lam^-1 = Omega(varpi) = -omega
        assert_eq!(ctx(5, (0, 1, 1), 0, Some(Scalar::one()), -1).dim_and_testvector(), (1, TestVector::No));
        assert_eq!(ctx(5, (0, 1, 1), 0, Some(Scalar::from_int(2)), -1).dim_and_testvector(), (1, TestVector::Yes));
        assert_eq!(
            ctx(5, (0, 1, 1), 0, None, 1).dim_and_testvector(),
            (1, TestVector::UnlessLamIs(Scalar::from_int(-1)))
        );
        assert!(BesselCtx::new(build_field_data(3, 1, 0, 1).unwrap(), ctx(3, (1, 0, 1), 0, None, 1).lambda, 2).is_err());
    }
}
