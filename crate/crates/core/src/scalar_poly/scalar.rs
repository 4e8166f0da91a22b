use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Signed};

/// An exact field element usable as a polynomial coefficient.
///
/// Implemented for `Ratio<I>`; the integer parts are exposed so linear algebra
/// can run fraction-free.
pub trait Scalar: Clone + Debug + Display + Eq + Ord + Hash + Signed + Send + Sync + 'static {
    type Int: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + Send + Sync + 'static;

    fn numer_part(&self) -> &Self::Int;
    fn denom_part(&self) -> &Self::Int;
    fn from_parts(numer: Self::Int, denom: Self::Int) -> Self;
    fn from_int(value: Self::Int) -> Self;

    fn from_i64(value: i64) -> Self {
        Self::from_int(Self::Int::from_i64(value).expect("integer conversion"))
    }

    fn frac(numer: i64, denom: i64) -> Self {
        Self::from_parts(
            Self::Int::from_i64(numer).expect("integer conversion"),
            Self::Int::from_i64(denom).expect("integer conversion"),
        )
    }

    fn is_integer(&self) -> bool {
        self.denom_part().is_one()
    }
}

impl<I> Scalar for Ratio<I>
where
    I: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + Send + Sync + 'static,
{
    type Int = I;

    fn numer_part(&self) -> &I {
        self.numer()
    }

    fn denom_part(&self) -> &I {
        self.denom()
    }

    fn from_parts(numer: I, denom: I) -> Self {
        Ratio::new(numer, denom)
    }

    fn from_int(value: I) -> Self {
        Ratio::from_integer(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type Q = Ratio<BigInt>;

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let q = Q::frac(6, -4);
        assert_eq!(q.to_string(), "-3/2");
        assert!(q.denom_part() > &BigInt::from(0));
        assert_eq!(Q::frac(0, 5).denom_part(), &BigInt::from(1));
    }

    #[test]
    fn small_ratio_also_qualifies() {
        let q = Ratio::<i64>::frac(2, 4);
        assert_eq!(q, Ratio::new(1, 2));
        assert!(!q.is_integer());
    }
}
