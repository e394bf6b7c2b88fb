//! The exact coefficient field Q(sqrt q).
//!
//! Every coefficient produced by the Hall algebra formulas is an integer
//! Laurent polynomial in v = sqrt(q) evaluated at a fixed prime q, hence
//! lives in the quadratic field Q(sqrt q) = { a + b v }. Since q is prime,
//! sqrt(q) is irrational and this really is a field, so exact equality is
//! decidable componentwise.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

use crate::{HallError, Result};

/// An element a + b*v of Q(sqrt q), with v^2 = q.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    q: u64,
    a: BigRational,
    b: BigRational,
}

impl Scalar {
    pub fn zero(q: u64) -> Self {
        Scalar { q, a: BigRational::zero(), b: BigRational::zero() }
    }

    pub fn one(q: u64) -> Self {
        Scalar { q, a: BigRational::one(), b: BigRational::zero() }
    }

    pub fn from_rational(q: u64, a: BigRational) -> Self {
        Scalar { q, a, b: BigRational::zero() }
    }

    pub fn from_int(q: u64, n: i128) -> Self {
        Scalar::from_rational(q, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_u128(q: u64, n: u128) -> Self {
        Scalar::from_rational(q, BigRational::from_integer(BigInt::from(n)))
    }

    /// a/b as a rational scalar.
    pub fn ratio(q: u64, num: i128, den: i128) -> Self {
        Scalar::from_rational(q, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// v^k, exactly: v^(2k) = q^k, v^(2k+1) = q^k * v, valid for negative k.
    pub fn v_pow(q: u64, k: i64) -> Self {
        let half = k.div_euclid(2);
        let odd = k.rem_euclid(2) == 1;
        let qk = if half >= 0 {
            BigRational::from_integer(BigInt::from(q).pow(half as u32))
        } else {
            BigRational::from_integer(BigInt::from(q).pow((-half) as u32))
                .recip()
        };
        if odd {
            Scalar { q, a: BigRational::zero(), b: qk }
        } else {
            Scalar { q, a: qk, b: BigRational::zero() }
        }
    }

    /// q^k for integer k (possibly negative).
    pub fn q_pow(q: u64, k: i64) -> Self {
        Scalar::v_pow(q, 2 * k)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn v_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(HallError::ZeroInverse);
        }
        // (a + bv)^-1 = (a - bv) / (a^2 - b^2 q)
        let qn = BigRational::from_integer(BigInt::from(self.q));
        let norm = &self.a * &self.a - &self.b * &self.b * qn;
        debug_assert!(!norm.is_zero(), "sqrt(q) rational? q must be prime");
        Ok(Scalar {
            q: self.q,
            a: &self.a / &norm,
            b: -(&self.b / &norm),
        })
    }

    /// Exact rational value, if the v-component vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    fn check(&self, other: &Scalar) {
        debug_assert_eq!(self.q, other.q, "mixed scalar fields");
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.check(&rhs);
        Scalar { q: self.q, a: self.a + rhs.a, b: self.b + rhs.b }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.check(&rhs);
        self.a += rhs.a;
        self.b += rhs.b;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.check(&rhs);
        Scalar { q: self.q, a: self.a - rhs.a, b: self.b - rhs.b }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { q: self.q, a: -self.a, b: -self.b }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        let qn = BigRational::from_integer(BigInt::from(self.q));
        Scalar {
            q: self.q,
            a: &self.a * &rhs.a + &self.b * &rhs.b * &qn,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = &*self * &rhs;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*v", self.b)
        } else if self.b.is_negative() {
            write!(f, "{} - {}*v", self.a, -self.b.clone())
        } else {
            write!(f, "{} + {}*v", self.a, self.b)
        }
    }
}

/// Serialization form used in JSON outputs: exact rational strings.
impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Scalar", 2)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.end()
    }
}

/// Rank of a matrix over Q(v), by exact Gaussian elimination. Rows may be
/// empty; all rows must share a width.
pub fn matrix_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut rows: Vec<Vec<Scalar>> = rows.iter().filter(|r| !r.is_empty()).cloned().collect();
    if rows.is_empty() {
        return 0;
    }
    let width = rows[0].len();
    debug_assert!(rows.iter().all(|r| r.len() == width));
    let mut rank = 0usize;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv().expect("nonzero pivot");
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone() * inv.clone();
            for c in col..width {
                let delta = factor.clone() * rows[rank][c].clone();
                rows[r][c] = rows[r][c].clone() - delta;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_and_defining_relation() {
        let x = Scalar::ratio(2, 3, 7) + Scalar::v_pow(2, 1);
        assert_eq!(Scalar::one(2) * x.clone(), x);
        let v = Scalar::v_pow(2, 1);
        assert_eq!(v.clone() * v, Scalar::from_int(2, 2));
    }

    #[test]
    fn v_inverse() {
        let v = Scalar::v_pow(2, 1);
        let vinv = v.inv().unwrap();
        assert_eq!(vinv, Scalar::v_pow(2, -1));
        assert_eq!(v * vinv, Scalar::one(2));
    }

    #[test]
    fn v_pow_examples() {
        assert_eq!(Scalar::v_pow(3, 0), Scalar::one(3));
        assert_eq!(Scalar::v_pow(3, 2), Scalar::from_int(3, 3));
        assert_eq!(Scalar::v_pow(3, -2), Scalar::ratio(3, 1, 3));
    }

    #[test]
    fn v_pow_is_a_homomorphism() {
        for j in -8i64..=8 {
            for k in -8i64..=8 {
                assert_eq!(
                    Scalar::v_pow(5, j) * Scalar::v_pow(5, k),
                    Scalar::v_pow(5, j + k),
                    "v^{j} * v^{k}"
                );
            }
        }
    }

    #[test]
    fn field_inverse_general() {
        let x = Scalar::ratio(3, -2, 5) + Scalar::v_pow(3, 1) * Scalar::ratio(3, 4, 9);
        let y = x.inv().unwrap();
        assert_eq!(x * y, Scalar::one(3));
        assert_eq!(Scalar::zero(3).inv(), Err(HallError::ZeroInverse));
    }

    #[test]
    fn matrix_rank_examples() {
        let one = Scalar::one(2);
        let v = Scalar::v_pow(2, 1);
        let zero = Scalar::zero(2);
        assert_eq!(matrix_rank(&[]), 0);
        assert_eq!(matrix_rank(&[vec![zero.clone(), zero.clone()]]), 0);
        assert_eq!(
            matrix_rank(&[
                vec![one.clone(), v.clone()],
                vec![v.clone(), Scalar::from_int(2, 2)], // v * row 0
            ]),
            1
        );
        assert_eq!(
            matrix_rank(&[
                vec![one.clone(), v.clone()],
                vec![v.clone(), one.clone()],
                vec![zero.clone(), one.clone()],
            ]),
            2
        );
    }
}
