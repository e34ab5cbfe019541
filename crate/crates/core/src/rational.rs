//! Exact rationals in lowest terms, integer square roots and perfect-square tests.
//!
//! Every square test in the crate ends here. Nothing in this module touches
//! floating point except [`is_square_u128`], which only uses an `f64` estimate
//! as a starting point and then corrects it with exact integer arithmetic.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, always stored as `num/den` with `gcd(|num|, den) = 1`
/// and `den >= 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    /// Builds the canonical rational equal to `n/d`.
    pub fn new(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Rat> {
        let d = d.into();
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(BigRational::new(n.into(), d)))
    }

    pub fn int(n: impl Into<BigInt>) -> Rat {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn square(&self) -> Rat {
        Rat(&self.0 * &self.0)
    }

    pub fn pow(&self, e: i32) -> Rat {
        Rat(num_traits::Pow::pow(&self.0, e))
    }

    pub fn recip(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rat) -> Result<Rat> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(&self.0 / &rhs.0))
    }

    /// True iff `self = r^2` for some rational `r`.
    pub fn is_square(&self) -> bool {
        !self.is_negative() && is_square_int(self.numer()) && is_square_int(self.denom())
    }

    /// The non-negative rational root of a perfect square.
    pub fn sqrt_exact(&self) -> Result<Rat> {
        if self.is_negative() {
            return Err(Error::NotASquare(self.clone()));
        }
        let n = isqrt_floor(self.numer())?;
        let d = isqrt_floor(self.denom())?;
        if &(&n * &n) != self.numer() || &(&d * &d) != self.denom() {
            return Err(Error::NotASquare(self.clone()));
        }
        // n and d are coprime because numer and denom are.
        Ok(Rat(BigRational::new_raw(n, d)))
    }

    /// Decimal digit counts of `|num|` and `den`.
    pub fn digit_counts(&self) -> (usize, usize) {
        (
            self.numer().magnitude().to_str_radix(10).len(),
            self.denom().to_str_radix(10).len(),
        )
    }

    pub fn to_i128(&self) -> Option<i128> {
        if self.is_integer() {
            self.numer().to_i128()
        } else {
            None
        }
    }
}

/// Largest `r` with `r^2 <= n`, by Newton iteration from an overestimate.
pub fn isqrt_floor(n: &BigInt) -> Result<BigInt> {
    match n.sign() {
        Sign::Minus => Err(Error::NegativeRoot(n.to_string())),
        Sign::NoSign => Ok(BigInt::zero()),
        Sign::Plus => Ok(BigInt::from(isqrt_biguint(n.magnitude()))),
    }
}

fn isqrt_biguint(n: &BigUint) -> BigUint {
    if let Some(small) = n.to_u128() {
        return BigUint::from(isqrt_u128(small));
    }
    // 2^ceil(bits/2) > sqrt(n), so the iteration decreases monotonically to the floor.
    let mut x = BigUint::one() << ((n.bits() + 1) / 2);
    loop {
        let y = (&x + n / &x) >> 1u32;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Floor square root of a `u128`.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u128;
    // f64 has 53 bits of mantissa; nudge the estimate onto the exact floor.
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

// Quadratic-residue tables for cheap rejection. A non-residue modulo any of
// these moduli proves the integer is not a square; passing all of them proves
// nothing and the exact test still runs.
const FILTER_MODULI: [u32; 4] = [64, 63, 65, 11];

struct ResidueTables {
    tables: [Vec<bool>; 4],
}

impl ResidueTables {
    fn build() -> Self {
        let tables = FILTER_MODULI.map(|m| {
            let mut t = vec![false; m as usize];
            for r in 0..m {
                t[((r * r) % m) as usize] = true;
            }
            t
        });
        ResidueTables { tables }
    }
}

fn residue_tables() -> &'static ResidueTables {
    static TABLES: std::sync::OnceLock<ResidueTables> = std::sync::OnceLock::new();
    TABLES.get_or_init(ResidueTables::build)
}

/// Quadratic-residue pre-filter on `n mod 64*63*65*11`; `false` means `n` is definitely not a square.
fn passes_residue_filter(n_mod: impl Fn(u32) -> u32) -> bool {
    let t = residue_tables();
    FILTER_MODULI
        .iter()
        .zip(t.tables.iter())
        .all(|(&m, table)| table[n_mod(m) as usize])
}

pub fn is_square_u128(n: u128) -> bool {
    if !passes_residue_filter(|m| (n % m as u128) as u32) {
        return false;
    }
    let r = isqrt_u128(n);
    r * r == n
}

/// Exact perfect-square test for a signed integer.
pub fn is_square_int(n: &BigInt) -> bool {
    match n.sign() {
        Sign::Minus => false,
        Sign::NoSign => true,
        Sign::Plus => {
            if let Some(small) = n.magnitude().to_u128() {
                return is_square_u128(small);
            }
            let mag = n.magnitude();
            if !passes_residue_filter(|m| (mag % m).to_u32().unwrap_or(0)) {
                return false;
            }
            let r = isqrt_biguint(mag);
            &(&r * &r) == mag
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_digits(s: &str, input: &str) -> Result<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse {
            input: input.to_string(),
            reason: "expected decimal digits",
        });
    }
    Ok(s.parse::<BigInt>().expect("validated digits"))
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `[+-]a` or `[+-]a/b` with no whitespace.
    fn from_str(s: &str) -> Result<Rat> {
        let (neg, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (n, d) = match body.split_once('/') {
            Some((n, d)) => (parse_digits(n, s)?, parse_digits(d, s)?),
            None => (parse_digits(body, s)?, BigInt::one()),
        };
        if d.is_zero() {
            return Err(Error::Parse {
                input: s.to_string(),
                reason: "zero denominator",
            });
        }
        Rat::new(if neg { -n } else { n }, d)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Rat {
        Rat::int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat($tr::$method(&self.0, &rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat($tr::$method(self.0, rhs.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat($tr::$method(self.0, &rhs.0))
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat($tr::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on a zero divisor, like the underlying type; use `checked_div` where zero is possible.
forward_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

/// Shorthand for building small rationals in code and tests. Panics on a zero denominator.
pub fn q(n: i64, d: i64) -> Rat {
    Rat::new(n, d).expect("nonzero denominator")
}

/// The integer GCD, exposed for parameter validation.
pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(Rat::new(2, 4).unwrap(), q(1, 2));
        let r = Rat::new(-3, -6).unwrap();
        assert_eq!(r.numer(), &BigInt::from(1));
        assert_eq!(r.denom(), &BigInt::from(2));
        let z = Rat::new(0, 5).unwrap();
        assert_eq!((z.numer().clone(), z.denom().clone()), (BigInt::zero(), BigInt::one()));
        assert!(matches!(Rat::new(1, 0), Err(Error::DivisionByZero)));
        assert_eq!(Rat::new(3, -6).unwrap().to_string(), "-1/2");
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt_floor(&BigInt::zero()).unwrap(), BigInt::zero());
        assert_eq!(isqrt_floor(&BigInt::from(17)).unwrap(), BigInt::from(4));
        // 2237^2 = 5004169
        assert_eq!(isqrt_floor(&BigInt::from(5004169)).unwrap(), BigInt::from(2237));
        assert_eq!(isqrt_floor(&BigInt::from(5004168)).unwrap(), BigInt::from(2236));
        assert!(matches!(isqrt_floor(&BigInt::from(-1)), Err(Error::NegativeRoot(_))));
    }

    #[test]
    fn isqrt_large_values_near_squares() {
        let r = big("631629004828419699201631629004828419699201");
        let sq = &r * &r;
        assert_eq!(isqrt_floor(&sq).unwrap(), r);
        assert_eq!(isqrt_floor(&(&sq - 1)).unwrap(), &r - 1);
        assert_eq!(isqrt_floor(&(&sq + 2 * &r)).unwrap(), r);
        assert_eq!(isqrt_u128(u128::MAX), u64::MAX as u128);
        assert_eq!(isqrt_u128((1u128 << 100) - 1), (1u128 << 50) - 1);
    }

    #[test]
    fn square_examples() {
        assert!(Rat::int(2209).is_square());
        assert!(q(1764, 361).is_square());
        assert!(!Rat::int(-4).is_square());
        assert!(!Rat::int(2).is_square());
        assert!(Rat::zero().is_square());
        assert!(!q(4, 3).is_square());
    }

    #[test]
    fn sqrt_exact_examples() {
        assert_eq!(q(187489, 361).sqrt_exact().unwrap(), q(433, 19));
        assert_eq!(Rat::zero().sqrt_exact().unwrap(), Rat::zero());
        match Rat::int(2).sqrt_exact() {
            Err(Error::NotASquare(v)) => assert_eq!(v, Rat::int(2)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Rat::int(-9).sqrt_exact().is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("224/107".parse::<Rat>().unwrap(), q(224, 107));
        assert_eq!("-3/6".parse::<Rat>().unwrap(), q(-1, 2));
        assert_eq!("+18".parse::<Rat>().unwrap(), Rat::int(18));
        assert_eq!(q(-6, 3).to_string(), "-2");
        assert_eq!(q(5, 3).to_string(), "5/3");
        for bad in ["", "1/0", "1.5", " 1", "1/-2", "a/b", "1/", "/2", "--1"] {
            assert!(bad.parse::<Rat>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn serde_as_string() {
        let v = serde_json::to_string(&q(-8, 5)).unwrap();
        assert_eq!(v, "\"-8/5\"");
        assert_eq!(serde_json::from_str::<Rat>(&v).unwrap(), q(-8, 5));
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (any::<i64>(), 1..i64::MAX).prop_map(|(n, d)| q(n, d))
    }

    fn arb_u256() -> impl Strategy<Value = BigInt> {
        proptest::collection::vec(any::<u32>(), 8)
            .prop_map(|limbs| BigInt::from(BigUint::new(limbs)))
    }

    proptest! {
        #[test]
        fn square_of_any_rational_is_square(x in arb_rat()) {
            let sq = x.square();
            prop_assert!(sq.is_square());
            prop_assert_eq!(sq.sqrt_exact().unwrap(), x.abs());
        }

        #[test]
        fn sqrt_exact_squares_back(x in arb_rat()) {
            if x.is_square() {
                prop_assert_eq!(x.sqrt_exact().unwrap().square(), x);
            } else {
                prop_assert!(x.sqrt_exact().is_err());
            }
        }

        #[test]
        fn normalize_is_idempotent(x in arb_rat()) {
            let again = Rat::new(x.numer().clone(), x.denom().clone()).unwrap();
            prop_assert_eq!(again.numer(), x.numer());
            prop_assert_eq!(again.denom(), x.denom());
        }

        #[test]
        fn isqrt_brackets_256_bit(n in arb_u256()) {
            let r = isqrt_floor(&n).unwrap();
            prop_assert!(&r * &r <= n);
            let r1 = &r + 1;
            prop_assert!(&r1 * &r1 > n);
        }

        #[test]
        fn square_filter_never_rejects_squares(n in any::<u64>()) {
            let n = n as u128;
            prop_assert!(is_square_u128(n * n));
            prop_assert!(is_square_int(&BigInt::from(n * n)));
            // Any square between n^2 and (n+1)^2 would be a false positive.
            prop_assert!(!is_square_u128(n * n + 1) || n == 0);
        }

        #[test]
        fn big_square_test_matches_definition(n in arb_u256()) {
            let sq = &n * &n;
            prop_assert!(is_square_int(&sq));
            prop_assert!(!is_square_int(&(&sq + 2 * &n + 2)));
        }
    }
}
