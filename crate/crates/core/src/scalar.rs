//! Exact scalar arithmetic behind the whole kernel.
//!
//! Two models implement the [`Scalar`] trait:
//!
//! * [`Rational`] — arbitrary-precision rationals. This is the reference
//!   model: a zero determinant over `Rational` is a proof.
//! * [`PrimeField<P>`] — integers modulo a fixed prime, with
//!   [`Mersenne61`] (`p = 2^61 - 1`) as the production instance. Arithmetic
//!   is a few machine operations, so randomized runs are much faster; a
//!   nonzero result still refutes an identity exactly, while a zero result
//!   is wrong only if the true value is a nonzero multiple of `p`.
//!
//! Both models share one text form, used by scene files and reports:
//! an optional leading `-`, a digit run, and an optional `/` followed by a
//! digit run (`"15/7"`, `"-3"`, `"0"`). [`Scalar::to_text`] emits the
//! canonical spelling — lowest terms, positive denominator, no `/1`,
//! and no `-0` — and for a residue simply the decimal representative.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Errors from parsing scalar literals.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseScalarError {
    /// The text does not match `[-]digits[/digits]`.
    #[error("malformed scalar literal {0:?}: expected [-]digits[/digits]")]
    Malformed(String),
    /// The literal has an explicit zero denominator, or a denominator that
    /// reduces to zero in the target field.
    #[error("scalar literal {0:?} has a zero denominator")]
    DivisionByZero(String),
}

/// An exact field element. Implementations must be genuinely exact: equal
/// values compare equal, `is_zero` is decidable, and the arithmetic laws
/// hold with no rounding anywhere.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Short human-readable model name (`"rational"`, `"prime:2305843009213693951"`).
    const MODEL: &'static str;

    /// Additive identity.
    fn zero() -> Self;
    /// Multiplicative identity.
    fn one() -> Self;
    /// Embed a machine integer.
    fn from_int(n: i64) -> Self;
    /// Exact test against zero.
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse; `None` exactly for zero.
    fn inv(&self) -> Option<Self>;
    /// Parse the shared `[-]digits[/digits]` literal form.
    fn parse_text(s: &str) -> Result<Self, ParseScalarError>;
    /// Canonical text form; `parse_text(to_text(x)) == x` for every `x`.
    fn to_text(&self) -> String;
}

/// Whether `s` matches the scalar literal grammar `[-]digits[/digits]`,
/// without interpreting the value in any particular field.
pub(crate) fn literal_is_well_formed(s: &str) -> bool {
    split_literal(s).is_ok()
}

/// Split a scalar literal into sign, numerator digits, and optional
/// denominator digits, validating the grammar but not the values.
fn split_literal(s: &str) -> Result<(bool, &str, Option<&str>), ParseScalarError> {
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let (num, den) = match rest.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (rest, None),
    };
    let all_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(num) || !den.is_none_or(all_digits) {
        return Err(ParseScalarError::Malformed(s.to_string()));
    }
    Ok((neg, num, den))
}

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator (the backing `BigRational` maintains that
/// canonical form on every operation).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Construct from an integer numerator/denominator pair.
    ///
    /// # Panics
    /// Panics if `den == 0`; use [`Scalar::parse_text`] for untrusted input.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "Rational::new with zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Construct from big numerator/denominator.
    ///
    /// # Panics
    /// Panics if `den` is zero.
    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "Rational::from_big with zero denominator");
        Rational(BigRational::new(num, den))
    }

    /// Borrow the backing `BigRational`.
    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    /// Numerator of the canonical form (sign lives here).
    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Denominator of the canonical form; always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Sign as -1, 0, or 1.
    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Scalar for Rational {
    const MODEL: &'static str = "rational";

    fn zero() -> Self {
        Rational(BigRational::zero())
    }

    fn one() -> Self {
        Rational(BigRational::one())
    }

    fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    fn parse_text(s: &str) -> Result<Self, ParseScalarError> {
        let (neg, num, den) = split_literal(s)?;
        // Digit runs always parse; only the zero denominator can fail.
        let mut n: BigInt = num.parse().expect("validated digit run");
        let d: BigInt = match den {
            Some(d) => d.parse().expect("validated digit run"),
            None => BigInt::one(),
        };
        if d.is_zero() {
            return Err(ParseScalarError::DivisionByZero(s.to_string()));
        }
        if neg {
            n = -n;
        }
        Ok(Rational(BigRational::new(n, d)))
    }

    fn to_text(&self) -> String {
        if self.0.denom().is_one() {
            self.0.numer().to_string()
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// `p = 2^61 - 1`, the largest Mersenne prime below `2^64`.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// The production prime field: big enough that a random nonzero value of a
/// determinant of moderate degree vanishes mod `p` with probability on the
/// order of `2^-61`, small enough that products fit in `u128`.
pub type Mersenne61 = PrimeField<MERSENNE_61>;

/// Integers modulo the prime `P`, stored as the canonical representative
/// in `0..P`.
///
/// `P` must be prime and less than `2^63` so sums of two representatives
/// and products in `u128` never overflow. For `P = 2^61 - 1` reduction
/// uses Mersenne folding instead of hardware division.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField<const P: u64>(u64);

impl<const P: u64> PrimeField<P> {
    /// Canonical representative in `0..P`.
    pub fn residue(self) -> u64 {
        self.0
    }

    /// Build from any `u64`, reducing mod `P`.
    pub fn from_u64(x: u64) -> Self {
        PrimeField(x % P)
    }

    fn reduce_u128(x: u128) -> u64 {
        if P == MERSENNE_61 {
            // x < 2^122; fold the high 61-bit limbs back in (2^61 ≡ 1 mod p),
            // twice, then one conditional subtraction.
            let lo = (x as u64) & MERSENNE_61;
            let mid = ((x >> 61) as u64) & MERSENNE_61;
            let hi = (x >> 122) as u64;
            let mut r = lo + mid + hi; // ≤ 3·(2^61 - 1) < 2^63
            r = (r & MERSENNE_61) + (r >> 61);
            if r >= MERSENNE_61 {
                r -= MERSENNE_61;
            }
            r
        } else {
            (x % P as u128) as u64
        }
    }

    fn mul_raw(a: u64, b: u64) -> u64 {
        Self::reduce_u128(a as u128 * b as u128)
    }

    /// `self^e` by binary exponentiation.
    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64 % P;
        while e > 0 {
            if e & 1 == 1 {
                acc = Self::mul_raw(acc, base);
            }
            base = Self::mul_raw(base, base);
            e >>= 1;
        }
        PrimeField(acc)
    }
}

impl<const P: u64> fmt::Debug for PrimeField<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for PrimeField<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for PrimeField<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut r = self.0 + rhs.0; // < 2^64 because P < 2^63
        if r >= P {
            r -= P;
        }
        PrimeField(r)
    }
}

impl<const P: u64> Sub for PrimeField<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let r = if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + P - rhs.0
        };
        PrimeField(r)
    }
}

impl<const P: u64> Mul for PrimeField<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        PrimeField(Self::mul_raw(self.0, rhs.0))
    }
}

impl<const P: u64> Neg for PrimeField<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            PrimeField(P - self.0)
        }
    }
}

impl<const P: u64> Scalar for PrimeField<P> {
    const MODEL: &'static str = {
        // `const` string formatting is unavailable; the two fields that
        // matter in practice get exact names, others a generic one.
        if P == MERSENNE_61 {
            "prime:2305843009213693951"
        } else if P == 7 {
            "prime:7"
        } else {
            "prime"
        }
    };

    fn zero() -> Self {
        PrimeField(0)
    }

    fn one() -> Self {
        PrimeField(1 % P)
    }

    fn from_int(n: i64) -> Self {
        let m = (n % P as i64).unsigned_abs() % P;
        if n < 0 && m != 0 {
            PrimeField(P - m)
        } else {
            PrimeField(m)
        }
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            // Fermat: a^(p-2) ≡ a^-1 for prime p.
            Some(self.pow(P - 2))
        }
    }

    fn parse_text(s: &str) -> Result<Self, ParseScalarError> {
        let (neg, num, den) = split_literal(s)?;
        let fold = |digits: &str| -> u64 {
            let mut acc = PrimeField::<P>(0);
            let ten = PrimeField::<P>(10 % P);
            for b in digits.bytes() {
                acc = acc * ten + PrimeField::<P>((b - b'0') as u64 % P);
            }
            acc.0
        };
        let n = PrimeField::<P>(fold(num));
        let n = if neg { -n } else { n };
        match den {
            None => Ok(n),
            Some(d) => {
                let d = PrimeField::<P>(fold(d));
                match d.inv() {
                    Some(di) => Ok(n * di),
                    // Covers both a literal zero and a residue that reduces
                    // to zero mod P; either way the value does not exist.
                    None => Err(ParseScalarError::DivisionByZero(s.to_string())),
                }
            }
        }
    }

    fn to_text(&self) -> String {
        self.0.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type F7 = PrimeField<7>;

    fn r(s: &str) -> Rational {
        Rational::parse_text(s).unwrap()
    }

    #[test]
    fn rational_parse_canonicalizes() {
        assert_eq!(r("-3/6").to_text(), "-1/2");
        assert_eq!(r("4/2").to_text(), "2");
        assert_eq!(r("0/5").to_text(), "0");
        assert_eq!(r("-0").to_text(), "0");
        assert_eq!(r("15/7").to_text(), "15/7");
        assert_eq!(r("007/0014").to_text(), "1/2");
    }

    #[test]
    fn rational_parse_rejects_garbage() {
        for bad in ["", "-", "/2", "1/", "1//2", "1/2/3", "+3", "1.5", "a", "1 /2", "-1/-2"] {
            assert!(
                matches!(Rational::parse_text(bad), Err(ParseScalarError::Malformed(_))),
                "expected Malformed for {bad:?}"
            );
        }
        assert!(matches!(
            Rational::parse_text("2/0"),
            Err(ParseScalarError::DivisionByZero(_))
        ));
        assert!(matches!(
            Rational::parse_text("-2/0"),
            Err(ParseScalarError::DivisionByZero(_))
        ));
    }

    #[test]
    fn rational_inverse() {
        assert_eq!(r("4/9").inv().unwrap(), r("9/4"));
        assert_eq!(r("-4/9").inv().unwrap(), r("-9/4"));
        assert_eq!(Rational::zero().inv(), None);
    }

    #[test]
    fn rational_arithmetic_basics() {
        assert_eq!(r("1/2") + r("1/3"), r("5/6"));
        assert_eq!(r("1/2") - r("1/2"), Rational::zero());
        assert_eq!(r("2/3") * r("3/2"), Rational::one());
        assert_eq!(-r("5"), r("-5"));
        assert_eq!(Rational::from_int(-7).to_text(), "-7");
    }

    #[test]
    fn prime_field_small_examples() {
        // 3 * 5 = 15 ≡ 1 (mod 7), so inv(3) = 5.
        assert_eq!(F7::from_int(3).inv().unwrap(), F7::from_int(5));
        assert_eq!(F7::from_int(-1).residue(), 6);
        assert_eq!(F7::parse_text("10").unwrap().residue(), 3);
        assert_eq!(F7::parse_text("1/3").unwrap().residue(), 5);
        assert_eq!(F7::parse_text("-1/3").unwrap().residue(), 2);
        assert!(matches!(
            F7::parse_text("1/7"),
            Err(ParseScalarError::DivisionByZero(_))
        ));
        assert!(matches!(
            F7::parse_text("1/14"),
            Err(ParseScalarError::DivisionByZero(_))
        ));
    }

    #[test]
    fn prime_field_axioms_exhaustive_mod_7() {
        let all: Vec<F7> = (0..7).map(F7::from_int).collect();
        for &a in &all {
            assert_eq!(a + F7::zero(), a);
            assert_eq!(a * F7::one(), a);
            assert_eq!(a + (-a), F7::zero());
            match a.inv() {
                Some(ai) => assert_eq!(a * ai, F7::one()),
                None => assert!(a.is_zero()),
            }
            for &b in &all {
                assert_eq!(a + b, b + a);
                assert_eq!(a * b, b * a);
                assert_eq!(a - b, a + (-b));
                for &c in &all {
                    assert_eq!((a + b) + c, a + (b + c));
                    assert_eq!((a * b) * c, a * (b * c));
                    assert_eq!(a * (b + c), a * b + a * c);
                }
            }
        }
    }

    #[test]
    fn mersenne_reduction_matches_u128_remainder() {
        let p = MERSENNE_61 as u128;
        let samples: Vec<u64> = vec![
            0,
            1,
            2,
            MERSENNE_61 - 1,
            MERSENNE_61 - 2,
            3,
            1_000_000_007,
            36_028_797_018_963_967, // 2^55 - 1
            2_305_843_009_213_693_950,
        ];
        for &a in &samples {
            for &b in &samples {
                let expect = ((a as u128 * b as u128) % p) as u64;
                assert_eq!(Mersenne61::from_u64(a) * Mersenne61::from_u64(b), Mersenne61::from_u64(expect));
            }
        }
    }

    #[test]
    fn mersenne_inverse_and_parse() {
        let x = Mersenne61::from_int(123456789);
        assert_eq!(x * x.inv().unwrap(), Mersenne61::one());
        assert_eq!(Mersenne61::zero().inv(), None);
        // Folding a long digit string matches BigInt reduction.
        let digits = "123456789012345678901234567890";
        let via_big: num_bigint::BigUint = digits.parse().unwrap();
        let expect = (via_big % num_bigint::BigUint::from(MERSENNE_61))
            .to_string()
            .parse::<u64>()
            .unwrap();
        assert_eq!(Mersenne61::parse_text(digits).unwrap().residue(), expect);
    }

    #[test]
    fn text_round_trip_canonical() {
        for s in ["0", "1", "-1", "15/7", "-15/7", "2305843009213693950"] {
            assert_eq!(r(s).to_text(), s);
        }
        for v in [0u64, 1, 6] {
            let x = F7::from_u64(v);
            assert_eq!(F7::parse_text(&x.to_text()).unwrap(), x);
        }
    }

    proptest! {
        #[test]
        fn rational_field_laws(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000,
                               da in 1i64..50, db in 1i64..50, dc in 1i64..50) {
            let x = Rational::new(a, da);
            let y = Rational::new(b, db);
            let z = Rational::new(c, dc);
            prop_assert_eq!(x.clone() + y.clone(), y.clone() + x.clone());
            prop_assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
            prop_assert_eq!(
                (x.clone() + y.clone()) + z.clone(),
                x.clone() + (y.clone() + z.clone())
            );
            prop_assert_eq!(
                x.clone() * (y.clone() + z.clone()),
                x.clone() * y.clone() + x.clone() * z.clone()
            );
            prop_assert_eq!(x.clone() - x.clone(), Rational::zero());
            if !x.is_zero() {
                prop_assert_eq!(x.clone() * x.inv().unwrap(), Rational::one());
            }
        }

        #[test]
        fn rational_text_round_trip(a in -100000i64..100000, d in 1i64..10000) {
            let x = Rational::new(a, d);
            prop_assert_eq!(Rational::parse_text(&x.to_text()).unwrap(), x);
        }

        #[test]
        fn mersenne_field_laws(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            let x = Mersenne61::from_u64(a);
            let y = Mersenne61::from_u64(b);
            let z = Mersenne61::from_u64(c);
            prop_assert_eq!(x + y, y + x);
            prop_assert_eq!(x * y, y * x);
            prop_assert_eq!((x + y) + z, x + (y + z));
            prop_assert_eq!((x * y) * z, x * (y * z));
            prop_assert_eq!(x * (y + z), x * y + x * z);
            prop_assert_eq!(x - y, x + (-y));
            if !x.is_zero() {
                prop_assert_eq!(x * x.inv().unwrap(), Mersenne61::one());
            }
        }

        #[test]
        fn from_int_is_a_ring_hom(a in -100000i64..100000, b in -100000i64..100000) {
            let f = Mersenne61::from_int;
            prop_assert_eq!(f(a) + f(b), f(a + b));
            prop_assert_eq!(f(a) * f(b), f(a * b));
        }
    }
}
