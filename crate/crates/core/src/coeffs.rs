//! Exact coefficient fields: the rationals and prime fields GF(p).
//!
//! Every algorithm in the crate is generic over [`Field`]. A field handle is a
//! small immutable value; elements are plain values owned by the caller.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// The Mersenne prime 2^31 - 1, used for all Monte Carlo rank computations
/// unless a prime is given explicitly.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Prime moduli must fit in 32 bits so that products fit in a `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{p} = {factor}·{cofactor} not prime")]
    NotPrime { p: u64, factor: u64, cofactor: u64 },
    #[error("{0} is not prime (p must be at least 2)")]
    TooSmall(u64),
    #[error("prime {0} exceeds the supported maximum {MAX_PRIME}")]
    TooLarge(u64),
    #[error("sampling requires a finite field")]
    SamplingRequiresFiniteField,
    #[error("division by zero in {0}")]
    DivisionByZero(String),
    #[error("cannot parse field element {0:?}")]
    BadElement(String),
    #[error("cannot parse field {0:?} (expected `rational` or `gf <p>`)")]
    BadSpec(String),
}

/// Which field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    pub fn validate(&self) -> Result<(), FieldError> {
        match *self {
            FieldSpec::Rational => Ok(()),
            FieldSpec::Prime(p) => check_prime(p),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "gf {p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Accepts `rational`, `q`, `gf 7`, `gf7`, `gf(7)` and `gf<7>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if t == "rational" || t == "q" || t == "rationals" {
            return Ok(FieldSpec::Rational);
        }
        let rest = t
            .strip_prefix("gf")
            .ok_or_else(|| FieldError::BadSpec(s.to_string()))?;
        let digits: String = rest
            .trim()
            .trim_start_matches(['(', '<'])
            .trim_end_matches([')', '>'])
            .trim()
            .to_string();
        let p: u64 = digits
            .parse()
            .map_err(|_| FieldError::BadSpec(s.to_string()))?;
        check_prime(p)?;
        Ok(FieldSpec::Prime(p))
    }
}

fn check_prime(p: u64) -> Result<(), FieldError> {
    if p < 2 {
        return Err(FieldError::TooSmall(p));
    }
    if p > MAX_PRIME {
        return Err(FieldError::TooLarge(p));
    }
    let mut f = 2u64;
    while f * f <= p {
        if p % f == 0 {
            return Err(FieldError::NotPrime {
                p,
                factor: f,
                cofactor: p / f,
            });
        }
        f += 1;
    }
    Ok(())
}

/// Arithmetic over an exact field.
pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    /// Image of the rational `num/den`; fails when `den` vanishes in the field.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem, FieldError>;
    /// Canonical text: `a/b` (or `a`) for rationals, a decimal residue for GF(p).
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError>;
    /// Uniform random element; only finite fields support it.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Self::Elem, FieldError>;

    /// `acc -= c * b`
    fn sub_mul_assign(&self, acc: &mut Self::Elem, c: &Self::Elem, b: &Self::Elem) {
        *acc = self.sub(acc, &self.mul(c, b));
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// GF(p) with canonical residues `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        check_prime(p)?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1 % self.p
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        v.mod_floor(&p).to_u64().expect("residue fits in u64")
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<u64, FieldError> {
        let d = self.from_bigint(den);
        let inv = self
            .inv(&d)
            .ok_or_else(|| FieldError::DivisionByZero(format!("{num}/{den} mod {}", self.p)))?;
        Ok(self.mul(&self.from_bigint(num), &inv))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64, FieldError> {
        let (num, den) = parse_ratio(s)?;
        self.from_ratio(&num, &den)
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<u64, FieldError> {
        Ok(rng.gen_range(0..self.p))
    }
    #[inline]
    fn sub_mul_assign(&self, acc: &mut u64, c: &u64, b: &u64) {
        let prod = c * b % self.p;
        *acc = if *acc >= prod {
            *acc - prod
        } else {
            *acc + self.p - prod
        };
    }
}

/// The rational numbers with arbitrary-precision numerators and denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<BigRational, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero(format!("{num}/{den}")));
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }
    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational, FieldError> {
        let (num, den) = parse_ratio(s)?;
        self.from_ratio(&num, &den)
    }
    fn sample<R: Rng + ?Sized>(&self, _rng: &mut R) -> Result<BigRational, FieldError> {
        Err(FieldError::SamplingRequiresFiniteField)
    }
}

/// Parses `a` or `a/b` with optional sign into a numerator/denominator pair.
pub fn parse_ratio(s: &str) -> Result<(BigInt, BigInt), FieldError> {
    let bad = || FieldError::BadElement(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(FieldError::DivisionByZero(s.to_string()));
    }
    if den.is_negative() {
        return Ok((-num, -den));
    }
    Ok((num, den))
}

/// The deterministic generator used everywhere a seed is accepted.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws a uniform element of a finite field, advancing `rng`.
pub fn random_element<F: Field, R: Rng + ?Sized>(
    field: &F,
    rng: &mut R,
) -> Result<F::Elem, FieldError> {
    field.sample(rng)
}

/// Runs `$body` with `$f` bound to the concrete field named by a [`FieldSpec`].
/// The enclosing function must return a `Result` whose error converts from
/// [`FieldError`].
#[macro_export]
macro_rules! with_field {
    ($spec:expr, $f:ident => $body:expr) => {
        match $spec {
            $crate::coeffs::FieldSpec::Rational => {
                let $f = $crate::coeffs::Rationals;
                $body
            }
            $crate::coeffs::FieldSpec::Prime(p) => {
                let $f = $crate::coeffs::PrimeField::new(p)?;
                $body
            }
        }
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn inverse_mod_seven() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
    }

    #[test]
    fn rational_addition() {
        let f = Rationals;
        assert_eq!(f.add(&q(1, 2), &q(1, 3)), q(5, 6));
        assert_eq!(f.format(&q(5, 6)), "5/6");
        assert_eq!(f.format(&q(4, 2)), "2");
    }

    #[test]
    fn composite_rejected_with_factor() {
        let err = PrimeField::new(6).unwrap_err();
        assert_eq!(err.to_string(), "6 = 2·3 not prime");
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(91).is_err());
        assert!(PrimeField::new(DEFAULT_PRIME).is_ok());
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("rational".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!("gf2".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(2));
        assert_eq!("gf 101".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(101));
        assert_eq!("GF(5)".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(5));
        assert!("gf 9".parse::<FieldSpec>().is_err());
        assert!("reals".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(7).to_string(), "gf 7");
    }

    #[test]
    fn ratios_map_into_prime_fields() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.parse("1/2").unwrap(), 4);
        assert_eq!(f.parse("-1").unwrap(), 6);
        assert!(f.parse("1/7").is_err());
        assert_eq!(Rationals.parse("-6/4").unwrap(), q(-3, 2));
        assert_eq!(Rationals.parse("3/-4").unwrap(), q(-3, 4));
        assert!(Rationals.parse("x").is_err());
    }

    #[test]
    fn sampling_is_reproducible() {
        let f = PrimeField::new(101).unwrap();
        let mut a = seeded_rng(17);
        let mut b = seeded_rng(17);
        let xs: Vec<u64> = (0..2).map(|_| random_element(&f, &mut a).unwrap()).collect();
        let ys: Vec<u64> = (0..2).map(|_| random_element(&f, &mut b).unwrap()).collect();
        assert_eq!(xs, ys);
        assert!(xs.iter().all(|&x| x < 101));
    }

    #[test]
    fn sampling_rationals_fails() {
        let mut rng = seeded_rng(0);
        assert_eq!(
            random_element(&Rationals, &mut rng).unwrap_err(),
            FieldError::SamplingRequiresFiniteField
        );
    }

    #[test]
    fn residue_histogram_is_flat() {
        // 10^4 draws in GF(5): each count has mean 2000 and sd sqrt(10^4 * 0.2 * 0.8) = 40.
        let f = PrimeField::new(5).unwrap();
        let mut rng = seeded_rng(2024);
        let mut counts = [0u32; 5];
        for _ in 0..10_000 {
            counts[random_element(&f, &mut rng).unwrap() as usize] += 1;
        }
        for c in counts {
            assert!((c as f64 - 2000.0).abs() <= 5.0 * 40.0, "count {c}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn check_axioms<F: Field>(f: &F, a: F::Elem, b: F::Elem, c: F::Elem) {
            assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            assert_eq!(
                f.mul(&a, &f.add(&b, &c)),
                f.add(&f.mul(&a, &b), &f.mul(&a, &c))
            );
            assert!(f.is_zero(&f.add(&a, &f.neg(&a))));
            if let Some(ai) = f.inv(&a) {
                assert!(f.is_one(&f.mul(&a, &ai)));
            } else {
                assert!(f.is_zero(&a));
            }
            let mut acc = a.clone();
            f.sub_mul_assign(&mut acc, &b, &c);
            assert_eq!(acc, f.sub(&a, &f.mul(&b, &c)));
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn prime_field_axioms(a in 0u64..DEFAULT_PRIME, b in 0u64..DEFAULT_PRIME, c in 0u64..DEFAULT_PRIME) {
                check_axioms(&PrimeField::new(DEFAULT_PRIME).unwrap(), a, b, c);
            }

            #[test]
            fn small_prime_field_axioms(a in 0u64..7, b in 0u64..7, c in 0u64..7) {
                check_axioms(&PrimeField::new(7).unwrap(), a, b, c);
            }

            #[test]
            fn rational_axioms(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50, e in -50i64..50, g in 1i64..50) {
                check_axioms(&Rationals, q(a, b), q(c, d), q(e, g));
            }

            #[test]
            fn rational_text_round_trip(a in -10_000i64..10_000, b in 1i64..10_000) {
                let x = q(a, b);
                let s = Rationals.format(&x);
                prop_assert_eq!(Rationals.format(&Rationals.parse(&s).unwrap()), s.clone());
                prop_assert_eq!(Rationals.parse(&s).unwrap(), x);
            }
        }
    }
}
