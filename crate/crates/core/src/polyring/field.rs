//! Exact coefficient fields: the rationals and prime fields GF(p).
//!
//! A [`Field`] is a small, copyable descriptor that performs arithmetic on its
//! element type. Polynomials carry their field descriptor, so two polynomials
//! over GF(5) and GF(7) are distinguishable at runtime even though both use
//! `u64` elements.

use std::fmt::{self, Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::PolyError;

/// Arithmetic over an exact field.
#[allow(clippy::wrong_self_convention)] // conversions need the modulus held by `self`
pub trait Field: Copy + Eq + Debug + Send + Sync + 'static {
    type Elem: Clone + Eq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Maps `num / den` into the field. Fails when `den` vanishes in the field.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem, PolyError>;

    /// Canonical text for an element; a leading `-` marks negatives.
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// The `k` distinct `k`-th roots of unity, indexed by color, or `None`
    /// when the field does not contain all of them.
    fn roots_of_unity(&self, k: usize) -> Option<Vec<Self::Elem>>;

    fn spec(&self) -> FieldSpec;

    /// Scalar that brings a nonzero polynomial with these coefficients (leading
    /// coefficient first) into the field's preferred working normal form.
    /// The default makes it monic.
    fn normalizer<'a>(&self, mut coeffs: impl Iterator<Item = &'a Self::Elem>) -> Self::Elem
    where
        Self::Elem: 'a,
    {
        self.inv(coeffs.next().expect("nonzero polynomial"))
            .expect("nonzero leading coefficient")
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// The field of rational numbers with arbitrary-precision numerator and denominator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
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

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<BigRational, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        // BigRational::new reduces and normalizes the sign of the denominator.
        Ok(BigRational::new(num.clone(), den.clone()))
    }

    fn format_elem(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn roots_of_unity(&self, k: usize) -> Option<Vec<BigRational>> {
        match k {
            1 => Some(vec![self.one()]),
            2 => Some(vec![self.one(), self.from_i64(-1)]),
            _ => None,
        }
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }

    /// Primitive integer form: integer coefficients with gcd 1 and a positive
    /// leading coefficient. Monic rational forms tend to carry much larger
    /// numbers through a Gröbner basis computation.
    fn normalizer<'a>(&self, coeffs: impl Iterator<Item = &'a BigRational>) -> BigRational {
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        let mut lead_negative = None;
        for c in coeffs {
            lead_negative.get_or_insert(c.is_negative());
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let scale = BigRational::new(den_lcm, num_gcd);
        if lead_negative == Some(true) {
            -scale
        } else {
            scale
        }
    }
}

/// Largest modulus accepted by [`PrimeField`]; keeps products inside `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// The prime field GF(p), elements stored as residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, PolyError> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(PolyError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        let mut b = base % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            exp >>= 1;
        }
        acc
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(&self) -> u64 {
        if self.p == 2 {
            return 1;
        }
        let factors = prime_factors(self.p - 1);
        (2..self.p)
            .find(|&g| factors.iter().all(|&q| self.pow(g, (self.p - 1) / q) != 1))
            .expect("every prime field has a primitive root")
    }

    fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        v.mod_floor(&m).to_u64().expect("residue fits in u64")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }

    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<u64, PolyError> {
        let d = self.reduce_bigint(den);
        let di = self.inv(&d).ok_or(PolyError::ZeroDenominator)?;
        Ok(self.mul(&self.reduce_bigint(num), &di))
    }

    fn format_elem(&self, a: &u64) -> String {
        // Symmetric representative, so that p - 1 prints as -1.
        if *a > self.p / 2 {
            format!("-{}", self.p - a)
        } else {
            a.to_string()
        }
    }

    fn roots_of_unity(&self, k: usize) -> Option<Vec<u64>> {
        let k = k as u64;
        if k == 0 || !(self.p - 1).is_multiple_of(k) {
            return None;
        }
        let step = self.pow(self.primitive_root(), (self.p - 1) / k);
        let mut roots = Vec::with_capacity(k as usize);
        let mut cur = 1 % self.p;
        for _ in 0..k {
            roots.push(cur);
            cur = self.mul(&cur, &step);
        }
        Some(roots)
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
}

/// Runtime description of a coefficient field, as given on the command line
/// (`rational` or `gf:P`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    /// GF(p) for the smallest prime `p` with `p ≡ 1 (mod k)`.
    pub fn default_for(k: usize) -> FieldSpec {
        FieldSpec::Prime(smallest_prime_congruent_one(k as u64))
    }
}

impl Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "gf:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("rational") || s == "Q" {
            return Ok(FieldSpec::Rational);
        }
        let p = s
            .strip_prefix("gf:")
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| PolyError::BadFieldSpec(s.to_string()))?;
        PrimeField::new(p)?;
        Ok(FieldSpec::Prime(p))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest prime `p` with `k | p - 1`.
pub fn smallest_prime_congruent_one(k: u64) -> u64 {
    let k = k.max(1);
    (1..)
        .map(|m| m * k + 1)
        .find(|&p| is_prime(p))
        .expect("Dirichlet: such a prime exists")
}

/// Convenience: a rational from a pair of machine integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// True when the rational is stored in lowest terms with a positive denominator.
pub fn is_canonical_rational(a: &BigRational) -> bool {
    a.denom().is_positive() && a.numer().gcd(a.denom()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_primes() {
        assert_eq!(smallest_prime_congruent_one(1), 2);
        assert_eq!(smallest_prime_congruent_one(2), 3);
        assert_eq!(smallest_prime_congruent_one(3), 7);
        assert_eq!(smallest_prime_congruent_one(4), 5);
        assert_eq!(smallest_prime_congruent_one(8), 17);
        assert_eq!(FieldSpec::default_for(4), FieldSpec::Prime(5));
    }

    #[test]
    fn gf5_fourth_roots_are_all_units() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.primitive_root(), 2);
        let roots = f.roots_of_unity(4).unwrap();
        assert_eq!(roots, vec![1, 2, 4, 3]);
        for r in &roots {
            assert_eq!(f.pow(*r, 4), 1);
        }
        assert!(f.roots_of_unity(3).is_none());
    }

    #[test]
    fn rational_roots_only_for_small_k() {
        assert_eq!(
            Rationals.roots_of_unity(2).unwrap(),
            vec![rat(1, 1), rat(-1, 1)]
        );
        assert!(Rationals.roots_of_unity(4).is_none());
    }

    #[test]
    fn ratio_into_fields() {
        let two = BigInt::from(2);
        let three = BigInt::from(3);
        assert_eq!(Rationals.from_ratio(&two, &three).unwrap(), rat(2, 3));
        assert_eq!(
            Rationals.from_ratio(&two, &BigInt::from(-4)).unwrap(),
            rat(-1, 2)
        );
        assert!(is_canonical_rational(&rat(6, -4)));
        let f = PrimeField::new(5).unwrap();
        // 2/3 = 2 * 2 = 4 mod 5
        assert_eq!(f.from_ratio(&two, &three).unwrap(), 4);
        assert!(matches!(
            f.from_ratio(&two, &BigInt::from(10)),
            Err(PolyError::ZeroDenominator)
        ));
        assert!(matches!(
            Rationals.from_ratio(&two, &BigInt::from(0)),
            Err(PolyError::ZeroDenominator)
        ));
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!(
            "rational".parse::<FieldSpec>().unwrap(),
            FieldSpec::Rational
        );
        assert_eq!("gf:7".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(7));
        assert!("gf:8".parse::<FieldSpec>().is_err());
        assert!("complex".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(5).to_string(), "gf:5");
    }

    #[test]
    fn symmetric_residue_format() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.format_elem(&4), "-1");
        assert_eq!(f.format_elem(&2), "2");
        assert_eq!(f.format_elem(&3), "-2");
    }

    #[test]
    fn inverses() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
            assert_eq!(f.add(&a, &f.neg(&a)), 0);
        }
        assert_eq!(f.inv(&0), None);
    }
}
