use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use super::PolyError;

type Exponents = SmallVec<[u32; 12]>;

/// A power product `x1^e1 * ... * xn^en` stored as a dense exponent vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Exponents,
    degree: u32,
}

impl Monomial {
    /// The constant monomial 1 over `nvars` variables.
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
            degree: 0,
        }
    }

    /// `x_{index+1}^exp` (0-based index).
    pub fn var_pow(nvars: usize, index: usize, exp: u32) -> Self {
        assert!(
            index < nvars,
            "variable index {index} out of range for {nvars} variables"
        );
        let mut m = Self::one(nvars);
        m.exps[index] = exp;
        m.degree = exp;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self, PolyError> {
        let degree = exps
            .iter()
            .try_fold(0u32, |acc, &e| acc.checked_add(e))
            .ok_or(PolyError::ExponentOverflow)?;
        Ok(Monomial {
            exps: SmallVec::from_slice(exps),
            degree,
        })
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        if self.nvars() != other.nvars() {
            return Err(PolyError::DimensionMismatch(self.nvars(), other.nvars()));
        }
        let mut exps = Exponents::with_capacity(self.nvars());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_add(*b).ok_or(PolyError::ExponentOverflow)?);
        }
        let degree = self
            .degree
            .checked_add(other.degree)
            .ok_or(PolyError::ExponentOverflow)?;
        Ok(Monomial { exps, degree })
    }

    /// Product; panics on exponent overflow.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("monomial exponent overflow")
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps: Exponents = other
            .exps
            .iter()
            .zip(&self.exps)
            .map(|(b, a)| b - a)
            .collect();
        Some(Monomial {
            exps,
            degree: other.degree - self.degree,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: Exponents = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    /// No variable occurs in both.
    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `x1^2*x3`, or `1` for the constant monomial.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Admissible monomial orders. In every order `x1 > x2 > ... > xn`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    Grlex,
    #[default]
    Grevlex,
}

impl MonomialOrder {
    /// Compares two monomials of the same variable count.
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        match self {
            MonomialOrder::Lex => lex(a, b),
            MonomialOrder::Grlex => a.degree.cmp(&b.degree).then_with(|| lex(a, b)),
            MonomialOrder::Grevlex => a.degree.cmp(&b.degree).then_with(|| {
                // Last differing exponent decides; the smaller exponent wins.
                for (x, y) in a.exps.iter().zip(&b.exps).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::Lex => "lex",
            MonomialOrder::Grlex => "grlex",
            MonomialOrder::Grevlex => "grevlex",
        }
    }
}

#[inline]
fn lex(a: &Monomial, b: &Monomial) -> Ordering {
    for (x, y) in a.exps.iter().zip(&b.exps) {
        if x != y {
            return x.cmp(y);
        }
    }
    Ordering::Equal
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MonomialOrder {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lex" => Ok(MonomialOrder::Lex),
            "grlex" => Ok(MonomialOrder::Grlex),
            "grevlex" => Ok(MonomialOrder::Grevlex),
            other => Err(PolyError::BadOrder(other.to_string())),
        }
    }
}

/// Checked comparison: rejects monomials over different variable counts.
pub fn compare_monomials(
    a: &Monomial,
    b: &Monomial,
    ord: MonomialOrder,
) -> Result<Ordering, PolyError> {
    if a.nvars() != b.nvars() {
        return Err(PolyError::DimensionMismatch(a.nvars(), b.nvars()));
    }
    Ok(ord.cmp(a, b))
}
