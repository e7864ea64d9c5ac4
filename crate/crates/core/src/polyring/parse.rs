//! Text form of polynomials.
//!
//! ```text
//! poly     ::= ["+" | "-"] term (("+" | "-") term)*
//! term     ::= coeff ["*"] monomial | coeff | monomial
//! coeff    ::= integer ["/" positive-integer]
//! monomial ::= "x" index ["^" exp] ("*" "x" index ["^" exp])*
//! ```
//!
//! Whitespace is insignificant and variable indices are 1-based.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::Field;
use super::monomial::Monomial;
use super::poly::{PolyRing, Polynomial};
use super::PolyError;

pub fn parse_poly<F: Field>(text: &str, ring: &PolyRing<F>) -> Result<Polynomial<F>, PolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let field = ring.field;
    let mut terms = Vec::new();
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty input"));
    }
    let mut negative = false;
    if let Some(c @ (b'+' | b'-')) = p.peek() {
        negative = c == b'-';
        p.bump();
    }
    loop {
        let (num, den, mono) = p.term(ring.nvars)?;
        let mut c = field.from_ratio(&num, &den)?;
        if negative {
            c = field.neg(&c);
        }
        terms.push((c, mono));
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(b'+') => negative = false,
            Some(b'-') => negative = true,
            Some(_) => return Err(p.error("expected '+' or '-'")),
        }
        p.bump();
    }
    Ok(ring.from_terms(terms))
}

/// Inverse of [`parse_poly`].
pub fn format_poly<F: Field>(f: &Polynomial<F>) -> String {
    f.to_string()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn error(&self, msg: &str) -> PolyError {
        PolyError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn digits(&mut self) -> Result<&str, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn small_int(&mut self, what: &str) -> Result<u32, PolyError> {
        let at = self.pos;
        self.digits()?
            .parse::<u32>()
            .map_err(|_| PolyError::Syntax {
                pos: at,
                msg: format!("{what} too large"),
            })
    }

    fn term(&mut self, nvars: usize) -> Result<(BigInt, BigInt, Monomial), PolyError> {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        let mut has_coeff = false;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            has_coeff = true;
            num = self.digits()?.parse().expect("digit string");
            if self.peek() == Some(b'/') {
                self.bump();
                den = self.digits()?.parse().expect("digit string");
                if den.is_zero() {
                    return Err(PolyError::ZeroDenominator);
                }
            }
            if self.peek() == Some(b'*') {
                self.bump();
                if self.peek() != Some(b'x') {
                    return Err(self.error("expected variable after '*'"));
                }
            }
        }
        if self.peek() == Some(b'x') {
            let mono = self.monomial(nvars)?;
            return Ok((num, den, mono));
        }
        if !has_coeff {
            return Err(self.error("expected a coefficient or a variable"));
        }
        Ok((num, den, Monomial::one(nvars)))
    }

    fn monomial(&mut self, nvars: usize) -> Result<Monomial, PolyError> {
        let mut exps = vec![0u32; nvars];
        loop {
            if self.peek() != Some(b'x') {
                return Err(self.error("expected variable"));
            }
            self.bump();
            let at = self.pos;
            let index = self.small_int("variable index")? as usize;
            if index == 0 || index > nvars {
                return Err(PolyError::VariableOutOfRange {
                    pos: at,
                    index,
                    nvars,
                });
            }
            let mut exp = 1;
            if self.peek() == Some(b'^') {
                self.bump();
                exp = self.small_int("exponent")?;
            }
            exps[index - 1] = exps[index - 1]
                .checked_add(exp)
                .ok_or(PolyError::ExponentOverflow)?;
            // A '*' continues the monomial only if another variable follows.
            let save = self.pos;
            if self.peek() == Some(b'*') {
                self.bump();
                if self.peek() == Some(b'x') {
                    continue;
                }
                self.pos = save;
                return Err(self.error("expected variable after '*'"));
            }
            break;
        }
        Monomial::from_exponents(&exps)
    }
}

#[cfg(test)]
mod tests {
    use super::super::field::{rat, PrimeField, Rationals};
    use super::super::monomial::MonomialOrder;
    use super::*;

    fn q(n: usize) -> PolyRing<Rationals> {
        PolyRing::new(Rationals, n, MonomialOrder::Grevlex)
    }

    #[test]
    fn vertex_and_edge_polynomials() {
        let r = q(2);
        let p1 = parse_poly("x1^4 - 1", &r).unwrap();
        assert_eq!(p1, r.var_pow(0, 4).sub(&r.one()));
        let q12 = parse_poly("x1^3 + x1^2*x2 + x1*x2^2 + x2^3", &r).unwrap();
        assert_eq!(q12.len(), 4);
        assert_eq!(format_poly(&q12), "x1^3 + x1^2*x2 + x1*x2^2 + x2^3");
    }

    #[test]
    fn zero_and_constants() {
        let r = q(3);
        assert!(parse_poly("0", &r).unwrap().is_zero());
        assert!(parse_poly(" x1 - x1 ", &r).unwrap().is_zero());
        assert_eq!(parse_poly("-3/6", &r).unwrap(), r.constant(rat(-1, 2)));
    }

    #[test]
    fn coefficient_forms() {
        let r = q(2);
        let a = parse_poly("2/3*x1*x2^2", &r).unwrap();
        let b = parse_poly("2/3 x1 * x2 ^ 2", &r).unwrap();
        let c = parse_poly("2/3x1*x2^2", &r).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(parse_poly("x1*x1", &r).unwrap(), r.var_pow(0, 2));
    }

    #[test]
    fn prime_field_coefficients() {
        let r = PolyRing::new(PrimeField::new(5).unwrap(), 1, MonomialOrder::Lex);
        let p = parse_poly("1/2*x1 + 7", &r).unwrap();
        assert_eq!(p.terms()[0].0, 3);
        assert_eq!(p.terms()[1].0, 2);
        assert!(matches!(
            parse_poly("x1/5", &r),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(
            parse_poly("1/5*x1", &r),
            Err(PolyError::ZeroDenominator)
        ));
    }

    #[test]
    fn errors_carry_positions() {
        let r = q(2);
        assert!(matches!(
            parse_poly("x3", &r),
            Err(PolyError::VariableOutOfRange {
                index: 3,
                nvars: 2,
                ..
            })
        ));
        assert!(matches!(
            parse_poly("x0", &r),
            Err(PolyError::VariableOutOfRange { index: 0, .. })
        ));
        assert!(matches!(
            parse_poly("1/0", &r),
            Err(PolyError::ZeroDenominator)
        ));
        match parse_poly("x1 + + x2", &r) {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_poly("", &r),
            Err(PolyError::Syntax { pos: 0, .. })
        ));
        assert!(matches!(
            parse_poly("x1 x2", &r),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(
            parse_poly("x1*", &r),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(
            parse_poly("y1", &r),
            Err(PolyError::Syntax { .. })
        ));
    }
}
