use std::cmp::Ordering;
use std::fmt;

use super::field::Field;
use super::monomial::{Monomial, MonomialOrder};
use super::PolyError;

/// The ambient ring `F[x1, ..., xn]` together with the monomial order that
/// fixes the term layout of its polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing<F: Field> {
    pub field: F,
    pub nvars: usize,
    pub order: MonomialOrder,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F, nvars: usize, order: MonomialOrder) -> Self {
        PolyRing {
            field,
            nvars,
            order,
        }
    }

    pub fn zero(&self) -> Polynomial<F> {
        Polynomial {
            ring: *self,
            terms: Vec::new(),
        }
    }

    pub fn one(&self) -> Polynomial<F> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> Polynomial<F> {
        self.term(c, Monomial::one(self.nvars))
    }

    pub fn from_int(&self, c: i64) -> Polynomial<F> {
        self.constant(self.field.from_i64(c))
    }

    /// The variable `x_{index+1}` (0-based index).
    pub fn var(&self, index: usize) -> Polynomial<F> {
        self.var_pow(index, 1)
    }

    pub fn var_pow(&self, index: usize, exp: u32) -> Polynomial<F> {
        self.term(self.field.one(), Monomial::var_pow(self.nvars, index, exp))
    }

    pub fn term(&self, c: F::Elem, m: Monomial) -> Polynomial<F> {
        assert_eq!(m.nvars(), self.nvars, "monomial has wrong variable count");
        if self.field.is_zero(&c) {
            return self.zero();
        }
        Polynomial {
            ring: *self,
            terms: vec![(c, m)],
        }
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges duplicates and
    /// drops zero coefficients.
    pub fn from_terms(&self, mut terms: Vec<(F::Elem, Monomial)>) -> Polynomial<F> {
        assert!(
            terms.iter().all(|(_, m)| m.nvars() == self.nvars),
            "monomial has wrong variable count"
        );
        let ord = self.order;
        terms.sort_by(|a, b| ord.cmp(&b.1, &a.1));
        let mut out: Vec<(F::Elem, Monomial)> = Vec::with_capacity(terms.len());
        for (c, m) in terms {
            match out.last_mut() {
                Some(last) if last.1 == m => last.0 = self.field.add(&last.0, &c),
                _ => {
                    if let Some(last) = out.last() {
                        if self.field.is_zero(&last.0) {
                            out.pop();
                        }
                    }
                    out.push((c, m));
                }
            }
        }
        if out.last().is_some_and(|(c, _)| self.field.is_zero(c)) {
            out.pop();
        }
        Polynomial {
            ring: *self,
            terms: out,
        }
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        PolyRing { order, ..*self }
    }
}

/// A multivariate polynomial in canonical form: nonzero coefficients, distinct
/// monomials, strictly descending in the ring's order. Zero has no terms.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    ring: PolyRing<F>,
    terms: Vec<(F::Elem, Monomial)>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> Polynomial<F> {
    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn field(&self) -> F {
        self.ring.field
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order
    }

    pub fn terms(&self) -> &[(F::Elem, Monomial)] {
        &self.terms
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// A nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    pub fn is_one(&self) -> bool {
        self.is_unit() && self.ring.field.is_one(&self.terms[0].0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(_, m)| m.degree()).max()
    }

    /// Leading term under the ring's own order.
    pub fn lt(&self) -> Option<(&F::Elem, &Monomial)> {
        self.terms.first().map(|(c, m)| (c, m))
    }

    pub fn lm(&self) -> Option<&Monomial> {
        self.terms.first().map(|(_, m)| m)
    }

    pub fn lc(&self) -> Option<&F::Elem> {
        self.terms.first().map(|(c, _)| c)
    }

    /// Maximal term under an arbitrary order.
    pub fn leading_term(&self, ord: MonomialOrder) -> Result<(F::Elem, Monomial), PolyError> {
        let best = if ord == self.ring.order {
            self.terms.first()
        } else {
            self.terms.iter().max_by(|a, b| ord.cmp(&a.1, &b.1))
        };
        best.cloned().ok_or(PolyError::EmptyPolynomial)
    }

    /// Re-sorts the terms under another order.
    pub fn with_order(&self, ord: MonomialOrder) -> Polynomial<F> {
        if ord == self.ring.order {
            return self.clone();
        }
        let ring = self.ring.with_order(ord);
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| ord.cmp(&b.1, &a.1));
        Polynomial { ring, terms }
    }

    pub fn neg(&self) -> Polynomial<F> {
        let f = self.ring.field;
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(c, m)| (f.neg(c), m.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Polynomial<F> {
        let f = self.ring.field;
        if f.is_zero(c) {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(a, m)| (f.mul(a, c), m.clone()))
                .collect(),
        }
    }

    /// Divides through by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Polynomial<F> {
        match self.lc() {
            None => self.clone(),
            Some(lc) if self.ring.field.is_one(lc) => self.clone(),
            Some(lc) => self.scale(
                &self
                    .ring
                    .field
                    .inv(lc)
                    .expect("nonzero leading coefficient"),
            ),
        }
    }

    /// `c * m * self`; the order is multiplicative so the layout is preserved.
    pub fn mul_term(&self, c: &F::Elem, m: &Monomial) -> Polynomial<F> {
        let f = self.ring.field;
        if f.is_zero(c) {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(a, n)| (f.mul(a, c), n.mul(m)))
                .collect(),
        }
    }

    pub fn add(&self, other: &Polynomial<F>) -> Polynomial<F> {
        self.assert_compatible(other);
        self.merge(other, None)
    }

    pub fn sub(&self, other: &Polynomial<F>) -> Polynomial<F> {
        self.assert_compatible(other);
        let minus_one = self.ring.field.neg(&self.ring.field.one());
        self.merge(other, Some((&minus_one, None)))
    }

    /// `self - c * m * other`, the elementary step of multivariate division.
    pub fn sub_mul_term(&self, c: &F::Elem, m: &Monomial, other: &Polynomial<F>) -> Polynomial<F> {
        self.assert_compatible(other);
        let neg_c = self.ring.field.neg(c);
        self.merge(other, Some((&neg_c, Some(m))))
    }

    pub fn mul(&self, other: &Polynomial<F>) -> Polynomial<F> {
        self.assert_compatible(other);
        if self.is_zero() || other.is_zero() {
            return self.ring.zero();
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.len() == 1 {
            let (c, m) = &small.terms[0];
            return large.mul_term(c, m);
        }
        let f = self.ring.field;
        let mut prods = Vec::with_capacity(self.len() * other.len());
        for (a, m) in &small.terms {
            for (b, n) in &large.terms {
                prods.push((f.mul(a, b), m.mul(n)));
            }
        }
        self.ring.from_terms(prods)
    }

    pub fn pow(&self, mut exp: u32) -> Polynomial<F> {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Evaluates at a point given as one field element per variable.
    pub fn eval(&self, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.nvars(), "point has wrong dimension");
        let f = self.ring.field;
        let mut acc = f.zero();
        for (c, m) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t = f.mul(&t, x);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Removes and returns the leading term.
    pub(crate) fn pop_leading(&mut self) -> Option<(F::Elem, Monomial)> {
        if self.terms.is_empty() {
            None
        } else {
            Some(self.terms.remove(0))
        }
    }

    /// Wraps terms that are already strictly descending with nonzero coefficients.
    pub(crate) fn from_sorted_terms(
        ring: PolyRing<F>,
        terms: Vec<(F::Elem, Monomial)>,
    ) -> Polynomial<F> {
        let p = Polynomial { ring, terms };
        debug_assert!(p.is_canonical());
        p
    }

    /// Checks the canonical-form invariants.
    pub fn is_canonical(&self) -> bool {
        let f = self.ring.field;
        self.terms
            .iter()
            .all(|(c, m)| !f.is_zero(c) && m.nvars() == self.nvars())
            && self
                .terms
                .windows(2)
                .all(|w| self.ring.order.cmp(&w[0].1, &w[1].1) == Ordering::Greater)
    }

    pub(crate) fn check_compatible(&self, other: &Polynomial<F>) -> Result<(), PolyError> {
        if self.ring.field != other.ring.field {
            return Err(PolyError::FieldMismatch(
                self.ring.field.spec().to_string(),
                other.ring.field.spec().to_string(),
            ));
        }
        if self.ring.nvars != other.ring.nvars {
            return Err(PolyError::DimensionMismatch(
                self.ring.nvars,
                other.ring.nvars,
            ));
        }
        if self.ring.order != other.ring.order {
            return Err(PolyError::OrderMismatch);
        }
        Ok(())
    }

    fn assert_compatible(&self, other: &Polynomial<F>) {
        if let Err(e) = self.check_compatible(other) {
            panic!("incompatible polynomial operands: {e}");
        }
    }

    /// Merges `self + c * m * other` (with `c = 1`, `m = 1` when omitted).
    fn merge(
        &self,
        other: &Polynomial<F>,
        scale: Option<(&F::Elem, Option<&Monomial>)>,
    ) -> Polynomial<F> {
        let f = self.ring.field;
        let ord = self.ring.order;
        let map_other = |(b, n): &(F::Elem, Monomial)| -> (F::Elem, Monomial) {
            match scale {
                None => (b.clone(), n.clone()),
                Some((c, None)) => (f.mul(b, c), n.clone()),
                Some((c, Some(m))) => (f.mul(b, c), n.mul(m)),
            }
        };
        let mut out = Vec::with_capacity(self.len() + other.len());
        let mut i = 0;
        let mut j = 0;
        // Monomial multiplication is done lazily so comparisons see the shifted term.
        let mut pending: Option<(F::Elem, Monomial)> = other.terms.first().map(map_other);
        while i < self.terms.len() {
            let Some(ot) = pending.as_ref() else { break };
            let st = &self.terms[i];
            match ord.cmp(&st.1, &ot.1) {
                Ordering::Greater => {
                    out.push(st.clone());
                    i += 1;
                }
                Ordering::Less => {
                    if !f.is_zero(&ot.0) {
                        out.push(pending.take().expect("pending term"));
                    }
                    j += 1;
                    pending = other.terms.get(j).map(map_other);
                }
                Ordering::Equal => {
                    let s = f.add(&st.0, &ot.0);
                    if !f.is_zero(&s) {
                        out.push((s, st.1.clone()));
                    }
                    i += 1;
                    j += 1;
                    pending = other.terms.get(j).map(map_other);
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        if let Some(ot) = pending {
            if !f.is_zero(&ot.0) {
                out.push(ot);
            }
            for t in &other.terms[j + 1..] {
                let t = map_other(t);
                if !f.is_zero(&t.0) {
                    out.push(t);
                }
            }
        }
        Polynomial {
            ring: self.ring,
            terms: out,
        }
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Text form accepted back by [`super::parse_poly`], e.g. `x1^4 - 1`.
impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let field = self.ring.field;
        for (idx, (c, m)) in self.terms.iter().enumerate() {
            let text = field.format_elem(c);
            let (negative, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            match (idx == 0, negative) {
                (true, true) => write!(out, "-")?,
                (true, false) => {}
                (false, true) => write!(out, " - ")?,
                (false, false) => write!(out, " + ")?,
            }
            if m.is_one() {
                write!(out, "{mag}")?;
            } else if mag == "1" {
                write!(out, "{m}")?;
            } else {
                write!(out, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Arithmetic selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked polynomial arithmetic: validates field, variable count and order,
/// and guards against exponent overflow before multiplying.
pub fn poly_arith<F: Field>(
    op: ArithOp,
    f: &Polynomial<F>,
    g: &Polynomial<F>,
) -> Result<Polynomial<F>, PolyError> {
    f.check_compatible(g)?;
    Ok(match op {
        ArithOp::Add => f.add(g),
        ArithOp::Sub => f.sub(g),
        ArithOp::Mul => {
            let max_exp = |p: &Polynomial<F>| -> Vec<u32> {
                let mut acc = vec![0u32; p.nvars()];
                for (_, m) in p.terms() {
                    for (a, e) in acc.iter_mut().zip(m.exponents()) {
                        *a = (*a).max(*e);
                    }
                }
                acc
            };
            let (a, b) = (max_exp(f), max_exp(g));
            let fd = f.total_degree().unwrap_or(0);
            let gd = g.total_degree().unwrap_or(0);
            if a.iter().zip(&b).any(|(x, y)| x.checked_add(*y).is_none())
                || fd.checked_add(gd).is_none()
            {
                return Err(PolyError::ExponentOverflow);
            }
            f.mul(g)
        }
    })
}

/// Checked scalar multiple.
pub fn poly_scale<F: Field>(c: &F::Elem, f: &Polynomial<F>) -> Polynomial<F> {
    f.scale(c)
}
