//! Multivariate division, S-polynomials and Buchberger's algorithm.
//!
//! [`buchberger`] follows the normal selection strategy (smallest lcm degree
//! first, ties broken by the smaller index pair) and skips pairs with
//! Buchberger's coprime criterion and the chain criterion. With cofactor
//! tracking enabled every basis element carries its expression in terms of the
//! input generators, which is what turns `1 ∈ I` into a checkable certificate.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::polyring::{Field, Monomial, MonomialOrder, PolyError, PolyRing, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("generator list is empty or all zero")]
    EmptyGenerators,
    #[error("divisor {0} is the zero polynomial")]
    ZeroDivisor(usize),
    #[error("operation needs a nonzero polynomial")]
    EmptyPolynomial,
    #[error("budget exceeded: more than {limit} {resource}")]
    BudgetExceeded {
        resource: &'static str,
        limit: usize,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Resource caps for [`buchberger`]. Exceeding one aborts with
/// [`GroebnerError::BudgetExceeded`]; the answer is then unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Critical pairs actually reduced (pairs skipped by a criterion are free).
    pub max_pairs: usize,
    /// Terms stored across basis elements and their cofactor rows.
    pub max_terms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: 100_000,
            max_terms: 50_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GroebnerOptions {
    pub track_cofactors: bool,
    pub budget: Budget,
}

/// Expressions of basis elements in the original generators:
/// `basis[i] = sum_j rows[i][j] * generators[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofactorTrace<F: Field> {
    generators: Vec<Polynomial<F>>,
    rows: Vec<Vec<Polynomial<F>>>,
}

impl<F: Field> CofactorTrace<F> {
    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn rows(&self) -> &[Vec<Polynomial<F>>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Polynomial<F>] {
        &self.rows[i]
    }

    /// Expands `sum_j row[j] * generators[j]`.
    pub fn expand(&self, i: usize) -> Polynomial<F> {
        combine(&self.rows[i], &self.generators)
    }

    /// Every row expands exactly to its basis element.
    pub fn is_consistent_with(&self, basis: &[Polynomial<F>]) -> bool {
        self.rows.len() == basis.len() && (0..basis.len()).all(|i| self.expand(i) == basis[i])
    }
}

/// `sum_i cofactors[i] * generators[i]`.
pub fn combine<F: Field>(
    cofactors: &[Polynomial<F>],
    generators: &[Polynomial<F>],
) -> Polynomial<F> {
    assert_eq!(cofactors.len(), generators.len());
    let ring = *generators.first().expect("at least one generator").ring();
    cofactors
        .iter()
        .zip(generators)
        .fold(ring.zero(), |acc, (c, g)| acc.add(&c.mul(g)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis<F: Field> {
    elements: Vec<Polynomial<F>>,
    order: MonomialOrder,
    reduced: bool,
    trace: Option<CofactorTrace<F>>,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn elements(&self) -> &[Polynomial<F>] {
        &self.elements
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn trace(&self) -> Option<&CofactorTrace<F>> {
        self.trace.as_ref()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn ring(&self) -> &PolyRing<F> {
        self.elements[0].ring()
    }

    /// Drops the cofactor trace.
    pub fn without_trace(mut self) -> Self {
        self.trace = None;
        self
    }
}

/// Multivariate division of `f` by `divisors`, always reducing with the first
/// divisor whose leading monomial divides the current leading term.
///
/// Returns the remainder and one quotient per divisor, so that
/// `f = sum q_i * d_i + r` and no term of `r` is divisible by any `LM(d_i)`.
pub fn normal_form<F: Field>(
    f: &Polynomial<F>,
    divisors: &[Polynomial<F>],
) -> Result<(Polynomial<F>, Vec<Polynomial<F>>), GroebnerError> {
    for (i, d) in divisors.iter().enumerate() {
        if d.is_zero() {
            return Err(GroebnerError::ZeroDivisor(i));
        }
        f.check_compatible(d)?;
    }
    let refs: Vec<&Polynomial<F>> = divisors.iter().collect();
    let (r, q) = divide(f, &refs, true);
    Ok((r, q.expect("quotients requested")))
}

/// Reduces modulo `divisors` (assumed nonzero and compatible).
pub(crate) fn divide<F: Field>(
    f: &Polynomial<F>,
    divisors: &[&Polynomial<F>],
    want_quotients: bool,
) -> (Polynomial<F>, Option<Vec<Polynomial<F>>>) {
    let ring = *f.ring();
    let field = ring.field;
    let lms: Vec<&Monomial> = divisors
        .iter()
        .map(|d| d.lm().expect("nonzero divisor"))
        .collect();
    let lc_invs: Vec<F::Elem> = divisors
        .iter()
        .map(|d| field.inv(d.lc().expect("nonzero divisor")).expect("unit"))
        .collect();
    let mut quotient_terms: Vec<Vec<(F::Elem, Monomial)>> =
        vec![Vec::new(); if want_quotients { divisors.len() } else { 0 }];
    let mut rem = Vec::new();
    let mut p = f.clone();
    while let Some((c, m)) = p.lt() {
        match lms.iter().position(|lm| lm.divides(m)) {
            Some(i) => {
                let t = lms[i].quotient_of(m).expect("divisibility checked");
                let coef = field.mul(c, &lc_invs[i]);
                p = p.sub_mul_term(&coef, &t, divisors[i]);
                if want_quotients {
                    quotient_terms[i].push((coef, t));
                }
            }
            None => rem.push(p.pop_leading().expect("nonzero")),
        }
    }
    let quotients = want_quotients.then(|| {
        quotient_terms
            .into_iter()
            .map(|ts| Polynomial::from_sorted_terms(ring, ts))
            .collect()
    });
    (Polynomial::from_sorted_terms(ring, rem), quotients)
}

/// `(lcm/LT(f)) * f - (lcm/LT(g)) * g` for the leading monomials' lcm.
pub fn s_polynomial<F: Field>(
    f: &Polynomial<F>,
    g: &Polynomial<F>,
) -> Result<Polynomial<F>, GroebnerError> {
    f.check_compatible(g)?;
    let (sf, sg) = s_multipliers(f, g).ok_or(GroebnerError::EmptyPolynomial)?;
    Ok(f.mul_term(&sf.0, &sf.1).sub(&g.mul_term(&sg.0, &sg.1)))
}

type TermMultiplier<F> = (<F as Field>::Elem, Monomial);

fn s_multipliers<F: Field>(
    f: &Polynomial<F>,
    g: &Polynomial<F>,
) -> Option<(TermMultiplier<F>, TermMultiplier<F>)> {
    let field = f.field();
    let (fc, fm) = f.lt()?;
    let (gc, gm) = g.lt()?;
    let lcm = fm.lcm(gm);
    let a = (field.inv(fc)?, fm.quotient_of(&lcm)?);
    let b = (field.inv(gc)?, gm.quotient_of(&lcm)?);
    Some((a, b))
}

/// Buchberger's algorithm. Zero generators are dropped; generators are first
/// re-sorted into `ord` if their ring uses another order.
///
/// Critical pairs are managed with the Gebauer–Möller update, which applies
/// the coprime criterion and the chain criterion and retires elements whose
/// leading monomial becomes a multiple of a newer one. Retired elements stop
/// forming pairs but stay available as reducers. Over the rationals working
/// elements are kept primitive with integer coefficients, which limits
/// coefficient growth; the result is a (not necessarily reduced) Gröbner
/// basis with monic elements. As soon as a
/// nonzero constant appears the ideal is the whole ring and `{1}` is returned.
pub fn buchberger<F: Field>(
    generators: &[Polynomial<F>],
    ord: MonomialOrder,
    opts: &GroebnerOptions,
) -> Result<GroebnerBasis<F>, GroebnerError> {
    let gens: Vec<Polynomial<F>> = generators.iter().map(|g| g.with_order(ord)).collect();
    let first = gens
        .iter()
        .find(|g| !g.is_zero())
        .ok_or(GroebnerError::EmptyGenerators)?;
    for g in &gens {
        first.check_compatible(g)?;
    }
    let ring = *first.ring();
    let mut st = State {
        ring,
        track: opts.track_cofactors,
        budget: opts.budget,
        polys: Vec::new(),
        rows: Vec::new(),
        active: Vec::new(),
        pairs: BTreeSet::new(),
        stored_terms: 0,
    };

    for (idx, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let row = if st.track {
            let mut row = vec![ring.zero(); gens.len()];
            row[idx] = ring.one();
            row
        } else {
            Vec::new()
        };
        if let Some(unit) = st.insert(g.clone(), row)? {
            return Ok(st.unit_basis(unit, ord, gens));
        }
    }

    let mut processed = 0usize;
    while let Some((_, i, j)) = st.pairs.pop_first() {
        processed += 1;
        if processed > st.budget.max_pairs {
            return Err(GroebnerError::BudgetExceeded {
                resource: "critical pairs",
                limit: st.budget.max_pairs,
            });
        }
        let ((ci, mi), (cj, mj)) = s_multipliers(&st.polys[i], &st.polys[j]).expect("nonzero pair");
        let s = st.polys[i]
            .mul_term(&ci, &mi)
            .sub(&st.polys[j].mul_term(&cj, &mj));
        // Retired elements remain valid reducers and often have smaller coefficients.
        let divisors: Vec<&Polynomial<F>> = st.polys.iter().collect();
        let (r, quotients) = divide(&s, &divisors, st.track);
        if r.is_zero() {
            continue;
        }
        let row = if st.track {
            let mut row: Vec<Polynomial<F>> = st.rows[i]
                .iter()
                .zip(&st.rows[j])
                .map(|(a, b)| a.mul_term(&ci, &mi).sub(&b.mul_term(&cj, &mj)))
                .collect();
            let quotients = quotients.expect("tracked");
            for (q, a_row) in quotients.iter().zip(&st.rows) {
                subtract_multiple(&mut row, q, a_row);
            }
            row
        } else {
            Vec::new()
        };
        if let Some(unit) = st.insert(r, row)? {
            return Ok(st.unit_basis(unit, ord, gens));
        }
    }

    // Working elements may be in a non-monic normal form (primitive over Q).
    let field = ring.field;
    let scales: Vec<F::Elem> = st
        .active
        .iter()
        .map(|&a| field.inv(st.polys[a].lc().expect("nonzero")).expect("unit"))
        .collect();
    let elements = st
        .active
        .iter()
        .zip(&scales)
        .map(|(&a, c)| st.polys[a].scale(c))
        .collect();
    let trace = st.track.then(|| CofactorTrace {
        generators: gens,
        rows: st
            .active
            .iter()
            .zip(&scales)
            .map(|(&a, c)| st.rows[a].iter().map(|p| p.scale(c)).collect())
            .collect(),
    });
    Ok(GroebnerBasis {
        elements,
        order: ord,
        reduced: false,
        trace,
    })
}

/// `row -= q * other`, entrywise.
fn subtract_multiple<F: Field>(
    row: &mut [Polynomial<F>],
    q: &Polynomial<F>,
    other: &[Polynomial<F>],
) {
    if q.is_zero() {
        return;
    }
    for (entry, c) in row.iter_mut().zip(other) {
        if !c.is_zero() {
            *entry = entry.sub(&q.mul(c));
        }
    }
}

struct State<F: Field> {
    ring: PolyRing<F>,
    track: bool,
    budget: Budget,
    /// Every element ever inserted; pairs refer to these indices.
    polys: Vec<Polynomial<F>>,
    rows: Vec<Vec<Polynomial<F>>>,
    /// Indices of elements still in the basis, ascending.
    active: Vec<usize>,
    /// Pending critical pairs keyed by (lcm degree, i, j), i < j.
    pairs: BTreeSet<(u32, usize, usize)>,
    stored_terms: usize,
}

impl<F: Field> State<F> {
    /// Normalizes `h` and adds it with the Gebauer–Möller update. Returns the
    /// index of `h` if it is a constant, meaning the ideal is the whole ring.
    fn insert(
        &mut self,
        h: Polynomial<F>,
        row: Vec<Polynomial<F>>,
    ) -> Result<Option<usize>, GroebnerError> {
        let field = self.ring.field;
        let lc_inv = field.normalizer(h.terms().iter().map(|(c, _)| c));
        let h = h.scale(&lc_inv);
        let row: Vec<Polynomial<F>> = if field.is_one(&lc_inv) {
            row
        } else {
            row.iter().map(|p| p.scale(&lc_inv)).collect()
        };
        self.stored_terms += h.len() + row.iter().map(Polynomial::len).sum::<usize>();
        if self.stored_terms > self.budget.max_terms {
            return Err(GroebnerError::BudgetExceeded {
                resource: "stored terms",
                limit: self.budget.max_terms,
            });
        }
        let hi = self.polys.len();
        let unit = h.is_unit();
        self.polys.push(h);
        self.rows.push(row);
        if unit {
            return Ok(Some(hi));
        }
        let lm_h = self.polys[hi].lm().expect("nonzero").clone();

        // New pairs (g, h), thinned by the chain criterion among themselves.
        let cands: Vec<(usize, Monomial, bool)> = self
            .active
            .iter()
            .map(|&g| {
                let lm_g = self.polys[g].lm().expect("nonzero");
                (g, lm_g.lcm(&lm_h), lm_g.is_coprime(&lm_h))
            })
            .collect();
        let mut kept: Vec<usize> = Vec::new();
        for (c, (_, lcm, coprime)) in cands.iter().enumerate() {
            let dominated = || {
                cands[c + 1..]
                    .iter()
                    .any(|(_, other, _)| other.divides(lcm))
                    || kept.iter().any(|&d| cands[d].1.divides(lcm))
            };
            if *coprime || !dominated() {
                kept.push(c);
            }
        }

        // Old pairs made redundant by h.
        let polys = &self.polys;
        self.pairs.retain(|&(_, a, b)| {
            let lm_a = polys[a].lm().expect("nonzero");
            let lm_b = polys[b].lm().expect("nonzero");
            let lcm = lm_a.lcm(lm_b);
            !lm_h.divides(&lcm) || lm_a.lcm(&lm_h) == lcm || lm_b.lcm(&lm_h) == lcm
        });

        for c in kept {
            let (g, ref lcm, coprime) = cands[c];
            if !coprime {
                self.pairs.insert((lcm.degree(), g, hi));
            }
        }

        self.active
            .retain(|&g| !lm_h.divides(polys[g].lm().expect("nonzero")));
        self.active.push(hi);
        Ok(None)
    }

    fn unit_basis(
        mut self,
        unit: usize,
        ord: MonomialOrder,
        gens: Vec<Polynomial<F>>,
    ) -> GroebnerBasis<F> {
        let row = std::mem::take(&mut self.rows[unit]);
        GroebnerBasis {
            elements: vec![self.polys.swap_remove(unit)],
            order: ord,
            reduced: true,
            trace: self.track.then(|| CofactorTrace {
                generators: gens,
                rows: vec![row],
            }),
        }
    }
}

/// Autoreduction: repeatedly replaces each element by its normal form modulo
/// the others (dropping zeros) until nothing changes, then makes everything
/// monic and sorts by descending leading monomial. On a Gröbner basis this is
/// the unique reduced Gröbner basis of the same ideal. Cofactor rows follow
/// every step.
pub fn reduce_basis<F: Field>(gb: &GroebnerBasis<F>) -> GroebnerBasis<F> {
    if gb.reduced {
        return gb.clone();
    }
    let ord = gb.order;
    let field = gb.elements[0].field();
    let tracked = gb.trace.is_some();
    let mut polys: Vec<Polynomial<F>> = gb.elements.clone();
    let mut rows: Vec<Vec<Polynomial<F>>> = gb
        .trace
        .as_ref()
        .map(|t| t.rows.clone())
        .unwrap_or_default();

    let mut changed = true;
    while changed {
        changed = false;
        let mut i = 0;
        while i < polys.len() {
            if polys.len() == 1 {
                break;
            }
            let others: Vec<&Polynomial<F>> = polys
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| p)
                .collect();
            let (r, q) = divide(&polys[i], &others, tracked);
            if r == polys[i] {
                i += 1;
                continue;
            }
            changed = true;
            if tracked {
                let q = q.expect("tracked");
                let mut row = rows[i].clone();
                let other_rows = rows
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, r)| r);
                for (qk, orow) in q.iter().zip(other_rows) {
                    subtract_multiple(&mut row, qk, orow);
                }
                rows[i] = row;
            }
            if r.is_zero() {
                polys.remove(i);
                if tracked {
                    rows.remove(i);
                }
            } else {
                polys[i] = r;
                i += 1;
            }
        }
    }

    for (i, p) in polys.iter_mut().enumerate() {
        let lc_inv = field.inv(p.lc().expect("nonzero")).expect("unit");
        if !field.is_one(&lc_inv) {
            *p = p.scale(&lc_inv);
            if tracked {
                rows[i] = rows[i].iter().map(|c| c.scale(&lc_inv)).collect();
            }
        }
    }

    let mut idx: Vec<usize> = (0..polys.len()).collect();
    idx.sort_by(|&a, &b| ord.cmp(polys[b].lm().unwrap(), polys[a].lm().unwrap()));
    let elements = idx.iter().map(|&i| polys[i].clone()).collect();
    let trace = gb.trace.as_ref().map(|t| CofactorTrace {
        generators: t.generators.clone(),
        rows: idx.iter().map(|&i| rows[i].clone()).collect(),
    });
    GroebnerBasis {
        elements,
        order: ord,
        reduced: true,
        trace,
    }
}

/// Convenience: Buchberger followed by [`reduce_basis`].
pub fn reduced_groebner_basis<F: Field>(
    generators: &[Polynomial<F>],
    ord: MonomialOrder,
    opts: &GroebnerOptions,
) -> Result<GroebnerBasis<F>, GroebnerError> {
    Ok(reduce_basis(&buchberger(generators, ord, opts)?))
}

/// Ideal membership: the normal form modulo the basis vanishes.
pub fn is_member<F: Field>(f: &Polynomial<F>, gb: &GroebnerBasis<F>) -> bool {
    if f.is_zero() {
        return true;
    }
    let f = f.with_order(gb.order);
    let refs: Vec<&Polynomial<F>> = gb.elements.iter().collect();
    divide(&f, &refs, false).0.is_zero()
}

/// The basis generates the whole ring.
pub fn is_trivial<F: Field>(gb: &GroebnerBasis<F>) -> bool {
    gb.elements.iter().any(Polynomial::is_unit)
}

/// Buchberger's criterion: every S-polynomial of the set reduces to zero.
pub fn is_groebner_basis<F: Field>(polys: &[Polynomial<F>]) -> bool {
    let polys: Vec<Polynomial<F>> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    let refs: Vec<&Polynomial<F>> = polys.iter().collect();
    for j in 0..polys.len() {
        for i in 0..j {
            let s = s_polynomial(&polys[i], &polys[j]).expect("nonzero, compatible");
            if !divide(&s, &refs, false).0.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Reduced-basis shape: monic, and no term of any element divisible by the
/// leading monomial of another.
pub fn is_reduced_shape<F: Field>(polys: &[Polynomial<F>]) -> bool {
    let field = match polys.first() {
        Some(p) => p.field(),
        None => return true,
    };
    polys.iter().enumerate().all(|(i, p)| {
        p.lc().is_some_and(|c| field.is_one(c))
            && polys.iter().enumerate().all(|(j, q)| {
                i == j || {
                    let lm = q.lm().expect("nonzero");
                    p.terms().iter().all(|(_, m)| !lm.divides(m))
                }
            })
    })
}
