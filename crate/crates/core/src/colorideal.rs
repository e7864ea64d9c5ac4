//! The coloring ideal of a graph and everything computed from it.
//!
//! Colors are the `k`-th roots of unity. Vertex `v` contributes
//! `x_v^k - 1`, forcing its value to be a root; edge `{u, v}` contributes
//! `Q_{u,v} = sum_{a+b=k-1} x_u^a x_v^b = (x_u^k - x_v^k) / (x_u - x_v)`, which
//! vanishes on two roots exactly when they differ. The graph is k-colorable iff
//! the ideal is proper, i.e. iff its reduced Gröbner basis is not `{1}`.

use thiserror::Error;

use crate::graphtools::{Coloring, Graph, GraphError};
use crate::groebner::{
    buchberger, combine, is_trivial, reduce_basis, Budget, GroebnerBasis, GroebnerError,
    GroebnerOptions,
};
use crate::polyring::{Field, FieldSpec, Monomial, MonomialOrder, PolyRing, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColorError {
    #[error("color count must be at least 1")]
    ZeroColors,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("{field} does not contain the {k}-th roots of unity (need p ≡ 1 mod {k})")]
    MissingRoots { k: usize, field: FieldSpec },
    #[error("coloring extraction over {field} is unsupported for k = {k}; use a prime field")]
    UnsupportedExtraction { k: usize, field: FieldSpec },
    #[error("vertex {v} out of range for {n} variables")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is not {0}-colorable")]
    Infeasible(usize),
    #[error("graph is {0}-colorable; no infeasibility certificate exists")]
    Colorable(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// `x_v^k - 1` (0-based vertex index).
pub fn vertex_poly<F: Field>(
    ring: &PolyRing<F>,
    v: usize,
    k: usize,
) -> Result<Polynomial<F>, ColorError> {
    if k == 0 {
        return Err(ColorError::ZeroColors);
    }
    if v >= ring.nvars {
        return Err(ColorError::VertexOutOfRange {
            v: v + 1,
            n: ring.nvars,
        });
    }
    Ok(ring.var_pow(v, k as u32).sub(&ring.one()))
}

/// `sum_{a+b=k-1} x_u^a x_v^b` (0-based vertex indices).
pub fn edge_poly<F: Field>(
    ring: &PolyRing<F>,
    u: usize,
    v: usize,
    k: usize,
) -> Result<Polynomial<F>, ColorError> {
    if k == 0 {
        return Err(ColorError::ZeroColors);
    }
    for w in [u, v] {
        if w >= ring.nvars {
            return Err(ColorError::VertexOutOfRange {
                v: w + 1,
                n: ring.nvars,
            });
        }
    }
    if u == v {
        return Err(ColorError::SelfLoop(u + 1));
    }
    let one = ring.field.one();
    let k = k as u32;
    let terms = (0..k)
        .map(|a| {
            let mut exps = vec![0u32; ring.nvars];
            exps[u] = a;
            exps[v] = k - 1 - a;
            (
                one.clone(),
                Monomial::from_exponents(&exps).expect("small exponents"),
            )
        })
        .collect();
    Ok(ring.from_terms(terms))
}

/// The generators of the coloring ideal: one vertex polynomial per vertex,
/// then one edge polynomial per edge in `(min, max)` lexicographic order.
pub fn encode_graph<F: Field>(
    g: &Graph,
    k: usize,
    ring: &PolyRing<F>,
) -> Result<Vec<Polynomial<F>>, ColorError> {
    if ring.nvars != g.n() {
        return Err(ColorError::VertexOutOfRange {
            v: g.n(),
            n: ring.nvars,
        });
    }
    let mut gens = Vec::with_capacity(g.n() + g.edge_count());
    for v in 0..g.n() {
        gens.push(vertex_poly(ring, v, k)?);
    }
    for &(u, v) in g.edges() {
        gens.push(edge_poly(ring, u, v, k)?);
    }
    Ok(gens)
}

/// A graph, a color count, a coefficient field and a monomial order.
#[derive(Clone, Debug)]
pub struct ColoringInstance<F: Field> {
    graph: Graph,
    k: usize,
    field: F,
    order: MonomialOrder,
    budget: Budget,
}

impl<F: Field> ColoringInstance<F> {
    /// Prime fields must contain the `k`-th roots of unity (`p ≡ 1 mod k`).
    pub fn new(graph: Graph, k: usize, field: F, order: MonomialOrder) -> Result<Self, ColorError> {
        if k == 0 {
            return Err(ColorError::ZeroColors);
        }
        if graph.n() == 0 {
            return Err(ColorError::EmptyGraph);
        }
        if let FieldSpec::Prime(p) = field.spec() {
            if (p - 1) % k as u64 != 0 {
                return Err(ColorError::MissingRoots {
                    k,
                    field: field.spec(),
                });
            }
        }
        Ok(ColoringInstance {
            graph,
            k,
            field,
            order,
            budget: Budget::default(),
        })
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn ring(&self) -> PolyRing<F> {
        PolyRing::new(self.field, self.graph.n(), self.order)
    }

    pub fn generators(&self) -> Vec<Polynomial<F>> {
        encode_graph(&self.graph, self.k, &self.ring()).expect("instance graph is well formed")
    }

    fn options(&self, track_cofactors: bool) -> GroebnerOptions {
        GroebnerOptions {
            track_cofactors,
            budget: self.budget,
        }
    }
}

/// Outcome of [`decide_colorable`].
#[derive(Clone, Debug)]
pub struct Decision<F: Field> {
    pub colorable: bool,
    /// Reduced Gröbner basis of the coloring ideal.
    pub basis: GroebnerBasis<F>,
}

/// Colorable iff the reduced Gröbner basis of the coloring ideal is not `{1}`.
pub fn decide_colorable<F: Field>(inst: &ColoringInstance<F>) -> Result<Decision<F>, ColorError> {
    let basis = instance_basis(inst, &inst.generators(), false)?;
    Ok(Decision {
        colorable: !is_trivial(&basis),
        basis,
    })
}

fn instance_basis<F: Field>(
    inst: &ColoringInstance<F>,
    gens: &[Polynomial<F>],
    track: bool,
) -> Result<GroebnerBasis<F>, ColorError> {
    Ok(reduce_basis(&buchberger(
        gens,
        inst.order,
        &inst.options(track),
    )?))
}

/// Result of peeling minimum-degree vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationOrder {
    /// Vertices in removal order.
    pub order: Vec<usize>,
    /// Largest degree seen at removal time.
    pub degeneracy: usize,
}

/// Repeatedly removes a vertex of minimum remaining degree (smallest index on
/// ties). Coloring in the reverse of this order sees at most `degeneracy`
/// colored neighbours per vertex.
pub fn elimination_order(g: &Graph) -> EliminationOrder {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut degeneracy = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("vertex left");
        degeneracy = degeneracy.max(deg[v]);
        removed[v] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }
    EliminationOrder { order, degeneracy }
}

/// Greedy coloring along the reverse of `order`: each vertex takes the
/// smallest color not used by an already-colored neighbour. Returns the
/// coloring and the number of colors used.
pub fn greedy_color(g: &Graph, order: &[usize]) -> Result<(Coloring, usize), ColorError> {
    let n = g.n();
    let mut seen = vec![false; n];
    if order.len() != n
        || !order
            .iter()
            .all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
    {
        return Err(GraphError::NotAPermutation(n).into());
    }
    let mut colors = vec![usize::MAX; n];
    let mut used = 0;
    for &v in order.iter().rev() {
        let mut taken: Vec<bool> = vec![false; g.degree(v) + 1];
        for &u in g.neighbors(v) {
            if colors[u] < taken.len() {
                taken[colors[u]] = true;
            }
        }
        let c = taken.iter().position(|t| !t).expect("degree + 1 slots");
        colors[v] = c;
        used = used.max(c + 1);
    }
    Ok((Coloring::new(colors), used))
}

/// Finds a proper coloring by specialization: vertices are fixed in
/// elimination order, each to the first color `c` (ascending) for which
/// adjoining `x_v - root_c` keeps the ideal proper.
pub fn extract_coloring<F: Field>(inst: &ColoringInstance<F>) -> Result<Coloring, ColorError> {
    let roots = inst
        .field
        .roots_of_unity(inst.k)
        .ok_or(ColorError::UnsupportedExtraction {
            k: inst.k,
            field: inst.field.spec(),
        })?;
    let decision = decide_colorable(inst)?;
    if !decision.colorable {
        return Err(ColorError::Infeasible(inst.k));
    }
    let ring = inst.ring();
    let mut current = decision.basis;
    let mut colors = vec![usize::MAX; inst.graph.n()];
    for v in elimination_order(&inst.graph).order {
        let mut accepted = None;
        for (c, root) in roots.iter().enumerate() {
            let mut gens = current.elements().to_vec();
            gens.push(ring.var(v).sub(&ring.constant(root.clone())));
            let basis = reduce_basis(&buchberger(&gens, inst.order, &inst.options(false))?);
            if !is_trivial(&basis) {
                accepted = Some((c, basis));
                break;
            }
        }
        // The variety is nonempty, so some root always survives.
        let (c, basis) =
            accepted.expect("a proper ideal has a point with a root-of-unity coordinate");
        colors[v] = c;
        current = basis;
    }
    Ok(Coloring::new(colors))
}

/// Either a proper coloring or Nullstellensatz cofactors (one per generator)
/// whose combination with the generators is exactly 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate<F: Field> {
    Coloring(Coloring),
    Infeasibility(Vec<Polynomial<F>>),
}

/// Cofactors `phi_i` with `sum phi_i * f_i = 1` over the instance's generators.
pub fn infeasibility_certificate<F: Field>(
    inst: &ColoringInstance<F>,
) -> Result<Certificate<F>, ColorError> {
    let gens = inst.generators();
    let basis = instance_basis(inst, &gens, true)?;
    if !is_trivial(&basis) {
        return Err(ColorError::Colorable(inst.k));
    }
    let trace = basis.trace().expect("cofactors were tracked");
    Ok(Certificate::Infeasibility(trace.row(0).to_vec()))
}

/// Checks a certificate against a generator list without any Gröbner
/// computation. A coloring is mapped to roots of unity (color `c` to root
/// `c`) and must annihilate every generator; cofactors must combine to 1.
pub fn verify_certificate<F: Field>(
    generators: &[Polynomial<F>],
    cert: &Certificate<F>,
    k: usize,
) -> bool {
    let Some(first) = generators.first() else {
        return matches!(cert, Certificate::Coloring(c) if c.is_empty());
    };
    if generators
        .iter()
        .any(|g| first.check_compatible(g).is_err())
    {
        return false;
    }
    match cert {
        Certificate::Coloring(coloring) => {
            let Some(roots) = first.field().roots_of_unity(k) else {
                return false;
            };
            if coloring.len() != first.nvars() || coloring.colors().iter().any(|&c| c >= k) {
                return false;
            }
            let point: Vec<F::Elem> = coloring
                .colors()
                .iter()
                .map(|&c| roots[c].clone())
                .collect();
            let field = first.field();
            generators.iter().all(|g| field.is_zero(&g.eval(&point)))
        }
        Certificate::Infeasibility(cofactors) => {
            if cofactors.len() != generators.len() {
                return false;
            }
            // Cofactors may come in another term order; compare in the generators' ring.
            let aligned: Vec<Polynomial<F>> = cofactors
                .iter()
                .map(|c| c.with_order(first.order()))
                .collect();
            if aligned.iter().any(|c| first.check_compatible(c).is_err()) {
                return false;
            }
            combine(&aligned, generators).is_one()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphtools::{brute_force_color, generate, Family};
    use crate::polyring::{parse_poly, PrimeField, Rationals};

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn inst<F: Field>(g: Graph, k: usize, field: F) -> ColoringInstance<F> {
        ColoringInstance::new(g, k, field, MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn vertex_polynomials() {
        let r = PolyRing::new(Rationals, 3, MonomialOrder::Grevlex);
        assert_eq!(
            vertex_poly(&r, 0, 4).unwrap(),
            parse_poly("x1^4 - 1", &r).unwrap()
        );
        assert_eq!(
            vertex_poly(&r, 0, 1).unwrap(),
            parse_poly("x1 - 1", &r).unwrap()
        );
        assert_eq!(
            vertex_poly(&r, 2, 3).unwrap(),
            parse_poly("x3^3 - 1", &r).unwrap()
        );
        assert!(matches!(
            vertex_poly(&r, 3, 4),
            Err(ColorError::VertexOutOfRange { v: 4, n: 3 })
        ));
        assert_eq!(vertex_poly(&r, 0, 0), Err(ColorError::ZeroColors));
    }

    #[test]
    fn edge_polynomials() {
        let r = PolyRing::new(Rationals, 2, MonomialOrder::Lex);
        let p = |s| parse_poly(s, &r).unwrap();
        assert_eq!(
            edge_poly(&r, 0, 1, 4).unwrap(),
            p("x1^3 + x1^2*x2 + x1*x2^2 + x2^3")
        );
        assert_eq!(edge_poly(&r, 0, 1, 2).unwrap(), p("x1 + x2"));
        let q3 = edge_poly(&r, 0, 1, 3).unwrap();
        assert_eq!(q3, p("x1^2 + x1*x2 + x2^2"));
        assert_eq!(p("x1 - x2").mul(&q3), p("x1^3 - x2^3"));
        assert_eq!(edge_poly(&r, 1, 1, 4), Err(ColorError::SelfLoop(2)));
        assert_eq!(edge_poly(&r, 0, 1, 1).unwrap(), r.one());
    }

    #[test]
    fn encodings() {
        let r = PolyRing::new(Rationals, 2, MonomialOrder::Grevlex);
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let gens = encode_graph(&g, 4, &r).unwrap();
        let expect: Vec<_> = ["x1^4 - 1", "x2^4 - 1", "x1^3 + x1^2*x2 + x1*x2^2 + x2^3"]
            .iter()
            .map(|s| parse_poly(s, &r).unwrap())
            .collect();
        assert_eq!(gens, expect);
        let r1 = PolyRing::new(Rationals, 1, MonomialOrder::Grevlex);
        assert_eq!(encode_graph(&Graph::empty(1), 4, &r1).unwrap().len(), 1);
        let r3 = PolyRing::new(Rationals, 3, MonomialOrder::Grevlex);
        let tri = encode_graph(&generate(Family::Complete(3)).unwrap(), 3, &r3).unwrap();
        assert_eq!(tri.len(), 6);
        assert_eq!(tri[3], parse_poly("x1^2 + x1*x2 + x2^2", &r3).unwrap());
        assert_eq!(tri[5], parse_poly("x2^2 + x2*x3 + x3^2", &r3).unwrap());
    }

    #[test]
    fn instance_validation() {
        let g = Graph::empty(2);
        assert!(matches!(
            ColoringInstance::new(g.clone(), 3, gf(5), MonomialOrder::Grevlex),
            Err(ColorError::MissingRoots { k: 3, .. })
        ));
        assert!(matches!(
            ColoringInstance::new(g.clone(), 0, Rationals, MonomialOrder::Grevlex),
            Err(ColorError::ZeroColors)
        ));
        assert!(ColoringInstance::new(g, 7, Rationals, MonomialOrder::Grevlex).is_ok());
    }

    #[test]
    fn decisions() {
        let k5 = generate(Family::Complete(5)).unwrap();
        let k4 = generate(Family::Complete(4)).unwrap();
        let c5 = generate(Family::Cycle(5)).unwrap();
        let d = decide_colorable(&inst(k5, 4, gf(5))).unwrap();
        assert!(!d.colorable);
        assert_eq!(d.basis.len(), 1);
        assert!(d.basis.elements()[0].is_one());
        assert!(decide_colorable(&inst(k4, 4, gf(5))).unwrap().colorable);
        assert!(
            !decide_colorable(&inst(c5.clone(), 2, Rationals))
                .unwrap()
                .colorable
        );
        assert!(decide_colorable(&inst(c5, 3, gf(7))).unwrap().colorable);
    }

    #[test]
    fn empty_graph_rejected() {
        assert!(matches!(
            ColoringInstance::new(Graph::empty(0), 4, gf(5), MonomialOrder::Grevlex),
            Err(ColorError::EmptyGraph)
        ));
    }

    #[test]
    fn extraction() {
        let c = extract_coloring(&inst(Graph::empty(3), 4, gf(5))).unwrap();
        assert_eq!(c.colors(), &[0, 0, 0]);
        let k4 = generate(Family::Complete(4)).unwrap();
        let c = extract_coloring(&inst(k4.clone(), 4, gf(5))).unwrap();
        assert!(c.is_proper(&k4));
        let roots = gf(5).roots_of_unity(4).unwrap();
        let mut values: Vec<u64> = c.colors().iter().map(|&i| roots[i]).collect();
        values.sort_unstable();
        assert_eq!(values, vec![1, 2, 3, 4]);
        assert!(matches!(
            extract_coloring(&inst(k4.clone(), 4, Rationals)),
            Err(ColorError::UnsupportedExtraction { k: 4, .. })
        ));
        assert_eq!(
            extract_coloring(&inst(k4, 3, gf(7))),
            Err(ColorError::Infeasible(3))
        );
        let c4 = generate(Family::Cycle(4)).unwrap();
        let c = extract_coloring(&inst(c4.clone(), 2, Rationals)).unwrap();
        assert!(c.is_proper(&c4));
    }

    #[test]
    fn certificates() {
        let k5 = generate(Family::Complete(5)).unwrap();
        let i = inst(k5, 4, gf(5));
        let cert = infeasibility_certificate(&i).unwrap();
        let gens = i.generators();
        assert!(verify_certificate(&gens, &cert, 4));
        let Certificate::Infeasibility(mut cof) = cert else {
            panic!()
        };
        cof[0] = cof[0].add(&i.ring().one());
        assert!(!verify_certificate(
            &gens,
            &Certificate::Infeasibility(cof.clone()),
            4
        ));
        cof.pop();
        assert!(!verify_certificate(
            &gens,
            &Certificate::Infeasibility(cof),
            4
        ));

        let k4 = generate(Family::Complete(4)).unwrap();
        let i4 = inst(k4, 4, gf(5));
        assert_eq!(
            infeasibility_certificate(&i4),
            Err(ColorError::Colorable(4))
        );
        let gens4 = i4.generators();
        assert!(verify_certificate(
            &gens4,
            &Certificate::Coloring(Coloring::new(vec![0, 1, 2, 3])),
            4
        ));
        assert!(!verify_certificate(
            &gens4,
            &Certificate::Coloring(Coloring::new(vec![0, 1, 2, 2])),
            4
        ));
        assert!(!verify_certificate(
            &gens4,
            &Certificate::Coloring(Coloring::new(vec![0, 1, 2, 4])),
            4
        ));
        assert!(!verify_certificate(
            &gens4,
            &Certificate::Coloring(Coloring::new(vec![0, 1, 2])),
            4
        ));
    }

    #[test]
    fn odd_cycle_certificate_over_rationals() {
        let c5 = generate(Family::Cycle(5)).unwrap();
        let i = inst(c5, 2, Rationals);
        let cert = infeasibility_certificate(&i).unwrap();
        let Certificate::Infeasibility(cof) = &cert else {
            panic!()
        };
        assert_eq!(cof.len(), 10);
        assert!(verify_certificate(&i.generators(), &cert, 2));
    }

    #[test]
    fn peeling() {
        let k5 = generate(Family::Complete(5)).unwrap();
        assert_eq!(elimination_order(&k5).degeneracy, 4);
        let path = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let e = elimination_order(&path);
        assert_eq!(e.order[0], 0);
        assert_eq!(e.degeneracy, 1);
    }

    #[test]
    fn greedy() {
        let c5 = generate(Family::Cycle(5)).unwrap();
        let e = elimination_order(&c5);
        assert_eq!(e.degeneracy, 2);
        let (col, used) = greedy_color(&c5, &e.order).unwrap();
        assert!(col.is_proper(&c5));
        assert!(used <= 3);
        assert!(matches!(
            greedy_color(&c5, &[0, 1, 2, 3]),
            Err(ColorError::Graph(GraphError::NotAPermutation(5)))
        ));
        assert!(greedy_color(&c5, &[0, 1, 2, 3, 3]).is_err());
        assert!(brute_force_color(&c5, 3).is_some());
    }
}
