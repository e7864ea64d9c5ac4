//! Graph k-colorability through Gröbner bases.
//!
//! A graph on `n` vertices becomes an ideal in `F[x1, ..., xn]` generated by
//! `x_v^k - 1` for every vertex and `sum_{a+b=k-1} x_u^a x_v^b` for every edge.
//! The graph is k-colorable exactly when that ideal is proper, which a reduced
//! Gröbner basis decides: the basis is `{1}` iff no coloring exists. Infeasible
//! instances come with a Nullstellensatz certificate (cofactors whose
//! combination with the generators is identically 1); feasible ones with an
//! explicit coloring.
//!
//! Modules, bottom up:
//!
//! * [`polyring`]: exact fields (ℚ and GF(p)), monomials, orders, polynomials.
//! * [`groebner`]: division, S-polynomials, Buchberger with cofactor tracking.
//! * [`graphtools`]: graphs, DIMACS/JSON I/O, generators, brute-force oracle.
//! * [`colorideal`]: the coloring ideal, decisions, colorings, certificates.
//! * [`cli`]: the `gbcolor` command line.

pub mod cli;
pub mod colorideal;
pub mod graphtools;
pub mod groebner;
pub mod polyring;
