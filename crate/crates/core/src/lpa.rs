//! Elements of a Leavitt path algebra `L_K(E)` as combinations of monomials `αβ*`.
//!
//! Products apply the ghost/real cancellation eagerly. The vertex
//! decomposition is applied only by [`LpaElement::normal_form`], which
//! rewrites `α₀·sp·(β₀·sp)*` (with `sp` the special edge at the junction
//! vertex) until no monomial ends in a special pair. The surviving
//! monomials form a basis, so two elements are equal iff their normal forms are.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Cycle, EdgeId, Graph, Path, VertexId};
use crate::poly::Polynomial;
use crate::scalar::{Field, Scalar};

/// The path part `αβ*` of a monomial, with `r(α) = r(β)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    real: Path,
    ghost: Path,
}

impl Monomial {
    pub fn new(g: &Graph, real: Path, ghost: Path) -> Result<Monomial> {
        if real.range() != ghost.range() {
            return Err(Error::NotComposable {
                left: g.render_path(&real),
                right: format!("({})*", g.render_path(&ghost)),
            });
        }
        Ok(Monomial { real, ghost })
    }

    pub fn vertex(v: VertexId) -> Monomial {
        Monomial {
            real: Path::vertex(v),
            ghost: Path::vertex(v),
        }
    }

    pub fn real(&self) -> &Path {
        &self.real
    }

    pub fn ghost(&self) -> &Path {
        &self.ghost
    }

    pub fn is_vertex(&self) -> bool {
        self.real.is_vertex() && self.ghost.is_vertex()
    }

    /// `αβ*` read as a double-graph path goes from `s(α)` to `s(β)`.
    pub fn source(&self) -> VertexId {
        self.real.source()
    }

    pub fn target(&self) -> VertexId {
        self.ghost.source()
    }

    /// The ghost-real cancellation `(αβ*)(γδ*)`.
    pub fn mul(&self, other: &Monomial, g: &Graph) -> Option<Monomial> {
        let (beta, gamma) = (&self.ghost, &other.real);
        if beta.is_prefix_of(gamma) {
            let rest = gamma.slice(g, beta.len(), gamma.len());
            Some(Monomial {
                real: self.real.concat_unchecked(&rest),
                ghost: other.ghost.clone(),
            })
        } else if gamma.is_prefix_of(beta) {
            let rest = beta.slice(g, gamma.len(), beta.len());
            Some(Monomial {
                real: self.real.clone(),
                ghost: other.ghost.concat_unchecked(&rest),
            })
        } else {
            None
        }
    }

    /// `(αβ*)* = βα*`.
    pub fn adjoint(&self) -> Monomial {
        Monomial {
            real: self.ghost.clone(),
            ghost: self.real.clone(),
        }
    }

    /// The special edge both parts end in, if a rewrite applies.
    fn reducible(&self, g: &Graph) -> Option<EdgeId> {
        let (a, b) = (self.real.last_edge()?, self.ghost.last_edge()?);
        (a == b && g.special_edge(g.source(a)) == Some(a)).then_some(a)
    }

    pub fn is_normal(&self, g: &Graph) -> bool {
        self.reducible(g).is_none()
    }

    pub fn render(&self, g: &Graph) -> String {
        if self.is_vertex() {
            return g.vertex_name(self.real.source()).to_string();
        }
        let mut atoms: Vec<String> = self.real.edges().iter().map(|e| g.edge_name(*e).to_string()).collect();
        atoms.extend(self.ghost.edges().iter().rev().map(|e| format!("{}*", g.edge_name(*e))));
        atoms.join(" ")
    }
}

/// A finite `K`-combination of monomials over a fixed graph.
#[derive(Clone, Debug)]
pub struct LpaElement {
    graph: Arc<Graph>,
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for LpaElement {
    /// Structural equality of the stored combination; compare normal forms for algebra equality.
    fn eq(&self, other: &Self) -> bool {
        same_graph(&self.graph, &other.graph) && self.field == other.field && self.terms == other.terms
    }
}

fn same_graph(a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl LpaElement {
    pub fn zero(graph: &Arc<Graph>, field: &Field) -> LpaElement {
        LpaElement {
            graph: graph.clone(),
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(graph: &Arc<Graph>, coeff: Scalar, m: Monomial) -> LpaElement {
        let field = coeff.field();
        let mut x = LpaElement::zero(graph, &field);
        x.add_term(m, coeff);
        x
    }

    pub fn vertex(graph: &Arc<Graph>, field: &Field, v: VertexId) -> LpaElement {
        LpaElement::monomial(graph, Scalar::one(field), Monomial::vertex(v))
    }

    /// The real path `p` (a vertex gives the idempotent).
    pub fn path(graph: &Arc<Graph>, field: &Field, p: &Path) -> LpaElement {
        let m = Monomial {
            real: p.clone(),
            ghost: Path::vertex(p.range()),
        };
        LpaElement::monomial(graph, Scalar::one(field), m)
    }

    /// The ghost path `p*`.
    pub fn ghost(graph: &Arc<Graph>, field: &Field, p: &Path) -> LpaElement {
        let m = Monomial {
            real: Path::vertex(p.range()),
            ghost: p.clone(),
        };
        LpaElement::monomial(graph, Scalar::one(field), m)
    }

    /// `Σ_v v`, the unit of the algebra of a finite graph.
    pub fn one(graph: &Arc<Graph>, field: &Field) -> LpaElement {
        let mut x = LpaElement::zero(graph, field);
        for v in graph.vertices() {
            x.add_term(Monomial::vertex(v), Scalar::one(field));
        }
        x
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| Scalar::zero(&self.field))
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(cur) => {
                *cur = &*cur + &c;
                if cur.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check(&self, other: &LpaElement) -> Result<()> {
        if !same_graph(&self.graph, &other.graph) {
            return Err(Error::GraphMismatch);
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &LpaElement) -> Result<LpaElement> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LpaElement) -> Result<LpaElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LpaElement {
        self.scale(&-Scalar::one(&self.field)).expect("same field")
    }

    pub fn scale(&self, c: &Scalar) -> Result<LpaElement> {
        let c = c.coerce(&self.field)?;
        let mut out = LpaElement::zero(&self.graph, &self.field);
        for (m, k) in &self.terms {
            out.add_term(m.clone(), &c * k);
        }
        Ok(out)
    }

    /// Bilinear product with eager ghost/real cancellation; not normalized.
    pub fn multiply(&self, other: &LpaElement) -> Result<LpaElement> {
        self.check(other)?;
        let mut out = LpaElement::zero(&self.graph, &self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some(m) = m1.mul(m2, &self.graph) {
                    out.add_term(m, c1 * c2);
                }
            }
        }
        Ok(out)
    }

    /// The involution fixing scalars and swapping real and ghost parts.
    pub fn adjoint(&self) -> LpaElement {
        let mut out = LpaElement::zero(&self.graph, &self.field);
        for (m, c) in &self.terms {
            out.add_term(m.adjoint(), c.clone());
        }
        out
    }

    /// Views a base-field element inside an extension of its field.
    pub fn embed(&self, field: &Field) -> Result<LpaElement> {
        let mut out = LpaElement::zero(&self.graph, field);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.coerce(field)?);
        }
        Ok(out)
    }

    /// Rewrites until no monomial ends in a special pair.
    pub fn normal_form(&self) -> LpaElement {
        let g = self.graph.clone();
        let mut cur = self.clone();
        loop {
            let reducible: Vec<Monomial> = cur.terms.keys().filter(|m| !m.is_normal(&g)).cloned().collect();
            if reducible.is_empty() {
                return cur;
            }
            for m in reducible {
                if let Some(c) = cur.terms.remove(&m) {
                    cur.rewrite(&m, c);
                }
            }
        }
    }

    /// Normal form where `pick(n)` chooses which of the `n` reducible monomials to rewrite next.
    pub fn normal_form_with_strategy(&self, pick: &mut dyn FnMut(usize) -> usize) -> LpaElement {
        let g = self.graph.clone();
        let mut cur = self.clone();
        loop {
            let reducible: Vec<&Monomial> = cur.terms.keys().filter(|m| !m.is_normal(&g)).collect();
            if reducible.is_empty() {
                return cur;
            }
            let m = reducible[pick(reducible.len()) % reducible.len()].clone();
            let c = cur.terms.remove(&m).expect("present");
            cur.rewrite(&m, c);
        }
    }

    /// `c·α₀ sp sp* β₀*  ↦  c·α₀β₀* − Σ_{f ≠ sp} c·α₀ f f* β₀*`.
    fn rewrite(&mut self, m: &Monomial, c: Scalar) {
        let g = self.graph.clone();
        let sp = m.reducible(&g).expect("reducible monomial");
        let u = g.source(sp);
        let a0 = m.real.slice(&g, 0, m.real.len() - 1);
        let b0 = m.ghost.slice(&g, 0, m.ghost.len() - 1);
        debug_assert_eq!(a0.range(), u);
        self.add_term(
            Monomial {
                real: a0.clone(),
                ghost: b0.clone(),
            },
            c.clone(),
        );
        let neg = -&c;
        for &f in g.out_edges(u) {
            if f == sp {
                continue;
            }
            let fp = Path::edge(&g, f);
            self.add_term(
                Monomial {
                    real: a0.concat_unchecked(&fp),
                    ghost: b0.concat_unchecked(&fp),
                },
                neg.clone(),
            );
        }
    }

    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(|m| m.is_normal(&self.graph))
    }

    /// Equality in the algebra.
    pub fn equals(&self, other: &LpaElement) -> Result<bool> {
        Ok(self.sub(other)?.normal_form().is_zero())
    }

    /// Renders in the expression grammar, terms in monomial order.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if !abs.is_one() {
                out.push_str(&render_coeff(&abs));
                out.push(' ');
            }
            out.push_str(&m.render(&self.graph));
        }
        out
    }
}

/// Coefficients that are sums get parentheses.
pub(crate) fn render_coeff(c: &Scalar) -> String {
    let s = c.render("xbar");
    if s.trim_start_matches('-').contains(['+', '-']) {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for LpaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `σ_{e,a}`: scales `e₁` by `a` and `e₁*` by `a⁻¹`.
#[derive(Clone, Debug)]
pub struct GaugeMap {
    cycle: Cycle,
    scale: Scalar,
    inverse: Scalar,
}

impl GaugeMap {
    pub fn new(cycle: Cycle, scale: Scalar) -> Result<GaugeMap> {
        let inverse = scale
            .inv()
            .map_err(|_| Error::NonInvertibleScale(scale.to_string()))?;
        Ok(GaugeMap { cycle, scale, inverse })
    }

    pub fn cycle(&self) -> &Cycle {
        &self.cycle
    }

    pub fn scale(&self) -> &Scalar {
        &self.scale
    }

    pub fn inverse(&self) -> GaugeMap {
        GaugeMap {
            cycle: self.cycle.clone(),
            scale: self.inverse.clone(),
            inverse: self.scale.clone(),
        }
    }

    pub fn apply(&self, x: &LpaElement) -> Result<LpaElement> {
        let e1 = self.cycle.first_edge();
        let mut out = LpaElement::zero(&x.graph, &x.field);
        for (m, c) in &x.terms {
            let exp = twist_exponent(m, e1);
            let factor = self.scale.coerce(&x.field)?.pow(exp)?;
            out.add_term(m.clone(), c * &factor);
        }
        Ok(out)
    }
}

/// `#(α) − #(β)` counting occurrences of `e1`.
pub fn twist_exponent(m: &Monomial, e1: EdgeId) -> i64 {
    m.real.count_edge(e1) as i64 - m.ghost.count_edge(e1) as i64
}

/// `p(e) = Σ p_k e^k` with `e^0 = s(e)`.
pub fn eval_poly_at_cycle(graph: &Arc<Graph>, p: &Polynomial, e: &Cycle) -> LpaElement {
    let field = p.field();
    let mut out = LpaElement::zero(graph, field);
    for (k, c) in p.coeffs().iter().enumerate() {
        let m = Monomial {
            real: e.power(k),
            ghost: Path::vertex(e.base()),
        };
        out.add_term(m, c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    fn el(g: &Arc<Graph>, s: &str) -> LpaElement {
        crate::expr::parse_element(s, g, &Field::RATIONAL).unwrap()
    }

    #[test]
    fn ck1_products() {
        let g = fixture::example();
        assert_eq!(el(&g, "d1*").multiply(&el(&g, "d1")).unwrap().render(), "s2");
        assert!(el(&g, "d1*").multiply(&el(&g, "d2")).unwrap().is_zero());
        assert_eq!(el(&g, "s1").multiply(&el(&g, "s1")).unwrap().render(), "s1");
    }

    #[test]
    fn special_pair_rewrite_at_t1() {
        let g = fixture::example();
        assert_eq!(el(&g, "g' g'*").normal_form().render(), "t1 - g1 g1* - h h*");
        assert!(el(&g, "t1 - g'g'* - g1 g1* - h h*").normal_form().is_zero());
        let x = el(&g, "g1 g1*");
        assert_eq!(x.normal_form(), x);
    }

    #[test]
    fn ck2_vanishes_everywhere() {
        let g = fixture::example();
        for v in g.vertices() {
            if !g.is_regular(v) {
                continue;
            }
            let mut x = LpaElement::vertex(&g, &Field::RATIONAL, v);
            for &f in g.out_edges(v) {
                let p = Path::edge(&g, f);
                let ff = LpaElement::path(&g, &Field::RATIONAL, &p)
                    .multiply(&LpaElement::ghost(&g, &Field::RATIONAL, &p))
                    .unwrap();
                x = x.sub(&ff).unwrap();
            }
            assert!(x.normal_form().is_zero(), "{}", g.vertex_name(v));
        }
    }

    #[test]
    fn gauge_on_generators() {
        let g = fixture::example();
        let d = g.parse_cycle("d").unwrap();
        let two = Scalar::from_int(&Field::RATIONAL, 2);
        let half = two.inv().unwrap();
        let s = GaugeMap::new(d, two.clone()).unwrap();
        assert_eq!(s.apply(&el(&g, "d1")).unwrap(), el(&g, "d1").scale(&two).unwrap());
        assert_eq!(s.apply(&el(&g, "d1*")).unwrap(), el(&g, "d1*").scale(&half).unwrap());
        assert_eq!(s.apply(&el(&g, "d2")).unwrap(), el(&g, "d2"));
        let zero = Scalar::zero(&Field::RATIONAL);
        assert!(matches!(
            GaugeMap::new(g.parse_cycle("d").unwrap(), zero),
            Err(Error::NonInvertibleScale(_))
        ));
    }

    #[test]
    fn polynomial_evaluation() {
        let g = fixture::example();
        let d = g.parse_cycle("d").unwrap();
        let p = Polynomial::parse("1/2x^2-1", &Field::RATIONAL).unwrap();
        assert_eq!(
            eval_poly_at_cycle(&g, &p, &d).render(),
            "-s1 + 1/2 d1 d2 d3 d4 d1 d2 d3 d4"
        );
        let a = g.parse_cycle("a").unwrap();
        let lin = Polynomial::parse("x-1", &Field::RATIONAL).unwrap();
        assert_eq!(eval_poly_at_cycle(&g, &lin, &a).render(), "-w + a");
    }
}
