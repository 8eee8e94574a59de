//! Truncated verification of the length-one projective resolutions of the
//! twisted simples, and of `A'(e - xbar·v) ∩ A = A·q(e)`.

use std::sync::Arc;

use crate::chen::{act, ChenVector, ModuleDescriptor};
use crate::error::{Error, Result};
use crate::graph::{Cycle, Graph, Path, VertexId};
use crate::irreducible::BasicPolynomial;
use crate::linalg::{Echelon, Interner, SparseVec};
use crate::lpa::{eval_poly_at_cycle, LpaElement, Monomial};
use crate::report::{Check, Report};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug)]
pub enum ResolutionTwist {
    Scalar(Scalar),
    Polynomial(BasicPolynomial),
}

fn paths_from(g: &Graph, v: VertexId, max_len: usize) -> Vec<Path> {
    let mut out = vec![Path::vertex(v)];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for &f in g.out_edges(p.range()) {
                next.push(p.concat_unchecked(&Path::edge(g, f)));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn paths_into(g: &Graph, v: VertexId, max_len: usize) -> Vec<Path> {
    let mut out = vec![Path::vertex(v)];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for &f in g.in_edges(p.source()) {
                next.push(Path::edge(g, f).concat_unchecked(p));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Normal-form monomials `αβ*` with `s(β) = v`, `|α| ≤ real`, `|β| ≤ ghost`: a basis of a piece of `A·v`.
pub fn monomials_at(g: &Graph, v: VertexId, real: usize, ghost: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for beta in paths_from(g, v, ghost) {
        for alpha in paths_into(g, beta.range(), real) {
            let m = Monomial::new(g, alpha, beta.clone()).expect("ranges agree");
            if m.is_normal(g) {
                out.push(m);
            }
        }
    }
    out.sort();
    out
}

/// Base-field coordinates of an element: one coordinate per (monomial, xbar power).
fn coords(keys: &mut Interner<(Monomial, usize)>, x: &LpaElement) -> SparseVec {
    let mut v = SparseVec::new();
    for (m, c) in x.terms() {
        for (j, k) in c.base_coords().into_iter().enumerate() {
            if !k.is_zero() {
                v.insert(keys.id(&(m.clone(), j)), k);
            }
        }
    }
    v
}

pub fn verify_resolution(g: &Arc<Graph>, e: &Cycle, twist: &ResolutionTwist, truncation: usize) -> Result<Report> {
    g.check_cycle(e)?;
    if truncation == 0 {
        return Err(Error::TruncationTooSmall(0));
    }
    let (desc, relator, label) = match twist {
        ResolutionTwist::Polynomial(p) => {
            let d = ModuleDescriptor::polynomial(g, e.clone(), p.clone())?;
            let r = eval_poly_at_cycle(g, p.poly(), e);
            (d, r, format!("p = {p}"))
        }
        ResolutionTwist::Scalar(a) => {
            let d = ModuleDescriptor::scalar(g, e.clone(), a.clone())?;
            let base = a.field();
            let a_inv = a.inv().map_err(|_| Error::NonInvertibleScale(a.to_string()))?;
            let r = LpaElement::path(g, &base, e.path())
                .scale(&a_inv)?
                .sub(&LpaElement::vertex(g, &base, e.base()))?;
            (d, r, format!("a = {a}"))
        }
    };
    let base = desc.base_field().clone();
    let generator = ChenVector::generator(&desc);
    let subject = format!("resolution of V[{}^inf], {label}", g.render_path(e.path()));

    // (1) the relator kills the generator
    let composite = act(&relator, &generator)?;
    let c1 = Check::new("composite-zero", composite.is_zero(), "exact")
        .with("relator", relator.render())
        .with("image", composite.render());

    // (2) right multiplication by the relator is injective on a truncation of A·s(e)
    let domain = monomials_at(g, e.base(), truncation, truncation);
    if domain.is_empty() {
        return Err(Error::TruncationTooSmall(truncation));
    }
    let mut keys = Interner::new();
    let mut ech = Echelon::new(&base);
    for m in &domain {
        let x = LpaElement::monomial(g, Scalar::one(&base), m.clone());
        let image = x.multiply(&relator)?.normal_form();
        ech.insert(coords(&mut keys, &image));
    }
    let c2 = Check::new(
        "injectivity",
        ech.rank() == domain.len(),
        format!("verified up to length {truncation}"),
    )
    .with("domain", domain.len())
    .with("rank", ech.rank());

    // (3) s(e) maps onto the generator
    let v = LpaElement::vertex(g, &base, e.base());
    let image = act(&v, &generator)?;
    let c3 = Check::new("surjectivity", image == generator && !image.is_zero(), "exact")
        .with("image", image.render());

    Ok(Report {
        subject,
        checks: vec![c1, c2, c3],
    })
}

/// Checks `A'(e - xbar·v) ∩ A = A·q(e)` with `v = s(e)` and `A' = L_{K'}(E)`, `K' = K[x]/<q>`.
///
/// The inclusion `⊇` is exact: `q(e) = r(e)(e - xbar·v)` with `q(x) = r(x)(x - xbar)`.
/// The inclusion `⊆` is checked on truncations: every element of
/// `U(L, L) ∩ A` lies in `span{m·q(e) : m ∈ M(L, L + k)}`, where `M(a, b)`
/// are the normal monomials `αβ*` at `v` with `|α| ≤ a`, `|β| ≤ b`, `U(a, b)`
/// is the `K'`-span of `M(a, b)·(e - xbar·v)`, and `k = (deg q - 1)·|e|`.
pub fn verify_contraction_lemma(g: &Arc<Graph>, e: &Cycle, q: &BasicPolynomial, truncation: usize) -> Result<Report> {
    g.check_cycle(e)?;
    let n = q.degree();
    if truncation < n {
        return Err(Error::TruncationTooSmall(truncation));
    }
    let base = q.base_field().clone();
    let ext = q.extension().clone();
    let xbar = q.xbar();
    let v = e.base();
    let subject = format!("contraction lemma at {}, q = {q}", g.render_path(e.path()));

    let vertex_ext = LpaElement::vertex(g, &ext, v);
    let e_ext = LpaElement::path(g, &ext, e.path());
    let factor = e_ext.sub(&vertex_ext.scale(&xbar)?)?;
    let qe = eval_poly_at_cycle(g, q.poly(), e);

    // exact: q(e) = r(e)(e - xbar v)
    let r = q.poly().embed(&ext)?.quotient_by_linear(&xbar)?;
    let re = eval_poly_at_cycle(g, &r, e);
    let lhs = re.multiply(&factor)?.normal_form();
    let rhs = qe.embed(&ext)?.normal_form();
    let c1 = Check::new("factorization", lhs == rhs, "exact")
        .with("r", r.render("x"))
        .with("q(e)", qe.render());

    let k = (n - 1) * e.len();
    let l = truncation;
    let generators = |real: usize, ghost: usize| -> Result<Vec<LpaElement>> {
        let mut out = Vec::new();
        for m in monomials_at(g, v, real, ghost) {
            let mono = LpaElement::monomial(g, Scalar::one(&ext), m);
            let base_gen = mono.multiply(&factor)?.normal_form();
            for i in 0..n {
                out.push(base_gen.scale(&xbar.pow(i as i64)?)?);
            }
        }
        Ok(out)
    };

    let mut keys: Interner<(Monomial, usize)> = Interner::new();

    // U(L, L) ∩ A: combinations whose xbar^{>=1} coordinates vanish
    let u_small = generators(l, l)?;
    let u_coords: Vec<SparseVec> = u_small.iter().map(|x| coords(&mut keys, x)).collect();
    let mut proj = Echelon::new(&base);
    for c in &u_coords {
        let upper: SparseVec = c
            .iter()
            .filter(|(idx, _)| keys.key(**idx).1 > 0)
            .map(|(i, s)| (*i, s.clone()))
            .collect();
        proj.insert(upper);
    }
    let mut intersection: Vec<SparseVec> = Vec::new();
    for combo in proj.kernel() {
        let mut acc = SparseVec::new();
        for (i, lambda) in combo {
            crate::linalg::axpy(&mut acc, lambda, &u_coords[*i]);
        }
        if !acc.is_empty() {
            intersection.push(acc);
        }
    }
    let mut inter_ech = Echelon::new(&base);
    for x in &intersection {
        inter_ech.insert(x.clone());
    }

    // span{m q(e) : m in M(L, L + k)}, in x̄^0 coordinates
    let mut w_ech = Echelon::new(&base);
    for m in monomials_at(g, v, l, l + k) {
        let x = LpaElement::monomial(g, Scalar::one(&base), m).multiply(&qe)?.normal_form();
        w_ech.insert(coords(&mut keys, &x.embed(&ext)?));
    }
    let contained = inter_ech.rows().all(|row| w_ech.contains(row));
    let c2 = Check::new("intersection-in-ideal", contained, format!("verified up to length {l}"))
        .with("dim_intersection", inter_ech.rank())
        .with("dim_ideal", w_ech.rank());

    Ok(Report {
        subject,
        checks: vec![c1, c2],
    })
}

/// Reads a twist flag value: a polynomial in `x` (basic irreducible) or a field element.
pub fn parse_twist(text: &str, field: &Field) -> Result<ResolutionTwist> {
    let p = crate::poly::Polynomial::parse(text, field)?;
    match p.degree() {
        None => Err(Error::NonInvertibleScale("0".into())),
        Some(0) => Ok(ResolutionTwist::Scalar(p.coeff(0))),
        Some(_) => Ok(ResolutionTwist::Polynomial(BasicPolynomial::from_user(&p)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    fn basic(s: &str) -> BasicPolynomial {
        BasicPolynomial::parse(s, &Field::RATIONAL).unwrap()
    }

    #[test]
    fn resolution_for_d_and_p() {
        let g = fixture::example();
        let d = g.parse_cycle("d").unwrap();
        let r = verify_resolution(&g, &d, &ResolutionTwist::Polynomial(basic(fixture::EXAMPLE_P)), 3).unwrap();
        assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn untwisted_resolution_on_loop() {
        let g = fixture::example();
        let a = g.parse_cycle("a").unwrap();
        let one = Scalar::one(&Field::RATIONAL);
        let r = verify_resolution(&g, &a, &ResolutionTwist::Scalar(one), 2).unwrap();
        assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn zero_truncation() {
        let g = fixture::example();
        let a = g.parse_cycle("a").unwrap();
        let one = Scalar::one(&Field::RATIONAL);
        assert_eq!(
            verify_resolution(&g, &a, &ResolutionTwist::Scalar(one), 0).unwrap_err(),
            Error::TruncationTooSmall(0)
        );
    }

    #[test]
    fn lemma_on_loop_with_exit() {
        let g = fixture::loop_with_exit();
        let e = g.parse_cycle("e").unwrap();
        let r = verify_contraction_lemma(&g, &e, &basic(fixture::EXAMPLE_Q), 4).unwrap();
        assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn lemma_truncation_bound() {
        let g = fixture::loop_with_exit();
        let e = g.parse_cycle("e").unwrap();
        assert_eq!(
            verify_contraction_lemma(&g, &e, &basic(fixture::EXAMPLE_Q), 2).unwrap_err(),
            Error::TruncationTooSmall(2)
        );
    }
}
