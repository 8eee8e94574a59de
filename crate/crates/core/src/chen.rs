//! Twisted simple modules `V^p_[e^∞]` and `V^{σ(e,a)}_[e^∞]`.
//!
//! A vector is a finite `K'`-combination of infinite paths `μe^∞`, each keyed
//! by its canonical finite representative `μ` (`r(μ) = s(e)`, `μ` not ending in
//! `e`; the vertex `s(e)` stands for `e^∞`). A monomial `αβ*` acts as in the
//! untwisted module, scaled by `t^(#α − #β)`, where `#` counts the first edge of
//! `e` and `t` is `xbar` (polynomial twist) or `a` (scalar twist).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{strip_cycle_power, Cycle, Graph, Path};
use crate::irreducible::BasicPolynomial;
use crate::lpa::{render_coeff, twist_exponent, LpaElement, Monomial};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Twist {
    Polynomial(BasicPolynomial),
    Scalar(Scalar),
}

#[derive(Clone, Debug)]
pub struct ModuleDescriptor {
    graph: Arc<Graph>,
    cycle: Cycle,
    twist: Twist,
    base: Field,
    coeffs: Field,
    t: Scalar,
    t_inv: Scalar,
}

impl PartialEq for ModuleDescriptor {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph)
            && self.cycle == other.cycle
            && self.twist == other.twist
    }
}

impl ModuleDescriptor {
    pub fn polynomial(graph: &Arc<Graph>, cycle: Cycle, p: BasicPolynomial) -> Result<Arc<ModuleDescriptor>> {
        graph.check_cycle(&cycle)?;
        let t = p.xbar();
        let t_inv = p.xbar_inverse();
        Ok(Arc::new(ModuleDescriptor {
            graph: graph.clone(),
            cycle,
            base: p.base_field().clone(),
            coeffs: p.extension().clone(),
            twist: Twist::Polynomial(p),
            t,
            t_inv,
        }))
    }

    /// `a = 1` gives the untwisted module.
    pub fn scalar(graph: &Arc<Graph>, cycle: Cycle, a: Scalar) -> Result<Arc<ModuleDescriptor>> {
        graph.check_cycle(&cycle)?;
        if a.field().is_extension() {
            return Err(Error::InvalidField("scalar twist must lie in the base field".into()));
        }
        let t_inv = a.inv().map_err(|_| Error::NonInvertibleScale(a.to_string()))?;
        let base = a.field();
        Ok(Arc::new(ModuleDescriptor {
            graph: graph.clone(),
            cycle,
            coeffs: base.clone(),
            base,
            twist: Twist::Scalar(a.clone()),
            t: a,
            t_inv,
        }))
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn cycle(&self) -> &Cycle {
        &self.cycle
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    /// The field `K` the algebra acts over.
    pub fn base_field(&self) -> &Field {
        &self.base
    }

    /// The coefficient field `K'` of vectors.
    pub fn coeff_field(&self) -> &Field {
        &self.coeffs
    }

    /// `t^k` for the twist parameter `t`.
    pub fn twist_power(&self, k: i64) -> Scalar {
        if k >= 0 {
            self.t.pow(k).expect("nonnegative power")
        } else {
            self.t_inv.pow(-k).expect("nonnegative power")
        }
    }

    /// `[K' : K]`.
    pub fn degree(&self) -> usize {
        self.coeffs.degree()
    }
}

#[derive(Clone, Debug)]
pub struct ChenVector {
    desc: Arc<ModuleDescriptor>,
    terms: BTreeMap<Path, Scalar>,
}

impl PartialEq for ChenVector {
    fn eq(&self, other: &Self) -> bool {
        *self.desc == *other.desc && self.terms == other.terms
    }
}

impl ChenVector {
    pub fn zero(desc: &Arc<ModuleDescriptor>) -> ChenVector {
        ChenVector {
            desc: desc.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `κ·μe^∞`, with trailing powers of `e` stripped from `μ`.
    pub fn canonical(desc: &Arc<ModuleDescriptor>, mu: &Path, kappa: &Scalar) -> Result<ChenVector> {
        let (mu, _) = strip_cycle_power(&desc.graph, mu, &desc.cycle)?;
        let mut v = ChenVector::zero(desc);
        v.add_term(mu, kappa.coerce(&desc.coeffs)?);
        Ok(v)
    }

    /// The generator `e^∞`.
    pub fn generator(desc: &Arc<ModuleDescriptor>) -> ChenVector {
        ChenVector::canonical(desc, &Path::vertex(desc.cycle.base()), &Scalar::one(&desc.coeffs)).expect("base vertex")
    }

    pub fn descriptor(&self) -> &Arc<ModuleDescriptor> {
        &self.desc
    }

    pub fn terms(&self) -> &BTreeMap<Path, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mu: &Path) -> Scalar {
        self.terms.get(mu).cloned().unwrap_or_else(|| Scalar::zero(&self.desc.coeffs))
    }

    fn add_term(&mut self, mu: Path, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mu) {
            Some(cur) => {
                *cur = &*cur + &c;
                if cur.is_zero() {
                    self.terms.remove(&mu);
                }
            }
            None => {
                self.terms.insert(mu, c);
            }
        }
    }

    fn check(&self, other: &ChenVector) -> Result<()> {
        if *self.desc != *other.desc {
            return Err(Error::DescriptorMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &ChenVector) -> Result<ChenVector> {
        self.check(other)?;
        let mut out = self.clone();
        for (mu, c) in &other.terms {
            out.add_term(mu.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ChenVector) -> Result<ChenVector> {
        self.add(&other.scale(&-Scalar::one(&self.desc.coeffs))?)
    }

    /// Multiplication by a scalar of `K'`.
    pub fn scale(&self, c: &Scalar) -> Result<ChenVector> {
        let c = c.coerce(&self.desc.coeffs)?;
        let mut out = ChenVector::zero(&self.desc);
        for (mu, k) in &self.terms {
            out.add_term(mu.clone(), &c * k);
        }
        Ok(out)
    }

    pub fn equals(&self, other: &ChenVector) -> Result<bool> {
        self.check(other)?;
        Ok(self.terms == other.terms)
    }

    /// Renders as `κ1 * [μ1] + κ2 * [μ2]`.
    pub fn render(&self) -> String {
        let g = &self.desc.graph;
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (mu, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if !abs.is_one() {
                out.push_str(&render_coeff(&abs));
                out.push_str(" * ");
            }
            out.push_str(&format!("[{}]", g.render_path(mu)));
        }
        out
    }
}

impl fmt::Display for ChenVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// The untwisted action of `αβ*` on `μe^∞`: the canonical key of the result, if nonzero.
pub fn act_monomial_path(g: &Graph, e: &Cycle, m: &Monomial, mu: &Path) -> Option<Path> {
    let beta = m.ghost();
    if beta.source() != mu.source() {
        return None;
    }
    let word = |i: usize| -> crate::graph::EdgeId {
        if i < mu.len() {
            mu.edges()[i]
        } else {
            e.edges()[(i - mu.len()) % e.len()]
        }
    };
    if !beta.edges().iter().enumerate().all(|(i, &b)| word(i) == b) {
        return None;
    }
    let rest = if beta.len() <= mu.len() {
        if beta.len() == mu.len() {
            Path::vertex(e.base())
        } else {
            mu.slice(g, beta.len(), mu.len())
        }
    } else {
        let k = (beta.len() - mu.len()) % e.len();
        if k == 0 {
            Path::vertex(e.base())
        } else {
            e.path().slice(g, k, e.len())
        }
    };
    debug_assert_eq!(rest.source(), m.real().range());
    let full = m.real().concat_unchecked(&rest);
    Some(strip_cycle_power(g, &full, e).expect("ends at the base").0)
}

/// Action of an element with coefficients in `K` or `K'`; test entry point.
pub fn act_raw(x: &LpaElement, w: &ChenVector) -> Result<ChenVector> {
    let desc = &w.desc;
    if !(Arc::ptr_eq(x.graph(), &desc.graph) || **x.graph() == *desc.graph) {
        return Err(Error::GraphMismatch);
    }
    let e = &desc.cycle;
    let e1 = e.first_edge();
    let mut out = ChenVector::zero(desc);
    for (m, k) in x.terms() {
        let k = k.coerce(&desc.coeffs)?;
        let scale = &k * &desc.twist_power(twist_exponent(m, e1));
        for (mu, c) in &w.terms {
            if let Some(key) = act_monomial_path(&desc.graph, e, m, mu) {
                out.add_term(key, &scale * c);
            }
        }
    }
    Ok(out)
}

/// Action of an element of `L_K(E)` on the `K`-module `V`.
pub fn act(x: &LpaElement, w: &ChenVector) -> Result<ChenVector> {
    if *x.field() != w.desc.base {
        return Err(Error::FieldMismatch(x.field().to_string(), w.desc.base.to_string()));
    }
    act_raw(x, w)
}

/// Canonical representatives of length at most `max_len` (paths into `s(e)` not ending in `e`).
pub fn representatives(g: &Graph, e: &Cycle, max_len: usize) -> Vec<Path> {
    let mut out = Vec::new();
    // grow backwards from s(e)
    let mut frontier = vec![Path::vertex(e.base())];
    for _ in 0..=max_len {
        let mut next = Vec::new();
        for p in frontier {
            if !e.path().is_suffix_of(&p) {
                out.push(p.clone());
            }
            for &f in g.in_edges(p.source()) {
                let q = Path::edge(g, f).concat_unchecked(&p);
                next.push(q);
            }
        }
        frontier = next;
    }
    out.sort_by(|a, b| (a.len(), a.edges(), a.source()).cmp(&(b.len(), b.edges(), b.source())));
    out
}

/// Parses `κ1 * [μ1] + κ2 * [μ2] ...`; coefficients are polynomials in `xbar`
/// and must be parenthesized when they contain `+` or `-`.
pub fn parse_vector(text: &str, desc: &Arc<ModuleDescriptor>) -> Result<ChenVector> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = ChenVector::zero(desc);
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    let mut first = true;
    skip_ws(&mut i);
    if chars.iter().collect::<String>().trim() == "0" {
        return Ok(out);
    }
    while i < chars.len() {
        let mut negative = false;
        if !first {
            match chars[i] {
                '+' => {}
                '-' => negative = true,
                _ => return Err(Error::syntax(1, i + 1, "expected `+` or `-`")),
            }
            i += 1;
            skip_ws(&mut i);
        } else if chars[i] == '-' {
            negative = true;
            i += 1;
            skip_ws(&mut i);
        }
        first = false;
        // coefficient: everything before `[`, minus a trailing `*`
        let start = i;
        let mut depth = 0i32;
        while i < chars.len() && !(chars[i] == '[' && depth == 0) {
            match chars[i] {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 && i > start => {
                    return Err(Error::syntax(1, i + 1, "parenthesize coefficients that are sums"))
                }
                _ => {}
            }
            i += 1;
        }
        if i >= chars.len() {
            return Err(Error::syntax(1, i + 1, "expected `[`"));
        }
        let coeff_text: String = chars[start..i].iter().collect();
        let coeff_text = coeff_text.trim();
        let coeff = if coeff_text.is_empty() {
            Scalar::one(&desc.coeffs)
        } else {
            let body = coeff_text
                .strip_suffix('*')
                .ok_or_else(|| Error::syntax(1, start + 1, "expected `*` before `[`"))?
                .trim();
            let body = body
                .strip_prefix('(')
                .and_then(|b| b.strip_suffix(')'))
                .unwrap_or(body);
            crate::poly::parse_ext_scalar(body, &desc.coeffs)?
        };
        let close = chars[i..]
            .iter()
            .position(|&c| c == ']')
            .map(|p| p + i)
            .ok_or_else(|| Error::syntax(1, i + 1, "unclosed `[`"))?;
        let inner: String = chars[i + 1..close].iter().collect();
        let mu = desc.graph.parse_path(inner.trim())?;
        let coeff = if negative { -&coeff } else { coeff };
        out = out.add(&ChenVector::canonical(desc, &mu, &coeff)?)?;
        i = close + 1;
        skip_ws(&mut i);
    }
    Ok(out)
}

/// Reproduces the generation procedure of simplicity: from the nonzero `w`,
/// isolates one basis path, normalizes to `e^∞`, then reaches every
/// representative of length at most `max_len`. Returns the elements that did
/// not come out exactly as `1·[ν]`.
pub fn simplicity_probe(w: &ChenVector, max_len: usize) -> Result<Vec<Path>> {
    let desc = &w.desc;
    let g = &desc.graph;
    let e = &desc.cycle;
    let base = &desc.base;
    let (mu1, _) = w.terms.iter().next().ok_or(Error::DivisionByZero)?;
    // long enough that (μ1 e^N)* separates μ1 e^∞ from every other key
    let longest = w.terms.keys().map(Path::len).max().unwrap_or(0);
    let n = longest / e.len() + 2;
    let sep = mu1.concat_unchecked(&e.power(n));
    let isolated = act(&LpaElement::ghost(g, base, &sep), w)?;
    if isolated.terms.len() != 1 || !isolated.terms.contains_key(&Path::vertex(e.base())) {
        return Ok(vec![Path::vertex(e.base())]);
    }
    // κ e^∞ -> e^∞ through a combination of powers of e
    let kappa = isolated.coeff(&Path::vertex(e.base()));
    let target = kappa.inv()?;
    let normalizer = element_for_scalar(desc, &target)?;
    let unit = act(&normalizer, &isolated)?;
    if unit != ChenVector::generator(desc) {
        return Ok(vec![Path::vertex(e.base())]);
    }
    let mut failures = Vec::new();
    for nu in representatives(g, e, max_len) {
        let k = nu.count_edge(e.first_edge());
        let x = LpaElement::path(g, base, &nu).multiply(&LpaElement::ghost(g, base, &e.power(k)))?;
        let got = act(&x, &unit)?;
        let want = ChenVector::canonical(desc, &nu, &Scalar::one(&desc.coeffs))?;
        if got != want {
            failures.push(nu);
        }
    }
    Ok(failures)
}

/// An element of `K[e] ⊂ L_K(E)` acting on `e^∞` as multiplication by `kappa`.
///
/// `e^j ⋆ e^∞ = t^j e^∞`, so `Σ c_j e^j` realizes `Σ c_j t^j`; for the
/// polynomial twist `t = xbar` and the `c_j` are the coordinates of `kappa`.
pub fn element_for_scalar(desc: &Arc<ModuleDescriptor>, kappa: &Scalar) -> Result<LpaElement> {
    let g = &desc.graph;
    let e = &desc.cycle;
    let base = &desc.base;
    match &desc.twist {
        Twist::Polynomial(_) => {
            let mut x = LpaElement::zero(g, base);
            for (j, c) in kappa.coerce(&desc.coeffs)?.base_coords().into_iter().enumerate() {
                x = x.add(&LpaElement::path(g, base, &e.power(j)).scale(&c)?)?;
            }
            Ok(x)
        }
        Twist::Scalar(_) => LpaElement::vertex(g, base, e.base()).scale(kappa),
    }
}

/// A random monomial-product element of small length, for property tests.
pub fn random_path_element<R: Rng>(rng: &mut R, g: &Arc<Graph>, field: &Field, max_len: usize) -> LpaElement {
    let v = crate::graph::VertexId(rng.gen_range(0..g.vertex_count()));
    let mut p = Path::vertex(v);
    let len = rng.gen_range(0..=max_len);
    for _ in 0..len {
        let outs = g.out_edges(p.range());
        if outs.is_empty() {
            break;
        }
        let f = outs[rng.gen_range(0..outs.len())];
        p = p.concat_unchecked(&Path::edge(g, f));
    }
    LpaElement::path(g, field, &p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_element;
    use crate::fixture;
    use crate::poly::Polynomial;

    fn module(g: &Arc<Graph>, cycle: &str, p: &str) -> Arc<ModuleDescriptor> {
        let c = g.parse_cycle(cycle).unwrap();
        let p = BasicPolynomial::new(Polynomial::parse(p, &Field::RATIONAL).unwrap()).unwrap();
        ModuleDescriptor::polynomial(g, c, p).unwrap()
    }

    #[test]
    fn cycle_acts_by_xbar() {
        let g = fixture::example();
        let m = module(&g, "d", fixture::EXAMPLE_P);
        let w = parse_vector("[s1]", &m).unwrap();
        let x = parse_element("d1 d2 d3 d4", &g, &Field::RATIONAL).unwrap();
        assert_eq!(act(&x, &w).unwrap().render(), "xbar * [s1]");
        let s1 = parse_element("s1", &g, &Field::RATIONAL).unwrap();
        assert_eq!(act(&s1, &w).unwrap().render(), "[s1]");
        let pd = parse_element("1/2 d1 d2 d3 d4 d1 d2 d3 d4 - s1", &g, &Field::RATIONAL).unwrap();
        assert_eq!(act(&pd, &w).unwrap().render(), "0");
    }

    #[test]
    fn canonical_strips_cycle_powers() {
        let g = fixture::example();
        let m = module(&g, "d", fixture::EXAMPLE_P);
        let d = g.parse_path("d1 d2 d3 d4").unwrap();
        let one = Scalar::one(&Field::RATIONAL);
        assert_eq!(ChenVector::canonical(&m, &d, &one).unwrap().render(), "[s1]");
        let ml = module(&g, "l", fixture::EXAMPLE_Q);
        let mu = g.parse_path("d1 d2 m n").unwrap();
        assert_eq!(ChenVector::canonical(&ml, &mu, &one).unwrap().render(), "[d1 d2 m n]");
        let zero = Scalar::zero(&Field::RATIONAL);
        assert!(ChenVector::canonical(&ml, &mu, &zero).unwrap().is_zero());
        assert!(matches!(
            ChenVector::canonical(&ml, &d, &one),
            Err(Error::RangeMismatch { .. })
        ));
    }

    #[test]
    fn ghost_of_key_uses_inverse_twist() {
        let g = fixture::example();
        let m = module(&g, "l", fixture::EXAMPLE_Q);
        let w = parse_vector("[d1 d2 m n l]", &m).unwrap();
        assert_eq!(w.render(), "[d1 d2 m n]");
        // μ = d1 d2 m n l l has one more copy of l than the key; (μ)* w = xbar^{-2} e^∞
        let x = parse_element("(d1 d2 m n l l)*", &g, &Field::RATIONAL).unwrap();
        let got = act(&x, &w).unwrap();
        let want = ChenVector::generator(&m).scale(&m.twist_power(-2)).unwrap();
        assert_eq!(got, want);
        assert_eq!(got.render(), "(-3xbar^2+xbar+9) * [z]");
    }

    #[test]
    fn vertices_and_edges() {
        let g = fixture::example();
        let m = module(&g, "l", fixture::EXAMPLE_Q);
        let w = parse_vector("[m n]", &m).unwrap();
        let act_s = |s: &str| act(&parse_element(s, &g, &Field::RATIONAL).unwrap(), &w).unwrap().render();
        assert_eq!(act_s("d2"), "[d2 m n]");
        assert_eq!(act_s("d1"), "0");
        assert_eq!(act_s("s3"), "[m n]");
        assert_eq!(act_s("s2"), "0");
        assert_eq!(act_s("m*"), "[n]");
        assert_eq!(act_s("l"), "0");
    }

    #[test]
    fn vector_literals_round_trip() {
        let g = fixture::example();
        let m = module(&g, "d", fixture::EXAMPLE_P);
        for text in ["0", "[s1]", "xbar * [s1] - [d4]", "(xbar+1) * [d3 d4] + 1/2 * [p d4]"] {
            let v = parse_vector(text, &m).unwrap();
            assert_eq!(parse_vector(&v.render(), &m).unwrap(), v, "{text}");
        }
        assert!(parse_vector("xbar + 1 * [s1]", &m).is_err());
        assert!(parse_vector("[s1", &m).is_err());
    }

    #[test]
    fn xbar_scaling_is_invertible() {
        let g = fixture::example();
        let m = module(&g, "d", fixture::EXAMPLE_P);
        let w = parse_vector("[d4] - 3 * [p d4]", &m).unwrap();
        let back = w.scale(&m.twist_power(1)).unwrap().scale(&m.twist_power(-1)).unwrap();
        assert_eq!(back, w);
        assert!(w.add(&w.scale(&-Scalar::one(m.coeff_field())).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn descriptor_mismatch() {
        let g = fixture::example();
        let a = module(&g, "d", fixture::EXAMPLE_P);
        let b = module(&g, "d", fixture::EXAMPLE_Q);
        let wa = ChenVector::generator(&a);
        let wb = ChenVector::generator(&b);
        assert_eq!(wa.add(&wb), Err(Error::DescriptorMismatch));
    }

    #[test]
    fn simplicity_probe_reaches_short_representatives() {
        let g = fixture::example();
        let m = module(&g, "d", fixture::EXAMPLE_P);
        let w = parse_vector("xbar * [d4] + [d2 d3 d4] - 2 * [p d4]", &m).unwrap();
        assert!(simplicity_probe(&w, 6).unwrap().is_empty());
    }
}
