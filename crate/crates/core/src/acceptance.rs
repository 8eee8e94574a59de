//! The acceptance suite: eight criteria over the example graph, small random
//! graphs and exhaustive field checks. Random inputs come from fixed seeds.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chen::{act, act_raw, representatives, ChenVector, ModuleDescriptor};
use crate::connector::{connector_set, verify_witness, ConnectorResult};
use crate::error::Result;
use crate::ext::{ext_dim, ext_dim_oracle, Dim};
use crate::fixture;
use crate::graph::{Cycle, Graph, Path, VertexId};
use crate::irreducible::{is_irreducible, monic_polynomials, reducible_monic_by_products, BasicPolynomial};
use crate::lpa::{LpaElement, Monomial};
use crate::scalar::{Field, Scalar};
use crate::verify::{verify_contraction_lemma, verify_resolution, ResolutionTwist};

const SEED: u64 = 0x1ea7_7170;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("{status} criterion {}: {} ({})", self.id, self.name, self.detail)
    }
}

fn outcome(id: u8, name: &str, run: Result<(bool, String)>) -> CriterionResult {
    let (passed, detail) = match run {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id,
        name: name.into(),
        passed,
        detail,
    }
}

struct Example {
    graph: Arc<Graph>,
    p: BasicPolynomial,
    q: BasicPolynomial,
}

fn example() -> Result<Example> {
    Ok(Example {
        graph: fixture::example(),
        p: BasicPolynomial::parse(fixture::EXAMPLE_P, &Field::RATIONAL)?,
        q: BasicPolynomial::parse(fixture::EXAMPLE_Q, &Field::RATIONAL)?,
    })
}

pub fn example_values() -> CriterionResult {
    outcome(1, "example reproduction", (|| {
        let ex = example()?;
        let g = &ex.graph;
        let (p, q) = (&ex.p, &ex.q);
        let cases: [(&str, &BasicPolynomial, &str, &BasicPolynomial, Dim); 8] = [
            ("g", p, "d", q, Dim::Finite(0)),
            ("d", p, "l", q, Dim::Finite(6)),
            ("d", p, "d", q, Dim::Finite(0)),
            ("d", p, "a", q, Dim::Infinite),
            ("d", p, "g", q, Dim::Infinite),
            ("g", p, "a", q, Dim::Infinite),
            ("d", q, "d", q, Dim::Finite(3)),
            ("d", p, "d", p, Dim::Finite(2)),
        ];
        let start = Instant::now();
        let mut wrong = Vec::new();
        for (c, pp, e, qq, want) in cases {
            let got = ext_dim(g, &g.parse_cycle(c)?, pp, &g.parse_cycle(e)?, qq)?.value;
            if got != want {
                wrong.push(format!("({c},{pp})->({e},{qq}) = {got}, expected {want}"));
            }
        }
        let elapsed = start.elapsed();
        let fast = elapsed < Duration::from_secs(1);
        let detail = if wrong.is_empty() {
            format!("8 values in {} ms", elapsed.as_millis())
        } else {
            wrong.join("; ")
        };
        Ok((wrong.is_empty() && fast, detail))
    })())
}

pub fn connector_witness() -> CriterionResult {
    outcome(2, "connector witness", (|| {
        let g = fixture::example();
        let (d, l, a) = (g.parse_cycle("d")?, g.parse_cycle("l")?, g.parse_cycle("a")?);
        let expected = g.parse_path("d1 d2 m n")?;
        let finite_ok = matches!(connector_set(&g, &d, &l)?, ConnectorResult::Finite(ref v) if v == &vec![expected]);
        let (infinite_ok, pump) = match connector_set(&g, &d, &a)? {
            ConnectorResult::Infinite(w) => (verify_witness(&d, &a, &w, 4), g.render_path(&w.pump)),
            ConnectorResult::Finite(_) => (false, "none".into()),
        };
        Ok((
            finite_ok && infinite_ok,
            format!("d->l single connector: {finite_ok}; d->a pump `{pump}` verified: {infinite_ok}"),
        ))
    })())
}

/// A random graph on 2 to 6 vertices: each vertex gets 0 to 3 out-edges, a
/// quarter of them loops, so that exclusive cycles are common.
pub fn random_graph<R: Rng>(rng: &mut R) -> Result<Graph> {
    let n = rng.gen_range(2..=6);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for (i, src) in names.iter().enumerate() {
        for j in 0..rng.gen_range(0..=3) {
            let dst = if rng.gen_bool(0.25) { i } else { rng.gen_range(0..n) };
            edges.push((format!("e{i}_{j}"), src.clone(), names[dst].clone()));
        }
    }
    Graph::build(&names, edges)
}

fn exclusive_cycles(g: &Graph) -> Result<Vec<Cycle>> {
    let mut out = Vec::new();
    for c in g.find_cycles() {
        if g.is_exclusive(&c)? {
            out.push(c);
        }
    }
    Ok(out)
}

/// Compares `ext_dim` with the oracle on every ordered pair of exclusive cycles.
fn oracle_pairs(g: &Arc<Graph>, polys: &[&BasicPolynomial], disagreements: &mut Vec<String>) -> Result<Vec<Dim>> {
    let cycles = exclusive_cycles(g)?;
    let mut seen = Vec::new();
    for c in &cycles {
        for e in &cycles {
            for p in polys {
                for q in polys {
                    let value = ext_dim(g, c, p, e, q)?.value;
                    let bound = p.degree() + 2;
                    let oracle = ext_dim_oracle(g, c, p, e, q, bound)?;
                    seen.push(value);
                    if !oracle.agrees_with(value) {
                        disagreements.push(format!(
                            "({},{p})->({},{q}): {value} vs oracle {oracle}",
                            g.render_path(c.path()),
                            g.render_path(e.path())
                        ));
                    }
                }
            }
        }
    }
    Ok(seen)
}

pub fn oracle_agreement() -> CriterionResult {
    outcome(3, "oracle agreement", (|| {
        let ex = example()?;
        let polys = [&ex.p, &ex.q];
        let mut bad = Vec::new();
        let fixture_cells = oracle_pairs(&ex.graph, &polys, &mut bad)?.len();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        // sample until the random cells include infinite values and several connectors
        let (mut graphs, mut cells, mut infinite, mut multi) = (0, 0, 0, 0);
        while (graphs < 20 || infinite < 3 || multi < 3) && graphs < 400 {
            let g = Arc::new(random_graph(&mut rng)?);
            if exclusive_cycles(&g)?.is_empty() {
                continue;
            }
            graphs += 1;
            for dim in oracle_pairs(&g, &polys, &mut bad)? {
                cells += 1;
                match dim {
                    Dim::Infinite => infinite += 1,
                    Dim::Finite(n) if n > 6 => multi += 1,
                    Dim::Finite(_) => {}
                }
            }
        }
        let ok = bad.is_empty() && graphs >= 20;
        let detail = if bad.is_empty() {
            format!("{fixture_cells} fixture cells, {cells} cells on {graphs} random graphs ({infinite} infinite), 0 disagreements")
        } else {
            format!("{} disagreements: {}", bad.len(), bad.join("; "))
        };
        Ok((ok, detail))
    })())
}

fn random_walk<R: Rng>(rng: &mut R, g: &Graph, from: VertexId, max_len: usize, forward: bool) -> Path {
    let mut p = Path::vertex(from);
    for _ in 0..rng.gen_range(0..=max_len) {
        let choices = if forward {
            g.out_edges(p.range())
        } else {
            g.in_edges(p.source())
        };
        let Some(&f) = choices.choose(rng) else { break };
        let step = Path::edge(g, f);
        p = if forward {
            p.concat_unchecked(&step)
        } else {
            step.concat_unchecked(&p)
        };
    }
    p
}

/// A random monomial `αβ*` with `|α|, |β| ≤ max_len`.
pub fn random_monomial<R: Rng>(rng: &mut R, g: &Graph, max_len: usize) -> Monomial {
    let v = VertexId(rng.gen_range(0..g.vertex_count()));
    let beta = random_walk(rng, g, v, max_len, true);
    let alpha = random_walk(rng, g, beta.range(), max_len, false);
    Monomial::new(g, alpha, beta).expect("ranges agree")
}

/// A sum of one to three random monomials with small integer coefficients.
pub fn random_element<R: Rng>(rng: &mut R, g: &Arc<Graph>, field: &Field, max_len: usize) -> LpaElement {
    let mut x = LpaElement::zero(g, field);
    for _ in 0..rng.gen_range(1..=3) {
        let c = Scalar::from_int(field, rng.gen_range(-3..=3));
        let m = LpaElement::monomial(g, c, random_monomial(rng, g, max_len));
        x = x.add(&m).expect("same field");
    }
    x
}

fn random_vector<R: Rng>(rng: &mut R, desc: &Arc<ModuleDescriptor>, reps: &[Path]) -> Result<ChenVector> {
    let coeffs = desc.coeff_field().clone();
    let t = desc.twist_power(1);
    let mut w = ChenVector::zero(desc);
    for _ in 0..rng.gen_range(1..=3) {
        let mut kappa = Scalar::zero(&coeffs);
        for j in 0..desc.degree() {
            let c = Scalar::from_int(&coeffs, rng.gen_range(-2..=2));
            kappa = kappa.try_add(&c.try_mul(&t.pow(j as i64)?)?)?;
        }
        let mu = reps.choose(rng).expect("s(e) is a representative");
        w = w.add(&ChenVector::canonical(desc, mu, &kappa)?)?;
    }
    Ok(w)
}

fn modules() -> Result<Vec<Arc<ModuleDescriptor>>> {
    let ex = example()?;
    let g = &ex.graph;
    let lw = fixture::loop_with_exit();
    let one = Scalar::one(&Field::RATIONAL);
    let two = Scalar::from_int(&Field::RATIONAL, 2);
    Ok(vec![
        ModuleDescriptor::polynomial(g, g.parse_cycle("d")?, ex.p.clone())?,
        ModuleDescriptor::polynomial(g, g.parse_cycle("l")?, ex.q.clone())?,
        ModuleDescriptor::polynomial(g, g.parse_cycle("g")?, ex.q.clone())?,
        ModuleDescriptor::scalar(g, g.parse_cycle("a")?, two)?,
        ModuleDescriptor::polynomial(&lw, lw.parse_cycle("e")?, ex.q.clone())?,
        ModuleDescriptor::scalar(&lw, lw.parse_cycle("e")?, one)?,
    ])
}

/// Checks one CK1 or CK2 relation on `w` through successive generator actions.
fn relation_kills<R: Rng>(rng: &mut R, g: &Arc<Graph>, w: &ChenVector) -> Result<bool> {
    let field = Field::RATIONAL;
    let edges: Vec<_> = g.edges().collect();
    let path = |f| LpaElement::path(g, &field, &Path::edge(g, f));
    let ghost = |f| LpaElement::ghost(g, &field, &Path::edge(g, f));
    if rng.gen_bool(0.5) {
        // CK1: e*(f w) = δ_{e,f} r(e) w
        let e = *edges.choose(rng).expect("edges");
        let f = if rng.gen_bool(0.5) { e } else { *edges.choose(rng).expect("edges") };
        let lhs = act(&ghost(e), &act(&path(f), w)?)?;
        let rhs = if e == f {
            act(&LpaElement::vertex(g, &field, g.range(e)), w)?
        } else {
            ChenVector::zero(w.descriptor())
        };
        lhs.equals(&rhs)
    } else {
        // CK2: v w = Σ_{s(e)=v} e(e* w)
        let regular: Vec<_> = g.vertices().filter(|&v| g.is_regular(v)).collect();
        let v = *regular.choose(rng).expect("regular vertex");
        let lhs = act(&LpaElement::vertex(g, &field, v), w)?;
        let mut rhs = ChenVector::zero(w.descriptor());
        for &e in g.out_edges(v) {
            rhs = rhs.add(&act(&path(e), &act(&ghost(e), w)?)?)?;
        }
        lhs.equals(&rhs)
    }
}

pub fn relation_annihilation() -> CriterionResult {
    outcome(4, "relation annihilation", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
        let mut failures = Vec::new();
        let (mut relations, mut triples) = (0, 0);
        let mods = modules()?;
        for desc in &mods {
            let g = desc.graph().clone();
            let reps = representatives(&g, desc.cycle(), 4);
            for _ in 0..120 {
                let w = random_vector(&mut rng, desc, &reps)?;
                relations += 1;
                if !relation_kills(&mut rng, &g, &w)? {
                    failures.push(format!("relation on {}", w.render()));
                }
            }
            for _ in 0..100 {
                let x = random_element(&mut rng, &g, &Field::RATIONAL, 3);
                let y = random_element(&mut rng, &g, &Field::RATIONAL, 3);
                let w = random_vector(&mut rng, desc, &reps)?;
                triples += 1;
                let lhs = act_raw(&x.multiply(&y)?, &w)?;
                let rhs = act_raw(&x, &act_raw(&y, &w)?)?;
                if !lhs.equals(&rhs)? {
                    failures.push(format!("axiom for x={} y={} w={}", x.render(), y.render(), w.render()));
                }
            }
        }
        let detail = if failures.is_empty() {
            format!("{relations} relation pairs over {} modules, {triples} axiom triples, 0 failures", mods.len())
        } else {
            format!("{} failures; first: {}", failures.len(), failures[0])
        };
        Ok((failures.is_empty(), detail))
    })())
}

pub fn rewriting_soundness() -> CriterionResult {
    outcome(5, "rewriting soundness", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
        let graphs = [fixture::example(), fixture::loop_with_exit()];
        let field = Field::RATIONAL;
        let mut failures = Vec::new();
        let (mut singles, mut triples) = (0, 0);
        for i in 0..600 {
            let g = &graphs[i % 2];
            let x = random_element(&mut rng, g, &field, 3).add(&random_element(&mut rng, g, &field, 3))?;
            let nf = x.normal_form();
            let seed: u64 = rng.gen();
            let mut pick_rng = ChaCha8Rng::seed_from_u64(seed);
            let other = x.normal_form_with_strategy(&mut |n| pick_rng.gen_range(0..n));
            singles += 1;
            if nf.normal_form() != nf || other != nf || !nf.is_normal() {
                failures.push(format!("normal form of {}", x.render()));
            }
        }
        for i in 0..600 {
            let g = &graphs[i % 2];
            let x = random_element(&mut rng, g, &field, 2);
            let y = random_element(&mut rng, g, &field, 2);
            let z = random_element(&mut rng, g, &field, 2);
            triples += 1;
            let left = x.multiply(&y)?.normal_form().multiply(&z)?.normal_form();
            let right = x.multiply(&y.multiply(&z)?.normal_form())?.normal_form();
            if left != right {
                failures.push(format!("associativity for {} | {} | {}", x.render(), y.render(), z.render()));
            }
        }
        let detail = if failures.is_empty() {
            format!("{singles} elements, {triples} triples, 0 failures")
        } else {
            format!("{} failures; first: {}", failures.len(), failures[0])
        };
        Ok((failures.is_empty(), detail))
    })())
}

pub fn resolutions() -> CriterionResult {
    outcome(6, "resolution checks", (|| {
        let ex = example()?;
        let g = &ex.graph;
        let cases = [
            ("d", ResolutionTwist::Polynomial(ex.p.clone())),
            ("l", ResolutionTwist::Polynomial(ex.q.clone())),
            ("a", ResolutionTwist::Polynomial(ex.q.clone())),
            ("a", ResolutionTwist::Scalar(Scalar::one(&Field::RATIONAL))),
        ];
        let mut failed = Vec::new();
        for (c, twist) in &cases {
            let report = verify_resolution(g, &g.parse_cycle(c)?, twist, 3)?;
            if !report.passed() || report.checks.len() != 3 {
                failed.push(report.subject.clone());
            }
        }
        let detail = if failed.is_empty() {
            "4 resolutions, 3 checks each, truncation 3".to_string()
        } else {
            format!("failed: {}", failed.join("; "))
        };
        Ok((failed.is_empty(), detail))
    })())
}

pub fn contraction_lemma() -> CriterionResult {
    outcome(7, "contraction lemma", (|| {
        let ex = example()?;
        let lw = fixture::loop_with_exit();
        let runs = [
            (lw.clone(), "e", &ex.q),
            (lw.clone(), "e", &ex.p),
            (ex.graph.clone(), "l", &ex.q),
        ];
        let mut failed = Vec::new();
        for (g, c, q) in runs {
            let report = verify_contraction_lemma(&g, &g.parse_cycle(c)?, q, 4)?;
            if !report.passed() {
                failed.push(report.subject.clone());
            }
        }
        let detail = if failed.is_empty() {
            "3 runs at truncation 4".to_string()
        } else {
            format!("failed: {}", failed.join("; "))
        };
        Ok((failed.is_empty(), detail))
    })())
}

pub fn field_layer() -> CriterionResult {
    outcome(8, "field layer", (|| {
        let ex = example()?;
        let mut ok = true;
        for p in [&ex.p, &ex.q] {
            let xbar = p.xbar();
            let at = p.poly().embed(p.extension())?.eval(&xbar)?;
            let unit = xbar.try_mul(&p.xbar_inverse())?;
            ok &= at.is_zero() && unit.is_one();
        }
        let mut checked = 0;
        for ell in [2u64, 3] {
            for n in 1..=4 {
                let reducible = reducible_monic_by_products(ell, n);
                for f in monic_polynomials(ell, n) {
                    checked += 1;
                    ok &= is_irreducible(&f)? == !reducible.contains(&f.to_string());
                }
            }
        }
        Ok((ok, format!("roots and inverses for p, q; {checked} polynomials over F2, F3")))
    })())
}

pub fn run_all() -> Vec<CriterionResult> {
    vec![
        example_values(),
        connector_witness(),
        oracle_agreement(),
        relation_annihilation(),
        rewriting_soundness(),
        resolutions(),
        contraction_lemma(),
        field_layer(),
    ]
}
