//! Dimensions of `Ext¹(V^p_[c^∞], V^q_[e^∞])`.
//!
//! [`ext_dim`] applies the case formula. [`ext_dim_oracle`] recomputes the
//! value as the cokernel of `p(c)⋆−` on a truncation of `s(c)V^q_[e^∞]`,
//! built from brute-force path enumeration and the module action.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chen::{act, ChenVector, ModuleDescriptor};
use crate::connector::{connector_set, is_connector, ConnectorResult};
use crate::error::{Error, Result};
use crate::graph::{Cycle, Graph, Path};
use crate::irreducible::BasicPolynomial;
use crate::linalg::{Echelon, Interner, SparseVec};
use crate::lpa::eval_poly_at_cycle;
use crate::scalar::Scalar;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dim {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Finite(n) => write!(f, "{n}"),
            Dim::Infinite => f.write_str("infinity"),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    NoPath,
    DistinctExclusive,
    SameCycleDistinctPoly,
    SameCycleSamePoly,
    NonExclusive,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::NoPath => "no-path",
            CaseTag::DistinctExclusive => "distinct-exclusive",
            CaseTag::SameCycleDistinctPoly => "same-cycle-distinct-poly",
            CaseTag::SameCycleSamePoly => "same-cycle-same-poly",
            CaseTag::NonExclusive => "non-exclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtDimension {
    pub value: Dim,
    pub case: CaseTag,
    /// Connectors from the source cycle to the target cycle, when computed.
    pub connectors: Option<ConnectorResult>,
    pub warnings: Vec<String>,
}

fn degree(p: &BasicPolynomial) -> u64 {
    p.degree() as u64
}

pub fn ext_dim(g: &Graph, c: &Cycle, p: &BasicPolynomial, e: &Cycle, q: &BasicPolynomial) -> Result<ExtDimension> {
    g.check_cycle(c)?;
    g.check_cycle(e)?;
    if p.base_field() != q.base_field() {
        return Err(Error::FieldMismatch(p.base_field().to_string(), q.base_field().to_string()));
    }
    let mut warnings = Vec::new();
    let done = |value, case, connectors, warnings| {
        Ok(ExtDimension {
            value,
            case,
            connectors,
            warnings,
        })
    };
    if !g.reachable(c.base(), e.base()) {
        return done(Dim::Finite(0), CaseTag::NoPath, None, warnings);
    }
    let connectors = connector_set(g, c, e)?;
    if !g.is_exclusive(c)? || !g.is_exclusive(e)? {
        return done(Dim::Infinite, CaseTag::NonExclusive, Some(connectors), warnings);
    }
    if c == e {
        let (value, case) = if p == q {
            (Dim::Finite(degree(p)), CaseTag::SameCycleSamePoly)
        } else {
            (Dim::Finite(0), CaseTag::SameCycleDistinctPoly)
        };
        return done(value, case, Some(connectors), warnings);
    }
    if c.same_class(e) {
        let msg = format!(
            "`{}` and `{}` are rotations of one cycle; treated as distinct cycles",
            g.render_path(c.path()),
            g.render_path(e.path())
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let value = match connectors.count() {
        Some(n) => Dim::Finite(n as u64 * degree(p) * degree(q)),
        None => Dim::Infinite,
    };
    done(value, CaseTag::DistinctExclusive, Some(connectors), warnings)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleOutcome {
    /// Cokernel dimensions at `B` and `B + 1` agree.
    Stable { value: u64, representatives: usize },
    Unstable { reason: String },
}

impl OracleOutcome {
    /// Whether the oracle outcome is consistent with `dim`.
    pub fn agrees_with(&self, dim: Dim) -> bool {
        match (self, dim) {
            (OracleOutcome::Stable { value, .. }, Dim::Finite(n)) => *value == n,
            (OracleOutcome::Unstable { .. }, Dim::Infinite) => true,
            _ => false,
        }
    }
}

impl fmt::Display for OracleOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleOutcome::Stable { value, .. } => write!(f, "{value}"),
            OracleOutcome::Unstable { reason } => write!(f, "unstable ({reason})"),
        }
    }
}

// paths visited by one enumeration before giving up
const SEARCH_BUDGET: usize = 2_000_000;

enum Enumerated {
    Complete(Vec<Path>),
    /// A member longer than the lower cap exists.
    Grew(Path),
    Budget,
}

/// Connectors of length at most `cap`, by depth-first search over graph paths.
/// Stops early when a member of length in `(lower, cap]` turns up.
fn enumerate_connectors(g: &Graph, c: &Cycle, e: &Cycle, lower: usize, cap: usize) -> Enumerated {
    let co = g.coreachable_set(e.base());
    if !co[c.base().0] {
        return Enumerated::Complete(Vec::new());
    }
    let mut out = Vec::new();
    let mut visited = 0usize;
    let mut stack = vec![Path::vertex(c.base())];
    while let Some(p) = stack.pop() {
        visited += 1;
        if visited > SEARCH_BUDGET {
            return Enumerated::Budget;
        }
        if is_connector(c, e, &p) {
            if p.len() > lower {
                return Enumerated::Grew(p);
            }
            out.push(p.clone());
        }
        // once c is a prefix, no extension is a connector
        if p.len() >= c.len() && c.edges() == &p.edges()[..c.len()] {
            continue;
        }
        if p.len() == cap {
            continue;
        }
        for &f in g.out_edges(p.range()) {
            if co[g.range(f).0] {
                stack.push(p.concat_unchecked(&Path::edge(g, f)));
            }
        }
    }
    out.sort_by(|x, y| (x.len(), x.edges()).cmp(&(y.len(), y.edges())));
    Enumerated::Complete(out)
}

/// The representative of `c^∞` in `[e^∞]`, if `c` is a rotation of `e`.
fn cycle_tail_key(g: &Graph, c: &Cycle, e: &Cycle) -> Option<Path> {
    if !c.same_class(e) {
        return None;
    }
    let r = (0..e.len()).find(|&r| e.rotate(g, r).edges() == c.edges())?;
    Some(if r == 0 {
        Path::vertex(e.base())
    } else {
        e.path().slice(g, r, e.len())
    })
}

fn coordinates(interner: &mut Interner<(Path, usize)>, w: &ChenVector) -> SparseVec {
    let mut v = SparseVec::new();
    for (mu, k) in w.terms() {
        for (j, c) in k.base_coords().into_iter().enumerate() {
            if !c.is_zero() {
                v.insert(interner.id(&(mu.clone(), j)), c);
            }
        }
    }
    v
}

/// Cokernel dimension of `p(c)⋆−` from the span of `xbar^j c^i μ` (`i < bound`)
/// into the span of `xbar^j c^i μ` (`i < bound + deg p`).
fn truncated_map_cokernel(
    desc: &Arc<ModuleDescriptor>,
    c: &Cycle,
    p: &BasicPolynomial,
    reps: &[Path],
    tail: Option<&Path>,
    bound: usize,
) -> Result<u64> {
    let g = desc.graph();
    let base = desc.base_field();
    let pc = eval_poly_at_cycle(g, p.poly(), c);
    let n = desc.degree();
    let xbar_pow = |j: usize| desc.twist_power(j as i64);
    let mut keys: Interner<(Path, usize)> = Interner::new();
    let mut domain: Vec<ChenVector> = Vec::new();
    let push_keys = |v: &ChenVector, keys: &mut Interner<(Path, usize)>| {
        for mu in v.terms().keys() {
            for j in 0..n {
                keys.id(&(mu.clone(), j));
            }
        }
    };
    let one = Scalar::one(base);
    for mu in reps {
        for i in 0..bound + p.degree() {
            let path = c.power(i).concat_unchecked(mu);
            let v = ChenVector::canonical(desc, &path, &one)?;
            push_keys(&v, &mut keys);
            if i < bound {
                for j in 0..n {
                    domain.push(v.scale(&xbar_pow(j))?);
                }
            }
        }
    }
    if let Some(t) = tail {
        let v = ChenVector::canonical(desc, t, &one)?;
        push_keys(&v, &mut keys);
        for j in 0..n {
            domain.push(v.scale(&xbar_pow(j))?);
        }
    }
    let mut ech = Echelon::new(base);
    for v in &domain {
        let image = act(&pc, v)?;
        ech.insert(coordinates(&mut keys, &image));
    }
    Ok((keys.len() - ech.rank()) as u64)
}

/// Brute-force recomputation of `ext_dim` for exclusive cycles, compared at `bound` and `bound + 1`.
pub fn ext_dim_oracle(
    g: &Arc<Graph>,
    c: &Cycle,
    p: &BasicPolynomial,
    e: &Cycle,
    q: &BasicPolynomial,
    bound: usize,
) -> Result<OracleOutcome> {
    g.check_cycle(c)?;
    g.check_cycle(e)?;
    for cy in [c, e] {
        if !g.is_exclusive(cy)? {
            return Err(Error::NonExclusiveCycle(g.render_path(cy.path())));
        }
    }
    if bound < p.degree() + 2 {
        return Err(Error::TruncationTooSmall(bound));
    }
    if p.base_field() != q.base_field() {
        return Err(Error::FieldMismatch(p.base_field().to_string(), q.base_field().to_string()));
    }
    let width = g.vertex_count().max(1);
    let (lo, hi) = (bound * width, (bound + 1) * width);
    let reps = match enumerate_connectors(g, c, e, lo, hi) {
        Enumerated::Complete(r) => r,
        Enumerated::Grew(p) => {
            return Ok(OracleOutcome::Unstable {
                reason: format!("a connector of length {} exceeds {lo}", p.len()),
            })
        }
        Enumerated::Budget => {
            return Ok(OracleOutcome::Unstable {
                reason: "path search budget exhausted".into(),
            })
        }
    };
    let desc = ModuleDescriptor::polynomial(g, e.clone(), q.clone())?;
    let tail = cycle_tail_key(g, c, e);
    let at_b = truncated_map_cokernel(&desc, c, p, &reps, tail.as_ref(), bound)?;
    let at_b1 = truncated_map_cokernel(&desc, c, p, &reps, tail.as_ref(), bound + 1)?;
    if at_b != at_b1 {
        return Ok(OracleOutcome::Unstable {
            reason: format!("cokernel {at_b} at bound {bound}, {at_b1} at bound {}", bound + 1),
        });
    }
    Ok(OracleOutcome::Stable {
        value: at_b,
        representatives: reps.len() + tail.is_some() as usize,
    })
}

/// Cokernel of `p(c)⋆−` from the span of `xbar^j λ` with `|λ| ≤ max_len` into
/// the span of `xbar^j λ` with `|λ| ≤ max_len + deg p·|c|`, over all canonical
/// `λ` from `s(c)`. Valid for any pair of cycles; grows without bound when
/// the true dimension is infinite.
pub fn truncated_cokernel(
    g: &Arc<Graph>,
    c: &Cycle,
    p: &BasicPolynomial,
    e: &Cycle,
    q: &BasicPolynomial,
    max_len: usize,
) -> Result<u64> {
    let desc = ModuleDescriptor::polynomial(g, e.clone(), q.clone())?;
    let base = desc.base_field();
    let n = desc.degree();
    let reach = max_len + p.degree() * c.len();
    let co = g.coreachable_set(e.base());
    let mut keys: Interner<(Path, usize)> = Interner::new();
    let mut domain = Vec::new();
    let mut stack = vec![Path::vertex(c.base())];
    let one = Scalar::one(base);
    while let Some(path) = stack.pop() {
        if path.range() == e.base() && (path.is_vertex() || !e.path().is_suffix_of(&path)) {
            let v = ChenVector::canonical(&desc, &path, &one)?;
            for j in 0..n {
                keys.id(&(path.clone(), j));
            }
            if path.len() <= max_len {
                for j in 0..n {
                    domain.push(v.scale(&desc.twist_power(j as i64))?);
                }
            }
        }
        if path.len() < reach {
            for &f in g.out_edges(path.range()) {
                if co[g.range(f).0] {
                    stack.push(path.concat_unchecked(&Path::edge(g, f)));
                }
            }
        }
    }
    let pc = eval_poly_at_cycle(g, p.poly(), c);
    let mut ech = Echelon::new(base);
    for v in &domain {
        ech.insert(coordinates(&mut keys, &act(&pc, v)?));
    }
    Ok((keys.len() - ech.rank()) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::scalar::Field;

    fn setup() -> (Arc<Graph>, BasicPolynomial, BasicPolynomial) {
        let g = fixture::example();
        let p = BasicPolynomial::parse(fixture::EXAMPLE_P, &Field::RATIONAL).unwrap();
        let q = BasicPolynomial::parse(fixture::EXAMPLE_Q, &Field::RATIONAL).unwrap();
        (g, p, q)
    }

    #[test]
    fn example_values() {
        let (g, p, q) = setup();
        let cyc = |s: &str| g.parse_cycle(s).unwrap();
        let dim = |c: &str, pp: &BasicPolynomial, e: &str, qq: &BasicPolynomial| {
            let r = ext_dim(&g, &cyc(c), pp, &cyc(e), qq).unwrap();
            (r.value, r.case)
        };
        assert_eq!(dim("g", &p, "d", &q), (Dim::Finite(0), CaseTag::NoPath));
        assert_eq!(dim("d", &p, "l", &q), (Dim::Finite(6), CaseTag::DistinctExclusive));
        assert_eq!(dim("d", &p, "d", &q), (Dim::Finite(0), CaseTag::SameCycleDistinctPoly));
        assert_eq!(dim("d", &q, "d", &q), (Dim::Finite(3), CaseTag::SameCycleSamePoly));
        assert_eq!(dim("d", &p, "d", &p), (Dim::Finite(2), CaseTag::SameCycleSamePoly));
        assert_eq!(dim("d", &p, "a", &q), (Dim::Infinite, CaseTag::DistinctExclusive));
        assert_eq!(dim("d", &p, "g", &q), (Dim::Infinite, CaseTag::NonExclusive));
        assert_eq!(dim("g", &p, "a", &q), (Dim::Infinite, CaseTag::NonExclusive));
    }

    #[test]
    fn oracle_on_example() {
        let (g, p, q) = setup();
        let cyc = |s: &str| g.parse_cycle(s).unwrap();
        let run = |c: &str, pp: &BasicPolynomial, e: &str, qq: &BasicPolynomial| {
            ext_dim_oracle(&g, &cyc(c), pp, &cyc(e), qq, 6).unwrap()
        };
        assert!(matches!(run("d", &p, "l", &q), OracleOutcome::Stable { value: 6, .. }));
        assert!(matches!(run("d", &p, "d", &q), OracleOutcome::Stable { value: 0, .. }));
        assert!(matches!(run("d", &p, "d", &p), OracleOutcome::Stable { value: 2, .. }));
        assert!(matches!(run("d", &q, "d", &q), OracleOutcome::Stable { value: 3, .. }));
        assert!(matches!(run("d", &p, "a", &q), OracleOutcome::Unstable { .. }));
        assert!(matches!(
            ext_dim_oracle(&g, &cyc("g"), &p, &cyc("d"), &q, 6),
            Err(Error::NonExclusiveCycle(_))
        ));
        assert!(matches!(
            ext_dim_oracle(&g, &cyc("d"), &p, &cyc("l"), &q, 3),
            Err(Error::TruncationTooSmall(3))
        ));
    }

    #[test]
    fn field_mismatch() {
        let (g, p, _) = setup();
        let f5 = Field::Base(crate::scalar::BaseField::Prime(5));
        let p5 = BasicPolynomial::parse("x^2+2", &f5).unwrap();
        let d = g.parse_cycle("d").unwrap();
        assert!(matches!(ext_dim(&g, &d, &p, &d, &p5), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn rotations_warn() {
        let (g, p, q) = setup();
        let d = g.parse_cycle("d").unwrap();
        let r = ext_dim(&g, &d, &p, &d.rotate(&g, 2), &q).unwrap();
        assert_eq!(r.case, CaseTag::DistinctExclusive);
        assert_eq!(r.warnings.len(), 1);
    }
}
