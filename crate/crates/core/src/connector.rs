//! Connector sets between cycles.
//!
//! For a source cycle `c` and target cycle `e`, the connectors are the
//! canonical representatives `μ` with `s(μ) = s(c)`, `r(μ) = s(e)`, `μ` not
//! ending in `e`, and `c` not a prefix of `μe^∞`. They are the accepted words
//! of a deterministic automaton over graph edges whose state is
//! `(vertex, longest suffix matching a prefix of e, progress along c)`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{Cycle, EdgeId, Graph, Path, VertexId};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Prefix {
    /// The word so far equals the first `m` edges of `c`, `m < |c|`.
    Matched(usize),
    Diverged,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct State {
    vertex: VertexId,
    suffix: usize,
    prefix: Prefix,
}

/// `prefix · pump^k · suffix` is a connector for every `k ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PumpingWitness {
    pub prefix: Path,
    pub pump: Path,
    pub suffix: Path,
}

impl PumpingWitness {
    pub fn word(&self, k: usize) -> Path {
        let mut p = self.prefix.clone();
        for _ in 0..k {
            p = p.concat_unchecked(&self.pump);
        }
        p.concat_unchecked(&self.suffix)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConnectorResult {
    Finite(Vec<Path>),
    Infinite(PumpingWitness),
}

impl ConnectorResult {
    pub fn count(&self) -> Option<usize> {
        match self {
            ConnectorResult::Finite(v) => Some(v.len()),
            ConnectorResult::Infinite(_) => None,
        }
    }
}

/// Direct membership test, independent of the automaton.
pub fn is_connector(c: &Cycle, e: &Cycle, mu: &Path) -> bool {
    if mu.source() != c.base() || mu.range() != e.base() {
        return false;
    }
    if !mu.is_vertex() && e.path().is_suffix_of(mu) {
        return false;
    }
    // is c a prefix of μe^∞?
    let word = |i: usize| -> EdgeId {
        if i < mu.len() {
            mu.edges()[i]
        } else {
            e.edges()[(i - mu.len()) % e.len()]
        }
    };
    !c.edges().iter().enumerate().all(|(i, &x)| word(i) == x)
}

struct Automaton<'a> {
    g: &'a Graph,
    c: &'a Cycle,
    e: &'a Cycle,
    /// `tail_in_e[m]`: whether `c[m..]` is a prefix of `e^∞`.
    tail_in_e: Vec<bool>,
}

impl<'a> Automaton<'a> {
    fn new(g: &'a Graph, c: &'a Cycle, e: &'a Cycle) -> Self {
        let tail_in_e = (0..c.len())
            .map(|m| {
                let ce = c.edges();
                g.source(ce[m]) == e.base()
                    && ce[m..]
                        .iter()
                        .enumerate()
                        .all(|(i, &x)| x == e.edges()[i % e.len()])
            })
            .collect();
        Automaton { g, c, e, tail_in_e }
    }

    fn start(&self) -> State {
        State {
            vertex: self.c.base(),
            suffix: 0,
            prefix: Prefix::Matched(0),
        }
    }

    fn step(&self, s: State, f: EdgeId) -> Option<State> {
        let n = self.e.len();
        let ee = self.e.edges();
        // edges of a cycle are distinct, so the failure function is trivial
        let suffix = if s.suffix < n && ee[s.suffix] == f {
            s.suffix + 1
        } else if ee[0] == f {
            1
        } else {
            0
        };
        let prefix = match s.prefix {
            Prefix::Matched(m) if self.c.edges()[m] == f => {
                if m + 1 == self.c.len() {
                    return None;
                }
                Prefix::Matched(m + 1)
            }
            Prefix::Matched(_) | Prefix::Diverged => Prefix::Diverged,
        };
        Some(State {
            vertex: self.g.range(f),
            suffix,
            prefix,
        })
    }

    fn accepting(&self, s: State) -> bool {
        s.vertex == self.e.base()
            && s.suffix != self.e.len()
            && match s.prefix {
                Prefix::Diverged => true,
                Prefix::Matched(m) => !self.tail_in_e[m],
            }
    }
}

/// Transitions of the trimmed automaton (reachable and co-reachable states only).
type Trimmed = HashMap<State, Vec<(EdgeId, State)>>;

fn trim(a: &Automaton) -> Trimmed {
    let mut reach: Vec<State> = vec![a.start()];
    let mut seen: BTreeSet<State> = reach.iter().copied().collect();
    let mut edges: HashMap<State, Vec<(EdgeId, State)>> = HashMap::new();
    let mut i = 0;
    while i < reach.len() {
        let s = reach[i];
        i += 1;
        let mut out = Vec::new();
        for &f in a.g.out_edges(s.vertex) {
            if let Some(t) = a.step(s, f) {
                out.push((f, t));
                if seen.insert(t) {
                    reach.push(t);
                }
            }
        }
        edges.insert(s, out);
    }
    // co-reachability by backward fixpoint
    let mut useful: BTreeSet<State> = reach.iter().copied().filter(|&s| a.accepting(s)).collect();
    loop {
        let before = useful.len();
        for s in &reach {
            if !useful.contains(s) && edges[s].iter().any(|(_, t)| useful.contains(t)) {
                useful.insert(*s);
            }
        }
        if useful.len() == before {
            break;
        }
    }
    reach
        .iter()
        .filter(|s| useful.contains(s))
        .map(|s| {
            let kept = edges[s].iter().copied().filter(|(_, t)| useful.contains(t)).collect();
            (*s, kept)
        })
        .collect()
}

/// Finds a cycle reachable in the trimmed automaton; returns (path to entry, loop).
fn find_cycle(t: &Trimmed, start: State) -> Option<(Vec<EdgeId>, State, Vec<EdgeId>)> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: HashMap<State, Mark> = HashMap::new();
    // iterative DFS keeping the current edge stack
    let mut stack: Vec<(State, usize)> = vec![(start, 0)];
    let mut path: Vec<EdgeId> = Vec::new();
    let mut states_on_path: Vec<State> = vec![start];
    marks.insert(start, Mark::Open);
    while let Some(top) = stack.last_mut() {
        let (s, idx) = *top;
        top.1 += 1;
        let out = &t[&s];
        if idx < out.len() {
            let (f, next) = out[idx];
            match marks.get(&next) {
                Some(Mark::Open) => {
                    let pos = states_on_path.iter().position(|&x| x == next).expect("open state is on path");
                    let mut lp = path[pos..].to_vec();
                    lp.push(f);
                    return Some((path[..pos].to_vec(), next, lp));
                }
                Some(Mark::Done) => {}
                None => {
                    marks.insert(next, Mark::Open);
                    stack.push((next, 0));
                    path.push(f);
                    states_on_path.push(next);
                }
            }
        } else {
            marks.insert(s, Mark::Done);
            stack.pop();
            path.pop();
            states_on_path.pop();
        }
    }
    None
}

/// Shortest edge word from `from` to an accepting state.
fn shortest_accepting(a: &Automaton, t: &Trimmed, from: State) -> Vec<EdgeId> {
    let mut prev: HashMap<State, (State, EdgeId)> = HashMap::new();
    let mut queue = std::collections::VecDeque::from([from]);
    let mut seen = BTreeSet::from([from]);
    while let Some(s) = queue.pop_front() {
        if a.accepting(s) {
            let mut word = Vec::new();
            let mut cur = s;
            while cur != from {
                let (p, f) = prev[&cur];
                word.push(f);
                cur = p;
            }
            word.reverse();
            return word;
        }
        for &(f, n) in &t[&s] {
            if seen.insert(n) {
                prev.insert(n, (s, f));
                queue.push_back(n);
            }
        }
    }
    unreachable!("trimmed states are co-reachable")
}

fn to_path(g: &Graph, start: VertexId, edges: &[EdgeId]) -> Path {
    if edges.is_empty() {
        Path::vertex(start)
    } else {
        Path::from_edges(g, edges.to_vec()).expect("automaton words compose")
    }
}

/// Connectors from `c` to `e`: the full sorted list, or a pumping witness.
pub fn connector_set(g: &Graph, c: &Cycle, e: &Cycle) -> Result<ConnectorResult> {
    g.check_cycle(c)?;
    g.check_cycle(e)?;
    let a = Automaton::new(g, c, e);
    let t = trim(&a);
    let start = a.start();
    if !t.contains_key(&start) {
        return Ok(ConnectorResult::Finite(Vec::new()));
    }
    if let Some((pre, entry, lp)) = find_cycle(&t, start) {
        let suf = shortest_accepting(&a, &t, entry);
        let entry_vertex = entry.vertex;
        let witness = PumpingWitness {
            prefix: to_path(g, c.base(), &pre),
            pump: to_path(g, entry_vertex, &lp),
            suffix: to_path(g, entry_vertex, &suf),
        };
        debug_assert!((0..4).all(|k| is_connector(c, e, &witness.word(k))));
        return Ok(ConnectorResult::Infinite(witness));
    }
    // acyclic: enumerate all accepted words
    let mut out = Vec::new();
    let mut stack: Vec<(State, Vec<EdgeId>)> = vec![(start, Vec::new())];
    while let Some((s, word)) = stack.pop() {
        if a.accepting(s) {
            out.push(to_path(g, c.base(), &word));
        }
        for &(f, n) in &t[&s] {
            let mut w = word.clone();
            w.push(f);
            stack.push((n, w));
        }
    }
    out.sort_by(|x, y| (x.len(), x.edges()).cmp(&(y.len(), y.edges())));
    Ok(ConnectorResult::Finite(out))
}

/// Checks a pumping witness against the direct membership predicate for `k ≤ max_k`.
pub fn verify_witness(c: &Cycle, e: &Cycle, w: &PumpingWitness, max_k: usize) -> bool {
    !w.pump.is_vertex()
        && w.pump.source() == w.pump.range()
        && (0..=max_k).all(|k| is_connector(c, e, &w.word(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    fn names(g: &Graph, r: &ConnectorResult) -> Vec<String> {
        match r {
            ConnectorResult::Finite(v) => v.iter().map(|p| g.render_path(p)).collect(),
            ConnectorResult::Infinite(_) => vec!["infinite".into()],
        }
    }

    #[test]
    fn example_connectors() {
        let g = fixture::example();
        let cyc = |s: &str| g.parse_cycle(s).unwrap();
        assert_eq!(names(&g, &connector_set(&g, &cyc("d"), &cyc("l")).unwrap()), ["d1 d2 m n"]);
        assert!(names(&g, &connector_set(&g, &cyc("g"), &cyc("d")).unwrap()).is_empty());
        assert!(names(&g, &connector_set(&g, &cyc("d"), &cyc("d")).unwrap()).is_empty());
        match connector_set(&g, &cyc("d"), &cyc("a")).unwrap() {
            ConnectorResult::Infinite(w) => {
                assert!(verify_witness(&cyc("d"), &cyc("a"), &w, 5));
                let pump = g.render_path(&w.pump);
                assert!(pump == "g'" || cyc("g").same_class(&Cycle::new(&g, w.pump.edges().to_vec()).unwrap()), "{pump}");
            }
            other => panic!("expected infinite, got {other:?}"),
        }
    }

    #[test]
    fn membership_predicate() {
        let g = fixture::example();
        let d = g.parse_cycle("d").unwrap();
        let l = g.parse_cycle("l").unwrap();
        assert!(is_connector(&d, &l, &g.parse_path("d1 d2 m n").unwrap()));
        assert!(!is_connector(&d, &l, &g.parse_path("d1 d2 m n l").unwrap()));
        assert!(!is_connector(&d, &l, &g.parse_path("d1 d2 d3 d4 d1 d2 m n").unwrap()));
        assert!(!is_connector(&d, &d, &g.parse_path("s1").unwrap()));
    }

    #[test]
    fn rotation_as_target() {
        let g = fixture::example();
        let d = g.parse_cycle("d").unwrap();
        let d_rot = d.rotate(&g, 1);
        // the only way to s2 is d1, and d1·(d2 d3 d4 d1)^∞ = d^∞ starts with d
        assert_eq!(connector_set(&g, &d, &d_rot).unwrap(), ConnectorResult::Finite(vec![]));
    }
}
