use leavitt_core::fixture;
use leavitt_core::graph::{divides, parse_graph, strip_cycle_power, Side};
use leavitt_core::Error;

#[test]
fn example_cycles_and_exclusivity() {
    let g = fixture::example();
    let cycles = g.find_cycles();
    assert_eq!(cycles.len(), 5);
    let mut flags: Vec<(String, bool)> = cycles
        .iter()
        .map(|c| (g.render_path(c.path()), g.is_exclusive(c).unwrap()))
        .collect();
    flags.sort();
    let exclusive: Vec<&str> = flags.iter().filter(|(_, x)| *x).map(|(n, _)| n.as_str()).collect();
    assert_eq!(exclusive, vec!["a", "d1 d2 d3 d4", "l"]);
    for name in ["g", "g'"] {
        assert!(!g.is_exclusive(&g.parse_cycle(name).unwrap()).unwrap(), "{name}");
    }
}

#[test]
fn special_edge_is_first_declared() {
    let g = fixture::example();
    let t1 = g.vertex_id("t1").unwrap();
    assert_eq!(g.edge_name(g.special_edge(t1).unwrap()), "g'");
    let w = g.vertex_id("w").unwrap();
    assert_eq!(g.edge_name(g.special_edge(w).unwrap()), "a");
    let z = g.vertex_id("ubar").unwrap();
    assert!(g.is_regular(z));
}

#[test]
fn empty_graph_has_no_cycles() {
    let g = parse_graph("# nothing here\n").unwrap();
    assert_eq!(g.vertex_count(), 0);
    assert!(g.find_cycles().is_empty());
}

#[test]
fn malformed_lines_report_positions() {
    match parse_graph("vertex u v\nedge e u\n").unwrap_err() {
        Error::Syntax { line, column, .. } => assert_eq!((line, column), (2, 1)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        parse_graph("vertex u\nedge e u x\n").unwrap_err(),
        Error::Syntax { line: 2, .. }
    ));
    assert!(matches!(
        parse_graph("vertex u u\n").unwrap_err(),
        Error::Syntax { line: 1, column: 10, .. }
    ));
    assert!(matches!(parse_graph("loop u\n").unwrap_err(), Error::Syntax { line: 1, .. }));
}

#[test]
fn cycles_by_alias_and_rotation() {
    let g = fixture::example();
    let d = g.parse_cycle("d").unwrap();
    let rotated = g.parse_cycle("d3 d4 d1 d2").unwrap();
    assert_ne!(d, rotated);
    assert!(d.same_class(&rotated));
    assert_eq!(rotated.canonical(&g), d.canonical(&g));
    assert_eq!(d.rotate(&g, 2), rotated);
    assert_eq!(g.alias_of(&d), Some("d"));
    assert!(matches!(g.parse_cycle("d1 d2"), Err(Error::NotACycle(_))));
    assert!(g.parse_cycle("d1 d2 d3 d4 d1 d2 d3 d4").is_err());
    assert!(matches!(g.parse_cycle("nope"), Err(Error::UnknownId(_))));
}

#[test]
fn stripping_cycle_powers() {
    let g = fixture::example();
    let d = g.parse_cycle("d").unwrap();
    let mu = g.parse_path("p d4 d1 d2 d3 d4 d1 d2 d3 d4").unwrap();
    let (rest, k) = strip_cycle_power(&g, &mu, &d).unwrap();
    assert_eq!((g.render_path(&rest), k), ("p d4".to_string(), 2));
    let off = g.parse_path("d1").unwrap();
    assert!(matches!(strip_cycle_power(&g, &off, &d), Err(Error::RangeMismatch { .. })));
}

#[test]
fn left_and_right_division() {
    let g = fixture::example();
    let lambda = g.parse_path("d1 d2 m n").unwrap();
    let mu = g.parse_path("d1 d2").unwrap();
    let w = divides(&g, &mu, &lambda, Side::Left).unwrap();
    assert_eq!(g.render_path(&w.quotient), "m n");
    assert_eq!(mu.concat(&w.quotient, &g).unwrap(), lambda);
    assert!(divides(&g, &mu, &lambda, Side::Right).is_none());
    let tail = g.parse_path("n").unwrap();
    assert_eq!(g.render_path(&divides(&g, &tail, &lambda, Side::Right).unwrap().quotient), "d1 d2 m");
}

#[test]
fn reachability() {
    let g = fixture::example();
    let v = |s: &str| g.vertex_id(s).unwrap();
    assert!(g.reachable(v("s1"), v("z")));
    assert!(g.reachable(v("s1"), v("w")));
    assert!(!g.reachable(v("t1"), v("s1")));
    assert!(!g.reachable(v("z"), v("w")));
}
