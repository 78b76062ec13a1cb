use proptest::prelude::*;

use cpsd::graph::{chromatic_number, find_coloring, parse_dimacs, to_dimacs, Graph};

fn chromatic_oracle(g: &Graph) -> usize {
    let n = g.n();
    for t in 1..=n.max(1) {
        let total = t.pow(n as u32);
        for code in 0..total {
            let c: Vec<usize> = (0..n).map(|u| code / t.pow(u as u32) % t).collect();
            if g.is_proper_coloring(&c) {
                return t;
            }
        }
    }
    unreachable!()
}

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            let edges = pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| *e);
            Graph::new(n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn chromatic_number_matches_exhaustive(g in graph(6)) {
        let chi = chromatic_oracle(&g);
        prop_assert_eq!(chromatic_number(&g, 6).unwrap(), Some(chi));
        let c = find_coloring(&g, chi).unwrap();
        prop_assert!(g.is_proper_coloring(&c));
        if chi > 1 {
            prop_assert!(find_coloring(&g, chi - 1).is_none());
        }
    }

    #[test]
    fn dimacs_roundtrip(g in graph(8)) {
        prop_assert_eq!(parse_dimacs(&to_dimacs(&g)).unwrap(), g);
    }
}

#[test]
fn named_graphs() {
    assert_eq!(chromatic_number(&Graph::petersen(), 4).unwrap(), Some(3));
    assert_eq!(chromatic_number(&Graph::cycle(7), 4).unwrap(), Some(3));
    assert_eq!(chromatic_number(&Graph::complete(5), 4).unwrap(), None);
    assert_eq!(Graph::petersen().m(), 15);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let err = parse_dimacs("c hi\np edge 2 1\ne 1 3\n")
        .unwrap_err()
        .to_string();
    assert!(err.contains("line 3"), "{err}");
    assert!(parse_dimacs("p edge 2 1\ne 1 1\n").is_err());
    assert!(parse_dimacs("e 1 2\n").is_err());
    let g = parse_dimacs("p edge 3 2\ne 1 2\ne 2 1\n").unwrap();
    assert_eq!(g.m(), 1);
}
