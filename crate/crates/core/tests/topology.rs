use std::collections::BTreeSet;

use isingbench::topology::{
    build_chimera, build_from_spec, build_pegasus, build_zephyr, chimera_coordinates, load_graph, pegasus_coordinates,
    zephyr_coordinates, Family, HardwareGraph, PEGASUS_HORIZONTAL_OFFSETS, PEGASUS_VERTICAL_OFFSETS,
};
use sha2::{Digest, Sha256};

// Fingerprint of the sorted edge list, rendered as `[(a, b), ...]`.
fn edge_hash(g: &HardwareGraph) -> String {
    let text = format!("{:?}", g.edges());
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn edge_set(g: &HardwareGraph) -> BTreeSet<(usize, usize)> {
    g.edges().iter().copied().collect()
}

fn all_pairs(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            if adjacent(a, b) {
                out.insert((a, b));
            }
        }
    }
    out
}

// Counts, maximum degrees and fingerprints from the vendor's reference
// generator.
#[test]
fn reference_sizes() {
    let cases: [(HardwareGraph, usize, usize, usize); 8] = [
        (build_chimera(2, 2, 4).unwrap(), 32, 80, 5),
        (build_chimera(16, 16, 4).unwrap(), 2048, 6016, 6),
        (build_pegasus(2).unwrap(), 40, 164, 13),
        (build_pegasus(3).unwrap(), 128, 704, 14),
        (build_pegasus(16).unwrap(), 5640, 40484, 15),
        (build_zephyr(1, 4).unwrap(), 48, 280, 17),
        (build_zephyr(2, 1).unwrap(), 40, 114, 7),
        (build_zephyr(6, 4).unwrap(), 1248, 11400, 20),
    ];
    for (g, nodes, edges, max_deg) in cases {
        assert_eq!(g.num_nodes(), nodes, "{} {:?}", g.family(), g.params());
        assert_eq!(g.num_edges(), edges, "{} {:?}", g.family(), g.params());
        assert_eq!(g.max_degree(), max_deg, "{} {:?}", g.family(), g.params());
    }
}

#[test]
fn reference_fingerprints() {
    assert_eq!(edge_hash(&build_pegasus(3).unwrap()), "6f2923dcc795b26d");
    let z = build_zephyr(2, 4).unwrap();
    assert_eq!((z.num_nodes(), z.num_edges()), (160, 1224));
    assert_eq!(edge_hash(&z), "7a1f5bd7b21e1212");
}

#[test]
fn single_chimera_cell() {
    let g = build_chimera(1, 1, 4).unwrap();
    assert_eq!((g.num_nodes(), g.num_edges()), (8, 16));
}

#[test]
fn chimera_matches_cell_enumeration() {
    for (m, n, t) in [(2, 2, 4), (3, 2, 2), (1, 4, 3)] {
        let c = chimera_coordinates(m, n, t);
        let oracle = all_pairs(c.len(), |a, b| {
            let (p, q) = (c[a], c[b]);
            let same_cell = p.row == q.row && p.col == q.col;
            if same_cell {
                return p.u != q.u;
            }
            if p.u != q.u || p.k != q.k {
                return false;
            }
            if p.u == 0 {
                p.col == q.col && p.row.abs_diff(q.row) == 1
            } else {
                p.row == q.row && p.col.abs_diff(q.col) == 1
            }
        });
        assert_eq!(edge_set(&build_chimera(m, n, t).unwrap()), oracle, "chimera {m}x{n}x{t}");
    }
}

#[test]
fn chimera_interior_degree_six() {
    let g = build_chimera(16, 16, 4).unwrap();
    let deg = g.degrees();
    for (id, c) in chimera_coordinates(16, 16, 4).into_iter().enumerate() {
        let interior = (1..15).contains(&c.row) && (1..15).contains(&c.col);
        if interior {
            assert_eq!(deg[id], 6);
        }
    }
}

// Pegasus qubits as line segments: a vertical qubit (0, w, k, z) sits at
// x = 12w + k and covers y in [12z + off0[k], +12); horizontal qubits are
// the transpose. Perpendicular qubits couple iff their segments cross.
#[test]
fn pegasus_matches_segment_geometry() {
    let off0 = PEGASUS_VERTICAL_OFFSETS;
    let off1 = PEGASUS_HORIZONTAL_OFFSETS;
    for m in 2..=4 {
        let c = pegasus_coordinates(m);
        let oracle = all_pairs(c.len(), |a, b| {
            let (p, q) = (c[a], c[b]);
            if p.u == q.u {
                let odd = p.w == q.w && p.z == q.z && p.k / 2 == q.k / 2 && p.k != q.k;
                let external = p.w == q.w && p.k == q.k && p.z.abs_diff(q.z) == 1;
                return odd || external;
            }
            let (v, h) = if p.u == 0 { (p, q) } else { (q, p) };
            let x = 12 * v.w + v.k;
            let y = 12 * h.w + h.k;
            let x0 = 12 * h.z + off1[h.k];
            let y0 = 12 * v.z + off0[v.k];
            (x0..x0 + 12).contains(&x) && (y0..y0 + 12).contains(&y)
        });
        assert_eq!(edge_set(&build_pegasus(m).unwrap()), oracle, "pegasus {m}");
    }
}

#[test]
fn pegasus_interior_degree_fifteen() {
    let m = 8;
    let g = build_pegasus(m).unwrap();
    let deg = g.degrees();
    let mut checked = 0;
    for (id, c) in pegasus_coordinates(m).into_iter().enumerate() {
        if (1..=m - 2).contains(&c.w) && (1..=m - 3).contains(&c.z) {
            assert_eq!(deg[id], 15, "{c:?}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}

// Zephyr qubits cover the two cells {2z + j, 2z + j + 1} along their axis
// at perpendicular position w. Perpendicular qubits couple iff each one's
// w lies in the other's span; parallel ones through odd couplers
// (overlapping spans, opposite j) or external couplers (adjacent z).
#[test]
fn zephyr_matches_span_geometry() {
    for (m, t) in [(1, 4), (2, 1), (2, 4), (3, 2)] {
        let c = zephyr_coordinates(m, t);
        let span = |z: usize, j: usize| [2 * z + j, 2 * z + j + 1];
        let oracle = all_pairs(c.len(), |a, b| {
            let (p, q) = (c[a], c[b]);
            if p.u == q.u {
                if p.w != q.w || p.k != q.k {
                    return false;
                }
                let overlap = span(p.z, p.j).iter().any(|x| span(q.z, q.j).contains(x));
                let odd = p.j != q.j && overlap;
                let external = p.j == q.j && p.z.abs_diff(q.z) == 1;
                return odd || external;
            }
            span(p.z, p.j).contains(&q.w) && span(q.z, q.j).contains(&p.w)
        });
        assert_eq!(edge_set(&build_zephyr(m, t).unwrap()), oracle, "zephyr {m},{t}");
    }
}

#[test]
fn zephyr_interior_degree_twenty() {
    let m = 6;
    let g = build_zephyr(m, 4).unwrap();
    let deg = g.degrees();
    for (id, c) in zephyr_coordinates(m, 4).into_iter().enumerate() {
        if (1..=2 * m - 1).contains(&c.w) && (1..=m - 2).contains(&c.z) {
            assert_eq!(deg[id], 20, "{c:?}");
        }
    }
}

#[test]
fn zephyr_node_enumeration() {
    // 2 orientations x (2m + 1) offsets x t x 2 shifts x m
    assert_eq!(build_zephyr(1, 4).unwrap().num_nodes(), 2 * 3 * 4 * 2);
    assert_eq!(zephyr_coordinates(1, 4).len(), 48);
}

#[test]
fn degrees_never_exceed_family_maximum() {
    let graphs = [build_chimera(4, 5, 4).unwrap(), build_pegasus(6).unwrap(), build_zephyr(4, 4).unwrap()];
    for g in graphs {
        let cap = g.family().nominal_max_degree().unwrap();
        assert!(g.degrees().iter().all(|&d| d <= cap), "{}", g.family());
        let adj = g.adjacency();
        for (a, nbrs) in adj.iter().enumerate() {
            for &b in nbrs {
                assert!(adj[b].contains(&a));
            }
        }
        let set = edge_set(&g);
        assert_eq!(set.len(), g.num_edges());
        assert!(g.edges().iter().all(|&(a, b)| a < b));
    }
}

#[test]
fn builders_are_deterministic() {
    assert_eq!(build_pegasus(5).unwrap(), build_pegasus(5).unwrap());
    assert_eq!(build_zephyr(3, 4).unwrap(), build_zephyr(3, 4).unwrap());
    assert_eq!(build_chimera(3, 3, 4).unwrap(), build_chimera(3, 3, 4).unwrap());
}

#[test]
fn parameter_errors() {
    assert!(build_pegasus(1).is_err());
    assert!(build_zephyr(0, 4).is_err());
    assert!(build_chimera(0, 1, 4).is_err());
}

#[test]
fn spec_strings_select_families() {
    assert_eq!(build_from_spec("chimera:1,1,4").unwrap().num_edges(), 16);
    assert_eq!(build_from_spec("pegasus:2").unwrap().family(), Family::Pegasus);
    assert_eq!(build_from_spec("zephyr:1,4").unwrap().num_nodes(), 48);
    assert!(build_from_spec("torus:3").is_err());
}

#[test]
fn edge_list_examples() {
    let g = load_graph("0 1\n1 2").unwrap().graph;
    assert_eq!((g.num_nodes(), g.num_edges()), (3, 2));
    assert!(load_graph("0 0").is_err());
}

// A working-qubit subgraph: zephyr(4, 4) with some qubits removed, node
// labels kept from the full lattice.
#[test]
fn working_qubit_list_with_563_nodes() {
    let full = build_zephyr(4, 4).unwrap();
    let keep: BTreeSet<usize> = (0..full.num_nodes()).filter(|i| i % 45 != 5).collect();
    assert_eq!(keep.len(), 563);
    let mut text = String::from("# working qubits\n");
    for &i in &keep {
        text.push_str(&format!("{i}\n"));
    }
    for &(a, b) in full.edges() {
        if keep.contains(&a) && keep.contains(&b) {
            text.push_str(&format!("{a} {b}\n"));
        }
    }
    let loaded = load_graph(&text).unwrap();
    assert_eq!(loaded.graph.num_nodes(), 563);
    assert_eq!(loaded.graph.family(), Family::Custom);
    assert_eq!(loaded.duplicate_edges, 0);
    let labels: Vec<u64> = keep.iter().map(|&i| i as u64).collect();
    assert_eq!(loaded.graph.labels(), labels.as_slice());
}
