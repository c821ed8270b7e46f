//! Independent brute-force oracles checked against the library.

use std::collections::{BTreeSet, VecDeque};

use ortho_core::colouring::{psi_colouring, sylvester_clique};
use ortho_core::graph::{
    double_cover_partition, psi_adjacent, psi_neighbours, structure_report, y_vertices,
};
use ortho_core::search::enumerate;
use ortho_core::{Canon, GraphKind, SearchConfig, VertexWord};

fn dot(a: u64, b: u64, n: u32) -> i64 {
    (0..n)
        .map(|i| if (a >> i & 1) == (b >> i & 1) { 1 } else { -1 })
        .sum()
}

/// Y_8 vertices as ±1 complements of each other, adjacency by inner product.
fn y8() -> Vec<u64> {
    (0..256u64)
        .filter(|x| x.count_ones() % 2 == 0 && x & 1 == 0)
        .collect()
}

fn extend(
    cands: &[u64],
    chosen: &mut Vec<u64>,
    target: usize,
    out: &mut Vec<BTreeSet<u64>>,
) {
    if chosen.len() == target {
        out.push(chosen.iter().copied().collect());
        return;
    }
    for (i, &v) in cands.iter().enumerate() {
        if cands.len() - i < target - chosen.len() {
            break;
        }
        if chosen.iter().all(|&u| dot(u, v, 8) != 0) {
            chosen.push(v);
            extend(&cands[i + 1..], chosen, target, out);
            chosen.pop();
        }
    }
}

#[test]
fn backtracking_matches_search_on_y8() {
    let free: Vec<u64> = y8().into_iter().filter(|&v| dot(0, v, 8) != 0).collect();
    let mut found = Vec::new();
    extend(&free, &mut Vec::new(), 8, &mut found);
    found.sort();

    let outcome = enumerate(&SearchConfig::new(8).unwrap()).unwrap();
    let mut searched: Vec<BTreeSet<u64>> = outcome
        .certificates
        .iter()
        .map(|c| c.vertices.iter().map(|v| v.bits()).collect())
        .collect();
    searched.sort();
    assert_eq!(found.len(), 8);
    assert_eq!(found, searched);
}

#[test]
fn search_is_representative_invariant() {
    let clear = enumerate(&SearchConfig::new(8).unwrap()).unwrap();
    let set = enumerate(&SearchConfig::new(8).unwrap().with_canon(Canon::Set)).unwrap();
    assert_eq!(set.base_vertex.bits(), 0xff);
    let flip = |c: &ortho_core::IndSetCertificate| -> BTreeSet<u64> {
        c.vertices.iter().map(|v| v.complement().bits()).collect()
    };
    let mut a: Vec<_> = clear.certificates.iter().map(flip).collect();
    let mut b: Vec<BTreeSet<u64>> = set
        .certificates
        .iter()
        .map(|c| c.vertices.iter().map(|v| v.bits()).collect())
        .collect();
    a.sort();
    b.sort();
    assert_eq!(a, b);
    assert_eq!(clear.count_independent, set.count_independent);
}

#[test]
fn search_is_base_invariant() {
    let b = 0b0110u64;
    let moved = enumerate(
        &SearchConfig::new(8)
            .unwrap()
            .with_base(VertexWord::new(b, 8).unwrap()),
    )
    .unwrap();
    let origin = enumerate(&SearchConfig::new(8).unwrap()).unwrap();
    let canon = |x: u64| if x & 1 == 1 { x ^ 0xff } else { x };
    let mut expect: Vec<BTreeSet<u64>> = origin
        .certificates
        .iter()
        .map(|c| c.vertices.iter().map(|v| canon(v.bits() ^ b)).collect())
        .collect();
    let mut got: Vec<BTreeSet<u64>> = moved
        .certificates
        .iter()
        .map(|c| c.vertices.iter().map(|v| v.bits()).collect())
        .collect();
    expect.sort();
    got.sort();
    assert_eq!(got, expect);
    assert!(moved.certificates.iter().all(|c| c.contains_base));
}

fn colourable(adj: &[Vec<usize>], k: usize, colours: &mut Vec<usize>) -> bool {
    let v = colours.len();
    if v == adj.len() {
        return true;
    }
    // Symmetry: vertex v may only open one new colour.
    let used = colours.iter().copied().max().map_or(0, |m| m + 1);
    for c in 0..k.min(used + 1) {
        if adj[v].iter().all(|&u| u >= v || colours[u] != c) {
            colours.push(c);
            if colourable(adj, k, colours) {
                return true;
            }
            colours.pop();
        }
    }
    false
}

fn omega_adjacency(n: u32) -> Vec<Vec<usize>> {
    (0..1u64 << n)
        .map(|a| {
            (0..1u64 << n)
                .filter(|&b| dot(a, b, n) == 0)
                .map(|b| b as usize)
                .collect()
        })
        .collect()
}

#[test]
fn brute_force_chromatic_numbers() {
    let expected = [(1u32, 1usize), (2, 2), (3, 1), (4, 4)];
    for (n, chi) in expected {
        let adj = omega_adjacency(n);
        assert!(colourable(&adj, chi, &mut Vec::new()), "n={n} colourable with {chi}");
        if chi > 1 {
            assert!(!colourable(&adj, chi - 1, &mut Vec::new()), "n={n} needs {chi}");
        }
    }
}

fn bfs_components(n: u32, adjacent: impl Fn(u64, u64) -> bool) -> usize {
    let size = 1usize << n;
    let mut seen = vec![false; size];
    let mut count = 0;
    for start in 0..size {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start as u64]);
        while let Some(x) = queue.pop_front() {
            for y in 0..size as u64 {
                if !seen[y as usize] && adjacent(x, y) {
                    seen[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    count
}

#[test]
fn component_counts_by_bfs() {
    for n in [2u32, 4, 6, 8] {
        let bfs = bfs_components(n, |a, b| dot(a, b, n) == 0);
        let report = structure_report(GraphKind::Omega(n)).unwrap();
        assert_eq!(report.component_count, bfs.into(), "Omega_{n}");
    }
    for n in [1u32, 2, 4, 8] {
        let bfs = bfs_components(n, |a, b| {
            psi_adjacent(VertexWord::new(a, n).unwrap(), VertexWord::new(b, n).unwrap()).unwrap()
        });
        let report = structure_report(GraphKind::Psi(n)).unwrap();
        assert_eq!(report.component_count, bfs.into(), "Psi_{n}");
    }
}

#[test]
fn omega_component_is_lexicographic_product() {
    // Even component of Ω_8 is Y_8[K̄_2]: x ~ y iff their classes are adjacent.
    let n = 8;
    let reps = y_vertices(n, Canon::Clear).unwrap();
    let class = |x: u64| if x & 1 == 1 { x ^ 0xff } else { x };
    for x in (0..256u64).filter(|x| x.count_ones() % 2 == 0) {
        for y in (0..256u64).filter(|y| y.count_ones() % 2 == 0) {
            let quotient = dot(class(x), class(y), n) == 0;
            assert_eq!(dot(x, y, n) == 0, quotient);
        }
        assert!(reps.iter().any(|r| r.bits() == class(x)));
    }
}

#[test]
fn double_cover_is_partition_into_joins() {
    for n in [1u32, 2, 4, 8] {
        let r = double_cover_partition(n).unwrap();
        assert!(r.partition_ok && r.induced_ok && r.join_complete_ok, "n={n}");
    }
}

#[test]
fn psi16_edge_count_by_scan() {
    let n = 16;
    let degree_sum: usize = (0..1u64 << n)
        .map(|x| psi_neighbours(VertexWord::new(x, n).unwrap()).unwrap().len())
        .sum();
    assert_eq!(degree_sum / 2, 9_109_504);
}

#[test]
fn psi_colouring_classes_are_psi_independent() {
    let k3 = psi_colouring(3).unwrap();
    for class in &k3.certificate.classes {
        for (i, u) in class.iter().enumerate() {
            for v in &class[i + 1..] {
                assert!(!psi_adjacent(*u, *v).unwrap());
            }
        }
    }
    // Ψ_8 is sparser than Ω_8, so its colouring does not transfer.
    assert_eq!(k3.proper_on_omega, Some(false));
}

#[test]
fn sylvester_rows_are_hadamard() {
    for k in 0..=5u32 {
        let n = 1u32 << k;
        let rows = sylvester_clique(k).unwrap().vertices;
        for (i, a) in rows.iter().enumerate() {
            for (j, b) in rows.iter().enumerate() {
                let d = dot(a.bits(), b.bits(), n);
                assert_eq!(d, if i == j { i64::from(n) } else { 0 });
            }
        }
    }
}
