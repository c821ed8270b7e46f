use proptest::prelude::*;

use ortho_core::colouring::{sylvester_clique, translate_disjointness};
use ortho_core::graph::{orthogonal, psi_adjacent, y_canonical};
use ortho_core::search::check_independent;
use ortho_core::{GraphKind, RationalMatrix, VertexWord};

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        (Just(r), Just(c), prop::collection::vec(-3i64..=3, r * c))
    })
}

fn matrix((r, c, data): &(usize, usize, Vec<i64>)) -> RationalMatrix {
    RationalMatrix::from_i64(*r, *c, |i, j| data[i * c + j])
}

proptest! {
    #[test]
    fn rank_is_transpose_invariant(m in small_matrix()) {
        let a = matrix(&m);
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn rcef_is_idempotent(m in small_matrix()) {
        let once = matrix(&m).rcef();
        let twice = once.matrix.rcef();
        prop_assert_eq!(&once.matrix, &twice.matrix);
        prop_assert_eq!(once.rank, twice.rank);
    }

    #[test]
    fn rcef_preserves_column_space(m in small_matrix()) {
        let a = matrix(&m);
        let c = a.rcef();
        let joint = a.hstack(&c.matrix).unwrap();
        prop_assert_eq!(joint.rank(), a.rank());
        prop_assert_eq!(joint.rank(), c.rank);
    }

    #[test]
    fn rcef_pivots_are_unit(m in small_matrix()) {
        let e = matrix(&m).rcef();
        for col in 0..e.pivot_rows.len() {
            for (other, &r) in e.pivot_rows.iter().enumerate() {
                let want = if col == other { 1 } else { 0 };
                prop_assert_eq!(e.matrix.get(r, col).to_integer(), want.into());
            }
        }
        prop_assert!(e.pivot_rows.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn orthogonality_symmetric_irreflexive(n in 1u32..=16, a in any::<u64>(), b in any::<u64>()) {
        let m = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let (u, v) = (VertexWord::new(a & m, n).unwrap(), VertexWord::new(b & m, n).unwrap());
        prop_assert_eq!(orthogonal(u, v).unwrap(), orthogonal(v, u).unwrap());
        prop_assert!(!orthogonal(u, u).unwrap());
    }

    #[test]
    fn psi_edges_are_omega_edges(k in 1u32..=4, a in any::<u64>(), b in any::<u64>()) {
        let n = 1u32 << k;
        let m = (1u64 << n) - 1;
        let (u, v) = (VertexWord::new(a & m, n).unwrap(), VertexWord::new(b & m, n).unwrap());
        if psi_adjacent(u, v).unwrap() {
            prop_assert!(orthogonal(u, v).unwrap());
        }
        prop_assert_eq!(psi_adjacent(u, v).unwrap(), psi_adjacent(v, u).unwrap());
    }

    #[test]
    fn y_canonical_is_idempotent(x in any::<u64>()) {
        let n = 12;
        let w = VertexWord::new(x & 0xfff, n).unwrap();
        if w.is_even() {
            let c = y_canonical(w).unwrap();
            prop_assert_eq!(y_canonical(c).unwrap(), c);
            prop_assert!(c == w || c == w.complement());
        }
    }

    #[test]
    fn disjoint_translates_bound_product(seed in prop::collection::vec(any::<u8>(), 1..40)) {
        // Greedy independent subset of Ω_8 from random words.
        let mut s: Vec<VertexWord> = Vec::new();
        for b in seed {
            let v = VertexWord::new(u64::from(b), 8).unwrap();
            if !s.contains(&v) && s.iter().all(|u| !orthogonal(*u, v).unwrap()) {
                s.push(v);
            }
        }
        prop_assert!(check_independent(&s, GraphKind::Omega(8)).unwrap());
        let clique = sylvester_clique(3).unwrap();
        if translate_disjointness(&s, &clique).unwrap() {
            prop_assert!(s.len() * clique.size <= 256);
        }
    }
}
