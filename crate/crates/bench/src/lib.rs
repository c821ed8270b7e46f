//! Fixtures shared by the kernel benchmarks.

use ortho_core::search::{reduce, Reduction};
use ortho_core::{Canon, VertexWord};

/// Tight independent set of Y_8 from the exhaustive search.
pub fn y8_tight_set() -> Vec<VertexWord> {
    let cfg = ortho_core::SearchConfig::new(8).expect("n = 8 is valid");
    ortho_core::search::enumerate(&cfg)
        .expect("search over Y_8 succeeds")
        .certificates
        .swap_remove(0)
        .vertices
}

pub fn reduction(n: u32) -> Reduction {
    reduce(n, VertexWord::zero(n).expect("valid n"), Canon::Clear).expect("reduction succeeds")
}

/// Every even word of Ω_n, as a stress set for pairwise scans.
pub fn even_words(n: u32) -> Vec<VertexWord> {
    (0..1u64 << n)
        .filter(|b| b.count_ones() % 2 == 0)
        .map(|b| VertexWord::new(b, n).expect("word fits"))
        .collect()
}
