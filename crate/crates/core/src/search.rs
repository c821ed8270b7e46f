//! Exhaustive search for independent sets of Y_n meeting the ratio bound.
//!
//! A tight set containing the base vertex has its characteristic vector in
//! the column space of Ĥ = [H | 𝟙] and vanishes on the base's neighbourhood,
//! so `z = Ĥy` with `y ∈ ker N̂ = rowspace B̂`. Hence `z` lies in the column
//! space of `ĤB̂ᵀ`, whose reduced column echelon form `C` has rank `n` and
//! unit pivot rows. Since `z` is 0/1 on the pivot rows, `z = Cx′` with
//! `x′ ∈ {0,1}^n`: all `2^n` candidates are scanned.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    binomial, is_y_vertex, orth_bits, psi_adjacent_bits, y_neighbours, y_vertices, Canon,
    GraphKind,
};
use crate::linalg::{EchelonResult, RationalMatrix};
use crate::serde_util;
use crate::spectral::{character, equality_condition_for_set, ratio_bound};
use crate::word::VertexWord;

const SEARCH_DIMENSIONS: [u32; 4] = [4, 8, 12, 16];

fn check_search_dimension(n: u32) -> Result<()> {
    if !SEARCH_DIMENSIONS.contains(&n) {
        return Err(Error::Unsupported(format!("search supports n in {{4, 8, 12, 16}}, got {n}")));
    }
    Ok(())
}

/// 2-subsets of `[n]` as words, in lexicographic order of `(i, j)`, `i < j`.
pub fn two_subsets(n: u32) -> Vec<u64> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (1u64 << i) | (1u64 << j)))
        .collect()
}

/// H: rows are the canonical Y_n vertices ascending, columns the 2-subsets,
/// entry `(−1)^{|A∩p|}`.
pub fn build_h(n: u32, canon: Canon) -> Result<(RationalMatrix, Vec<VertexWord>)> {
    check_search_dimension(n)?;
    let rows = y_vertices(n, canon)?;
    let cols = two_subsets(n);
    let h = RationalMatrix::from_i64(rows.len(), cols.len(), |r, c| {
        character(rows[r].bits(), cols[c])
    });
    Ok((h, rows))
}

pub fn build_h_hat(n: u32, canon: Canon) -> Result<(RationalMatrix, Vec<VertexWord>)> {
    let (h, rows) = build_h(n, canon)?;
    Ok((h.with_ones_column(), rows))
}

fn check_base(base: VertexWord, canon: Canon) -> Result<()> {
    if !is_y_vertex(base, canon) {
        return Err(Error::NotYVertex(base.to_hex(), "base is not a canonical Y_n vertex"));
    }
    Ok(())
}

/// N: rows of H at the canonical Y_n-neighbours of `base`.
pub fn build_n(
    n: u32,
    base: VertexWord,
    canon: Canon,
) -> Result<(RationalMatrix, Vec<VertexWord>)> {
    if n % 4 != 0 || n == 0 || n > 16 {
        return Err(Error::Unsupported(format!("N needs 4 | n <= 16, got {n}")));
    }
    if base.n() != n {
        return Err(Error::DimensionMismatch(base.n(), n));
    }
    check_base(base, canon)?;
    let rows = y_neighbours(base, canon)?;
    let cols = two_subsets(n);
    let m = RationalMatrix::from_i64(rows.len(), cols.len(), |r, c| {
        character(rows[r].bits(), cols[c])
    });
    Ok((m, rows))
}

pub fn build_n_hat(
    n: u32,
    base: VertexWord,
    canon: Canon,
) -> Result<(RationalMatrix, Vec<VertexWord>)> {
    let (m, rows) = build_n(n, base, canon)?;
    Ok((m.with_ones_column(), rows))
}

/// Vertex-edge incidence matrix of K_n (`n × C(n,2)`).
pub fn incidence_b(n: u32) -> Result<RationalMatrix> {
    if !(2..=64).contains(&n) {
        return Err(Error::BadDimension(n));
    }
    let cols = two_subsets(n);
    Ok(RationalMatrix::from_i64(n as usize, cols.len(), |r, c| {
        i64::from(cols[c] >> r & 1 == 1)
    }))
}

/// `B̂ = [B·D_b | 𝟙]` with `D_b = diag((−1)^{|b∩p|})`; for `b = ∅` this is
/// `[B | 𝟙]`. Its rows span `ker N̂` for the base `b`.
pub fn build_b_hat(n: u32, base: VertexWord) -> Result<RationalMatrix> {
    if base.n() != n {
        return Err(Error::DimensionMismatch(base.n(), n));
    }
    let b = incidence_b(n)?;
    let cols = two_subsets(n);
    let twisted = RationalMatrix::from_i64(b.rows(), b.cols(), |r, c| {
        i64::from(cols[c] >> r & 1 == 1) * character(base.bits(), cols[c])
    });
    Ok(twisted.with_ones_column())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub n: u32,
    pub base: VertexWord,
    pub n_hat_rows: usize,
    pub columns: usize,
    pub rank_b_hat: usize,
    pub rank_n_hat: usize,
    pub n_hat_b_hat_zero: bool,
    pub kernel_dim: usize,
}

/// Rank ledger for `ker N̂ = rowspace B̂`.
pub fn kernel_report(n: u32, base: VertexWord, canon: Canon) -> Result<KernelReport> {
    let (n_hat, _) = build_n_hat(n, base, canon)?;
    let b_hat = build_b_hat(n, base)?;
    let rank_n_hat = n_hat.rank();
    Ok(KernelReport {
        n,
        base,
        n_hat_rows: n_hat.rows(),
        columns: n_hat.cols(),
        rank_b_hat: b_hat.rank(),
        rank_n_hat,
        n_hat_b_hat_zero: n_hat.matmul(&b_hat.transpose())?.is_zero(),
        kernel_dim: n_hat.cols() - rank_n_hat,
    })
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub n: u32,
    pub base: VertexWord,
    pub canon: Canon,
    /// Row labels of `C`.
    pub rows: Vec<VertexWord>,
    pub echelon: EchelonResult,
}

/// Rank `C` must have. For `n = 4`, H (4×6) cannot have full column rank
/// and `ĤB̂ᵀ` collapses to rank 1.
pub fn expected_rank(n: u32) -> usize {
    if n == 4 {
        1
    } else {
        n as usize
    }
}

/// `C = rcef(Ĥ·B̂ᵀ)`.
pub fn reduce(n: u32, base: VertexWord, canon: Canon) -> Result<Reduction> {
    check_search_dimension(n)?;
    if base.n() != n {
        return Err(Error::DimensionMismatch(base.n(), n));
    }
    check_base(base, canon)?;
    let (h_hat, rows) = build_h_hat(n, canon)?;
    let b_hat = build_b_hat(n, base)?;
    let product = h_hat.matmul(&b_hat.transpose())?;
    drop(h_hat);
    let echelon = product.rcef();
    if echelon.rank != expected_rank(n) {
        return Err(Error::Verification(format!(
            "rank of C is {} for n={n}, expected {}",
            echelon.rank,
            expected_rank(n)
        )));
    }
    Ok(Reduction {
        n,
        base,
        canon,
        rows,
        echelon,
    })
}

/// A claimed independent set with recomputed properties.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndSetCertificate {
    pub kind: GraphKind,
    pub canon: Canon,
    pub base: VertexWord,
    pub vertices: Vec<VertexWord>,
    pub size: usize,
    pub independent: bool,
    pub contains_base: bool,
    pub meets_ratio_bound: bool,
    pub eigenspace_member: bool,
}

impl IndSetCertificate {
    /// Computes every flag from the vertex list. Vertices are sorted; the
    /// list must be duplicate-free and consist of vertices of `kind`.
    pub fn evaluate(
        kind: GraphKind,
        canon: Canon,
        base: VertexWord,
        mut vertices: Vec<VertexWord>,
    ) -> Result<Self> {
        kind.validate()?;
        vertices.sort_unstable();
        for v in vertices.iter().chain(std::iter::once(&base)) {
            if !kind.has_vertex(*v, canon) {
                return Err(Error::NotYVertex(v.to_hex(), "not a vertex of the graph"));
            }
        }
        let independent = check_independent(&vertices, kind)?;
        let n = kind.n();
        let size = vertices.len();
        let meets_ratio_bound = n % 4 == 0
            && matches!(kind, GraphKind::Omega(_) | GraphKind::Y(_))
            && ratio_bound(kind)?.bound == BigRational::from_integer(size.into());
        let eigenspace_member = independent
            && n % 4 == 0
            && n <= 16
            && matches!(kind, GraphKind::Omega(_) | GraphKind::Y(_))
            && equality_condition_for_set(kind, canon, &vertices)?;
        Ok(Self {
            kind,
            canon,
            base,
            contains_base: vertices.binary_search(&base).is_ok(),
            size,
            independent,
            meets_ratio_bound,
            eigenspace_member,
            vertices,
        })
    }
}

/// Pairwise scan; duplicates are an error.
pub fn check_independent(vertices: &[VertexWord], kind: GraphKind) -> Result<bool> {
    kind.validate()?;
    let n = kind.n();
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateVertex(w[0].to_hex()));
    }
    if let Some(v) = vertices.iter().find(|v| v.n() != n) {
        return Err(Error::DimensionMismatch(v.n(), n));
    }
    if let (GraphKind::Y(_), Some(first)) = (kind, vertices.first()) {
        let canon = if first.bits() & 1 == 0 { Canon::Clear } else { Canon::Set };
        if let Some(v) = vertices.iter().find(|v| !is_y_vertex(**v, canon)) {
            return Err(Error::NotYVertex(v.to_hex(), "not a canonical Y_n vertex"));
        }
    }
    let bits: Vec<u64> = vertices.iter().map(|v| v.bits()).collect();
    let adjacent = |a: u64, b: u64| match kind {
        GraphKind::Omega(_) | GraphKind::Y(_) => orth_bits(a, b, n),
        GraphKind::Psi(_) => psi_adjacent_bits(a, b, n),
    };
    let clash = bits
        .par_iter()
        .enumerate()
        .any(|(i, &a)| bits[i + 1..].iter().any(|&b| adjacent(a, b)));
    Ok(!clash)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: u32,
    pub base: VertexWord,
    pub canon: Canon,
    pub jobs: usize,
}

impl SearchConfig {
    /// Base `∅` (the all-`+1` vector), bit-0-clear representatives.
    pub fn new(n: u32) -> Result<Self> {
        Ok(Self {
            n,
            base: VertexWord::zero(n)?,
            canon: Canon::Clear,
            jobs: 1,
        })
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    /// Switches canonicalisation; the base is moved to its representative.
    pub fn with_canon(mut self, canon: Canon) -> Self {
        self.canon = canon;
        self.base = VertexWord::new_unchecked(canon.apply(self.base.bits(), self.n), self.n);
        self
    }

    pub fn with_base(mut self, base: VertexWord) -> Self {
        self.base = base;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub n: u32,
    pub base_vertex: VertexWord,
    pub canon: Canon,
    pub rank: usize,
    pub candidates_total: u64,
    pub count_01_valued: u64,
    pub count_correct_weight: u64,
    pub count_independent: u64,
    pub count_containing_base: u64,
    /// `2^(n−2)/n`, the Y_n ratio bound.
    #[serde(serialize_with = "serde_util::rational")]
    pub target_weight: BigRational,
    pub certificates: Vec<IndSetCertificate>,
    pub wall_time_ms: u64,
}

#[derive(Default)]
struct Tally {
    zero_one: u64,
    weight: u64,
    found: Vec<(u64, Vec<VertexWord>)>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.zero_one += other.zero_one;
        self.weight += other.weight;
        self.found.extend(other.found);
        self
    }
}

/// `C` scaled to integers: entry `(r, j)` times the common denominator.
struct ScaledEchelon {
    denominator: i64,
    rank: usize,
    /// Non-pivot rows: `(row index, scaled entries of the pivot columns)`.
    free_rows: Vec<(usize, Vec<i64>)>,
    pivot_rows: Vec<usize>,
}

impl ScaledEchelon {
    fn new(e: &EchelonResult) -> Result<Self> {
        let overflow = || Error::Verification("echelon entries exceed i64 scaling".into());
        let den: BigInt = e.matrix.common_denominator();
        let denominator = den.to_i64().ok_or_else(overflow)?;
        let mut is_pivot = vec![false; e.matrix.rows()];
        for &r in &e.pivot_rows {
            is_pivot[r] = true;
        }
        let mut free_rows = Vec::new();
        for r in (0..e.matrix.rows()).filter(|&r| !is_pivot[r]) {
            let row: Option<Vec<i64>> = (0..e.rank)
                .map(|j| {
                    let q = e.matrix.get(r, j) * BigRational::from_integer(den.clone());
                    q.to_integer().to_i64()
                })
                .collect();
            let row = row.ok_or_else(overflow)?;
            if row.iter().any(|&x| x != 0) {
                free_rows.push((r, row));
            }
        }
        Ok(Self {
            denominator,
            rank: e.rank,
            free_rows,
            pivot_rows: e.pivot_rows.clone(),
        })
    }

    /// Rows where `z = Cx′` equals 1, or `None` if some entry is not 0/1.
    fn support(&self, x: u64) -> Option<Vec<usize>> {
        let mut ones: Vec<usize> = (0..self.rank)
            .filter(|&j| x >> j & 1 == 1)
            .map(|j| self.pivot_rows[j])
            .collect();
        for (r, row) in &self.free_rows {
            let mut acc: i64 = 0;
            let mut bits = x;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                acc += row[j];
                bits &= bits - 1;
            }
            if acc == self.denominator {
                ones.push(*r);
            } else if acc != 0 {
                return None;
            }
        }
        Some(ones)
    }
}

/// Scans every `x′ ∈ {0,1}^rank` and certifies the tight independent sets.
pub fn enumerate(cfg: &SearchConfig) -> Result<SearchOutcome> {
    let start = Instant::now();
    let n = cfg.n;
    let reduction = reduce(n, cfg.base, cfg.canon)?;
    enumerate_reduced(cfg, &reduction, start)
}

fn enumerate_reduced(
    cfg: &SearchConfig,
    reduction: &Reduction,
    start: Instant,
) -> Result<SearchOutcome> {
    let n = cfg.n;
    let kind = GraphKind::Y(n);
    let scaled = ScaledEchelon::new(&reduction.echelon)?;
    let target_weight = ratio_bound(kind)?.bound;
    let target = target_weight
        .is_integer()
        .then(|| target_weight.to_integer().to_usize())
        .flatten();
    let total: u64 = 1 << scaled.rank;
    let jobs = cfg.jobs.max(1);
    let chunks = (jobs as u64 * 8).min(total);
    let step = total.div_ceil(chunks);
    let ranges: Vec<(u64, u64)> = (0..chunks)
        .map(|i| (i * step, ((i + 1) * step).min(total)))
        .filter(|(a, b)| a < b)
        .collect();

    let rows = &reduction.rows;
    let scan = |&(lo, hi): &(u64, u64)| -> Tally {
        let mut tally = Tally::default();
        for x in lo..hi {
            let Some(support) = scaled.support(x) else {
                continue;
            };
            tally.zero_one += 1;
            if Some(support.len()) != target {
                continue;
            }
            tally.weight += 1;
            let set: Vec<VertexWord> = support.iter().map(|&r| rows[r]).collect();
            // Adjacency of canonical representatives cannot fail here.
            if check_independent(&set, kind).unwrap_or(false) {
                tally.found.push((x, set));
            }
        }
        tally
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    let mut tally = pool.install(|| {
        ranges
            .par_iter()
            .map(scan)
            .reduce(Tally::default, Tally::merge)
    });
    tally.found.sort_by_key(|(x, _)| *x);

    let certificates = tally
        .found
        .into_iter()
        .map(|(_, set)| IndSetCertificate::evaluate(kind, cfg.canon, cfg.base, set))
        .collect::<Result<Vec<_>>>()?;
    let count_containing_base = certificates.iter().filter(|c| c.contains_base).count() as u64;
    Ok(SearchOutcome {
        n,
        base_vertex: cfg.base,
        canon: cfg.canon,
        rank: scaled.rank,
        candidates_total: total,
        count_01_valued: tally.zero_one,
        count_correct_weight: tally.weight,
        count_independent: certificates.len() as u64,
        count_containing_base,
        target_weight,
        certificates,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

/// Number of rows of N̂: `binom(n, n/2) / 2`.
pub fn neighbourhood_size(n: u32) -> u64 {
    (binomial(u64::from(n), u64::from(n / 2)) >> 1u32)
        .to_u64()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn w(bits: u64, n: u32) -> VertexWord {
        VertexWord::new(bits, n).unwrap()
    }

    #[test]
    fn h_shapes() {
        let (h8, rows) = build_h(8, Canon::Clear).unwrap();
        assert_eq!((h8.rows(), h8.cols()), (64, 28));
        assert_eq!(rows[0].bits(), 0);
        assert!((0..28).all(|c| h8.get(0, c).is_integer() && *h8.get(0, c).numer() == 1.into()));
        assert!(build_h(6, Canon::Clear).is_err());
    }

    #[test]
    fn n_hat_shape_and_kernel() {
        let (nh, _) = build_n_hat(8, w(0, 8), Canon::Clear).unwrap();
        assert_eq!((nh.rows(), nh.cols()), (35, 29));
        let b_hat = build_b_hat(8, w(0, 8)).unwrap();
        assert!(nh.matmul(&b_hat.transpose()).unwrap().is_zero());
        assert_eq!(neighbourhood_size(16), 6435);
    }

    #[test]
    fn kernel_report_n8() {
        let k = kernel_report(8, w(0, 8), Canon::Clear).unwrap();
        assert_eq!(k.rank_b_hat, 8);
        assert_eq!(k.rank_n_hat, 21);
        assert_eq!(k.kernel_dim, 8);
        assert!(k.n_hat_b_hat_zero);
    }

    #[test]
    fn reduce_n8_rank() {
        let r = reduce(8, w(0, 8), Canon::Clear).unwrap();
        assert_eq!((r.echelon.matrix.rows(), r.echelon.rank), (64, 8));
        assert_eq!(r.echelon.pivot_rows[0], 0);
    }

    #[test]
    fn reduce_n4_is_degenerate() {
        let r = reduce(4, w(0, 4), Canon::Clear).unwrap();
        assert_eq!(r.echelon.rank, 1);
    }

    #[test]
    fn enumerate_small() {
        let out4 = enumerate(&SearchConfig::new(4).unwrap()).unwrap();
        assert_eq!(out4.count_independent, 1);
        assert_eq!(out4.certificates[0].vertices, vec![w(0, 4)]);

        let out8 = enumerate(&SearchConfig::new(8).unwrap()).unwrap();
        assert_eq!(out8.candidates_total, 256);
        assert_eq!(out8.count_independent, 8);
        for c in &out8.certificates {
            assert_eq!(c.size, 8);
            assert!(c.independent && c.meets_ratio_bound && c.eigenspace_member);
        }
        assert!(!out8.target_weight.is_zero());
    }

    #[test]
    fn check_independent_cases() {
        let kind = GraphKind::Y(8);
        assert!(check_independent(&[], kind).unwrap());
        assert!(!check_independent(&[w(0, 8), w(0b0001_1110, 8)], kind).unwrap());
        assert!(check_independent(&[w(0, 8), w(0b0110, 8)], kind).unwrap());
        assert!(matches!(
            check_independent(&[w(0, 8), w(0, 8)], kind),
            Err(Error::DuplicateVertex(_))
        ));
    }

    #[test]
    fn certificate_rejects_foreign_vertices() {
        let r = IndSetCertificate::evaluate(GraphKind::Y(8), Canon::Clear, w(0, 8), vec![w(1, 8)]);
        assert!(r.is_err());
    }
}
