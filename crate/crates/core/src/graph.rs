//! Implicit orthogonality graphs: Ω_n, its antipodal quotient Y_n and the
//! recursive skeleton Ψ_n.
//!
//! Adjacency is never materialised. Two words are adjacent in Ω_n when their
//! Hamming distance is exactly `n/2`; Y_n lives on the even words of Ω_n with
//! one representative per antipodal pair `{x, x̄}`; Ψ_n (for `n` a power of
//! two) is the disjoint union of joins obtained from the doubling map
//! `x ↦ x^(r) = (x, x∘r)`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serde_util;
use crate::word::{mask, words_of_weight, VertexWord};

/// Largest dimension for which vertex sets are scanned exhaustively.
pub const EXHAUSTIVE_MAX_N: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "graph", content = "n", rename_all = "lowercase")]
pub enum GraphKind {
    Omega(u32),
    Y(u32),
    Psi(u32),
}

impl GraphKind {
    pub fn n(self) -> u32 {
        match self {
            GraphKind::Omega(n) | GraphKind::Y(n) | GraphKind::Psi(n) => n,
        }
    }

    pub fn validate(self) -> Result<()> {
        let n = self.n();
        if n == 0 || n > 64 {
            return Err(Error::BadDimension(n));
        }
        match self {
            GraphKind::Omega(_) => Ok(()),
            GraphKind::Y(n) if n % 4 != 0 => {
                Err(Error::Unsupported(format!("Y_{n} needs n divisible by 4")))
            }
            GraphKind::Psi(n) if !n.is_power_of_two() => {
                Err(Error::Unsupported(format!("Psi_{n} needs n a power of two")))
            }
            _ => Ok(()),
        }
    }

    /// Vertex list in ascending bit order (Y uses the given canonicalisation).
    pub fn vertices(self, canon: Canon) -> Result<Vec<VertexWord>> {
        self.validate()?;
        let n = self.n();
        if n > 24 {
            return Err(Error::Unsupported(format!("cannot list vertices for n={n}")));
        }
        Ok(match self {
            GraphKind::Y(n) => y_vertices(n, canon)?,
            _ => (0..1u64 << n)
                .map(|b| VertexWord::new_unchecked(b, n))
                .collect(),
        })
    }

    /// Whether `v` is a vertex of this graph.
    pub fn has_vertex(self, v: VertexWord, canon: Canon) -> bool {
        v.n() == self.n()
            && match self {
                GraphKind::Y(_) => is_y_vertex(v, canon),
                _ => true,
            }
    }

    pub fn adjacent(self, u: VertexWord, v: VertexWord) -> Result<bool> {
        self.validate()?;
        if u.n() != self.n() || v.n() != self.n() {
            return Err(Error::DimensionMismatch(u.n(), v.n()));
        }
        match self {
            GraphKind::Omega(_) => orthogonal(u, v),
            GraphKind::Y(_) => y_adjacent(u, v),
            GraphKind::Psi(_) => psi_adjacent(u, v),
        }
    }
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphKind::Omega(n) => write!(f, "Omega_{n}"),
            GraphKind::Y(n) => write!(f, "Y_{n}"),
            GraphKind::Psi(n) => write!(f, "Psi_{n}"),
        }
    }
}

/// Which member of an antipodal pair `{x, x̄}` represents it in Y_n.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Canon {
    /// The member with bit 0 clear.
    #[default]
    Clear,
    /// The member with bit 0 set.
    Set,
}

impl Canon {
    pub fn opposite(self) -> Self {
        match self {
            Canon::Clear => Canon::Set,
            Canon::Set => Canon::Clear,
        }
    }

    #[inline]
    fn accepts(self, bits: u64) -> bool {
        (bits & 1 == 1) == (self == Canon::Set)
    }

    #[inline]
    pub(crate) fn apply(self, bits: u64, n: u32) -> u64 {
        if self.accepts(bits) {
            bits
        } else {
            bits ^ mask(n)
        }
    }
}

#[inline]
pub(crate) fn orth_bits(a: u64, b: u64, n: u32) -> bool {
    n % 2 == 0 && (a ^ b).count_ones() == n / 2
}

pub fn orthogonal(u: VertexWord, v: VertexWord) -> Result<bool> {
    if u.n() != v.n() {
        return Err(Error::DimensionMismatch(u.n(), v.n()));
    }
    Ok(orth_bits(u.bits(), v.bits(), u.n()))
}

/// Ω_n-neighbours of `v`, generated from the weight-`n/2` masks.
pub fn omega_neighbours(v: VertexWord) -> impl Iterator<Item = VertexWord> {
    let n = v.n();
    let masks = (n % 2 == 0).then(|| words_of_weight(n, n / 2));
    masks
        .into_iter()
        .flatten()
        .map(move |m| VertexWord::new_unchecked(v.bits() ^ m, n))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn check_y_dimension(n: u32) -> Result<()> {
    if n == 0 || n > 64 || n % 4 != 0 {
        return Err(Error::Unsupported(format!("Y_n needs 4 | n, got n={n}")));
    }
    Ok(())
}

pub fn is_y_vertex(v: VertexWord, canon: Canon) -> bool {
    v.n() % 4 == 0 && v.is_even() && canon.accepts(v.bits())
}

/// Canonical Y_n representative (bit 0 clear).
pub fn y_canonical(v: VertexWord) -> Result<VertexWord> {
    y_canonical_with(v, Canon::Clear)
}

pub fn y_canonical_with(v: VertexWord, canon: Canon) -> Result<VertexWord> {
    check_y_dimension(v.n())?;
    if !v.is_even() {
        return Err(Error::NotYVertex(v.to_hex(), "odd weight"));
    }
    Ok(VertexWord::new_unchecked(canon.apply(v.bits(), v.n()), v.n()))
}

/// Adjacency in Y_n. Both arguments must be representatives under the same
/// canonicalisation.
pub fn y_adjacent(u: VertexWord, v: VertexWord) -> Result<bool> {
    if u.n() != v.n() {
        return Err(Error::DimensionMismatch(u.n(), v.n()));
    }
    check_y_dimension(u.n())?;
    for w in [u, v] {
        if !w.is_even() {
            return Err(Error::NotYVertex(w.to_hex(), "odd weight"));
        }
    }
    if (u.bits() ^ v.bits()) & 1 == 1 {
        return Err(Error::NotYVertex(v.to_hex(), "mixed canonicalisation"));
    }
    Ok(orth_bits(u.bits(), v.bits(), u.n()))
}

/// Canonical Y_n vertices in ascending bit order; `2^(n-2)` of them.
pub fn y_vertices(n: u32, canon: Canon) -> Result<Vec<VertexWord>> {
    check_y_dimension(n)?;
    if n > 24 {
        return Err(Error::Unsupported(format!("cannot list Y_{n}")));
    }
    Ok((0..1u64 << n)
        .filter(|&b| b.count_ones() % 2 == 0 && canon.accepts(b))
        .map(|b| VertexWord::new_unchecked(b, n))
        .collect())
}

/// Canonical Y_n-neighbours of a canonical vertex, ascending.
pub fn y_neighbours(v: VertexWord, canon: Canon) -> Result<Vec<VertexWord>> {
    if !is_y_vertex(v, canon) {
        return Err(Error::NotYVertex(v.to_hex(), "not canonical"));
    }
    let n = v.n();
    let mut out: Vec<VertexWord> = words_of_weight(n, n / 2)
        .map(|m| v.bits() ^ m)
        .filter(|&b| canon.accepts(b))
        .map(|b| VertexWord::new_unchecked(b, n))
        .collect();
    out.sort_unstable();
    Ok(out)
}

fn check_psi_dimension(n: u32) -> Result<()> {
    if n == 0 || n > 64 || !n.is_power_of_two() {
        return Err(Error::Unsupported(format!("Psi_n needs n a power of two, got {n}")));
    }
    Ok(())
}

/// `x^(r)`: `x` in the low half, `x XOR r` in the high half.
#[inline]
pub(crate) fn embed(x: u64, r: u64, n: u32) -> u64 {
    x | ((x ^ r) << n)
}

pub(crate) fn psi_adjacent_bits(a: u64, b: u64, n: u32) -> bool {
    if n == 1 {
        return false;
    }
    let half = n / 2;
    let m = mask(half);
    let (xa, xb) = (a & m, b & m);
    let ra = xa ^ (a >> half);
    let rb = xb ^ (b >> half);
    if ra == rb {
        psi_adjacent_bits(xa, xb, half)
    } else {
        ra ^ rb == m
    }
}

pub fn psi_adjacent(u: VertexWord, v: VertexWord) -> Result<bool> {
    if u.n() != v.n() {
        return Err(Error::DimensionMismatch(u.n(), v.n()));
    }
    check_psi_dimension(u.n())?;
    Ok(psi_adjacent_bits(u.bits(), v.bits(), u.n()))
}

fn psi_neighbour_bits(x: u64, n: u32) -> Vec<u64> {
    if n == 1 {
        return Vec::new();
    }
    let half = n / 2;
    let m = mask(half);
    let lo = x & m;
    let r = lo ^ (x >> half);
    let mut out: Vec<u64> = psi_neighbour_bits(lo, half)
        .into_iter()
        .map(|y| embed(y, r, half))
        .collect();
    out.extend((0..=m).map(|y| embed(y, r ^ m, half)));
    out
}

/// Ψ_n-neighbours of `v` (`n <= 32`).
pub fn psi_neighbours(v: VertexWord) -> Result<Vec<VertexWord>> {
    check_psi_dimension(v.n())?;
    if v.n() > 32 {
        return Err(Error::Unsupported("Psi neighbourhoods above n=32".into()));
    }
    let mut out: Vec<VertexWord> = psi_neighbour_bits(v.bits(), v.n())
        .into_iter()
        .map(|b| VertexWord::new_unchecked(b, v.n()))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Degree of the (regular) graph Ψ_n: `deg(Ψ_2n) = deg(Ψ_n) + 2^n`.
pub fn psi_degree(n: u32) -> Result<BigUint> {
    check_psi_dimension(n)?;
    let mut deg = BigUint::zero();
    let mut m = 1u32;
    while m < n {
        deg += BigUint::one() << m;
        m *= 2;
    }
    Ok(deg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityClass {
    Edgeless,
    Bipartite,
    TwoIsomorphicComponents,
}

impl ParityClass {
    pub fn of(n: u32) -> Self {
        match n % 4 {
            1 | 3 => ParityClass::Edgeless,
            2 => ParityClass::Bipartite,
            _ => ParityClass::TwoIsomorphicComponents,
        }
    }
}

/// Closed-form counts for a graph. `parity_class` always describes the
/// ambient Ω_n.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphStats {
    pub kind: GraphKind,
    pub n: u32,
    #[serde(serialize_with = "serde_util::biguint")]
    pub vertex_count: BigUint,
    #[serde(serialize_with = "serde_util::biguint")]
    pub edge_count: BigUint,
    #[serde(serialize_with = "serde_util::biguint")]
    pub degree: BigUint,
    pub parity_class: ParityClass,
    #[serde(serialize_with = "serde_util::biguint")]
    pub component_count: BigUint,
}

pub fn structure_report(kind: GraphKind) -> Result<GraphStats> {
    kind.validate()?;
    let n = kind.n();
    let two_pow = |e: u32| BigUint::one() << e;
    let half_binom = || binomial(u64::from(n), u64::from(n / 2));
    let (vertex_count, degree, component_count) = match kind {
        GraphKind::Omega(_) => match n % 4 {
            1 | 3 => (two_pow(n), BigUint::zero(), two_pow(n)),
            2 => (two_pow(n), half_binom(), BigUint::one()),
            _ => (two_pow(n), half_binom(), BigUint::from(2u32)),
        },
        GraphKind::Y(_) => (two_pow(n - 2), half_binom() >> 1u32, BigUint::one()),
        GraphKind::Psi(_) => {
            let components = if n == 1 { BigUint::from(2u32) } else { two_pow(n / 2 - 1) };
            (two_pow(n), psi_degree(n)?, components)
        }
    };
    let edge_count = (&vertex_count * &degree) >> 1u32;
    Ok(GraphStats {
        kind,
        n,
        vertex_count,
        edge_count,
        degree,
        parity_class: ParityClass::of(n),
        component_count,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AntipodalCheck {
    pub n: u32,
    pub holds: bool,
    /// `(x, y)` violating `x~y ⟺ x~ȳ`, or `(x, x̄)` if `x ~ x̄`.
    pub witness: Option<(VertexWord, VertexWord)>,
}

/// Exhaustively checks that every neighbourhood is closed under negation and
/// that no vertex is adjacent to its negation.
pub fn antipodal_structure_check(n: u32) -> Result<AntipodalCheck> {
    if n % 4 != 0 || n == 0 || n > EXHAUSTIVE_MAX_N {
        return Err(Error::Unsupported(format!("antipodal check needs 4 | n <= 16, got {n}")));
    }
    let full = mask(n);
    let witness = (0..1u64 << n).into_par_iter().find_map_first(|x| {
        if orth_bits(x, x ^ full, n) {
            return Some((x, x ^ full));
        }
        (0..1u64 << n)
            .find(|&y| orth_bits(x, y, n) != orth_bits(x, y ^ full, n))
            .map(|y| (x, y))
    });
    Ok(AntipodalCheck {
        n,
        holds: witness.is_none(),
        witness: witness
            .map(|(a, b)| (VertexWord::new_unchecked(a, n), VertexWord::new_unchecked(b, n))),
    })
}

/// Checks that translation by the word with only bit 0 set maps the even
/// component of Ω_n onto the odd one, preserving adjacency both ways.
pub fn parity_translation_check(n: u32) -> Result<bool> {
    if n % 4 != 0 || n == 0 || n > 12 {
        return Err(Error::Unsupported(format!("translation check needs 4 | n <= 12, got {n}")));
    }
    let evens: Vec<u64> = (0..1u64 << n).filter(|b| b.count_ones() % 2 == 0).collect();
    let odd_images_ok = evens.iter().all(|&x| (x ^ 1).count_ones() % 2 == 1);
    let adjacency_ok = evens.par_iter().all(|&x| {
        evens
            .iter()
            .all(|&y| orth_bits(x, y, n) == orth_bits(x ^ 1, y ^ 1, n))
    });
    // No edge may cross between the components.
    let no_cross = evens
        .par_iter()
        .all(|&x| (0..1u64 << n).all(|y| y.count_ones() % 2 == 0 || !orth_bits(x, y, n)));
    Ok(odd_images_ok && adjacency_ok && no_cross)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleCoverReport {
    pub n: u32,
    /// Number of embedded copies Ω_n^(r), one per `r`.
    pub copies: u64,
    /// Number of joins Ω_n^(r) + Ω_n^(−r).
    pub join_pairs: u64,
    pub partition_ok: bool,
    pub induced_ok: bool,
    pub join_complete_ok: bool,
    pub cross_edges_checked: u64,
}

/// Verifies that `{x^(r)}` partitions V(Ω_2n) into induced copies of Ω_n
/// and that copies `r` and `−r` are completely joined.
pub fn double_cover_partition(n: u32) -> Result<DoubleCoverReport> {
    if n == 0 || 2 * n > EXHAUSTIVE_MAX_N {
        return Err(Error::Unsupported(format!("double cover needs 2n <= 16, got n={n}")));
    }
    let m = mask(n);
    let size = 1usize << n;
    let mut seen = vec![false; 1 << (2 * n)];
    let mut partition_ok = true;
    for r in 0..=m {
        for x in 0..=m {
            let w = embed(x, r, n) as usize;
            partition_ok &= !seen[w];
            seen[w] = true;
        }
    }
    partition_ok &= seen.iter().all(|&s| s);

    let induced_ok = (0..=m).into_par_iter().all(|r| {
        (0..=m).all(|x| {
            (0..=m).all(|y| orth_bits(embed(x, r, n), embed(y, r, n), 2 * n) == orth_bits(x, y, n))
        })
    });

    let reps: Vec<u64> = (0..=m).filter(|r| r & 1 == 0).collect();
    let join_complete_ok = reps.par_iter().all(|&r| {
        (0..=m).all(|x| (0..=m).all(|y| orth_bits(embed(x, r, n), embed(y, r ^ m, n), 2 * n)))
    });
    Ok(DoubleCoverReport {
        n,
        copies: size as u64,
        join_pairs: reps.len() as u64,
        partition_ok,
        induced_ok,
        join_complete_ok,
        cross_edges_checked: reps.len() as u64 * (size as u64) * (size as u64),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsiRow {
    pub n: u64,
    #[serde(serialize_with = "serde_util::biguint")]
    pub vertices: BigUint,
    #[serde(serialize_with = "serde_util::biguint")]
    pub psi_edges: BigUint,
    #[serde(serialize_with = "serde_util::biguint")]
    pub omega_edges: BigUint,
    /// `|E(Ψ_n)| / |E(Ω_n)|`; absent when Ω_n has no edges.
    #[serde(serialize_with = "serde_util::opt_rational")]
    pub ratio: Option<BigRational>,
}

/// Edge counts of Ψ_n against Ω_n for `n = 2^j`, `j = 0..=k`.
pub fn psi_stats(k: u32) -> Result<Vec<PsiRow>> {
    if k > 8 {
        return Err(Error::Unsupported(format!("psi_stats supports k <= 8, got {k}")));
    }
    let mut rows = Vec::with_capacity(k as usize + 1);
    let mut psi_edges = BigUint::zero();
    for j in 0..=k {
        let n = 1u64 << j;
        if j > 0 {
            // E(Ψ_2m) = 2^(m-1) * (2 E(Ψ_m) + 4^m)
            let m = n / 2;
            let four_m = BigUint::one() << (2 * m);
            psi_edges = ((psi_edges << 1u32) + four_m) << (m - 1);
        }
        let omega_edges = if n % 2 == 0 {
            binomial(n, n / 2) << (n - 1)
        } else {
            BigUint::zero()
        };
        let ratio = (!omega_edges.is_zero()).then(|| {
            BigRational::new(psi_edges.clone().into(), omega_edges.clone().into())
        });
        rows.push(PsiRow {
            n,
            vertices: BigUint::one() << n,
            psi_edges: psi_edges.clone(),
            omega_edges,
            ratio,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiSpanningCheck {
    pub n: u32,
    pub spanning: bool,
    pub psi_edges_counted: u64,
}

/// Exhaustively checks Ψ_n ⊆ Ω_n and counts Ψ_n's edges (`n <= 8`).
pub fn psi_spanning_check(n: u32) -> Result<PsiSpanningCheck> {
    check_psi_dimension(n)?;
    if n > 8 {
        return Err(Error::Unsupported(format!("pairwise Psi scan needs n <= 8, got {n}")));
    }
    let mut spanning = true;
    let mut edges = 0u64;
    for a in 0..1u64 << n {
        for b in a + 1..1u64 << n {
            if psi_adjacent_bits(a, b, n) {
                edges += 1;
                spanning &= orth_bits(a, b, n);
            }
        }
    }
    Ok(PsiSpanningCheck {
        n,
        spanning,
        psi_edges_counted: edges,
    })
}
