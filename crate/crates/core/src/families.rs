//! Explicit independent-set families: the Galliard family F_n in Y_n, the
//! odd-small family S_n in Ω_n, the symmetric-difference map between them,
//! lifting Y_n sets to Ω_n, and the `2^n/2^k` recursion bound.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{binomial, orth_bits, y_vertices, Canon, GraphKind};
use crate::search::{check_independent, IndSetCertificate};
use crate::serde_util;
use crate::spectral::ratio_bound;
use crate::word::{mask, words_of_weight, VertexWord};

/// Member lists larger than this are omitted from reports.
pub const MEMBER_LIST_LIMIT: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Galliard,
    OddSmall,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReport {
    pub family: FamilyKind,
    pub n: u32,
    /// `c = n/4 − 1` for Galliard, `m = n/4` for odd-small.
    pub parameter: u32,
    pub graph: GraphKind,
    pub members: Option<Vec<VertexWord>>,
    /// Qualifying subsets before identifying antipodes.
    pub raw_count: usize,
    pub size: usize,
    /// Closed-form count, where one is known.
    #[serde(serialize_with = "serde_util::biguint")]
    pub formula_size: BigUint,
    pub independent: bool,
    /// No vertex can be added; measured for `n <= 16`.
    pub maximal: Option<bool>,
    pub meets_ratio_bound: bool,
    /// Size of the lift to Ω_n (`4·size` for Y-sets) or of the Ω-set itself.
    pub omega_size: usize,
}

impl FamilyReport {
    pub fn member_words(&self) -> Option<&[VertexWord]> {
        self.members.as_deref()
    }
}

/// Raw membership in F_n: `|F|` even and at most `4c`, and
/// `|F ∩ [c]| ≥ |F \ [c]|`.
pub fn galliard_member(bits: u64, n: u32) -> bool {
    let c = n / 4 - 1;
    let head = mask(c);
    let size = bits.count_ones();
    let inside = (bits & head).count_ones();
    size % 2 == 0 && size / 2 <= 2 * c && inside >= size - inside
}

fn check_galliard_dimension(n: u32) -> Result<()> {
    if n != 8 && n != 16 {
        return Err(Error::Unsupported(format!("Galliard family for n in {{8, 16}}, got {n}")));
    }
    Ok(())
}

fn raw_galliard(n: u32) -> Vec<u64> {
    (0..1u64 << n).filter(|&b| galliard_member(b, n)).collect()
}

/// Every vertex of `universe` outside `members` is adjacent to some member.
fn is_maximal(universe: &[VertexWord], members: &[VertexWord], n: u32) -> bool {
    let mut sorted: Vec<u64> = members.iter().map(|v| v.bits()).collect();
    sorted.sort_unstable();
    universe.par_iter().all(|v| {
        sorted.binary_search(&v.bits()).is_ok()
            || sorted.iter().any(|&m| orth_bits(m, v.bits(), n))
    })
}

pub fn galliard_family(n: u32) -> Result<FamilyReport> {
    check_galliard_dimension(n)?;
    let kind = GraphKind::Y(n);
    let raw = raw_galliard(n);
    let mut members: Vec<VertexWord> = raw
        .iter()
        .map(|&b| VertexWord::new_unchecked(Canon::Clear.apply(b, n), n))
        .collect();
    members.sort_unstable();
    members.dedup();
    let independent = check_independent(&members, kind)?;
    let universe = y_vertices(n, Canon::Clear)?;
    let maximal = is_maximal(&universe, &members, n);
    let bound = ratio_bound(kind)?.bound;
    let size = members.len();
    Ok(FamilyReport {
        family: FamilyKind::Galliard,
        n,
        parameter: n / 4 - 1,
        graph: kind,
        raw_count: raw.len(),
        size,
        formula_size: BigUint::from(raw.len()),
        independent,
        maximal: Some(maximal),
        meets_ratio_bound: BigRational::from_integer(size.into()) == bound,
        omega_size: 4 * size,
        members: (size <= MEMBER_LIST_LIMIT).then_some(members),
    })
}

/// `Σ binom(n, j)` over `j < m` with `j ≢ m (mod 2)`.
pub fn s_family_formula(n: u32) -> BigUint {
    let m = n / 4;
    (0..m)
        .filter(|j| j % 2 != m % 2)
        .map(|j| binomial(u64::from(n), u64::from(j)))
        .sum()
}

/// S_n for `n = 4m`: subsets with `|F| ≢ m (mod 2)` and `|F| < m`, an
/// independent set of Ω_n.
pub fn s_family(n: u32) -> Result<FamilyReport> {
    if n == 0 || n % 4 != 0 || n > 24 {
        return Err(Error::Unsupported(format!("S_n for 4 | n <= 24, got {n}")));
    }
    let m = n / 4;
    let kind = GraphKind::Omega(n);
    let mut members: Vec<VertexWord> = (0..m)
        .filter(|j| j % 2 != m % 2)
        .flat_map(|j| words_of_weight(n, j))
        .map(|b| VertexWord::new_unchecked(b, n))
        .collect();
    members.sort_unstable();
    let independent = check_independent(&members, kind)?;
    let maximal = (n <= 16).then(|| {
        let universe = kind.vertices(Canon::Clear).expect("n <= 16");
        is_maximal(&universe, &members, n)
    });
    let bound = ratio_bound(kind)?.bound;
    let size = members.len();
    Ok(FamilyReport {
        family: FamilyKind::OddSmall,
        n,
        parameter: m,
        graph: kind,
        raw_count: size,
        size,
        formula_size: s_family_formula(n),
        independent,
        maximal,
        meets_ratio_bound: BigRational::from_integer(size.into()) == bound,
        omega_size: size,
        members: (size <= MEMBER_LIST_LIMIT).then_some(members),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymdiffReport {
    pub n: u32,
    pub c: u32,
    pub image_size: usize,
    pub target_size: usize,
    pub equal: bool,
    /// A subset in one collection but not the other.
    pub witness: Option<VertexWord>,
}

/// Checks `{F △ [c] : F ∈ F_n} = {G : |G| odd, |G| ≤ c}`.
pub fn symdiff_transform_check(n: u32) -> Result<SymdiffReport> {
    check_galliard_dimension(n)?;
    let c = n / 4 - 1;
    let head = mask(c);
    let mut image: Vec<u64> = raw_galliard(n).into_iter().map(|b| b ^ head).collect();
    image.sort_unstable();
    let mut target: Vec<u64> = (1..=c)
        .filter(|j| j % 2 == 1)
        .flat_map(|j| words_of_weight(n, j))
        .collect();
    target.sort_unstable();
    let witness = image
        .iter()
        .find(|b| target.binary_search(b).is_err())
        .or_else(|| target.iter().find(|b| image.binary_search(b).is_err()))
        .map(|&b| VertexWord::new_unchecked(b, n));
    Ok(SymdiffReport {
        n,
        c,
        image_size: image.len(),
        target_size: target.len(),
        equal: witness.is_none() && image.len() == target.len(),
        witness,
    })
}

/// Lifts an independent set of Y_n to Ω_n: each `x` becomes `x`, `x̄` and
/// their translates by the word with only bit 0 set (the odd component).
pub fn lift_to_omega(n: u32, y_set: &[VertexWord]) -> Result<IndSetCertificate> {
    if n == 0 || n % 4 != 0 || n > 64 {
        return Err(Error::Unsupported(format!("lift needs 4 | n, got {n}")));
    }
    if !check_independent(y_set, GraphKind::Y(n))? {
        return Err(Error::Verification("input is not independent in Y_n".into()));
    }
    let full = mask(n);
    let lifted: Vec<VertexWord> = y_set
        .iter()
        .flat_map(|x| {
            let b = x.bits();
            [b, b ^ full, b ^ 1, b ^ full ^ 1]
        })
        .map(|b| VertexWord::new_unchecked(b, n))
        .collect();
    let cert = IndSetCertificate::evaluate(
        GraphKind::Omega(n),
        Canon::Clear,
        VertexWord::zero(n)?,
        lifted,
    )?;
    if !cert.independent || cert.size != 4 * y_set.len() {
        return Err(Error::Verification("lifted set is not independent in Omega_n".into()));
    }
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct M2kReport {
    pub n: u32,
    /// Odd part of `n`.
    pub m: u32,
    /// `n = m·2^k`.
    pub k: u32,
    /// `2^n / 2^k`.
    #[serde(serialize_with = "serde_util::biguint")]
    pub m2k_bound: BigUint,
    /// `2^n / n` when `4 | n`.
    #[serde(serialize_with = "serde_util::opt_rational")]
    pub ratio_bound: Option<BigRational>,
    /// `m2k_bound / ratio_bound`.
    #[serde(serialize_with = "serde_util::opt_rational")]
    pub factor: Option<BigRational>,
    pub half_of_vertices: bool,
    /// `k = 1`: Ω_n is bipartite and the bound is attained.
    pub tight_bipartite: bool,
}

pub fn m2k_bound(n: u32) -> Result<M2kReport> {
    if n < 2 || n % 2 != 0 || n > 64 {
        return Err(Error::Unsupported(format!("m2k bound needs even 2 <= n <= 64, got {n}")));
    }
    let k = n.trailing_zeros();
    let m = n >> k;
    let m2k = BigUint::one() << (n - k);
    let ratio = (n % 4 == 0).then(|| ratio_bound(GraphKind::Omega(n)).map(|r| r.bound)).transpose()?;
    let factor = ratio
        .as_ref()
        .map(|r| BigRational::from_integer(BigInt::from(m2k.clone())) / r);
    Ok(M2kReport {
        n,
        m,
        k,
        half_of_vertices: m2k == BigUint::one() << (n - 1),
        tight_bipartite: k == 1,
        m2k_bound: m2k,
        ratio_bound: ratio,
        factor,
    })
}
