//! Closed-form spectral data of Ω_n and Y_n, the ratio bound and its
//! equality condition, and the Gram-matrix identities behind the kernel
//! computation of the search.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{binomial, y_vertices, Canon, GraphKind};
use crate::linalg::RationalMatrix;
use crate::search::{build_n, incidence_b, two_subsets};
use crate::serde_util;
use crate::word::{mask, words_of_weight, VertexWord};

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn big(v: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn check_multiple_of_four(n: u32) -> Result<()> {
    if n == 0 || n > 64 || n % 4 != 0 {
        return Err(Error::Unsupported(format!(
            "least eigenvalue formula needs 4 | n <= 64, got n={n}"
        )));
    }
    Ok(())
}

/// Least eigenvalue of Ω_n for `4 | n`: `-binom(n, n/2) / (n-1)`.
pub fn least_eigenvalue(n: u32) -> Result<BigRational> {
    check_multiple_of_four(n)?;
    let b = binomial(u64::from(n), u64::from(n / 2));
    Ok(-big(b) / int(n - 1))
}

/// Least eigenvalue of Y_n. Ω_n's even component is Y_n[K̄_2], which doubles
/// every eigenvalue, so this is half of Ω_n's.
pub fn y_least_eigenvalue(n: u32) -> Result<BigRational> {
    Ok(least_eigenvalue(n)? / int(2))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: GraphKind,
    #[serde(serialize_with = "serde_util::biguint")]
    pub v: BigUint,
    #[serde(serialize_with = "serde_util::biguint")]
    pub d: BigUint,
    #[serde(serialize_with = "serde_util::rational")]
    pub tau: BigRational,
    /// `v·(−τ)/(d−τ)`.
    #[serde(serialize_with = "serde_util::rational")]
    pub bound: BigRational,
    pub is_integer: bool,
    /// Bound equals `2^n/n` (Ω) or `2^(n-2)/n` (Y).
    pub simplifies_to_power_form: bool,
}

/// Ratio bound `v(−τ)/(d−τ)` for Ω_n or Y_n with `4 | n`.
pub fn ratio_bound(kind: GraphKind) -> Result<BoundReport> {
    let n = kind.n();
    let (v, d, tau, power_exp) = match kind {
        GraphKind::Omega(_) => {
            check_multiple_of_four(n)?;
            let d = binomial(u64::from(n), u64::from(n / 2));
            (BigUint::one() << n, d, least_eigenvalue(n)?, n)
        }
        GraphKind::Y(_) => {
            check_multiple_of_four(n)?;
            let d = binomial(u64::from(n), u64::from(n / 2)) >> 1u32;
            (BigUint::one() << (n - 2), d, y_least_eigenvalue(n)?, n - 2)
        }
        GraphKind::Psi(_) => {
            return Err(Error::Unsupported("ratio bound is reported for Omega and Y only".into()))
        }
    };
    let bound = big(v.clone()) * (-tau.clone()) / (big(d.clone()) - &tau);
    let power = BigRational::new(BigInt::one() << power_exp, BigInt::from(n));
    Ok(BoundReport {
        kind,
        is_integer: bound.is_integer(),
        simplifies_to_power_form: bound == power,
        v,
        d,
        tau,
        bound,
    })
}

/// `(−1)^{|a ∩ p|}`.
#[inline]
pub(crate) fn character(a: u64, p: u64) -> i64 {
    if (a & p).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Column index sets of W: the 2-subsets in lexicographic order followed by
/// their complements, the `(n−2)`-subsets, in the same order.
fn w_columns(n: u32) -> Vec<u64> {
    let pairs = two_subsets(n);
    let full = mask(n);
    pairs.iter().copied().chain(pairs.iter().map(|p| p ^ full)).collect()
}

/// W: rows are all subsets of `[n]` in ascending bit order, columns the
/// 2-subsets then the `(n−2)`-subsets, entry `(−1)^{|A∩p|}`.
pub fn build_w(n: u32) -> Result<RationalMatrix> {
    if n != 4 && n != 8 {
        return Err(Error::Unsupported(format!("W is built for n in {{4, 8}}, got {n}")));
    }
    let cols = w_columns(n);
    Ok(RationalMatrix::from_i64(1 << n, cols.len(), |r, c| {
        character(r as u64, cols[c])
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenspaceCheck {
    pub n: u32,
    #[serde(serialize_with = "serde_util::rational")]
    pub tau: BigRational,
    pub columns_checked: usize,
    /// Largest `|(A·w − τ·w)(x)|` over all columns and vertices.
    #[serde(serialize_with = "serde_util::rational")]
    pub max_defect: BigRational,
    pub witness_column: Option<usize>,
    /// The all-ones vector is a `d`-eigenvector and not a `τ`-eigenvector.
    pub perron_control_ok: bool,
}

/// Checks `A·w = τ·w` for every column `w` of W, streaming each vertex's
/// `binom(n, n/2)` neighbours.
pub fn verify_tau_eigenspace(n: u32) -> Result<EigenspaceCheck> {
    if n != 4 && n != 8 {
        return Err(Error::Unsupported(format!("eigenspace check for n in {{4, 8}}, got {n}")));
    }
    let tau = least_eigenvalue(n)?;
    let tau_i = tau.to_integer().to_i64().expect("small");
    let masks: Vec<u64> = words_of_weight(n, n / 2).collect();
    let cols = w_columns(n);
    let defects: Vec<i64> = cols
        .par_iter()
        .map(|&p| {
            (0..1u64 << n)
                .map(|x| {
                    let aw: i64 = masks.iter().map(|&m| character(x ^ m, p)).sum();
                    (aw - tau_i * character(x, p)).abs()
                })
                .max()
                .unwrap_or(0)
        })
        .collect();
    let (witness, max_defect) = defects
        .iter()
        .copied()
        .enumerate()
        .max_by_key(|&(i, d)| (d, std::cmp::Reverse(i)))
        .unwrap_or((0, 0));
    let degree = masks.len() as i64;
    let perron_control_ok = degree != tau_i;
    Ok(EigenspaceCheck {
        n,
        tau,
        columns_checked: cols.len(),
        max_defect: int(max_defect),
        witness_column: (max_defect != 0).then_some(witness),
        perron_control_ok,
    })
}

/// Vertex order used for characteristic vectors: all words for Ω_n, the
/// canonical vertices for Y_n.
pub fn vertex_order(kind: GraphKind, canon: Canon) -> Result<Vec<VertexWord>> {
    match kind {
        GraphKind::Omega(n) | GraphKind::Y(n) if n % 4 == 0 && n <= 16 => kind.vertices(canon),
        _ => Err(Error::Unsupported(format!("equality condition on {kind}"))),
    }
}

/// Exact test of `A(z − (s/v)𝟙) = τ(z − (s/v)𝟙)` for a 0/1 vector `z`
/// indexed by [`vertex_order`].
pub fn equality_condition_check(kind: GraphKind, canon: Canon, z: &[i64]) -> Result<bool> {
    let order = vertex_order(kind, canon)?;
    let n = kind.n();
    if z.len() != order.len() {
        return Err(Error::Unsupported(format!(
            "characteristic vector has length {}, expected {}",
            z.len(),
            order.len()
        )));
    }
    if let Some((i, &bad)) = z.iter().enumerate().find(|(_, &e)| e != 0 && e != 1) {
        return Err(Error::NotZeroOne(bad, i));
    }
    let report = ratio_bound(kind)?;
    let tau_num = report.tau.numer().to_i128().expect("small");
    let tau_den = report.tau.denom().to_i128().expect("small");
    let d = report.d.to_i128().expect("small");
    let v = order.len() as i128;
    let s: i128 = z.iter().map(|&e| i128::from(e)).sum();

    let mut index = vec![u32::MAX; 1 << n];
    for (i, w) in order.iter().enumerate() {
        index[w.bits() as usize] = i as u32;
    }
    let masks: Vec<u64> = words_of_weight(n, n / 2).collect();
    let is_y = matches!(kind, GraphKind::Y(_));
    let holds = order.par_iter().enumerate().all(|(i, x)| {
        let az: i128 = masks
            .iter()
            .map(|&m| {
                let y = x.bits() ^ m;
                let j = index[y as usize];
                // Y: only the canonical member of each antipodal pair counts.
                if j == u32::MAX {
                    debug_assert!(is_y);
                    0
                } else {
                    i128::from(z[j as usize])
                }
            })
            .sum();
        let lhs = v * az - s * d;
        let rhs = v * i128::from(z[i]) - s;
        tau_den * lhs == tau_num * rhs
    });
    Ok(holds)
}

/// Characteristic vector of `set` in [`vertex_order`].
pub fn characteristic_vector(
    kind: GraphKind,
    canon: Canon,
    set: &[VertexWord],
) -> Result<Vec<i64>> {
    let order = vertex_order(kind, canon)?;
    let mut index = vec![u32::MAX; 1 << kind.n()];
    for (i, w) in order.iter().enumerate() {
        index[w.bits() as usize] = i as u32;
    }
    let mut z = vec![0i64; order.len()];
    for v in set {
        if v.n() != kind.n() || index[v.bits() as usize] == u32::MAX {
            return Err(Error::NotYVertex(v.to_hex(), "not a vertex of the graph"));
        }
        z[index[v.bits() as usize] as usize] = 1;
    }
    Ok(z)
}

pub fn equality_condition_for_set(
    kind: GraphKind,
    canon: Canon,
    set: &[VertexWord],
) -> Result<bool> {
    let z = characteristic_vector(kind, canon, set)?;
    equality_condition_check(kind, canon, &z)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramReport {
    pub n: u32,
    /// Rows of N: the canonical Y_n-neighbours of the empty set.
    pub n_rows: usize,
    pub nbt_all_minus_one: bool,
    pub nbt_witness: Option<(usize, usize)>,
    /// Whether `B·Bᵀ = (n−1)I + J`.
    pub bbt_identity: bool,
    pub bbt_witness: Option<(usize, usize)>,
    /// Common diagonal entry of `B·Bᵀ` (the degree of K_n), if constant.
    #[serde(serialize_with = "serde_util::opt_rational")]
    pub bbt_diagonal: Option<BigRational>,
    /// Whether `B·Bᵀ = (n−2)I + J`.
    pub bbt_is_kn_gram: bool,
    /// Common row sum of N, if all row sums agree.
    #[serde(serialize_with = "serde_util::opt_rational")]
    pub n_row_sum: Option<BigRational>,
    /// Whether `N𝟙 = (n/2)𝟙`.
    pub n_ones_is_half_n: bool,
    /// Whether `N𝟙` is a nonzero multiple of `𝟙`.
    pub ones_in_column_space: bool,
}

fn first_mismatch(
    m: &RationalMatrix,
    expect: impl Fn(usize, usize) -> BigRational,
) -> Option<(usize, usize)> {
    (0..m.rows())
        .flat_map(|r| (0..m.cols()).map(move |c| (r, c)))
        .find(|&(r, c)| *m.get(r, c) != expect(r, c))
}

/// Checks `N·Bᵀ = −J`, `B·Bᵀ = (n−1)I + J` and the row sums of N, and
/// records what `B·Bᵀ` and `N𝟙` actually are.
pub fn gram_identities(n: u32) -> Result<GramReport> {
    if ![8, 12, 16].contains(&n) {
        return Err(Error::Unsupported(format!("Gram identities for n in {{8, 12, 16}}, got {n}")));
    }
    let base = VertexWord::zero(n)?;
    let (nm, _) = build_n(n, base, Canon::Clear)?;
    let b = incidence_b(n)?;
    let bt = b.transpose();

    let nbt = nm.matmul(&bt)?;
    let nbt_witness = first_mismatch(&nbt, |_, _| int(-1));
    let bbt = b.matmul(&bt)?;
    let nn = i64::from(n);
    let bbt_witness = first_mismatch(&bbt, |r, c| int(if r == c { nn } else { 1 }));
    let bbt_is_kn_gram = first_mismatch(&bbt, |r, c| int(if r == c { nn - 1 } else { 1 })).is_none();
    let bbt_diagonal = Some(bbt.get(0, 0).clone())
        .filter(|d| (0..bbt.rows()).all(|i| bbt.get(i, i) == d));

    let ones = RationalMatrix::from_i64(nm.cols(), 1, |_, _| 1);
    let sums = nm.matmul(&ones)?.column(0);
    let n_row_sum = sums
        .first()
        .filter(|first| sums.iter().all(|s| s == *first))
        .cloned();
    let half = int(n / 2);
    Ok(GramReport {
        n,
        n_rows: nm.rows(),
        nbt_all_minus_one: nbt_witness.is_none(),
        nbt_witness,
        bbt_identity: bbt_witness.is_none(),
        bbt_witness,
        bbt_diagonal,
        bbt_is_kn_gram,
        n_ones_is_half_n: n_row_sum.as_ref() == Some(&half),
        ones_in_column_space: n_row_sum.as_ref().is_some_and(|s| !s.is_zero()),
        n_row_sum,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NtnSpectrum {
    pub n: u32,
    /// Rows of N over the full Ω_n-neighbourhood of the empty set.
    pub n_rows: usize,
    pub columns: usize,
    /// `(c₀, c₁, c₂)` with `NᵀN = c₀I + c₁L + c₂L̄`.
    #[serde(serialize_with = "serde_util::rationals")]
    pub coefficients: Vec<BigRational>,
    pub combination_matches: bool,
    pub combination_witness: Option<(usize, usize)>,
    /// Closed-form eigenvalues `(λ₁, λ₂, 0)`.
    #[serde(serialize_with = "serde_util::rationals")]
    pub eigenvalues: Vec<BigRational>,
    /// `(1, C(n,2) − n, n − 1)`.
    pub multiplicities_claimed: Vec<usize>,
    /// Nullity of `NᵀN − λI` for each eigenvalue.
    pub multiplicities_measured: Vec<usize>,
    pub multiplicities_sum_ok: bool,
    #[serde(serialize_with = "serde_util::rational")]
    pub trace: BigRational,
    #[serde(serialize_with = "serde_util::rational")]
    pub trace_from_spectrum: BigRational,
    pub trace_consistent: bool,
    /// Gram matrix of the Y_n-neighbourhood rows is exactly half of `NᵀN`.
    pub y_gram_is_half: bool,
    pub rank_n: usize,
    pub rank_n_hat: usize,
}

/// Rows `A` of N over the full Ω_n-neighbourhood of `∅`, columns the
/// 2-subsets.
fn build_n_omega(n: u32) -> RationalMatrix {
    let rows: Vec<u64> = words_of_weight(n, n / 2).collect();
    let cols = two_subsets(n);
    RationalMatrix::from_i64(rows.len(), cols.len(), |r, c| character(rows[r], cols[c]))
}

/// Verifies the closed-form decomposition and spectrum of `NᵀN`.
pub fn ntn_spectrum(n: u32) -> Result<NtnSpectrum> {
    if ![8, 12, 16].contains(&n) {
        return Err(Error::Unsupported(format!("NᵀN spectrum for n in {{8, 12, 16}}, got {n}")));
    }
    let nu = u64::from(n);
    let h = nu / 2;
    let b0 = big(binomial(nu, h));
    let c0 = b0.clone();
    let c1 = &b0 - int(8) * big(binomial(nu - 3, h - 1));
    let c2 = &b0 - int(16) * big(binomial(nu - 4, h - 1));

    let nm = build_n_omega(n);
    let gram = nm.transpose().matmul(&nm)?;
    let pairs = two_subsets(n);
    let combination_witness = first_mismatch(&gram, |r, c| {
        match (pairs[r] & pairs[c]).count_ones() {
            2 => c0.clone(),
            1 => c1.clone(),
            _ => c2.clone(),
        }
    });

    let nf = int(n);
    let lambda1 = &nf / (int(2) * int(n - 1)) * &b0;
    let lambda2 = &nf * int(n - 2) / (int(n - 1) * int(n - 3)) * &b0;
    let eigenvalues = vec![lambda1, lambda2, BigRational::zero()];
    let cols = pairs.len();
    let multiplicities_claimed = vec![1, cols - n as usize, n as usize - 1];
    let multiplicities_measured: Vec<usize> = eigenvalues
        .iter()
        .map(|l| Ok(cols - gram.minus_scalar_identity(l)?.rank()))
        .collect::<Result<_>>()?;
    let trace = gram.trace();
    let trace_from_spectrum = eigenvalues
        .iter()
        .zip(&multiplicities_claimed)
        .map(|(l, &m)| l * int(m as u64))
        .fold(BigRational::zero(), |a, b| a + b);

    let (ny, _) = build_n(n, VertexWord::zero(n)?, Canon::Clear)?;
    let y_gram = ny.transpose().matmul(&ny)?;
    let y_gram_is_half = y_gram.scale(&int(2)) == gram;

    Ok(NtnSpectrum {
        n,
        n_rows: nm.rows(),
        columns: cols,
        coefficients: vec![c0.clone(), c1, c2],
        combination_matches: combination_witness.is_none(),
        combination_witness,
        multiplicities_sum_ok: multiplicities_measured.iter().sum::<usize>() == cols,
        multiplicities_claimed,
        multiplicities_measured,
        trace_consistent: trace == trace_from_spectrum && trace == int(cols as u64) * &c0,
        trace,
        trace_from_spectrum,
        eigenvalues,
        y_gram_is_half,
        rank_n: ny.rank(),
        rank_n_hat: ny.with_ones_column().rank(),
    })
}

/// Exact Y_n eigenvector check for the 2-subset columns on canonical
/// vertices: returns the common eigenvalue if every column is an eigenvector
/// with the same eigenvalue.
pub fn y_eigenvalue_of_h(n: u32) -> Result<Option<BigRational>> {
    if n % 4 != 0 || n == 0 || n > 12 {
        return Err(Error::Unsupported(format!("Y eigenvector scan for 4 | n <= 12, got {n}")));
    }
    let verts = y_vertices(n, Canon::Clear)?;
    let masks: Vec<u64> = words_of_weight(n, n / 2).collect();
    let mut common: Option<BigRational> = None;
    for p in two_subsets(n) {
        for x in &verts {
            let ay: i64 = masks
                .iter()
                .filter(|&&m| (x.bits() ^ m) & 1 == 0)
                .map(|&m| character(x.bits() ^ m, p))
                .sum();
            let ratio = BigRational::new(ay.into(), character(x.bits(), p).into());
            match &common {
                None => common = Some(ratio),
                Some(c) if *c != ratio => return Ok(None),
                _ => {}
            }
        }
    }
    Ok(common)
}
