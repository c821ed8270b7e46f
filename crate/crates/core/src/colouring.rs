//! Cliques, colourings and the chromatic-number verdict.
//!
//! Ω_n is a Cayley graph of `Z_2^n` (XOR of words), which is abelian, so
//! every connection set is closed under conjugation. If `S` is independent
//! and `C` is a clique with `|S|·|C| = 2^n`, the translates `S ⊕ c` for
//! `c ∈ C` partition the vertices into independent sets.

use std::collections::HashSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{lift_to_omega, m2k_bound, M2kReport};
use crate::graph::{orth_bits, psi_neighbours, GraphKind};
use crate::search::{check_independent, enumerate, SearchConfig, SearchOutcome};
use crate::spectral::{ratio_bound, BoundReport};
use crate::word::{mask, words_of_weight, VertexWord};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueCertificate {
    pub n: u32,
    pub vertices: Vec<VertexWord>,
    pub size: usize,
    pub pairwise_orthogonal: bool,
    /// `size == n`: the ±1 rows form a Hadamard matrix.
    pub hadamard: bool,
}

impl CliqueCertificate {
    pub fn evaluate(n: u32, vertices: Vec<VertexWord>) -> Result<Self> {
        if let Some(v) = vertices.iter().find(|v| v.n() != n) {
            return Err(Error::DimensionMismatch(v.n(), n));
        }
        let distinct: HashSet<u64> = vertices.iter().map(|v| v.bits()).collect();
        if distinct.len() != vertices.len() {
            return Err(Error::DuplicateVertex("clique".into()));
        }
        let pairwise_orthogonal = vertices.iter().enumerate().all(|(i, u)| {
            vertices[i + 1..]
                .iter()
                .all(|v| orth_bits(u.bits(), v.bits(), n))
        });
        let size = vertices.len();
        // Pairwise orthogonal nonzero vectors are linearly independent.
        if pairwise_orthogonal && size > n as usize {
            return Err(Error::Verification(format!("clique of size {size} exceeds n={n}")));
        }
        Ok(Self {
            n,
            hadamard: pairwise_orthogonal && size == n as usize,
            pairwise_orthogonal,
            size,
            vertices,
        })
    }
}

/// Rows of the Sylvester matrix of order `2^k` as words:
/// `H_2m = [[H, H], [H, −H]]` starting from `[1]`.
pub fn sylvester_rows(k: u32) -> Vec<u64> {
    let mut rows = vec![0u64];
    let mut m = 1u32;
    for _ in 0..k {
        let flip = mask(m);
        let top = rows.iter().map(|&r| r | (r << m));
        let bottom = rows.iter().map(|&r| r | ((r ^ flip) << m));
        rows = top.chain(bottom).collect();
        m *= 2;
    }
    rows
}

pub fn sylvester_clique(k: u32) -> Result<CliqueCertificate> {
    if k > 6 {
        return Err(Error::Unsupported(format!("Sylvester clique needs k <= 6, got {k}")));
    }
    let n = 1u32 << k;
    let rows = sylvester_rows(k)
        .into_iter()
        .map(|b| VertexWord::new_unchecked(b, n))
        .collect();
    CliqueCertificate::evaluate(n, rows)
}

/// Whether the translates `S ⊕ c`, `c ∈ C`, are pairwise disjoint. Implies
/// `|S|·|C| ≤ 2^n`.
pub fn translate_disjointness(s: &[VertexWord], clique: &CliqueCertificate) -> Result<bool> {
    let n = clique.n;
    if !check_independent(s, GraphKind::Omega(n))? {
        return Err(Error::NotIndependent("S".into(), "translate check".into()));
    }
    if !clique.pairwise_orthogonal {
        return Err(Error::Verification("C is not a clique".into()));
    }
    let mut seen = HashSet::with_capacity(s.len() * clique.size);
    for c in &clique.vertices {
        for x in s {
            if !seen.insert(x.bits() ^ c.bits()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColouringCertificate {
    pub kind: GraphKind,
    pub classes: Vec<Vec<VertexWord>>,
    pub palette_size: usize,
    pub partition_ok: bool,
    pub proper: bool,
    pub edges_checked: u64,
    pub conflict: Option<(VertexWord, VertexWord)>,
}

impl ColouringCertificate {
    /// Recomputes partition and properness against implicit adjacency.
    pub fn evaluate(kind: GraphKind, mut classes: Vec<Vec<VertexWord>>) -> Result<Self> {
        kind.validate()?;
        let n = kind.n();
        if !matches!(kind, GraphKind::Omega(_) | GraphKind::Psi(_)) || n > 16 {
            return Err(Error::Unsupported(format!("colouring check on {kind}")));
        }
        for class in &mut classes {
            class.sort_unstable();
        }
        let mut colour = vec![u32::MAX; 1 << n];
        let mut partition_ok = true;
        for (i, class) in classes.iter().enumerate() {
            for v in class {
                if v.n() != n {
                    return Err(Error::DimensionMismatch(v.n(), n));
                }
                let slot = &mut colour[v.bits() as usize];
                partition_ok &= *slot == u32::MAX;
                *slot = i as u32;
            }
        }
        partition_ok &= colour.iter().all(|&c| c != u32::MAX);

        let mut edges_checked = 0u64;
        let mut conflict = None;
        for x in 0..1u64 << n {
            let neighbours: Box<dyn Iterator<Item = u64>> = match kind {
                GraphKind::Psi(_) => Box::new(
                    psi_neighbours(VertexWord::new_unchecked(x, n))?
                        .into_iter()
                        .map(|v| v.bits()),
                ),
                _ => Box::new(
                    (n % 2 == 0)
                        .then(|| words_of_weight(n, n / 2))
                        .into_iter()
                        .flatten()
                        .map(move |m| x ^ m),
                ),
            };
            for y in neighbours.filter(|&y| y > x) {
                edges_checked += 1;
                let (a, b) = (colour[x as usize], colour[y as usize]);
                if conflict.is_none() && a == b && a != u32::MAX {
                    conflict = Some((
                        VertexWord::new_unchecked(x, n),
                        VertexWord::new_unchecked(y, n),
                    ));
                }
            }
        }
        Ok(Self {
            kind,
            palette_size: classes.len(),
            proper: partition_ok && conflict.is_none(),
            partition_ok,
            edges_checked,
            conflict,
            classes,
        })
    }
}

/// Colour classes `S ⊕ c`, `c ∈ C`, of Ω_n.
pub fn normal_cayley_colouring(
    s: &[VertexWord],
    clique: &CliqueCertificate,
) -> Result<ColouringCertificate> {
    let n = clique.n;
    if (s.len() * clique.size) as u128 != 1u128 << n {
        return Err(Error::Verification(format!(
            "|S|·|C| = {} is not 2^{n}",
            s.len() * clique.size
        )));
    }
    if !translate_disjointness(s, clique)? {
        return Err(Error::Verification("translates overlap".into()));
    }
    let classes = clique
        .vertices
        .iter()
        .map(|c| {
            s.iter()
                .map(|x| VertexWord::new_unchecked(x.bits() ^ c.bits(), n))
                .collect()
        })
        .collect();
    let cert = ColouringCertificate::evaluate(GraphKind::Omega(n), classes)?;
    if let Some((u, v)) = cert.conflict {
        return Err(Error::NotIndependent(u.to_hex(), v.to_hex()));
    }
    if !cert.partition_ok {
        return Err(Error::Verification("classes do not partition V".into()));
    }
    Ok(cert)
}

/// Colour of `x` in the recursive Ψ_n colouring with palette `n`: the two
/// join sides of every copy get disjoint palettes.
pub fn psi_colour(x: u64, n: u32) -> u32 {
    if n == 1 {
        return 0;
    }
    let half = n / 2;
    let lo = x & mask(half);
    let r = lo ^ (x >> half);
    // Copies are labelled by the member of {r, −r} with bit 0 clear.
    let side = (r & 1) as u32;
    side * half + psi_colour(lo, half)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiColouring {
    pub k: u32,
    pub certificate: ColouringCertificate,
    /// Properness of the same classes on Ω_n (checked for `n <= 8`).
    pub proper_on_omega: Option<bool>,
    pub omega_edges_checked: Option<u64>,
}

pub fn psi_colouring(k: u32) -> Result<PsiColouring> {
    if k > 4 {
        return Err(Error::Unsupported(format!("Psi colouring needs k <= 4, got {k}")));
    }
    let n = 1u32 << k;
    let mut classes = vec![Vec::new(); n as usize];
    for x in 0..1u64 << n {
        classes[psi_colour(x, n) as usize].push(VertexWord::new_unchecked(x, n));
    }
    let certificate = ColouringCertificate::evaluate(GraphKind::Psi(n), classes)?;
    let omega = (n <= 8)
        .then(|| ColouringCertificate::evaluate(GraphKind::Omega(n), certificate.classes.clone()))
        .transpose()?;
    Ok(PsiColouring {
        k,
        proper_on_omega: omega.as_ref().map(|c| c.proper),
        omega_edges_checked: omega.as_ref().map(|c| c.edges_checked),
        certificate,
    })
}

/// Search outcomes shared between verdicts.
#[derive(Debug, Default)]
pub struct Evidence {
    jobs: usize,
    outcomes: [OnceLock<SearchOutcome>; 3],
}

impl Evidence {
    pub fn new(jobs: usize) -> Self {
        Self {
            jobs: jobs.max(1),
            outcomes: Default::default(),
        }
    }

    pub fn jobs(&self) -> usize {
        self.jobs.max(1)
    }

    fn slot(n: u32) -> Result<usize> {
        match n {
            4 => Ok(0),
            8 => Ok(1),
            16 => Ok(2),
            _ => Err(Error::Unsupported(format!("no search evidence for n={n}"))),
        }
    }

    /// Search outcome for `n ∈ {4, 8, 16}` with the default base; computed
    /// on first use.
    pub fn search(&self, n: u32) -> Result<&SearchOutcome> {
        let cell = &self.outcomes[Self::slot(n)?];
        if let Some(o) = cell.get() {
            return Ok(o);
        }
        let outcome = enumerate(&SearchConfig::new(n)?.with_jobs(self.jobs))?;
        let _ = cell.set(outcome);
        Ok(cell.get().expect("just set"))
    }

    pub fn insert(&self, outcome: SearchOutcome) -> Result<()> {
        let _ = self.outcomes[Self::slot(outcome.n)?].set(outcome);
        Ok(())
    }
}

/// Proper `n`-colouring of Ω_n for `n ∈ {1, 2, 4, 8}` (and 16 if a tight
/// set existed), from an independent set and a Sylvester clique.
pub fn omega_colouring(n: u32, evidence: &Evidence) -> Result<ColouringCertificate> {
    let all = |n: u32| (0..1u64 << n).map(move |b| VertexWord::new_unchecked(b, n));
    let s: Vec<VertexWord> = match n {
        1 => all(1).collect(),
        2 => all(2).filter(|v| v.is_even()).collect(),
        4 | 8 | 16 => {
            let outcome = evidence.search(n)?;
            let first = outcome.certificates.first().ok_or_else(|| {
                Error::Verification(format!("no tight independent set of Y_{n}"))
            })?;
            lift_to_omega(n, &first.vertices)?.vertices
        }
        _ => return Err(Error::Unsupported(format!("no n-colouring construction for n={n}"))),
    };
    normal_cayley_colouring(&s, &sylvester_clique(n.trailing_zeros())?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChiVerdict {
    EqualsN,
    LessThanN,
    GreaterThanN,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchSummary {
    pub n: u32,
    pub candidates_total: u64,
    pub count_independent: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatusReport {
    pub n: u32,
    pub verdict: ChiVerdict,
    /// Justification, one implication per entry.
    pub chain: Vec<String>,
    pub colouring: Option<ColouringCertificate>,
    pub clique_size: Option<usize>,
    pub ratio_bound: Option<BoundReport>,
    pub m2k: Option<M2kReport>,
    pub search: Option<SearchSummary>,
}

impl StatusReport {
    fn new(n: u32, verdict: ChiVerdict) -> Self {
        Self {
            n,
            verdict,
            chain: Vec::new(),
            colouring: None,
            clique_size: None,
            ratio_bound: None,
            m2k: None,
            search: None,
        }
    }

    fn because(mut self, step: impl Into<String>) -> Self {
        self.chain.push(step.into());
        self
    }
}

/// Decides how `χ(Ω_n)` compares with `n`.
pub fn chi_status(n: u32, evidence: &Evidence) -> Result<StatusReport> {
    if n == 0 || n > 64 {
        return Err(Error::BadDimension(n));
    }
    if n == 1 {
        let colouring = omega_colouring(1, evidence)?;
        return Ok(StatusReport {
            colouring: Some(colouring),
            ..StatusReport::new(n, ChiVerdict::EqualsN)
                .because("Omega_1 has two vertices and no edges, so chi = 1 = n")
        });
    }
    if n % 2 == 1 {
        return Ok(StatusReport::new(n, ChiVerdict::LessThanN)
            .because(format!("n = {n} is odd, so no two ±1-vectors are orthogonal"))
            .because(format!("Omega_{n} is edgeless, so chi = 1 < {n}")));
    }
    if n % 4 == 2 {
        let base = StatusReport::new(
            n,
            if n == 2 { ChiVerdict::EqualsN } else { ChiVerdict::LessThanN },
        )
        .because(
            "n ≡ 2 (mod 4): orthogonal words differ in an odd number of places, so every edge joins an even and an odd vertex",
        );
        let mut report = if n == 2 {
            base.because("Omega_2 is a 4-cycle, so chi = 2 = n")
        } else {
            base.because(format!("Omega_{n} is bipartite with edges, so chi = 2 < {n}"))
        };
        report.m2k = Some(m2k_bound(n)?);
        if n == 2 {
            report.colouring = Some(omega_colouring(2, evidence)?);
            report.clique_size = Some(2);
        }
        return Ok(report);
    }

    let bound = ratio_bound(GraphKind::Omega(n))?;
    if !n.is_power_of_two() {
        if bound.is_integer {
            return Err(Error::Verification(format!("ratio bound for n={n} is integral")));
        }
        let mut report = StatusReport::new(n, ChiVerdict::GreaterThanN)
            .because(format!(
                "ratio bound: alpha(Omega_{n}) <= 2^{n}/{n} = {}",
                crate::serde_util::rational_string(&bound.bound)
            ))
            .because(format!(
                "2^{n}/{n} is not an integer, so alpha(Omega_{n}) < 2^{n}/{n}"
            ))
            .because(format!(
                "{n} colour classes cannot cover 2^{n} vertices, so chi(Omega_{n}) > {n}"
            ));
        report.ratio_bound = Some(bound);
        report.m2k = Some(m2k_bound(n)?);
        return Ok(report);
    }

    if n > 16 {
        let base16 = chi_status(16, evidence)?;
        if base16.verdict != ChiVerdict::GreaterThanN {
            return Err(Error::Verification("descent needs chi(Omega_16) > 16".into()));
        }
        let mut report = StatusReport::new(n, ChiVerdict::GreaterThanN);
        let mut m = n;
        while m > 16 {
            report = report.because(format!(
                "chi(Omega_{m}) = {m} forces alpha(Omega_{m}) = 2^{m}/{m}, which forces alpha(Omega_{h}) = 2^{h}/{h} via the join partition into copies of Omega_{h} + Omega_{h}",
                h = m / 2
            ));
            m /= 2;
        }
        report = report
            .because("alpha(Omega_16) < 2^16/16 (no tight independent set of Y_16)")
            .because(format!("hence alpha(Omega_{n}) < 2^{n}/{n} and chi(Omega_{n}) > {n}"));
        report.ratio_bound = Some(bound);
        report.search = base16.search;
        return Ok(report);
    }

    // n ∈ {4, 8, 16}: decided by the exhaustive search.
    let outcome = evidence.search(n)?;
    let summary = SearchSummary {
        n,
        candidates_total: outcome.candidates_total,
        count_independent: outcome.count_independent,
    };
    let y_bound = crate::serde_util::rational_string(&outcome.target_weight);
    let omega_bound = bound.bound.to_integer();
    let mut report = if outcome.count_independent == 0 {
        StatusReport::new(n, ChiVerdict::GreaterThanN)
            .because(format!(
                "all {} candidates scanned: no independent set of Y_{n} of size {y_bound} avoids the base neighbourhood",
                outcome.candidates_total
            ))
            .because(format!(
                "Y_{n} is vertex-transitive, so alpha(Y_{n}) < {y_bound} and alpha(Omega_{n}) < {omega_bound}"
            ))
            .because(format!(
                "an {n}-colouring would need a class of size 2^{n}/{n} = {omega_bound}, so chi(Omega_{n}) > {n}"
            ))
    } else {
        let colouring = omega_colouring(n, evidence)?;
        if !colouring.proper || colouring.palette_size != n as usize {
            return Err(Error::Verification(format!("colouring of Omega_{n} failed")));
        }
        let clique = sylvester_clique(n.trailing_zeros())?;
        let mut r = StatusReport::new(n, ChiVerdict::EqualsN)
            .because(format!(
                "search found {} independent sets of Y_{n} of size {y_bound}",
                outcome.count_independent
            ))
            .because(format!(
                "lifting gives alpha(Omega_{n}) = {omega_bound} = 2^{n}/{n}; with a Sylvester {n}-clique the translates form a proper {n}-colouring"
            ))
            .because(format!("the {n}-clique gives chi >= {n}, so chi(Omega_{n}) = {n}"));
        r.colouring = Some(colouring);
        r.clique_size = Some(clique.size);
        r
    };
    report.ratio_bound = Some(bound);
    report.search = Some(summary);
    Ok(report)
}

/// `α·ω` versus the vertex count, for a concrete independent set and clique.
pub fn clique_coclique_product(s_size: usize, clique: &CliqueCertificate) -> (BigRational, bool) {
    let product = BigRational::from_integer(BigInt::from(s_size * clique.size));
    let v = BigRational::from_integer(BigInt::from(1u64) << clique.n);
    let ok = product <= v;
    (product, ok)
}
