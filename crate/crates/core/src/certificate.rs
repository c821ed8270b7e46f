//! JSON certificates and their re-verification.
//!
//! Every certificate is an [`Envelope`] around a payload produced from a
//! [`Request`]. Verification reads the request back out of the payload,
//! recomputes the payload from scratch and compares the two documents.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::colouring::{
    chi_status, psi_colouring, CliqueCertificate, ColouringCertificate, Evidence,
};
use crate::error::{Error, Result};
use crate::families::{galliard_family, s_family, FamilyKind};
use crate::graph::{psi_stats, Canon, GraphKind};
use crate::search::{enumerate, IndSetCertificate, SearchConfig};
use crate::spectral::{
    gram_identities, ntn_spectrum, ratio_bound, verify_tau_eigenspace, EigenspaceCheck,
    GramReport, NtnSpectrum,
};
use crate::word::VertexWord;

pub const SCHEMA_VERSION: u32 = 1;

/// Fields excluded from comparison: they vary between honest runs.
const VOLATILE: &[&str] = &["produced_by", "wall_time_ms"];

const MAX_DIFFS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertKind {
    Bound,
    Indset,
    Clique,
    Colouring,
    Search,
    Family,
    PsiTable,
    Status,
    Spectrum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Envelope {
    pub schema_version: u32,
    pub kind: CertKind,
    pub n: u32,
    pub produced_by: String,
    pub payload: Value,
}

impl Envelope {
    pub fn new<T: Serialize>(kind: CertKind, n: u32, payload: &T) -> Result<Self> {
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            kind,
            n,
            produced_by: format!("ortho-core {}", env!("CARGO_PKG_VERSION")),
            payload: serde_json::to_value(payload).map_err(|e| Error::Schema(e.to_string()))?,
        })
    }

    /// Sorted keys, no insignificant whitespace.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_value(self)
            .expect("envelope is plain data")
            .to_string()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let env: Self = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if env.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "schema_version {} (expected {SCHEMA_VERSION})",
                env.schema_version
            )));
        }
        Ok(env)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumBundle {
    pub gram: GramReport,
    pub ntn: NtnSpectrum,
    pub eigenspace: Option<EigenspaceCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsiTable {
    pub k: u32,
    pub rows: Vec<crate::graph::PsiRow>,
}

/// What a certificate claims to be about.
#[derive(Clone, Debug, PartialEq)]
pub enum Request {
    Bound(GraphKind),
    Spectrum(u32),
    IndSet {
        kind: GraphKind,
        canon: Canon,
        base: VertexWord,
        vertices: Vec<VertexWord>,
    },
    Clique {
        n: u32,
        vertices: Vec<VertexWord>,
    },
    Colouring {
        kind: GraphKind,
        classes: Vec<Vec<VertexWord>>,
    },
    PsiColouring(u32),
    Search(SearchConfig),
    Family(FamilyKind, u32),
    PsiTable(u32),
    Status(u32),
}

pub fn produce(request: &Request, evidence: &Evidence) -> Result<Envelope> {
    match request {
        Request::Bound(kind) => Envelope::new(CertKind::Bound, kind.n(), &ratio_bound(*kind)?),
        Request::Spectrum(n) => {
            let bundle = SpectrumBundle {
                gram: gram_identities(*n)?,
                ntn: ntn_spectrum(*n)?,
                eigenspace: (*n == 8).then(|| verify_tau_eigenspace(8)).transpose()?,
            };
            Envelope::new(CertKind::Spectrum, *n, &bundle)
        }
        Request::IndSet { kind, canon, base, vertices } => {
            let cert = IndSetCertificate::evaluate(*kind, *canon, *base, vertices.clone())?;
            Envelope::new(CertKind::Indset, kind.n(), &cert)
        }
        Request::Clique { n, vertices } => {
            let cert = CliqueCertificate::evaluate(*n, vertices.clone())?;
            Envelope::new(CertKind::Clique, *n, &cert)
        }
        Request::Colouring { kind, classes } => {
            let cert = ColouringCertificate::evaluate(*kind, classes.clone())?;
            Envelope::new(CertKind::Colouring, kind.n(), &cert)
        }
        Request::PsiColouring(k) => {
            let c = psi_colouring(*k)?;
            Envelope::new(CertKind::Colouring, 1 << k, &c)
        }
        Request::Search(cfg) => {
            let cfg = cfg.with_jobs(cfg.jobs.max(evidence.jobs()));
            Envelope::new(CertKind::Search, cfg.n, &enumerate(&cfg)?)
        }
        Request::Family(family, n) => {
            let report = match family {
                FamilyKind::Galliard => galliard_family(*n)?,
                FamilyKind::OddSmall => s_family(*n)?,
            };
            Envelope::new(CertKind::Family, *n, &report)
        }
        Request::PsiTable(k) => {
            let table = PsiTable { k: *k, rows: psi_stats(*k)? };
            Envelope::new(CertKind::PsiTable, 1 << k, &table)
        }
        Request::Status(n) => Envelope::new(CertKind::Status, *n, &chi_status(*n, evidence)?),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub kind: CertKind,
    pub n: u32,
    pub ok: bool,
    pub diffs: Vec<String>,
}

fn field<'a>(payload: &'a Value, key: &str) -> Result<&'a Value> {
    payload
        .get(key)
        .ok_or_else(|| Error::Schema(format!("payload has no field `{key}`")))
}

fn typed<T: for<'de> Deserialize<'de>>(payload: &Value, key: &str) -> Result<T> {
    serde_json::from_value(field(payload, key)?.clone())
        .map_err(|e| Error::Schema(format!("field `{key}`: {e}")))
}

/// Hex strings parse leniently here; a bad word is a verification failure,
/// not a schema error.
fn words(raw: &[String], n: u32) -> Result<Vec<VertexWord>> {
    raw.iter().map(|s| VertexWord::from_hex(s, n)).collect()
}

enum Parsed {
    Request(Request),
    Invalid(String),
}

fn parse_request(env: &Envelope) -> Result<Parsed> {
    let p = &env.payload;
    if !p.is_object() {
        return Err(Error::Schema("payload is not an object".into()));
    }
    let n = env.n;
    let word_check = |r: Result<Request>| match r {
        Ok(req) => Parsed::Request(req),
        Err(e) => Parsed::Invalid(e.to_string()),
    };
    Ok(match env.kind {
        CertKind::Bound => Parsed::Request(Request::Bound(typed(p, "kind")?)),
        CertKind::Spectrum => Parsed::Request(Request::Spectrum(n)),
        CertKind::Indset => {
            let kind: GraphKind = typed(p, "kind")?;
            let canon: Canon = typed(p, "canon")?;
            let base: String = typed(p, "base")?;
            let vertices: Vec<String> = typed(p, "vertices")?;
            word_check((|| {
                Ok(Request::IndSet {
                    kind,
                    canon,
                    base: VertexWord::from_hex(&base, kind.n())?,
                    vertices: words(&vertices, kind.n())?,
                })
            })())
        }
        CertKind::Clique => {
            let cn: u32 = typed(p, "n")?;
            let vertices: Vec<String> = typed(p, "vertices")?;
            word_check(words(&vertices, cn).map(|vertices| Request::Clique { n: cn, vertices }))
        }
        CertKind::Colouring if p.get("k").is_some() => {
            Parsed::Request(Request::PsiColouring(typed(p, "k")?))
        }
        CertKind::Colouring => {
            let kind: GraphKind = typed(p, "kind")?;
            let classes: Vec<Vec<String>> = typed(p, "classes")?;
            word_check(
                classes
                    .iter()
                    .map(|c| words(c, kind.n()))
                    .collect::<Result<Vec<_>>>()
                    .map(|classes| Request::Colouring { kind, classes }),
            )
        }
        CertKind::Search => {
            let sn: u32 = typed(p, "n")?;
            let canon: Canon = typed(p, "canon")?;
            let base: String = typed(p, "base_vertex")?;
            word_check((|| {
                let cfg = SearchConfig::new(sn)?
                    .with_canon(canon)
                    .with_base(VertexWord::from_hex(&base, sn)?);
                Ok(Request::Search(cfg))
            })())
        }
        CertKind::Family => Parsed::Request(Request::Family(typed(p, "family")?, typed(p, "n")?)),
        CertKind::PsiTable => Parsed::Request(Request::PsiTable(typed(p, "k")?)),
        CertKind::Status => Parsed::Request(Request::Status(n)),
    })
}

fn strip_volatile(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for key in VOLATILE {
                map.remove(*key);
            }
            map.values_mut().for_each(strip_volatile);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_volatile),
        _ => {}
    }
}

fn diff(path: &str, claimed: &Value, actual: &Value, out: &mut Vec<String>) {
    if out.len() >= MAX_DIFFS || claimed == actual {
        return;
    }
    match (claimed, actual) {
        (Value::Object(a), Value::Object(b)) => {
            for key in a.keys().chain(b.keys().filter(|k| !a.contains_key(*k))) {
                let sub = format!("{path}.{key}");
                match (a.get(key), b.get(key)) {
                    (Some(x), Some(y)) => diff(&sub, x, y, out),
                    (Some(_), None) => out.push(format!("{sub}: unexpected field")),
                    (None, Some(_)) => out.push(format!("{sub}: missing field")),
                    (None, None) => unreachable!(),
                }
            }
        }
        (Value::Array(a), Value::Array(b)) if a.len() == b.len() => {
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                diff(&format!("{path}[{i}]"), x, y, out);
            }
        }
        (Value::Array(a), Value::Array(b)) => {
            out.push(format!("{path}: length {} claimed, {} recomputed", a.len(), b.len()))
        }
        _ => out.push(format!("{path}: claimed {claimed}, recomputed {actual}")),
    }
}

/// Recomputes a certificate. `Err` means the document is malformed
/// (schema); a well-formed but wrong certificate gives `ok == false`.
pub fn verify(text: &str, evidence: &Evidence) -> Result<VerifyReport> {
    let env = Envelope::parse(text)?;
    let report = |diffs: Vec<String>| VerifyReport {
        kind: env.kind,
        n: env.n,
        ok: diffs.is_empty(),
        diffs,
    };
    let request = match parse_request(&env)? {
        Parsed::Request(r) => r,
        Parsed::Invalid(msg) => return Ok(report(vec![msg])),
    };
    let fresh = match produce(&request, evidence) {
        Ok(e) => e,
        Err(Error::Schema(msg)) => return Err(Error::Schema(msg)),
        Err(e) => return Ok(report(vec![format!("recomputation rejected the claim: {e}")])),
    };
    let mut claimed = serde_json::to_value(&env).map_err(|e| Error::Schema(e.to_string()))?;
    let mut actual = serde_json::to_value(&fresh).map_err(|e| Error::Schema(e.to_string()))?;
    strip_volatile(&mut claimed);
    strip_volatile(&mut actual);
    let mut diffs = Vec::new();
    diff("$", &claimed, &actual, &mut diffs);
    Ok(report(diffs))
}
