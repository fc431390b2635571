//! JSON records for specs, verdicts and oracle reports.
//!
//! Integers that fit in `i64` are written as JSON numbers, larger ones as
//! decimal strings. Records convert back to library values by resolving
//! against a [`BrContext`]; specs are validated again on the way in.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::bruck_reilly::{BrContext, BrElement};
use crate::classifier::{CosetGap, PerfectVerdict, Reason, Status};
use crate::congruence::{validate_gc, validate_is, Certificate, CongruenceKind, CongruenceSpec, ValidationError};
use crate::group::{GroupError, GroupElement, Subgroup};
use crate::oracle::{Coverage, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("record does not match the group backend: {0}")]
    Backend(&'static str),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("certificate in the record differs from the recomputed one")]
    CertificateMismatch,
}

/// Arbitrary-precision integer in JSON.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => serializer.serialize_i64(v),
            Err(_) => serializer.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Signed(i64),
            Unsigned(u64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Signed(v) => Ok(JsonInt(v.into())),
            Raw::Unsigned(v) => Ok(JsonInt(v.into())),
            Raw::Text(t) => BigInt::from_str(&t)
                .map(JsonInt)
                .map_err(|_| serde::de::Error::custom(format!("invalid integer {t:?}"))),
        }
    }
}

fn ints(v: &[BigInt]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

fn bigints(v: &[JsonInt]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRecord {
    Index(usize),
    Vector(Vec<JsonInt>),
}

impl From<&GroupElement> for ElementRecord {
    fn from(g: &GroupElement) -> Self {
        match g {
            GroupElement::Index(i) => ElementRecord::Index(*i),
            GroupElement::Vector(v) => ElementRecord::Vector(ints(v)),
        }
    }
}

impl ElementRecord {
    pub fn resolve(&self, s: &BrContext) -> Result<GroupElement, RecordError> {
        let g = match self {
            ElementRecord::Index(i) => GroupElement::Index(*i),
            ElementRecord::Vector(v) => GroupElement::Vector(bigints(v)),
        };
        s.group.validate(&g)?;
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrRecord {
    pub m: u64,
    pub g: ElementRecord,
    pub n: u64,
}

impl From<&BrElement> for BrRecord {
    fn from(x: &BrElement) -> Self {
        BrRecord {
            m: x.m,
            g: (&x.g).into(),
            n: x.n,
        }
    }
}

impl BrRecord {
    pub fn resolve(&self, s: &BrContext) -> Result<BrElement, RecordError> {
        Ok(BrElement::new(self.m, self.g.resolve(s)?, self.n))
    }
}

/// Members of a finite subgroup, or the canonical basis columns of a lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubgroupRecord {
    Members(Vec<usize>),
    Basis(Vec<Vec<JsonInt>>),
}

impl From<&Subgroup> for SubgroupRecord {
    fn from(h: &Subgroup) -> Self {
        match h {
            Subgroup::Finite(_) => SubgroupRecord::Members(h.members().unwrap_or_default()),
            Subgroup::Lattice(l) => SubgroupRecord::Basis(l.basis_columns().iter().map(|c| ints(c)).collect()),
        }
    }
}

impl SubgroupRecord {
    pub fn resolve(&self, s: &BrContext) -> Result<Subgroup, RecordError> {
        match (self, s.group.is_finite()) {
            (SubgroupRecord::Members(m), true) => Ok(s.group.subgroup_from_members(m)?),
            (SubgroupRecord::Basis(b), false) => {
                let cols: Vec<Vec<BigInt>> = b.iter().map(|c| bigints(c)).collect();
                Ok(s.group.subgroup_from_basis(&cols)?)
            }
            _ => Err(RecordError::Backend(s.group.backend_name())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Is,
    Gc,
}

/// `{variant, N, z, k, certificate}`; `z` and `k` are null for idempotent-separating specs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecRecord {
    pub variant: Variant,
    #[serde(rename = "N")]
    pub normal: SubgroupRecord,
    pub z: Option<ElementRecord>,
    pub k: Option<u64>,
    pub certificate: Certificate,
}

impl From<&CongruenceSpec> for SpecRecord {
    fn from(spec: &CongruenceSpec) -> Self {
        let (variant, z, k) = match spec.kind() {
            CongruenceKind::IdempotentSeparating { .. } => (Variant::Is, None, None),
            CongruenceKind::Group { z, k, .. } => (Variant::Gc, Some(z.into()), Some(*k)),
        };
        SpecRecord {
            variant,
            normal: spec.normal_subgroup().into(),
            z,
            k,
            certificate: *spec.certificate(),
        }
    }
}

impl SpecRecord {
    /// Validates the record again; the stored certificate must match.
    pub fn resolve(&self, s: &BrContext) -> Result<CongruenceSpec, RecordError> {
        let normal = self.normal.resolve(s)?;
        let spec = match (self.variant, &self.z, self.k) {
            (Variant::Is, None, None) => validate_is(s, &normal)?,
            (Variant::Gc, Some(z), Some(k)) => validate_gc(s, &normal, &z.resolve(s)?, k)?,
            _ => return Err(RecordError::Backend("variant fields do not match")),
        };
        if spec.certificate() != &self.certificate {
            return Err(RecordError::CertificateMismatch);
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapRecord {
    pub n: u64,
    pub x: ElementRecord,
}

/// `{status, reason, evidence?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub status: Status,
    pub reason: Reason,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<GapRecord>,
}

impl From<&PerfectVerdict> for VerdictRecord {
    fn from(v: &PerfectVerdict) -> Self {
        VerdictRecord {
            status: v.status,
            reason: v.reason,
            evidence: v.evidence.as_ref().map(|gap| GapRecord {
                n: gap.n,
                x: (&gap.x).into(),
            }),
        }
    }
}

impl VerdictRecord {
    pub fn resolve(&self, s: &BrContext) -> Result<PerfectVerdict, RecordError> {
        let evidence = match &self.evidence {
            Some(gap) => Some(CosetGap {
                n: gap.n,
                x: gap.x.resolve(s)?,
            }),
            None => None,
        };
        Ok(PerfectVerdict {
            status: self.status,
            reason: self.reason,
            evidence,
        })
    }
}

/// `{pair, window, bound, status, uncovered[]}` plus the norm bounds, the
/// number of covered elements and the bound-relative marker.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub pair: [BrRecord; 2],
    pub window: u64,
    pub bound: u64,
    pub norm_bound: u64,
    pub factor_norm_bound: u64,
    pub status: Coverage,
    pub covered: usize,
    pub uncovered: Vec<BrRecord>,
    pub bound_relative: bool,
}

impl From<&VerificationReport> for ReportRecord {
    fn from(r: &VerificationReport) -> Self {
        ReportRecord {
            pair: [(&r.pair.0).into(), (&r.pair.1).into()],
            window: r.window,
            bound: r.bound,
            norm_bound: r.norm_bound,
            factor_norm_bound: r.factor_norm_bound,
            status: r.status,
            covered: r.covered,
            uncovered: r.uncovered.iter().map(Into::into).collect(),
            bound_relative: r.bound_relative,
        }
    }
}

impl ReportRecord {
    pub fn resolve(&self, s: &BrContext) -> Result<VerificationReport, RecordError> {
        Ok(VerificationReport {
            pair: (self.pair[0].resolve(s)?, self.pair[1].resolve(s)?),
            window: self.window,
            bound: self.bound,
            norm_bound: self.norm_bound,
            factor_norm_bound: self.factor_norm_bound,
            covered: self.covered,
            uncovered: self.uncovered.iter().map(|x| x.resolve(s)).collect::<Result<_, _>>()?,
            status: self.status,
            bound_relative: self.bound_relative,
        })
    }
}
