//! Text formats: group spec files, congruence strings and element literals.
//!
//! A group spec file is line oriented. `#` starts a comment, every other
//! non-blank line is `key: value`.
//!
//! ```text
//! backend: finite-cayley
//! order: 2
//! identity: 0
//! table: 0 1 / 1 0
//! endo: 0 1
//! subgroup all: 0 1
//! ```
//!
//! The free abelian backend uses `rank: r`, `endo-matrix:` with `r*r`
//! integers in row-major order, and `subgroup <name>: basis ...` with the
//! basis columns listed one after another.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::bruck_reilly::{BrContext, BrElement};
use crate::congruence::{validate_gc, validate_is, CongruenceSpec, ValidationError};
use crate::group::{FiniteGroup, GroupContext, GroupElement, IntMatrix, Subgroup};

/// A parse failure at a 1-based line of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

impl ParseError {
    fn new(line: usize, reason: impl Into<String>) -> Self {
        ParseError {
            line,
            reason: reason.into(),
        }
    }
}

/// Malformed congruence string or element literal.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("malformed congruence {0:?}: expected is:<name> or gc:<name>,z=<element>,k=<int>")]
    Congruence(String),
    #[error("unknown subgroup {0:?}")]
    UnknownSubgroup(String),
    #[error("malformed element {text:?}: {reason}")]
    Element { text: String, reason: String },
}

/// Outcome of resolving a congruence string.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("validation failed ({code}): {0}", code = .0.code())]
    Validation(#[from] ValidationError),
}

/// A parsed group spec file: the semigroup and its named subgroups in file order.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    pub semigroup: BrContext,
    pub subgroups: Vec<(String, Subgroup)>,
}

impl GroupSpec {
    pub fn subgroup(&self, name: &str) -> Option<&Subgroup> {
        self.subgroups.iter().find(|(n, _)| n == name).map(|(_, h)| h)
    }

    /// Name of a stored subgroup equal to `h`.
    pub fn name_of(&self, h: &Subgroup) -> Option<&str> {
        self.subgroups.iter().find(|(_, g)| g == h).map(|(n, _)| n.as_str())
    }

    /// Resolves `is:<name>` or `gc:<name>,z=<element>,k=<int>` and validates it.
    pub fn resolve(&self, text: &str) -> Result<CongruenceSpec, ResolveError> {
        let request = CongruenceRequest::from_str(text)?;
        let normal = self
            .subgroup(&request.subgroup)
            .ok_or_else(|| SyntaxError::UnknownSubgroup(request.subgroup.clone()))?;
        let s = &self.semigroup;
        match &request.group {
            None => Ok(validate_is(s, normal)?),
            Some((z, k)) => {
                let z = parse_group_element(&s.group, z)?;
                Ok(validate_gc(s, normal, &z, *k)?)
            }
        }
    }
}

/// A congruence string before it is resolved against a group spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceRequest {
    pub subgroup: String,
    /// Raw `z` literal and period for group congruences.
    pub group: Option<(String, u64)>,
}

impl FromStr for CongruenceRequest {
    type Err = SyntaxError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || SyntaxError::Congruence(text.to_string());
        let text = text.trim();
        if let Some(name) = text.strip_prefix("is:") {
            let name = name.trim();
            if name.is_empty() || name.contains(',') {
                return Err(bad());
            }
            return Ok(CongruenceRequest {
                subgroup: name.to_string(),
                group: None,
            });
        }
        let rest = text.strip_prefix("gc:").ok_or_else(bad)?;
        let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
        let [name, z, k] = parts[..] else {
            return Err(bad());
        };
        let z = z.strip_prefix("z=").ok_or_else(bad)?.trim();
        let k = k.strip_prefix("k=").ok_or_else(bad)?.trim();
        let k: u64 = k.parse().map_err(|_| bad())?;
        if name.is_empty() || z.is_empty() {
            return Err(bad());
        }
        Ok(CongruenceRequest {
            subgroup: name.to_string(),
            group: Some((z.to_string(), k)),
        })
    }
}

impl fmt::Display for CongruenceRequest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.group {
            None => write!(f, "is:{}", self.subgroup),
            Some((z, k)) => write!(f, "gc:{},z={},k={}", self.subgroup, z, k),
        }
    }
}

fn element_error(text: &str, reason: impl Into<String>) -> SyntaxError {
    SyntaxError::Element {
        text: text.to_string(),
        reason: reason.into(),
    }
}

/// Parses a group element: an index for finite groups, `[a b c]` for `Z^r`.
pub fn parse_group_element(group: &GroupContext, text: &str) -> Result<GroupElement, SyntaxError> {
    let t = text.trim();
    let g = match group {
        GroupContext::Finite(_) => {
            let i: usize = t.parse().map_err(|_| element_error(text, "expected an element index"))?;
            GroupElement::Index(i)
        }
        GroupContext::FreeAbelian { .. } => {
            let inner = t
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| element_error(text, "expected a bracketed vector [a b ...]"))?;
            let coords = inner
                .split_whitespace()
                .map(BigInt::from_str)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| element_error(text, "vector entries must be integers"))?;
            GroupElement::Vector(coords)
        }
    };
    group.validate(&g).map_err(|e| element_error(text, e.to_string()))?;
    Ok(g)
}

/// Parses `m,g,n`.
pub fn parse_element(s: &BrContext, text: &str) -> Result<BrElement, SyntaxError> {
    let parts: Vec<&str> = text.split(',').collect();
    let [m, g, n] = parts[..] else {
        return Err(element_error(text, "expected m,g,n"));
    };
    let index = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| element_error(text, "indices must be nonnegative integers"))
    };
    Ok(BrElement::new(index(m)?, parse_group_element(&s.group, g)?, index(n)?))
}

struct Entry {
    line: usize,
    value: String,
}

/// Parses a group spec file.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec, ParseError> {
    let mut entries: HashMap<String, Entry> = HashMap::new();
    let mut subgroup_lines: Vec<(usize, String, String)> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once(':')
            .ok_or_else(|| ParseError::new(line, "expected `key: value`"))?;
        let key = key.trim();
        let value = value.trim().to_string();
        if let Some(name) = key.strip_prefix("subgroup") {
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) || !key.starts_with("subgroup ") {
                return Err(ParseError::new(line, "expected `subgroup <name>: ...`"));
            }
            if subgroup_lines.iter().any(|(_, n, _)| n == name) {
                return Err(ParseError::new(line, format!("duplicate subgroup {name:?}")));
            }
            subgroup_lines.push((line, name.to_string(), value));
            continue;
        }
        match key {
            "backend" | "order" | "identity" | "table" | "endo" | "rank" | "endo-matrix" => {}
            _ => return Err(ParseError::new(line, format!("unknown key {key:?}"))),
        }
        if entries.contains_key(key) {
            return Err(ParseError::new(line, format!("duplicate key {key:?}")));
        }
        entries.insert(key.to_string(), Entry { line, value });
    }

    let backend = entries
        .get("backend")
        .ok_or_else(|| ParseError::new(last_line, "missing key \"backend\""))?;
    let (group, alpha) = match backend.value.as_str() {
        "finite-cayley" => finite_backend(&entries, last_line)?,
        "free-abelian" => abelian_backend(&entries, last_line)?,
        other => return Err(ParseError::new(backend.line, format!("unknown backend {other:?}"))),
    };
    let semigroup = BrContext::new(group, alpha).map_err(|e| ParseError::new(backend.line, e.to_string()))?;

    let mut subgroups = Vec::new();
    for (line, name, value) in subgroup_lines {
        let h = parse_subgroup(&semigroup.group, &value).map_err(|reason| ParseError::new(line, reason))?;
        subgroups.push((name, h));
    }
    Ok(GroupSpec { semigroup, subgroups })
}

fn require<'a>(entries: &'a HashMap<String, Entry>, key: &str, last_line: usize) -> Result<&'a Entry, ParseError> {
    entries
        .get(key)
        .ok_or_else(|| ParseError::new(last_line, format!("missing key {key:?}")))
}

fn reject_keys(entries: &HashMap<String, Entry>, keys: &[&str], backend: &str) -> Result<(), ParseError> {
    for key in keys {
        if let Some(e) = entries.get(*key) {
            return Err(ParseError::new(e.line, format!("key {key:?} does not apply to the {backend} backend")));
        }
    }
    Ok(())
}

fn numbers<T: FromStr>(entry: &Entry, what: &str) -> Result<Vec<T>, ParseError> {
    numbers_in(&entry.value, what).map_err(|reason| ParseError::new(entry.line, reason))
}

fn numbers_in<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>, String> {
    text.split_whitespace()
        .map(|t| t.parse::<T>().map_err(|_| format!("{what}: {t:?} is not a valid number")))
        .collect()
}

fn single<T: FromStr>(entry: &Entry, what: &str) -> Result<T, ParseError> {
    let mut values = numbers::<T>(entry, what)?;
    match values.pop() {
        Some(v) if values.is_empty() => Ok(v),
        _ => Err(ParseError::new(entry.line, format!("{what} must be a single number"))),
    }
}

fn finite_backend(
    entries: &HashMap<String, Entry>,
    last_line: usize,
) -> Result<(GroupContext, crate::group::Endo), ParseError> {
    reject_keys(entries, &["rank", "endo-matrix"], "finite-cayley")?;
    let order_entry = require(entries, "order", last_line)?;
    let order: usize = single(order_entry, "order")?;
    let identity_entry = require(entries, "identity", last_line)?;
    let identity: usize = single(identity_entry, "identity")?;

    let table_entry = require(entries, "table", last_line)?;
    let mut rows = Vec::new();
    for row in table_entry.value.split('/') {
        let row: Vec<usize> = numbers_in(row, "table").map_err(|r| ParseError::new(table_entry.line, r))?;
        if row.len() != order {
            return Err(ParseError::new(
                table_entry.line,
                format!("table row {} has {} entries, expected {order}", rows.len(), row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != order {
        return Err(ParseError::new(
            table_entry.line,
            format!("table has {} rows, expected {order}", rows.len()),
        ));
    }
    let finite = FiniteGroup::from_table(order, rows, identity)
        .map_err(|e| ParseError::new(table_entry.line, e.to_string()))?;
    let group = GroupContext::finite(finite);

    let endo_entry = require(entries, "endo", last_line)?;
    let images: Vec<usize> = numbers(endo_entry, "endo")?;
    if images.len() != order {
        return Err(ParseError::new(
            endo_entry.line,
            format!("endo lists {} images, expected {order}", images.len()),
        ));
    }
    let alpha = group
        .endo_from_table(images)
        .map_err(|e| ParseError::new(endo_entry.line, e.to_string()))?;
    Ok((group, alpha))
}

fn abelian_backend(
    entries: &HashMap<String, Entry>,
    last_line: usize,
) -> Result<(GroupContext, crate::group::Endo), ParseError> {
    reject_keys(entries, &["order", "identity", "table", "endo"], "free-abelian")?;
    let rank_entry = require(entries, "rank", last_line)?;
    let rank: usize = single(rank_entry, "rank")?;
    let group = GroupContext::free_abelian(rank).map_err(|e| ParseError::new(rank_entry.line, e.to_string()))?;
    let endo_entry = require(entries, "endo-matrix", last_line)?;
    let coeffs: Vec<BigInt> = numbers(endo_entry, "endo-matrix")?;
    if coeffs.len() != rank * rank {
        return Err(ParseError::new(
            endo_entry.line,
            format!("endo-matrix has {} entries, expected {}", coeffs.len(), rank * rank),
        ));
    }
    let alpha = group
        .endo_from_matrix(IntMatrix::from_row_major(rank, rank, coeffs))
        .map_err(|e| ParseError::new(endo_entry.line, e.to_string()))?;
    Ok((group, alpha))
}

fn parse_subgroup(group: &GroupContext, value: &str) -> Result<Subgroup, String> {
    match group {
        GroupContext::Finite(_) => {
            let members: Vec<usize> = numbers_in(value, "subgroup")?;
            group.subgroup_from_members(&members).map_err(|e| e.to_string())
        }
        GroupContext::FreeAbelian { rank } => {
            let coeffs = value
                .strip_prefix("basis")
                .ok_or_else(|| "expected `basis <integers>` on the free-abelian backend".to_string())?;
            let coeffs: Vec<BigInt> = numbers_in(coeffs, "subgroup basis")?;
            if *rank == 0 || !coeffs.len().is_multiple_of(*rank) {
                return Err(format!("basis has {} integers, not a multiple of rank {rank}", coeffs.len()));
            }
            let columns: Vec<Vec<BigInt>> = coeffs.chunks(*rank).map(<[BigInt]>::to_vec).collect();
            group.subgroup_from_basis(&columns).map_err(|e| e.to_string())
        }
    }
}
