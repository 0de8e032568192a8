//! Line-oriented text format for Peirce rings:
//!
//! ```text
//! peirce rank=2 modulus=2
//! block 1 1: 2
//! block 1 2:
//! ...
//! mult 1 1 1: (0,0) -> [1]
//! ```
//!
//! Block indices are 1-based, generator indices 0-based. Every block is
//! listed; only nonzero products are listed. Output is canonical: blocks in
//! `(i, j)` order, products in `(i, j, k, a, b)` order.

use super::{PeirceError, PeirceRing};
use crate::exact_linalg::{Bilinear, Elem, FinAbGroup};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Ring(#[from] PeirceError),
}

pub(crate) fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

type Key = (usize, usize, usize);

/// The parsed contents of a table file, before any validation beyond
/// syntax and index ranges.
#[derive(Clone, Debug, Default)]
pub(crate) struct RawTable {
    pub rank: usize,
    pub modulus: i64,
    pub groups: BTreeMap<(usize, usize), FinAbGroup>,
    pub entries: BTreeMap<Key, BTreeMap<(usize, usize), Elem>>,
}

/// Keywords distinguishing the ring format from the commutator format.
pub(crate) struct Keywords {
    pub header: &'static str,
    pub group: &'static str,
    pub map: &'static str,
}

pub(crate) const RING: Keywords = Keywords {
    header: "peirce",
    group: "block",
    map: "mult",
};

fn parse_index(tok: &str, rank: usize, line: usize) -> Result<usize, FormatError> {
    let v: usize = tok
        .parse()
        .map_err(|_| syntax(line, format!("bad index `{tok}`")))?;
    if v == 0 || v > rank {
        return Err(syntax(line, format!("index {v} outside 1..={rank}")));
    }
    Ok(v - 1)
}

fn parse_list(s: &str, line: usize) -> Result<Vec<i64>, FormatError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| syntax(line, format!("bad integer `{}`", t.trim())))
        })
        .collect()
}

pub(crate) fn parse_raw(text: &str, kw: &Keywords) -> Result<RawTable, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| syntax(1, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some(kw.header) {
        return Err(syntax(hl, format!("expected header `{} rank=.. modulus=..`", kw.header)));
    }
    let mut raw = RawTable::default();
    for t in toks {
        match t.split_once('=') {
            Some(("rank", v)) => raw.rank = v.parse().map_err(|_| syntax(hl, "bad rank"))?,
            Some(("modulus", v)) => raw.modulus = v.parse().map_err(|_| syntax(hl, "bad modulus"))?,
            _ => return Err(syntax(hl, format!("unexpected header field `{t}`"))),
        }
    }
    if raw.rank == 0 {
        return Err(syntax(hl, "rank must be at least 1"));
    }
    let rank = raw.rank;
    for (n, l) in lines {
        let (head, body) = l
            .split_once(':')
            .ok_or_else(|| syntax(n, "missing `:`"))?;
        let mut ht = head.split_whitespace();
        let word = ht.next().unwrap_or("");
        let idx: Vec<usize> = ht
            .map(|t| parse_index(t, rank, n))
            .collect::<Result<_, _>>()?;
        if word == kw.group {
            let [i, j] = idx[..] else {
                return Err(syntax(n, format!("`{}` takes two indices", kw.group)));
            };
            let orders = parse_list(body, n)?;
            let g = FinAbGroup::new(&orders).map_err(|e| syntax(n, e.to_string()))?;
            if raw.groups.insert((i, j), g).is_some() {
                return Err(syntax(n, "duplicate group line"));
            }
        } else if word == kw.map {
            let [i, j, k] = idx[..] else {
                return Err(syntax(n, format!("`{}` takes three indices", kw.map)));
            };
            let (lhs, rhs) = body
                .split_once("->")
                .ok_or_else(|| syntax(n, "expected `(a,b) -> [v]`"))?;
            let lhs = lhs
                .trim()
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| syntax(n, "expected `(a,b)`"))?;
            let ab = parse_list(lhs, n)?;
            let [a, b] = ab[..] else {
                return Err(syntax(n, "expected two generator indices"));
            };
            if a < 0 || b < 0 {
                return Err(syntax(n, "negative generator index"));
            }
            let rhs = rhs.trim();
            let rhs = rhs
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .unwrap_or(rhs);
            let v = parse_list(rhs, n)?;
            let slot = raw.entries.entry((i, j, k)).or_default();
            if slot.insert((a as usize, b as usize), v).is_some() {
                return Err(syntax(n, "duplicate product line"));
            }
        } else {
            return Err(syntax(n, format!("unknown line kind `{word}`")));
        }
    }
    Ok(raw)
}

impl RawTable {
    pub(crate) fn group(&self, i: usize, j: usize) -> FinAbGroup {
        self.groups.get(&(i, j)).cloned().unwrap_or_else(FinAbGroup::zero)
    }

    /// The bilinear map for `key` with the given domain and target; absent
    /// entries are zero.
    pub(crate) fn bilinear(
        &self,
        key: Key,
        left: &FinAbGroup,
        right: &FinAbGroup,
        target: &FinAbGroup,
    ) -> Result<Bilinear, FormatError> {
        let mut table = vec![vec![target.zero_elem(); right.rank()]; left.rank()];
        if let Some(es) = self.entries.get(&key) {
            for (&(a, b), v) in es {
                if a >= left.rank() || b >= right.rank() || v.len() != target.rank() {
                    return Err(syntax(
                        0,
                        format!(
                            "entry ({a},{b}) of {:?} does not fit groups of ranks {}, {}, {}",
                            (key.0 + 1, key.1 + 1, key.2 + 1),
                            left.rank(),
                            right.rank(),
                            target.rank()
                        ),
                    ));
                }
                table[a][b] = target.reduce(v);
            }
        }
        Ok(Bilinear::new(left.clone(), right.clone(), target.clone(), table).map_err(PeirceError::from)?)
    }
}

fn fmt_list(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub(crate) fn write_raw<'a>(
    kw: &Keywords,
    rank: usize,
    modulus: i64,
    group: impl Fn(usize, usize) -> Option<&'a FinAbGroup>,
    maps: impl Fn(usize, usize, usize) -> Option<&'a Bilinear>,
) -> String {
    let mut out = String::new();
    writeln!(out, "{} rank={rank} modulus={modulus}", kw.header).unwrap();
    for i in 0..rank {
        for j in 0..rank {
            let Some(g) = group(i, j) else { continue };
            let orders = fmt_list(g.orders());
            let sep = if orders.is_empty() { "" } else { " " };
            writeln!(out, "{} {} {}:{sep}{orders}", kw.group, i + 1, j + 1).unwrap();
        }
    }
    for i in 0..rank {
        for j in 0..rank {
            for k in 0..rank {
                let Some(m) = maps(i, j, k) else { continue };
                for (a, row) in m.table().iter().enumerate() {
                    for (b, v) in row.iter().enumerate() {
                        if v.iter().any(|&x| x != 0) {
                            writeln!(out, "{} {} {} {}: ({a},{b}) -> [{}]", kw.map, i + 1, j + 1, k + 1, fmt_list(v))
                                .unwrap();
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn write_ring(r: &PeirceRing) -> String {
    write_raw(&RING, r.rank(), r.modulus(), |i, j| Some(r.block(i, j)), |i, j, k| Some(r.mult(i, j, k)))
}

/// Parses and validates a ring, including associativity.
pub fn parse_ring(text: &str) -> Result<PeirceRing, FormatError> {
    let ring = parse_ring_unchecked(text)?;
    if let Some((indices, generators)) = ring.associativity_failure() {
        return Err(PeirceError::NotAssociative {
            indices: Some(indices),
            generators,
        }
        .into());
    }
    Ok(ring)
}

/// Parses a ring without the associativity check, so that corrupted tables
/// can still be inspected.
pub fn parse_ring_unchecked(text: &str) -> Result<PeirceRing, FormatError> {
    let raw = parse_raw(text, &RING)?;
    let l = raw.rank;
    let blocks: Vec<Vec<FinAbGroup>> = (0..l).map(|i| (0..l).map(|j| raw.group(i, j)).collect()).collect();
    let mut mult = Vec::with_capacity(l);
    for i in 0..l {
        let mut mi = Vec::with_capacity(l);
        for j in 0..l {
            let mut mij = Vec::with_capacity(l);
            for k in 0..l {
                mij.push(raw.bilinear((i, j, k), &blocks[i][j], &blocks[j][k], &blocks[i][k])?);
            }
            mi.push(mij);
        }
        mult.push(mi);
    }
    Ok(PeirceRing::new_unchecked(raw.modulus, blocks, mult)?)
}
