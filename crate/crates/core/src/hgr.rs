//! The line-oriented HGR text format.
//!
//! ```text
//! # optional comments
//! hgr k=3 h=2 parts=2,2,2 signed=0
//! e 0:0 1:1
//! e 1:0 2:1
//! ```
//!
//! Signed files set `signed=1` and put `+` or `-` after each `e`. Vertex
//! tokens are `part:index` in strictly increasing part order.

use std::fmt::Write as _;
use std::path::Path;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::hypergraph::{KPartiteHypergraph, RawHypergraph, VertexRef};
use crate::template::{Sign, SignedHypergraph};

/// A parsed HGR file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HgrDocument {
    Unsigned(KPartiteHypergraph),
    Signed(SignedHypergraph),
}

impl HgrDocument {
    pub fn into_unsigned(self) -> Result<KPartiteHypergraph> {
        match self {
            HgrDocument::Unsigned(g) => Ok(g),
            HgrDocument::Signed(_) => Err(Error::precondition(
                "expected an unsigned hypergraph (signed=0)",
            )),
        }
    }

    pub fn into_signed(self) -> Result<SignedHypergraph> {
        match self {
            HgrDocument::Signed(t) => Ok(t),
            HgrDocument::Unsigned(_) => Err(Error::precondition(
                "expected a signed hypergraph (signed=1)",
            )),
        }
    }

    /// The sign-blind hypergraph of either variant.
    pub fn into_base(self) -> KPartiteHypergraph {
        match self {
            HgrDocument::Unsigned(g) => g,
            HgrDocument::Signed(t) => t.base().clone(),
        }
    }
}

fn header(k: usize, h: usize, parts: &[usize], signed: bool) -> String {
    format!(
        "hgr k={k} h={h} parts={} signed={}\n",
        parts.iter().join(","),
        u8::from(signed)
    )
}

pub fn write_hgr(g: &KPartiteHypergraph) -> String {
    let mut out = header(g.k(), g.h(), g.part_sizes(), false);
    for e in g.edges() {
        writeln!(out, "e {e}").unwrap();
    }
    out
}

pub fn write_signed_hgr(t: &SignedHypergraph) -> String {
    let base = t.base();
    let mut out = header(base.k(), base.h(), base.part_sizes(), true);
    for (e, sign) in t.signed_edges() {
        writeln!(out, "e {} {e}", sign.symbol()).unwrap();
    }
    out
}

pub fn read_hgr(path: impl AsRef<Path>) -> Result<HgrDocument> {
    parse_hgr(&std::fs::read_to_string(path)?)
}

fn parse_usize(line: usize, token: &str, what: &str) -> Result<usize> {
    token.parse().map_err(|_| {
        Error::parse(
            line,
            format!("{what} `{token}` is not a non-negative integer"),
        )
    })
}

fn parse_header(line: usize, text: &str) -> Result<(usize, usize, Vec<usize>, bool)> {
    let mut tokens = text.split_whitespace();
    if tokens.next() != Some("hgr") {
        return Err(Error::parse(
            line,
            "expected header `hgr k=.. h=.. parts=.. signed=..`",
        ));
    }
    let (mut k, mut h, mut parts, mut signed) = (None, None, None, None);
    for token in tokens {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("malformed header field `{token}`")))?;
        let slot_taken = match key {
            "k" => k.replace(parse_usize(line, value, "k")?).is_some(),
            "h" => h.replace(parse_usize(line, value, "h")?).is_some(),
            "parts" => parts
                .replace(
                    value
                        .split(',')
                        .map(|v| parse_usize(line, v, "part size"))
                        .collect::<Result<Vec<_>>>()?,
                )
                .is_some(),
            "signed" => signed
                .replace(match value {
                    "0" => false,
                    "1" => true,
                    _ => {
                        return Err(Error::parse(
                            line,
                            format!("signed must be 0 or 1, got `{value}`"),
                        ))
                    }
                })
                .is_some(),
            _ => return Err(Error::parse(line, format!("unknown header field `{key}`"))),
        };
        if slot_taken {
            return Err(Error::parse(
                line,
                format!("header field `{key}` given twice"),
            ));
        }
    }
    let missing = |name| Error::parse(line, format!("header is missing `{name}`"));
    let k = k.ok_or_else(|| missing("k"))?;
    let h = h.ok_or_else(|| missing("h"))?;
    let parts = parts.ok_or_else(|| missing("parts"))?;
    let signed = signed.ok_or_else(|| missing("signed"))?;
    if parts.len() != k {
        return Err(Error::parse(
            line,
            format!("k = {k} but {} part sizes given", parts.len()),
        ));
    }
    if h < 2 || h >= k {
        return Err(Error::parse(
            line,
            format!("need 2 <= h < k, got h = {h}, k = {k}"),
        ));
    }
    if parts.contains(&0) {
        return Err(Error::parse(line, "part sizes must be positive"));
    }
    Ok((k, h, parts, signed))
}

fn parse_vertex(line: usize, token: &str, parts: &[usize]) -> Result<VertexRef> {
    let (p, i) = token.split_once(':').ok_or_else(|| {
        Error::parse(
            line,
            format!("malformed vertex token `{token}`, expected part:index"),
        )
    })?;
    let v = VertexRef::new(
        parse_usize(line, p, "part")?,
        parse_usize(line, i, "index")?,
    );
    match parts.get(v.part) {
        Some(&size) if v.index < size => Ok(v),
        Some(_) => Err(Error::parse(
            line,
            format!("vertex {v}: index out of range"),
        )),
        None => Err(Error::parse(line, format!("vertex {v}: part out of range"))),
    }
}

pub fn parse_hgr(text: &str) -> Result<HgrDocument> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, htext) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let (k, h, parts, signed) = parse_header(hline, htext)?;

    let mut edges = Vec::new();
    let mut signs = Vec::new();
    let mut seen = std::collections::HashMap::new();
    for (line, text) in lines {
        let mut tokens = text.split_whitespace();
        if tokens.next() != Some("e") {
            return Err(Error::parse(
                line,
                format!("expected an edge line, got `{text}`"),
            ));
        }
        if signed {
            signs.push(match tokens.next() {
                Some("+") => Sign::Positive,
                Some("-") => Sign::Negative,
                other => {
                    return Err(Error::parse(
                        line,
                        format!("expected sign + or -, got `{}`", other.unwrap_or("")),
                    ))
                }
            });
        }
        let vertices = tokens
            .map(|t| parse_vertex(line, t, &parts))
            .collect::<Result<Vec<_>>>()?;
        if vertices.len() != h {
            return Err(Error::parse(
                line,
                format!("edge has {} vertices, expected {h}", vertices.len()),
            ));
        }
        if vertices.windows(2).any(|w| w[0].part >= w[1].part) {
            return Err(Error::parse(
                line,
                "vertex parts must be strictly increasing",
            ));
        }
        if let Some(first) = seen.insert(vertices.clone(), line) {
            return Err(Error::parse(
                line,
                format!("duplicate edge (first on line {first})"),
            ));
        }
        edges.push(vertices);
    }

    if signed {
        let signed_edges = edges.into_iter().zip(signs).collect();
        Ok(HgrDocument::Signed(SignedHypergraph::new(
            k,
            h,
            parts,
            signed_edges,
        )?))
    } else {
        let raw = RawHypergraph {
            k,
            h,
            part_sizes: parts,
            edges,
        };
        Ok(HgrDocument::Unsigned(raw.into_hypergraph()?))
    }
}
