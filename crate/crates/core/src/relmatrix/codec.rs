//! Binary and TSV encodings of a [`RelevanceMatrix`].
//!
//! Binary layout (little endian): magic `RELM`, `u32` version, three
//! length-prefixed UTF-8 strings (vocabulary hash, stopword hash, config
//! hash), `u32` radius, `f64` threshold, `u64` total positions, `u64`
//! vocabulary size, `u64` cell count, then `(u32, u32, f64)` triples with
//! the first id strictly smaller than the second.

use std::fmt::Write as _;

use super::{MatrixMeta, RelevanceMatrix};
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"RELM";
pub const VERSION: u32 = 1;

pub fn encode_binary(m: &RelevanceMatrix) -> Vec<u8> {
    let meta = m.meta();
    let mut out = Vec::with_capacity(64 + m.nnz() * 16);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for s in [&meta.vocab_hash, &meta.stopword_hash, &meta.config_hash] {
        out.extend_from_slice(&(s.len() as u32).to_le_bytes());
        out.extend_from_slice(s.as_bytes());
    }
    out.extend_from_slice(&meta.radius.to_le_bytes());
    out.extend_from_slice(&meta.threshold.to_le_bytes());
    out.extend_from_slice(&meta.total_positions.to_le_bytes());
    out.extend_from_slice(&meta.vocab_size.to_le_bytes());
    out.extend_from_slice(&(m.nnz() as u64).to_le_bytes());
    for &(a, b, v) in m.cells() {
        out.extend_from_slice(&a.to_le_bytes());
        out.extend_from_slice(&b.to_le_bytes());
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(Error::parse(
                format!("matrix byte {}", self.pos),
                "unexpected end of data",
            ));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn string(&mut self) -> Result<String> {
        let len = self.u32()? as usize;
        let at = self.pos;
        String::from_utf8(self.take(len)?.to_vec())
            .map_err(|_| Error::parse(format!("matrix byte {at}"), "header string is not UTF-8"))
    }
}

pub fn decode_binary(bytes: &[u8]) -> Result<RelevanceMatrix> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::parse("matrix byte 0", "bad magic"));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::parse("matrix byte 4", format!("unsupported version {version}")));
    }
    let meta = MatrixMeta {
        vocab_hash: r.string()?,
        stopword_hash: r.string()?,
        config_hash: r.string()?,
        radius: r.u32()?,
        threshold: r.f64()?,
        total_positions: r.u64()?,
        vocab_size: r.u64()?,
    };
    let n = r.u64()? as usize;
    if (bytes.len() - r.pos) != n.saturating_mul(16) {
        return Err(Error::parse(
            format!("matrix byte {}", r.pos),
            format!("expected {n} cells of 16 bytes"),
        ));
    }
    let mut cells = Vec::with_capacity(n);
    for _ in 0..n {
        cells.push((r.u32()?, r.u32()?, r.f64()?));
    }
    RelevanceMatrix::from_cells(meta, cells)
}

pub fn encode_tsv(m: &RelevanceMatrix, tool: &str) -> String {
    let meta = m.meta();
    let mut out = String::new();
    let _ = writeln!(out, "# relevance-matrix v{VERSION}");
    let _ = writeln!(out, "# tool={tool}");
    let _ = writeln!(out, "# vocab_hash={}", meta.vocab_hash);
    let _ = writeln!(out, "# stopword_hash={}", meta.stopword_hash);
    let _ = writeln!(out, "# config_hash={}", meta.config_hash);
    let _ = writeln!(out, "# radius={}", meta.radius);
    let _ = writeln!(out, "# threshold={}", meta.threshold);
    let _ = writeln!(out, "# total_positions={}", meta.total_positions);
    let _ = writeln!(out, "# vocab_size={}", meta.vocab_size);
    for &(a, b, v) in m.cells() {
        let _ = writeln!(out, "{a}\t{b}\t{v}");
    }
    out
}

pub fn decode_tsv(text: &str, source: &str) -> Result<RelevanceMatrix> {
    let mut fields = std::collections::HashMap::new();
    let mut cells = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let loc = || format!("{source}:{}", i + 1);
        if let Some(h) = line.strip_prefix('#') {
            if let Some((k, v)) = h.trim().split_once('=') {
                fields.insert(k.to_string(), v.to_string());
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split('\t');
        let mut next = |what: &str| {
            cols.next()
                .ok_or_else(|| Error::parse(loc(), format!("missing {what}")))
                .map(str::to_string)
        };
        let a = next("first id")?.parse().map_err(|_| Error::parse(loc(), "bad id"))?;
        let b = next("second id")?.parse().map_err(|_| Error::parse(loc(), "bad id"))?;
        let v = next("weight")?.parse().map_err(|_| Error::parse(loc(), "bad weight"))?;
        cells.push((a, b, v));
    }
    let get = |k: &str| {
        fields
            .get(k)
            .cloned()
            .ok_or_else(|| Error::parse(source, format!("missing header field `{k}`")))
    };
    let meta = MatrixMeta {
        vocab_hash: get("vocab_hash")?,
        stopword_hash: get("stopword_hash")?,
        config_hash: get("config_hash")?,
        radius: get("radius")?.parse().map_err(|_| Error::parse(source, "bad radius"))?,
        threshold: get("threshold")?
            .parse()
            .map_err(|_| Error::parse(source, "bad threshold"))?,
        total_positions: get("total_positions")?
            .parse()
            .map_err(|_| Error::parse(source, "bad total_positions"))?,
        vocab_size: get("vocab_size")?
            .parse()
            .map_err(|_| Error::parse(source, "bad vocab_size"))?,
    };
    RelevanceMatrix::from_cells(meta, cells)
}

/// Pick a codec by inspecting the first bytes.
pub fn decode_any(bytes: &[u8], source: &str) -> Result<RelevanceMatrix> {
    if bytes.starts_with(MAGIC) {
        decode_binary(bytes)
    } else {
        let text =
            std::str::from_utf8(bytes).map_err(|_| Error::parse(source, "matrix file is neither binary nor UTF-8"))?;
        decode_tsv(text, source)
    }
}
