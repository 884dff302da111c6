//! Shard files: one file per column, stripes concatenated inside it.
//!
//! Header layout, all integers little-endian:
//!
//! | field              | size            |
//! |--------------------|-----------------|
//! | magic `ARRCD1`     | 6               |
//! | version (1)        | 1               |
//! | family (0/1)       | 1               |
//! | p, k, r            | 2 each          |
//! | g_len              | 2               |
//! | g entries          | 2 x g_len       |
//! | column_index       | 4               |
//! | stripe_count       | 8               |
//! | payload_byte_len   | 8               |
//! | original_file_len  | 8               |
//!
//! The payload stores each stripe's `p - 1` column bits LSB-first in
//! `ceil((p - 1) / 8)` bytes.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::codes::{encode_any, CodeParams, CodewordArray, Family};
use crate::decoder::{Decoder, ErasureSpec};
use crate::error::{Error, Result};
use crate::ring::{RingPoly, XorTally};

pub const MAGIC: &[u8; 6] = b"ARRCD1";
pub const VERSION: u8 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShardHeader {
    pub family: Family,
    pub p: u16,
    pub k: u16,
    pub r: u16,
    pub g: Vec<u16>,
    pub column_index: u32,
    pub stripe_count: u64,
    pub payload_byte_len: u64,
    /// Length of the encoded file; only set on information shards.
    pub original_file_len: u64,
}

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn narrow<T: TryFrom<usize>>(v: usize, what: &str) -> Result<T> {
    T::try_from(v).map_err(|_| fmt_err(format!("{what}={v} does not fit the shard header")))
}

/// Bytes used by one column of one stripe.
pub fn bytes_per_column(p: usize) -> usize {
    (p - 1).div_ceil(8)
}

impl ShardHeader {
    pub fn for_column(params: &CodeParams, column_index: usize, stripe_count: u64, original_file_len: u64) -> Result<Self> {
        let g = params.g().iter().map(|&v| narrow(v, "g entry")).collect::<Result<_>>()?;
        Ok(Self {
            family: params.family(),
            p: narrow(params.p(), "p")?,
            k: narrow(params.k(), "k")?,
            r: narrow(params.r(), "r")?,
            g,
            column_index: narrow(column_index, "column index")?,
            stripe_count,
            payload_byte_len: stripe_count * bytes_per_column(params.p()) as u64,
            original_file_len: if column_index < params.k() { original_file_len } else { 0 },
        })
    }

    /// Code parameters recorded in the header, validated without the MDS
    /// restrictions.
    pub fn params(&self) -> Result<CodeParams> {
        let g = self.g.iter().map(|&v| v as usize).collect();
        CodeParams::new(self.family, self.p as usize, self.k as usize, self.r as usize, Some(g), false)
            .map_err(|e| fmt_err(format!("header parameters are invalid: {e}")))
    }

    pub fn encoded_len(&self) -> usize {
        6 + 1 + 1 + 2 * 4 + 2 * self.g.len() + 4 + 8 * 3
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        let mut buf = Vec::with_capacity(self.encoded_len());
        buf.extend_from_slice(MAGIC);
        buf.push(VERSION);
        buf.push(self.family.tag());
        for v in [self.p, self.k, self.r, narrow(self.g.len(), "g length")?] {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        for v in &self.g {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        buf.extend_from_slice(&self.column_index.to_le_bytes());
        for v in [self.stripe_count, self.payload_byte_len, self.original_file_len] {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_from(rd: &mut impl Read) -> Result<Self> {
        fn take<const N: usize>(rd: &mut impl Read) -> Result<[u8; N]> {
            let mut b = [0u8; N];
            rd.read_exact(&mut b).map_err(|e| fmt_err(format!("truncated shard header: {e}")))?;
            Ok(b)
        }
        if &take::<6>(rd)? != MAGIC {
            return Err(fmt_err("bad magic"));
        }
        let [version] = take::<1>(rd)?;
        if version != VERSION {
            return Err(fmt_err(format!("unsupported version {version}")));
        }
        let [tag] = take::<1>(rd)?;
        let family = Family::from_tag(tag).ok_or_else(|| fmt_err(format!("unknown family tag {tag}")))?;
        let mut next16 = || take::<2>(rd).map(u16::from_le_bytes);
        let (p, k, r, g_len) = (next16()?, next16()?, next16()?, next16()?);
        let g = (0..g_len).map(|_| next16()).collect::<Result<Vec<_>>>()?;
        let column_index = u32::from_le_bytes(take::<4>(rd)?);
        let stripe_count = u64::from_le_bytes(take::<8>(rd)?);
        let payload_byte_len = u64::from_le_bytes(take::<8>(rd)?);
        let original_file_len = u64::from_le_bytes(take::<8>(rd)?);
        let header =
            Self { family, p, k, r, g, column_index, stripe_count, payload_byte_len, original_file_len };
        header.check()?;
        Ok(header)
    }

    fn check(&self) -> Result<()> {
        let params = self.params()?;
        if self.column_index as usize >= params.n() {
            return Err(fmt_err(format!("column index {} is not below k+r={}", self.column_index, params.n())));
        }
        if self.payload_byte_len != self.stripe_count * bytes_per_column(params.p()) as u64 {
            return Err(fmt_err("payload length does not match stripe count"));
        }
        if self.column_index as usize >= params.k() && self.original_file_len != 0 {
            return Err(fmt_err("parity shard carries a file length"));
        }
        Ok(())
    }

    /// True when two headers describe the same shard set.
    pub fn same_set(&self, other: &Self) -> bool {
        (self.family, self.p, self.k, self.r, &self.g, self.stripe_count)
            == (other.family, other.p, other.k, other.r, &other.g, other.stripe_count)
    }
}

/// A shard file held in memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shard {
    pub header: ShardHeader,
    pub payload: Vec<u8>,
}

impl Shard {
    pub fn from_columns(header: ShardHeader, columns: &[RingPoly]) -> Self {
        let p = header.p as usize;
        let mut payload = Vec::with_capacity(columns.len() * bytes_per_column(p));
        for c in columns {
            pack_column(c, &mut payload);
        }
        Self { header, payload }
    }

    /// The column of stripe `s`.
    pub fn column(&self, s: usize) -> Result<RingPoly> {
        let p = self.header.p as usize;
        let w = bytes_per_column(p);
        unpack_column(&self.payload[s * w..(s + 1) * w], p)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(fs::File::create(path)?);
        self.header.write_to(&mut f)?;
        f.write_all(&self.payload)?;
        f.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = fs::read(path)?;
        let mut cursor = bytes.as_slice();
        let header = ShardHeader::read_from(&mut cursor)?;
        if cursor.len() as u64 != header.payload_byte_len {
            return Err(fmt_err(format!(
                "{}: payload has {} bytes, header says {}",
                path.display(),
                cursor.len(),
                header.payload_byte_len
            )));
        }
        let shard = Self { header, payload: cursor.to_vec() };
        let p = shard.header.p as usize;
        let pad = bytes_per_column(p) * 8 - (p - 1);
        if pad > 0 {
            let w = bytes_per_column(p);
            let mask = !(0xffu8 >> pad);
            if shard.payload.chunks(w).any(|c| c[w - 1] & mask != 0) {
                return Err(fmt_err(format!("{}: nonzero padding bits", path.display())));
            }
        }
        Ok(shard)
    }
}

/// Appends the `p - 1` stored bits of a column, LSB-first.
pub fn pack_column(col: &RingPoly, out: &mut Vec<u8>) {
    let p = col.p();
    let w = bytes_per_column(p);
    if p <= 65 {
        let mut word = 0u64;
        for i in 0..p - 1 {
            word |= u64::from(col.bit(i)) << i;
        }
        out.extend_from_slice(&word.to_le_bytes()[..w]);
        return;
    }
    let start = out.len();
    out.resize(start + w, 0);
    for i in (0..p - 1).filter(|&i| col.bit(i)) {
        out[start + i / 8] |= 1 << (i % 8);
    }
}

pub fn unpack_column(bytes: &[u8], p: usize) -> Result<RingPoly> {
    if bytes.len() != bytes_per_column(p) {
        return Err(fmt_err("column slice has the wrong length"));
    }
    let bit = |i: usize| (bytes[i / 8] >> (i % 8)) & 1 == 1;
    if (p - 1..bytes.len() * 8).any(bit) {
        return Err(fmt_err("nonzero padding bits"));
    }
    if p <= 64 {
        let mut word = [0u8; 8];
        word[..bytes.len()].copy_from_slice(bytes);
        return Ok(RingPoly::from_word(p, u64::from_le_bytes(word)));
    }
    Ok(RingPoly::from_coeffs(p, (0..p - 1).map(bit)))
}

/// Information columns of stripe `s`, filled row-major from the file's
/// bits (LSB-first within each byte); bits past the end are zero.
pub fn stripe_info(bytes: &[u8], params: &CodeParams, s: usize) -> Vec<RingPoly> {
    let (p, k) = (params.p(), params.k());
    let per_stripe = (p - 1) * k;
    let total_bits = bytes.len() * 8;
    let base = s * per_stripe;
    let mut cols = vec![RingPoly::zero(p); k];
    for t in 0..per_stripe.min(total_bits.saturating_sub(base)) {
        let b = base + t;
        if (bytes[b / 8] >> (b % 8)) & 1 == 1 {
            cols[t % k].set_bit(t / k, true);
        }
    }
    cols
}

pub fn stripe_count(len: usize, params: &CodeParams) -> usize {
    (len * 8).div_ceil((params.p() - 1) * params.k())
}

/// Every stripe of a file; the last one is zero-padded.
pub fn split_file(bytes: &[u8], params: &CodeParams) -> Vec<Vec<RingPoly>> {
    (0..stripe_count(bytes.len(), params)).map(|s| stripe_info(bytes, params, s)).collect()
}

/// Writes the information bits of stripe `s` into `out`, dropping bits
/// beyond its end.
pub fn store_stripe_bits(out: &mut [u8], params: &CodeParams, s: usize, info: &[RingPoly]) {
    let k = params.k();
    let per_stripe = (params.p() - 1) * k;
    let total_bits = out.len() * 8;
    let base = s * per_stripe;
    for t in 0..per_stripe.min(total_bits.saturating_sub(base)) {
        if info[t % k].bit(t / k) {
            let b = base + t;
            out[b / 8] |= 1 << (b % 8);
        }
    }
}

/// Inverse of [`split_file`]: concatenates stripe bits and truncates to
/// `original_len` bytes.
pub fn join_stripes(stripes: &[Vec<RingPoly>], params: &CodeParams, original_len: usize) -> Result<Vec<u8>> {
    if stripes.len() < stripe_count(original_len, params) {
        return Err(fmt_err(format!("{} stripes cannot hold {original_len} bytes", stripes.len())));
    }
    let mut out = vec![0u8; original_len];
    for (s, cols) in stripes.iter().enumerate() {
        store_stripe_bits(&mut out, params, s, cols);
    }
    Ok(out)
}

/// Padding bits in the final stripe.
pub fn padding_bits(len: usize, params: &CodeParams) -> usize {
    let per_stripe = (params.p() - 1) * params.k();
    let bits = len * 8;
    bits.div_ceil(per_stripe) * per_stripe - bits
}

pub fn shard_path(dir: &Path, column: usize) -> PathBuf {
    dir.join(format!("col{column}.shard"))
}

/// Reads every `col{j}.shard` present for the given column count; missing
/// files are `None`. All headers must describe the same shard set.
pub fn read_shard_set(dir: &Path) -> Result<(ShardHeader, Vec<Option<Shard>>)> {
    let first = fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "shard"))
        .min()
        .ok_or_else(|| fmt_err(format!("no shard files in {}", dir.display())))?;
    let reference = Shard::read(&first)?.header;
    let n = reference.k as usize + reference.r as usize;
    let mut shards = Vec::with_capacity(n);
    for j in 0..n {
        let path = shard_path(dir, j);
        if !path.exists() {
            shards.push(None);
            continue;
        }
        let shard = Shard::read(&path)?;
        if !shard.header.same_set(&reference) {
            return Err(fmt_err(format!("{} belongs to a different shard set", path.display())));
        }
        if shard.header.column_index as usize != j {
            return Err(fmt_err(format!("{} holds column {}", path.display(), shard.header.column_index)));
        }
        shards.push(Some(shard));
    }
    let lens: Vec<u64> = shards[..reference.k as usize].iter().flatten().map(|s| s.header.original_file_len).collect();
    if lens.windows(2).any(|w| w[0] != w[1]) {
        return Err(fmt_err("information shards disagree on the file length"));
    }
    Ok((reference, shards))
}

// stripes handled per parallel batch, bounding memory on large files
const BATCH: usize = 1 << 14;

/// Encodes `data` and writes one shard per column into `out_dir`.
pub fn encode_to_dir(params: &CodeParams, data: &[u8], out_dir: &Path) -> Result<u64> {
    fs::create_dir_all(out_dir)?;
    let stripes = stripe_count(data.len(), params);
    let w = bytes_per_column(params.p());
    let mut payloads = vec![Vec::with_capacity(stripes * w); params.n()];
    for start in (0..stripes).step_by(BATCH) {
        let encoded: Vec<Vec<RingPoly>> = (start..stripes.min(start + BATCH))
            .into_par_iter()
            .map(|s| {
                let info = stripe_info(data, params, s);
                encode_any(params, &info, &mut XorTally::new()).map(CodewordArray::into_columns)
            })
            .collect::<Result<_>>()?;
        for cols in &encoded {
            for (payload, c) in payloads.iter_mut().zip(cols) {
                pack_column(c, payload);
            }
        }
    }
    for (j, payload) in payloads.into_iter().enumerate() {
        let header = ShardHeader::for_column(params, j, stripes as u64, data.len() as u64)?;
        Shard { header, payload }.write(&shard_path(out_dir, j))?;
    }
    Ok(stripes as u64)
}

/// Result of decoding a shard directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovered {
    pub params: CodeParams,
    pub erased: Vec<usize>,
    pub used_lu: bool,
    pub data: Vec<u8>,
    /// Rebuilt shards for the erased columns, in erased-column order.
    pub rebuilt: Vec<Shard>,
}

/// Reads a shard directory, treats missing files as erasures and
/// reconstructs the original file and the missing shards.
pub fn decode_dir(dir: &Path) -> Result<Recovered> {
    let (header, shards) = read_shard_set(dir)?;
    let params = header.params()?;
    let erased: Vec<usize> = (0..params.n()).filter(|&j| shards[j].is_none()).collect();
    let erasures = ErasureSpec::new(&params, &erased)?;
    let decoder = Decoder::new(&params, &erasures)?;
    let stripes = header.stripe_count as usize;
    let original_len = match shards[..params.k()].iter().flatten().next() {
        Some(s) => s.header.original_file_len as usize,
        None if stripes == 0 => 0,
        None => return Err(fmt_err("every information shard is missing, so the file length is unknown")),
    };
    if stripe_count(original_len, &params) != stripes {
        return Err(fmt_err(format!("{stripes} stripes do not match a file of {original_len} bytes")));
    }
    let mut data = vec![0u8; original_len];
    let w = bytes_per_column(params.p());
    let mut rebuilt: Vec<Vec<u8>> = vec![Vec::with_capacity(stripes * w); erased.len()];
    for start in (0..stripes).step_by(BATCH) {
        let decoded: Vec<Vec<RingPoly>> = (start..stripes.min(start + BATCH))
            .into_par_iter()
            .map(|s| {
                let damaged = shards.iter().map(|sh| sh.as_ref().map(|sh| sh.column(s)).transpose()).collect::<Result<Vec<_>>>()?;
                Ok(decoder.decode(&damaged)?.0.into_columns())
            })
            .collect::<Result<_>>()?;
        for (off, cols) in decoded.iter().enumerate() {
            store_stripe_bits(&mut data, &params, start + off, &cols[..params.k()]);
            for (buf, &j) in rebuilt.iter_mut().zip(&erased) {
                pack_column(&cols[j], buf);
            }
        }
    }
    let rebuilt = erased
        .iter()
        .zip(rebuilt)
        .map(|(&j, payload)| {
            Ok(Shard { header: ShardHeader::for_column(&params, j, stripes as u64, original_len as u64)?, payload })
        })
        .collect::<Result<_>>()?;
    Ok(Recovered { params, erased, used_lu: decoder.uses_lu(), data, rebuilt })
}

/// Parity columns whose stored shards disagree with a fresh encoding of the
/// information shards.
#[derive(Debug, Clone, PartialEq, Eq, Default, serde::Serialize)]
pub struct VerifyReport {
    pub mismatched: Vec<usize>,
    pub missing: Vec<usize>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatched.is_empty() && self.missing.is_empty()
    }
}

pub fn verify_dir(dir: &Path) -> Result<VerifyReport> {
    let (header, shards) = read_shard_set(dir)?;
    let params = header.params()?;
    let k = params.k();
    let missing: Vec<usize> = (0..params.n()).filter(|&j| shards[j].is_none()).collect();
    if let Some(j) = missing.iter().find(|&&j| j < k) {
        return Err(fmt_err(format!("information shard {j} is missing; decode it first")));
    }
    let stripes = header.stripe_count as usize;
    let bad: Vec<bool> = (0..stripes)
        .into_par_iter()
        .map(|s| {
            let info = (0..k).map(|j| shards[j].as_ref().expect("checked").column(s)).collect::<Result<Vec<_>>>()?;
            let fresh = encode_any(&params, &info, &mut XorTally::new())?;
            (k..params.n())
                .map(|j| Ok(shards[j].as_ref().map(|sh| sh.column(s)).transpose()?.is_some_and(|c| &c != fresh.column(j))))
                .collect::<Result<Vec<bool>>>()
        })
        .try_fold(|| vec![false; params.r()], |mut acc, row| {
            for (a, b) in acc.iter_mut().zip(row?) {
                *a |= b;
            }
            Ok::<_, Error>(acc)
        })
        .try_reduce(|| vec![false; params.r()], |a, b| Ok(a.iter().zip(&b).map(|(x, y)| x | y).collect()))?;
    let mismatched = bad.iter().enumerate().filter(|(_, &b)| b).map(|(l, _)| k + l).collect();
    Ok(VerifyReport { mismatched, missing })
}
