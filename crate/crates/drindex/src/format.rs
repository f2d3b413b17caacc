//! On-disk index file.
//!
//! Layout, all integers little-endian and fixed width:
//!
//! ```text
//! "DRIX"  version:u16  n:u64  r:u64
//! 6 x ( byte_len:u64  payload )      s1, s2, s3, s4, sa_s, sa_e
//! crc:u32                             CRC32 of every preceding byte
//! ```
//!
//! `s1` is one byte per run; every other payload is a sequence of u64. The
//! samples are stored in run order.

use std::fs;
use std::io::Write;
use std::path::Path;

use drindex_core::{DynamicRIndex, RlbwtIndex, SampledSa};
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"DRIX";
pub const VERSION: u16 = 1;

const HEADER_LEN: usize = 4 + 2 + 8 + 8;
const PAYLOADS: usize = 6;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("not an index file (bad magic)")]
    BadMagic,
    #[error("unsupported format version {0}")]
    Version(u16),
    #[error("file truncated")]
    Truncated,
    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { stored: u32, computed: u32 },
    #[error("malformed payload: {0}")]
    Payload(&'static str),
    #[error("inconsistent index: {0}")]
    Index(#[from] drindex_core::Error),
}

pub fn encode(ix: &DynamicRIndex) -> Vec<u8> {
    let (s1, s2, s3, s4) = ix.rlbwt().sequences();
    let words = [s2, s3, s4, ix.sa_s().values(), ix.sa_e().values()];
    let size = HEADER_LEN + 8 * PAYLOADS + s1.len() + words.iter().map(|w| 8 * w.len()).sum::<usize>() + 4;
    let mut out = Vec::with_capacity(size);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(ix.len() as u64).to_le_bytes());
    out.extend_from_slice(&(ix.run_count() as u64).to_le_bytes());
    out.extend_from_slice(&(s1.len() as u64).to_le_bytes());
    out.extend_from_slice(&s1);
    for w in &words {
        out.extend_from_slice(&(8 * w.len() as u64).to_le_bytes());
        for &v in w {
            out.extend_from_slice(&(v as u64).to_le_bytes());
        }
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    debug_assert_eq!(out.len(), size);
    out
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8], FormatError> {
        if self.buf.len() < k {
            return Err(FormatError::Truncated);
        }
        let (head, rest) = self.buf.split_at(k);
        self.buf = rest;
        Ok(head)
    }

    fn u64(&mut self) -> Result<u64, FormatError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn usize(&mut self) -> Result<usize, FormatError> {
        usize::try_from(self.u64()?).map_err(|_| FormatError::Payload("value exceeds the address space"))
    }

    fn payload(&mut self) -> Result<&'a [u8], FormatError> {
        let len = self.usize()?;
        self.take(len)
    }

    fn words(&mut self, expected: usize) -> Result<Vec<usize>, FormatError> {
        let bytes = self.payload()?;
        if bytes.len() != 8 * expected {
            return Err(FormatError::Payload("payload length disagrees with r"));
        }
        bytes
            .chunks_exact(8)
            .map(|c| usize::try_from(u64::from_le_bytes(c.try_into().unwrap())).map_err(|_| FormatError::Payload("value exceeds the address space")))
            .collect()
    }
}

pub fn decode(bytes: &[u8]) -> Result<DynamicRIndex, FormatError> {
    if bytes.len() < HEADER_LEN + 4 {
        return Err(FormatError::Truncated);
    }
    if &bytes[..4] != MAGIC {
        return Err(FormatError::BadMagic);
    }
    let (body, tail) = bytes.split_at(bytes.len() - 4);
    let stored = u32::from_le_bytes(tail.try_into().unwrap());
    let computed = crc32fast::hash(body);
    if stored != computed {
        return Err(FormatError::Checksum { stored, computed });
    }
    let version = u16::from_le_bytes(body[4..6].try_into().unwrap());
    if version != VERSION {
        return Err(FormatError::Version(version));
    }
    let mut rd = Reader { buf: &body[6..] };
    let n = rd.usize()?;
    let r = rd.usize()?;
    let s1 = rd.payload()?.to_vec();
    if s1.len() != r {
        return Err(FormatError::Payload("s1 length disagrees with r"));
    }
    let s2 = rd.words(r)?;
    let s3 = rd.words(r)?;
    let s4 = rd.words(r + 1)?;
    let sa_s = rd.words(r)?;
    let sa_e = rd.words(r)?;
    if !rd.buf.is_empty() {
        return Err(FormatError::Payload("trailing bytes before the checksum"));
    }
    let rlbwt = RlbwtIndex::from_sequences(&s1, &s2, &s3, &s4)?;
    if rlbwt.len() != n {
        return Err(FormatError::Payload("run lengths disagree with n"));
    }
    let ix = DynamicRIndex::from_parts(rlbwt, SampledSa::from_values(&sa_s, n)?, SampledSa::from_values(&sa_e, n)?)?;
    Ok(ix)
}

pub fn read_index(path: &Path) -> Result<DynamicRIndex, FormatError> {
    decode(&fs::read(path)?)
}

/// Writes the index next to `path` and renames it into place, so a reader
/// sees either the old file or the new one.
pub fn write_index(path: &Path, ix: &DynamicRIndex) -> Result<(), FormatError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&encode(ix))?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| FormatError::Io(e.error))?;
    Ok(())
}
