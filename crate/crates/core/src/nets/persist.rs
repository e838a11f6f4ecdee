//! Binary net files.
//!
//! Header (little-endian): magic `DIFFNET\0`, format version `u32`, `N u32`,
//! `d u32`, level `i32`, radius `f64`, word length `u32`, point count `u64`,
//! 32-byte gate-set fingerprint, 32-byte SHA-256 of the record section.
//! Each record is a `u32` word length, one byte per gate index and `d`
//! `f64` vector components. Matrices are recomputed from the words on load.

use std::fs;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gateset::{evaluate_word, Fingerprint, GateSet, Word};
use crate::geometry::SuVector;

use super::{EpsilonNet, NetPoint};

pub const NET_FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"DIFFNET\0";
const HEADER_LEN: usize = 8 + 4 + 4 + 4 + 4 + 8 + 4 + 8 + 32 + 32;

#[derive(Clone, Debug, PartialEq)]
pub struct NetHeader {
    pub version: u32,
    pub dim: usize,
    pub algebra_dim: usize,
    pub level: i32,
    pub radius: f64,
    pub word_len: usize,
    pub count: u64,
    pub fingerprint: Fingerprint,
    pub checksum: [u8; 32],
}

pub fn save_net(net: &EpsilonNet, path: impl AsRef<Path>) -> Result<()> {
    let d = net.algebra_dim();
    let mut records = Vec::with_capacity(net.len() * (4 + net.word_len() + 8 * d));
    for p in net.points() {
        records.extend_from_slice(&(p.word.len() as u32).to_le_bytes());
        records.extend_from_slice(p.word.indices());
        for x in p.vector.components() {
            records.extend_from_slice(&x.to_le_bytes());
        }
    }
    let checksum: [u8; 32] = Sha256::digest(&records).into();
    let mut out = Vec::with_capacity(HEADER_LEN + records.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&NET_FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(net.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(d as u32).to_le_bytes());
    out.extend_from_slice(&net.level().to_le_bytes());
    out.extend_from_slice(&net.radius().to_le_bytes());
    out.extend_from_slice(&(net.word_len() as u32).to_le_bytes());
    out.extend_from_slice(&(net.len() as u64).to_le_bytes());
    out.extend_from_slice(&net.fingerprint().0);
    out.extend_from_slice(&checksum);
    out.extend_from_slice(&records);
    let mut f = fs::File::create(path)?;
    f.write_all(&out)?;
    Ok(())
}

/// Reads only the header, without verifying the records.
pub fn read_net_header(path: impl AsRef<Path>) -> Result<NetHeader> {
    use std::io::Read;
    let mut buf = vec![0u8; HEADER_LEN];
    let mut f = fs::File::open(path)?;
    f.read_exact(&mut buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => {
            Error::Format("net file is shorter than its header".into())
        }
        _ => Error::Io(e),
    })?;
    parse_header(&buf)
}

/// Loads a net built from `gs`, verifying checksum and fingerprint.
pub fn load_net(path: impl AsRef<Path>, gs: &GateSet) -> Result<EpsilonNet> {
    let bytes = fs::read(path)?;
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format("net file is shorter than its header".into()));
    }
    let header = parse_header(&bytes[..HEADER_LEN])?;
    let records = &bytes[HEADER_LEN..];
    let sum: [u8; 32] = Sha256::digest(records).into();
    if sum != header.checksum {
        return Err(Error::Checksum);
    }
    let found = gs.fingerprint();
    if found != header.fingerprint {
        return Err(Error::FingerprintMismatch {
            expected: header.fingerprint.to_hex(),
            found: found.to_hex(),
        });
    }
    if header.dim != gs.dim() || header.algebra_dim != gs.dim() * gs.dim() - 1 {
        return Err(Error::Format(
            "net dimensions disagree with the gate set".into(),
        ));
    }
    let mut cur = Cursor {
        buf: records,
        pos: 0,
    };
    let mut points = Vec::with_capacity(header.count.min(1 << 26) as usize);
    for _ in 0..header.count {
        let len = u32::from_le_bytes(cur.take::<4>()?) as usize;
        let word = Word::new(cur.slice(len)?.to_vec());
        let vector: Vec<f64> = (0..header.algebra_dim)
            .map(|_| cur.take::<8>().map(f64::from_le_bytes))
            .collect::<Result<_>>()?;
        let matrix = evaluate_word(gs, &word)?;
        let vector = SuVector::new(vector);
        points.push(NetPoint {
            word,
            radius: vector.norm(),
            vector,
            matrix,
        });
    }
    if cur.pos != records.len() {
        return Err(Error::Format("trailing bytes after the last record".into()));
    }
    EpsilonNet::new(
        header.level,
        header.radius,
        header.word_len,
        header.fingerprint,
        header.dim,
        points,
    )
}

fn parse_header(b: &[u8]) -> Result<NetHeader> {
    let mut cur = Cursor { buf: b, pos: 0 };
    if &cur.take::<8>()? != MAGIC {
        return Err(Error::Format("not a net file".into()));
    }
    let version = u32::from_le_bytes(cur.take()?);
    if version != NET_FORMAT_VERSION {
        return Err(Error::Version {
            found: version,
            expected: NET_FORMAT_VERSION,
        });
    }
    Ok(NetHeader {
        version,
        dim: u32::from_le_bytes(cur.take()?) as usize,
        algebra_dim: u32::from_le_bytes(cur.take()?) as usize,
        level: i32::from_le_bytes(cur.take()?),
        radius: f64::from_le_bytes(cur.take()?),
        word_len: u32::from_le_bytes(cur.take()?) as usize,
        count: u64::from_le_bytes(cur.take()?),
        fingerprint: Fingerprint(cur.take()?),
        checksum: cur.take()?,
    })
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn slice(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| Error::Format("truncated net file".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn take<const K: usize>(&mut self) -> Result<[u8; K]> {
        let mut a = [0u8; K];
        a.copy_from_slice(self.slice(K)?);
        Ok(a)
    }
}
