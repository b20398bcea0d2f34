//! Flat binary container for fields.
//!
//! Layout: the 8 magic bytes `WGFIELD1`, a little-endian `u64` header length,
//! a JSON header, then interleaved little-endian `f64` real/imaginary pairs
//! in row-major `(x1, x2, y1, y2)` order.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use super::waveguide::{Repr, WaveguideField};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"WGFIELD1";
const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldHeader {
    pub version: u32,
    pub endianness: String,
    pub repr: Repr,
    pub grid: GridSpec,
    pub shape: Vec<usize>,
}

pub fn encode(f: &WaveguideField) -> Result<Vec<u8>> {
    let header =
        FieldHeader { version: VERSION, endianness: "little".into(), repr: f.repr(), grid: f.spec().clone(), shape: f.spec().shape().to_vec() };
    let h = serde_json::to_vec(&header)?;
    let mut out = Vec::with_capacity(16 + h.len() + 16 * f.data().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(h.len() as u64).to_le_bytes());
    out.extend_from_slice(&h);
    for v in f.data() {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    Ok(out)
}

pub fn decode(mut bytes: &[u8]) -> Result<WaveguideField> {
    let mut magic = [0u8; 8];
    bytes.read_exact(&mut magic).map_err(|_| Error::Format("truncated magic".into()))?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let mut len = [0u8; 8];
    bytes.read_exact(&mut len).map_err(|_| Error::Format("truncated header length".into()))?;
    let hlen = u64::from_le_bytes(len) as usize;
    if hlen > bytes.len() {
        return Err(Error::Format("header length exceeds file size".into()));
    }
    let header: FieldHeader = serde_json::from_slice(&bytes[..hlen])?;
    bytes = &bytes[hlen..];
    if header.version != VERSION {
        return Err(Error::Format(format!("unsupported version {}", header.version)));
    }
    if header.endianness != "little" {
        return Err(Error::Format(format!("unsupported endianness {}", header.endianness)));
    }
    if header.shape != header.grid.shape().to_vec() {
        return Err(Error::Format("shape does not match grid".into()));
    }
    let n = header.grid.len();
    if bytes.len() != 16 * n {
        return Err(Error::Format(format!("expected {} payload bytes, found {}", 16 * n, bytes.len())));
    }
    let data = bytes
        .chunks_exact(16)
        .map(|c| C64::new(f64::from_le_bytes(c[..8].try_into().unwrap()), f64::from_le_bytes(c[8..].try_into().unwrap())))
        .collect();
    WaveguideField::from_data(&header.grid, header.repr, data)
}

/// Writes through a temporary file and a rename.
pub fn write_field(path: &Path, f: &WaveguideField) -> Result<()> {
    let bytes = encode(f)?;
    let tmp = path.with_extension("tmp");
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(&bytes)?;
        file.sync_all()?;
    }
    fs::rename(tmp, path)?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<WaveguideField> {
    decode(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_bytes() {
        let spec = GridSpec::new(6.0, 8, 3, 0.1).unwrap();
        let f = WaveguideField::from_fn(&spec, |p| C64::new(p[0], p[3]));
        let bytes = encode(&f).unwrap();
        assert_eq!(&bytes[..8], MAGIC);
        assert_eq!(decode(&bytes).unwrap(), f);
        assert!(decode(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(decode(&bad).is_err());
    }

    #[test]
    fn round_trip_file() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GridSpec::new(6.0, 8, 3, 0.1).unwrap();
        let f = WaveguideField::from_fn(&spec, |p| C64::new(p[1], -p[2])).into_spectral();
        let path = dir.path().join("u.wgf");
        write_field(&path, &f).unwrap();
        assert_eq!(read_field(&path).unwrap(), f);
    }
}
