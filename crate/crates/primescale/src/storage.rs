//! Binary container for persisted hierarchies and primality bitmaps.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic "MSP1"
//! 4       2     version (currently 1)
//! 6       1     t — pattern width exponent; 0 marks a primality bitmap
//! 7       1     K — number of level sections (1 for bitmaps)
//! 8       8     n_max
//! 16      2     property-tag length L
//! 18      L     property tag, UTF-8
//! 18+L    8*K   absolute section offsets, strictly increasing
//! ...           sections, back to back, ending exactly at EOF
//! ```
//!
//! Hierarchy section k holds (n_max / B^k) raw pattern values, one
//! value-width word each. A bitmap section holds ceil(n_max / 8) bytes
//! where bit (i - 1) — LSB-first within each byte — is integer i.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::encoding::{Hierarchy, LevelSequence};
use crate::error::{Error, Result};
use crate::params::EncodingParams;
use crate::sieve::PrimalityBitmap;

pub const MAGIC: &[u8; 4] = b"MSP1";
pub const VERSION: u16 = 1;
const BITMAP_T: u8 = 0;

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source }
}

/// Header fields of a container, readable without loading the sections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainerInfo {
    pub t: u8,
    pub levels: u8,
    pub n_max: u64,
    pub tag: String,
    pub section_offsets: Vec<u64>,
}

impl ContainerInfo {
    pub fn is_bitmap(&self) -> bool {
        self.t == BITMAP_T
    }
}

fn write_container(path: &Path, t: u8, n_max: u64, tag: &str, sections: &[&[u8]]) -> Result<()> {
    let tag_bytes = tag.as_bytes();
    if tag_bytes.len() > u16::MAX as usize {
        return Err(Error::Config("property tag longer than 65535 bytes".into()));
    }
    let header_len = 4 + 2 + 1 + 1 + 8 + 2 + tag_bytes.len() + 8 * sections.len();
    let mut header = Vec::with_capacity(header_len);
    header.extend_from_slice(MAGIC);
    header.extend_from_slice(&VERSION.to_le_bytes());
    header.push(t);
    header.push(sections.len() as u8);
    header.extend_from_slice(&n_max.to_le_bytes());
    header.extend_from_slice(&(tag_bytes.len() as u16).to_le_bytes());
    header.extend_from_slice(tag_bytes);
    let mut offset = header_len as u64;
    for s in sections {
        header.extend_from_slice(&offset.to_le_bytes());
        offset += s.len() as u64;
    }
    debug_assert_eq!(header.len(), header_len);

    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(path, e))?;
    tmp.write_all(&header).map_err(|e| io_err(path, e))?;
    for s in sections {
        tmp.write_all(s).map_err(|e| io_err(path, e))?;
    }
    tmp.flush().map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(())
}

struct RawContainer {
    info: ContainerInfo,
    data: Vec<u8>,
}

impl RawContainer {
    /// Slice of one section, validated against its expected length and
    /// its neighbors.
    fn section(&self, index: usize, expected_len: usize, label: &str) -> Result<&[u8]> {
        let start = self.info.section_offsets[index] as usize;
        let end = start + expected_len;
        if end > self.data.len() {
            return Err(Error::Format(format!(
                "truncated container: {label} section needs bytes [{start}, {end}), file has {}",
                self.data.len()
            )));
        }
        if let Some(&next) = self.info.section_offsets.get(index + 1) {
            if next as usize != end {
                return Err(Error::Format(format!(
                    "{label} section should end at {end}, next section starts at {next}"
                )));
            }
        }
        Ok(&self.data[start..end])
    }

    /// Sections must end exactly at EOF.
    fn expect_eof(&self, last_end: usize) -> Result<()> {
        if last_end != self.data.len() {
            return Err(Error::Format(format!(
                "trailing garbage: sections end at {last_end}, file has {} bytes",
                self.data.len()
            )));
        }
        Ok(())
    }
}

fn read_container(path: &Path) -> Result<RawContainer> {
    let data = fs::read(path).map_err(|e| io_err(path, e))?;
    let info = parse_header(&data)?;
    Ok(RawContainer { info, data })
}

fn parse_header(data: &[u8]) -> Result<ContainerInfo> {
    let need = |n: usize, what: &str| -> Result<()> {
        if data.len() < n {
            Err(Error::Format(format!("truncated container: {what} missing")))
        } else {
            Ok(())
        }
    };
    need(4, "magic")?;
    if &data[0..4] != MAGIC {
        return Err(Error::Format("bad magic: not a primescale container".into()));
    }
    need(8, "version and geometry")?;
    let version = u16::from_le_bytes([data[4], data[5]]);
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let t = data[6];
    let levels = data[7];
    if levels == 0 {
        return Err(Error::Format("container declares zero sections".into()));
    }
    need(18, "n_max and tag length")?;
    let n_max = u64::from_le_bytes(data[8..16].try_into().unwrap());
    let tag_len = u16::from_le_bytes([data[16], data[17]]) as usize;
    need(18 + tag_len, "property tag")?;
    let tag = std::str::from_utf8(&data[18..18 + tag_len])
        .map_err(|_| Error::Format("property tag is not UTF-8".into()))?
        .to_string();
    let offsets_start = 18 + tag_len;
    let header_len = offsets_start + 8 * levels as usize;
    need(header_len, "section offset table")?;
    let mut section_offsets = Vec::with_capacity(levels as usize);
    for i in 0..levels as usize {
        let off = u64::from_le_bytes(
            data[offsets_start + 8 * i..offsets_start + 8 * (i + 1)].try_into().unwrap(),
        );
        section_offsets.push(off);
    }
    if section_offsets[0] != header_len as u64 {
        return Err(Error::Format(format!(
            "first section offset {} does not follow the header ({header_len})",
            section_offsets[0]
        )));
    }
    if section_offsets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Format("section offsets are not strictly increasing".into()));
    }
    if section_offsets.iter().any(|&o| o > data.len() as u64) {
        return Err(Error::Format("section offset beyond end of file".into()));
    }
    Ok(ContainerInfo { t, levels, n_max, tag, section_offsets })
}

/// Reads only the header of a container.
pub fn container_info(path: impl AsRef<Path>) -> Result<ContainerInfo> {
    // header is tiny; reading the whole file keeps the parsing single-path
    Ok(read_container(path.as_ref())?.info)
}

/// Persists a hierarchy. The write is atomic (temp file + rename) and
/// bit-exact: re-loading yields an identical hierarchy.
pub fn save(hier: &Hierarchy, path: impl AsRef<Path>) -> Result<()> {
    let sections: Vec<&[u8]> = hier.levels().iter().map(|l| l.as_bytes()).collect();
    write_container(
        path.as_ref(),
        hier.params().t() as u8,
        hier.params().n_max(),
        hier.property(),
        &sections,
    )
}

/// Loads a hierarchy container, validating geometry and section sizes.
pub fn load(path: impl AsRef<Path>) -> Result<Hierarchy> {
    let path = path.as_ref();
    let raw = read_container(path)?;
    let info = &raw.info;
    if info.is_bitmap() {
        return Err(Error::Format(
            "container holds a primality bitmap (t = 0); use load_bitmap".into(),
        ));
    }
    let params = EncodingParams::new(info.t as u32, info.levels as u32, info.n_max)?;
    let width = params.value_width();
    let mut levels = Vec::with_capacity(info.levels as usize);
    let mut end = 0usize;
    for k in 1..=info.levels as u32 {
        let expect = params.blocks_at(k)? as usize * width;
        let bytes = raw.section((k - 1) as usize, expect, &format!("level {k}"))?;
        end = info.section_offsets[(k - 1) as usize] as usize + expect;
        levels.push(LevelSequence::from_bytes(k, params.value_bits(), bytes.to_vec())?);
    }
    raw.expect_eof(end)?;
    Hierarchy::from_parts(params, info.tag.clone(), levels)
}

/// Loads a hierarchy and checks it was built with the expected
/// parameters.
pub fn load_expecting(path: impl AsRef<Path>, expected: &EncodingParams) -> Result<Hierarchy> {
    let hier = load(path)?;
    if hier.params() != expected {
        return Err(Error::Config(format!(
            "container was built with t={}, levels={}, n_max={}, expected t={}, levels={}, n_max={}",
            hier.params().t(),
            hier.params().levels(),
            hier.params().n_max(),
            expected.t(),
            expected.levels(),
            expected.n_max()
        )));
    }
    Ok(hier)
}

fn bitmap_section(bitmap: &PrimalityBitmap) -> Vec<u8> {
    let words = bitmap.words();
    let n_bytes = (bitmap.n_max() as usize).div_ceil(8);
    let mut out = Vec::with_capacity(words.len() * 8);
    for wi in 0..words.len() {
        // shift the whole bit stream down by one: section bit i-1 is integer i
        let lo = words[wi] >> 1;
        let hi = if wi + 1 < words.len() { words[wi + 1] << 63 } else { 0 };
        out.extend_from_slice(&(lo | hi).to_le_bytes());
    }
    out.truncate(n_bytes);
    let rem = (bitmap.n_max() % 8) as u32;
    if rem != 0 {
        let last = out.len() - 1;
        out[last] &= (1u8 << rem) - 1;
    }
    out
}

/// Persists a primality bitmap using the same container format, with
/// t = 0 as the bitmap marker.
pub fn save_bitmap(bitmap: &PrimalityBitmap, tag: &str, path: impl AsRef<Path>) -> Result<()> {
    let section = bitmap_section(bitmap);
    write_container(path.as_ref(), BITMAP_T, bitmap.n_max(), tag, &[&section])
}

/// Loads a primality bitmap container.
pub fn load_bitmap(path: impl AsRef<Path>) -> Result<PrimalityBitmap> {
    let path = path.as_ref();
    let raw = read_container(path)?;
    let info = &raw.info;
    if !info.is_bitmap() {
        return Err(Error::Format(format!(
            "container holds a pattern hierarchy (t = {}); use load",
            info.t
        )));
    }
    if info.levels != 1 {
        return Err(Error::Format(format!(
            "bitmap container must hold one section, found {}",
            info.levels
        )));
    }
    if info.n_max < 2 {
        return Err(Error::Format(format!("bitmap bound {} below 2", info.n_max)));
    }
    let expect = (info.n_max as usize).div_ceil(8);
    let section = raw.section(0, expect, "bitmap")?;
    raw.expect_eof(info.section_offsets[0] as usize + expect)?;
    let mut words = vec![0u64; ((info.n_max + 1) as usize).div_ceil(64)];
    for (i, &b) in section.iter().enumerate() {
        let mut bits = b;
        while bits != 0 {
            let r = bits.trailing_zeros() as u64;
            let n = 8 * i as u64 + r + 1;
            if n <= info.n_max {
                words[(n >> 6) as usize] |= 1 << (n & 63);
            } else {
                return Err(Error::Format(format!(
                    "bitmap section flags integer {n} beyond n_max {}",
                    info.n_max
                )));
            }
            bits &= bits - 1;
        }
    }
    Ok(PrimalityBitmap::from_words(info.n_max, words))
}
