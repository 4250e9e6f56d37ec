//! Binary SELL cache for fast reload.
//!
//! Little-endian layout:
//!
//! ```text
//! "SELL"  u16 version  u16 flags (bit 0: columns permuted)
//! u64 n_rows  u64 n_cols  u64 C  u64 sigma  u64 n_rows_padded  u64 n_chunks
//! [u64 len][cs: u64]  [u64 len][cl: u32]  [u64 len][col: u32]
//! [u64 len][val: f64] [u64 len][perm: u32] [u64 len][row_len: u32]
//! u32 CRC-32 of everything above
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::SellMatrix;

pub const SELL_CACHE_VERSION: u16 = 1;
const MAGIC: &[u8; 4] = b"SELL";
const FLAG_COL_PERMUTED: u16 = 1;

pub fn write_sell_cache(m: &SellMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_sell_cache_to(m, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_sell_cache_to<W: Write>(m: &SellMatrix, w: W) -> Result<()> {
    let mut w = CrcWriter {
        inner: w,
        crc: crc32fast::Hasher::new(),
    };
    w.put(MAGIC)?;
    w.put(&SELL_CACHE_VERSION.to_le_bytes())?;
    let flags = if m.col_permuted() {
        FLAG_COL_PERMUTED
    } else {
        0
    };
    w.put(&flags.to_le_bytes())?;
    for n in [
        m.n_rows(),
        m.n_cols(),
        m.chunk_height(),
        m.sigma(),
        m.n_rows_padded(),
        m.n_chunks(),
    ] {
        w.put(&(n as u64).to_le_bytes())?;
    }
    w.array(m.cs(), |x| (*x as u64).to_le_bytes())?;
    w.array(m.cl(), |x| x.to_le_bytes())?;
    w.array(m.col(), |x| x.to_le_bytes())?;
    w.array(m.val(), |x| x.to_le_bytes())?;
    w.array(m.perm(), |x| x.to_le_bytes())?;
    w.array(m.row_lengths(), |x| x.to_le_bytes())?;
    let crc = w.crc.clone().finalize();
    w.inner.write_all(&crc.to_le_bytes())?;
    Ok(())
}

pub fn read_sell_cache(path: impl AsRef<Path>) -> Result<SellMatrix> {
    read_sell_cache_from(BufReader::new(File::open(path)?))
}

pub fn read_sell_cache_from<R: Read>(r: R) -> Result<SellMatrix> {
    let mut r = CrcReader {
        inner: r,
        crc: crc32fast::Hasher::new(),
    };
    let magic: [u8; 4] = r.take()?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let version = u16::from_le_bytes(r.take()?);
    if version != SELL_CACHE_VERSION {
        return Err(Error::Version {
            found: version,
            expected: SELL_CACHE_VERSION,
        });
    }
    let flags = u16::from_le_bytes(r.take()?);
    if flags & !FLAG_COL_PERMUTED != 0 {
        return Err(Error::Format(format!("unknown flags {flags:#06x}")));
    }
    let mut header = [0usize; 6];
    for h in &mut header {
        *h = r.size()?;
    }
    let [n_rows, n_cols, c, sigma, n_rows_padded, n_chunks] = header;
    if c == 0 || n_rows_padded % c != 0 || n_rows_padded / c != n_chunks {
        return Err(Error::Format("header fields are inconsistent".into()));
    }
    let cs: Vec<usize> = r.array("cs", n_chunks + 1, |b: [u8; 8]| {
        u64::from_le_bytes(b) as usize
    })?;
    let slots = *cs.last().unwrap_or(&0);
    let cl = r.array("cl", n_chunks, u32::from_le_bytes)?;
    let col = r.array("col", slots, u32::from_le_bytes)?;
    let val = r.array("val", slots, f64::from_le_bytes)?;
    let perm = r.array("perm", n_rows, u32::from_le_bytes)?;
    let row_len = r.array("row_len", n_rows_padded, u32::from_le_bytes)?;
    let computed = r.crc.clone().finalize();
    let mut stored = [0u8; 4];
    read_exact(&mut r.inner, &mut stored)?;
    let stored = u32::from_le_bytes(stored);
    if stored != computed {
        return Err(Error::Checksum { stored, computed });
    }
    let mut trailing = [0u8; 1];
    if r.inner.read(&mut trailing)? != 0 {
        return Err(Error::Format("trailing bytes after checksum".into()));
    }
    let flags_col_permuted = flags & FLAG_COL_PERMUTED != 0;
    SellMatrix::from_raw_parts(
        n_rows,
        n_cols,
        c,
        sigma,
        n_rows_padded,
        cs,
        cl,
        col,
        val,
        perm,
        row_len,
        flags_col_permuted,
    )
    .map_err(|e| Error::Format(e.to_string()))
}

struct CrcWriter<W> {
    inner: W,
    crc: crc32fast::Hasher,
}

impl<W: Write> CrcWriter<W> {
    fn put(&mut self, bytes: &[u8]) -> Result<()> {
        self.crc.update(bytes);
        self.inner.write_all(bytes)?;
        Ok(())
    }

    fn array<T, const N: usize>(&mut self, xs: &[T], enc: impl Fn(&T) -> [u8; N]) -> Result<()> {
        self.put(&(xs.len() as u64).to_le_bytes())?;
        for x in xs {
            self.put(&enc(x))?;
        }
        Ok(())
    }
}

struct CrcReader<R> {
    inner: R,
    crc: crc32fast::Hasher,
}

impl<R: Read> CrcReader<R> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        read_exact(&mut self.inner, &mut buf)?;
        self.crc.update(&buf);
        Ok(buf)
    }

    fn size(&mut self) -> Result<usize> {
        usize::try_from(u64::from_le_bytes(self.take()?))
            .map_err(|_| Error::Format("size field does not fit in memory".into()))
    }

    /// Reads a length-prefixed array whose length must equal `expected`.
    /// Storage grows with the bytes actually read, so a corrupt length cannot
    /// trigger a huge allocation.
    fn array<T, const N: usize>(
        &mut self,
        name: &str,
        expected: usize,
        dec: impl Fn([u8; N]) -> T,
    ) -> Result<Vec<T>> {
        let len = self.size()?;
        if len != expected {
            return Err(Error::Format(format!(
                "{name} has length {len}, expected {expected}"
            )));
        }
        let mut out = Vec::with_capacity(len.min(1 << 16));
        for _ in 0..len {
            out.push(dec(self.take()?));
        }
        Ok(out)
    }
}

fn read_exact(r: &mut impl Read, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format("file is truncated".into()),
        _ => Error::Io(e),
    })
}
