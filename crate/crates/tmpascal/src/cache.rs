//! On-disk row cache.
//!
//! One file per `(init id, depth)`. The first line is a header
//!
//! ```text
//! tmpascal-row init=thue-morse n=5 k_max=4096 sha256=<hex>
//! ```
//!
//! followed by one canonical value per line. The checksum covers every byte
//! after the header line. A file whose checksum or header does not match is an
//! error, never a silent miss.

use std::fmt::Display;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use tmpascal_core::triangle::{first_row, next_row, Scalar};
use tmpascal_core::{Budget, InitSpec, TriangleTable};

use crate::parallel::{next_row_blocked, DEFAULT_BLOCK};

const MAGIC: &str = "tmpascal-row";

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache I/O on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("corrupt cache file {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CacheError + '_ {
    move |source| CacheError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone)]
pub struct RowCache {
    dir: PathBuf,
}

impl RowCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, CacheError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        Ok(RowCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, init_id: &str, n: u32) -> PathBuf {
        self.dir.join(format!("{init_id}.n{n}.row"))
    }

    /// The first `k_max + 1` cells of the cached row, or `None` if there is no
    /// file or it holds fewer cells.
    pub fn load<T: FromStr>(&self, init_id: &str, n: u32, k_max: u64) -> Result<Option<Vec<T>>, CacheError> {
        let path = self.path(init_id, n);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(io_err(&path)(e)),
        };
        let corrupt = |reason: String| CacheError::Corrupt { path: path.clone(), reason };

        let (header, body) = text.split_once('\n').ok_or_else(|| corrupt("missing header".into()))?;
        let fields = parse_header(header).ok_or_else(|| corrupt(format!("bad header {header:?}")))?;
        if fields.init != init_id || fields.n != n {
            return Err(corrupt(format!("header names init={} n={}", fields.init, fields.n)));
        }
        let digest = hex::encode(Sha256::digest(body.as_bytes()));
        if digest != fields.sha256 {
            return Err(corrupt(format!("checksum {digest} does not match header {}", fields.sha256)));
        }
        let lines: Vec<&str> = body.lines().collect();
        if lines.len() as u64 != fields.k_max + 1 {
            return Err(corrupt(format!("{} values for k_max={}", lines.len(), fields.k_max)));
        }
        if fields.k_max < k_max {
            return Ok(None);
        }
        let mut row = Vec::with_capacity(k_max as usize + 1);
        for (k, line) in lines.iter().take(k_max as usize + 1).enumerate() {
            row.push(line.parse().map_err(|_| corrupt(format!("value {line:?} at k={k}")))?);
        }
        Ok(Some(row))
    }

    pub fn store<T: Display>(&self, init_id: &str, n: u32, row: &[T]) -> Result<(), CacheError> {
        let mut body = String::new();
        for v in row {
            body.push_str(&v.to_string());
            body.push('\n');
        }
        let digest = hex::encode(Sha256::digest(body.as_bytes()));
        let k_max = row.len().saturating_sub(1);
        let text = format!("{MAGIC} init={init_id} n={n} k_max={k_max} sha256={digest}\n{body}");

        let path = self.path(init_id, n);
        let tmp = path.with_extension("row.tmp");
        fs::write(&tmp, text).map_err(io_err(&tmp))?;
        fs::rename(&tmp, &path).map_err(io_err(&path))
    }
}

struct Header {
    init: String,
    n: u32,
    k_max: u64,
    sha256: String,
}

fn parse_header(line: &str) -> Option<Header> {
    let mut parts = line.split(' ');
    if parts.next()? != MAGIC {
        return None;
    }
    let mut field = |name: &str| parts.next()?.strip_prefix(name)?.strip_prefix('=').map(str::to_owned);
    let init = field("init")?;
    let n = field("n")?.parse().ok()?;
    let k_max = field("k_max")?.parse().ok()?;
    let sha256 = field("sha256")?;
    Some(Header { init, n, k_max, sha256 })
}

/// Builds the table, reading depth rows from `cache` where present and
/// writing back the ones it had to compute.
pub fn build_table_cached<T>(
    init: &InitSpec<T>,
    k_max: u64,
    n_max: u32,
    budget: Budget,
    cache: Option<&RowCache>,
) -> anyhow::Result<TriangleTable<T>>
where
    T: Scalar + FromStr + Display,
{
    if k_max == 0 || n_max == 0 {
        return Err(tmpascal_core::Error::InvalidArgument("k_max and n_max must both be at least 1").into());
    }
    budget.check((k_max + 1).saturating_mul(n_max as u64 + 1))?;
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(n_max as usize + 1);
    rows.push(first_row(init, k_max));
    for depth in 1..=n_max {
        let cached = match cache {
            Some(c) => c.load::<T>(init.id(), depth, k_max)?,
            None => None,
        };
        let row = match cached {
            Some(row) => row,
            None => {
                let prev = &rows[rows.len() - 1];
                let corner = init.row0(depth as u64);
                let row = if prev.len() > DEFAULT_BLOCK {
                    next_row_blocked(prev, corner, DEFAULT_BLOCK)
                } else {
                    next_row(prev, corner)
                };
                if let Some(c) = cache {
                    c.store(init.id(), depth, &row)?;
                }
                row
            }
        };
        rows.push(row);
    }
    Ok(TriangleTable::from_rows(init.id(), rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn store_then_load_prefix() {
        let dir = tempfile::tempdir().unwrap();
        let cache = RowCache::open(dir.path()).unwrap();
        let row = ints(&[0, -1, -2, -1, 0]);
        cache.store("thue-morse", 3, &row).unwrap();
        assert_eq!(cache.load::<BigInt>("thue-morse", 3, 4).unwrap(), Some(row.clone()));
        assert_eq!(cache.load::<BigInt>("thue-morse", 3, 2).unwrap(), Some(row[..3].to_vec()));
        assert_eq!(cache.load::<BigInt>("thue-morse", 3, 9).unwrap(), None);
        assert_eq!(cache.load::<BigInt>("thue-morse", 4, 2).unwrap(), None);
    }

    #[test]
    fn edited_value_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let cache = RowCache::open(dir.path()).unwrap();
        cache.store("thue-morse", 2, &ints(&[0, 0, -1, -1])).unwrap();
        let path = cache.path("thue-morse", 2);
        let text = fs::read_to_string(&path).unwrap().replace("\n-1\n-1\n", "\n-1\n7\n");
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.load::<BigInt>("thue-morse", 2, 3), Err(CacheError::Corrupt { .. })));
    }

    #[test]
    fn garbage_header_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let cache = RowCache::open(dir.path()).unwrap();
        fs::write(cache.path("x", 1), "hello\n1\n").unwrap();
        assert!(matches!(cache.load::<BigInt>("x", 1, 0), Err(CacheError::Corrupt { .. })));
    }

    #[test]
    fn cold_and_warm_tables_agree() {
        let dir = tempfile::tempdir().unwrap();
        let cache = RowCache::open(dir.path()).unwrap();
        let init = InitSpec::thue_morse();
        let plain = TriangleTable::build(&init, 5000, 6, Budget::default()).unwrap();
        let cold = build_table_cached(&init, 5000, 6, Budget::default(), Some(&cache)).unwrap();
        let warm = build_table_cached(&init, 5000, 6, Budget::default(), Some(&cache)).unwrap();
        let smaller = build_table_cached(&init, 100, 6, Budget::default(), Some(&cache)).unwrap();
        assert_eq!(cold, plain);
        assert_eq!(warm, plain);
        assert_eq!(smaller.row(6), &plain.row(6)[..101]);
    }
}
