use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rug::Integer;

use crate::error::{Error, Result};

/// Contents of an a_p cache file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApCacheFile {
    pub a_invariants: [Integer; 5],
    pub conductor: Integer,
    pub root_number: Option<i8>,
    pub ap: BTreeMap<u64, i64>,
}

impl ApCacheFile {
    /// Header `curve a1 a2 a3 a4 a6 conductor N`, an optional
    /// `root_number ±1` line, then `p a_p` lines with increasing p.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let [a1, a2, a3, a4, a6] = &self.a_invariants;
        let _ = writeln!(out, "curve {a1} {a2} {a3} {a4} {a6} conductor {}", self.conductor);
        if let Some(e) = self.root_number {
            let _ = writeln!(out, "root_number {e}");
        }
        for (p, a) in &self.ap {
            let _ = writeln!(out, "{p} {a}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |line: usize, what: &str| Error::CacheFormat(format!("line {line}: {what}"));
        let mut lines = text.lines().enumerate().peekable();
        let (_, header) = lines.next().ok_or_else(|| bad(1, "empty file"))?;
        let words: Vec<&str> = header.split(' ').collect();
        if words.len() != 8 || words[0] != "curve" || words[6] != "conductor" {
            return Err(bad(1, "expected `curve a1 a2 a3 a4 a6 conductor N`"));
        }
        let int = |s: &str, line: usize| -> Result<Integer> {
            let v: Integer = s.parse().map_err(|_| bad(line, &format!("not an integer: {s}")))?;
            if v.to_string() != s {
                return Err(bad(line, &format!("non-canonical integer {s}")));
            }
            Ok(v)
        };
        let mut a: [Integer; 5] = Default::default();
        for (k, slot) in a.iter_mut().enumerate() {
            *slot = int(words[k + 1], 1)?;
        }
        let conductor = int(words[7], 1)?;
        if conductor <= 0 {
            return Err(bad(1, "conductor must be positive"));
        }
        let mut root_number = None;
        if let Some((i, line)) = lines.peek() {
            if let Some(rest) = line.strip_prefix("root_number ") {
                root_number = Some(match rest {
                    "1" => 1,
                    "-1" => -1,
                    _ => return Err(bad(i + 1, "root number must be 1 or -1")),
                });
                lines.next();
            }
        }
        let mut ap = BTreeMap::new();
        let mut last = 0u64;
        for (i, line) in lines {
            let (p, v) = line.split_once(' ').ok_or_else(|| bad(i + 1, "expected `p a_p`"))?;
            let p: u64 = p.parse().map_err(|_| bad(i + 1, "bad prime"))?;
            let v: i64 = v.parse().map_err(|_| bad(i + 1, "bad coefficient"))?;
            if p <= last {
                return Err(bad(i + 1, "primes must increase strictly"));
            }
            if format!("{p} {v}") != line {
                return Err(bad(i + 1, "non-canonical line"));
            }
            last = p;
            ap.insert(p, v);
        }
        if !text.ends_with('\n') {
            return Err(bad(text.lines().count(), "missing final newline"));
        }
        Ok(ApCacheFile { a_invariants: a, conductor, root_number, ap })
    }
}

/// Directory of a_p cache files, one per minimal model.
#[derive(Clone, Debug)]
pub struct ApCache {
    dir: PathBuf,
}

impl ApCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ApCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// File name derived from the a-invariants.
    pub fn path_for(&self, a: &[Integer; 5]) -> PathBuf {
        let parts: Vec<String> = a.iter().map(|c| c.to_string().replace('-', "m")).collect();
        self.dir.join(format!("curve_{}.ap", parts.join("_")))
    }

    /// The cached file for this model, if present.
    pub fn load(&self, a: &[Integer; 5]) -> Result<Option<ApCacheFile>> {
        let path = self.path_for(a);
        match fs::read_to_string(&path) {
            Ok(text) => {
                let file = ApCacheFile::parse(&text)?;
                if file.a_invariants != *a {
                    return Err(Error::CacheFormat(format!("{} holds a different curve", path.display())));
                }
                Ok(Some(file))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes through a temporary file and a rename, so readers never see a
    /// partial file.
    pub fn store(&self, file: &ApCacheFile) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(&file.a_invariants);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, file.serialize())?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}
