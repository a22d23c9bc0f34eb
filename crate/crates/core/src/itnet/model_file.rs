//! Line-based model files.
//!
//! ```text
//! itlex-model v1
//! category vp
//! lambda 0.5
//! n 3
//! in apple 1
//! out essen 2
//! joint eat essen 2
//! ```
//!
//! `in`, `out` and `joint` groups follow in that order, each sorted, with
//! zero counts omitted. The same store always produces the same bytes.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::CountStore;

pub const MODEL_MAGIC: &str = "itlex-model v1";
pub const MODEL_EXTENSION: &str = "model";

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("inconsistent counts: {0}")]
    Inconsistent(String),
}

fn syntax(line: usize, message: impl Into<String>) -> ModelFileError {
    ModelFileError::Syntax {
        line,
        message: message.into(),
    }
}

impl CountStore {
    pub fn to_model_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MODEL_MAGIC}");
        let _ = writeln!(out, "category {}", self.category());
        let _ = writeln!(out, "lambda {}", self.lambda());
        let _ = writeln!(out, "n {}", self.n_samples());
        for (t, c) in self.inputs() {
            let _ = writeln!(out, "in {t} {c}");
        }
        for (t, c) in self.outputs() {
            let _ = writeln!(out, "out {t} {c}");
        }
        for (i, j, c) in self.joints() {
            let _ = writeln!(out, "joint {i} {j} {c}");
        }
        out
    }

    pub fn from_model_str(text: &str) -> Result<CountStore, ModelFileError> {
        let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));

        let mut header = |key: &str| -> Result<(usize, String), ModelFileError> {
            let (n, l) = lines
                .next()
                .ok_or_else(|| syntax(0, format!("missing `{key}` line")))?;
            let value = l
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .ok_or_else(|| syntax(n, format!("expected `{key} <value>`")))?;
            Ok((n, value.to_string()))
        };
        let (n, magic) = header("itlex-model")?;
        if magic != "v1" {
            return Err(syntax(n, format!("unsupported model version `{magic}`")));
        }
        let (_, category) = header("category")?;
        let (n, lambda) = header("lambda")?;
        let lambda: f64 = lambda.parse().map_err(|_| syntax(n, "bad lambda"))?;
        let (n, count) = header("n")?;
        let count: u64 = count.parse().map_err(|_| syntax(n, "bad sample count"))?;

        let mut c_in = Vec::new();
        let mut c_out = Vec::new();
        let mut c_joint = Vec::new();
        // 0 = in, 1 = out, 2 = joint; groups may not go backwards
        let mut stage = 0;
        for (n, line) in lines {
            let fields: Vec<&str> = line.split(' ').collect();
            let parse_count = |s: &str| {
                s.parse::<u64>()
                    .map_err(|_| syntax(n, format!("bad count `{s}`")))
            };
            let next_stage = match fields.as_slice() {
                ["in", t, c] => {
                    c_in.push((t.to_string(), parse_count(c)?));
                    0
                }
                ["out", t, c] => {
                    c_out.push((t.to_string(), parse_count(c)?));
                    1
                }
                ["joint", i, j, c] => {
                    c_joint.push((i.to_string(), j.to_string(), parse_count(c)?));
                    2
                }
                _ => return Err(syntax(n, format!("unrecognized entry `{line}`"))),
            };
            if next_stage < stage {
                return Err(syntax(n, "entry out of group order"));
            }
            stage = next_stage;
        }
        if !is_strictly_sorted(c_in.iter().map(|(t, _)| t))
            || !is_strictly_sorted(c_out.iter().map(|(t, _)| t))
            || !is_strictly_sorted(c_joint.iter().map(|(i, j, _)| (i, j)))
        {
            return Err(ModelFileError::Inconsistent(
                "entries are not sorted or repeat".into(),
            ));
        }
        CountStore::from_counts(&category, lambda, count, c_in, c_out, c_joint)
            .map_err(ModelFileError::Inconsistent)
    }
}

fn is_strictly_sorted<T: Ord>(items: impl Iterator<Item = T>) -> bool {
    let v: Vec<T> = items.collect();
    v.windows(2).all(|w| w[0] < w[1])
}

/// `<dir>/<category>.model`
pub fn model_path(dir: &Path, category: &str) -> PathBuf {
    dir.join(format!("{category}.{MODEL_EXTENSION}"))
}

/// Writes the model next to its final location and renames it into place.
pub fn save_model(store: &CountStore, path: &Path) -> Result<(), ModelFileError> {
    let io_err = |source| ModelFileError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let write = || -> io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(store.to_model_string().as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(e)
    })
}

pub fn load_model(path: &Path) -> Result<CountStore, ModelFileError> {
    let text = fs::read_to_string(path).map_err(|source| ModelFileError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    CountStore::from_model_str(&text)
}
