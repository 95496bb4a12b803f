// SPDX-License-Identifier: Apache-2.0

//! Content-addressed memo of class enumerations under `SHINTANI_CACHE_DIR`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::qf::{enumerate_classes, QuadForm};

pub const CACHE_ENV: &str = "SHINTANI_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    level: u64,
    disc: i64,
    classes: Vec<QuadForm>,
}

fn key(level: u64, disc: i64) -> String {
    let mut h = Sha256::new();
    h.update(format!("classes/v1/{level}/{disc}").as_bytes());
    hex::encode(h.finalize())
}

fn entry_path(dir: &Path, level: u64, disc: i64) -> PathBuf {
    dir.join(format!("{}.json", key(level, disc)))
}

/// Classes of discriminant `disc` at level `level`, read from or written to
/// `dir` when one is given. Unreadable entries are recomputed.
pub fn classes(dir: Option<&Path>, level: u64, disc: i64) -> Result<Vec<QuadForm>> {
    let Some(dir) = dir else {
        return Ok(enumerate_classes(level, disc));
    };
    let path = entry_path(dir, level, disc);
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(e) = serde_json::from_str::<Entry>(&text) {
            if e.level == level && e.disc == disc {
                return Ok(e.classes);
            }
        }
    }
    let classes = enumerate_classes(level, disc);
    fs::create_dir_all(dir)?;
    let entry = Entry { level, disc, classes };
    // write then rename so readers never see a partial file
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_string(&entry)?)?;
    fs::rename(&tmp, &path)?;
    Ok(entry.classes)
}
