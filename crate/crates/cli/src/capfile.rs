//! JSON capacity files: `{"b": "1/5", "scale": "5", "count": K, "caps": [...]}`.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use hstair::exactnum::{fmt_rational, parse_rational};
use hstair::CapacityTable;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityFile {
    pub b: String,
    pub scale: String,
    pub count: usize,
    pub caps: Vec<String>,
}

impl CapacityFile {
    pub fn from_table(t: &CapacityTable) -> CapacityFile {
        CapacityFile {
            b: fmt_rational(&t.b),
            scale: fmt_rational(&t.scale),
            count: t.k_max(),
            caps: t.caps.iter().map(fmt_rational).collect(),
        }
    }

    pub fn to_table(&self) -> Result<CapacityTable> {
        if self.caps.len() != self.count + 1 {
            bail!(
                "capacity file lists {} capacities but count is {}",
                self.caps.len(),
                self.count
            );
        }
        Ok(CapacityTable {
            b: parse_rational(&self.b)?,
            scale: parse_rational(&self.scale)?,
            caps: self
                .caps
                .iter()
                .map(|c| parse_rational(c))
                .collect::<hstair::Result<_>>()?,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain strings serialize");
        s.push('\n');
        s
    }

    pub fn read(path: &Path) -> Result<CapacityTable> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: CapacityFile =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        file.to_table()
    }
}
