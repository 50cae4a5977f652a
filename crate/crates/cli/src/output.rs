// Copyright 2026 The trendminer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Output files: a `#` config echo, then a header row and data rows.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use trendminer_core::number::format_significant;
use trendminer_core::Rational;

/// Ordered `key: value` pairs echoed at the top of every output file.
#[derive(Debug, Clone)]
pub struct Echo {
    command: &'static str,
    entries: Vec<(String, String)>,
}

impl Echo {
    pub fn new(command: &'static str) -> Self {
        Echo { command, entries: Vec::new() }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    fn write_to(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "# trendminer {}", self.command)?;
        for (k, v) in &self.entries {
            writeln!(out, "# {k}: {v}")?;
        }
        Ok(())
    }
}

/// Writes a delimited table. Fields never contain the delimiter: terms are
/// letter/digit runs and numbers are plain decimals.
pub fn write_table(path: &Path, echo: &Echo, delimiter: char, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).with_context(|| format!("cannot create {}", parent.display()))?;
    }
    let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    let mut out = BufWriter::new(file);
    let sep = delimiter.to_string();
    let mut body = || -> std::io::Result<()> {
        echo.write_to(&mut out)?;
        writeln!(out, "{}", header.join(&sep))?;
        for row in rows {
            writeln!(out, "{}", row.join(&sep))?;
        }
        out.flush()
    };
    body().with_context(|| format!("cannot write {}", path.display()))
}

/// Six significant digits, or `n/d` when exact output is requested.
pub fn render(value: Rational, exact: bool) -> String {
    if exact {
        format!("{}/{}", value.numer(), value.denom())
    } else {
        format_significant(value, 6)
    }
}

/// Unreduced `count/total`, or the six-digit decimal.
pub fn render_count(count: u64, total: u64, exact: bool) -> String {
    if exact {
        format!("{count}/{total}")
    } else {
        format_significant(Rational::new(count, total), 6)
    }
}

/// Rows of a table written by [`write_table`]: comments skipped, header dropped.
pub fn read_rows(text: &str) -> Vec<Vec<&str>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .skip(1)
        .map(|l| l.split('\t').collect())
        .collect()
}
