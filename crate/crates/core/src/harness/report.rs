//! Sectioned text reports and line-per-record traces.
//!
//! A report is a list of sections, each written as
//!
//! ```text
//! [name]
//! key = value
//! ```
//!
//! with a blank line between sections. Keys are stable. Tower reports use the
//! sections `config`, `fixed-point`, `levels`, `witnesses` and `caveats`.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::constructions::demos::{IncomparableReport, McLaughlinReport};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub entries: Vec<(String, String)>,
}

impl Section {
    pub fn new(name: &str) -> Section {
        Section { name: name.into(), entries: Vec::new() }
    }

    pub fn add(&mut self, key: impl Into<String>, value: impl fmt::Display) -> &mut Section {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub sections: Vec<Section>,
}

impl Report {
    pub fn section(&mut self, name: &str) -> &mut Section {
        if let Some(i) = self.sections.iter().position(|s| s.name == name) {
            return &mut self.sections[i];
        }
        self.sections.push(Section::new(name));
        self.sections.last_mut().expect("just pushed")
    }

    pub fn get(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn parse(text: &str) -> Report {
        let mut r = Report::default();
        let mut current: Option<String> = None;
        for line in text.lines() {
            let line = line.trim();
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                r.section(name);
                current = Some(name.to_string());
            } else if let (Some(name), Some((k, v))) = (&current, line.split_once(" = ")) {
                r.section(name).add(k.trim(), v.trim());
            }
        }
        r
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "[{}]", s.name)?;
            for (k, v) in &s.entries {
                writeln!(f, "{k} = {v}")?;
            }
        }
        Ok(())
    }
}

/// Writes via a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub construction: String,
    pub stage: u64,
    pub input: String,
    pub output: String,
    pub caveats: Vec<String>,
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "construction={} stage={} input={} output={}",
            self.construction, self.stage, self.input, self.output
        )?;
        if !self.caveats.is_empty() {
            write!(f, " caveats={}", self.caveats.join(";"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
}

impl Trace {
    pub fn push(&mut self, construction: &str, stage: u64, input: impl fmt::Display, output: impl fmt::Display) {
        self.records.push(TraceRecord {
            construction: construction.into(),
            stage,
            input: input.to_string(),
            output: output.to_string(),
            caveats: Vec::new(),
        });
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

fn config_section(r: &mut Report, cfg: &crate::constructions::tower::TowerConfig) {
    r.section("config")
        .add("levels", cfg.levels)
        .add("stage", cfg.stage)
        .add("depth", cfg.depth)
        .add("branching", cfg.branching)
        .add("omega-tree", &cfg.omega_tree);
}

impl From<&McLaughlinReport> for Report {
    fn from(m: &McLaughlinReport) -> Report {
        let mut r = Report::default();
        config_section(&mut r, &m.config);
        r.section("fixed-point").add("index", &m.e_star).add("overhead", m.overhead);
        let lv = r.section("levels");
        for (n, img) in &m.level_images {
            lv.add(format!("zero-image.{n}"), img);
        }
        lv.add("coherence.checked", m.coherence.checked).add("coherence.failures", m.coherence.failures.len());
        let w = r.section("witnesses");
        w.add("z0", &m.z0);
        for x in &m.witnesses {
            w.add(format!("witness.{}.point", x.j), &x.point)
                .add(format!("witness.{}.image", x.j), &x.image)
                .add(format!("witness.{}.agreement", x.j), x.agreement)
                .add(format!("witness.{}.distinct", x.j), x.distinct);
        }
        w.add("truncation.size", m.truncation_size).add("truncation.downward-closed", m.downward_closed);
        for (k, (p, img)) in m.samples.iter().enumerate() {
            w.add(format!("sample.{k}"), format!("{p} -> {img}"));
        }
        w.add("injective", m.injective);
        let c = r.section("caveats");
        for (k, text) in m.caveats.iter().enumerate() {
            c.add(format!("banner.{k}"), text);
        }
        r
    }
}

impl From<&IncomparableReport> for Report {
    fn from(m: &IncomparableReport) -> Report {
        let mut r = Report::default();
        config_section(&mut r, &m.config);
        r.section("fixed-point").add("index", &m.e_star);
        let lv = r.section("levels");
        for (k, p) in m.paths.iter().enumerate() {
            lv.add(format!("path.{k}"), p);
        }
        r.section("witnesses")
            .add("x-image", &m.x_image)
            .add("y-image", &m.y_image)
            .add("split", m.split)
            .add("two-paths", m.two_paths)
            .add("isolated", m.isolated)
            .add("injective", m.injective)
            .add("truncation.size", m.truncation_size)
            .add("truncation.downward-closed", m.downward_closed);
        let c = r.section("caveats");
        for (k, text) in m.caveats.iter().enumerate() {
            c.add(format!("banner.{k}"), text);
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_parse() {
        let mut r = Report::default();
        r.section("config").add("depth", 4);
        r.section("caveats").add("banner.0", "not verified");
        let text = r.to_string();
        assert_eq!(text, "[config]\ndepth = 4\n\n[caveats]\nbanner.0 = not verified\n");
        assert_eq!(Report::parse(&text), r);
    }

    #[test]
    fn atomic_write() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/report.txt");
        write_atomic(&p, "x").unwrap();
        assert_eq!(fs::read_to_string(p).unwrap(), "x");
    }
}
