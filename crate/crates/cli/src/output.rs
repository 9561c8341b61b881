//! Atomic file output with provenance headers.
//!
//! Every tabular file starts with `# key=value` metadata rows (tool version
//! and config hash) so results remain traceable to the run that made them.

use std::path::Path;

use lkclab_core::error::Result;

/// Writes via a temp file + rename so readers never observe partial output.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Builds a CSV document with metadata header rows.
pub struct CsvDoc {
    buf: String,
}

impl CsvDoc {
    pub fn new(config_hash: &str, columns: &str) -> Self {
        let mut buf = String::new();
        buf.push_str(&format!("# tool_version={}\n", lkclab_core::VERSION));
        buf.push_str(&format!("# config_hash={config_hash}\n"));
        buf.push_str(columns);
        buf.push('\n');
        CsvDoc { buf }
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) {
        // Extra metadata is inserted after the standard headers, before rows.
        let insert_at = self
            .buf
            .lines()
            .take_while(|l| l.starts_with('#'))
            .map(|l| l.len() + 1)
            .sum::<usize>();
        self.buf.insert_str(insert_at, &format!("# {key}={value}\n"));
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".into(), |x| format!("{x:.6}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doc_layout_and_meta_insertion() {
        let mut doc = CsvDoc::new("abc123", "a,b");
        doc.meta("dataset", "demo");
        doc.row(&["1".into(), "2".into()]);
        let text = doc.finish();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# tool_version="));
        assert_eq!(lines[1], "# config_hash=abc123");
        assert_eq!(lines[2], "# dataset=demo");
        assert_eq!(lines[3], "a,b");
        assert_eq!(lines[4], "1,2");
    }

    #[test]
    fn atomic_write_creates_parents() {
        let dir = std::env::temp_dir().join("lkclab_out_atomic/nested");
        let path = dir.join("t.csv");
        write_atomic(&path, "x\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "x\n");
    }
}
