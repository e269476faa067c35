//! CSV emission: '#'-prefixed manifest headers and round-trip-exact number
//! formatting. All content is deterministic for a fixed (config, seed);
//! wall-clock timing goes to stderr, never into the files.

use std::fmt::Write as _;

/// 17 significant digits: parses back to the identical double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CsvBuilder {
    buf: String,
}

impl CsvBuilder {
    pub fn new(header_lines: &[String]) -> Self {
        let mut buf = String::new();
        for line in header_lines {
            buf.push_str(line);
            buf.push('\n');
        }
        CsvBuilder { buf }
    }

    pub fn comment(&mut self, text: &str) {
        let _ = writeln!(self.buf, "# {text}");
    }

    pub fn columns(&mut self, names: &[&str]) {
        let _ = writeln!(self.buf, "{}", names.join(","));
    }

    pub fn row(&mut self, fields: &[String]) {
        let _ = writeln!(self.buf, "{}", fields.join(","));
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub fn write_file(path: &str, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("failed to write {path}: {e}"))
}
