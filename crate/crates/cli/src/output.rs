use std::io::Write;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// Writes a file atomically: contents go to a temporary file in the target
/// directory, which is then renamed over the destination. Readers never see
/// a partially written file, and a failed run leaves any previous output
/// intact.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::numeric(format!("cannot create temp file in {}: {e}", dir.display())))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| CliError::numeric(format!("cannot write {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| CliError::numeric(format!("cannot persist {}: {e}", path.display())))?;
    Ok(())
}

/// Prints to stdout, swallowing EPIPE so that piping into `head` terminates
/// the report quietly instead of panicking mid-write.
pub fn print_text(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().write_all(text.as_bytes());
}

pub fn print_line(line: impl AsRef<str>) {
    print_text(line.as_ref());
    print_text("\n");
}

/// Assembles a CSV document: header line, one line per row (fields printed
/// with the shortest round-trip float representation), then optional `#`
/// comment footer lines.
pub fn csv_document(header: &str, rows: &[Vec<f64>], footer: &[String]) -> String {
    let mut doc = String::with_capacity(64 * (rows.len() + footer.len() + 1));
    doc.push_str(header);
    doc.push('\n');
    for row in rows {
        let mut first = true;
        for field in row {
            if !first {
                doc.push(',');
            }
            doc.push_str(&field.to_string());
            first = false;
        }
        doc.push('\n');
    }
    for line in footer {
        doc.push_str("# ");
        doc.push_str(line);
        doc.push('\n');
    }
    doc
}
