//! CSV emission and atomic file writes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use oneport_core::devices::SimResult;

use crate::CliError;

pub const SIM_HEADER: &str = "t,x,xdot,F,u,power,energy,internal_energy";

/// 17 significant digits; `nan`, `inf` and `-inf` for non-finite values.
pub fn fmt_value(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn push_row(out: &mut String, values: &[f64]) {
    let row: Vec<String> = values.iter().map(|v| fmt_value(*v)).collect();
    out.push_str(&row.join(","));
    out.push('\n');
}

pub fn sim_csv(sim: &SimResult) -> String {
    let mut out = String::with_capacity(sim.len() * 8 * 24 + 64);
    out.push_str(SIM_HEADER);
    out.push('\n');
    for k in 0..sim.len() {
        push_row(
            &mut out,
            &[
                sim.t[k],
                sim.x[k],
                sim.xdot[k],
                sim.force[k],
                sim.parameter[k],
                sim.power[k],
                sim.energy[k],
                sim.internal[k],
            ],
        );
    }
    out
}

/// Rows of `header` columns.
pub fn table_csv(header: &str, rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{header}");
    for row in rows {
        push_row(&mut out, row);
    }
    out
}

/// Writes to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Io(format!("{}: not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = std::fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(contents)?;
            f.sync_all()
        })
        .and_then(|_| std::fs::rename(&tmp, path));
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_format() {
        assert_eq!(fmt_value(f64::NAN), "nan");
        assert_eq!(fmt_value(3.0), "3.0000000000000000e0");
        assert_eq!(fmt_value(-0.1), "-1.0000000000000001e-1");
        let v = 0.1 + 0.2;
        assert_eq!(fmt_value(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, b"a\n").unwrap();
        write_atomic(&path, b"b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "b\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
