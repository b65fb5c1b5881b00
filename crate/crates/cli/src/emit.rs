//! Diagnostics emitters. Floats are serialized with 17 significant digits so
//! every value round-trips losslessly, and files are written whole-then-rename
//! so a failed run never leaves a torn CSV behind.

use std::io;
use std::path::Path;

use atanfd::diagnostics::DiagnosticsRecord;

/// Bit-exact column order of the CSV schema.
pub const CSV_HEADER: &str = "t,mass,min_u,max_u,l2_dist,entropy,entropy_dissipation,\
energy_dissipation,lyapunov,theta_linf,a1_norm,a3_norm,dt_used";

/// 17 significant digits: 1 leading + 16 fractional.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn record_fields(r: &DiagnosticsRecord) -> [(&'static str, f64); 13] {
    [
        ("t", r.t),
        ("mass", r.mass),
        ("min_u", r.min_u),
        ("max_u", r.max_u),
        ("l2_dist", r.l2_dist),
        ("entropy", r.entropy),
        ("entropy_dissipation", r.entropy_dissipation),
        ("energy_dissipation", r.energy_dissipation),
        ("lyapunov", r.lyapunov),
        ("theta_linf", r.theta_linf),
        ("a1_norm", r.a1_norm),
        ("a3_norm", r.a3_norm),
        ("dt_used", r.dt_used),
    ]
}

pub fn render_csv(records: &[DiagnosticsRecord]) -> String {
    let mut out = String::with_capacity(64 + records.len() * 350);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let fields = record_fields(r);
        for (i, (_, v)) in fields.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&fmt_f64(*v));
        }
        out.push('\n');
    }
    out
}

pub fn render_json(records: &[DiagnosticsRecord]) -> String {
    let mut out = String::from("[");
    for (i, r) in records.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        out.push_str("  {");
        for (j, (name, v)) in record_fields(r).iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push('"');
            out.push_str(name);
            out.push_str("\":");
            out.push_str(&fmt_f64(*v));
        }
        out.push('}');
    }
    out.push_str("\n]\n");
    out
}

/// Write `content` to `path` atomically: stage in `<path>.tmp`, rename into
/// place, and remove the staging file if anything fails.
pub fn write_atomic(path: &Path, content: &str) -> io::Result<()> {
    let tmp = path.with_extension(match path.extension() {
        Some(ext) => format!("{}.tmp", ext.to_string_lossy()),
        None => "tmp".to_string(),
    });
    let result = std::fs::write(&tmp, content).and_then(|()| std::fs::rename(&tmp, path));
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result
}
