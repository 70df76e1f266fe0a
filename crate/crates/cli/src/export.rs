//! Artifact writers. Floats are printed with `Display`, which round-trips
//! `f64` exactly, so identical configurations produce byte-identical files.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

#[derive(Serialize, Debug, Clone)]
pub struct NegativityRow {
    pub bipartition: String,
    pub negativity_closed_form: f64,
    pub negativity_trace_norm: f64,
}

#[derive(Serialize, Debug, Clone)]
pub struct TrajectoryRow {
    pub t: f64,
    pub k: usize,
    pub l: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Serialize, Debug, Clone)]
pub struct SummaryRow {
    pub t: f64,
    pub negativity_spatial: f64,
    pub negativity_energy: f64,
    pub bound: f64,
}

#[derive(Serialize, Debug, Clone)]
pub struct SqueezeRow {
    pub t: f64,
    pub xi_w_squared: f64,
    pub delta_theta_squared: f64,
    pub bound_lhs: f64,
    pub n2: [f64; 3],
    pub n3: [f64; 3],
}

#[derive(Serialize, Debug, Clone)]
pub struct PremiseRecord {
    pub min_xi: f64,
    pub n2: [f64; 3],
    pub n3: [f64; 3],
}

#[derive(Serialize, Debug, Clone)]
pub struct SqueezeReportDoc {
    pub n_total: usize,
    pub scan_min_xi: f64,
    pub xi_w_squared: f64,
    pub delta_theta_squared: f64,
    pub mean_n3: f64,
    pub variance_n2: f64,
    pub n1: [f64; 3],
    pub n2: [f64; 3],
    pub n3: [f64; 3],
}

pub fn negativity_csv(rows: &[NegativityRow]) -> String {
    let mut out = String::from("bipartition,negativity_closed_form,negativity_trace_norm\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            r.bipartition, r.negativity_closed_form, r.negativity_trace_norm
        ));
    }
    out
}

pub fn trajectory_csv(rows: &[TrajectoryRow]) -> String {
    let mut out = String::from("t,k,l,re,im\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{},{}\n", r.t, r.k, r.l, r.re, r.im));
    }
    out
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("t,negativity_spatial,negativity_energy,bound\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.t, r.negativity_spatial, r.negativity_energy, r.bound
        ));
    }
    out
}

pub fn squeeze_csv(rows: &[SqueezeRow], premise: Option<&PremiseRecord>) -> String {
    let mut out = String::new();
    if let Some(p) = premise {
        out.push_str(&format!(
            "# premise: min_xi={} n2=({},{},{}) n3=({},{},{})\n",
            p.min_xi, p.n2[0], p.n2[1], p.n2[2], p.n3[0], p.n3[1], p.n3[2]
        ));
    }
    out.push_str("t,xi_w_squared,delta_theta_squared,bound_lhs,n2x,n2y,n2z,n3x,n3y,n3z\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.t,
            r.xi_w_squared,
            r.delta_theta_squared,
            r.bound_lhs,
            r.n2[0],
            r.n2[1],
            r.n2[2],
            r.n3[0],
            r.n3[1],
            r.n3[2]
        ));
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    serde_json::to_string_pretty(value).map(|s| s + "\n")
}

/// Write via a temporary file in the target directory, then rename.
pub fn atomic_write(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(dir) => tempfile::NamedTempFile::new_in(dir)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// `foo.csv -> foo.summary.csv`; paths without an extension get `.summary`
/// appended.
pub fn summary_path(path: &Path) -> std::path::PathBuf {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => path.with_extension(format!("summary.{ext}")),
        None => path.with_extension("summary"),
    }
}
