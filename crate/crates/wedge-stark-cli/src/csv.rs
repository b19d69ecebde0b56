//! CSV emission for sweep tables.
//!
//! Layout contract: comment lines starting with '#' carry the version and the
//! full parameter echo needed to re-run the sweep, then the fixed header
//! `axis_value,delta_e_ry,beta_star,e_min_ry,e0_ry,evals,oracle_delta_e_ry`,
//! then one row per record. Floats are written in `{:e}` notation, which
//! round-trips bit-exactly through `str::parse::<f64>()`. The file is staged
//! in a temporary sibling and renamed into place, so a failed run never
//! leaves a partial table behind.

use std::io::Write;
use std::path::Path;

use wedge_stark::sweep::SweepTable;

pub const CSV_HEADER: &str = "axis_value,delta_e_ry,beta_star,e_min_ry,e0_ry,evals,oracle_delta_e_ry";

pub fn render_csv(table: &SweepTable) -> String {
    let meta = &table.meta;
    let fixed = &meta.fixed;
    let mut out = String::new();
    out.push_str(&format!("# wedge-stark sweep, version: {}\n", meta.version));
    out.push_str(&format!(
        "# params: axis={} d={:e} theta0={:e} L={:e} field={:e} nr={} nt={} tol={:e} oracle={} oracle_grid={}x{}\n",
        meta.axis,
        fixed.d,
        fixed.theta0,
        fixed.l,
        fixed.field,
        fixed.nr,
        fixed.nt,
        fixed.tol,
        meta.with_oracle,
        fixed.oracle_nr,
        fixed.oracle_nt,
    ));
    let values: Vec<String> = table.records.iter().map(|r| format!("{:e}", r.axis_value)).collect();
    out.push_str(&format!("# values: {}\n", values.join(",")));
    out.push_str("# units: lengths in a*, energies in R*, fields in F0 = R*/(e a*), angles in rad\n");
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &table.records {
        let oracle = r
            .oracle_delta_e
            .map(|v| format!("{v:e}"))
            .unwrap_or_default();
        out.push_str(&format!(
            "{:e},{:e},{:e},{:e},{:e},{},{}\n",
            r.axis_value, r.delta_e, r.beta_star, r.e_min, r.e0, r.evaluations, oracle
        ));
    }
    out
}

pub fn write_csv(table: &SweepTable, path: &Path) -> std::io::Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => std::path::PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
    tmp.write_all(render_csv(table).as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
