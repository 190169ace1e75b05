//! CSV plot data derived from a report.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Result, WpError};
use crate::report::Report;
use crate::spectral::A_VECTOR_FLOOR;

#[derive(Debug, Clone, PartialEq)]
pub struct PlotTable {
    pub name: &'static str,
    pub csv: String,
}

impl PlotTable {
    pub fn rows(&self) -> usize {
        self.csv.lines().count().saturating_sub(1)
    }
}

pub fn plot_tables(report: &Report) -> Result<Vec<PlotTable>> {
    let top = report.spectra.last().ok_or_else(|| WpError::Format {
        path: "report".into(),
        message: "report has no spectra".into(),
    })?;
    let mut eig = String::from("n,index,eigenvalue\n");
    for (k, v) in top.eigenvalues.iter().enumerate() {
        writeln!(eig, "{},{},{:.16e}", top.n, k, v).ok();
    }
    let mut trend = String::from("n,lambda_min,lambda_max,kernel_dim,bound\n");
    for s in &report.spectra {
        writeln!(trend, "{},{:.16e},{:.16e},{},{:.16e}", s.n, s.lambda_min, s.lambda_max, s.kernel.dimension, s.bound.bound).ok();
    }
    let mut sectional = String::from("n,sectional\n");
    for (k, v) in report.checks.trend.values.iter().enumerate() {
        writeln!(sectional, "{},{:.16e}", k + 1, v).ok();
    }
    let mut a = String::from("i,neg_q,resolvent_term,integral_bound,cube_sum_bound,floor\n");
    for v in &report.checks.noncompactness.vectors {
        writeln!(
            a,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            v.i, v.neg_q, v.resolvent_term, v.integral_bound, v.cube_sum_bound, A_VECTOR_FLOOR
        )
        .ok();
    }
    Ok(vec![
        PlotTable { name: "eigenvalues.csv", csv: eig },
        PlotTable { name: "lambda_trend.csv", csv: trend },
        PlotTable { name: "sectional.csv", csv: sectional },
        PlotTable { name: "a_vectors.csv", csv: a },
    ])
}

/// Writes every table into `dir`, returning the paths.
pub fn export_plots(report: &Report, dir: &Path) -> Result<Vec<PathBuf>> {
    let tables = plot_tables(report)?;
    std::fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for t in tables {
        let path = dir.join(t.name);
        std::fs::write(&path, &t.csv)?;
        out.push(path);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;
    use crate::report::{build_report, prepare_cache};
    use crate::tensor::TensorCache;

    #[test]
    fn tables_for_n3() {
        let config = RunConfig { n: 3, i_max: 2, trend_n_max: 5, ..Default::default() };
        let mut cache = TensorCache::new(3);
        prepare_cache(&config, &mut cache).unwrap();
        let report = build_report(&config, &cache).unwrap();
        let t = plot_tables(&report).unwrap();
        assert_eq!(t[0].rows(), 15);
        assert_eq!(t[1].rows(), 3);
        assert_eq!(t[2].rows(), 5);
        assert_eq!(t[3].rows(), 3);
        let mut empty = report.clone();
        empty.spectra.clear();
        assert!(matches!(plot_tables(&empty), Err(WpError::Format { .. })));
    }
}
