//! Builds the complete report for `n = 3` and writes plot tables.

use wp_curvature::config::RunConfig;
use wp_curvature::plots::export_plots;
use wp_curvature::report::{build_report, prepare_cache};
use wp_curvature::tensor::TensorCache;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = RunConfig { n: 3, ..Default::default() }.resolved()?;
    let mut cache = TensorCache::new(config.n);
    prepare_cache(&config, &mut cache)?;
    let report = build_report(&config, &cache)?;
    println!("{}", serde_json::to_string_pretty(&report.verdicts)?);
    let dir = std::env::temp_dir().join("wp-example-plots");
    for p in export_plots(&report, &dir)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
