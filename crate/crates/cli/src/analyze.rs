//! The `analyze` subcommand.

use std::path::Path;

use textlaws::scaling::{full_report, write_report_files, AnalysisConfig, ScalingReport};

use crate::util::{self, CliError};
use crate::{AnalysisArgs, PreprocessArgs};

pub fn to_config(args: &AnalysisArgs) -> AnalysisConfig {
    AnalysisConfig {
        taylor_segment_len: args.taylor_l,
        lrc_q: args.lrc_q,
        heaps_samples_per_decade: args.samples_per_decade,
        ebeling_samples_per_decade: args.samples_per_decade,
        include_ebeling: !args.no_ebeling,
        ..AnalysisConfig::default()
    }
}

pub fn run(
    input: &Path,
    output: &Path,
    analysis: &AnalysisArgs,
    preprocess: &PreprocessArgs,
    reference: Option<&Path>,
    gnuplot: bool,
) -> Result<(), CliError> {
    let (stream, hash) = util::read_corpus(input, preprocess)?;
    let reference: Option<ScalingReport> = match reference {
        Some(path) => {
            let bytes = util::read_bytes(path)?;
            Some(serde_json::from_slice(&bytes).map_err(|e| {
                CliError::InputFormat(format!("reference {}: {e}", path.display()))
            })?)
        }
        None => None,
    };
    let config = to_config(analysis);
    let mut report = full_report(&stream, &config, reference.as_ref());
    report.meta = Some(util::meta(input, hash, None));

    if let Some(parent) = output.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("creating {}: {e}", parent.display())))?;
        }
    }
    let written = write_report_files(output, &report)
        .map_err(|e| CliError::Io(format!("writing report {}: {e}", output.display())))?;
    if gnuplot {
        write_gnuplot_stub(output)?;
    }
    for (property, verdict) in report.q1_verdicts() {
        println!("{property}\t{verdict}");
    }
    for path in &written {
        eprintln!("wrote {}", path.display());
    }
    if !report.any_computed() {
        return Err(CliError::InsufficientData(
            "no analysis could be computed on this input".into(),
        ));
    }
    Ok(())
}

/// A plot-ready gnuplot script over the point TSVs.
fn write_gnuplot_stub(prefix: &Path) -> Result<(), CliError> {
    let stem = prefix
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    let script = format!(
        "set logscale xy\n\
         set key left bottom\n\
         set terminal pngcairo size 1400,900\n\
         set output '{stem}.png'\n\
         set multiplot layout 2,3\n\
         plot '{stem}.zipf1.tsv' using 1:2 with points title 'words', \\\n\
         \x20    '{stem}.zipf2.tsv' using 1:2 with points title 'word pairs'\n\
         plot '{stem}.heaps.tsv' using 1:2 with points title 'v(n)'\n\
         plot '{stem}.ebeling.tsv' using 1:2 with points title 'm(l)'\n\
         plot '{stem}.taylor.tsv' using 1:2 with points title 'sigma vs mu'\n\
         plot '{stem}.lrc.tsv' using 1:2 with points title 'c(s)'\n\
         unset multiplot\n"
    );
    util::write_bytes(&util::with_suffix(prefix, ".gp"), script.as_bytes())
}
