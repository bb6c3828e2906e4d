use std::fs;

use anyhow::{Context, Result};
use serde::Serialize;

use redundancy_core::fit::{ols, RegressionResult};
use redundancy_core::lcwt::{
    cwt, default_scales, extract_waves, group_wave_trains, redundancy_split_at, scalogram_svg, ExtractOptions,
    MotherWavelet, WaveTrain,
};
use redundancy_core::stats::{adf_test, engle_granger_with_lags, AdfResult, CointegrationResult, Significance};
use redundancy_core::{Error as CoreError, TimeSeries};

use crate::args::PipelineArgs;
use crate::commands::{print_fit, run_fit, FitReport, level_name};
use crate::ingest::ingest_timeseries;
use crate::output::{ensure_dir, sig6, with_config, write_csv_with_config, write_json};

#[derive(Serialize)]
struct WaveTrainsOut<'a> {
    baseline: f64,
    energy_history: &'a [f64],
    stop_reason: redundancy_core::lcwt::StopReason,
    low_confidence: bool,
    trains: &'a [WaveTrain],
}

#[derive(Serialize)]
struct Checks {
    regression_available: bool,
    adj_r2: Option<f64>,
    min_r2: f64,
    cointegrated_at_5_percent: bool,
    waves_retained: usize,
}

#[derive(Serialize)]
struct ValidationOut<'a> {
    adf: Option<&'a AdfResult>,
    adf_error: Option<String>,
    engle_granger: Option<&'a CointegrationResult>,
    engle_granger_error: Option<String>,
    checks: Checks,
    passed: bool,
}

fn soft<T>(r: redundancy_core::Result<T>) -> Result<(Option<T>, Option<String>)> {
    match r {
        Ok(v) => Ok((Some(v), None)),
        Err(e @ (CoreError::Stats(_) | CoreError::SeriesTooShort(_))) => Ok((None, Some(e.to_string()))),
        Err(e) => Err(e.into()),
    }
}

/// Runs the whole chain; returns the exit code.
pub fn run(args: &PipelineArgs) -> Result<u8> {
    let mut warnings = Vec::new();
    let s = &args.series;
    let series = ingest_timeseries(&s.input, s.column.as_deref(), s.time_column.as_deref(), s.fill, &mut warnings)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    if !(args.energy_stop > 0.0 && args.energy_stop < 1.0) {
        anyhow::bail!("--energy-stop must lie in (0, 1)");
    }
    let dir = &args.output.out_dir;
    let seed = args.output.seed;
    ensure_dir(dir)?;

    let fit = run_fit(&series, args.components, args.auto_components, args.fix_beta).context("fit")?;
    let model_values = fit.predict(series.times());
    let regression: Option<RegressionResult> = ols(&model_values, series.values()).ok();
    print_fit(&fit, regression.as_ref());
    write_json(dir, "fit_report.json", &with_config(args, seed, &FitReport::new(&fit, regression.as_ref()))?)?;
    write_json(dir, "regression.json", &with_config(args, seed, &regression)?)?;

    let wavelet = MotherWavelet::default();
    let scales = default_scales(&series, wavelet, args.scales).context("cwt")?;
    let sc = cwt(&series, &scales, wavelet).context("cwt")?;
    let mut body = Vec::new();
    sc.write_csv(&mut body)?;
    write_csv_with_config(dir, "scalogram.csv", args, seed, &body)?;
    if args.svg {
        let path = dir.join("scalogram.svg");
        fs::write(&path, scalogram_svg(&sc, 4.0)).with_context(|| format!("cannot write {}", path.display()))?;
    }

    let opts = ExtractOptions {
        max_waves: args.max_waves,
        energy_stop: args.energy_stop,
        wavelet,
        scales: Some(scales),
        scale_count: args.scales,
        ..ExtractOptions::default()
    };
    let extraction = extract_waves(&series, &opts).context("extract")?;
    let trains = group_wave_trains(&extraction.waves);
    println!(
        "{} waves retained ({:?}); residual energy ratio {}",
        extraction.waves.len(),
        extraction.stop_reason,
        sig6(*extraction.energy_history.last().unwrap_or(&1.0))
    );
    for t in &trains {
        let trend = t
            .trend
            .map_or("-".to_string(), |tr| format!("slope {} (R2 {})", sig6(tr.slope), sig6(tr.r_squared)));
        println!("  {:?} train: {} waves, trend {}", t.sign, t.waves.len(), trend);
    }
    let out = WaveTrainsOut {
        baseline: extraction.baseline,
        energy_history: &extraction.energy_history,
        stop_reason: extraction.stop_reason,
        low_confidence: extraction.low_confidence,
        trains: &trains,
    };
    write_json(dir, "wave_trains.json", &with_config(args, seed, &out)?)?;

    let split = redundancy_split_at(&trains, series.times(), args.roles.into());
    let mut body = Vec::new();
    split.write_csv(&mut body)?;
    write_csv_with_config(dir, "redundancy.csv", args, seed, &body)?;

    let (adf, adf_error) = soft(adf_test(&series, args.lags.0, args.kind.into()))?;
    let model_series = TimeSeries::new(series.times().to_vec(), model_values)?;
    let (eg, eg_error) = soft(engle_granger_with_lags(&series, &model_series, args.lags.0))?;
    let cointegrated = eg.as_ref().is_some_and(|r| {
        matches!(r.cointegrated_at, Some(Significance::OnePercent | Significance::FivePercent))
    });
    let adj_r2 = regression.as_ref().map(|r| r.adj_r2);
    let checks = Checks {
        regression_available: regression.is_some(),
        adj_r2,
        min_r2: args.min_r2,
        cointegrated_at_5_percent: cointegrated,
        waves_retained: extraction.waves.len(),
    };
    let passed = cointegrated && adj_r2.is_some_and(|r| r >= args.min_r2) && !extraction.waves.is_empty();
    if let Some(a) = &adf {
        println!("ADF on data: {} (lags {}), reject at {}", sig6(a.statistic), a.lags, level_name(a.reject_at));
    }
    match &eg {
        Some(r) => println!("Engle-Granger data vs model: cointegrated at {}", level_name(r.cointegrated_at)),
        None => println!("Engle-Granger data vs model unavailable"),
    }
    let v = ValidationOut {
        adf: adf.as_ref(),
        adf_error,
        engle_granger: eg.as_ref(),
        engle_granger_error: eg_error,
        checks,
        passed,
    };
    write_json(dir, "validation.json", &with_config(args, seed, &v)?)?;
    println!("validation {}", if passed { "passed" } else { "failed" });
    Ok(if passed { 0 } else { 2 })
}
