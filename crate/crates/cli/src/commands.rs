use std::fs::{self, File};

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use redundancy_core::fit::{fit_soliton_chain, ols, select_component_count, FitOptions, FitResult, RegressionResult};
use redundancy_core::infotheory::{report_all, synergy_indicator, CategoricalData, InformationReport};
use redundancy_core::lcwt::{cwt, default_scales, scalogram_svg, MotherWavelet};
use redundancy_core::stats::{adf_test, engle_granger_with_lags};
use redundancy_core::synth::generate;
use redundancy_core::TimeSeries;

use crate::args::{AdfArgs, CointArgs, CwtArgs, EntropyArgs, FitArgs, SynergyArgs, SynthArgs};
use crate::ingest::{build_series, ingest_timeseries, read_numeric, take_column, time_axis};
use crate::output::{ensure_dir, sig6, with_config, write_csv_with_config, write_json};

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn read_categorical(path: &std::path::Path) -> Result<CategoricalData> {
    let file = File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
    CategoricalData::from_csv_reader(file).map_err(|e| anyhow!("{}: {e}", path.display()))
}

#[derive(Serialize)]
struct EntropyOut<'a> {
    reports: &'a [InformationReport],
}

pub fn entropy(args: &EntropyArgs) -> Result<u8> {
    let data = read_categorical(&args.input)?;
    let table = data.table()?;
    let reports = if args.variables.is_empty() {
        report_all(&table)
    } else {
        let marginal = table.marginal(&args.variables)?;
        report_all(&marginal)
    };
    println!("{:<24} {:>10} {:>10} {:>10}", "subset", "H", "T", "R");
    for r in &reports {
        let opt = |v: Option<f64>| v.map_or("-".to_string(), sig6);
        println!(
            "{:<24} {:>10} {:>10} {:>10}",
            r.subset.join(","),
            sig6(r.entropy_bits),
            opt(r.mutual_information_bits),
            opt(r.redundancy_bits)
        );
    }
    ensure_dir(&args.output.out_dir)?;
    let v = with_config(args, args.output.seed, &EntropyOut { reports: &reports })?;
    write_json(&args.output.out_dir, "entropy.json", &v)?;
    Ok(0)
}

pub fn synergy(args: &SynergyArgs) -> Result<u8> {
    let data = read_categorical(&args.input)?;
    let s = synergy_indicator(&data.rows, &data.variables, &args.subset, args.window, args.stride)?;
    let mut body = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut body);
        w.write_record(["window_start", "R"])?;
        for (start, r) in s.window_starts.iter().zip(&s.redundancy_bits) {
            w.write_record([start.to_string(), r.to_string()])?;
        }
        w.flush()?;
    }
    ensure_dir(&args.output.out_dir)?;
    write_csv_with_config(&args.output.out_dir, "synergy.csv", args, args.output.seed, &body)?;
    let mean = s.redundancy_bits.iter().sum::<f64>() / s.redundancy_bits.len().max(1) as f64;
    println!(
        "{} windows of {} samples, mean R = {} bits",
        s.redundancy_bits.len(),
        s.window_length,
        sig6(mean)
    );
    Ok(0)
}

#[derive(Serialize)]
pub struct FitReport<'a> {
    pub beta: f64,
    pub components: &'a [redundancy_core::models::SolitonComponent],
    pub sse: f64,
    pub converged: bool,
    pub iterations: usize,
    pub termination: redundancy_core::fit::Termination,
    pub standard_errors: &'a redundancy_core::fit::StandardErrors,
    pub degenerate: bool,
    pub initialization_fallback: bool,
    pub regression: Option<&'a RegressionResult>,
}

impl<'a> FitReport<'a> {
    pub fn new(fit: &'a FitResult, regression: Option<&'a RegressionResult>) -> Self {
        Self {
            beta: fit.model.beta,
            components: &fit.model.components,
            sse: fit.sse,
            converged: fit.converged,
            iterations: fit.iterations,
            termination: fit.termination,
            standard_errors: &fit.standard_errors,
            degenerate: fit.degenerate,
            initialization_fallback: fit.initialization_fallback,
            regression,
        }
    }
}

pub fn run_fit(series: &TimeSeries, components: usize, auto: bool, fix_beta: bool) -> Result<FitResult> {
    let opts = FitOptions {
        fix_beta,
        ..FitOptions::default()
    };
    Ok(if auto {
        select_component_count(series, components, &opts)?.1
    } else {
        fit_soliton_chain(series, components, None, &opts)?
    })
}

pub fn print_fit(fit: &FitResult, regression: Option<&RegressionResult>) {
    println!("beta = {}", sig6(fit.model.beta));
    println!("{:>4} {:>12} {:>12} {:>12}", "#", "A", "k", "center");
    for (i, c) in fit.model.components.iter().enumerate() {
        println!(
            "{:>4} {:>12} {:>12} {:>12}",
            i + 1,
            sig6(c.amplitude),
            sig6(c.k),
            sig6(c.center)
        );
    }
    println!("sse = {}, converged = {}, iterations = {}", sig6(fit.sse), fit.converged, fit.iterations);
    if let Some(r) = regression {
        println!(
            "data = B*model + C: B = {} (t = {}), C = {} (t = {}), adj. R2 = {}, n = {}",
            sig6(r.slope),
            sig6(r.t_values[0]),
            sig6(r.intercept),
            sig6(r.t_values[1]),
            sig6(r.adj_r2),
            r.n
        );
    }
}

pub fn fit(args: &FitArgs) -> Result<u8> {
    let mut warnings = Vec::new();
    let s = &args.series;
    let series = ingest_timeseries(&s.input, s.column.as_deref(), s.time_column.as_deref(), s.fill, &mut warnings)?;
    warn_all(&warnings);
    let fit = run_fit(&series, args.components, args.auto_components, args.fix_beta)?;
    let regression = ols(&fit.predict(series.times()), series.values()).ok();
    print_fit(&fit, regression.as_ref());
    ensure_dir(&args.output.out_dir)?;
    let v = with_config(args, args.output.seed, &FitReport::new(&fit, regression.as_ref()))?;
    write_json(&args.output.out_dir, "fit_report.json", &v)?;
    Ok(0)
}

pub fn cwt_cmd(args: &CwtArgs) -> Result<u8> {
    let mut warnings = Vec::new();
    let s = &args.series;
    let series = ingest_timeseries(&s.input, s.column.as_deref(), s.time_column.as_deref(), s.fill, &mut warnings)?;
    warn_all(&warnings);
    let wavelet = MotherWavelet::new(args.order)?;
    let scales = default_scales(&series, wavelet, args.scales)?;
    let sc = cwt(&series, &scales, wavelet)?;
    let mut body = Vec::new();
    sc.write_csv(&mut body)?;
    ensure_dir(&args.output.out_dir)?;
    write_csv_with_config(&args.output.out_dir, "scalogram.csv", args, args.output.seed, &body)?;
    if args.svg {
        let path = args.output.out_dir.join("scalogram.svg");
        fs::write(&path, scalogram_svg(&sc, 4.0)).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let p = sc.peak();
    println!(
        "{} scales x {} translations; peak |W| = {} at a = {}, b = {}",
        sc.scales.len(),
        sc.translations.len(),
        sig6(p.magnitude),
        sig6(p.scale),
        sig6(p.translation)
    );
    Ok(0)
}

pub fn adf(args: &AdfArgs) -> Result<u8> {
    let mut warnings = Vec::new();
    let s = &args.series;
    let series = ingest_timeseries(&s.input, s.column.as_deref(), s.time_column.as_deref(), s.fill, &mut warnings)?;
    warn_all(&warnings);
    let r = adf_test(&series, args.lags.0, args.kind.into())?;
    println!(
        "ADF statistic = {} (lags {}, {} obs); critical values 1% {} 5% {} 10% {}; reject at {}",
        sig6(r.statistic),
        r.lags,
        r.nobs,
        sig6(r.critical_values.one),
        sig6(r.critical_values.five),
        sig6(r.critical_values.ten),
        level_name(r.reject_at)
    );
    ensure_dir(&args.output.out_dir)?;
    write_json(&args.output.out_dir, "adf.json", &with_config(args, args.output.seed, &r)?)?;
    Ok(0)
}

pub fn level_name(l: Option<redundancy_core::stats::Significance>) -> &'static str {
    use redundancy_core::stats::Significance::*;
    match l {
        Some(OnePercent) => "1%",
        Some(FivePercent) => "5%",
        Some(TenPercent) => "10%",
        None => "none",
    }
}

pub fn coint(args: &CointArgs) -> Result<u8> {
    let table = read_numeric(&args.input)?;
    let mut warnings = Vec::new();
    let y = take_column(&table, &args.y, args.fill, &mut warnings)?;
    let x = take_column(&table, &args.x, args.fill, &mut warnings)?;
    warn_all(&warnings);
    let times = time_axis(&table, args.time_column.as_deref())?;
    let ys = build_series(times.clone(), y)?;
    let xs = build_series(times, x)?;
    let r = engle_granger_with_lags(&ys, &xs, args.lags.0)?;
    match &r.residual_adf {
        Some(adf) => println!(
            "step 1: B = {}, C = {}; residual ADF = {} (lags {}); cointegrated at {}",
            sig6(r.step1.slope),
            sig6(r.step1.intercept),
            sig6(adf.statistic),
            adf.lags,
            level_name(r.cointegrated_at)
        ),
        None => println!(
            "step 1: B = {}, C = {}; exact linear relation (degenerate)",
            sig6(r.step1.slope),
            sig6(r.step1.intercept)
        ),
    }
    ensure_dir(&args.output.out_dir)?;
    write_json(&args.output.out_dir, "coint.json", &with_config(args, args.output.seed, &r)?)?;
    Ok(0)
}

pub fn synth(args: &SynthArgs) -> Result<u8> {
    let d = generate(args.kind.into(), args.seed);
    if let Some(parent) = args.output.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(parent)?;
    }
    let file = File::create(&args.output).with_context(|| format!("cannot write {}", args.output.display()))?;
    d.write_csv(std::io::BufWriter::new(file))?;
    if d.rows.is_empty() {
        bail!("generator produced no rows");
    }
    println!("wrote {} rows to {}", d.rows.len(), args.output.display());
    Ok(0)
}
