//! Reproducible experiment driver: parses a TOML config, runs one
//! experiment and writes CSV/JSON artifacts plus a manifest into the
//! output directory. Identical config + seed produce byte-identical
//! outputs in a fixed build.

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};

use fracspec_core::asymptotics::{
    karamata_spectral_check, karamata_synthetic_check, ratio_sweep,
};
use fracspec_core::config::{
    BlocksParams, ExperimentConfig, KaramataMode, ProfileKindConfig,
};
use fracspec_core::distdist::{riesz_energy_montecarlo, DistanceProfile};
use fracspec_core::measures::MeasureModel;
use fracspec_core::report::{json_num, write_csv, write_json};
use fracspec_core::sharpness::{block_deviation_check, build_construction, mixture_experiment};
use fracspec_core::specfun::constant_bundle;
use fracspec_core::spectral::{heat_sum, kuznecov_sweep, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(name = "fracspec", version, about = "spectral sums of fractal measures on flat tori")]
struct Cli {
    /// Experiment config (TOML)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSV/JSON artifacts
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Worker threads (0 = all cores); results do not depend on this
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Seed override for stochastic operations
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Lattice point budget for sweeps
    #[arg(long, global = true)]
    budget_points: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the constant bundle for (n, s) as JSON
    Constants { n: u32, s: f64 },
    /// Table of Fourier coefficients of the configured measure
    Coeffs {
        /// largest |k_i| per axis
        #[arg(long, default_value_t = 8)]
        kmax: i64,
    },
    /// Spectral sweep with ratio diagnostics
    Kuznecov,
    /// Heat-regularized sum over a t grid
    Heat,
    /// Distance profile export (F, a) and optional Gaussian averages
    Distprof,
    /// Riesz energy: layer-cake vs Monte Carlo comparison
    Energy,
    /// Laplace-transform power-law checks (synthetic or spectral)
    Karamata,
    /// Two-dimension mixture experiment
    Mixture,
    /// Oscillating-density construction and block deviation reports
    Blocks,
}

fn main() {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .ok();
    }
    if let Err(e) = run(&cli) {
        // machine-readable error record on any failure
        let record = json!({ "error": format!("{e:#}") });
        eprintln!("{record}");
        std::process::exit(1);
    }
}

fn load_config(cli: &Cli) -> anyhow::Result<(ExperimentConfig, String)> {
    let path = cli
        .config
        .as_ref()
        .context("this command needs --config <file>")?;
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let cfg = ExperimentConfig::parse(&text)?;
    Ok((cfg, text))
}

fn manifest(cli: &Cli, command: &str, config_echo: Option<&str>, seed: u64) -> Value {
    json!({
        "command": command,
        "build": format!("fracspec {}", env!("CARGO_PKG_VERSION")),
        "seed": seed,
        "budget_points": cli.budget_points.unwrap_or(DEFAULT_BUDGET),
        "config": config_echo.unwrap_or(""),
    })
}

fn out_dir(cli: &Cli) -> anyhow::Result<&Path> {
    fs::create_dir_all(&cli.out)?;
    Ok(cli.out.as_path())
}

fn build_profile(
    mu: &MeasureModel,
    kind: &ProfileKindConfig,
    pair_count: usize,
    seed: u64,
    blocks: Option<&[(f64, f64)]>,
    s: Option<f64>,
    diam: Option<f64>,
) -> anyhow::Result<DistanceProfile> {
    Ok(match kind {
        ProfileKindConfig::Empirical => DistanceProfile::empirical(mu, pair_count, seed)?,
        ProfileKindConfig::Renewal => DistanceProfile::renewal(mu)?,
        ProfileKindConfig::TorusExact => DistanceProfile::torus_exact(mu)?,
        ProfileKindConfig::Exact => DistanceProfile::exact_subtorus(mu)?,
        ProfileKindConfig::Synthetic => {
            let blocks = blocks.context("synthetic profile needs `blocks`")?;
            let s = s.context("synthetic profile needs `s`")?;
            DistanceProfile::synthetic_blocks(blocks, s, diam.unwrap_or(0.5))?
        }
    })
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Constants { n, s } => {
            let bundle = constant_bundle(*n, *s)?;
            let gamma = fracspec_core::specfun::gamma_fn(0.5 * (*n as f64 - s) + 1.0)?;
            let identity_residual = ((bundle.c_ns - bundle.gamma_ns / gamma) / bundle.c_ns).abs();
            let payload = json!({
                "n": bundle.n,
                "s": json_num(bundle.s),
                "vol_ball_s": json_num(bundle.vol_ball_s),
                "vol_ball_ns": json_num(bundle.vol_ball_ns),
                "c_ns": json_num(bundle.c_ns),
                "gamma_s": json_num(bundle.gamma_s),
                "gamma_ns": json_num(bundle.gamma_ns),
                "kappa_s": json_num(bundle.kappa_s),
                "identity_residual": json_num(identity_residual),
                "identity_tolerance": json_num(1e-12),
            });
            println!("{}", serde_json::to_string_pretty(&payload)?);
            let dir = out_dir(cli)?;
            write_json(&dir.join("constants.json"), &payload)?;
            write_json(
                &dir.join("manifest.json"),
                &manifest(cli, "constants", None, cli.seed.unwrap_or(0)),
            )?;
        }
        Command::Coeffs { kmax } => {
            let (cfg, echo) = load_config(cli)?;
            let mu = cfg.measure()?;
            let n = mu.ambient_dim();
            if n > 2 {
                bail!("coeffs table supports n <= 2");
            }
            let mut rows = Vec::new();
            let mut k = vec![0i64; n];
            let push = |k: &[i64], rows: &mut Vec<Vec<f64>>| {
                let c = mu.fourier_coefficient(k);
                let mut row: Vec<f64> = k.iter().map(|&x| x as f64).collect();
                row.extend_from_slice(&[c.re, c.im, c.norm()]);
                rows.push(row);
            };
            if n == 1 {
                for k1 in -kmax..=*kmax {
                    k[0] = k1;
                    push(&k, &mut rows);
                }
            } else {
                for k1 in -kmax..=*kmax {
                    for k2 in -kmax..=*kmax {
                        k[0] = k1;
                        k[1] = k2;
                        push(&k, &mut rows);
                    }
                }
            }
            let dir = out_dir(cli)?;
            let header: Vec<&str> = match n {
                1 => vec!["k1", "re", "im", "abs"],
                _ => vec!["k1", "k2", "re", "im", "abs"],
            };
            write_csv(&dir.join("coeffs.csv"), &header, &rows)?;
            write_json(
                &dir.join("manifest.json"),
                &manifest(cli, "coeffs", Some(&echo), cli.seed.unwrap_or(0)),
            )?;
            println!("wrote {} coefficients", rows.len());
        }
        Command::Kuznecov => {
            let (cfg, echo) = load_config(cli)?;
            let mu = cfg.measure()?;
            let params = cfg.kuznecov.as_ref().context("missing [kuznecov] section")?;
            let grid = params.lambda.build()?;
            let budget = cli.budget_points.or(cfg.budget_points).unwrap_or(DEFAULT_BUDGET);
            let series = kuznecov_sweep(&mu, &grid, budget)?;
            let period = params
                .amplitude_period
                .or(params.lambda.period_base)
                .unwrap_or(10.0);
            let report = ratio_sweep(&series, params.a_override, period)?;
            let bundle = constant_bundle(series.n as u32, series.s)?;
            let rows: Vec<Vec<f64>> =
                series.rows(bundle.c_ns).into_iter().map(|r| r.to_vec()).collect();
            let dir = out_dir(cli)?;
            write_csv(&dir.join("kuznecov.csv"), &["lambda", "n_value", "ratio"], &rows)?;
            let expo = series.n as f64 - series.s;
            let norm = params
                .a_override
                .or(series.a_exact)
                .map(|a| bundle.c_ns * a)
                .unwrap_or(1.0);
            let report_rows: Vec<Vec<f64>> = series
                .lambdas
                .iter()
                .zip(&series.values)
                .zip(&report.ratios)
                .map(|((&l, &v), &r)| vec![l, r, v - norm * l.powf(expo)])
                .collect();
            write_csv(
                &dir.join("sweep_report.csv"),
                &["lambda", "ratio", "residual"],
                &report_rows,
            )?;
            let summary = json!({
                "n": series.n,
                "s": json_num(series.s),
                "a_exact": series.a_exact.map(json_num).unwrap_or(Value::Null),
                "normalized": report.normalized,
                "fitted_exponent": json_num(report.fitted_exponent),
                "fit_halfwidth": json_num(report.fit_halfwidth),
                "expected_exponent": json_num(series.n as f64 - series.s),
                "amplitude_final": json_num(report.amplitude_final),
                "amplitude_prev": json_num(report.amplitude_prev),
                "amplitude_period": json_num(report.period),
                "verdict": report.verdict.as_str(),
                "converge_threshold": json_num(0.005),
                "oscillate_threshold": json_num(0.02),
            });
            write_json(&dir.join("sweep_report.json"), &summary)?;
            write_json(
                &dir.join("manifest.json"),
                &manifest(cli, "kuznecov", Some(&echo), cli.seed.unwrap_or(0)),
            )?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Heat => {
            let (cfg, echo) = load_config(cli)?;
            let mu = cfg.measure()?;
            let params = cfg.heat.as_ref().context("missing [heat] section")?;
            let grid = params.t.build()?;
            let expo = 0.5 * (mu.ambient_dim() as f64 - mu.dimension());
            let mut rows = Vec::with_capacity(grid.len());
            for &t in &grid {
                let h = heat_sum(&mu, t, params.epsilon)?;
                rows.push(vec![t, h, h * t.powf(expo)]);
            }
            let dir = out_dir(cli)?;
            write_csv(&dir.join("heat.csv"), &["t", "h_value", "h_scaled"], &rows)?;
            let summary = json!({
                "epsilon": json_num(params.epsilon),
                "scaling_exponent": json_num(expo),
                "h_scaled_first": json_num(rows.first().map(|r| r[2]).unwrap_or(f64::NAN)),
                "h_scaled_last": json_num(rows.last().map(|r| r[2]).unwrap_or(f64::NAN)),
            });
            write_json(&dir.join("heat.json"), &summary)?;
            write_json(
                &dir.join("manifest.json"),
                &manifest(cli, "heat", Some(&echo), cli.seed.unwrap_or(0)),
            )?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Distprof => {
            let (cfg, echo) = load_config(cli)?;
            let params = cfg.distprof.as_ref().context("missing [distprof] section")?;
            let seed = cli.seed.or(cfg.seed).unwrap_or(1);
            let mu_opt = cfg.measure.as_ref().map(|m| m.build()).transpose()?;
            let profile = match (&params.profile, &mu_opt) {
                (ProfileKindConfig::Synthetic, _) => build_profile(
                    // synthetic profiles have no underlying measure
                    &MeasureModel::subtorus(2, 1, vec![0.0])?,
                    &params.profile,
                    params.pair_count,
                    seed,
                    params.blocks.as_deref(),
                    params.s,
                    params.diam,
                )?,
                (_, Some(mu)) => build_profile(
                    mu,
                    &params.profile,
                    params.pair_count,
                    seed,
                    None,
                    None,
                    None,
                )?,
                (_, None) => bail!("this profile kind needs a [measure] section"),
            };
            let grid = params.r.build()?;
            let rows: Vec<Vec<f64>> =
                profile.rows(&grid).into_iter().map(|r| r.to_vec()).collect();
            let dir = out_dir(cli)?;
            write_csv(&dir.join("distprof.csv"), &["r", "f_value", "a_value"], &rows)?;
            if let Some(tg) = &params.gaussian_t {
                let tgrid = tg.build()?;
                let mut grows = Vec::with_capacity(tgrid.len());
                for &t in &tgrid {
                    let g = profile.gaussian_average(t)?;
                    grows.push(vec![t, g, g / t.powf(0.5 * profile.s())]);
                }
                write_csv(&dir.join("gaussian.csv"), &["t", "g_value", "g_scaled"], &grows)?;
            }
            let summary = json!({
                "profile": profile.kind_name(),
                "s": json_num(profile.s()),
                "mass_sq": json_num(profile.mass_sq()),
                "diam": json_num(profile.diam()),
                "pair_count": params.pair_count,
                "seed": seed,
            });
            write_json(&dir.join("distprof.json"), &summary)?;
            write_json(
                &dir.join("manifest.json"),
                &manifest(cli, "distprof", Some(&echo), seed),
            )?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Energy => {
            let (cfg, echo) = load_config(cli)?;
            let mu = cfg.measure()?;
            let params = cfg.energy.as_ref().context("missing [energy] section")?;
            let seed = cli.seed.or(cfg.seed).unwrap_or(1);
            // independent seeds: the layer-cake profile must not share the
            // Monte Carlo sample, otherwise the comparison is an identity
            let profile = build_profile(
                &mu,
                &params.profile,
                params.pair_count,
                seed.wrapping_add(1),
                None,
                None,
                None,
            )?;
            let lc = profile.riesz_layercake(params.u)?;
            let mc = riesz_energy_montecarlo(&mu, params.u, params.pair_count, seed)?;
            let se = mc.stderr.unwrap_or(f64::NAN);
            let summary = json!({
                "u": json_num(params.u),
                "layercake": json_num(lc.value),
                "montecarlo": json_num(mc.value),
                "montecarlo_stderr": json_num(se),
                "diff_over_stderr": json_num((lc.value - mc.value).abs() / se),
                "agreement_threshold_stderr": json_num(4.0),
                "pair_count": params.pair_count,
                "profile": profile.kind_name(),
                "seed": seed,
            });
            let dir = out_dir(cli)?;
            write_json(&dir.join("energy.json"), &summary)?;
            write_json(
                &dir.join("manifest.json"),
                &manifest(cli, "energy", Some(&echo), seed),
            )?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Karamata => {
            let (cfg, echo) = load_config(cli)?;
            let params = cfg.karamata.as_ref().context("missing [karamata] section")?;
            let tgrid = params.t.build()?;
            let dir = out_dir(cli)?;
            let summary = match params.mode {
                KaramataMode::Synthetic => {
                    let a = params.amplitude.unwrap_or(1.0);
                    let rep = karamata_synthetic_check(params.beta, a, &tgrid)?;
                    let rows: Vec<Vec<f64>> =
                        rep.rows.iter().map(|&(t, v)| vec![t, v]).collect();
                    write_csv(&dir.join("karamata.csv"), &["t", "scaled_transform"], &rows)?;
                    json!({
                        "mode": "synthetic",
                        "beta": json_num(params.beta),
                        "amplitude": json_num(a),
                        "max_dev_final_decade": json_num(rep.max_dev_final_decade),
                        "tolerance": json_num(1e-3),
                    })
                }
                KaramataMode::Spectral => {
                    let mu = cfg.measure()?;
                    let lgrid = params
                        .lambda
                        .as_ref()
                        .context("spectral mode needs [karamata.lambda]")?
                        .build()?;
                    let budget =
                        cli.budget_points.or(cfg.budget_points).unwrap_or(DEFAULT_BUDGET);
                    let series = kuznecov_sweep(&mu, &lgrid, budget)?;
                    let bundle =
                        constant_bundle(series.n as u32, series.s)?;
                    let a = series
                        .a_exact
                        .context("spectral mode needs a measure with a closed-form density")?;
                    let c_transform = bundle.gamma_ns * a;
                    let rep =
                        karamata_spectral_check(&mu, &series, params.beta, c_transform, &tgrid)?;
                    let rows: Vec<Vec<f64>> =
                        rep.transform_rows.iter().map(|&(t, v)| vec![t, v]).collect();
                    write_csv(&dir.join("karamata.csv"), &["t", "scaled_transform"], &rows)?;
                    let crows: Vec<Vec<f64>> =
                        rep.counting_rows.iter().map(|&(s, v)| vec![s, v]).collect();
                    write_csv(&dir.join("karamata_counting.csv"), &["s_var", "scaled_counting"], &crows)?;
                    json!({
                        "mode": "spectral",
                        "beta": json_num(params.beta),
                        "c_transform": json_num(c_transform),
                        "max_dev_transform": json_num(rep.max_dev_transform),
                        "max_dev_counting": json_num(rep.max_dev_counting),
                        "tolerance": json_num(0.01),
                    })
                }
            };
            write_json(&dir.join("karamata.json"), &summary)?;
            write_json(
                &dir.join("manifest.json"),
                &manifest(cli, "karamata", Some(&echo), cli.seed.unwrap_or(0)),
            )?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Mixture => {
            let (cfg, echo) = load_config(cli)?;
            let params = cfg.mixture.as_ref().context("missing [mixture] section")?;
            let grid = params.lambda.build()?;
            let budget = cli.budget_points.or(cfg.budget_points).unwrap_or(DEFAULT_BUDGET);
            let rep = mixture_experiment(
                params.n,
                params.s1,
                params.offset1.clone(),
                params.s2,
                params.offset2.clone(),
                &grid,
                budget,
            )?;
            let rows: Vec<Vec<f64>> = rep
                .rows
                .iter()
                .map(|r| {
                    vec![r.lambda, r.n_first, r.n_second, r.n_mix, r.cross, r.bound]
                })
                .collect();
            let dir = out_dir(cli)?;
            write_csv(
                &dir.join("mixture.csv"),
                &["lambda", "n_first", "n_second", "n_mix", "cross", "bound"],
                &rows,
            )?;
            let summary = json!({
                "n": params.n,
                "s1": params.s1,
                "s2": params.s2,
                "fitted_exponent": json_num(rep.fitted_exponent),
                "fit_halfwidth": json_num(rep.fit_halfwidth),
                "expected_exponent": json_num(rep.expected_exponent),
                "exponent_tolerance": json_num(0.05),
                "cross_bounded": rep.cross_bounded,
            });
            write_json(&dir.join("mixture.json"), &summary)?;
            write_json(
                &dir.join("manifest.json"),
                &manifest(cli, "mixture", Some(&echo), cli.seed.unwrap_or(0)),
            )?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Blocks => {
            let (cfg, echo) = load_config(cli)?;
            let params: &BlocksParams = cfg.blocks.as_ref().context("missing [blocks] section")?;
            let rec = build_construction(
                params.s,
                &params.amplitudes,
                params.delta,
                params.base_freq,
            )?;
            let dir = out_dir(cli)?;
            let scales = params.quad_scales.clone().unwrap_or_else(|| vec![1.0, 2.0]);
            let mut block_reports = Vec::new();
            let gaussian_side = params.delta.is_none();
            if gaussian_side && rec.s == 1 {
                for m in 0..rec.freqs.len() {
                    let mut per_scale = Vec::new();
                    for &qs in &scales {
                        let dev = block_deviation_check(&rec, m, qs)?;
                        per_scale.push(json!({
                            "quad_scale": json_num(qs),
                            "q_max_on_block": json_num(dev.q_max_on_block),
                            "hypothesis_ok": dev.hypothesis_ok,
                            "g_scaled": json_num(dev.g_scaled),
                            "gamma_a": json_num(dev.gamma_a),
                            "deviation": json_num(dev.deviation),
                            "weight_integral": json_num(dev.weight_integral),
                            "measured_c": json_num(dev.measured_c),
                            "control_q_dev": json_num(dev.control_q_dev),
                            "control_bound": json_num(dev.control_bound),
                        }));
                    }
                    block_reports.push(json!({
                        "block": m,
                        "eta": json_num(rec.etas[m]),
                        "r": json_num(rec.r_blocks[m]),
                        "u": json_num(rec.u_blocks[m]),
                        "checks": per_scale,
                    }));
                }
                // q(rho) samples across the first block for plotting
                let r = rec.r_blocks[0];
                let u = rec.u_blocks[0];
                let mut qrows = Vec::new();
                for i in 0..200 {
                    let rho = r * (u.powf(i as f64 / 199.0));
                    qrows.push(vec![rho, fracspec_core::sharpness::q_exact(&rec, rho)?]);
                }
                write_csv(&dir.join("q_profile.csv"), &["rho", "q_value"], &qrows)?;
            }
            // the record re-serialized as a config section for exact reruns
            let mut rerun = String::from("[blocks]\n");
            rerun.push_str(&format!("s = {}\n", rec.s));
            rerun.push_str(&format!(
                "amplitudes = [{}]\n",
                rec.amplitudes
                    .iter()
                    .map(|a| fracspec_core::report::fmt_g17(*a))
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            if let Some(d) = rec.delta {
                rerun.push_str(&format!("delta = {}\n", fracspec_core::report::fmt_g17(d)));
            }
            rerun.push_str(&format!("base_freq = {}\n", rec.freqs[0]));
            fs::write(dir.join("construction.toml"), &rerun)?;
            let summary = json!({
                "s": rec.s,
                "mode": if gaussian_side { "gaussian-side" } else { "power-saving" },
                "amplitudes": rec.amplitudes.iter().map(|&a| json_num(a)).collect::<Vec<_>>(),
                "freqs": rec.freqs.clone(),
                "etas": rec.etas.iter().map(|&x| json_num(x)).collect::<Vec<_>>(),
                "u_blocks": rec.u_blocks.iter().map(|&x| json_num(x)).collect::<Vec<_>>(),
                "r_blocks": rec.r_blocks.iter().map(|&x| json_num(x)).collect::<Vec<_>>(),
                "eps0": json_num(rec.eps0),
                "l0": json_num(rec.l0),
                "c0": json_num(rec.c0),
                "delta": rec.delta.map(json_num).unwrap_or(Value::Null),
                "blocks": block_reports,
            });
            write_json(&dir.join("blocks.json"), &summary)?;
            write_json(
                &dir.join("manifest.json"),
                &manifest(cli, "blocks", Some(&echo), cli.seed.unwrap_or(0)),
            )?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
    }
    Ok(())
}
