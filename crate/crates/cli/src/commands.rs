//! Subcommand bodies. Each writes its artifacts under the configured output directory
//! and a short human-readable summary to `w`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use ordo_core::classical::{action_series, c5_candidates, fit_series_numeric_with, secular_profiles, C5Route, FitOptions, Potential};
use ordo_core::kernels::{kernel_matrix, write_matrix_binary, SymbolFunction};
use ordo_core::opalg::quantize_poly;
use ordo_core::propagator::{chernoff_iterate_with, convergence_study, short_time_phase_scaling, Spectrum};
use ordo_core::report::{build_report, ReportConfig};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{config_hash, fmt_f64, write_atomic, write_json, Csv};

pub type CmdResult = Result<(), CliError>;

pub const ACTION_CSV: &str = "action.csv";
pub const ACTION_JSON: &str = "action_summary.json";
pub const SERIES_CSV: &str = "series_profiles.csv";
pub const SERIES_JSON: &str = "series.json";
pub const SLICE_CONVERGENCE_CSV: &str = "slice_convergence.csv";
pub const SLICE_PAIRWISE_CSV: &str = "slice_pairwise.csv";
pub const SLICE_SCALING_CSV: &str = "slice_scaling.csv";
pub const SLICE_JSON: &str = "slice_slopes.json";
pub const CHERNOFF_CSV: &str = "chernoff.csv";
pub const CHERNOFF_JSON: &str = "chernoff.json";
pub const REPORT_MD: &str = "report.md";
pub const REPORT_JSON: &str = "report.json";

/// Artifacts the report reads when not asked to run everything itself.
pub const REPORT_INPUTS: [&str; 3] = [ACTION_JSON, SLICE_JSON, CHERNOFF_JSON];

fn path(cfg: &RunConfig, name: &str) -> PathBuf {
    cfg.out.join(name)
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io(e)
}

pub fn quantize(cfg: &RunConfig, write_kernel: bool, as_json: bool, w: &mut impl Write) -> CmdResult {
    let sym = cfg.poly_symbol()?;
    let measures = cfg.measures()?;
    let mut entries = Vec::new();
    for m in &measures {
        let op = quantize_poly(&sym, m);
        entries.push(json!({ "measure": m.to_string(), "operator": op.to_string() }));
        if !as_json {
            if measures.len() > 1 {
                writeln!(w, "[{m}] {op}").map_err(io)?;
            } else {
                writeln!(w, "{op}").map_err(io)?;
            }
        }
    }
    if as_json {
        let v = json!({ "symbol": sym.to_string(), "quantizations": entries });
        writeln!(w, "{}", serde_json::to_string_pretty(&v).expect("json")).map_err(io)?;
    }
    if write_kernel {
        kernel(cfg, w)?;
    }
    Ok(())
}

/// Kernel matrices of the configured symbol, one binary and one CSV file per measure.
pub fn kernel(cfg: &RunConfig, w: &mut impl Write) -> CmdResult {
    let f = SymbolFunction::from_poly_symbol(&cfg.poly_symbol()?)?;
    let g = cfg.grid()?;
    let hash = config_hash(cfg);
    let measures = cfg.measures()?;
    for (idx, m) in measures.iter().enumerate() {
        let k = kernel_matrix(&f, &g, m)?;
        let stem = if measures.len() == 1 { "kernel".to_string() } else { format!("kernel_{idx}") };
        let mut bin = Vec::new();
        write_matrix_binary(&mut bin, &g, &k.entries)?;
        write_atomic(&path(cfg, &format!("{stem}.bin")), &bin).map_err(io)?;
        let header: Vec<String> = (0..g.n).flat_map(|j| [format!("re{j}"), format!("im{j}")]).collect();
        let mut csv = Csv::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
        for i in 0..g.n {
            csv.row((0..g.n).flat_map(|j| [fmt_f64(k.entries[(i, j)].re), fmt_f64(k.entries[(i, j)].im)]).collect());
        }
        write_atomic(&path(cfg, &format!("{stem}.csv")), csv.render(&hash).as_bytes()).map_err(io)?;
        let herm = (&k.entries - k.entries.adjoint()).norm() / k.entries.norm().max(f64::MIN_POSITIVE);
        writeln!(w, "{stem}: measure {m}, n = {}, relative anti-Hermitian part {}", g.n, fmt_f64(herm)).map_err(io)?;
    }
    Ok(())
}

fn series_value(coeffs: &[(i32, f64)], eps: f64) -> f64 {
    coeffs.iter().map(|&(k, c)| c * eps.powi(k)).sum()
}

pub fn action(cfg: &RunConfig, w: &mut impl Write) -> CmdResult {
    let h = cfg.hamiltonian()?;
    let (qa, qb) = (cfg.qa, cfg.qb);
    let series = action_series(&h, qa, qb)?;
    let mut opts = FitOptions::default();
    opts.bvp.tol = cfg.tol;
    let fit = fit_series_numeric_with(&h, qa, qb, &cfg.eps, &opts)?;
    let mut formula: Vec<(i32, f64)> = vec![(-1, series.c_minus1), (0, series.c0), (1, series.c1), (2, series.c2)];
    formula.extend(series.c3.map(|c| (3, c)));
    formula.extend(series.c5.map(|c| (5, c)));

    let hash = config_hash(cfg);
    let mut csv = Csv::new(&["eps", "S_numeric", "S_series", "abs_err", "rel_err"]);
    for (&e, &s) in fit.eps.iter().zip(&fit.s_numeric) {
        let ser = series_value(&formula, e);
        let abs = (s - ser).abs();
        csv.row(vec![fmt_f64(e), fmt_f64(s), fmt_f64(ser), fmt_f64(abs), fmt_f64(abs / s.abs())]);
    }
    write_atomic(&path(cfg, ACTION_CSV), csv.render(&hash).as_bytes()).map_err(io)?;

    let key = |k: i32| if k < 0 { "c_minus1".to_string() } else { format!("c{k}") };
    let mut fitted = BTreeMap::new();
    let mut floors = BTreeMap::new();
    let mut at_floor = BTreeMap::new();
    for (i, &k) in fit.powers.iter().enumerate() {
        fitted.insert(key(k), fit.coeffs[i]);
        floors.insert(key(k), fit.noise_floor[i]);
        at_floor.insert(key(k), fit.at_noise_floor(k));
    }
    let mut deviations = BTreeMap::new();
    for &(k, c) in &formula {
        if let Some(f) = fit.coeff(k) {
            deviations.insert(key(k), json!({ "abs": (f - c).abs(), "rel": if c == 0.0 { Value::Null } else { json!((f - c).abs() / c.abs()) } }));
        }
    }
    let candidates = if h.is_magnetic() { None } else { Some(c5_candidates(&h, qa, qb)?) };
    let summary = json!({
        "config_hash": hash,
        "hamiltonian": { "mass": h.mass, "potential": h.v.to_string(), "u0": cfg.u0 },
        "q_a": qa,
        "q_b": qb,
        "formula": formula.iter().map(|&(k, c)| (key(k), c)).collect::<BTreeMap<_, _>>(),
        "provenance": series.provenance,
        "fit": { "coefficients": fitted, "noise_floor": floors, "at_noise_floor": at_floor, "residual_norm": fit.residual_norm, "condition": fit.condition },
        "deviations": deviations,
        "c3_formula": series.c3,
        "c3_fit": fit.coeff(3),
        "c5_designated": series.c5,
        "c5_candidates": candidates.as_ref().map(|c| C5Route::ALL.iter().map(|&r| (r.label(), c.get(r))).collect::<BTreeMap<_, _>>()),
    });
    write_json(&path(cfg, ACTION_JSON), &summary).map_err(io)?;
    match (series.c3, fit.coeff(3)) {
        (Some(c), Some(f)) => writeln!(w, "c3 formula {} fit {} (rel dev {})", fmt_f64(c), fmt_f64(f), fmt_f64((f - c).abs() / c.abs().max(f64::MIN_POSITIVE))),
        _ => writeln!(w, "c2 formula {} fit {}", fmt_f64(series.c2), fmt_f64(fit.coeff(2).unwrap_or(f64::NAN))),
    }
    .map_err(io)?;
    writeln!(w, "wrote {} and {}", path(cfg, ACTION_CSV).display(), path(cfg, ACTION_JSON).display()).map_err(io)?;
    Ok(())
}

pub fn series(cfg: &RunConfig, w: &mut impl Write) -> CmdResult {
    let h = cfg.hamiltonian()?;
    let prof = secular_profiles(&h, cfg.qa, cfg.qb)?;
    let hash = config_hash(cfg);
    let mut csv = Csv::new(&["tau", "pi0", "pi1", "pi2", "pi3", "chi2", "chi4"]);
    for row in prof.sampled(64) {
        csv.row(row.iter().map(|&x| fmt_f64(x)).collect());
    }
    write_atomic(&path(cfg, SERIES_CSV), csv.render(&hash).as_bytes()).map_err(io)?;
    let s = action_series(&h, cfg.qa, cfg.qb)?;
    let candidates = if h.is_magnetic() { None } else { Some(c5_candidates(&h, cfg.qa, cfg.qb)?) };
    let means: BTreeMap<String, f64> = (0..=3).map(|n| (format!("pi{n}"), prof.pi(n).mean())).collect();
    let v = json!({
        "config_hash": hash,
        "series": s,
        "c5_candidates": candidates,
        "profile_means": means,
        "vanishing": prof.vanishing(),
    });
    write_json(&path(cfg, SERIES_JSON), &v).map_err(io)?;
    writeln!(w, "c_-1 {} c1 {} c3 {:?}; vanishing {:?}", fmt_f64(s.c_minus1), fmt_f64(s.c1), s.c3, prof.vanishing()).map_err(io)?;
    writeln!(w, "wrote {} and {}", path(cfg, SERIES_CSV).display(), path(cfg, SERIES_JSON).display()).map_err(io)?;
    Ok(())
}

pub fn slice(cfg: &RunConfig, w: &mut impl Write) -> CmdResult {
    let h = cfg.hamiltonian()?;
    let g = cfg.grid()?;
    let schemes = cfg.schemes()?;
    let hash = config_hash(cfg);
    let conv = convergence_study(&h, &g, cfg.time, &schemes, &cfg.slices)?;
    let scaling = short_time_phase_scaling(&h, cfg.qa, cfg.qb, &cfg.dt, &schemes, cfg.hbar)?;

    let mut c = Csv::new(&["scheme", "N", "distance"]);
    for s in &conv.schemes {
        for (&n, &d) in s.n.iter().zip(&s.distance) {
            c.row(vec![s.scheme.clone(), n.to_string(), fmt_f64(d)]);
        }
    }
    write_atomic(&path(cfg, SLICE_CONVERGENCE_CSV), c.render(&hash).as_bytes()).map_err(io)?;
    let mut p = Csv::new(&["scheme_a", "scheme_b", "N", "distance"]);
    for pair in &conv.pairwise {
        for (&n, &d) in pair.n.iter().zip(&pair.distance) {
            p.row(vec![pair.a.clone(), pair.b.clone(), n.to_string(), fmt_f64(d)]);
        }
    }
    write_atomic(&path(cfg, SLICE_PAIRWISE_CSV), p.render(&hash).as_bytes()).map_err(io)?;
    let mut sc = Csv::new(&["scheme", "dt", "phase_error"]);
    for s in &scaling.schemes {
        for (&dt, &e) in s.dt.iter().zip(&s.phase_error) {
            sc.row(vec![s.scheme.clone(), fmt_f64(dt), fmt_f64(e)]);
        }
    }
    write_atomic(&path(cfg, SLICE_SCALING_CSV), sc.render(&hash).as_bytes()).map_err(io)?;

    let slope = |name: &str| scaling.scheme(name).and_then(|s| s.slope.as_ref()).map(|f| f.slope);
    let gap = slope("bj").zip(slope("midpoint")).map(|(a, b)| a - b);
    let monotone: BTreeMap<&str, bool> = conv.schemes.iter().map(|s| (s.scheme.as_str(), s.distance.windows(2).all(|w| w[1] < w[0]))).collect();
    let v = json!({
        "config_hash": hash,
        "convergence": { "duration": conv.duration, "rates": conv.schemes.iter().map(|s| (s.scheme.clone(), s.rate.clone())).collect::<BTreeMap<_, _>>(), "monotone": monotone },
        "scaling": {
            "q_a": scaling.q_a,
            "q_b": scaling.q_b,
            "slopes": scaling.schemes.iter().map(|s| (s.scheme.clone(), s.slope.clone())).collect::<BTreeMap<_, _>>(),
            "leading_coefficients": scaling.schemes.iter().map(|s| (s.scheme.clone(), s.leading_coefficient)).collect::<BTreeMap<_, _>>(),
            "slope_gap_bj_minus_midpoint": gap,
        },
    });
    write_json(&path(cfg, SLICE_JSON), &v).map_err(io)?;
    for s in &scaling.schemes {
        writeln!(w, "{}: phase-error slope {}", s.scheme, s.slope.as_ref().map_or("n/a".into(), |f| fmt_f64(f.slope))).map_err(io)?;
    }
    if let Some(g) = gap {
        writeln!(w, "slope gap bj - midpoint {}", fmt_f64(g)).map_err(io)?;
    }
    writeln!(w, "wrote {}, {}, {}, {}", SLICE_CONVERGENCE_CSV, SLICE_PAIRWISE_CSV, SLICE_SCALING_CSV, SLICE_JSON).map_err(io)?;
    Ok(())
}

pub fn chernoff(cfg: &RunConfig, w: &mut impl Write) -> CmdResult {
    let h = cfg.hamiltonian()?;
    let g = cfg.grid()?;
    let spectrum = Spectrum::new(&h, &g)?;
    let psi = cfg.packet()?;
    let hash = config_hash(cfg);
    let mut csv = Csv::new(&["measure", "n", "error", "max_norm_drift"]);
    let mut summary = BTreeMap::new();
    for m in cfg.measures()? {
        let mut errs = Vec::new();
        for &n in &cfg.steps {
            let r = chernoff_iterate_with(&spectrum, &h, cfg.time, n, &m, &psi)?;
            csv.row(vec![m.to_string(), n.to_string(), fmt_f64(r.error), fmt_f64(r.max_norm_drift)]);
            errs.push(r.error);
        }
        let monotone = errs.windows(2).all(|w| w[1] < w[0]);
        writeln!(w, "{m}: errors {} (monotone: {monotone})", errs.iter().map(|&e| fmt_f64(e)).collect::<Vec<_>>().join(" ")).map_err(io)?;
        summary.insert(m.to_string(), json!({ "steps": cfg.steps, "error": errs, "monotone": monotone }));
    }
    write_atomic(&path(cfg, CHERNOFF_CSV), csv.render(&hash).as_bytes()).map_err(io)?;
    write_json(&path(cfg, CHERNOFF_JSON), &json!({ "config_hash": hash, "time": cfg.time, "measures": summary })).map_err(io)?;
    Ok(())
}

fn report_config(cfg: &RunConfig) -> ReportConfig {
    let omega = match Potential::parse(&cfg.potential, cfg.mass) {
        Ok(Potential::Harmonic { omega, .. }) => omega,
        _ => 1.0,
    };
    ReportConfig { mass: cfg.mass, omega, q_a: cfg.qa, q_b: cfg.qb, ..ReportConfig::default() }
}

fn read_json(p: &std::path::Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(p).map_err(io)?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
}

/// The discrepancy report, followed by a digest of the run artifacts it was given.
pub fn report(cfg: &RunConfig, run_all: bool, w: &mut impl Write) -> CmdResult {
    if run_all {
        let mut sink = std::io::sink();
        action(cfg, &mut sink)?;
        slice(cfg, &mut sink)?;
        chernoff(cfg, &mut sink)?;
    }
    let missing: Vec<PathBuf> = REPORT_INPUTS.iter().map(|n| path(cfg, n)).filter(|p| !p.is_file()).collect();
    if !missing.is_empty() {
        return Err(CliError::MissingArtifacts(missing));
    }
    let action_v = read_json(&path(cfg, ACTION_JSON))?;
    let slice_v = read_json(&path(cfg, SLICE_JSON))?;
    let chernoff_v = read_json(&path(cfg, CHERNOFF_JSON))?;
    let rep = build_report(&report_config(cfg))?;

    let mut md = rep.to_markdown();
    md.push_str("\n## Run artifacts\n\n");
    md.push_str(&format!("- {ACTION_JSON}: c3 formula {} vs fit {}; c5 designated {}\n", action_v["c3_formula"], action_v["c3_fit"], action_v["c5_designated"]));
    md.push_str(&format!(
        "- {SLICE_JSON}: phase-error slope gap bj - midpoint {}; convergence monotone {}\n",
        slice_v["scaling"]["slope_gap_bj_minus_midpoint"], slice_v["convergence"]["monotone"]
    ));
    if let Some(ms) = chernoff_v["measures"].as_object() {
        for (m, v) in ms {
            md.push_str(&format!("- {CHERNOFF_JSON}: {m} errors {} monotone {}\n", v["error"], v["monotone"]));
        }
    }
    write_atomic(&path(cfg, REPORT_MD), md.as_bytes()).map_err(io)?;
    let v = json!({ "report": rep, "artifacts": { "action": action_v, "slice": slice_v, "chernoff": chernoff_v } });
    write_json(&path(cfg, REPORT_JSON), &v).map_err(io)?;
    let disagreements: Vec<&str> = rep.entries.iter().filter(|e| e.verdict == ordo_core::report::Verdict::Disagrees).map(|e| e.id.as_str()).collect();
    writeln!(w, "{} entries; printed forms disagreeing: {}", rep.entries.len(), disagreements.join(", ")).map_err(io)?;
    writeln!(w, "c5 route matching the oscillator oracle: {}", rep.matching_c5_routes().join(", ")).map_err(io)?;
    writeln!(w, "wrote {} and {}", path(cfg, REPORT_MD).display(), path(cfg, REPORT_JSON).display()).map_err(io)?;
    Ok(())
}

