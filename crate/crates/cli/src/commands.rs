use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use hamstat::analysis::{
    holder_exponent, integrability_probe_with, integrability_threshold, sobolev_membership_with, weak_residual,
    ProbeOptions, QuadratureGrid, TestFunction,
};
use hamstat::geometry::{phase_and_eigen, theta_at, PotentialField};
use hamstat::rotations::{rotate_down_with, rotate_up_with, GraphSample, RotationOptions};
use hamstat::sampling;
use hamstat::singular::{
    axis_image_sample, cauchy_jet_solve, default_radius, model_potential, singular_graph_sample, validated_radius,
    FamilyIndex,
};
use hamstat::Strategy;
use serde_json::{json, Map, Value};

use crate::spec::PotentialSpec;
use crate::{Cli, CliError, Command, DirectionArg};

pub const SCHEMA: u32 = 1;

struct Output {
    fields: Value,
    csv: Option<String>,
}

pub fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Phase(_) => "phase",
        Command::Rotate(_) => "rotate",
        Command::Construct(_) => "construct",
        Command::Holder(_) => "holder",
        Command::Integrability(_) => "integrability",
        Command::Sobolev(_) => "sobolev",
        Command::WeakResidual(_) => "weak-residual",
        Command::Jet(_) => "jet",
    }
}

/// Executes one command, writes its report and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let strategy = if cli.global.sequential {
        Strategy::Sequential
    } else {
        Strategy::default()
    };
    let mut config = Map::new();
    config.insert("seed".into(), json!(cli.global.seed));
    config.insert("sequential".into(), json!(cli.global.sequential));
    let outcome = execute(&cli.command, cli.global.seed, strategy, &mut config);

    let mut report = Map::new();
    report.insert("schema".into(), json!(SCHEMA));
    report.insert("command".into(), json!(name(&cli.command)));
    report.insert("config".into(), Value::Object(config));
    let (code, csv) = match outcome {
        Ok(out) => {
            if let Value::Object(fields) = out.fields {
                report.extend(fields);
            }
            report.insert("error".into(), Value::Null);
            (0, out.csv)
        }
        Err(e) => {
            report.insert("error".into(), json!({ "kind": e.kind(), "message": e.to_string() }));
            eprintln!("error: {e}");
            (e.exit_code(), None)
        }
    };
    let text = serde_json::to_string_pretty(&Value::Object(report)).expect("report serializes") + "\n";
    let written = match &cli.global.output {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    let written = written.and_then(|_| match (&cli.global.csv, csv) {
        (Some(p), Some(body)) => write(p, &body),
        (Some(_), None) if code == 0 => Err(CliError::usage(format!(
            "command {} has no tabular output for --csv",
            name(&cli.command)
        ))),
        _ => Ok(()),
    });
    match written {
        Ok(()) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn write(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn execute(cmd: &Command, seed: u64, strategy: Strategy, config: &mut Map<String, Value>) -> Result<Output, CliError> {
    let mut set = |k: &str, v: Value| {
        config.insert(k.into(), v);
    };
    match cmd {
        Command::Phase(a) => {
            set("potential", json!(a.potential));
            let spec = parse_spec(&a.potential)?;
            let dim = spec.dim(a.dim)?;
            let x = parse_point(a.point.as_deref(), dim)?;
            set("potential", json!(spec));
            set("dim", json!(dim));
            set("point", json!(x));
            set("delta", json!(a.delta));
            let u = spec.build(dim)?;
            check_inside(u.as_ref(), &x)?;
            let rep = phase_and_eigen(&u.hessian(&x), a.delta)?;
            Ok(Output {
                fields: serde_json::to_value(rep).expect("serializes"),
                csv: None,
            })
        }
        Command::Rotate(a) => {
            set("potential", json!(a.potential));
            let spec = parse_spec(&a.potential)?;
            let dim = spec.dim(a.dim)?;
            set("potential", json!(spec));
            set("dim", json!(dim));
            set("angle", json!(a.angle));
            set("direction", json!(a.direction));
            set("points", json!(a.points));
            set("grid", json!(a.grid));
            if a.grid < 2 {
                return Err(CliError::usage("--grid must be at least 2"));
            }
            let u = spec.build(dim)?;
            let opts = RotationOptions {
                grid_per_axis: a.grid,
                seed,
                strategy,
                ..RotationOptions::default()
            };
            let frame = match a.direction {
                DirectionArg::Up => rotate_up_with(u.clone(), a.angle, &opts)?,
                DirectionArg::Down => rotate_down_with(u.clone(), a.angle, &opts)?,
            };
            let pts = sampling::points_in_ball(seed, dim, u.radius(), a.points);
            let sample = frame.sample(&pts, strategy);
            let shift = dim as f64 * frame.params().signed_angle();
            let mut shift_err = 0.0f64;
            for (p, x) in sample.points.iter().zip(&pts) {
                shift_err = shift_err.max((p.theta_bar - theta_at(u.as_ref(), x) - shift).abs());
            }
            Ok(Output {
                fields: json!({
                    "params": frame.params(),
                    "lipschitz_lower": frame.lipschitz_lower(),
                    "phase_shift": shift,
                    "max_phase_shift_error": shift_err,
                    "theta_bar_range": theta_range(&sample),
                    "rotated_radius": frame.as_potential().radius(),
                }),
                csv: Some(sample.to_csv()),
            })
        }
        Command::Construct(a) => {
            let idx = FamilyIndex::new(a.n, a.k)?;
            let rho = a.rho.unwrap_or_else(|| default_radius(idx));
            set("n", json!(a.n));
            set("k", json!(a.k));
            set("rho", json!(rho));
            set("points", json!(a.points));
            let w = model_potential(idx, rho)?.into_field();
            let mut pts = vec![vec![0.0; a.n]];
            pts.extend(sampling::points_in_ball(seed, a.n, rho, a.points));
            let sample = singular_graph_sample(idx, &w, &pts, strategy)?;
            let origin = sample.points[0].theta_bar;
            let hyper = (a.n as f64 - 1.0) * FRAC_PI_2;
            let above = sample.points[1..].iter().filter(|p| p.theta_bar > hyper).count();
            let min_off = sample.points[1..]
                .iter()
                .map(|p| p.theta_bar)
                .fold(f64::INFINITY, f64::min);
            // empirical constant in |x̄|² ≥ C |x|^{4k+2}
            let power = 4 * a.k as i32 + 2;
            let ratio = sample.points[1..]
                .iter()
                .zip(&pts[1..])
                .map(|(p, x)| norm_sq(&p.x_bar) / norm_sq(x).sqrt().powi(power))
                .fold(f64::INFINITY, f64::min);
            Ok(Output {
                fields: json!({
                    "min_sphere_ratio": if ratio.is_finite() { json!(ratio) } else { Value::Null },
                    "validated_radius": validated_radius(idx),
                    "holder_exponent": idx.holder_exponent(),
                    "theta_bar_origin": origin,
                    "theta_bar_origin_exact": idx.theta_bar_origin(),
                    "theta_bar_min": if min_off.is_finite() { json!(min_off) } else { Value::Null },
                    "hypercritical_threshold": hyper,
                    "hypercritical_points": above,
                }),
                csv: Some(sample.to_csv()),
            })
        }
        Command::Holder(a) => {
            set("potential", json!(a.potential));
            let spec = parse_spec(&a.potential)?;
            set("scales", json!(a.scales));
            let scales = parse_scales(&a.scales)?;
            set("potential", json!(spec));
            set("per_scale", json!(a.per_scale));
            let idx = spec.family().filter(|_| matches!(spec, PotentialSpec::Model { .. })).ok_or_else(|| {
                CliError::usage("holder needs a model potential, e.g. --potential model:n=3,k=1")
            })?;
            let w = spec.model_field()?.expect("model spec");
            let sample = axis_image_sample(idx, &w, scales, a.per_scale)?;
            let base = vec![0.0; idx.n];
            let est = holder_exponent(&sample, &base, scales)?;
            let mut fields = serde_json::to_value(&est).expect("serializes");
            fields["expected"] = json!(idx.holder_exponent());
            let mut csv = String::from("m,distance,increment\n");
            for m in &est.maxima {
                csv.push_str(&format!("{},{:e},{:e}\n", m.m, m.distance, m.increment));
            }
            Ok(Output { fields, csv: Some(csv) })
        }
        Command::Integrability(a) => {
            set("n", json!(a.n));
            set("k", json!(a.k));
            set("q", json!(a.q));
            let opts = ProbeOptions {
                strategy,
                ..ProbeOptions::default()
            };
            let res = integrability_probe_with(a.n, a.k, a.q, &opts)?;
            let mut fields = serde_json::to_value(&res).expect("serializes");
            fields["threshold"] = json!(integrability_threshold(a.n, a.k));
            Ok(Output {
                fields,
                csv: Some(res.to_csv()),
            })
        }
        Command::Sobolev(a) => {
            set("n", json!(a.n));
            set("k", json!(a.k));
            set("p", json!(a.p));
            let idx = FamilyIndex::new(a.n, a.k)?;
            let opts = ProbeOptions {
                strategy,
                ..ProbeOptions::default()
            };
            let rep = sobolev_membership_with(idx, a.p, &opts)?;
            let csv = rep.probe.to_csv();
            Ok(Output {
                fields: serde_json::to_value(&rep).expect("serializes"),
                csv: Some(csv),
            })
        }
        Command::WeakResidual(a) => {
            set("potential", json!(a.potential));
            let spec = parse_spec(&a.potential)?;
            let dim = spec.dim(a.dim)?;
            let x0 = parse_point(a.point.as_deref(), dim)?;
            set("potential", json!(spec));
            set("dim", json!(dim));
            set("point", json!(x0));
            set("rho", json!(a.rho));
            set("grid", json!(a.grid));
            set("power", json!(a.power));
            let u: Arc<dyn PotentialField> = spec.build(dim)?;
            check_inside(u.as_ref(), &x0)?;
            let eta = TestFunction::on_graph(u.as_ref(), &x0, a.rho)?.with_power(a.power)?;
            let grid = QuadratureGrid {
                per_axis: a.grid,
                strategy,
            };
            let r = weak_residual(u.as_ref(), &eta, &grid)?;
            Ok(Output {
                fields: json!({ "residual": r, "test_function": eta }),
                csv: None,
            })
        }
        Command::Jet(a) => {
            set("n", json!(a.n));
            set("k", json!(a.k));
            set("order", json!(a.order));
            set("rho", json!(a.rho));
            let idx = FamilyIndex::new(a.n, a.k)?;
            if !(a.rho > 0.0 && a.rho.is_finite()) {
                return Err(CliError::usage(format!("--rho {} must be positive", a.rho)));
            }
            let jet = cauchy_jet_solve(idx, a.order)?;
            let residual = jet.residual_series()?;
            let mut fields = serde_json::to_value(&jet).expect("serializes");
            fields["exact_residual_zero"] = json!(residual.is_zero_series());
            fields["residual_sup"] = json!(jet.residual_sup(a.rho, 16)?);
            Ok(Output {
                fields,
                csv: Some(jet.series.to_csv()),
            })
        }
    }
}

fn parse_spec(s: &str) -> Result<PotentialSpec, CliError> {
    s.parse::<PotentialSpec>()?.resolve()
}

fn parse_point(s: Option<&str>, dim: usize) -> Result<Vec<f64>, CliError> {
    let Some(s) = s else {
        return Ok(vec![0.0; dim]);
    };
    let x: Vec<f64> = s
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::usage(format!("cannot parse point '{s}'")))?;
    if x.len() != dim {
        return Err(CliError::usage(format!("point has {} coordinates, expected {dim}", x.len())));
    }
    Ok(x)
}

fn parse_scales(s: &str) -> Result<(u32, u32), CliError> {
    let bad = || CliError::usage(format!("scales '{s}' must look like a:b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn check_inside(u: &dyn PotentialField, x: &[f64]) -> Result<(), CliError> {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r > u.radius() {
        return Err(CliError::usage(format!("point lies outside the domain of radius {}", u.radius())));
    }
    Ok(())
}

fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn theta_range(s: &GraphSample) -> Value {
    if s.points.is_empty() {
        return Value::Null;
    }
    let lo = s.points.iter().map(|p| p.theta_bar).fold(f64::INFINITY, f64::min);
    let hi = s.points.iter().map(|p| p.theta_bar).fold(f64::NEG_INFINITY, f64::max);
    json!([lo, hi])
}
