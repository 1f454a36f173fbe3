use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fcat_core::cat::{build_logical_basis, delta, separation_matrix, separation_series, CatParity};
use fcat_core::channel::{
    fidelity_curve, fidelity_direct, fidelity_series, kraus_set, SERIES_CHECK_TOL,
};
use fcat_core::deformation::{validate_on_space, DeformationSpec};
use fcat_core::fock::{FockSpace, C64};
use fcat_core::gates::{
    cps_truth_table, ideal_rotation, logical_action, logical_deviation, rotation_exact,
    rotation_split, unitarity_defect, CpsParams, LogicalAction, RotationParams,
};
use fcat_core::sweep::{xi_sweep, PointOutcome, SweepResult, XiStar};
use nalgebra::Matrix2;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::format::sig12;
use crate::CliError;

/// Deformation selector accepted by `--xi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XiChoice {
    Identity,
    /// The sweep's smallest-separation point with `Δ < 0.01`.
    Star,
    Value(f64),
}

impl FromStr for XiChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" => Ok(XiChoice::Identity),
            "star" => Ok(XiChoice::Star),
            _ => s
                .parse::<f64>()
                .map(XiChoice::Value)
                .map_err(|_| format!("expected a number, 'identity' or 'star', got {s:?}")),
        }
    }
}

fn space(cfg: &RunConfig) -> Result<FockSpace, CliError> {
    Ok(FockSpace::new(cfg.n_max)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_owned(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, contents).map_err(io)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Config(format!("serializing {}: {e}", path.display())))?;
    text.push('\n');
    write_file(path, &text)
}

fn sidecar(out: &Path, name: &str) -> PathBuf {
    match out.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => dir.join(name),
        _ => PathBuf::from(name),
    }
}

fn config_comment(command: &str, cfg: &RunConfig) -> String {
    format!(
        "# fcat {command} zeta_sq={} n_max={} xi_grid={}:{}:{} t_grid={}:{}:{}\n",
        sig12(cfg.zeta_sq),
        cfg.n_max,
        sig12(cfg.xi_grid.min),
        sig12(cfg.xi_grid.max),
        cfg.xi_grid.count,
        sig12(cfg.t_grid.min),
        sig12(cfg.t_grid.max),
        cfg.t_grid.count
    )
}

/// Resolves `--xi` to a deformation, rejecting any that fail on the space.
pub fn resolve_deformation(cfg: &RunConfig, xi: XiChoice) -> Result<DeformationSpec, CliError> {
    let spec = match xi {
        XiChoice::Identity => DeformationSpec::Identity,
        XiChoice::Value(v) => DeformationSpec::laguerre(v)?,
        XiChoice::Star => {
            let sweep = run_sweep(cfg)?;
            let star = sweep.xi_star().ok_or_else(|| {
                CliError::Invariant("sweep has no valid xi with delta < 0.01".into())
            })?;
            DeformationSpec::Laguerre { xi: star.xi }
        }
    };
    validate_on_space(&spec, space(cfg)?).into_result()?;
    Ok(spec)
}

fn run_sweep(cfg: &RunConfig) -> Result<SweepResult, CliError> {
    Ok(xi_sweep(cfg.zeta(), space(cfg)?, &cfg.xi_grid.points())?)
}

#[derive(Debug, Serialize)]
struct SweepMeta<'a> {
    xi_star: Option<f64>,
    delta_at_star: Option<f64>,
    d_at_star: Option<f64>,
    config: &'a RunConfig,
}

/// Summary handed back to `main` for the console.
#[derive(Debug, Clone, PartialEq)]
pub struct Written {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

/// `Δ(ξ)` and `d(ξ)` over the configured grid.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<Written, CliError> {
    let sweep = run_sweep(cfg)?;
    let out = cfg.output_path("sweep");
    let row = |label: String, outcome: &PointOutcome| match outcome {
        PointOutcome::Valid(d) => (label, true, Some(d.delta), Some(d.separation)),
        PointOutcome::Invalid { .. } => (label, false, None, None),
    };
    let mut rows = vec![row("identity".into(), &sweep.baseline.outcome)];
    for p in &sweep.points {
        rows.push(row(sig12(p.spec.xi().unwrap_or(0.0)), &p.outcome));
    }

    match cfg.format {
        Format::Csv => {
            let mut text = config_comment("sweep", cfg);
            text.push_str("xi,valid,delta,distance\n");
            for (label, valid, delta, dist) in &rows {
                let num = |v: &Option<f64>| v.map(sig12).unwrap_or_default();
                let _ = writeln!(
                    text,
                    "{label},{},{},{}",
                    u8::from(*valid),
                    num(delta),
                    num(dist)
                );
            }
            write_file(&out, &text)?;
        }
        Format::Json => {
            let rows: Vec<Value> = sweep
                .points
                .iter()
                .map(|p| {
                    let (delta, distance) = p.diagnostics().map_or((None, None), |d| (Some(d.delta), Some(d.separation)));
                    let failing_n = match p.outcome {
                        PointOutcome::Invalid { n, .. } => Some(n),
                        PointOutcome::Valid(_) => None,
                    };
                    json!({"xi": p.spec.xi(), "valid": failing_n.is_none(), "delta": delta, "distance": distance, "first_invalid_n": failing_n})
                })
                .collect();
            let baseline = sweep.baseline.diagnostics();
            write_json(
                &out,
                &json!({
                    "baseline": {"delta": baseline.map(|d| d.delta), "distance": baseline.map(|d| d.separation)},
                    "rows": rows,
                }),
            )?;
        }
    }

    let star: Option<XiStar> = sweep.xi_star();
    let meta_path = sidecar(&out, "sweep_meta.json");
    write_json(
        &meta_path,
        &SweepMeta {
            xi_star: star.map(|s| s.xi),
            delta_at_star: star.map(|s| s.delta),
            d_at_star: star.map(|s| s.distance),
            config: cfg,
        },
    )?;
    let valid = sweep
        .points
        .iter()
        .filter(|p| p.diagnostics().is_some())
        .count();
    let summary = match star {
        Some(s) => format!(
            "{valid}/{} xi valid; xi* = {} (delta {}, d {})",
            sweep.points.len(),
            sig12(s.xi),
            sig12(s.delta),
            sig12(s.distance)
        ),
        None => format!(
            "{valid}/{} xi valid; no xi* with delta < 0.01",
            sweep.points.len()
        ),
    };
    Ok(Written {
        files: vec![out, meta_path],
        summary,
    })
}

/// `F₊` and `F₋` over the configured `γt` grid.
pub fn cmd_fidelity(cfg: &RunConfig, xi: XiChoice) -> Result<Written, CliError> {
    let spec = resolve_deformation(cfg, xi)?;
    let curve = fidelity_curve(cfg.zeta(), &spec, space(cfg)?, &cfg.t_grid.points())?;
    let out = cfg.output_path("fidelity");
    match cfg.format {
        Format::Csv => {
            let mut text = config_comment("fidelity", cfg);
            let _ = writeln!(text, "# deformation={spec}");
            text.push_str("gamma_t,eta,f_plus,f_minus\n");
            for r in &curve.rows {
                let _ = writeln!(
                    text,
                    "{},{},{},{}",
                    sig12(r.gamma_t),
                    sig12(r.eta),
                    sig12(r.f_plus),
                    sig12(r.f_minus)
                );
            }
            write_file(&out, &text)?;
        }
        Format::Json => write_json(&out, &json!({"deformation": spec, "rows": curve.rows}))?,
    }
    let check_path = sidecar(&out, "fidelity_check.json");
    write_json(&check_path, &curve.check)?;
    Ok(Written {
        files: vec![out, check_path],
        summary: format!(
            "{} points for {spec}; series check max discrepancy {:e}",
            curve.rows.len(),
            curve.check.max_abs_discrepancy
        ),
    })
}

fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn matrix_json(m: &Matrix2<C64>) -> Value {
    json!([
        [complex_json(m[(0, 0)]), complex_json(m[(0, 1)])],
        [complex_json(m[(1, 0)]), complex_json(m[(1, 1)])]
    ])
}

fn action_json(a: &LogicalAction) -> Value {
    json!({
        "logical_matrix": matrix_json(&a.matrix),
        "leakage": a.leakage,
        "output_norms": a.output_norms,
    })
}

/// Logical action of the rotation (exact and split) and the CPS truth table.
pub fn cmd_gates(
    cfg: &RunConfig,
    xi: XiChoice,
    theta: f64,
    chi_t: f64,
) -> Result<Written, CliError> {
    let spec = resolve_deformation(cfg, xi)?;
    let s = space(cfg)?;
    let basis = build_logical_basis(cfg.zeta(), &spec, s)?;
    let params = RotationParams::from_theta(theta, cfg.zeta())?;
    let exact = rotation_exact(&params, &spec, s)?;
    let split = rotation_split(&params, &spec, s)?;
    let exact_action = logical_action(&exact, &basis)?;
    let split_action = logical_action(&split, &basis)?;
    let deviation = logical_deviation(&split, &exact, &basis)?;
    let cps = cps_truth_table(&basis, CpsParams { chi_t })?;

    let report = json!({
        "deformation": spec,
        "zeta_sq": cfg.zeta_sq,
        "n_max": cfg.n_max,
        "delta": delta(&basis),
        "rotation": params,
        "ideal": matrix_json(&ideal_rotation(theta)),
        "exact": {
            "unitarity_defect": unitarity_defect(&exact),
            "action": action_json(&exact_action),
        },
        "split": {
            "norm_deviation": split_action.output_norms.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max),
            "action": action_json(&split_action),
        },
        "split_vs_exact_deviation": deviation,
        "cps": {
            "chi_t": chi_t,
            "order": ["00", "01", "10", "11"],
            "phases": cps.phases.iter().copied().map(complex_json).collect::<Vec<_>>(),
            "residuals": cps.residuals,
        },
    });
    let out = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("gates.json"));
    write_json(&out, &report)?;
    Ok(Written {
        files: vec![out],
        summary: format!(
            "theta={theta}: exact leakage {:.4}, split-vs-exact {:.3e}",
            exact_action.leakage, deviation
        ),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub passed: bool,
    pub exit_code: i32,
    pub checks: Vec<CheckRecord>,
}

struct Selftest {
    checks: Vec<CheckRecord>,
    exit_code: i32,
}

impl Selftest {
    fn record(&mut self, name: impl Into<String>, result: Result<(f64, f64), CliError>) {
        let name = name.into();
        let rec = match result {
            Ok((value, tolerance)) => {
                let pass = value.abs() <= tolerance;
                if !pass {
                    self.exit_code = self.exit_code.max(crate::EXIT_NUMERICAL);
                }
                CheckRecord {
                    name,
                    pass,
                    value: Some(value),
                    tolerance: Some(tolerance),
                    error: None,
                }
            }
            Err(err) => {
                self.exit_code = self.exit_code.max(err.exit_code());
                CheckRecord {
                    name,
                    pass: false,
                    value: None,
                    tolerance: None,
                    error: Some(err.to_string()),
                }
            }
        };
        self.checks.push(rec);
    }
}

/// Etas always covered by the self-test.
pub const SELFTEST_ETAS: [f64; 5] = [0.99, 0.9, 0.5, 0.1, 1e-3];

/// Kraus completeness, dual-path fidelity, parity purity and the `ξ = 0`
/// reduction, evaluated for `cfg` plus any extra `etas`.
pub fn cmd_selftest(cfg: &RunConfig, extra_etas: &[f64]) -> SelftestReport {
    let mut t = Selftest {
        checks: Vec::new(),
        exit_code: crate::EXIT_OK,
    };
    let zeta = cfg.zeta();
    let etas: Vec<f64> = SELFTEST_ETAS.iter().chain(extra_etas).copied().collect();

    let s = match space(cfg) {
        Ok(s) => s,
        Err(e) => {
            t.record("space", Err(e));
            return t.finish();
        }
    };

    for &eta in &etas {
        t.record(
            format!("kraus_completeness eta={eta}"),
            kraus_set(eta, s)
                .map(|k| (k.completeness_defect(), 1e-10))
                .map_err(CliError::from),
        );
    }

    let identity = DeformationSpec::Identity;
    let basis = match build_logical_basis(zeta, &identity, s) {
        Ok(b) => b,
        Err(e) => {
            t.record("logical_basis identity", Err(e.into()));
            return t.finish();
        }
    };

    let parity_defect = CatParity::BOTH
        .iter()
        .map(|&w| {
            basis
                .ket(w)
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(n, _)| !w.contains(*n))
                .map(|(_, c)| c.norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    t.record("parity_purity", Ok((parity_defect, 0.0)));

    for &eta in &etas {
        for which in CatParity::BOTH {
            let gap = fidelity_direct(&basis, which, eta)
                .and_then(|direct| Ok(direct - fidelity_series(zeta, &identity, which, eta, s)?));
            t.record(
                format!("fidelity_dual_path {which:?} eta={eta}"),
                gap.map(|g| (g, SERIES_CHECK_TOL)).map_err(CliError::from),
            );
        }
    }

    let zero = DeformationSpec::Laguerre { xi: 0.0 };
    let reduction = build_logical_basis(zeta, &zero, s).and_then(|b0| {
        Ok(basis
            .ket0
            .distance(&b0.ket0)?
            .max(basis.ket1.distance(&b0.ket1)?)
            .max((delta(&basis) - delta(&b0)).abs()))
    });
    t.record(
        "reduction_basis xi=0",
        reduction.map(|r| (r, 1e-12)).map_err(CliError::from),
    );
    let d_gap = separation_matrix(zeta, &zero, s).and_then(|a| {
        Ok((a - separation_series(zeta, &zero, s)?)
            .abs()
            .max((a - 2.0 * zeta).abs()))
    });
    t.record(
        "reduction_separation xi=0",
        d_gap.map(|g| (g, 1e-10)).map_err(CliError::from),
    );

    t.finish()
}

impl Selftest {
    fn finish(self) -> SelftestReport {
        SelftestReport {
            passed: self.exit_code == crate::EXIT_OK,
            exit_code: self.exit_code,
            checks: self.checks,
        }
    }
}
