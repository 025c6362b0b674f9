//! Subcommand execution: run a scenario, produce a document, write it out.

use std::io::Write;
use std::path::{Path, PathBuf};

use levisqueeze::design::{
    self, derive_rates, optimal_detuning_approx, optimal_detuning_exact, DetuningObjective,
};
use levisqueeze::dynamics::{evolve, DriftDiffusion};
use levisqueeze::metrics::{self, squeezing_report};
use levisqueeze::model::validate_params;
use levisqueeze::normalform::{instability_ratio, NormalForm};
use levisqueeze::reduced;
use levisqueeze::{Error as CoreError, GaussianState, InitialConditions};

use crate::scenario::{MapSpec, Scenario, TimeSpec, WignerSpec};

pub const ARTIFACT_VERSION: &str = concat!("levisqueeze/", env!("CARGO_PKG_VERSION"));

/// Failure modes, ordered by exit code: 2 config, 3 regime, 4 numeric.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Core(CoreError),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) | Failure::Io(_) => 2,
            Failure::Core(e) => match e {
                CoreError::InvalidParams(_) => 2,
                CoreError::Regime { .. } => 3,
                CoreError::Numeric { .. } | CoreError::NonPhysical(_) => 4,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Core(e)
    }
}

pub type CmdResult<T> = Result<T, Failure>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    #[value(name = "json-like")]
    JsonLike,
}

/// A tabular result: metadata echo plus rows; `None` cells are emitted as
/// `nan` in CSV and `null` in the JSON-like form.
pub struct Document {
    pub command: &'static str,
    pub scenario: Scenario,
    pub notes: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Option<f64>>>,
    /// Scalar report payload (used instead of rows by `normalform`/`optimize`).
    pub scalars: Option<serde_json::Value>,
}

impl Document {
    fn table(command: &'static str, scenario: &Scenario, columns: Vec<&'static str>) -> Self {
        Document {
            command,
            scenario: scenario.clone(),
            notes: Vec::new(),
            columns,
            rows: Vec::new(),
            scalars: None,
        }
    }

    pub fn write(&self, out: Option<&Path>, format: Format) -> CmdResult<()> {
        let text = match format {
            Format::Csv => self.to_csv(),
            Format::JsonLike => self.to_json(),
        };
        match out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .map_err(|e| Failure::Io(format!("cannot write to stdout: {e}")))
            }
        }
    }

    fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# artifact: {ARTIFACT_VERSION}\n"));
        s.push_str(&format!("# command: {}\n", self.command));
        s.push_str(&format!(
            "# scenario: {}\n",
            serde_json::to_string(&self.scenario).expect("scenario serializes")
        ));
        for note in &self.notes {
            s.push_str(&format!("# note: {note}\n"));
        }
        if let Some(scalars) = &self.scalars {
            s.push_str("key,value\n");
            if let serde_json::Value::Object(map) = scalars {
                for (k, v) in map {
                    s.push_str(&format!("{k},{v}\n"));
                }
            }
            return s;
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Some(v) => format!("{v}"),
                    None => "nan".to_string(),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    fn to_json(&self) -> String {
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| match c {
                        Some(v) if v.is_finite() => serde_json::json!(v),
                        _ => serde_json::Value::Null,
                    })
                    .collect()
            })
            .collect();
        let mut doc = serde_json::json!({
            "artifact": ARTIFACT_VERSION,
            "command": self.command,
            "scenario": self.scenario,
            "notes": self.notes,
        });
        if let Some(scalars) = &self.scalars {
            doc["report"] = scalars.clone();
        } else {
            doc["columns"] = serde_json::json!(self.columns);
            doc["rows"] = serde_json::json!(rows);
        }
        let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
        text.push('\n');
        text
    }
}

fn require<T: Clone>(field: &Option<T>, name: &str) -> CmdResult<T> {
    field
        .clone()
        .ok_or_else(|| Failure::Config(format!("scenario is missing the `{name}` section")))
}

fn time_grid(spec: &TimeSpec) -> CmdResult<Vec<f64>> {
    spec.grid().map_err(Failure::Config)
}

/// `simulate`: trajectory of squeezing diagnostics.
pub fn simulate(sc: &Scenario, reduced_model: bool, thermal: bool) -> CmdResult<Document> {
    let params = require(&sc.params, "params")?;
    let initial = sc.initial.unwrap_or_else(InitialConditions::vacuum);
    let grid = time_grid(&require(&sc.time, "time")?)?;
    let mut doc = Document::table(
        "simulate",
        sc,
        vec!["t", "var_min", "theta_sq", "s_db", "n_b_mean"],
    );
    doc.notes.extend(validate_params(&params));
    if reduced_model {
        if thermal {
            return Err(Failure::Config(
                "the reduced model covers cavity loss and displacement noise only; \
                 drop --reduced or --thermal-bath"
                    .into(),
            ));
        }
        let nf = NormalForm::compute(&params)?;
        let rates = reduced::reduced_rates(&params, &nf)?;
        let m0 = reduced::initial_moments(&nf, &initial);
        for &t in &grid {
            let m = reduced::evolve_reduced(&rates, &m0, t)?;
            let (var_min, theta) = reduced::reduced_var_min(&nf, &m);
            let (n_b, _) = reduced::mechanical_moments(&nf, &m);
            doc.rows.push(vec![
                Some(t),
                Some(var_min),
                Some(theta),
                Some(-10.0 * (2.0 * var_min).log10()),
                Some(n_b),
            ]);
        }
        doc.notes.push("reduced unstable-mode model".into());
        return Ok(doc);
    }
    let dd = if thermal {
        let bath = require(&sc.thermal_bath, "thermal_bath")?;
        DriftDiffusion::with_thermal_bath(&params, &bath)
    } else {
        DriftDiffusion::from_params(&params)
    };
    let s0 = GaussianState::thermal_vacuum(&initial)?;
    let traj = evolve(&dd, &s0, &grid)?;
    for (t, s) in grid.iter().zip(&traj) {
        let r = squeezing_report(s)?;
        doc.rows.push(vec![
            Some(*t),
            Some(r.var_min),
            Some(r.theta_sq),
            Some(r.s_db),
            Some(r.n_b_mean),
        ]);
    }
    Ok(doc)
}

/// `normalform`: scalar report of the canonical transformation.
pub fn normalform(sc: &Scenario) -> CmdResult<Document> {
    let params = require(&sc.params, "params")?;
    let nf = NormalForm::compute(&params)?;
    let mut doc = Document::table("normalform", sc, vec![]);
    doc.notes.extend(validate_params(&params));
    doc.scalars = Some(serde_json::json!({
        "instability_ratio": instability_ratio(&params),
        "zeta": nf.zeta,
        "omega1": nf.omega1,
        "r": nf.r,
        "a_plus": nf.a_plus,
        "a_minus": nf.a_minus,
        "b_plus": nf.b_plus,
        "b_minus": nf.b_minus,
        "p_24": nf.p_24,
        "symplectic_defect": nf.symplectic_defect(),
    }));
    Ok(doc)
}

/// `wigner`: dense grid of the mechanical Wigner function at one time.
pub fn wigner(sc: &Scenario) -> CmdResult<Document> {
    let params = require(&sc.params, "params")?;
    let initial = sc.initial.unwrap_or_else(InitialConditions::vacuum);
    let spec: WignerSpec = require(&sc.wigner, "wigner")?;
    if !spec.t.is_finite() || spec.t < 0.0 {
        return Err(Failure::Config(format!("wigner.t must be >= 0, got {}", spec.t)));
    }
    let s0 = GaussianState::thermal_vacuum(&initial)?;
    let state = if spec.t == 0.0 {
        s0
    } else {
        let dd = DriftDiffusion::from_params(&params);
        evolve(&dd, &s0, &[spec.t])?.pop().expect("one sample")
    };
    let grid = metrics::wigner_grid(
        &state,
        (spec.x_min, spec.x_max),
        (spec.p_min, spec.p_max),
        spec.nx,
        spec.np,
    )?;
    let mut doc = Document::table("wigner", sc, vec!["x", "p", "w"]);
    let report = squeezing_report(&state)?;
    doc.notes.push(format!(
        "t = {}, var_min = {:.6e}, theta_sq = {:.6}",
        spec.t, report.var_min, report.theta_sq
    ));
    for (x, p, w) in grid {
        doc.rows.push(vec![Some(x), Some(p), Some(w)]);
    }
    Ok(doc)
}

/// `map`: stability diagram or squeezing-at-optimal-detuning map.
pub fn map(sc: &Scenario) -> CmdResult<Document> {
    let spec = require(&sc.map, "map")?;
    match spec {
        MapSpec::Stability { omega_over_delta, g_over_delta } => {
            let omegas = omega_over_delta.values().map_err(Failure::Config)?;
            let gs = g_over_delta.values().map_err(Failure::Config)?;
            let cells = design::stability_map(&omegas, &gs)?;
            let mut doc = Document::table(
                "map",
                sc,
                vec!["omega_over_delta", "g_over_delta", "unstable", "timescale"],
            );
            for c in cells {
                doc.rows.push(vec![
                    Some(c.omega_over_delta),
                    Some(c.g_over_delta),
                    Some(if c.unstable { 1.0 } else { 0.0 }),
                    c.timescale,
                ]);
            }
            Ok(doc)
        }
        MapSpec::Squeezing { g_over_omega, kappa_over_omega, noise_over_omega, thermal } => {
            let kappas = kappa_over_omega.values().map_err(Failure::Config)?;
            let noises = noise_over_omega.values().map_err(Failure::Config)?;
            let cells = design::squeezing_map(g_over_omega, &kappas, &noises, thermal)?;
            let mut doc = Document::table(
                "map",
                sc,
                vec![
                    "kappa_over_omega",
                    "noise_over_omega",
                    "delta_opt_over_omega",
                    "s_db",
                    "stable_everywhere",
                    "weak_far_detuning",
                ],
            );
            for c in cells {
                doc.rows.push(vec![
                    Some(c.kappa_over_omega),
                    Some(c.noise_over_omega),
                    c.delta_opt_over_omega,
                    c.s_db,
                    Some(if c.stable_everywhere { 1.0 } else { 0.0 }),
                    Some(if c.weak_far_detuning { 1.0 } else { 0.0 }),
                ]);
            }
            Ok(doc)
        }
    }
}

/// `sweep`: cavity-length feasibility table, one row per (L_c, n_bar_b).
pub fn sweep(sc: &Scenario) -> CmdResult<Document> {
    let setup = require(&sc.setup, "setup")?;
    let spec = require(&sc.sweep, "sweep")?;
    let l_c = spec.l_c.values().map_err(Failure::Config)?;
    if spec.n_bar_b.is_empty() {
        return Err(Failure::Config("sweep.n_bar_b must list at least one occupation".into()));
    }
    let rows = design::feasibility_sweep(&setup, &l_c, &spec.n_bar_b)?;
    let mut doc = Document::table(
        "sweep",
        sc,
        vec![
            "l_c",
            "n_bar_b",
            "omega",
            "g",
            "kappa",
            "gamma_disp",
            "delta_opt_approx",
            "delta_opt_exact",
            "instability_ratio",
            "stable",
            "s_analytic_db",
            "r_inv_s",
            "s_sim_db",
            "t_star_s",
        ],
    );
    for point in rows {
        for case in &point.cases {
            if let Some(err) = &case.error {
                doc.notes.push(format!(
                    "l_c = {:.6e}, n_bar_b = {}: {err}",
                    point.l_c, case.n_bar_b
                ));
            }
            doc.rows.push(vec![
                Some(point.l_c),
                Some(case.n_bar_b),
                Some(point.omega),
                Some(point.g),
                Some(point.kappa),
                Some(point.gamma_disp),
                Some(point.delta_opt_approx),
                Some(point.delta_opt_exact),
                Some(point.instability_ratio),
                Some(if point.stable { 1.0 } else { 0.0 }),
                Some(point.s_analytic_db),
                point.r_inv_s,
                case.s_sim_db,
                case.t_star_s,
            ]);
        }
    }
    Ok(doc)
}

/// `optimize`: optimal detuning report from explicit rates or a setup.
pub fn optimize(sc: &Scenario, thermal: bool) -> CmdResult<Document> {
    let spec = require(&sc.optimize, "optimize")?;
    let (omega, g, kappa, gamma_disp, label) = if let Some(setup) = &sc.setup {
        let r = derive_rates(setup)?;
        (r.omega, r.g, r.kappa, r.gamma_disp, "rates derived from setup (rad/s)")
    } else {
        let omega = spec.omega.unwrap_or(1.0);
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Failure::Config(format!("optimize.{name} is required without a setup")))
        };
        (
            omega,
            need(spec.g, "g")?,
            need(spec.kappa, "kappa")?,
            spec.gamma_disp.unwrap_or(0.0),
            "explicit rates (units of omega)",
        )
    };
    let objective = if thermal {
        let n_bar_gamma = spec
            .n_bar_gamma
            .ok_or_else(|| Failure::Config("optimize.n_bar_gamma is required with --thermal-bath".into()))?;
        DetuningObjective::ThermalBath { n_bar_gamma }
    } else {
        DetuningObjective::DisplacementNoise { gamma_disp }
    };
    let opt = optimal_detuning_exact(omega, g, kappa, objective)?;
    let approx_disp = optimal_detuning_approx(g, kappa, gamma_disp).ok();
    let mut doc = Document::table("optimize", sc, vec![]);
    doc.notes.push(label.into());
    if opt.at_bracket_edge {
        doc.notes.push("minimizer sits at a bracket edge: the objective is monotone over [omega, 1e6 omega]".into());
    }
    doc.scalars = Some(serde_json::json!({
        "omega": omega,
        "g": g,
        "kappa": kappa,
        "delta_opt": opt.delta_opt,
        "var_at_opt": opt.var_at_opt,
        "s_db_at_opt": -10.0 * (2.0 * opt.var_at_opt).log10(),
        "approx": if thermal { opt.approx } else { approx_disp },
        "at_bracket_edge": opt.at_bracket_edge,
    }));
    Ok(doc)
}

/// Named figure-reproduction scenarios bundled with the tool.
pub fn recipes() -> Vec<(&'static str, &'static str, Scenario)> {
    use crate::scenario::{Axis, SweepSpec};
    use levisqueeze::{PhysicalSetup, SystemParams};
    let fig1_params = SystemParams::closed(1.0, 0.01, 0.2).expect("valid");
    let mut out: Vec<(&str, &str, Scenario)> = Vec::new();

    // squeezed-state snapshot of the mechanical Wigner function
    out.push((
        "fig1a",
        "wigner",
        Scenario {
            params: Some(fig1_params),
            initial: Some(InitialConditions::vacuum()),
            wigner: Some(WignerSpec {
                t: 60.0,
                x_min: -20.0,
                x_max: 20.0,
                p_min: -20.0,
                p_max: 20.0,
                nx: 121,
                np: 121,
            }),
            ..Default::default()
        },
    ));
    // minimal-variance trajectories for three initial occupations
    for (name, nb) in [("fig1b_nb0", 0.0), ("fig1b_nb10", 10.0), ("fig1b_nb100", 100.0)] {
        out.push((
            name,
            "simulate",
            Scenario {
                params: Some(fig1_params),
                initial: Some(InitialConditions { n_bar_b: nb, cavity_vacuum: true }),
                time: Some(TimeSpec { t_max: 300.0, samples: 300 }),
                ..Default::default()
            },
        ));
    }
    // stability diagram over (omega/delta, g/delta); grids contain the
    // reference configuration (0.01, 0.2)
    let decades = |lo: f64, hi: f64, per: usize| -> Vec<f64> {
        let n = ((hi / lo).log10() * per as f64).round() as usize + 1;
        (0..n).map(|k| lo * 10f64.powf(k as f64 / per as f64)).collect()
    };
    out.push((
        "fig1c",
        "map",
        Scenario {
            map: Some(MapSpec::Stability {
                omega_over_delta: Axis::Values(decades(1e-3, 1.0, 10)),
                g_over_delta: Axis::Values(decades(1e-2, 1.0, 20)),
            }),
            ..Default::default()
        },
    ));
    // squeezing at optimal detuning vs dissipation rates
    for (name, g) in [("fig2_g1", 1.0), ("fig2_g10", 10.0), ("fig2_g100", 100.0)] {
        out.push((
            name,
            "map",
            Scenario {
                map: Some(MapSpec::Squeezing {
                    g_over_omega: g,
                    kappa_over_omega: Axis::Range { min: 1e-2, max: 1e2, n: 33, log: true },
                    noise_over_omega: Axis::Range { min: 1e-8, max: 1e-2, n: 33, log: true },
                    thermal: false,
                }),
                ..Default::default()
            },
        ));
    }
    // cavity-length feasibility: squeezing, rates and detuning (b, c panels)
    out.push((
        "fig3b",
        "sweep",
        Scenario {
            setup: Some(PhysicalSetup::fig3_silica()),
            sweep: Some(SweepSpec {
                l_c: Axis::Range { min: 1e-4, max: 1e-2, n: 25, log: true },
                n_bar_b: vec![0.0, 10.0, 100.0],
            }),
            ..Default::default()
        },
    ));
    // extension time vs initial occupation for two cavity lengths (d panel)
    out.push((
        "fig3d",
        "sweep",
        Scenario {
            setup: Some(PhysicalSetup::fig3_silica()),
            sweep: Some(SweepSpec {
                l_c: Axis::Values(vec![150e-6, 300e-6]),
                n_bar_b: vec![0.0, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0],
            }),
            ..Default::default()
        },
    ));
    // thermal-bath analogue of the squeezing map
    for (name, g) in [("figS1_g1", 1.0), ("figS1_g10", 10.0), ("figS1_g100", 100.0)] {
        out.push((
            name,
            "map",
            Scenario {
                map: Some(MapSpec::Squeezing {
                    g_over_omega: g,
                    kappa_over_omega: Axis::Range { min: 1e-2, max: 1e2, n: 33, log: true },
                    noise_over_omega: Axis::Range { min: 1e-8, max: 1e-2, n: 33, log: true },
                    thermal: true,
                }),
                ..Default::default()
            },
        ));
    }
    out
}

/// Writes the bundled recipes into `dir`; optionally runs each one, placing
/// results next to the scenario files.
pub fn emit_recipes(dir: &Path, run: bool) -> CmdResult<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))?;
    for (name, command, scenario) in recipes() {
        let path: PathBuf = dir.join(format!("{name}.json"));
        let mut text =
            serde_json::to_string_pretty(&scenario).expect("recipe scenario serializes");
        text.push('\n');
        std::fs::write(&path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
        println!("{name}: {command} --config {}", path.display());
        if run {
            let doc = match command {
                "simulate" => simulate(&scenario, false, false)?,
                "wigner" => wigner(&scenario)?,
                "map" => map(&scenario)?,
                "sweep" => sweep(&scenario)?,
                _ => unreachable!("recipe commands are fixed"),
            };
            let out = dir.join(format!("{name}.csv"));
            doc.write(Some(&out), Format::Csv)?;
            println!("{name}: wrote {}", out.display());
        }
    }
    Ok(())
}
