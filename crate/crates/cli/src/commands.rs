use crate::envelope::{Metadata, ResultEnvelope, Tolerances};
use crate::{Cli, CliError, Command};
use num_complex::Complex64;
use serde_json::json;
use std::f64::consts::PI;
use std::path::Path;
use wzterm_core::closedforms::{
    energy_quantum, wz_degree, wz_sphere_harmonic, wz_sphere_theta, wz_symmetric_space, wz_torus_hom,
    wz_torus_hom_s_form, LatticeVector,
};
use wzterm_core::flatfam::{curvature_residual, energy_of, family_at, pullback_mc, DiscreteTorusMap};
use wzterm_core::modulipath::{holonomy_exponent_integral, holonomy_integrand, path_holonomy, CartanPath};
use wzterm_core::oracle::{gamma_from_fraction, volume_fraction, S3Sampler, Surface, RNG_NAME};
use wzterm_core::spectral::{
    analyze, CurveKind, LiftConfig, LogMuData, QuadConfig, SpectralConfig, SpectralCurveP0, SpectralInput,
};
use wzterm_core::{build_group, killing_oracle, GroupData, GroupType, Rational};

type Out = Result<ResultEnvelope, CliError>;

pub(crate) fn dispatch(cli: &Cli) -> Out {
    let name = command_name(&cli.command);
    let meta = Metadata {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: None,
        rng: None,
        tolerances: Tolerances { quad_tol: cli.quad_tol, angle_tol: cli.angle_tol, branch_floor: cli.branch_floor },
        threads: cli.threads,
    };
    if !(cli.quad_tol > 0.0 && cli.angle_tol > 0.0 && cli.branch_floor > 0.0) {
        return Err(CliError::bad_input("tolerances must be positive"));
    }
    let mut env = ResultEnvelope::new(name, meta, cli.format);
    let mut argv = vec![name.to_string()];
    match &cli.command {
        Command::GroupInfo(a) => group_info(&mut env, &mut argv, a)?,
        Command::WzTorusHom(a) => torus_hom(&mut env, &mut argv, a, cli)?,
        Command::WzSymmetric(a) => {
            argv.extend(["--n".into(), a.n.to_string()]);
            env.input("n", a.n);
            env.angle("gamma", &wz_symmetric_space(a.n), cli.angle_tol);
        }
        Command::WzDegree(a) => {
            argv.extend(["--deg".into(), a.deg.to_string()]);
            env.input("deg", a.deg);
            env.angle("gamma", &wz_degree(a.deg), cli.angle_tol);
        }
        Command::WzSphere(a) => sphere(&mut env, &mut argv, a, cli)?,
        Command::ModuliHolonomy(a) => moduli(&mut env, &mut argv, a, cli)?,
        Command::Spectral(a) => {
            let (curve, d1, d2, echo) = match (&a.alpha, &a.input) {
                (Some(s), _) => {
                    let z = parse_complex(s)?;
                    argv.push(format!("--alpha={},{}", z.re, z.im));
                    let c = SpectralCurveP0::nonconformal(z)?;
                    let (d1, d2) = c.reference_log_mu();
                    (c, d1, d2, json!({"kind": "nonconformal", "alpha": [z.re, z.im]}))
                }
                (None, Some(p)) => {
                    argv.extend(["--input".into(), p.display().to_string()]);
                    let inp = SpectralInput::from_json_str(&read(p)?)?;
                    let (c, d1, d2) = inp.resolve()?;
                    (c, d1, d2, serde_json::to_value(inp).unwrap_or_default())
                }
                (None, None) => return Err(CliError::bad_input("spectral needs --alpha or --input")),
            };
            argv.extend(["--intervals".into(), a.intervals.to_string()]);
            env.input("curve", echo);
            env.input("intervals", a.intervals);
            spectral(&mut env, cli, &curve, &d1, &d2, a.intervals)?;
        }
        Command::Clifford(a) => {
            argv.extend(["--intervals".into(), a.intervals.to_string()]);
            env.input("curve", json!({"kind": "clifford"}));
            env.input("intervals", a.intervals);
            let c = SpectralCurveP0::clifford();
            let (d1, d2) = c.reference_log_mu();
            spectral(&mut env, cli, &c, &d1, &d2, a.intervals)?;
        }
        Command::FlatCheck(a) => flat_check(&mut env, &mut argv, a, cli)?,
        Command::EnergyNumeric(a) => energy_numeric(&mut env, &mut argv, a)?,
        Command::Volume(a) => volume(&mut env, &mut argv, a, cli)?,
    }
    argv.extend([
        format!("--quad-tol={:e}", cli.quad_tol),
        format!("--angle-tol={:e}", cli.angle_tol),
        format!("--branch-floor={:e}", cli.branch_floor),
    ]);
    env.input("argv", argv);
    Ok(env)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::GroupInfo(_) => "group-info",
        Command::WzTorusHom(_) => "wz-torus-hom",
        Command::WzSymmetric(_) => "wz-symmetric",
        Command::WzDegree(_) => "wz-degree",
        Command::WzSphere(_) => "wz-sphere",
        Command::ModuliHolonomy(_) => "moduli-holonomy",
        Command::Spectral(_) => "spectral",
        Command::Clifford(_) => "clifford",
        Command::FlatCheck(_) => "flat-check",
        Command::EnergyNumeric(_) => "energy-numeric",
        Command::Volume(_) => "volume",
    }
}

fn read(p: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(p).map_err(|e| CliError::bad_input(format!("cannot read {}: {e}", p.display())))
}

fn write_csv(cli: &Cli, env: &mut ResultEnvelope, csv: &str) -> Result<(), CliError> {
    if let Some(p) = &cli.dump_samples {
        std::fs::write(p, csv).map_err(|e| CliError::bad_input(format!("cannot write {}: {e}", p.display())))?;
        env.diag("samples_written", json!({"path": p.display().to_string(), "rows": csv.lines().count() - 1}));
    }
    Ok(())
}

fn group(s: &str) -> Result<GroupData, CliError> {
    let gt: GroupType = s.parse()?;
    Ok(build_group(gt)?)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| CliError::bad_input(format!("bad {what} entry `{x}` in `{s}`"))))
        .collect()
}

fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    match parse_list::<f64>(s, "complex")?.as_slice() {
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(CliError::bad_input(format!("expected `re,im`, got `{s}`"))),
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn rational(env: &mut ResultEnvelope, key: &str, r: Rational) {
    let v = *r.numer() as f64 / *r.denom() as f64;
    env.values.insert(key.into(), json!({"num": r.numer(), "den": r.denom(), "value": v, "tolerance": 0.0}));
}

fn group_info(env: &mut ResultEnvelope, argv: &mut Vec<String>, a: &crate::GroupArgs) -> Result<(), CliError> {
    let g = group(&a.group)?;
    argv.extend(["--group".into(), g.group.to_string()]);
    if a.oracle {
        argv.push("--oracle".into());
    }
    env.input("group", g.group.to_string());
    env.input("oracle", a.oracle);
    env.exact("rank", g.rank());
    env.exact("dual_coxeter", g.dual_coxeter);
    rational(env, "beta_norm_sq", g.beta_norm_sq);
    rational(env, "cs_constant_times_pi", g.cs_constant_times_pi);
    rational(env, "killing_beta_coroot", g.killing_beta_coroot());
    env.real("cs_constant", g.cs_constant(), f64::EPSILON * g.cs_constant().abs());
    env.exact("cartan", &g.cartan);
    env.exact("s_matrix", &g.s_matrix);
    env.exact("group_data", &g);
    if a.oracle {
        let o = killing_oracle(g.group)?;
        env.diag("oracle_agrees", o == g);
    }
    Ok(())
}

fn torus_hom(env: &mut ResultEnvelope, argv: &mut Vec<String>, a: &crate::TorusArgs, cli: &Cli) -> Result<(), CliError> {
    let g = group(&a.group)?;
    let m = parse_list::<i64>(&a.m, "lattice")?;
    let n = parse_list::<i64>(&a.n, "lattice")?;
    argv.extend(["--group".into(), g.group.to_string(), format!("--m={}", join(&m)), format!("--n={}", join(&n))]);
    env.input("group", g.group.to_string());
    env.input("m", &m);
    env.input("n", &n);
    let (m, n) = (LatticeVector(m), LatticeVector(n));
    let gamma = wz_torus_hom::<f64>(&g, &m, &n)?;
    let s_form = wz_torus_hom_s_form::<f64>(&g, &m, &n)?;
    env.angle("gamma", &gamma, cli.angle_tol);
    env.angle("gamma_s_form", &s_form, cli.angle_tol);
    env.diag("s_form_agrees", gamma.pi_multiple == s_form.pi_multiple);
    Ok(())
}

fn sphere(env: &mut ResultEnvelope, argv: &mut Vec<String>, a: &crate::SphereArgs, cli: &Cli) -> Result<(), CliError> {
    let g = group(&a.group)?;
    argv.extend(["--group".into(), g.group.to_string(), format!("--energy={}", a.energy)]);
    env.input("group", g.group.to_string());
    env.input("energy", a.energy);
    env.input("theta", a.theta);
    let h = wz_sphere_harmonic(&g, a.energy, cli.angle_tol)?;
    env.angle("gamma", &h.gamma, cli.angle_tol);
    env.real("integrality_residual", h.integrality_residual, cli.angle_tol);
    let q: f64 = energy_quantum(&g);
    env.real("energy_quantum", q, f64::EPSILON * q);
    if let Some(t) = a.theta {
        argv.push(format!("--theta={t}"));
        env.angle("gamma_theta", &wz_sphere_theta(&g, a.energy, t, cli.angle_tol), cli.angle_tol);
    }
    Ok(())
}

fn moduli(env: &mut ResultEnvelope, argv: &mut Vec<String>, a: &crate::ModuliArgs, cli: &Cli) -> Result<(), CliError> {
    let (path, lambdas) = match (&a.path, &a.group, &a.lambda1, &a.lambda2) {
        (Some(p), _, _, _) => {
            argv.extend(["--path".into(), p.display().to_string()]);
            env.input("path", p.display().to_string());
            (CartanPath::from_json_str(&read(p)?)?, None)
        }
        (None, Some(g), Some(l1), Some(l2)) => {
            let g = group(g)?;
            let (l1, l2) = (parse_list::<i64>(l1, "lattice")?, parse_list::<i64>(l2, "lattice")?);
            argv.extend([
                "--group".into(),
                g.group.to_string(),
                format!("--lambda1={}", join(&l1)),
                format!("--lambda2={}", join(&l2)),
                "--samples".into(),
                a.samples.to_string(),
            ]);
            env.input("group", g.group.to_string());
            env.input("lambda1", &l1);
            env.input("lambda2", &l2);
            env.input("samples", a.samples);
            (CartanPath::straight(g, &l1, &l2, a.samples)?, Some((l1, l2)))
        }
        _ => return Err(CliError::bad_input("moduli-holonomy needs --path or --group with --lambda1 and --lambda2")),
    };
    let integral = holonomy_exponent_integral(&path)?;
    let coarse = subsample(&path)?;
    let err = coarse.map(|c| holonomy_exponent_integral(&c)).transpose()?.map(|c| (integral - c).abs() / 3.0);
    let pc = *path.group.cs_constant_times_pi.numer() as f64 / *path.group.cs_constant_times_pi.denom() as f64;
    let phase_factor = 48.0 * PI * pc;
    let tol = err.unwrap_or(0.0);
    env.real("exponent_integral", integral, tol);
    let h = path_holonomy(&path)?;
    env.complex("holonomy", h, phase_factor.abs() * tol);
    env.real("phase", phase_factor * integral, phase_factor.abs() * tol);
    env.diag("samples", path.len());
    env.diag("richardson_estimate_available", err.is_some());
    if let Some((l1, l2)) = lambdas {
        let g = wz_torus_hom::<f64>(&path.group, &LatticeVector(l1), &LatticeVector(l2))?;
        env.angle("wz_torus_hom", &g, cli.angle_tol);
        env.real("closed_form_gap", (h - Complex64::from_polar(1.0, g.raw)).norm(), phase_factor.abs() * tol);
    }
    let f = holonomy_integrand(&path)?;
    let mut csv = String::from("t,value\n");
    for (t, v) in path.t.iter().zip(&f) {
        csv.push_str(&format!("{t},{v}\n"));
    }
    write_csv(cli, env, &csv)
}

/// Every other sample, keeping the last; `None` if too short.
fn subsample(p: &CartanPath<f64>) -> Result<Option<CartanPath<f64>>, CliError> {
    let n = p.len();
    if n < 5 || n.is_multiple_of(2) {
        return Ok(None);
    }
    let pick = |v: &[Vec<f64>]| v.iter().step_by(2).cloned().collect::<Vec<_>>();
    let t = p.t.iter().step_by(2).copied().collect();
    Ok(Some(CartanPath::new(p.group.clone(), t, pick(&p.a1), pick(&p.a2))?))
}

fn spectral(
    env: &mut ResultEnvelope,
    cli: &Cli,
    curve: &SpectralCurveP0<f64>,
    d1: &LogMuData<f64>,
    d2: &LogMuData<f64>,
    n: usize,
) -> Result<(), CliError> {
    let cfg = SpectralConfig {
        lift: LiftConfig { branch_floor: cli.branch_floor, ..LiftConfig::default() },
        quad: QuadConfig { rel_tol: cli.quad_tol, ..QuadConfig::default() },
        angle_tol: cli.angle_tol,
    };
    let r = analyze(curve, d1, d2, n, &cfg)?;
    let q = &r.gamma.integral;
    let qtol = q.last_change;
    env.real("holonomy_integral", q.value, qtol);
    let e = r.gamma.energy;
    let etol = if e.closed_form { 0.0 } else { 64.0 * f64::EPSILON * e.energy };
    env.real("E", e.energy, etol);
    env.exact("orientation", e.orientation);
    env.angle("gamma", &r.gamma.gamma, qtol / PI + etol / 32.0);
    env.real("energy_mod_residual", r.mod_check.residual, r.mod_check.full_integral.last_change / PI);
    env.complex("holonomy_relation", r.holonomy_relation, qtol / PI);
    env.complex("holonomy_direct", r.holonomy_direct, qtol / PI);
    env.complex("wzw_inverse_16pi", r.wzw.inverse_16pi, qtol / PI + etol / 16.0);
    env.complex("wzw_six_c", r.wzw.six_c, qtol / PI + etol / 16.0);
    if let (CurveKind::Nonconformal { alpha }, true) = (curve.kind(), e.closed_form) {
        let (rr, s) = curve.r_s().expect("nonconformal");
        env.real("gamma_closed_form", 4.0 * PI * alpha.im / (rr * s), 0.0);
    }
    env.real("relation_gap", (r.holonomy_relation - r.holonomy_direct).norm(), qtol / PI);
    let d = r.half_lift.diagnostics;
    env.diag(
        "lift",
        json!({
            "min_abs_p": d.min_abs_p,
            "max_eta_residual": d.max_eta_residual,
            "max_re_logmu": d.max_re_logmu,
            "max_continuity_ratio": d.max_continuity_ratio,
            "max_endpoint_distance": d.max_endpoint_distance,
        }),
    );
    env.diag("quadrature_history", &q.history);
    env.diag("quadrature_intervals", q.intervals);
    env.diag("quadrature_imag", q.imag);
    env.diag("full_circle_history", &r.mod_check.full_integral.history);
    env.diag("energy_from_closed_form", e.closed_form);
    write_csv(cli, env, &r.half_lift.to_csv())
}

enum MapSource {
    Clifford,
    File(String),
}

fn map_source(s: &str) -> MapSource {
    if s.eq_ignore_ascii_case("clifford") {
        MapSource::Clifford
    } else {
        MapSource::File(s.to_string())
    }
}

fn load_map(src: &MapSource, grid: usize, perturb: f64) -> Result<DiscreteTorusMap<f64>, CliError> {
    let m = match src {
        MapSource::Clifford => DiscreteTorusMap::clifford(grid)?,
        MapSource::File(p) => DiscreteTorusMap::from_json_str(&read(Path::new(p))?)?,
    };
    Ok(if perturb != 0.0 { m.perturb(perturb)? } else { m })
}

fn flat_check(env: &mut ResultEnvelope, argv: &mut Vec<String>, a: &crate::FlatArgs, cli: &Cli) -> Result<(), CliError> {
    let src = map_source(&a.map);
    let thetas = match &a.theta {
        Some(s) => parse_list::<f64>(s, "theta")?,
        None => vec![PI / 4.0, PI / 2.0, 3.0 * PI / 4.0],
    };
    let levels = match src {
        MapSource::Clifford => a.levels.max(1),
        MapSource::File(_) => 1,
    };
    argv.extend([
        "--map".into(),
        a.map.clone(),
        "--grid".into(),
        a.grid.to_string(),
        "--levels".into(),
        levels.to_string(),
        format!("--perturb={}", a.perturb),
        format!("--theta={}", join(&thetas)),
        format!("--projection-limit={}", a.projection_limit),
    ]);
    env.input("map", &a.map);
    env.input("grid", a.grid);
    env.input("levels", levels);
    env.input("perturb", a.perturb);
    env.input("theta", &thetas);
    env.input("projection_limit", a.projection_limit);

    let mut csv = String::from("theta,grid,residual\n");
    let mut residuals = vec![Vec::new(); thetas.len()];
    let mut grids = Vec::new();
    let mut projection = Vec::new();
    for level in 0..levels {
        let m = load_map(&src, a.grid << level, a.perturb)?;
        let n = m.dims().0;
        grids.push(n);
        let p = pullback_mc(&m, a.projection_limit)?;
        projection.push(p.projection_residual);
        for (k, &t) in thetas.iter().enumerate() {
            let r = curvature_residual(&family_at(&p.alpha, t));
            env.real(&format!("residual_t{k}_n{n}"), r, 0.0);
            csv.push_str(&format!("{t},{n},{r}\n"));
            residuals[k].push(r);
        }
        if level + 1 == levels {
            env.real("energy_finest", energy_of(&p.alpha), 0.0);
        }
    }
    for (k, rs) in residuals.iter().enumerate() {
        for (w, g) in rs.windows(2).zip(&grids[1..]) {
            env.real(&format!("ratio_t{k}_n{g}"), w[0] / w[1], 0.0);
        }
    }
    env.diag("grids", &grids);
    env.diag("projection_residual", &projection);
    write_csv(cli, env, &csv)
}

fn energy_numeric(env: &mut ResultEnvelope, argv: &mut Vec<String>, a: &crate::EnergyArgs) -> Result<(), CliError> {
    let src = map_source(&a.map);
    argv.extend([
        "--map".into(),
        a.map.clone(),
        "--grid".into(),
        a.grid.to_string(),
        format!("--perturb={}", a.perturb),
        format!("--projection-limit={}", a.projection_limit),
    ]);
    env.input("map", &a.map);
    env.input("grid", a.grid);
    env.input("perturb", a.perturb);
    env.input("projection_limit", a.projection_limit);
    let m = load_map(&src, a.grid, a.perturb)?;
    let p = pullback_mc(&m, a.projection_limit)?;
    let e = energy_of(&p.alpha);
    let tol = match src {
        MapSource::Clifford if a.grid / 2 >= 8 => {
            let coarse = load_map(&src, a.grid / 2, a.perturb)?;
            (e - energy_of(&pullback_mc(&coarse, a.projection_limit)?.alpha)).abs()
        }
        _ => p.projection_residual * e.abs(),
    };
    env.real("E", e, tol);
    env.diag("projection_residual", p.projection_residual);
    env.diag("grid", m.dims());
    if matches!(src, MapSource::Clifford) && a.perturb == 0.0 {
        env.diag("relative_error_vs_16pi2", e / (16.0 * PI * PI) - 1.0);
    }
    Ok(())
}

fn volume(env: &mut ResultEnvelope, argv: &mut Vec<String>, a: &crate::VolumeArgs, cli: &Cli) -> Result<(), CliError> {
    let surface: Surface = a.surface.parse()?;
    argv.extend([
        "--surface".into(),
        surface.to_string(),
        "--samples".into(),
        a.samples.to_string(),
        "--seed".into(),
        a.seed.to_string(),
    ]);
    env.input("surface", surface);
    env.input("samples", a.samples);
    env.input("seed", a.seed);
    env.metadata.seed = Some(a.seed);
    env.metadata.rng = Some(RNG_NAME.to_string());
    let s = S3Sampler::new(a.seed, a.samples)?;
    let v = volume_fraction(surface, &s);
    env.real_stderr("fraction", v.fraction, v.stderr);
    env.exact("hits", v.hits);
    let g = gamma_from_fraction(v.fraction, cli.angle_tol)?;
    env.angle_stderr("gamma", &g, 2.0 * PI * v.stderr);
    Ok(())
}
