//! `boolsd`: Boolean selfdecomposability from the command line.
//!
//! Exit status: 0 success, 1 failed acceptance check, 2 bad invocation or
//! input, 3 numerical diagnostic.

mod emit;
mod source;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boolsd_core::catalog::{self, special};
use boolsd_core::convolution::{boolean_convolve, bp_forward, free_f, sd_decompose};
use boolsd_core::io::{csv, num, SvgPlot};
use boolsd_core::measure_model::pair_from_triplet;
use boolsd_core::optim::linspace;
use boolsd_core::reproduce;
use boolsd_core::sd_analysis::{
    atom_census_in, check_boolean_sd, design_grid, normal_threshold, shift_threshold, shifted_normal_profile,
    unimodality_check, SdOptions, DEFAULT_TOLERANCE,
};
use boolsd_core::transforms::{
    cauchy_from_f, eta, k_from_f_with, self_energy, stieltjes_invert_with, BoundaryOptions, BoundaryProfile,
};
use boolsd_core::{Atom, KProfile, TransformHandle, C64};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use emit::{ensure_dir, to_json, write_file, Artifact, Format, Output};
use source::{parse_spec, Source, Subject};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, parameters or files.
    Spec(String),
    /// The numerics could not deliver a trustworthy answer.
    Numerical(String),
    /// `reproduce-paper` found failing criteria.
    Acceptance(usize),
}

impl From<boolsd_core::Error> for CliError {
    fn from(e: boolsd_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Spec(e.to_string())
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "boolsd", version, about = "Boolean selfdecomposability of probability measures on the line")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone, Default)]
struct Numerics {
    /// Sample grid lo:hi:n
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Decreasing ε values for boundary limits, comma separated
    #[arg(long)]
    eps_ladder: Option<String>,
    /// Relative tolerance of the unimodality test
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    G,
    F,
    K,
    Eta,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Catalog families with parameters and SD conditions
    List {
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate a transform at points of the plane
    Eval {
        #[command(flatten)]
        src: Source,
        /// Point re,im; repeatable
        #[arg(long = "z", required = true, allow_hyphen_values = true)]
        z: Vec<String>,
        #[arg(long, value_enum, default_value = "f")]
        transform: Which,
        #[command(flatten)]
        out: Output,
    },
    /// Density by Stieltjes inversion
    Invert {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        num: Numerics,
        #[command(flatten)]
        out: Output,
    },
    /// k-function recovered from F
    KProfile {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        num: Numerics,
        /// Sample the closed-form k instead
        #[arg(long)]
        closed: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Boolean selfdecomposability verdict
    CheckSd {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        num: Numerics,
        /// Sample the closed-form k instead of recovering it from F
        #[arg(long)]
        closed: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Atoms of the measure
    Atoms {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        num: Numerics,
        #[command(flatten)]
        out: Output,
    },
    /// Unimodality of k for N(m, v) over a range of shifts m
    ShiftScan {
        /// Variance of the normal law
        #[arg(long, default_value_t = 1.0)]
        v: f64,
        /// Shifts lo:hi:n
        #[arg(long, default_value = "0:6:25", allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Classical shifts keeping k unimodal (standard normal by default)
    ShiftThreshold {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        num: Numerics,
        #[command(flatten)]
        out: Output,
    },
    /// a0 and M0 of the standard normal
    NormalThreshold {
        #[command(flatten)]
        out: Output,
    },
    /// Boolean convolution of two measures
    Convolve {
        /// Measure spec id[:v1,v2 | :k=v,...] or a JSON file
        #[arg(long = "a", allow_hyphen_values = true)]
        a: String,
        #[arg(long = "b", allow_hyphen_values = true)]
        b: String,
        #[command(flatten)]
        num: Numerics,
        #[command(flatten)]
        out: Output,
    },
    /// Cofactor μ_c with μ = D_c μ ⊎ μ_c
    Decompose {
        #[command(flatten)]
        src: Source,
        /// Dilation factor in (0, 1)
        #[arg(long, default_value_t = 0.5)]
        factor: f64,
        #[command(flatten)]
        num: Numerics,
        #[command(flatten)]
        out: Output,
    },
    /// Free counterpart under the Boolean-to-free bijection
    Bijection {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        num: Numerics,
        #[command(flatten)]
        out: Output,
    },
    /// Run the acceptance suite and write the summary and figures
    ReproducePaper {
        #[arg(long, default_value = "boolsd-paper")]
        out: PathBuf,
    },
}

fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Spec(format!("grid must be lo:hi:n with lo < hi and n >= 2, got `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() || n < 2 {
        return Err(bad());
    }
    Ok(linspace(lo, hi, n))
}

fn parse_ladder(s: &str) -> Result<Vec<f64>, CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Spec(format!("bad ε ladder `{s}`")))?;
    if v.len() < 3 || v.iter().any(|&e| !(e > 0.0)) || v.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CliError::Spec("ε ladder needs at least three positive, strictly decreasing values".into()));
    }
    Ok(v)
}

fn parse_z(s: &str) -> Result<C64, CliError> {
    let (re, im) = s.split_once(',').ok_or_else(|| CliError::Spec(format!("point must be re,im, got `{s}`")))?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|_| CliError::Spec(format!("point must be re,im, got `{s}`")));
    Ok(C64::new(p(re)?, p(im)?))
}

impl Numerics {
    fn boundary(&self) -> Result<BoundaryOptions, CliError> {
        let mut o = BoundaryOptions::default();
        if let Some(l) = &self.eps_ladder {
            o.ladder = parse_ladder(l)?;
        }
        Ok(o)
    }

    fn grid_or(&self, default: impl FnOnce() -> Vec<f64>) -> Result<Vec<f64>, CliError> {
        match &self.grid {
            Some(g) => parse_grid(g),
            None => Ok(default()),
        }
    }

    fn tol(&self) -> Result<f64, CliError> {
        let t = self.tol.unwrap_or(DEFAULT_TOLERANCE);
        if !(0.0..1.0).contains(&t) {
            return Err(CliError::Spec(format!("--tol must lie in [0, 1), got {t}")));
        }
        Ok(t)
    }
}

fn no_zero(g: Vec<f64>) -> Vec<f64> {
    g.into_iter().filter(|&x| x != 0.0).collect()
}

fn profile_plot(title: &str, p: &KProfile) -> String {
    // k ~ ℓ(0)/|x| near the origin; clip so the shape stays visible
    let far: Vec<f64> = p.grid.iter().zip(&p.k).filter(|(x, _)| x.abs() >= 0.25).map(|(_, k)| *k).collect();
    let top = far.iter().copied().filter(|k| k.is_finite()).fold(0.0, f64::max) * 1.2;
    let mut plot = SvgPlot::new(title, "x", "k(x)").line("k", p.grid.iter().copied().zip(p.k.iter().copied()).collect(), "#1f4e9c");
    if top > 0.0 {
        plot.y_range = Some((0.0, top));
    }
    plot.render()
}

fn density_plot(title: &str, p: &BoundaryProfile) -> String {
    let pts = p.grid.iter().copied().zip(p.values.iter().copied()).collect();
    SvgPlot::new(title, "x", "density").line("density", pts, "#1f4e9c").render()
}

fn atoms_in(f: &TransformHandle, lo: f64, hi: f64, n: usize) -> Result<Vec<Atom>, CliError> {
    let dummy = KProfile::from_fn(&no_zero(linspace(lo, hi, 3)), |_| 0.0)?;
    Ok(atom_census_in(f, &dummy, lo, hi, n)?.atoms)
}

fn atom_csv(atoms: &[Atom]) -> String {
    csv(&["location", "mass"], atoms.iter().map(|a| vec![num(a.location), num(a.mass)]))
}

#[derive(Serialize)]
struct AtomReport<'a> {
    label: &'a str,
    window: (f64, f64),
    atoms: &'a [Atom],
    atom_mass: f64,
}

#[derive(Serialize)]
struct DensityReport<'a> {
    label: &'a str,
    #[serde(flatten)]
    profile: &'a BoundaryProfile,
}

fn cmd_list(out: &Output) -> Result<(), CliError> {
    let fams = catalog::families();
    let rows = fams.iter().map(|f| {
        let ps: Vec<String> = f.params.iter().map(|p| format!("{}={}", p.name, p.default)).collect();
        vec![f.id.to_string(), f.aliases.join(" "), ps.join(" "), format!("\"{}\"", f.sd_condition)]
    });
    let a = Artifact {
        csv: Some(csv(&["id", "aliases", "params", "sd_condition"], rows)),
        json: Some(to_json(&fams)),
        svg: None,
    };
    out.emit("list", Format::Csv, a)
}

fn cmd_eval(src: &Source, zs: &[String], which: Which, out: &Output) -> Result<(), CliError> {
    let s = src.resolve()?;
    let h = match which {
        Which::G => cauchy_from_f(s.f())?,
        Which::F => s.f().clone(),
        Which::K => self_energy(s.f())?,
        Which::Eta => eta(s.f())?,
    };
    let mut rows = Vec::new();
    let mut vals = Vec::new();
    for z in zs {
        let z = parse_z(z)?;
        let v = h.eval(z)?;
        rows.push(vec![num(z.re), num(z.im), num(v.re), num(v.im)]);
        vals.push(((z.re, z.im), (v.re, v.im)));
    }
    #[derive(Serialize)]
    struct Report<'a> {
        label: &'a str,
        transform: String,
        values: Vec<((f64, f64), (f64, f64))>,
    }
    let r = Report { label: &s.label, transform: format!("{which:?}"), values: vals };
    let a = Artifact { csv: Some(csv(&["re", "im", "value_re", "value_im"], rows)), json: Some(to_json(&r)), svg: None };
    out.emit("eval", Format::Csv, a)
}

fn cmd_invert(src: &Source, n: &Numerics, out: &Output) -> Result<(), CliError> {
    let s = src.resolve()?;
    let (lo, hi) = s.window();
    let grid = n.grid_or(|| linspace(lo, hi, 401))?;
    let p = stieltjes_invert_with(s.f(), &grid, &n.boundary()?)?;
    let a = Artifact {
        csv: Some(p.to_csv()),
        json: Some(to_json(&DensityReport { label: &s.label, profile: &p })),
        svg: Some(density_plot(&format!("density of {}", s.label), &p)),
    };
    out.emit("invert", Format::Csv, a)
}

fn default_grid(s: &Subject) -> Vec<f64> {
    design_grid(s.window(), &s.problem.breakpoints, 801, 30)
}

fn cmd_k_profile(src: &Source, n: &Numerics, closed: bool, out: &Output) -> Result<(), CliError> {
    let s = src.resolve()?;
    let grid = no_zero(n.grid_or(|| default_grid(&s))?);
    let p = if closed {
        let e = s.entry.as_ref().filter(|e| e.k_closed.is_some());
        let e = e.ok_or_else(|| CliError::Spec(format!("{} has no closed-form k", s.label)))?;
        KProfile::from_fn(&grid, |x| e.k_closed_at(x).unwrap_or(f64::NAN))?
    } else {
        k_from_f_with(s.f(), &grid, &n.boundary()?)?
    };
    let a = Artifact {
        csv: Some(p.to_csv()),
        json: Some(to_json(&p)),
        svg: Some(profile_plot(&format!("k of {}", s.label), &p)),
    };
    out.emit("k-profile", Format::Csv, a)
}

fn cmd_check_sd(src: &Source, n: &Numerics, closed: bool, out: &Output) -> Result<(), CliError> {
    let s = src.resolve()?;
    let opts = SdOptions {
        tolerance: n.tol()?,
        boundary: n.boundary()?,
        use_closed_k: closed,
        grid: n.grid.as_deref().map(parse_grid).transpose()?,
        ..Default::default()
    };
    let r = check_boolean_sd(&s.problem, &opts)?;
    let a = Artifact {
        csv: Some(r.profile.to_csv()),
        json: Some(to_json(&r)),
        svg: Some(profile_plot(&format!("k of {} ({})", s.label, r.verdict.as_str()), &r.profile)),
    };
    out.emit("check-sd", Format::Json, a)
}

fn cmd_atoms(src: &Source, n: &Numerics, out: &Output) -> Result<(), CliError> {
    let s = src.resolve()?;
    let (lo, hi, pts) = match &n.grid {
        Some(g) => {
            let g = parse_grid(g)?;
            (g[0], g[g.len() - 1], g.len())
        }
        None => (s.window().0, s.window().1, 4001),
    };
    let atoms = atoms_in(s.f(), lo, hi, pts)?;
    let r = AtomReport { label: &s.label, window: (lo, hi), atoms: &atoms, atom_mass: atoms.iter().map(|a| a.mass).sum() };
    let a = Artifact { csv: Some(atom_csv(&atoms)), json: Some(to_json(&r)), svg: None };
    out.emit("atoms", Format::Json, a)
}

fn cmd_shift_scan(v: f64, grid: &str, tol: Option<f64>, out: &Output) -> Result<(), CliError> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(CliError::Spec(format!("variance must be positive, got {v}")));
    }
    let ms = parse_grid(grid)?;
    let tol = Numerics { tol, ..Default::default() }.tol()?;
    #[derive(Serialize)]
    struct Row {
        m: f64,
        verdict: &'static str,
        worst_violation: Option<(f64, f64, f64, f64)>,
    }
    let mut rows = Vec::new();
    for &m in &ms {
        let r = unimodality_check(&shifted_normal_profile(m, v, 2001)?, tol);
        let w = r.worst_violation.map(|w| (w.x1, w.x2, w.k1, w.k2));
        rows.push(Row { m, verdict: r.verdict.as_str(), worst_violation: w });
    }
    let table = csv(
        &["m", "verdict", "x1", "x2", "k1", "k2"],
        rows.iter().map(|r| {
            let w = r.worst_violation.map_or(vec!["".into(); 4], |w| vec![num(w.0), num(w.1), num(w.2), num(w.3)]);
            [vec![num(r.m), r.verdict.to_string()], w].concat()
        }),
    );
    let pts = rows.iter().map(|r| (r.m, if r.verdict == "pass" { 1.0 } else { 0.0 })).collect();
    let svg = SvgPlot::new(&format!("k of N(m, {v}) unimodal"), "m", "pass").line("verdict", pts, "#1f4e9c").render();
    out.emit("shift-scan", Format::Csv, Artifact { csv: Some(table), json: Some(to_json(&rows)), svg: Some(svg) })
}

fn cmd_shift_threshold(src: &Source, n: &Numerics, out: &Output) -> Result<(), CliError> {
    let (label, p) = if src.is_given() {
        let s = src.resolve()?;
        let grid = no_zero(n.grid_or(|| default_grid(&s))?);
        let p = match s.entry.as_ref().filter(|e| e.k_closed.is_some()) {
            Some(e) => KProfile::from_fn(&grid, |x| e.k_closed_at(x).unwrap_or(f64::NAN))?,
            None => k_from_f_with(s.f(), &grid, &n.boundary()?)?,
        };
        (s.label, p)
    } else {
        let grid = no_zero(n.grid_or(|| linspace(-8.0, 8.0, 400))?);
        ("normal(m=0, v=1)".to_string(), KProfile::from_ell(&grid, special::normal_ell)?)
    };
    #[derive(Serialize)]
    struct Report<'a> {
        label: &'a str,
        #[serde(flatten)]
        threshold: boolsd_core::sd_analysis::ShiftThresholdReport,
    }
    let r = Report { label: &label, threshold: shift_threshold(&p) };
    out.emit("shift-threshold", Format::Json, Artifact { json: Some(to_json(&r)), ..Default::default() })
}

fn p_curve_svg(curve: &[(f64, f64)], a0: f64, m0: f64) -> String {
    let mut plot = SvgPlot::new(&format!("p(a); minimum {m0:.4} at a0 = {a0:.4}"), "a", "p(a)").line(
        "p",
        curve.to_vec(),
        "#1f4e9c",
    );
    plot.y_range = Some((m0 - 0.5, m0 + 6.0));
    plot.render()
}

fn cmd_normal_threshold(out: &Output) -> Result<(), CliError> {
    let r = normal_threshold();
    let a = Artifact {
        csv: Some(csv(&["a", "p"], r.p_curve.iter().map(|(a, p)| vec![num(*a), num(*p)]))),
        svg: Some(p_curve_svg(&r.p_curve, r.a0, r.m0)),
        json: Some(to_json(&r)),
    };
    out.emit("normal-threshold", Format::Json, a)
}

fn cmd_convolve(a: &str, b: &str, n: &Numerics, out: &Output) -> Result<(), CliError> {
    let (sa, sb) = (parse_spec(a)?, parse_spec(b)?);
    let f = boolean_convolve(sa.f(), sb.f())?;
    let (wa, wb) = (sa.window(), sb.window());
    let grid = n.grid_or(|| linspace(wa.0 + wb.0, wa.1 + wb.1, 4001))?;
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let atoms = atoms_in(&f, lo, hi, grid.len())?;
    let label = format!("{} ⊎ {}", sa.label, sb.label);
    let svg = match out.format {
        Some(Format::Svg) => {
            let p = stieltjes_invert_with(&f, &linspace(lo, hi, 401), &n.boundary()?)?;
            Some(density_plot(&format!("density of {label}"), &p))
        }
        _ => None,
    };
    let r = AtomReport { label: &label, window: (lo, hi), atoms: &atoms, atom_mass: atoms.iter().map(|a| a.mass).sum() };
    out.emit("convolve", Format::Json, Artifact { csv: Some(atom_csv(&atoms)), json: Some(to_json(&r)), svg })
}

fn cmd_decompose(src: &Source, c: f64, n: &Numerics, out: &Output) -> Result<(), CliError> {
    if !(c > 0.0 && c < 1.0) {
        return Err(CliError::Spec(format!("--factor must lie in (0, 1), got {c}")));
    }
    let s = src.resolve()?;
    #[derive(Serialize)]
    struct Report<'a> {
        label: &'a str,
        factor: f64,
        selfdecomposable_at_factor: bool,
        reason: Option<String>,
        cofactor_atoms: Vec<Atom>,
        cofactor_density: Option<BoundaryProfile>,
    }
    let (lo, hi) = s.window();
    let grid = n.grid_or(|| linspace(lo, hi, 401))?;
    let mut r = Report {
        label: &s.label,
        factor: c,
        selfdecomposable_at_factor: false,
        reason: None,
        cofactor_atoms: vec![],
        cofactor_density: None,
    };
    match sd_decompose(s.f(), c) {
        Ok(fc) => {
            r.selfdecomposable_at_factor = true;
            r.cofactor_atoms = atoms_in(&fc, grid[0], grid[grid.len() - 1], 4001)?;
            r.cofactor_density = Some(stieltjes_invert_with(&fc, &grid, &n.boundary()?)?);
        }
        Err(e @ boolsd_core::Error::NotSelfdecomposable { .. }) => r.reason = Some(e.to_string()),
        Err(e) => return Err(e.into()),
    }
    let a = Artifact {
        csv: r.cofactor_density.as_ref().map(|p| p.to_csv()),
        svg: r.cofactor_density.as_ref().map(|p| density_plot(&format!("cofactor of {} at c = {c}", s.label), p)),
        json: Some(to_json(&r)),
    };
    out.emit("decompose", Format::Json, a)
}

fn cmd_bijection(src: &Source, n: &Numerics, out: &Output) -> Result<(), CliError> {
    let s = src.resolve()?;
    let t = s
        .entry
        .as_ref()
        .and_then(|e| e.triplet.as_ref())
        .ok_or_else(|| CliError::Spec(format!("{} has no Lévy triplet; the bijection needs one", s.label)))?;
    let pair = pair_from_triplet(t)?;
    let h = bp_forward(&pair)?;
    let f = free_f(&h);
    let (lo, hi) = s.window();
    let pad = 0.5 * (hi - lo);
    let grid = n.grid_or(|| linspace(lo - pad, hi + pad, 401))?;
    let p = stieltjes_invert_with(&f, &grid, &n.boundary()?)?;
    #[derive(Serialize)]
    struct Report<'a> {
        label: &'a str,
        b: f64,
        tau_mass: f64,
        free_f_at_i: (f64, f64),
        free_density: &'a BoundaryProfile,
    }
    let fi = f.eval(C64::i())?;
    let r = Report {
        label: &s.label,
        b: pair.b,
        tau_mass: pair.tau.total_mass()?,
        free_f_at_i: (fi.re, fi.im),
        free_density: &p,
    };
    let a = Artifact {
        csv: Some(p.to_csv()),
        svg: Some(density_plot(&format!("free counterpart of {}", s.label), &p)),
        json: Some(to_json(&r)),
    };
    out.emit("bijection", Format::Json, a)
}

fn cmd_reproduce(dir: &Path) -> Result<(), CliError> {
    ensure_dir(dir)?;
    let outcomes = reproduce::run_all();
    for o in &outcomes {
        emit::print_out(&format!("{}\n", o.line()))?;
    }
    // timings vary between runs; they go to stdout only
    let table = csv(
        &["criterion", "name", "passed", "detail"],
        outcomes.iter().map(|o| {
            vec![o.id.to_string(), o.name.to_string(), o.passed.to_string(), format!("\"{}\"", o.detail.replace('"', "'"))]
        }),
    );
    write_file(&dir.join("summary.csv"), &table)?;
    #[derive(Serialize)]
    struct Row<'a> {
        criterion: u32,
        name: &'a str,
        passed: bool,
        detail: &'a str,
    }
    let rows: Vec<Row> =
        outcomes.iter().map(|o| Row { criterion: o.id, name: o.name, passed: o.passed, detail: &o.detail }).collect();
    write_file(&dir.join("summary.json"), &to_json(&rows))?;

    let r = normal_threshold();
    write_file(&dir.join("fig1_p_curve.svg"), &p_curve_svg(&r.p_curve, r.a0, r.m0))?;
    for (m, name) in [(3.05, "fig2_k_normal_3.05.svg"), (3.2, "fig3_k_normal_3.2.svg")] {
        let p = shifted_normal_profile(m, 1.0, 2001)?;
        let v = unimodality_check(&p, DEFAULT_TOLERANCE).verdict;
        let near: Vec<usize> = (0..p.len()).filter(|&i| (-1.0..=4.0).contains(&p.grid[i])).collect();
        let pts: Vec<(f64, f64)> = near.iter().map(|&i| (p.grid[i], p.k[i])).collect();
        let top = near.iter().filter(|&&i| p.grid[i] >= 0.25).map(|&i| p.k[i]).fold(0.0, f64::max) * 1.2;
        let mut plot = SvgPlot::new(&format!("k of N({m}, 1): {}", v.as_str()), "x", "k(x)").line("k", pts, "#1f4e9c");
        plot.y_range = Some((0.0, top));
        write_file(&dir.join(name), &plot.render())?;
    }
    emit::print_out(&format!("artifacts in {}\n", dir.display()))?;
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(CliError::Acceptance(failed));
    }
    Ok(())
}

fn set_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("BOOLSD_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Spec(format!("BOOLSD_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Spec(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    set_threads()?;
    match &cli.cmd {
        Cmd::List { out } => cmd_list(out),
        Cmd::Eval { src, z, transform, out } => cmd_eval(src, z, *transform, out),
        Cmd::Invert { src, num, out } => cmd_invert(src, num, out),
        Cmd::KProfile { src, num, closed, out } => cmd_k_profile(src, num, *closed, out),
        Cmd::CheckSd { src, num, closed, out } => cmd_check_sd(src, num, *closed, out),
        Cmd::Atoms { src, num, out } => cmd_atoms(src, num, out),
        Cmd::ShiftScan { v, grid, tol, out } => cmd_shift_scan(*v, grid, *tol, out),
        Cmd::ShiftThreshold { src, num, out } => cmd_shift_threshold(src, num, out),
        Cmd::NormalThreshold { out } => cmd_normal_threshold(out),
        Cmd::Convolve { a, b, num, out } => cmd_convolve(a, b, num, out),
        Cmd::Decompose { src, factor, num, out } => cmd_decompose(src, *factor, num, out),
        Cmd::Bijection { src, num, out } => cmd_bijection(src, num, out),
        Cmd::ReproducePaper { out } => cmd_reproduce(out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Acceptance(n)) => {
            eprintln!("boolsd: {n} acceptance criteria failed");
            ExitCode::from(1)
        }
        Err(CliError::Spec(m)) => {
            eprintln!("boolsd: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(m)) => {
            eprintln!("boolsd: numerical diagnostic: {m}");
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_and_ladders() {
        assert_eq!(parse_grid("-1:1:3").unwrap(), vec![-1.0, 0.0, 1.0]);
        assert!(parse_grid("1:0:5").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:1").is_err());
        assert_eq!(parse_ladder("1e-2,1e-3,1e-4").unwrap().len(), 3);
        assert!(parse_ladder("1e-3,1e-2,1e-4").is_err());
        assert!(parse_ladder("1e-2,1e-3").is_err());
        assert_eq!(parse_z("0.5,-2").unwrap(), C64::new(0.5, -2.0));
        assert!(parse_z("0.5").is_err());
    }

    #[test]
    fn cli_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
