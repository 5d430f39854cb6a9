use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::diagnostics::{
    default_fd_step, fit_power_law, flow_jacobian, l2_error, mass, mean_error, median, symplectic_defect,
    SymplecticBudget,
};
use crate::discretization::{modulus, HamiltonianState};
use crate::error::{Error, Result};
use crate::integrators::{integrate_from, step, Scheme, SchemeSpec};
use crate::problems::{ProblemKind, SplitProblem, SplitSystem};
use crate::stochastic::{coarsen, sample_path_stream, WienerPath};

use super::config::{ReferenceSpec, RunConfig};

/// The four studies behind the command-line subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Study {
    /// One integration at the finest configured step.
    Run,
    /// All configured step counts plus an order fit.
    Converge,
    /// Median one-step symplectic defect per step size and its scaling.
    Defect,
    /// Lie, Strang and the iterative scheme on the soliton problem, against
    /// the exact solution or, with `reference = fine`, a fine Strang run.
    Soliton,
}

impl Study {
    pub const ALL: [Study; 4] = [Study::Run, Study::Converge, Study::Defect, Study::Soliton];

    pub fn name(self) -> &'static str {
        match self {
            Study::Run => "run",
            Study::Converge => "converge",
            Study::Defect => "defect",
            Study::Soliton => "soliton",
        }
    }
}

impl fmt::Display for Study {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Study {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Study::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::Parameter(format!("unknown study '{s}'")))
    }
}

/// One line of `results.csv`. `None` is written as an empty field; a blown-up
/// run carries `NaN` errors.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub run_id: usize,
    pub scheme: Scheme,
    pub m: usize,
    pub omega: f64,
    /// `None` on summary rows.
    pub dt: Option<f64>,
    pub dx: f64,
    pub seed: u64,
    /// `None` on summary rows.
    pub path_id: Option<usize>,
    pub l2_error: Option<f64>,
    /// Ensemble mean of the L² errors at this step size.
    pub mean_error: Option<f64>,
    /// Relative change of the discrete mass over the run.
    pub mass_drift: Option<f64>,
    /// One-step symplectic defect on data rows; fitted defect slope on summary rows.
    pub defect: Option<f64>,
    /// Fitted convergence order, summary rows only.
    pub order_fit: Option<f64>,
}

/// One line of `defect.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectRow {
    pub dt: Option<f64>,
    pub scheme: Scheme,
    pub m: usize,
    pub median_defect: Option<f64>,
    /// Present when `δ = √dt` lies in `(0, 1)` and the noise is nonzero.
    pub budget: Option<SymplecticBudget>,
    /// Fitted log-log slope of the median defect against `dt`, summary row only.
    pub slope: Option<f64>,
}

/// Error-versus-step curve of one scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub label: String,
    pub dts: Vec<f64>,
    pub errors: Vec<f64>,
}

/// `|u|` on the grid at the start and end of the finest run of the first path.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub label: String,
    pub t_end: f64,
    pub x: Vec<f64>,
    pub initial: Vec<f64>,
    pub approx: Vec<f64>,
    pub reference: Option<Vec<f64>>,
}

/// Everything a study produces, ready for [`write_outputs`](super::write_outputs).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunResult {
    pub rows: Vec<ResultRow>,
    pub defect_rows: Vec<DefectRow>,
    pub curves: Vec<Curve>,
    pub snapshots: Vec<Snapshot>,
    /// Whether `svg` output was requested.
    pub svg: bool,
}

/// Runs one study of `config`.
///
/// Every ensemble member draws its own Wiener path (stream = path id) at the
/// resolution of the reference, and every coarser level integrates the
/// coarsened path, so all step sizes see the same Brownian motion. Members
/// run in parallel and are reduced in path order. A run that overflows
/// produces a `NaN` row and the study continues.
pub fn run_experiment(config: &RunConfig, study: Study) -> Result<RunResult> {
    config.validate()?;
    let mut result = RunResult { svg: config.svg, ..RunResult::default() };
    match study {
        Study::Run => {
            let levels = [*config.n_steps.last().expect("validated non-empty")];
            sweep(config, &config.build_problem()?, config.scheme, &levels, &mut result)?;
        }
        Study::Converge => {
            sweep(config, &config.build_problem()?, config.scheme, &config.n_steps, &mut result)?;
        }
        Study::Soliton => {
            let mut cfg = config.clone();
            cfg.problem = ProblemKind::DeterministicNLS;
            cfg.epsilon = 0.0;
            cfg.sigma = 1.0;
            cfg.lambda = 2.0;
            cfg.psi = 2.0;
            cfg.potential = crate::problems::Potential::Zero;
            cfg.reference = match cfg.reference {
                ReferenceSpec::Fine { factor, .. } => ReferenceSpec::Fine { scheme: SchemeSpec::strang(), factor },
                ReferenceSpec::Exact => ReferenceSpec::Exact,
            };
            let problem = cfg.build_problem()?;
            let mut schemes = vec![SchemeSpec::lie(), SchemeSpec::strang(), SchemeSpec::iterative(2)];
            if !schemes.contains(&config.scheme) {
                schemes.push(config.scheme);
            }
            for spec in schemes {
                sweep(&cfg, &problem, spec, &cfg.n_steps, &mut result)?;
            }
        }
        Study::Defect => defect_study(config, &config.build_problem()?, &mut result)?,
    }
    Ok(result)
}

struct Member {
    errors: Vec<f64>,
    drifts: Vec<f64>,
    defects: Vec<Option<f64>>,
    snapshot: Option<(Vec<f64>, Option<Vec<f64>>)>,
}

fn nan_or<T>(r: Result<T>, f: impl FnOnce(T) -> f64) -> Result<f64> {
    match r {
        Ok(v) => Ok(f(v)),
        Err(Error::NonFinite { .. }) => Ok(f64::NAN),
        Err(e) => Err(e),
    }
}

fn fine_steps(config: &RunConfig) -> usize {
    let finest = *config.n_steps.last().expect("validated non-empty");
    match config.reference {
        ReferenceSpec::Exact => finest,
        ReferenceSpec::Fine { factor, .. } => finest * factor,
    }
}

fn member_path(config: &RunConfig, path_id: usize) -> Result<WienerPath> {
    let n = fine_steps(config) * config.refinement;
    let dt = config.t_end / n as f64;
    if config.is_stochastic() {
        sample_path_stream(n, dt, config.seed, path_id as u64)
    } else {
        WienerPath::zeros(n, dt)
    }
}

fn level_path(config: &RunConfig, fine: &WienerPath, n_steps: usize) -> Result<WienerPath> {
    coarsen(fine, fine.len() / (n_steps * config.refinement))
}

fn one_step_defect(problem: &SplitProblem, spec: &SchemeSpec, dt: f64, dw_sub: &[f64]) -> Result<f64> {
    let y0 = problem.initial_condition();
    let jac = flow_jacobian(|y| step(problem, spec, y, dt, dw_sub), &y0, default_fd_step(&y0));
    nan_or(jac.and_then(|j| symplectic_defect(&j)), |d| d)
}

fn run_member(
    config: &RunConfig,
    problem: &SplitProblem,
    spec: SchemeSpec,
    levels: &[usize],
    path_id: usize,
) -> Result<Member> {
    let fine = member_path(config, path_id)?;
    let y0 = problem.initial_condition();
    let reference: Option<HamiltonianState> = match config.reference {
        ReferenceSpec::Exact => problem.exact_solution(config.t_end),
        ReferenceSpec::Fine { scheme, .. } => {
            let n = fine_steps(config);
            let path = level_path(config, &fine, n)?;
            match integrate_from(problem, &scheme, &y0, config.t_end, n, &path, n) {
                Ok(traj) => Some(traj.last().clone()),
                Err(Error::NonFinite { .. }) => None,
                Err(e) => return Err(e),
            }
        }
    };
    let dx = problem.grid().dx();
    let m0 = mass(&y0, dx);
    let mut out = Member { errors: vec![], drifts: vec![], defects: vec![], snapshot: None };
    for (i, &n) in levels.iter().enumerate() {
        let path = level_path(config, &fine, n)?;
        let dt = config.t_end / n as f64;
        let final_state = match integrate_from(problem, &spec, &y0, config.t_end, n, &path, n) {
            Ok(traj) => Some(traj.last().clone()),
            Err(Error::NonFinite { .. }) => None,
            Err(e) => return Err(e),
        };
        let (err, drift) = match (&final_state, &reference) {
            (Some(y), Some(r)) => (l2_error(r, y, dx)?, (mass(y, dx) - m0).abs() / m0),
            (Some(y), None) => (f64::NAN, (mass(y, dx) - m0).abs() / m0),
            _ => (f64::NAN, f64::NAN),
        };
        out.errors.push(err);
        out.drifts.push(drift);
        out.defects.push(if config.defect {
            Some(one_step_defect(problem, &spec, dt, &path.increments()[..config.refinement])?)
        } else {
            None
        });
        if path_id == 0 && i + 1 == levels.len() {
            if let Some(y) = final_state {
                out.snapshot = Some((modulus(&y), reference.as_ref().map(modulus)));
            }
        }
    }
    Ok(out)
}

fn next_run_id(result: &RunResult) -> usize {
    result.rows.iter().map(|r| r.run_id + 1).max().unwrap_or(0)
}

fn sweep(
    config: &RunConfig,
    problem: &SplitProblem,
    spec: SchemeSpec,
    levels: &[usize],
    result: &mut RunResult,
) -> Result<()> {
    let members: Vec<Member> = (0..config.ensemble)
        .into_par_iter()
        .map(|p| run_member(config, problem, spec, levels, p))
        .collect::<Result<_>>()?;
    let dx = problem.grid().dx();
    let base = next_run_id(result);
    let dts: Vec<f64> = levels.iter().map(|n| config.t_end / *n as f64).collect();
    let mut means = Vec::with_capacity(levels.len());
    let mut median_defects = Vec::new();
    for (i, dt) in dts.iter().enumerate() {
        let errors: Vec<f64> = members.iter().map(|m| m.errors[i]).collect();
        let mean = mean_error(&errors)?;
        means.push(mean);
        if config.defect {
            let d: Vec<f64> = members.iter().filter_map(|m| m.defects[i]).collect();
            median_defects.push(median(&d)?);
        }
        for (p, member) in members.iter().enumerate() {
            result.rows.push(ResultRow {
                run_id: base + i,
                scheme: spec.scheme,
                m: spec.sweeps,
                omega: spec.omega,
                dt: Some(*dt),
                dx,
                seed: config.seed,
                path_id: Some(p),
                l2_error: Some(member.errors[i]),
                mean_error: Some(mean),
                mass_drift: Some(member.drifts[i]),
                defect: member.defects[i],
                order_fit: None,
            });
        }
    }
    let fit = |ys: &[f64]| fit_power_law(&dts, ys).ok().map(|f| f.order);
    let drift_max = members.iter().flat_map(|m| m.drifts.iter().copied()).fold(0.0, f64::max);
    result.rows.push(ResultRow {
        run_id: base + levels.len(),
        scheme: spec.scheme,
        m: spec.sweeps,
        omega: spec.omega,
        dt: None,
        dx,
        seed: config.seed,
        path_id: None,
        l2_error: None,
        mean_error: means.last().copied(),
        mass_drift: Some(drift_max),
        defect: if config.defect { fit(&median_defects) } else { None },
        order_fit: fit(&means),
    });
    result.curves.push(Curve { label: label(&spec), dts, errors: means });
    if let Some((approx, reference)) = members.first().and_then(|m| m.snapshot.clone()) {
        result.snapshots.push(Snapshot {
            label: label(&spec),
            t_end: config.t_end,
            x: problem.grid().points(),
            initial: modulus(&problem.initial_condition()),
            approx,
            reference,
        });
    }
    Ok(())
}

fn label(spec: &SchemeSpec) -> String {
    match spec.scheme {
        Scheme::Lie | Scheme::Strang => spec.scheme.to_string(),
        Scheme::IterativeStochastic => format!("{} m={}", spec.scheme, spec.sweeps),
        Scheme::WeightedIter1 => format!("{} order={} omega={}", spec.scheme, spec.correction_order, spec.omega),
        Scheme::WeightedIter2 => format!("{} m={} omega={}", spec.scheme, spec.sweeps, spec.omega),
    }
}

fn defect_study(config: &RunConfig, problem: &SplitProblem, result: &mut RunResult) -> Result<()> {
    let spec = config.scheme;
    let levels = &config.n_steps;
    let dts: Vec<f64> = config.dts();
    let per_path: Vec<Vec<f64>> = (0..config.ensemble)
        .into_par_iter()
        .map(|p| {
            let fine = member_path(config, p)?;
            levels
                .iter()
                .zip(&dts)
                .map(|(&n, &dt)| {
                    let path = level_path(config, &fine, n)?;
                    one_step_defect(problem, &spec, dt, &path.increments()[..config.refinement])
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let norm_b = problem.a3().spectral_norm(1e-12);
    let dx = problem.grid().dx();
    let mut medians = Vec::with_capacity(levels.len());
    for (i, &dt) in dts.iter().enumerate() {
        let sample: Vec<f64> = per_path.iter().map(|d| d[i]).collect();
        let med = median(&sample)?;
        medians.push(med);
        let delta = dt.sqrt();
        let c_fit = med / delta.powi(spec.sweeps as i32 + 1);
        let budget = SymplecticBudget::new(delta, norm_b, spec.sweeps, med, c_fit).ok();
        result.defect_rows.push(DefectRow {
            dt: Some(dt),
            scheme: spec.scheme,
            m: spec.sweeps,
            median_defect: Some(med),
            budget,
            slope: None,
        });
        for (p, d) in sample.iter().enumerate() {
            result.rows.push(ResultRow {
                run_id: i,
                scheme: spec.scheme,
                m: spec.sweeps,
                omega: spec.omega,
                dt: Some(dt),
                dx,
                seed: config.seed,
                path_id: Some(p),
                l2_error: None,
                mean_error: None,
                mass_drift: None,
                defect: Some(*d),
                order_fit: None,
            });
        }
    }
    let slope = fit_power_law(&dts, &medians).ok().map(|f| f.order);
    result.defect_rows.push(DefectRow {
        dt: None,
        scheme: spec.scheme,
        m: spec.sweeps,
        median_defect: None,
        budget: None,
        slope,
    });
    result.rows.push(ResultRow {
        run_id: levels.len(),
        scheme: spec.scheme,
        m: spec.sweeps,
        omega: spec.omega,
        dt: None,
        dx,
        seed: config.seed,
        path_id: None,
        l2_error: None,
        mean_error: None,
        mass_drift: None,
        defect: slope,
        order_fit: None,
    });
    result.curves.push(Curve { label: format!("defect {}", label(&spec)), dts, errors: medians });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::parse_config;

    #[test]
    fn study_names_round_trip() {
        for s in Study::ALL {
            assert_eq!(s.name().parse::<Study>().unwrap(), s);
        }
        assert!("plot".parse::<Study>().is_err());
    }

    #[test]
    fn three_levels_give_three_rows_and_a_summary() {
        let cfg = parse_config("grid_points = 64\nx_right = 50\nt_end = 0.1\nn_steps = 5, 10, 20\nscheme = strang\n")
            .unwrap();
        let res = run_experiment(&cfg, Study::Converge).unwrap();
        assert_eq!(res.rows.len(), 4);
        let summary = res.rows.last().unwrap();
        assert!(summary.dt.is_none() && summary.order_fit.is_some());
        assert_eq!(res.curves.len(), 1);
    }

    #[test]
    fn stochastic_members_share_levels() {
        let cfg = parse_config(
            "problem = linearized_stochastic\ngrid_points = 8\nt_end = 0.05\nn_steps = 5, 10\n\
             scheme = lie\nensemble = 3\nrefinement = 2\nreference_factor = 2\n",
        )
        .unwrap();
        let res = run_experiment(&cfg, Study::Converge).unwrap();
        assert_eq!(res.rows.len(), 2 * 3 + 1);
        for level in res.rows.chunks(3).take(2) {
            let mean = level[0].mean_error.unwrap();
            let direct = mean_error(&level.iter().map(|r| r.l2_error.unwrap()).collect::<Vec<_>>()).unwrap();
            assert_eq!(mean, direct);
        }
    }
}
