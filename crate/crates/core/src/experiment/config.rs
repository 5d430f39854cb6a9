use std::collections::HashMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::discretization::SpatialGrid;
use crate::error::{Error, Result};
use crate::integrators::{Scheme, SchemeSpec};
use crate::problems::{Potential, ProblemKind, ProblemParams, SplitProblem, SplitSystem};

/// Where the comparison solution at the final time comes from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReferenceSpec {
    /// The closed-form solution of the problem.
    Exact,
    /// The same problem on the same Brownian path with `factor` times the finest step count.
    Fine { scheme: SchemeSpec, factor: usize },
}

/// A fully validated experiment description.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub x_left: f64,
    pub x_right: f64,
    pub grid_points: usize,
    pub t_end: f64,
    /// Step counts of the convergence sweep, strictly increasing.
    pub n_steps: Vec<usize>,
    pub scheme: SchemeSpec,
    pub epsilon: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub psi: f64,
    pub potential: Potential,
    pub seed: u64,
    pub ensemble: usize,
    /// Wiener sub-intervals per time step.
    pub refinement: usize,
    pub reference: ReferenceSpec,
    pub output: PathBuf,
    pub defect: bool,
    pub svg: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        parse_config("").expect("defaults are valid")
    }
}

impl RunConfig {
    pub fn grid(&self) -> Result<SpatialGrid> {
        SpatialGrid::new(self.x_left, self.x_right, self.grid_points)
    }

    pub fn params(&self) -> ProblemParams {
        ProblemParams {
            sigma: self.sigma,
            eps: self.epsilon,
            lambda: self.lambda,
            psi: self.psi,
            omega: self.scheme.omega,
            potential: self.potential.clone(),
        }
    }

    pub fn build_problem(&self) -> Result<SplitProblem> {
        SplitProblem::new(self.problem, self.grid()?, self.params())
    }

    pub fn dts(&self) -> Vec<f64> {
        self.n_steps.iter().map(|n| self.t_end / *n as f64).collect()
    }

    pub fn is_stochastic(&self) -> bool {
        self.epsilon > 0.0
    }
}

const KEYS: &[&str] = &[
    "problem",
    "x_left",
    "x_right",
    "grid_points",
    "t_end",
    "n_steps",
    "dt",
    "scheme",
    "sweeps",
    "omega",
    "correction_order",
    "epsilon",
    "sigma",
    "lambda",
    "psi",
    "potential",
    "seed",
    "ensemble",
    "refinement",
    "reference",
    "reference_scheme",
    "reference_sweeps",
    "reference_factor",
    "output",
    "defect",
    "svg",
];

struct Entries<'a> {
    map: HashMap<&'a str, (usize, &'a str)>,
}

fn cfg_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Config { line, message: message.into() })
}

impl<'a> Entries<'a> {
    fn line(&self, key: &str) -> usize {
        self.map.get(key).map_or(0, |(l, _)| *l)
    }

    fn raw(&self, key: &str) -> Option<(usize, &'a str)> {
        self.map.get(key).copied()
    }

    fn parse<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.raw(key) {
            None => Ok(default),
            Some((line, v)) => v.parse().or_else(|_| cfg_err(line, format!("malformed value '{v}' for {key}"))),
        }
    }

    fn parse_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        let Some((line, v)) = self.raw(key) else { return Ok(None) };
        let items: Vec<&str> = v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        if items.is_empty() {
            return cfg_err(line, format!("{key} needs at least one value"));
        }
        items
            .into_iter()
            .map(|s| s.parse().or_else(|_| cfg_err(line, format!("malformed entry '{s}' in {key}"))))
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    fn parse_bool(&self, key: &str, default: bool) -> Result<bool> {
        match self.raw(key) {
            None => Ok(default),
            Some((_, "true" | "yes" | "1")) => Ok(true),
            Some((_, "false" | "no" | "0")) => Ok(false),
            Some((line, v)) => cfg_err(line, format!("{key} must be true or false, got '{v}'")),
        }
    }
}

/// Parses line-oriented `key = value` text; `#` starts a comment.
///
/// Omitted keys take defaults that depend on `problem` (default
/// `deterministic_nls`: the soliton on `[0, 50]` with 500 points, `T = 1`,
/// Strang splitting at 250, 500 and 1000 steps against the exact solution).
/// Every error names the offending line; line 0 marks a problem with defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut map = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return cfg_err(line, format!("expected 'key = value', got '{content}'"));
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return cfg_err(line, format!("unknown key '{key}'"));
        }
        if value.is_empty() {
            return cfg_err(line, format!("missing value for {key}"));
        }
        if let Some((first, _)) = map.insert(key, (line, value)) {
            return cfg_err(line, format!("duplicate key '{key}' (first set on line {first})"));
        }
    }
    let e = Entries { map };

    let problem = match e.raw("problem") {
        None => ProblemKind::DeterministicNLS,
        Some((line, v)) => v.parse().or_else(|_| cfg_err(line, format!("unknown problem '{v}'")))?,
    };
    let defaults = ProblemParams::defaults(problem);
    let (xl, xr) = problem.default_interval();
    let x_left: f64 = e.parse("x_left", xl)?;
    let x_right: f64 = e.parse("x_right", xr)?;
    if !(x_left.is_finite() && x_right.is_finite() && x_right > x_left) {
        return cfg_err(e.line("x_right").max(e.line("x_left")), "x_right must exceed x_left");
    }
    let grid_points: usize = e.parse("grid_points", if problem.uses_soliton() { 500 } else { 100 })?;
    if grid_points < 3 {
        return cfg_err(e.line("grid_points"), "grid_points must be at least 3");
    }
    let t_end: f64 = e.parse("t_end", 1.0)?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return cfg_err(e.line("t_end"), "t_end must be positive");
    }

    let n_steps = resolve_steps(&e, t_end)?;

    let epsilon: f64 = e.parse("epsilon", defaults.eps)?;
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return cfg_err(e.line("epsilon"), "epsilon must be non-negative");
    }
    if problem.is_deterministic() && epsilon != 0.0 {
        return cfg_err(e.line("epsilon"), format!("{problem} is deterministic; epsilon must be 0"));
    }
    let sigma: f64 = e.parse("sigma", defaults.sigma)?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return cfg_err(e.line("sigma"), "sigma must be positive");
    }
    let lambda: f64 = e.parse("lambda", defaults.lambda)?;
    let psi: f64 = e.parse("psi", defaults.psi)?;
    for (key, v) in [("lambda", lambda), ("psi", psi)] {
        if !v.is_finite() {
            return cfg_err(e.line(key), format!("{key} must be finite"));
        }
    }
    let potential = match e.raw("potential") {
        None => defaults.potential,
        Some((_, "zero")) => Potential::Zero,
        Some((_, "lattice")) => Potential::PerturbedLattice,
        Some((line, v)) => match v.parse::<f64>() {
            Ok(c) if c.is_finite() => Potential::Constant(c),
            _ => return cfg_err(line, format!("potential must be zero, lattice or a number, got '{v}'")),
        },
    };

    let scheme = parse_scheme(&e, "scheme", "sweeps", Scheme::Strang, ProblemParams::default_omega(lambda))?;
    if epsilon > 0.0 && !scheme.scheme.supports_noise() {
        return cfg_err(e.line("scheme"), format!("{} cannot be used with epsilon > 0", scheme.scheme));
    }

    let seed: u64 = e.parse("seed", 0)?;
    let ensemble: usize = e.parse("ensemble", 1)?;
    if ensemble == 0 {
        return cfg_err(e.line("ensemble"), "ensemble must be at least 1");
    }
    let refinement: usize = e.parse("refinement", 8)?;
    if refinement == 0 {
        return cfg_err(e.line("refinement"), "refinement must be at least 1");
    }

    let reference = resolve_reference(&e, problem, scheme.scheme, epsilon, sigma, lambda, psi, &potential)?;
    let output = PathBuf::from(e.raw("output").map_or("results", |(_, v)| v));
    let defect = e.parse_bool("defect", false)?;
    let svg = e.parse_bool("svg", false)?;

    let config = RunConfig {
        problem,
        x_left,
        x_right,
        grid_points,
        t_end,
        n_steps,
        scheme,
        epsilon,
        sigma,
        lambda,
        psi,
        potential,
        seed,
        ensemble,
        refinement,
        reference,
        output,
        defect,
        svg,
    };
    if let Err(err) = config.build_problem() {
        return cfg_err(0, err.to_string());
    }
    Ok(config)
}

fn resolve_steps(e: &Entries, t_end: f64) -> Result<Vec<usize>> {
    let steps: Vec<usize> = match (e.parse_list::<usize>("n_steps")?, e.parse_list::<f64>("dt")?) {
        (Some(_), Some(_)) => return cfg_err(e.line("dt"), "give either n_steps or dt, not both"),
        (Some(n), None) => n,
        (None, Some(dts)) => {
            let line = e.line("dt");
            let mut out = Vec::with_capacity(dts.len());
            for dt in dts {
                if !(dt > 0.0 && dt.is_finite()) {
                    return cfg_err(line, format!("dt must be positive, got {dt}"));
                }
                let n = (t_end / dt).round();
                if n < 1.0 || (n * dt - t_end).abs() > 1e-9 * t_end {
                    return cfg_err(line, format!("dt = {dt} does not divide t_end = {t_end}"));
                }
                out.push(n as usize);
            }
            out
        }
        (None, None) => vec![250, 500, 1000],
    };
    let line = e.line("n_steps").max(e.line("dt"));
    if steps.contains(&0) {
        return cfg_err(line, "step counts must be positive");
    }
    if steps.windows(2).any(|w| w[1] <= w[0]) {
        return cfg_err(line, "step counts must increase strictly (time steps must decrease)");
    }
    let finest = *steps.last().expect("non-empty");
    if let Some(n) = steps.iter().find(|n| !finest.is_multiple_of(**n)) {
        return cfg_err(line, format!("{n} steps do not divide the finest level of {finest} steps"));
    }
    Ok(steps)
}

fn parse_scheme(
    e: &Entries,
    scheme_key: &str,
    sweeps_key: &str,
    default: Scheme,
    default_omega: f64,
) -> Result<SchemeSpec> {
    let scheme = match e.raw(scheme_key) {
        None => default,
        Some((line, v)) => v.parse().or_else(|_| cfg_err(line, format!("unknown scheme '{v}'")))?,
    };
    let sweeps: usize = e.parse(sweeps_key, if scheme == Scheme::WeightedIter2 { 1 } else { 2 })?;
    if sweeps == 0 {
        return cfg_err(e.line(sweeps_key), "sweeps must be at least 1");
    }
    let omega: f64 = e.parse("omega", default_omega)?;
    if !(0.0..=1.0).contains(&omega) {
        return cfg_err(e.line("omega"), "omega must lie in [0, 1]");
    }
    let correction_order: usize = e.parse("correction_order", 3)?;
    if !(1..=3).contains(&correction_order) {
        return cfg_err(e.line("correction_order"), "correction_order must be 1, 2 or 3");
    }
    let spec = match scheme {
        Scheme::Lie => SchemeSpec::lie(),
        Scheme::Strang => SchemeSpec::strang(),
        Scheme::IterativeStochastic => SchemeSpec::iterative(sweeps),
        Scheme::WeightedIter1 => SchemeSpec::weighted1(omega, correction_order),
        Scheme::WeightedIter2 => SchemeSpec::weighted2(omega, sweeps),
    };
    Ok(spec)
}

#[allow(clippy::too_many_arguments)]
fn resolve_reference(
    e: &Entries,
    problem: ProblemKind,
    scheme: Scheme,
    epsilon: f64,
    sigma: f64,
    lambda: f64,
    psi: f64,
    potential: &Potential,
) -> Result<ReferenceSpec> {
    let exact_available = problem == ProblemKind::DeterministicNLS
        && epsilon == 0.0
        && sigma == 1.0
        && lambda == 2.0
        && psi == 2.0
        && matches!(potential, Potential::Zero);
    // Lie and Strang carry the damped noise factor, the iterative scheme the
    // undamped Stratonovich flow, so a stochastic reference must match the family.
    let fine_default = match scheme {
        Scheme::IterativeStochastic if epsilon > 0.0 => Scheme::IterativeStochastic,
        _ => Scheme::Strang,
    };
    let factor: usize = e.parse("reference_factor", 8)?;
    if factor == 0 {
        return cfg_err(e.line("reference_factor"), "reference_factor must be at least 1");
    }
    let fine = || -> Result<ReferenceSpec> {
        let scheme = parse_scheme(e, "reference_scheme", "reference_sweeps", fine_default, 0.5)?;
        if epsilon > 0.0 && !scheme.scheme.supports_noise() {
            return cfg_err(e.line("reference_scheme"), format!("{} cannot be a stochastic reference", scheme.scheme));
        }
        Ok(ReferenceSpec::Fine { scheme, factor })
    };
    match e.raw("reference") {
        None | Some((_, "auto")) => {
            if exact_available {
                Ok(ReferenceSpec::Exact)
            } else {
                fine()
            }
        }
        Some((line, "exact")) => {
            if exact_available {
                Ok(ReferenceSpec::Exact)
            } else {
                cfg_err(line, "no exact solution for this problem; use reference = fine")
            }
        }
        Some((_, "fine")) => fine(),
        Some((line, v)) => cfg_err(line, format!("reference must be auto, exact or fine, got '{v}'")),
    }
}

// Keep the check available to tests and callers that assemble configs by hand.
impl RunConfig {
    /// Re-validates a hand-built config.
    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        let problem = self.build_problem()?;
        if self.n_steps.is_empty() || self.n_steps.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Parameter("step counts must increase strictly".into()));
        }
        if self.ensemble == 0 || self.refinement == 0 {
            return Err(Error::Parameter("ensemble and refinement must be at least 1".into()));
        }
        if matches!(self.reference, ReferenceSpec::Exact) && problem.exact_solution(0.0).is_none() {
            return Err(Error::Parameter("no exact solution for this problem".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_soliton_defaults() {
        let c = parse_config("").unwrap();
        assert_eq!(c.problem, ProblemKind::DeterministicNLS);
        assert_eq!((c.x_left, c.x_right, c.grid_points), (0.0, 50.0, 500));
        assert_eq!(c.scheme.scheme, Scheme::Strang);
        assert_eq!(c.reference, ReferenceSpec::Exact);
        assert_eq!(c.n_steps, vec![250, 500, 1000]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_config("# comment\n\nepsilon = -1\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 3, .. }), "{err}");
        let err = parse_config("scheme = strang\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }), "{err}");
        let err = parse_config("seed = 1\nseed = 2\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }), "{err}");
        let err = parse_config("grid_points = many\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 1, .. }), "{err}");
        let err = parse_config("just text\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 1, .. }), "{err}");
    }

    #[test]
    fn dt_list_becomes_step_counts() {
        let c = parse_config("scheme = strang\ndt = 4e-3, 2e-3, 1e-3\n").unwrap();
        assert_eq!(c.n_steps, vec![250, 500, 1000]);
        assert!(parse_config("dt = 1e-3, 2e-3\n").is_err());
        assert!(parse_config("dt = 0.3\n").is_err());
        assert!(parse_config("n_steps = 10\ndt = 0.1\n").is_err());
        assert!(parse_config("n_steps = 3, 4\n").is_err());
    }

    #[test]
    fn stochastic_defaults() {
        let c = parse_config("problem = stochastic_nls\nscheme = iterative\n").unwrap();
        assert_eq!(c.epsilon, 0.1);
        assert!(matches!(
            c.reference,
            ReferenceSpec::Fine {
                scheme: SchemeSpec { scheme: Scheme::IterativeStochastic, sweeps: 2, .. },
                factor: 8
            }
        ));
        assert!(parse_config("problem = stochastic_nls\nscheme = weighted1\n").is_err());
        assert!(parse_config("problem = stochastic_nls\nreference = exact\n").is_err());
    }

    #[test]
    fn potential_values() {
        let c = parse_config("problem = linearized_stochastic\npotential = 2.5\n").unwrap();
        assert!(matches!(c.potential, Potential::Constant(v) if v == 2.5));
        assert!(parse_config("potential = wavy\n").is_err());
    }

    #[test]
    fn default_config_validates() {
        RunConfig::default().validate().unwrap();
    }
}
