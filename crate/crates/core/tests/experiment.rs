use std::fs;
use std::process::Command;

use nls_splitting::experiment::*;
use nls_splitting::prelude::*;

fn cfg(text: &str) -> RunConfig {
    parse_config(text).unwrap()
}

fn summary(result: &RunResult, scheme: Scheme) -> &ResultRow {
    result.rows.iter().find(|r| r.path_id.is_none() && r.scheme == scheme).unwrap()
}

#[test]
fn empty_config_gives_soliton_defaults() {
    let c = cfg("");
    assert_eq!(c.problem, ProblemKind::DeterministicNLS);
    assert_eq!((c.x_left, c.x_right, c.grid_points), (0.0, 50.0, 500));
    assert_eq!(c.reference, ReferenceSpec::Exact);
    assert_eq!(c.epsilon, 0.0);
}

#[test]
fn negative_epsilon_is_rejected_with_its_line() {
    let err = parse_config("problem = stochastic_nls\n\nepsilon = -1\n").unwrap_err();
    match err {
        Error::Config { line, .. } => assert_eq!(line, 3),
        other => panic!("unexpected error {other}"),
    }
}

#[test]
fn unknown_and_malformed_keys_are_rejected() {
    assert!(matches!(parse_config("colour = red"), Err(Error::Config { line: 1, .. })));
    assert!(matches!(parse_config("t_end = soon"), Err(Error::Config { line: 1, .. })));
    assert!(matches!(parse_config("n_steps = 10, 5"), Err(Error::Config { .. })));
}

#[test]
fn dt_list_defines_the_sweep() {
    let c = cfg("scheme = strang\nt_end = 1\ndt = 0.1, 0.05, 0.025\n");
    assert_eq!(c.n_steps, vec![10, 20, 40]);
    assert_eq!(c.scheme, SchemeSpec::strang());
}

#[test]
fn strang_converges_at_second_order_against_the_soliton() {
    let c = cfg("grid_points = 2000\nt_end = 1\nn_steps = 5, 10, 20\nscheme = strang\n");
    let result = run_experiment(&c, Study::Converge).unwrap();
    let order = summary(&result, Scheme::Strang).order_fit.unwrap();
    assert!((order - 2.0).abs() <= 0.3, "order {order}");
    assert_eq!(result.rows.len(), 4);
}

#[test]
fn iterative_is_at_least_as_accurate_as_sequential_splitting() {
    let c = cfg("t_end = 1\nn_steps = 10, 20\nscheme = iterative\nsweeps = 2\n");
    let result = run_experiment(&c, Study::Soliton).unwrap();
    for dt in [0.1, 0.05] {
        let err = |s: Scheme| {
            result.rows.iter().find(|r| r.scheme == s && r.dt == Some(dt)).and_then(|r| r.l2_error).unwrap()
        };
        assert!(err(Scheme::IterativeStochastic) <= err(Scheme::Lie), "dt {dt}");
    }
}

#[test]
fn deterministic_runs_write_identical_files() {
    let c = cfg("grid_points = 100\nt_end = 0.2\nn_steps = 10, 20\nsvg = true\n");
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [a.path(), b.path()] {
        let r = run_experiment(&c, Study::Converge).unwrap();
        write_outputs(&r, dir).unwrap();
    }
    for name in ["results.csv", "convergence.svg", "snapshot.svg"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn ensemble_mean_does_not_depend_on_thread_count() {
    let c = cfg(
        "problem = stochastic_nls\ngrid_points = 64\nt_end = 0.1\nn_steps = 4, 8\nscheme = iterative\nensemble = 12\nreference_factor = 2\nrefinement = 2\n",
    );
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_experiment(&c, Study::Converge).unwrap())
    };
    let (one, many) = (run(1), run(5));
    assert_eq!(one.rows, many.rows);
    let s = summary(&one, Scheme::IterativeStochastic);
    assert!(s.mean_error.unwrap() > 0.0);
}

#[test]
fn empty_result_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let files = write_outputs(&RunResult::default(), dir.path()).unwrap();
    assert_eq!(files.len(), 1);
    assert_eq!(fs::read_to_string(&files[0]).unwrap(), format!("{RESULTS_HEADER}\n"));
}

#[test]
fn three_levels_give_three_rows_and_a_summary() {
    let c = cfg("grid_points = 100\nt_end = 0.1\nn_steps = 5, 10, 20\nscheme = lie\n");
    let r = run_experiment(&c, Study::Converge).unwrap();
    let mut buf = Vec::new();
    write_results_csv(&r.rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], RESULTS_HEADER);
    assert_eq!(lines.len(), 5);
    assert_eq!(r.rows.iter().filter(|r| r.path_id.is_some()).count(), 3);
    let s = summary(&r, Scheme::Lie);
    assert!(s.dt.is_none() && s.order_fit.is_some());
    for line in &lines {
        assert_eq!(line.split(',').count(), 13);
    }
}

#[test]
fn svg_output_is_well_formed_xml() {
    let c = cfg("grid_points = 100\nt_end = 0.1\nn_steps = 5, 10\nsvg = true\n");
    let r = run_experiment(&c, Study::Soliton).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let files = write_outputs(&r, dir.path()).unwrap();
    let svgs: Vec<_> = files.iter().filter(|f| f.extension().is_some_and(|e| e == "svg")).collect();
    assert_eq!(svgs.len(), 2);
    for f in svgs {
        let text = fs::read_to_string(f).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        assert_eq!(doc.root_element().tag_name().name(), "svg");
        assert!(doc.descendants().any(|n| n.has_tag_name("polyline") || n.has_tag_name("path")));
    }
}

#[test]
fn defect_study_reports_budget_and_slope() {
    let c = cfg(
        "problem = linearized_stochastic\ngrid_points = 8\nt_end = 0.04\nn_steps = 1, 2, 4, 8\nscheme = iterative\nsweeps = 2\nensemble = 8\nrefinement = 4\n",
    );
    let r = run_experiment(&c, Study::Defect).unwrap();
    let levels: Vec<_> = r.defect_rows.iter().filter(|d| d.dt.is_some()).collect();
    assert_eq!(levels.len(), 4);
    assert!(levels.iter().all(|d| d.budget.is_some() && d.median_defect.unwrap() > 0.0));
    let slope = r.defect_rows.iter().find(|d| d.dt.is_none()).unwrap().slope.unwrap();
    assert!(slope > 1.0, "slope {slope}");
    let dir = tempfile::tempdir().unwrap();
    let files = write_outputs(&r, dir.path()).unwrap();
    let defect = fs::read_to_string(dir.path().join("defect.csv")).unwrap();
    assert!(files.iter().any(|f| f.ends_with("defect.csv")));
    assert_eq!(defect.lines().next().unwrap(), DEFECT_HEADER);
}

#[test]
fn unwritable_output_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    assert!(write_outputs(&RunResult::default(), &blocker.join("sub")).is_err());
}

#[test]
fn cli_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_nls-splitting");
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    fs::write(&config, "grid_points = 50\nt_end = 0.1\nn_steps = 5, 10\n").unwrap();
    let out = dir.path().join("out");
    let ok = Command::new(bin)
        .args(["converge", "--quiet", "--seed", "3", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(ok.status.success());
    assert!(ok.stdout.is_empty());
    assert!(out.join("results.csv").exists());

    fs::write(&config, "epsilon = -1\n").unwrap();
    let bad = Command::new(bin).arg("run").arg("--config").arg(&config).output().unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 1"));

    let missing =
        Command::new(bin).args(["run", "--quiet", "--config"]).arg(dir.path().join("missing.cfg")).output().unwrap();
    assert!(!missing.status.success());

    let blocker = dir.path().join("blocker");
    fs::write(&blocker, "x").unwrap();
    fs::write(&config, "grid_points = 50\nt_end = 0.1\nn_steps = 5\n").unwrap();
    let unwritable =
        Command::new(bin).arg("run").arg("--config").arg(&config).arg("--out").arg(blocker.join("x")).output().unwrap();
    assert!(!unwritable.status.success());
}
