//! The runner end to end: files written, schema kept, failures surfaced.

use std::fs;
use std::path::Path;

use urn_cli::config::parse_config;
use urn_cli::experiment::run_experiment;

fn spec_with_out_dir(text: &str, out_dir: &Path) -> urn_cli::config::ExperimentSpec {
    let mut spec = parse_config(text).unwrap();
    spec.output_dir = out_dir.to_path_buf();
    spec
}

const SMALL_EXPERIMENT: &str = "\
name = small
strategy = follow_crowd
epsilon = 1
n_agents = 100
n_days = 400
seed = 9

[histogram]
target = fixed_points
binning = linear
lo = 0
hi = 1
bins = 20

[histogram]
target = ratios_a
binning = log
lo = 1
hi = 100
bins = 10
";

#[test]
fn writes_meta_and_one_csv_per_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_with_out_dir(SMALL_EXPERIMENT, dir.path());
    let report = run_experiment(&spec).unwrap();

    let names: Vec<String> = report
        .files
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(
        names,
        vec!["small.meta.csv", "small.fixed_points.csv", "small.ratios_a.csv"]
    );

    let meta = fs::read_to_string(&report.files[0]).unwrap();
    assert!(meta.starts_with("key,value\n"));
    assert!(meta.contains("strategy,follow_crowd"));
    assert!(meta.contains("seed,9"));

    let hist = fs::read_to_string(&report.files[1]).unwrap();
    let mut lines = hist.lines();
    assert_eq!(lines.next(), Some("bin_lo,bin_hi,count,density"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 20);

    // Counts are consistent with the ensemble the report carries.
    let total: u64 = rows
        .iter()
        .map(|row| row.split(',').nth(2).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 400);
}

#[test]
fn fit_sidecar_has_the_fixed_schema() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL_EXPERIMENT.replace("bins = 10\n", "bins = 10\nfit_min = 1\nfit_max = 50\n");
    let spec = spec_with_out_dir(&text, dir.path());
    let report = run_experiment(&spec).unwrap();

    let fit_path = report
        .files
        .iter()
        .find(|p| p.to_string_lossy().ends_with("ratios_a.fit.csv"))
        .expect("fit sidecar written");
    let fit = fs::read_to_string(fit_path).unwrap();
    let mut lines = fit.lines();
    assert_eq!(
        lines.next(),
        Some("slope,stderr,intercept,n_points,z_min,z_max")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 6);
    let slope: f64 = row[0].parse().unwrap();
    assert!(slope < 0.0, "ratio tail must decay, got slope {slope}");
    assert_eq!(lines.next(), None);
}

#[test]
fn rerendering_parsed_output_is_byte_identical() {
    // Serialize -> parse -> serialize is the identity on the rendered bytes;
    // 12 significant digits pin every float the files contain.
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_with_out_dir(SMALL_EXPERIMENT, dir.path());
    let report = run_experiment(&spec).unwrap();

    let hist = fs::read_to_string(&report.files[1]).unwrap();
    let mut rerendered = String::from("bin_lo,bin_hi,count,density\n");
    for row in hist.lines().skip(1) {
        let cells: Vec<&str> = row.split(',').collect();
        let lo: f64 = cells[0].parse().unwrap();
        let hi: f64 = cells[1].parse().unwrap();
        let count: u64 = cells[2].parse().unwrap();
        let density: f64 = cells[3].parse().unwrap();
        rerendered.push_str(&format!("{lo:.11e},{hi:.11e},{count},{density:.11e}\n"));
    }
    assert_eq!(hist, rerendered);
}

#[test]
fn unwritable_output_directory_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("blocker");
    fs::write(&blocker, "a file, not a directory").unwrap();
    let spec = spec_with_out_dir(SMALL_EXPERIMENT, &blocker.join("sub"));
    let err = run_experiment(&spec).unwrap_err();
    assert!(err.to_string().contains("output directory"));
}

#[test]
fn shipped_experiment_files_all_validate() {
    let specs_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs");
    let mut count = 0;
    for entry in fs::read_dir(&specs_dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cfg") {
            let text = fs::read_to_string(&path).unwrap();
            parse_config(&text)
                .unwrap_or_else(|e| panic!("{} does not parse: {e}", path.display()));
            count += 1;
        }
    }
    assert_eq!(count, 12, "six figure files and six desk variants");
}
