// Run a config-driven experiment in memory and render its default plot.

use masckit::experiment::{run_experiment, ExperimentConfig, RunOptions};
use masckit::plot::{render_svg, PlotSpec};

pub fn run_example() -> masckit::Result<()> {
    let cfg = ExperimentConfig::from_json(
        r#"{"kind": "fig7-mrsl-small", "parameters": {"n": 31, "mbars": [5, 8, 11], "samples": 100, "naive_k": 50, "seed": 3}}"#,
    )?;
    let out = run_experiment(&cfg, &RunOptions::default())?;
    print!("{}", out.csv);
    eprintln!("{}", out.summary);

    let svg = render_svg(&out.csv, &PlotSpec::default_for(out.kind))?;
    let path = std::env::temp_dir().join("masckit_example_fig7.svg");
    std::fs::write(&path, svg)?;
    println!("plot written to {}", path.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> masckit::Result<()> {
    run_example()
}
