//! Every example under examples/ runs to completion.

mod exact_nullspace {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/exact_nullspace.rs"));
}

mod extreme_points {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/extreme_points.rs"));
}

mod basis_pursuit {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/basis_pursuit.rs"));
}

mod recovery_rate {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/recovery_rate.rs"));
}

mod graph_cycles {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/graph_cycles.rs"));
}

mod random_graphs {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/random_graphs.rs"));
}

mod dft_masc {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/dft_masc.rs"));
}

mod experiment_plot {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/experiment_plot.rs"));
}

#[test]
fn exact_nullspace_runs() {
    exact_nullspace::run_example().expect("example runs");
}

#[test]
fn extreme_points_runs() {
    extreme_points::run_example().expect("example runs");
}

#[test]
fn basis_pursuit_runs() {
    basis_pursuit::run_example().expect("example runs");
}

#[test]
fn recovery_rate_runs() {
    recovery_rate::run_example().expect("example runs");
}

#[test]
fn graph_cycles_runs() {
    graph_cycles::run_example().expect("example runs");
}

#[test]
fn random_graphs_runs() {
    random_graphs::run_example().expect("example runs");
}

#[test]
fn dft_masc_runs() {
    dft_masc::run_example().expect("example runs");
}

#[test]
fn experiment_plot_runs() {
    experiment_plot::run_example().expect("example runs");
}
