//! Library side of the `garoute` CLI: run specification, the
//! grade → enumerate → evolve → select pipeline, report rendering, and the
//! seed-sweep harness. The binary in `main.rs` is a thin argument shell.

pub mod render;
pub mod run;
pub mod sweep;

pub use run::{run_route, OutputFormat, RouteOutcome, RunSpec, TopologySource};
pub use sweep::{run_sweep, SweepParams, SweepRow, SweepSummary};

/// Process exit codes: distinct failure classes for scripting.
pub mod exit_codes {
    /// A route was found and reported.
    pub const ROUTE_FOUND: i32 = 0;
    /// Usage, parse, or input validation failure.
    pub const INPUT_ERROR: i32 = 1;
    /// The engine ran but no feasible route exists.
    pub const NO_ROUTE: i32 = 2;
}
