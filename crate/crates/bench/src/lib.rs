//! Criterion benchmark harness for the solver and metric kernels; see
//! `benches/solvers.rs`. The reproducible complexity study with slope
//! fitting lives in `permsep-core::timing` and the `permsep bench`
//! subcommand — this crate is for interactive profiling while developing.
