//! Driver for the `bits-bench` command: script replay, three-way
//! comparison, differential fuzzing and bound sweeps over the trees in
//! [`bitstree`]. Every report is a stream of JSON objects, one per line.

pub mod bounds;
pub mod compare;
pub mod fuzz;
pub mod input;
pub mod report;
pub mod run;
pub mod workload;
