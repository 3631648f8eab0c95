//! Quantities derived from an entropy: temperature, concavity, the path
//! integral of `dS`, and witnesses of irreversible change.

mod path;
mod temperature;
mod witness;

pub use path::{path_delta_s, write_loop_csv, LoopReport, PathSpec};
pub use temperature::{
    concavity_check, convex_combination, temperature, write_temperature_csv, ConcavityReport,
    TemperatureRow, DEFAULT_RELATIVE_DU,
};
pub use witness::{irreversibility_witness, SearchBox};
