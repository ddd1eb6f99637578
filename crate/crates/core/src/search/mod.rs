pub mod grid;
pub mod persist;
pub mod pipeline;

pub use grid::{
    apply_axis, default_grid, enumerate_grid, run_grid, run_grid_spec, select_best, train_best, GridEntry, GridError,
    GridResult, GridSpec,
};
pub use persist::{load_model, read_model, save_model, write_model, PersistError, FORMAT_VERSION, MAGIC};
pub use pipeline::{
    config_hash, ModelArtifact, ModelKind, ModelSpec, PipelineConfig, PipelineError, TrainedPipeline, DEFAULT_SEED,
};
