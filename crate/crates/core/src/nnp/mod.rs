//! The projection network: architecture, training with early stopping,
//! inference, fine-tuning, and model files.

pub mod adam;
pub mod backward;
pub mod io;
pub mod loss;
pub mod model;
pub mod train;

pub use adam::{adam_step, AdamParams, AdamState};
pub use backward::{backward, Gradients};
pub use io::{load_model, model_from_bytes, model_to_bytes, save_model};
pub use loss::{loss, loss_gradient, LossKind};
pub use model::{init_network, ModelMeta, NetworkModel, HIDDEN_DIMS, INIT_BIAS, OUTPUT_DIM};
pub use train::{fine_tune, infer, train, StopReason, TrainConfig, TrainReport};
