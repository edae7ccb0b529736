//! The projection network: a fixed 256-512-256 fully-connected trunk with a
//! sigmoid 2D head.

use crate::data::Normalizer;
use crate::error::{Error, Result};
use crate::numerics::{Matrix, Rng};
use serde::{Deserialize, Serialize};

/// Hidden layer widths, input and output excluded.
pub const HIDDEN_DIMS: [usize; 3] = [256, 512, 256];

/// Output dimensionality (2D projections).
pub const OUTPUT_DIM: usize = 2;

/// Constant initial bias.
pub const INIT_BIAS: f64 = 0.0001;

/// Provenance recorded inside a saved model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelMeta {
    /// Name of the mimicked projection technique.
    pub projection: String,
    /// Seed the training run was started with.
    pub seed: u64,
    /// Total epochs of training this model has received.
    pub epochs: u64,
    /// True when the model was refined from a previously trained one.
    pub fine_tuned: bool,
}

impl Default for ModelMeta {
    fn default() -> Self {
        Self {
            projection: "untrained".into(),
            seed: 0,
            epochs: 0,
            fine_tuned: false,
        }
    }
}

/// A feed-forward projection network plus the normalizers that tie it to its
/// training data. Hidden activations are ReLU; the 2-unit head is sigmoid,
/// so outputs live strictly inside (0, 1)^2.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    /// `[n_input, 256, 512, 256, 2]`.
    pub layer_dims: Vec<usize>,
    /// Per layer, `dims[i] x dims[i+1]`.
    pub weights: Vec<Matrix>,
    pub biases: Vec<Vec<f64>>,
    /// Maps raw inputs to the [0, 1] range the network was trained on.
    pub input_norm: Normalizer,
    /// Maps the (0, 1)^2 network output back to projection coordinates.
    pub target_norm: Normalizer,
    pub meta: ModelMeta,
}

/// Build a network with He-uniform weights (each weight uniform in
/// [-L, L] with `L = sqrt(6 / fan_in)`) and every bias equal to 0.0001.
/// The same seed always produces bit-identical parameters.
pub fn init_network(n_input: usize, seed: u64) -> Result<NetworkModel> {
    if n_input == 0 {
        return Err(Error::Param("network needs at least 1 input".into()));
    }
    let mut layer_dims = vec![n_input];
    layer_dims.extend_from_slice(&HIDDEN_DIMS);
    layer_dims.push(OUTPUT_DIM);

    let mut rng = Rng::new(seed);
    let mut weights = Vec::with_capacity(layer_dims.len() - 1);
    let mut biases = Vec::with_capacity(layer_dims.len() - 1);
    for pair in layer_dims.windows(2) {
        let (fan_in, fan_out) = (pair[0], pair[1]);
        let limit = (6.0 / fan_in as f64).sqrt();
        let data: Vec<f64> = (0..fan_in * fan_out)
            .map(|_| rng.range_f64(-limit, limit))
            .collect();
        weights.push(Matrix::from_vec(fan_in, fan_out, data)?);
        biases.push(vec![INIT_BIAS; fan_out]);
    }

    // Identity normalizers until a training pipeline fits real ones.
    let unit = |cols: usize| Normalizer {
        mins: vec![0.0; cols],
        maxs: vec![1.0; cols],
    };
    Ok(NetworkModel {
        input_norm: unit(n_input),
        target_norm: unit(OUTPUT_DIM),
        layer_dims,
        weights,
        biases,
        meta: ModelMeta::default(),
    })
}

impl NetworkModel {
    pub fn n_input(&self) -> usize {
        self.layer_dims[0]
    }

    pub fn n_layers(&self) -> usize {
        self.weights.len()
    }

    pub fn check_input(&self, x: &Matrix) -> Result<()> {
        if x.cols() != self.n_input() {
            return Err(Error::Shape(format!(
                "model expects {} input features, batch has {}",
                self.n_input(),
                x.cols()
            )));
        }
        Ok(())
    }

    /// Forward pass on a normalized batch, returning coordinates in (0,1)^2.
    pub fn forward(&self, x: &Matrix) -> Result<Matrix> {
        Ok(self.forward_cached(x)?.pop().unwrap())
    }

    /// Forward pass keeping every layer's activation (input included, as the
    /// first entry) for backpropagation.
    pub fn forward_cached(&self, x: &Matrix) -> Result<Vec<Matrix>> {
        self.check_input(x)?;
        let last = self.n_layers() - 1;
        let mut activations = Vec::with_capacity(self.n_layers() + 1);
        activations.push(x.clone());
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let mut z = activations.last().unwrap().matmul(w)?;
            for i in 0..z.rows() {
                let row = z.row_mut(i);
                for (v, &bias) in row.iter_mut().zip(b) {
                    *v += bias;
                    *v = if l == last { sigmoid(*v) } else { v.max(0.0) };
                }
            }
            activations.push(z);
        }
        Ok(activations)
    }

    /// Upper bound on the network's Lipschitz constant: the product of the
    /// layers' Frobenius norms (each bounds the spectral norm) times the
    /// sigmoid's maximum slope of 1/4. Output movement for an input
    /// perturbation `dx` is at most `bound * ||dx||`.
    pub fn lipschitz_upper_bound(&self) -> f64 {
        0.25 * self
            .weights
            .iter()
            .map(|w| w.frobenius_norm())
            .product::<f64>()
    }

    /// Total parameter count (weights plus biases).
    pub fn n_params(&self) -> usize {
        self.weights
            .iter()
            .map(|w| w.rows() * w.cols())
            .sum::<usize>()
            + self.biases.iter().map(|b| b.len()).sum::<usize>()
    }

    pub fn all_finite(&self) -> bool {
        self.weights.iter().all(|w| w.all_finite())
            && self
                .biases
                .iter()
                .all(|b| b.iter().all(|v| v.is_finite()))
    }
}

/// Numerically stable sigmoid, clamped so results stay strictly inside
/// (0, 1) even for extreme pre-activations.
#[inline]
pub fn sigmoid(z: f64) -> f64 {
    let s = if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    };
    s.clamp(f64::EPSILON, 1.0 - f64::EPSILON)
}
