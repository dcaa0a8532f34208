//! From-scratch multilayer perceptron: topology, seeded initialization,
//! forward propagation, and exact backpropagation gradients.
//!
//! Networks are small (tens of nodes), so layers store dense row-major
//! weight matrices and the per-sample hot path reuses caller-owned buffers
//! ([`Activations`], [`Gradients`]) instead of allocating.
//!
//! The output layer is always sigmoid: targets live in `[0.1, 0.9]` and the
//! output must stay inside `(0, 1)`. Hidden layers choose sigmoid or tanh.

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-layer nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransferFunction {
    /// Logistic `1 / (1 + e^(-x))`, codomain (0, 1).
    Sigmoid,
    /// Hyperbolic tangent, codomain (-1, 1).
    Tangent,
}

impl TransferFunction {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            // Branch on sign so large |x| never evaluates exp overflow.
            TransferFunction::Sigmoid => {
                if x >= 0.0 {
                    1.0 / (1.0 + (-x).exp())
                } else {
                    let e = x.exp();
                    e / (1.0 + e)
                }
            }
            TransferFunction::Tangent => x.tanh(),
        }
    }

    /// Derivative expressed through the activation value `y = f(x)`.
    pub fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            TransferFunction::Sigmoid => y * (1.0 - y),
            TransferFunction::Tangent => 1.0 - y * y,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TransferFunction::Sigmoid => "sigmoid",
            TransferFunction::Tangent => "tangent",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sigmoid" => Ok(TransferFunction::Sigmoid),
            "tangent" | "tanh" => Ok(TransferFunction::Tangent),
            other => Err(Error::InvalidTopology(format!(
                "unknown transfer function {other:?} (expected sigmoid or tangent)"
            ))),
        }
    }
}

/// One hidden layer declaration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HiddenLayer {
    pub nodes: usize,
    pub transfer: TransferFunction,
}

/// Layer sizes and transfer functions of one network. At most two hidden
/// layers; the output transfer is fixed to sigmoid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkTopology {
    pub input_nodes: usize,
    pub hidden: Vec<HiddenLayer>,
    pub output_nodes: usize,
}

impl NetworkTopology {
    pub fn new(input_nodes: usize, hidden: Vec<HiddenLayer>, output_nodes: usize) -> Result<Self> {
        let topology = NetworkTopology {
            input_nodes,
            hidden,
            output_nodes,
        };
        topology.validate()?;
        Ok(topology)
    }

    /// Single uniform transfer across all hidden layers.
    pub fn uniform(
        input_nodes: usize,
        hidden_nodes: &[usize],
        transfer: TransferFunction,
        output_nodes: usize,
    ) -> Result<Self> {
        let hidden = hidden_nodes
            .iter()
            .map(|&nodes| HiddenLayer { nodes, transfer })
            .collect();
        Self::new(input_nodes, hidden, output_nodes)
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_nodes == 0 || self.output_nodes == 0 {
            return Err(Error::InvalidTopology(
                "input and output layers need at least one node".into(),
            ));
        }
        if self.hidden.is_empty() || self.hidden.len() > 2 {
            return Err(Error::InvalidTopology(format!(
                "at most two hidden layers (and at least one), got {}",
                self.hidden.len()
            )));
        }
        if self.hidden.iter().any(|h| h.nodes == 0) {
            return Err(Error::InvalidTopology("hidden layers need at least one node".into()));
        }
        Ok(())
    }

    /// `(in_dim, out_dim, transfer)` for every weight layer, input to output.
    pub fn layer_dims(&self) -> Vec<(usize, usize, TransferFunction)> {
        let mut dims = Vec::with_capacity(self.hidden.len() + 1);
        let mut prev = self.input_nodes;
        for h in &self.hidden {
            dims.push((prev, h.nodes, h.transfer));
            prev = h.nodes;
        }
        dims.push((prev, self.output_nodes, TransferFunction::Sigmoid));
        dims
    }

    /// Label like `10-13-1:sigmoid` (per-layer suffixes when transfers mix).
    pub fn label(&self) -> String {
        let sizes: Vec<String> = std::iter::once(self.input_nodes)
            .chain(self.hidden.iter().map(|h| h.nodes))
            .chain(std::iter::once(self.output_nodes))
            .map(|n| n.to_string())
            .collect();
        let first = self.hidden[0].transfer;
        if self.hidden.iter().all(|h| h.transfer == first) {
            format!("{}:{}", sizes.join("-"), first.name())
        } else {
            let transfers: Vec<&str> = self.hidden.iter().map(|h| h.transfer.name()).collect();
            format!("{}:{}", sizes.join("-"), transfers.join("/"))
        }
    }

    /// Parses the `I-H1[-H2]-O[:transfer]` grammar, e.g. `10-13-1:sigmoid`.
    /// The transfer applies to every hidden layer and defaults to sigmoid.
    pub fn parse(s: &str) -> Result<Self> {
        let (sizes_part, transfer_part) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let transfer = match transfer_part {
            Some(name) => TransferFunction::parse(name.trim())?,
            None => TransferFunction::Sigmoid,
        };
        let sizes: Vec<usize> = sizes_part
            .split('-')
            .map(|tok| {
                tok.trim().parse::<usize>().map_err(|_| {
                    Error::InvalidTopology(format!("bad layer size {tok:?} in {s:?}"))
                })
            })
            .collect::<Result<_>>()?;
        if sizes.len() < 3 {
            return Err(Error::InvalidTopology(format!(
                "{s:?} needs at least input-hidden-output sizes"
            )));
        }
        if sizes.len() > 4 {
            return Err(Error::InvalidTopology(format!(
                "{s:?} declares {} hidden layers; at most two hidden layers",
                sizes.len() - 2
            )));
        }
        let input = sizes[0];
        let output = *sizes.last().unwrap();
        NetworkTopology::uniform(input, &sizes[1..sizes.len() - 1], transfer, output)
    }
}

/// One dense layer: `out_dim x in_dim` row-major weights plus biases.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    in_dim: usize,
    out_dim: usize,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
    pub transfer: TransferFunction,
}

impl Layer {
    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// `output[j] = f(biases[j] + sum_i weights[j][i] * input[i])`
    fn forward_into(&self, input: &[f64], output: &mut Vec<f64>) {
        debug_assert_eq!(input.len(), self.in_dim);
        output.clear();
        for j in 0..self.out_dim {
            let row = &self.weights[j * self.in_dim..(j + 1) * self.in_dim];
            let z = self.biases[j]
                + row
                    .iter()
                    .zip(input)
                    .map(|(w, x)| w * x)
                    .sum::<f64>();
            output.push(self.transfer.apply(z));
        }
    }
}

/// Per-layer activation buffers for one forward pass.
#[derive(Debug, Clone)]
pub struct Activations {
    layers: Vec<Vec<f64>>,
}

impl Activations {
    /// The most recent network output.
    pub fn output(&self) -> &[f64] {
        self.layers.last().expect("network has at least one layer")
    }
}

/// Gradient buffers mirroring a network's weights and biases. `deltas`
/// holds d(error)/d(pre-activation) per layer during backpropagation.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub d_weights: Vec<Vec<f64>>,
    pub d_biases: Vec<Vec<f64>>,
    deltas: Vec<Vec<f64>>,
}

impl Gradients {
    /// Flattens gradients in parameter order (layer 0 weights row-major,
    /// layer 0 biases, layer 1 weights, ...). Matches [`Network::param`].
    pub fn flat(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (w, b) in self.d_weights.iter().zip(&self.d_biases) {
            out.extend_from_slice(w);
            out.extend_from_slice(b);
        }
        out
    }

    pub fn fill(&mut self, value: f64) {
        for w in &mut self.d_weights {
            w.fill(value);
        }
        for b in &mut self.d_biases {
            b.fill(value);
        }
    }
}

/// A multilayer perceptron with concrete weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    topology: NetworkTopology,
    layers: Vec<Layer>,
    init_seed: u64,
}

const INIT_WEIGHT_RANGE: (f64, f64) = (-0.5, 0.5);

impl Network {
    /// Seeded initialization: every weight and bias is drawn uniformly from
    /// `[-0.5, 0.5]` by ChaCha8, layer by layer (weights before biases), so
    /// identical `(topology, seed)` always yields identical networks.
    pub fn init(topology: NetworkTopology, seed: u64) -> Result<Self> {
        topology.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dist = Uniform::new_inclusive(INIT_WEIGHT_RANGE.0, INIT_WEIGHT_RANGE.1);
        let layers = topology
            .layer_dims()
            .into_iter()
            .map(|(in_dim, out_dim, transfer)| Layer {
                in_dim,
                out_dim,
                weights: (0..in_dim * out_dim).map(|_| dist.sample(&mut rng)).collect(),
                biases: (0..out_dim).map(|_| dist.sample(&mut rng)).collect(),
                transfer,
            })
            .collect();
        Ok(Network {
            topology,
            layers,
            init_seed: seed,
        })
    }

    /// Rebuilds a network from explicit layer parameters (model loading).
    pub fn from_parts(topology: NetworkTopology, layer_params: Vec<(Vec<f64>, Vec<f64>)>, init_seed: u64) -> Result<Self> {
        topology.validate()?;
        let dims = topology.layer_dims();
        if dims.len() != layer_params.len() {
            return Err(Error::InvalidModel(format!(
                "expected {} layers, got {}",
                dims.len(),
                layer_params.len()
            )));
        }
        let layers = dims
            .into_iter()
            .zip(layer_params)
            .map(|((in_dim, out_dim, transfer), (weights, biases))| {
                if weights.len() != in_dim * out_dim || biases.len() != out_dim {
                    return Err(Error::InvalidModel(format!(
                        "layer shape mismatch: expected {out_dim}x{in_dim} weights and {out_dim} biases, got {} and {}",
                        weights.len(),
                        biases.len()
                    )));
                }
                Ok(Layer {
                    in_dim,
                    out_dim,
                    weights,
                    biases,
                    transfer,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Network {
            topology,
            layers,
            init_seed,
        })
    }

    pub fn topology(&self) -> &NetworkTopology {
        &self.topology
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn init_seed(&self) -> u64 {
        self.init_seed
    }

    pub fn input_dim(&self) -> usize {
        self.topology.input_nodes
    }

    pub fn output_dim(&self) -> usize {
        self.topology.output_nodes
    }

    /// Allocates activation buffers for this network.
    pub fn activations(&self) -> Activations {
        Activations {
            layers: self.layers.iter().map(|l| Vec::with_capacity(l.out_dim)).collect(),
        }
    }

    /// Allocates zeroed gradient buffers for this network.
    pub fn gradients(&self) -> Gradients {
        Gradients {
            d_weights: self.layers.iter().map(|l| vec![0.0; l.weights.len()]).collect(),
            d_biases: self.layers.iter().map(|l| vec![0.0; l.biases.len()]).collect(),
            deltas: self.layers.iter().map(|l| vec![0.0; l.out_dim]).collect(),
        }
    }

    /// Forward pass into reusable buffers; returns the output slice.
    pub fn forward_into<'a>(&self, input: &[f64], acts: &'a mut Activations) -> &'a [f64] {
        assert_eq!(input.len(), self.input_dim(), "input length mismatch");
        assert_eq!(acts.layers.len(), self.layers.len(), "activations built for another network");
        for (idx, layer) in self.layers.iter().enumerate() {
            if idx == 0 {
                layer.forward_into(input, &mut acts.layers[0]);
            } else {
                let (prev, rest) = acts.layers.split_at_mut(idx);
                layer.forward_into(&prev[idx - 1], &mut rest[0]);
            }
        }
        acts.output()
    }

    /// Shape-checked forward pass.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        if input.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                actual: input.len(),
            });
        }
        let mut acts = self.activations();
        self.forward_into(input, &mut acts);
        Ok(acts.layers.pop().unwrap())
    }

    /// Forward pass of a single-output network.
    pub fn output_scalar(&self, input: &[f64]) -> Result<f64> {
        if self.output_dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                actual: self.output_dim(),
            });
        }
        Ok(self.forward(input)?[0])
    }

    /// Backpropagation for one sample. Overwrites `grads` with the exact
    /// gradient of the squared error `sum_k (output_k - target_k)^2` with
    /// respect to every weight and bias, and returns that squared error.
    ///
    /// Reverse chain rule with deltas on pre-activations:
    /// output layer `delta = 2 (y - t) * f'(z)`, inner layers
    /// `delta = (W_next^T delta_next) * f'(z)`, then
    /// `dW[j][i] = delta[j] * a_prev[i]` and `db[j] = delta[j]`.
    pub fn gradient_into(
        &self,
        input: &[f64],
        target: &[f64],
        acts: &mut Activations,
        grads: &mut Gradients,
    ) -> f64 {
        assert_eq!(target.len(), self.output_dim(), "target length mismatch");
        self.forward_into(input, acts);

        let last = self.layers.len() - 1;
        let output_transfer = self.layers[last].transfer;
        let mut squared_error = 0.0;
        for (j, (y, t)) in acts.layers[last].iter().zip(target).enumerate() {
            let err = y - t;
            squared_error += err * err;
            grads.deltas[last][j] = 2.0 * err * output_transfer.derivative_from_output(*y);
        }

        for idx in (0..self.layers.len()).rev() {
            let layer = &self.layers[idx];
            // Weight/bias gradients from this layer's delta.
            for j in 0..layer.out_dim {
                let delta = grads.deltas[idx][j];
                grads.d_biases[idx][j] = delta;
                let row = &mut grads.d_weights[idx][j * layer.in_dim..(j + 1) * layer.in_dim];
                if idx == 0 {
                    for (g, x) in row.iter_mut().zip(input) {
                        *g = delta * x;
                    }
                } else {
                    for (g, a) in row.iter_mut().zip(&acts.layers[idx - 1]) {
                        *g = delta * a;
                    }
                }
            }
            // Propagate delta to the previous layer.
            if idx > 0 {
                let (head, tail) = grads.deltas.split_at_mut(idx);
                let delta_here = &tail[0];
                let delta_prev = &mut head[idx - 1];
                for (i, dp) in delta_prev.iter_mut().enumerate() {
                    let upstream: f64 = (0..layer.out_dim)
                        .map(|j| layer.weights[j * layer.in_dim + i] * delta_here[j])
                        .sum();
                    let y = acts.layers[idx - 1][i];
                    *dp = upstream * self.layers[idx - 1].transfer.derivative_from_output(y);
                }
            }
        }
        squared_error
    }

    /// Shape-checked single-sample gradient.
    pub fn gradient(&self, input: &[f64], target: &[f64]) -> Result<Gradients> {
        if input.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                actual: input.len(),
            });
        }
        if target.len() != self.output_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.output_dim(),
                actual: target.len(),
            });
        }
        let mut acts = self.activations();
        let mut grads = self.gradients();
        self.gradient_into(input, target, &mut acts, &mut grads);
        Ok(grads)
    }

    /// Total number of trainable parameters.
    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.biases.len()).sum()
    }

    /// Reads parameter `i` in flat order (matches [`Gradients::flat`]).
    pub fn param(&self, mut i: usize) -> f64 {
        for layer in &self.layers {
            if i < layer.weights.len() {
                return layer.weights[i];
            }
            i -= layer.weights.len();
            if i < layer.biases.len() {
                return layer.biases[i];
            }
            i -= layer.biases.len();
        }
        panic!("parameter index out of range");
    }

    /// Writes parameter `i` in flat order.
    pub fn set_param(&mut self, mut i: usize, value: f64) {
        for layer in &mut self.layers {
            if i < layer.weights.len() {
                layer.weights[i] = value;
                return;
            }
            i -= layer.weights.len();
            if i < layer.biases.len() {
                layer.biases[i] = value;
                return;
            }
            i -= layer.biases.len();
        }
        panic!("parameter index out of range");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn topo(hidden: &[usize], transfer: TransferFunction) -> NetworkTopology {
        NetworkTopology::uniform(10, hidden, transfer, 1).unwrap()
    }

    #[test]
    fn init_is_deterministic_and_bounded() {
        let a = Network::init(topo(&[13], TransferFunction::Sigmoid), 42).unwrap();
        let b = Network::init(topo(&[13], TransferFunction::Sigmoid), 42).unwrap();
        assert_eq!(a, b);
        let c = Network::init(topo(&[13], TransferFunction::Sigmoid), 43).unwrap();
        assert_ne!(a, c);
        for layer in a.layers() {
            assert!(layer.weights.iter().chain(&layer.biases).all(|w| (-0.5..=0.5).contains(w)));
        }
    }

    #[test]
    fn shapes_for_one_hidden_layer() {
        let net = Network::init(topo(&[13], TransferFunction::Sigmoid), 1).unwrap();
        assert_eq!(net.layers().len(), 2);
        assert_eq!((net.layers()[0].out_dim(), net.layers()[0].in_dim()), (13, 10));
        assert_eq!((net.layers()[1].out_dim(), net.layers()[1].in_dim()), (1, 13));
        assert_eq!(net.layers()[0].biases.len(), 13);
        assert_eq!(net.layers()[1].biases.len(), 1);
    }

    #[test]
    fn shapes_for_two_hidden_layers() {
        let net = Network::init(topo(&[6, 4], TransferFunction::Tangent), 1).unwrap();
        assert_eq!(net.layers().len(), 3);
        assert_eq!((net.layers()[0].out_dim(), net.layers()[0].in_dim()), (6, 10));
        assert_eq!((net.layers()[1].out_dim(), net.layers()[1].in_dim()), (4, 6));
        assert_eq!((net.layers()[2].out_dim(), net.layers()[2].in_dim()), (1, 4));
    }

    #[test]
    fn zero_network_outputs_one_half() {
        let mut net = Network::init(topo(&[5], TransferFunction::Sigmoid), 0).unwrap();
        for layer in net.layers_mut() {
            layer.weights.fill(0.0);
            layer.biases.fill(0.0);
        }
        let out = net.output_scalar(&[0.3; 10]).unwrap();
        assert_eq!(out, 0.5);
    }

    #[test]
    fn tiny_sigmoid_composition() {
        let topology = NetworkTopology::uniform(1, &[1], TransferFunction::Sigmoid, 1).unwrap();
        let mut net = Network::init(topology, 0).unwrap();
        for layer in net.layers_mut() {
            layer.weights.fill(1.0);
            layer.biases.fill(0.0);
        }
        let out = net.output_scalar(&[1.0]).unwrap();
        assert_abs_diff_eq!(out, 0.6750375273768237, epsilon = 1e-12);
    }

    #[test]
    fn tangent_hidden_layer_at_zero_input() {
        let mut net = Network::init(topo(&[7], TransferFunction::Tangent), 3).unwrap();
        for layer in net.layers_mut() {
            layer.weights.fill(0.7);
            layer.biases.fill(0.0);
        }
        // tanh(0) = 0 in the hidden layer, so the output sees a zero affine map.
        let out = net.output_scalar(&[0.0; 10]).unwrap();
        assert_eq!(out, 0.5);
    }

    #[test]
    fn forward_rejects_wrong_input_length() {
        let net = Network::init(topo(&[5], TransferFunction::Sigmoid), 0).unwrap();
        assert!(matches!(
            net.forward(&[0.0; 9]),
            Err(Error::DimensionMismatch { expected: 10, actual: 9 })
        ));
    }

    #[test]
    fn gradient_is_zero_when_output_equals_target() {
        let net = Network::init(topo(&[4], TransferFunction::Sigmoid), 5).unwrap();
        let input = [0.2; 10];
        let out = net.output_scalar(&input).unwrap();
        let grads = net.gradient(&input, &[out]).unwrap();
        assert!(grads.flat().iter().all(|g| *g == 0.0));
    }

    /// Central finite differences over the squared error, the independent
    /// oracle for backpropagation.
    fn numeric_gradient(net: &Network, input: &[f64], target: &[f64], h: f64) -> Vec<f64> {
        let mut perturbed = net.clone();
        let mut acts = net.activations();
        let mut out = Vec::with_capacity(net.param_count());
        let error_of = |n: &Network, acts: &mut Activations| {
            let y = n.forward_into(input, acts);
            y.iter().zip(target).map(|(o, t)| (o - t) * (o - t)).sum::<f64>()
        };
        for i in 0..net.param_count() {
            let original = net.param(i);
            perturbed.set_param(i, original + h);
            let plus = error_of(&perturbed, &mut acts);
            perturbed.set_param(i, original - h);
            let minus = error_of(&perturbed, &mut acts);
            perturbed.set_param(i, original);
            out.push((plus - minus) / (2.0 * h));
        }
        out
    }

    fn check_gradient_against_oracle(hidden: &[usize], transfer: TransferFunction, seed: u64) {
        let net = Network::init(topo(hidden, transfer), seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let dist = Uniform::new(0.0, 1.0);
        let input: Vec<f64> = (0..10).map(|_| dist.sample(&mut rng)).collect();
        let target = vec![0.1 + 0.8 * dist.sample(&mut rng)];

        let analytic = net.gradient(&input, &target).unwrap().flat();
        let numeric = numeric_gradient(&net, &input, &target, 1e-6);
        for (i, (a, n)) in analytic.iter().zip(&numeric).enumerate() {
            let denom = a.abs().max(n.abs()).max(1e-8);
            let rel = (a - n).abs() / denom;
            assert!(rel < 1e-5, "param {i}: analytic {a} vs numeric {n} (rel {rel:.2e})");
        }
    }

    #[test]
    fn gradient_matches_finite_differences_one_layer_sigmoid() {
        check_gradient_against_oracle(&[13], TransferFunction::Sigmoid, 7);
    }

    #[test]
    fn gradient_matches_finite_differences_two_layer_tangent() {
        check_gradient_against_oracle(&[6, 4], TransferFunction::Tangent, 11);
    }

    #[test]
    fn topology_parse_round_trips() {
        let t = NetworkTopology::parse("10-13-1:sigmoid").unwrap();
        assert_eq!(t.hidden, vec![HiddenLayer { nodes: 13, transfer: TransferFunction::Sigmoid }]);
        assert_eq!(t.label(), "10-13-1:sigmoid");

        let t = NetworkTopology::parse("10-6-4-1:tangent").unwrap();
        assert_eq!(t.hidden.len(), 2);
        assert_eq!(t.label(), "10-6-4-1:tangent");

        // Default transfer is sigmoid.
        assert_eq!(NetworkTopology::parse("10-5-1").unwrap().label(), "10-5-1:sigmoid");
    }

    #[test]
    fn topology_parse_rejects_three_hidden_layers() {
        let err = NetworkTopology::parse("10-1-1-1-1").unwrap_err();
        assert!(err.to_string().contains("at most two hidden layers"), "{err}");
    }

    #[test]
    fn topology_parse_rejects_garbage() {
        assert!(NetworkTopology::parse("10-x-1").is_err());
        assert!(NetworkTopology::parse("10-1").is_err());
        assert!(NetworkTopology::parse("10-5-1:elu").is_err());
        assert!(NetworkTopology::parse("10-0-1").is_err());
    }

    proptest! {
        #[test]
        fn forward_output_stays_in_open_unit_interval(
            seed in 0u64..1000,
            h1 in 1usize..16,
            two_layers in proptest::bool::ANY,
            h2 in 1usize..8,
            tangent in proptest::bool::ANY,
        ) {
            let transfer = if tangent { TransferFunction::Tangent } else { TransferFunction::Sigmoid };
            let hidden: Vec<usize> = if two_layers { vec![h1, h2] } else { vec![h1] };
            let net = Network::init(topo(&hidden, transfer), seed).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dist = Uniform::new(0.0f64, 1.0);
            let input: Vec<f64> = (0..10).map(|_| dist.sample(&mut rng)).collect();
            let out = net.output_scalar(&input).unwrap();
            prop_assert!(out.is_finite());
            prop_assert!(out > 0.0 && out < 1.0);
        }
    }
}
