//! Random tanh reservoirs: creation, driving, harvesting states.
//!
//! The state update is `x(n+1) = tanh(W x(n) + W_in p(n+1) + b)`;
//! autonomous variants replace the input term by recomputed weights or
//! an input simulation matrix and optionally constrain the state with a
//! conceptor.

use crate::error::{Error, Result};
use crate::linalg::spectral_radius;
use crate::rng::{normal_matrix, normal_vector, sparse_normal_matrix, RootSeed};
use crate::signals::Signal;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Construction parameters for [`Reservoir::new`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReservoirParams {
    /// Number of reservoir units.
    pub n: usize,
    /// Number of input channels.
    pub k: usize,
    pub spectral_radius: f64,
    /// Connection density of the internal weight matrix, in (0, 1].
    pub density: f64,
    pub in_scale: f64,
    pub bias_scale: f64,
    pub seed: u64,
}

/// A fixed random network. Immutable after construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Reservoir {
    pub(crate) w_star: DMatrix<f64>,
    pub(crate) w_in: DMatrix<f64>,
    pub(crate) bias: DVector<f64>,
    pub params: ReservoirParams,
}

/// States harvested from a driven run, aligned for the storing
/// regressions: column `n` of `states` is `x(n)`, of `prev_states` is
/// `x(n-1)`, and of `drivers` is `p(n)`.
#[derive(Debug, Clone)]
pub struct StateHarvest {
    pub states: DMatrix<f64>,
    pub prev_states: DMatrix<f64>,
    pub drivers: DMatrix<f64>,
}

impl Reservoir {
    /// Create a reservoir: sparse normal `W*` rescaled to the exact
    /// spectral radius, dense normal input weights and bias.
    pub fn new(params: ReservoirParams) -> Result<Self> {
        if params.n == 0 {
            return Err(Error::invalid("reservoir size must be positive"));
        }
        if !(params.spectral_radius > 0.0) {
            return Err(Error::invalid("spectral radius must be positive"));
        }
        if !(params.density > 0.0 && params.density <= 1.0) {
            return Err(Error::invalid("density must lie in (0, 1]"));
        }
        let seed = RootSeed(params.seed);
        let mut rng = seed.stream("reservoir-weights");
        let mut w_star = None;
        for _attempt in 0..10 {
            let cand = sparse_normal_matrix(params.n, params.n, params.density, &mut rng);
            let rho = spectral_radius(&cand);
            if rho > 1e-12 {
                w_star = Some(cand * (params.spectral_radius / rho));
                break;
            }
        }
        let w_star = w_star.ok_or_else(|| {
            Error::Numerical("sampled reservoir matrix had zero spectral radius 10 times".into())
        })?;
        let mut rng_in = seed.stream("reservoir-input");
        let w_in = normal_matrix(params.n, params.k, &mut rng_in) * params.in_scale;
        let mut rng_b = seed.stream("reservoir-bias");
        let bias = normal_vector(params.n, &mut rng_b) * params.bias_scale;
        Ok(Reservoir {
            w_star,
            w_in,
            bias,
            params,
        })
    }

    pub fn size(&self) -> usize {
        self.params.n
    }

    pub fn input_channels(&self) -> usize {
        self.params.k
    }

    pub fn internal_weights(&self) -> &DMatrix<f64> {
        &self.w_star
    }

    pub fn input_weights(&self) -> &DMatrix<f64> {
        &self.w_in
    }

    pub fn bias(&self) -> &DVector<f64> {
        &self.bias
    }

    /// One driven step from `x` with input sample `p`.
    pub fn step_driven(&self, x: &DVector<f64>, p: nalgebra::DVectorView<'_, f64>) -> DVector<f64> {
        let mut a = &self.w_star * x + &self.bias;
        a += &self.w_in * p;
        a.apply(|v| *v = v.tanh());
        a
    }

    /// Drive the reservoir with a signal from the zero state, discard
    /// the first `washout` steps and harvest aligned state pairs.
    pub fn drive(&self, signal: &Signal, washout: usize) -> Result<StateHarvest> {
        self.drive_from(&DVector::zeros(self.size()), signal, washout)
    }

    /// Like [`Reservoir::drive`] but from an explicit start state.
    pub fn drive_from(
        &self,
        start: &DVector<f64>,
        signal: &Signal,
        washout: usize,
    ) -> Result<StateHarvest> {
        if signal.channels() != self.params.k {
            return Err(Error::dim(format!(
                "driver has {} channels, reservoir expects {}",
                signal.channels(),
                self.params.k
            )));
        }
        if signal.len() <= washout {
            return Err(Error::invalid("signal not longer than washout"));
        }
        if start.len() != self.size() {
            return Err(Error::dim("start state has wrong dimension"));
        }
        let l = signal.len() - washout;
        let mut states = DMatrix::zeros(self.size(), l);
        let mut prev_states = DMatrix::zeros(self.size(), l);
        let mut drivers = DMatrix::zeros(signal.channels(), l);
        let mut x = start.clone();
        for n in 0..signal.len() {
            let x_prev = x.clone();
            x = self.step_driven(&x, signal.sample(n));
            if n >= washout {
                let col = n - washout;
                states.set_column(col, &x);
                prev_states.set_column(col, &x_prev);
                drivers.set_column(col, &signal.sample(n));
            }
        }
        if states.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("driven reservoir states".into()));
        }
        Ok(StateHarvest {
            states,
            prev_states,
            drivers,
        })
    }
}

impl StateHarvest {
    pub fn len(&self) -> usize {
        self.states.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.states.ncols() == 0
    }

    pub fn state_dim(&self) -> usize {
        self.states.nrows()
    }
}

/// One autonomous step `x' = C tanh(W x + b)`, with `W` the supplied
/// effective weight matrix and `C` optional.
pub fn step_autonomous(
    w: &DMatrix<f64>,
    bias: &DVector<f64>,
    conceptor: Option<&DMatrix<f64>>,
    x: &DVector<f64>,
) -> Result<DVector<f64>> {
    if x.len() != w.ncols() {
        return Err(Error::dim("state dimension mismatch"));
    }
    let mut a = w * x + bias;
    a.apply(|v| *v = v.tanh());
    Ok(match conceptor {
        Some(c) => c * a,
        None => a,
    })
}
