use crate::dynamics::VectorField;
use crate::poly::Polynomial;

/// A polynomial flattened for fast `f64` evaluation.
#[derive(Debug, Clone)]
pub struct CompiledPolynomial {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPolynomial {
    pub fn new(p: &Polynomial) -> Self {
        use num_traits::ToPrimitive;
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| {
                let powers = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (i, e as i32))
                    .collect();
                (c.to_f64().unwrap_or(f64::NAN), powers)
            })
            .collect();
        CompiledPolynomial { terms }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, pw)| pw.iter().fold(*c, |acc, &(i, e)| acc * x[i].powi(e))).sum()
    }

    /// `Σ |c·m(x)|`: the scale against which cancellation error is measured.
    pub fn magnitude(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, pw)| pw.iter().fold(c.abs(), |acc, &(i, e)| acc * x[i].abs().powi(e))).sum()
    }
}

/// Fixed-step RK4 settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rk4Config {
    pub step: f64,
    pub horizon: f64,
    /// Integration stops once any coordinate exceeds this magnitude, so
    /// finite-time blow-ups end the trajectory instead of producing
    /// infinities.
    pub escape: f64,
    /// Integration also stops once one step would move the state by more
    /// than `resolution·(1 + ‖x‖∞)`, i.e. when the fixed step no longer
    /// resolves the local dynamics.
    pub resolution: f64,
}

impl Default for Rk4Config {
    fn default() -> Self {
        Rk4Config { step: 1.0 / 256.0, horizon: 1.0, escape: 1e3, resolution: 0.05 }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Time at which the escape or resolution bound stopped integration, if
    /// it did.
    pub escaped_at: Option<f64>,
}

impl Trajectory {
    pub fn end_time(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }
}

pub struct CompiledField {
    drifts: Vec<CompiledPolynomial>,
}

impl CompiledField {
    pub fn new(field: &VectorField) -> Self {
        CompiledField { drifts: field.drifts().iter().map(CompiledPolynomial::new).collect() }
    }

    pub fn eval(&self, x: &[f64], out: &mut [f64]) {
        for (o, f) in out.iter_mut().zip(&self.drifts) {
            *o = f.eval(x);
        }
    }

    /// One classical RK4 step of size `h` (which may be negative).
    pub fn step(&self, x: &[f64], h: f64) -> Vec<f64> {
        let n = x.len();
        let mut k1 = vec![0.0; n];
        let mut k2 = vec![0.0; n];
        let mut k3 = vec![0.0; n];
        let mut k4 = vec![0.0; n];
        let mut tmp = vec![0.0; n];
        self.eval(x, &mut k1);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        self.eval(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k2[i];
        }
        self.eval(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = x[i] + h * k3[i];
        }
        self.eval(&tmp, &mut k4);
        (0..n).map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect()
    }
}

/// Integrates `ẋ = F(x)` from `x0` over `[0, horizon]`.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn integrate(field: &VectorField, x0: &[f64], config: &Rk4Config) -> Trajectory {
    let cf = CompiledField::new(field);
    let steps = (config.horizon / config.step).round() as usize;
    let mut times = vec![0.0];
    let mut states = vec![x0.to_vec()];
    let mut escaped_at = None;
    let mut x = x0.to_vec();
    let mut velocity = vec![0.0; x.len()];
    for k in 1..=steps {
        let t = k as f64 * config.step;
        cf.eval(&x, &mut velocity);
        let speed = velocity.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let size = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(config.step * speed <= config.resolution * (1.0 + size)) {
            escaped_at = Some(t - config.step);
            break;
        }
        let next = cf.step(&x, config.step);
        if next.iter().any(|v| !v.is_finite() || v.abs() > config.escape) {
            escaped_at = Some(t);
            break;
        }
        x = next;
        times.push(t);
        states.push(x.clone());
    }
    Trajectory { times, states, escaped_at }
}

/// A polynomial that left its tolerance band along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub polynomial: usize,
    pub time: f64,
    pub value: f64,
    pub bound: f64,
}

/// Checks `|p(x(t))| ≤ tolerance·(1 + s)` at every sample, where `s` is the
/// largest term magnitude of `p` seen along the trajectory. Returns the
/// first violation per polynomial.
// The negated comparisons also reject NaN.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn check_along(trajectory: &Trajectory, polys: &[Polynomial], tolerance: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    for (k, p) in polys.iter().enumerate() {
        let cp = CompiledPolynomial::new(p);
        let scale = trajectory.states.iter().map(|x| cp.magnitude(x)).fold(0.0, f64::max);
        let bound = tolerance * (1.0 + scale);
        for (t, x) in trajectory.times.iter().zip(&trajectory.states) {
            let value = cp.eval(x);
            if !(value.abs() <= bound) {
                out.push(Violation { polynomial: k, time: *t, value, bound });
                break;
            }
        }
    }
    out
}

/// Estimates `d/dt p(x(t))` at `t = 0` by Richardson-extrapolated central
/// differences over single RK4 steps of size `±h` and `±h/2`.
pub fn time_derivative(field: &VectorField, p: &Polynomial, x0: &[f64], h: f64) -> f64 {
    let cf = CompiledField::new(field);
    let cp = CompiledPolynomial::new(p);
    let central = |h: f64| (cp.eval(&cf.step(x0, h)) - cp.eval(&cf.step(x0, -h))) / (2.0 * h);
    (4.0 * central(h / 2.0) - central(h)) / 3.0
}
