//! Geodesic and Hamiltonian flows on degree-one maps in the coordinates
//! `x = (λ₁, λ₂, λ₃, φ, θ, ψ)`, where the rotation is
//! `U = C_k · exp(iφτ₃/2) exp(iθτ₂/2) exp(iψτ₃/2)` for the chart base `C_k`.

use nalgebra::{Matrix3, SVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::euler::{chart_base, coframe_matrix, euler_angles_of, euler_zyz, unwrap_towards};
use crate::invariant::{frame_geometry, Mat6};
use crate::jet::Jet;
use crate::profile::{big_lambda, CoefficientProfile};
use crate::rational_maps::{pauli, rotation_of, su2_exp, unitary_aligning_e3, CMat2};
use crate::table::Table;

pub type Vec6 = SVector<f64, 6>;

/// Charts are switched when `θ` comes within this of 0 or π.
pub const CHART_MARGIN: f64 = 0.1;
/// Closer than this to the chart boundary the coframe is refused.
pub const CHART_LIMIT: f64 = 1e-6;
pub const CHRISTOFFEL_STEP: f64 = 1e-5;
pub const DEFAULT_DT: f64 = 1e-3;
/// Largest relative energy change accepted in one step.
pub const ENERGY_JUMP_TOL: f64 = 1e-6;
pub const MAX_HALVINGS: u32 = 10;

/// Position, velocity and time in one Euler chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub x: [f64; 6],
    pub v: [f64; 6],
    pub chart: usize,
    pub time: f64,
}

impl FlowState {
    /// From `𝛌`, the rotation `U`, `d𝛌/dt` and the body angular velocity
    /// `σ(U̇)`. Picks whichever chart keeps `θ` further from its ends.
    pub fn from_frame(lambda: Vector3<f64>, u: &CMat2, lambda_dot: Vector3<f64>, omega: Vector3<f64>) -> Result<Self> {
        let chart = (0..2)
            .max_by(|&a, &b| {
                let ta = euler_angles_of(&(chart_base(a).adjoint() * u))[1].sin();
                let tb = euler_angles_of(&(chart_base(b).adjoint() * u))[1].sin();
                ta.total_cmp(&tb)
            })
            .unwrap();
        let angles = euler_angles_of(&(chart_base(chart).adjoint() * u));
        let rates = angle_rates(angles, chart, &omega)?;
        Ok(Self {
            x: [lambda[0], lambda[1], lambda[2], angles[0], angles[1], angles[2]],
            v: [lambda_dot[0], lambda_dot[1], lambda_dot[2], rates[0], rates[1], rates[2]],
            chart,
            time: 0.0,
        })
    }

    pub fn lambda(&self) -> Vector3<f64> {
        Vector3::new(self.x[0], self.x[1], self.x[2])
    }

    pub fn angles(&self) -> [f64; 3] {
        [self.x[3], self.x[4], self.x[5]]
    }

    pub fn unitary(&self) -> CMat2 {
        chart_base(self.chart) * euler_zyz(self.angles())
    }

    /// `(d𝛌/dt, σ(U̇))`, independent of the chart.
    pub fn frame_velocity(&self) -> Vec6 {
        frame_jacobian(&self.x) * Vec6::from(self.v)
    }

    fn near_boundary(&self) -> bool {
        let t = self.x[4];
        !(CHART_MARGIN..=std::f64::consts::PI - CHART_MARGIN).contains(&t)
    }

    /// Same point and velocity in the other chart.
    pub fn switch_chart(&self) -> Result<Self> {
        let omega = {
            let f = self.frame_velocity();
            Vector3::new(f[3], f[4], f[5])
        };
        let other = 1 - self.chart;
        let angles = euler_angles_of(&(chart_base(other).adjoint() * self.unitary()));
        let rates = angle_rates(angles, other, &omega)?;
        let mut s = *self;
        s.chart = other;
        s.x[3..].copy_from_slice(&angles);
        s.v[3..].copy_from_slice(&rates);
        Ok(s)
    }
}

fn check_chart(angles: [f64; 3], chart: usize) -> Result<()> {
    if angles[1].sin().abs() < CHART_LIMIT {
        return Err(GeomError::ChartBoundary { chart, theta: angles[1] });
    }
    Ok(())
}

fn angle_rates(angles: [f64; 3], chart: usize, omega: &Vector3<f64>) -> Result<[f64; 3]> {
    check_chart(angles, chart)?;
    let e = coframe_matrix(angles);
    let r = e.lu().solve(omega).ok_or(GeomError::ChartBoundary { chart, theta: angles[1] })?;
    Ok([r[0], r[1], r[2]])
}

/// `T = diag(𝕀, E(angles))`: coordinate velocities to frame components.
pub fn frame_jacobian(x: &[f64; 6]) -> Mat6 {
    let e = coframe_matrix([x[3], x[4], x[5]]);
    let mut t = Mat6::identity();
    t.fixed_view_mut::<3, 3>(3, 3).copy_from(&e);
    t
}

fn block_rotation(r: &Matrix3<f64>) -> Mat6 {
    let mut p = Mat6::zeros();
    p.fixed_view_mut::<3, 3>(0, 0).copy_from(r);
    p.fixed_view_mut::<3, 3>(3, 3).copy_from(r);
    p
}

/// Rotation carrying `e₃` to the direction of `𝛌`, in block form for the
/// frame `(∂/∂λ, θ)`.
fn transport(lambda: &Vector3<f64>) -> Mat6 {
    block_rotation(&rotation_of(&unitary_aligning_e3(lambda)))
}

/// Gram matrix of the frame `(∂/∂λ_a, θ_a)` at `𝛌`, moved from the radial
/// curve by the group action. It does not depend on the rotation `U`.
pub fn frame_metric(profile: &dyn CoefficientProfile, lambda: &Vector3<f64>) -> Result<Mat6> {
    let p = transport(lambda);
    Ok(p * frame_geometry(profile, lambda.norm())?.gram * p.transpose())
}

/// Kähler form in the frame at `𝛌`, transported like [`frame_metric`].
pub fn frame_kaehler_form(profile: &dyn CoefficientProfile, lambda: &Vector3<f64>) -> Result<Mat6> {
    let p = transport(lambda);
    Ok(p * frame_geometry(profile, lambda.norm())?.omega * p.transpose())
}

/// `g = TᵀGT`.
pub fn metric_in_coordinates(profile: &dyn CoefficientProfile, x: &[f64; 6]) -> Result<Mat6> {
    check_chart([x[3], x[4], x[5]], 0)?;
    let t = frame_jacobian(x);
    let lambda = Vector3::new(x[0], x[1], x[2]);
    Ok(t.transpose() * frame_metric(profile, &lambda)? * t)
}

/// `−Γ(v, v)`, the geodesic acceleration, with the metric derivatives taken
/// by central differences.
pub fn geodesic_acceleration(profile: &dyn CoefficientProfile, x: &[f64; 6], v: &Vec6, h: f64) -> Result<Vec6> {
    let g = metric_in_coordinates(profile, x)?;
    let mut dg = [Mat6::zeros(); 6];
    for (k, d) in dg.iter_mut().enumerate() {
        let mut xp = *x;
        let mut xm = *x;
        xp[k] += h;
        xm[k] -= h;
        *d = (metric_in_coordinates(profile, &xp)? - metric_in_coordinates(profile, &xm)?) / (2.0 * h);
    }
    // b_l = Σ_i vⁱ (∂_i g v)_l − ½ vᵀ(∂_l g)v
    let mut b = Vec6::zeros();
    for (i, d) in dg.iter().enumerate() {
        b += d * v * v[i];
    }
    for (l, d) in dg.iter().enumerate() {
        b[l] -= 0.5 * v.dot(&(d * v));
    }
    g.cholesky().map(|c| -c.solve(&b)).ok_or(GeomError::SingularProfile {
        lambda: Vector3::new(x[0], x[1], x[2]).norm(),
        reason: "coordinate metric is not positive definite".into(),
    })
}

/// Killing fields of the two rotation actions in frame components:
/// rows 0..3 for `U ↦ e^{iετ_b/2}U`, rows 3..6 for `M ↦ M e^{−iετ_b/2}`.
pub fn killing_fields(lambda: &Vector3<f64>, u: &CMat2) -> [Vec6; 6] {
    let mut out = [Vec6::zeros(); 6];
    let ud = u.adjoint();
    for b in 0..3 {
        for a in 0..3 {
            out[b][3 + a] = 0.5 * (pauli(a) * ud * pauli(b) * u).trace().re;
        }
        let e = Vector3::ith(b, 1.0);
        let c = e.cross(lambda);
        for a in 0..3 {
            out[3 + b][a] = c[a];
        }
        out[3 + b][3 + b] = 1.0;
    }
    out
}

/// Kinetic energy, the six momenta and optionally a Hamiltonian value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservedSet {
    pub energy: f64,
    pub charges: [f64; 6],
    pub hamiltonian: Option<f64>,
}

pub fn conserved(profile: &dyn CoefficientProfile, state: &FlowState) -> Result<ConservedSet> {
    let lambda = state.lambda();
    let g = frame_metric(profile, &lambda)?;
    let w = state.frame_velocity();
    let gw = g * w;
    let mut charges = [0.0; 6];
    for (q, k) in charges.iter_mut().zip(killing_fields(&lambda, &state.unitary())) {
        *q = gw.dot(&k);
    }
    Ok(ConservedSet {
        energy: 0.5 * w.dot(&gw),
        charges,
        hamiltonian: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicOptions {
    pub dt: f64,
    pub fd_step: f64,
    pub energy_tol: f64,
    /// Keep every `sample_every`-th step.
    pub sample_every: usize,
}

impl Default for GeodesicOptions {
    fn default() -> Self {
        Self {
            dt: DEFAULT_DT,
            fd_step: CHRISTOFFEL_STEP,
            energy_tol: ENERGY_JUMP_TOL,
            sample_every: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub state: FlowState,
    pub conserved: ConservedSet,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub profile: String,
    pub samples: Vec<TrajectorySample>,
    pub chart_switches: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectory has at least the initial sample")
    }

    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.samples[0].conserved.energy;
        self.samples.iter().map(|s| (s.conserved.energy - e0).abs()).fold(0.0, f64::max)
    }

    pub fn max_charge_drift(&self) -> f64 {
        let q0 = self.samples[0].conserved.charges;
        self.samples
            .iter()
            .flat_map(|s| s.conserved.charges.iter().zip(&q0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }

    /// Columns: `t`, `chart`, `lambda1..3`, `phi`, `theta`, `psi`, `energy`,
    /// `q1..q6`, and `hamiltonian` (NaN when absent).
    pub fn to_table(&self) -> Table {
        let cols = [
            "t",
            "chart",
            "lambda1",
            "lambda2",
            "lambda3",
            "phi",
            "theta",
            "psi",
            "energy",
            "q1",
            "q2",
            "q3",
            "q4",
            "q5",
            "q6",
            "hamiltonian",
        ];
        let mut t = Table::new(&cols)
            .meta("profile", &self.profile)
            .meta("chart_switches", self.chart_switches);
        for s in &self.samples {
            let mut row = vec![s.state.time, s.state.chart as f64];
            row.extend(s.state.x);
            row.push(s.conserved.energy);
            row.extend(s.conserved.charges);
            row.push(s.conserved.hamiltonian.unwrap_or(f64::NAN));
            t.push(row);
        }
        t
    }
}

fn rk4_step(profile: &dyn CoefficientProfile, s: &FlowState, dt: f64, h: f64) -> Result<FlowState> {
    let f = |x: &[f64; 6], v: &Vec6| -> Result<(Vec6, Vec6)> { Ok((*v, geodesic_acceleration(profile, x, v, h)?)) };
    let shift = |x: &[f64; 6], d: &Vec6, c: f64| -> [f64; 6] { std::array::from_fn(|i| x[i] + c * d[i]) };
    let x0 = s.x;
    let v0 = Vec6::from(s.v);
    let (k1x, k1v) = f(&x0, &v0)?;
    let (k2x, k2v) = f(&shift(&x0, &k1x, dt / 2.0), &(v0 + k1v * (dt / 2.0)))?;
    let (k3x, k3v) = f(&shift(&x0, &k2x, dt / 2.0), &(v0 + k2v * (dt / 2.0)))?;
    let (k4x, k4v) = f(&shift(&x0, &k3x, dt), &(v0 + k3v * dt))?;
    let dx = (k1x + k2x * 2.0 + k3x * 2.0 + k4x) / 6.0;
    let dv = (k1v + k2v * 2.0 + k3v * 2.0 + k4v) / 6.0;
    let v = v0 + dv * dt;
    Ok(FlowState {
        x: shift(&x0, &dx, dt),
        v: [v[0], v[1], v[2], v[3], v[4], v[5]],
        chart: s.chart,
        time: s.time + dt,
    })
}

fn energy_of(profile: &dyn CoefficientProfile, s: &FlowState) -> Result<f64> {
    let w = s.frame_velocity();
    Ok(0.5 * w.dot(&(frame_metric(profile, &s.lambda())? * w)))
}

/// Advances by `dt`, halving the step (and taking more of them) while the
/// energy jumps by more than the tolerance.
fn guarded_step(
    profile: &dyn CoefficientProfile,
    s: &FlowState,
    dt: f64,
    opts: &GeodesicOptions,
    rejected: &mut usize,
) -> Result<FlowState> {
    let e0 = energy_of(profile, s)?;
    let scale = e0.abs().max(f64::MIN_POSITIVE);
    let mut pieces = 1u32;
    loop {
        let sub = dt / pieces as f64;
        let mut cur = *s;
        let mut ok = true;
        for _ in 0..pieces {
            let next = rk4_step(profile, &cur, sub, opts.fd_step)?;
            if (energy_of(profile, &next)? - e0).abs() > opts.energy_tol * scale {
                ok = false;
                break;
            }
            cur = next;
        }
        if ok {
            return Ok(cur);
        }
        *rejected += 1;
        if pieces >= 1 << MAX_HALVINGS {
            return Err(GeomError::Accuracy {
                difference: f64::NAN,
                tolerance: opts.energy_tol,
                hint: format!("energy jump persists at step {sub:e}; reduce dt"),
            });
        }
        pieces *= 2;
    }
}

/// Integrates the geodesic equation for time `t_final` with RK4.
pub fn geodesic_flow(profile: &dyn CoefficientProfile, start: &FlowState, t_final: f64, opts: &GeodesicOptions) -> Result<Trajectory> {
    if !(opts.dt > 0.0) || !(t_final >= 0.0) || opts.sample_every == 0 {
        return Err(GeomError::InvalidInput("need dt > 0, T ≥ 0 and sample_every ≥ 1".into()));
    }
    let mut state = *start;
    let mut switches = 0;
    if state.near_boundary() {
        state = state.switch_chart()?;
        switches += 1;
    }
    let mut traj = Trajectory {
        profile: profile.name(),
        samples: vec![TrajectorySample {
            state,
            conserved: conserved(profile, &state)?,
        }],
        chart_switches: 0,
        rejected_steps: 0,
    };
    let steps = (t_final / opts.dt).round() as usize;
    let t0 = state.time;
    for k in 1..=steps {
        let dt = t0 + k as f64 * opts.dt - state.time;
        state = guarded_step(profile, &state, dt, opts, &mut traj.rejected_steps)?;
        if state.near_boundary() {
            state = state.switch_chart()?;
            switches += 1;
        }
        if k % opts.sample_every == 0 || k == steps {
            traj.samples.push(TrajectorySample {
                state,
                conserved: conserved(profile, &state)?,
            });
        }
    }
    traj.chart_switches = switches;
    Ok(traj)
}

/// Flips the velocity, for time-reversal checks.
pub fn reversed(state: &FlowState) -> FlowState {
    let mut s = *state;
    s.v = s.v.map(|c| -c);
    s
}

/// Spin rate `ω = ΛH'/(2B)` of the Hamiltonian vector field `ω λ̂·θ` for an
/// invariant Hamiltonian with `dH/dλ = H'`.
pub fn hamiltonian_vector_field(profile: &dyn CoefficientProfile, h_prime: f64, lambda: f64) -> f64 {
    if h_prime == 0.0 {
        return 0.0;
    }
    big_lambda(lambda) * h_prime / (2.0 * profile.b(lambda))
}

/// The same rate from the rational expression `2ΛH'/((1+2λ²)A + (λ+λ³)A')`.
pub fn spin_rate_rational(profile: &dyn CoefficientProfile, h_prime: f64, lambda: f64) -> f64 {
    let j = profile.a_jet(lambda);
    let l2 = lambda * lambda;
    2.0 * big_lambda(lambda) * h_prime / ((1.0 + 2.0 * l2) * j.value() + (lambda + lambda * l2) * j.deriv(1))
}

/// The same rate from the Kähler coefficients, `H'/(Â₁ + λ²Â₂)`.
pub fn spin_rate_kaehler(profile: &dyn CoefficientProfile, h_prime: f64, lambda: f64) -> Result<f64> {
    let omega = frame_geometry(profile, lambda)?.omega;
    Ok(h_prime / omega[(2, 5)])
}

/// Solves `Ω(·, X) = dH` in coordinates for a Hamiltonian of `|𝛌|` alone.
pub fn hamiltonian_vector_field_coordinates(profile: &dyn CoefficientProfile, h_prime: f64, x: &[f64; 6]) -> Result<Vec6> {
    check_chart([x[3], x[4], x[5]], 0)?;
    let lambda = Vector3::new(x[0], x[1], x[2]);
    let l = lambda.norm();
    if l == 0.0 {
        return Ok(Vec6::zeros());
    }
    let t = frame_jacobian(x);
    let omega = t.transpose() * frame_kaehler_form(profile, &lambda)? * t;
    let mut dh = Vec6::zeros();
    for a in 0..3 {
        dh[a] = h_prime * lambda[a] / l;
    }
    omega.lu().solve(&dh).ok_or(GeomError::SingularProfile {
        lambda: l,
        reason: "Kähler form is degenerate".into(),
    })
}

/// Closed-form Hamiltonian flow for `H(|𝛌|)`, given as a jet function:
/// `𝛌` is frozen and `U(t) = U₀ exp(itω λ̂·τ/2)`.
pub fn hamiltonian_flow(
    profile: &dyn CoefficientProfile,
    hamiltonian: &dyn Fn(Jet) -> Jet,
    start: &FlowState,
    t_final: f64,
    samples: usize,
) -> Result<Trajectory> {
    let lambda = start.lambda();
    let l = lambda.norm();
    let hj = hamiltonian(Jet::variable(l));
    let omega = hamiltonian_vector_field(profile, hj.deriv(1), l);
    let axis = if l > 0.0 { lambda / l } else { Vector3::z() };
    let u0 = start.unitary();
    let samples = samples.max(1);
    let mut traj = Trajectory {
        profile: profile.name(),
        samples: Vec::with_capacity(samples + 1),
        chart_switches: 0,
        rejected_steps: 0,
    };
    let mut chart = start.chart;
    let mut prev = start.angles();
    for k in 0..=samples {
        let t = t_final * k as f64 / samples as f64;
        let u = u0 * su2_exp(&(axis * (omega * t)));
        let mut angles = euler_angles_of(&(chart_base(chart).adjoint() * u));
        if angles[1] < CHART_MARGIN || angles[1] > std::f64::consts::PI - CHART_MARGIN {
            chart = 1 - chart;
            traj.chart_switches += 1;
            angles = euler_angles_of(&(chart_base(chart).adjoint() * u));
        } else {
            angles = unwrap_towards(angles, prev);
        }
        prev = angles;
        let rates = angle_rates(angles, chart, &(axis * omega))?;
        let state = FlowState {
            x: [lambda[0], lambda[1], lambda[2], angles[0], angles[1], angles[2]],
            v: [0.0, 0.0, 0.0, rates[0], rates[1], rates[2]],
            chart,
            time: start.time + t,
        };
        let mut c = conserved(profile, &state)?;
        c.hamiltonian = Some(hamiltonian(Jet::variable(state.lambda().norm())).value());
        traj.samples.push(TrajectorySample { state, conserved: c });
    }
    Ok(traj)
}

/// Off-axis closed form of the frame Gram matrix:
/// `A₁δ + A₂λλᵀ`, `A₃δ + A₄λλᵀ`, and `G(θ_b, ∂_c) = A₅ε_abc λ_a/2`.
pub fn frame_metric_closed_form(profile: &dyn CoefficientProfile, lambda: &Vector3<f64>) -> Result<Mat6> {
    let c = crate::invariant::coefficients_from_a(profile, lambda.norm())?;
    let ll = lambda * lambda.transpose();
    let mut g = Mat6::zeros();
    g.fixed_view_mut::<3, 3>(0, 0).copy_from(&(Matrix3::identity() * c.a1 + ll * c.a2));
    g.fixed_view_mut::<3, 3>(3, 3).copy_from(&(Matrix3::identity() * c.a3 + ll * c.a4));
    for b in 0..3 {
        for cc in 0..3 {
            let mut s = 0.0;
            for a in 0..3 {
                s += levi_civita(a, b, cc) * lambda[a];
            }
            g[(3 + b, cc)] = 0.5 * c.a5 * s;
            g[(cc, 3 + b)] = 0.5 * c.a5 * s;
        }
    }
    Ok(g)
}

fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Initial data as read from JSON: `𝛌`, a rotation vector for `U`, `d𝛌/dt`
/// and the body angular velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialCondition {
    pub lambda: [f64; 3],
    #[serde(default)]
    pub rotation: [f64; 3],
    #[serde(default)]
    pub lambda_dot: [f64; 3],
    #[serde(default)]
    pub omega: [f64; 3],
}

impl InitialCondition {
    pub fn to_state(&self) -> Result<FlowState> {
        let v = |a: [f64; 3]| Vector3::new(a[0], a[1], a[2]);
        FlowState::from_frame(v(self.lambda), &su2_exp(&v(self.rotation)), v(self.lambda_dot), v(self.omega))
    }
}
