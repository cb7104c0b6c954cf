//! Nonoscillatory phase function of the normal-form spheroidal equation
//!
//! ```text
//! w'' + q(z) w = 0,   q(z) = 1/(1-z²)² + (χ - γ²z²)/(1-z²),
//! ```
//!
//! built from the outgoing solution `w₃ = S⁽³⁾·√(1-z²)`, whose modulus
//! `N = |w₃|²` on `(0,1)` gives the phase derivative `ψ' = γ/N`.
//!
//! The logarithmic derivative `r = w₃'/w₃` is obtained by integrating its
//! Riccati equation down the imaginary axis, where `w₃` is real and decays,
//! so the flow is attracted to it. From `z = 0` the same Riccati flow is
//! continued along `[0, 1)`, switching to `s = -log(1-z)` near the endpoint;
//! `Im r = γ/N` integrates to the phase. Far out in `s` the flow is a Möbius
//! map and the remaining phase is known in closed form.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::ode::{integrate, integrate_scaled, Dop853Options, OdeError, Solution};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PhaseError {
    #[error("phase oracle needs chi > 0 and gamma > 0 (finite), got chi = {chi}, gamma = {gamma}")]
    InvalidInput { chi: f64, gamma: f64 },
    #[error("imaginary part of r(0) is {im_r0}, expected > 0 (modulus would not be positive)")]
    ModulusSign { im_r0: f64 },
    #[error("modulus N = {value} at z = {z} is not positive")]
    NonPositiveModulus { z: f64, value: f64 },
    #[error("endpoint fit has leading coefficient c2 = {c2} <= 0")]
    TailFit { c2: f64 },
    #[error("query point z = {z} outside the sampled range [0, {z_max}]")]
    OutOfRange { z: f64, z_max: f64 },
    #[error("integration failed on the {leg} leg: {source}")]
    Integration { leg: &'static str, source: OdeError },
}

fn ode_err(leg: &'static str) -> impl Fn(OdeError) -> PhaseError {
    move |source| PhaseError::Integration { leg, source }
}

/// Relative tolerance of every integration in this module.
pub const RTOL: f64 = 1e-14;
/// Start of the endpoint variable `s = -log(1-z)` on the real axis.
pub const DELTA: f64 = 1e-3;
/// Height of the point where the imaginary-axis leg hands over.
pub const Y_HANDOVER: f64 = 0.5;
/// Damping exponent used to place the asymptotic initial condition.
pub const DAMPING: f64 = 50.0;

/// `q` and its relatives for fixed `(χ, γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFormCoefficient {
    pub chi: f64,
    pub gamma: f64,
    g2: f64,
}

impl NormalFormCoefficient {
    pub fn new(chi: f64, gamma: f64) -> Result<Self, PhaseError> {
        if !(chi > 0.0 && gamma > 0.0 && chi.is_finite() && gamma.is_finite()) {
            return Err(PhaseError::InvalidInput { chi, gamma });
        }
        Ok(Self { chi, gamma, g2: gamma * gamma })
    }

    /// `q(z)` for real `z ∈ (-1, 1)`.
    pub fn q(&self, z: f64) -> f64 {
        let w = (1.0 - z) * (1.0 + z);
        1.0 / (w * w) + (self.chi - self.g2 * z * z) / w
    }

    /// `q'(z) = 4z/(1-z²)³ + 2z(χ-γ²)/(1-z²)²`.
    pub fn dq(&self, z: f64) -> f64 {
        let w = (1.0 - z) * (1.0 + z);
        4.0 * z / (w * w * w) + 2.0 * z * (self.chi - self.g2) / (w * w)
    }

    /// `Q(y) = q(iy) = (χ + γ²y²)/(1+y²) + 1/(1+y²)²`, positive for `χ > 0`.
    pub fn q_imag(&self, y: f64) -> f64 {
        let v = 1.0 / (1.0 + y * y);
        v * (self.chi + self.g2 * y * y + v)
    }

    /// `dQ/dy = 2y/(1+y²)²·(γ² - χ - 2/(1+y²))`.
    pub fn dq_imag(&self, y: f64) -> f64 {
        let v = 1.0 / (1.0 + y * y);
        2.0 * y * v * v * ((self.g2 - self.chi) - 2.0 * v)
    }

    /// Coefficient of the endpoint form `W'' + p W = 0` in `s = -log(1-z)`,
    /// `p = (1-z)² q(z) - 1/4`.
    /// `dp/ds`.
    pub fn dp_s(&self, s: f64) -> f64 {
        let u = libm::exp(-s);
        let z = -libm::expm1(-s);
        let h = self.chi - self.g2 * z * z;
        let hu = self.g2 * 2.0 * z;
        let t = 1.0 + z;
        -u * (2.0 / (t * t * t) + (2.0 * h + u * hu * t) / (t * t))
    }

    pub fn p_s_real(&self, s: f64) -> f64 {
        let u = libm::exp(-s);
        let z = -libm::expm1(-s);
        let h = self.chi - self.g2 * z * z;
        let t = 1.0 + z;
        u * (3.0 + z) / (4.0 * t * t) + u * h / t
    }
}

/// Outputs of the imaginary-axis Riccati integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseProbe {
    /// `r(0) = w₃'(0)/w₃(0)`; purely imaginary since `w₃` is real on the
    /// imaginary axis.
    pub r0: Complex64,
    /// `N(0), N'(0), N''(0)`.
    pub n0: f64,
    pub n1: f64,
    pub n2: f64,
    /// `ψ'(0), ψ''(0), ψ'''(0)`.
    pub psi1: f64,
    pub psi2: f64,
    pub psi3: f64,
    /// `ψ'(0)² - q(0) = r'(0)`, integrated directly rather than differenced.
    pub zeta0: f64,
    /// Height `Y` of the asymptotic initial condition and the value imposed there.
    pub ic_point: f64,
    pub r_ic: Complex64,
    /// `r` at the handover point `i·Y_HANDOVER` (when it lies below `Y`).
    pub r_handover: Option<Complex64>,
    pub est_error: f64,
}

/// Asymptotic `r(iY) ≈ iγ - 1/(iY) - iY/(1-(iY)²)`.
pub fn asymptotic_r(gamma: f64, y: f64) -> Complex64 {
    Complex64::new(0.0, gamma + 1.0 / y - y / (1.0 + y * y))
}

/// Default placement of the initial condition: far enough above the
/// handover point that `exp(-2∫η)` has damped the asymptotic error away.
pub fn default_ic_point(chi: f64, gamma: f64) -> f64 {
    let m = libm::sqrt((gamma * gamma).min(chi));
    Y_HANDOVER + DAMPING / (2.0 * m)
}

#[derive(Debug, Clone, Copy)]
struct AxisSample {
    eta: f64,
    zeta: f64,
}

/// Integrate `ζ = η² - Q` (with `η = -d log w/dy`) from `y_ic` down through
/// the requested stops (decreasing, all below `y_ic`).
fn axis_leg(
    coef: &NormalFormCoefficient,
    y_ic: f64,
    stops: &[f64],
) -> Result<(Vec<AxisSample>, f64, Complex64), PhaseError> {
    let r_ic = asymptotic_r(coef.gamma, y_ic);
    let eta_ic = r_ic.im;
    let mut zeta = eta_ic * eta_ic - coef.q_imag(y_ic);
    let mut y = y_ic;
    let mut out = Vec::with_capacity(stops.len());
    let mut err = 0.0;
    let opts = Dop853Options { rtol: RTOL, atol: 0.0, ..Default::default() };
    for &stop in stops {
        let c = *coef;
        let rhs = move |t: f64, s: &[f64; 1]| {
            let eta = libm::sqrt(c.q_imag(t) + s[0]);
            [2.0 * eta * s[0] - c.dq_imag(t)]
        };
        // ζ may cross zero; measure it against the size of the terms that
        // balance in its equation.
        let scale = move |a: &[f64; 1], b: &[f64; 1]| {
            let m = a[0].abs().max(b[0].abs());
            [RTOL * (m + 1.0)]
        };
        let sol = integrate_scaled(rhs, y, [zeta], stop, &opts, scale).map_err(ode_err("imaginary-axis"))?;
        zeta = sol.last()[0];
        err += sol.err_estimate;
        y = stop;
        let eta = libm::sqrt(coef.q_imag(y) + zeta);
        out.push(AxisSample { eta, zeta });
    }
    Ok((out, err, r_ic))
}

/// Logarithmic derivative of `w₃` at `z = 0` and the derived modulus and
/// phase derivatives, with the default initial-condition height.
pub fn riccati_probe(chi: f64, gamma: f64) -> Result<PhaseProbe, PhaseError> {
    riccati_probe_at(chi, gamma, default_ic_point(chi, gamma))
}

/// As [`riccati_probe`] with the asymptotic condition imposed at `y = y_ic`.
pub fn riccati_probe_at(chi: f64, gamma: f64, y_ic: f64) -> Result<PhaseProbe, PhaseError> {
    let coef = NormalFormCoefficient::new(chi, gamma)?;
    let with_handover = y_ic > Y_HANDOVER;
    let stops: &[f64] = if with_handover { &[Y_HANDOVER, 0.0] } else { &[0.0] };
    let (samples, est_error, r_ic) = axis_leg(&coef, y_ic, stops)?;
    let at0 = samples[samples.len() - 1];
    let r_handover = with_handover.then(|| Complex64::new(0.0, samples[0].eta));
    Ok(probe_from_axis(&coef, at0, y_ic, r_ic, r_handover, est_error)?)
}

fn probe_from_axis(
    coef: &NormalFormCoefficient,
    at0: AxisSample,
    y_ic: f64,
    r_ic: Complex64,
    r_handover: Option<Complex64>,
    est_error: f64,
) -> Result<PhaseProbe, PhaseError> {
    let eta0 = at0.eta;
    if !(eta0 > 0.0) {
        return Err(PhaseError::ModulusSign { im_r0: eta0 });
    }
    let gamma = coef.gamma;
    let n0 = gamma / eta0;
    // r(0) = iη0 has zero real part, so N'(0) = 2N0 Re r(0) = 0 and
    // N''(0) = 2N0 Re r'(0) with r'(0) = -q(0) - r(0)² = η0² - q(0) = ζ0.
    let n1 = 0.0;
    let n2 = 2.0 * n0 * at0.zeta;
    let psi1 = eta0;
    let psi2 = -gamma * n1 / (n0 * n0);
    let psi3 = -gamma * n2 / (n0 * n0) + 2.0 * gamma * n1 * n1 / (n0 * n0 * n0);
    Ok(PhaseProbe {
        r0: Complex64::new(0.0, eta0),
        n0,
        n1,
        n2,
        psi1,
        psi2,
        psi3,
        zeta0: at0.zeta,
        ic_point: y_ic,
        r_ic,
        r_handover,
        est_error,
    })
}

/// `η(y) = -d log w₃(iy)/dy` and `log|w₃(iy)|` (relative to the top point)
/// at the given heights, which must be decreasing and below `y_ic`.
pub fn imaginary_axis_profile(chi: f64, gamma: f64, ys: &[f64]) -> Result<Vec<(f64, f64, f64)>, PhaseError> {
    let coef = NormalFormCoefficient::new(chi, gamma)?;
    let y_ic = default_ic_point(chi, gamma).max(ys.iter().fold(0.0f64, |m, &y| m.max(y)) + 1.0);
    let opts = Dop853Options { rtol: RTOL, atol: RTOL, ..Default::default() };
    let eta_ic = asymptotic_r(gamma, y_ic).im;
    let mut state = [eta_ic * eta_ic - coef.q_imag(y_ic), 0.0];
    let mut y = y_ic;
    let mut out = Vec::with_capacity(ys.len());
    for &stop in ys {
        let c = coef;
        let rhs = move |t: f64, s: &[f64; 2]| {
            let eta = libm::sqrt(c.q_imag(t) + s[0]);
            [2.0 * eta * s[0] - c.dq_imag(t), -eta]
        };
        let sol = integrate(rhs, y, state, stop, &opts).map_err(ode_err("imaginary-axis"))?;
        state = sol.last();
        y = stop;
        out.push((stop, libm::sqrt(coef.q_imag(stop) + state[0]), state[1]));
    }
    Ok(out)
}

/// Generalized index `ξ` with `Ψ(0)` and diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseIndexResult {
    pub xi: f64,
    /// `Ψ(0) = -∫₀¹ γ/N`.
    pub psi0: f64,
    /// `(c₂, c₁, c₀)` of the endpoint form `N·eˢ ≈ c₂s² + c₁s + c₀`.
    pub tail_coeffs: [f64; 3],
    pub quad_error: f64,
}

/// Right end of the endpoint variable; beyond it `p(s)·s²` is below 1e-17
/// for every `χ ≤ 2γ² + 1`, so the endpoint form is exact to rounding.
pub fn s_max(gamma: f64) -> f64 {
    let h = 1.0 + 2.0 * gamma * gamma;
    let s0 = 40.0 + libm::log(h);
    s0 + 2.0 * libm::log(s0 + 10.0)
}

fn tail_from_rho(gamma: f64, rho: Complex64, s: f64) -> Result<(f64, [f64; 3]), PhaseError> {
    // When the solution ends in a classically forbidden stretch, P is huge
    // and Im ρ_S = γ/P sits far below Re ρ_S; the remaining phase is then
    // negligible.
    if !(rho.im >= 0.0) {
        return Err(PhaseError::TailFit { c2: gamma * rho.norm_sqr() / rho.im });
    }
    // Beyond s the flow is ρ' = -ρ², so ρ = 1/(s' + α) with α = 1/ρ_S - S
    // and P = c₂|s' + α|²; the remaining phase ∫ Im ρ is arg ρ_S.
    let alpha = rho.inv() - s;
    let c2 = gamma * rho.norm_sqr() / rho.im.max(f64::MIN_POSITIVE);
    let c1 = 2.0 * c2 * alpha.re;
    let c0 = c2 * alpha.norm_sqr();
    Ok((rho.arg(), [c2, c1, c0]))
}

/// The outgoing solution on `[0, 1)`: its logarithmic derivative `r = a + ib`
/// with `b = γ/N`, carried as `(a, m, ∫₀ᶻ b)` where `b = R·eᵐ` and
/// `R² = √(q² + κ²)` is a smooth stand-in for `|q|`. On the endpoint leg the
/// same triple describes `ρ = (1-z)·r + 1/2` in `s = -log(1-z)` with `p` in
/// place of `q`.
///
/// Measuring `b` against `R` keeps `b² - q` free of cancellation where the
/// solution oscillates. `N` increases on `(0,1)`, so perturbations of `r`
/// decay like `N(z₀)/N(z)` and the forward flow is stable.
#[derive(Debug, Clone)]
pub struct ModulusPath {
    pub gamma: f64,
    pub chi: f64,
    /// Switch point `1 - δ` between the `z` and `s` legs.
    pub z_switch: f64,
    pub s_end: f64,
    coef: NormalFormCoefficient,
    z_leg: Solution<3>,
    s_leg: Option<Solution<3>>,
}

/// Reference `R² = √(q² + κ²)` with derivative data: `(R², R² - q, (log R²)')`.
/// `κ` carries its own logarithmic derivative `dlk`.
fn reference(q: f64, dq: f64, kappa: f64, dlk: f64) -> (f64, f64, f64) {
    let r2 = libm::hypot(q, kappa);
    let gap = if q > 0.0 { kappa * kappa / (r2 + q) } else { r2 - q };
    (r2, gap, (q * dq + kappa * kappa * dlk) / (r2 * r2))
}

fn riccati_rhs(q: f64, dq: f64, kappa: f64, dlk: f64, y: &[f64; 3]) -> [f64; 3] {
    let (a, m) = (y[0], y[1]);
    let (r2, gap, dlog) = reference(q, dq, kappa, dlk);
    // a' = b² - a² - q, m' = -2a - (log R)'
    [r2 * libm::expm1(2.0 * m) + gap - a * a, -2.0 * a - 0.5 * dlog, libm::sqrt(r2) * libm::exp(m)]
}

/// Width of the reference at turning points: the Airy scale `|q'|^{2/3}`
/// there, `q' ≈ 2γ√χ`.
fn airy_scale(c: &NormalFormCoefficient) -> f64 {
    libm::cbrt(4.0 * c.gamma * c.gamma * c.chi)
}

fn z_rhs(c: NormalFormCoefficient) -> impl Fn(f64, &[f64; 3]) -> [f64; 3] + Copy {
    let k = airy_scale(&c);
    move |z: f64, y: &[f64; 3]| riccati_rhs(c.q(z), c.dq(z), k, 0.0, y)
}

fn s_rhs(c: NormalFormCoefficient) -> impl Fn(f64, &[f64; 3]) -> [f64; 3] + Copy {
    let k = airy_scale(&c);
    move |s: f64, y: &[f64; 3]| riccati_rhs(c.p_s_real(s), c.dp_s(s), k * libm::exp(-s), -1.0, y)
}

/// `log b` from `m` and the reference.
fn log_b(q: f64, kappa: f64, m: f64) -> f64 {
    0.5 * libm::log(libm::hypot(q, kappa)) + m
}

fn riccati_scale(x: &[f64; 3], y: &[f64; 3]) -> [f64; 3] {
    let m = x[0].abs().max(y[0].abs()) + 1.0;
    // m is absolute: its error is the relative error of N
    [RTOL * m, RTOL, RTOL * x[2].abs().max(y[2].abs()).max(1.0)]
}

/// Integrate `(N, N', N'')` from `z0` to `z1` inside `[0, 1)` through the
/// third-order equation `N''' + 4qN' + 2q'N = 0`, in the variables
/// `(log N, N'/N, N''/N)`. Independent of [`ModulusPath`]; its cost grows
/// with `γ` and it loses accuracy on long oscillatory stretches.
pub fn appell_integrate(chi: f64, gamma: f64, z0: f64, start: [f64; 3], z1: f64) -> Result<[f64; 3], PhaseError> {
    let c = NormalFormCoefficient::new(chi, gamma)?;
    if !(start[0] > 0.0) {
        return Err(PhaseError::NonPositiveModulus { z: z0, value: start[0] });
    }
    let rhs = move |z: f64, y: &[f64; 3]| {
        let (a, b) = (y[1], y[2]);
        [a, b - a * a, -4.0 * c.q(z) * a - 2.0 * c.dq(z) - a * b]
    };
    let scale = |x: &[f64; 3], y: &[f64; 3]| {
        let mut s = [RTOL; 3];
        for i in 1..3 {
            s[i] = RTOL * (x[i].abs().max(y[i].abs()) + 1.0);
        }
        s
    };
    let y0 = [libm::log(start[0]), start[1] / start[0], start[2] / start[0]];
    let opts = Dop853Options { rtol: RTOL, atol: 0.0, max_steps: 2_000_000, ..Default::default() };
    let sol = integrate_scaled(rhs, z0, y0, z1, &opts, scale).map_err(ode_err("modulus"))?;
    let e = sol.last();
    let n = libm::exp(e[0]);
    Ok([n, e[1] * n, e[2] * n])
}

/// Extend the modulus from the probe data to `z_max ∈ (0, 1)`; when
/// `z_max > 1 - δ` the continuation runs in `s = -log(1-z)` up to
/// `s = -log(1 - z_max)`.
pub fn appell_extend_to(probe: &PhaseProbe, chi: f64, gamma: f64, z_max: f64) -> Result<ModulusPath, PhaseError> {
    if !(z_max > 0.0 && z_max < 1.0) {
        return Err(PhaseError::OutOfRange { z: z_max, z_max: 1.0 });
    }
    let s_end = (z_max > 1.0 - DELTA).then(|| -libm::log1p(-z_max));
    extend(probe, chi, gamma, z_max.min(1.0 - DELTA), s_end, true)
}

/// Modulus over `[0, 1 - e^{-S}]` with `S` the endpoint bound of [`s_max`].
pub fn appell_extend(probe: &PhaseProbe, chi: f64, gamma: f64) -> Result<ModulusPath, PhaseError> {
    extend(probe, chi, gamma, 1.0 - DELTA, Some(s_max(gamma)), true)
}

fn extend(
    probe: &PhaseProbe,
    chi: f64,
    gamma: f64,
    z_first: f64,
    s_end: Option<f64>,
    dense: bool,
) -> Result<ModulusPath, PhaseError> {
    let coef = NormalFormCoefficient::new(chi, gamma)?;
    if !(probe.n0 > 0.0) {
        return Err(PhaseError::NonPositiveModulus { z: 0.0, value: probe.n0 });
    }
    let opts = Dop853Options { rtol: RTOL, atol: 0.0, dense, max_steps: 2_000_000, ..Default::default() };
    let z_switch = 1.0 - DELTA;
    let y0 = [probe.r0.re, libm::log(probe.r0.im) - log_b(coef.q(0.0), airy_scale(&coef), 0.0), 0.0];
    let z_leg = integrate_scaled(z_rhs(coef), 0.0, y0, z_first, &opts, riccati_scale).map_err(ode_err("modulus"))?;
    let (s_leg, s_end) = match s_end {
        Some(s_end) => {
            // ρ = u·r + 1/2 with u = 1 - z = e^{-s}
            let e = z_leg.last();
            let s0 = -libm::log1p(-z_switch);
            let k = airy_scale(&coef);
            let lb = log_b(coef.q(z_switch), k, e[1]) + libm::log(DELTA);
            let y = [DELTA * e[0] + 0.5, lb - log_b(coef.p_s_real(s0), k * DELTA, 0.0), e[2]];
            let sol = integrate_scaled(s_rhs(coef), s0, y, s_end, &opts, riccati_scale)
                .map_err(ode_err("modulus (endpoint)"))?;
            (Some(sol), s_end)
        }
        None => (None, -libm::log1p(-z_first)),
    };
    Ok(ModulusPath { gamma, chi, z_switch, s_end, coef, z_leg, s_leg })
}

impl ModulusPath {
    pub fn z_max(&self) -> f64 {
        match &self.s_leg {
            Some(_) => -libm::expm1(-self.s_end),
            None => self.z_leg.t_end(),
        }
    }

    /// Whether `z` is covered; past `1 - 2⁻⁵³` the path is followed in `s`
    /// only and `z` itself no longer resolves it.
    fn covers(&self, z: f64) -> bool {
        z >= 0.0 && (z <= self.z_leg.t_end() || (self.s_leg.is_some() && -libm::log1p(-z) <= self.s_end))
    }

    /// `r(z) = w₃'/w₃` and the phase `∫₀ᶻ γ/N`.
    pub fn r_at(&self, z: f64) -> Result<(Complex64, f64), PhaseError> {
        if !self.covers(z) {
            return Err(PhaseError::OutOfRange { z, z_max: self.z_max() });
        }
        if z <= self.z_leg.t_end() {
            let y = self.z_leg.eval(z).map_err(ode_err("modulus"))?;
            Ok((Complex64::new(y[0], libm::exp(log_b(self.coef.q(z), airy_scale(&self.coef), y[1]))), y[2]))
        } else {
            let leg = self.s_leg.as_ref().expect("s leg exists beyond the switch point");
            let s = -libm::log1p(-z);
            let y = leg.eval(s).map_err(ode_err("modulus (endpoint)"))?;
            let u = libm::exp(-s);
            let lb = log_b(self.coef.p_s_real(s), airy_scale(&self.coef) * u, y[1]);
            Ok((Complex64::new((y[0] - 0.5) / u, libm::exp(lb + s)), y[2]))
        }
    }

    /// `(N, N', N'')` at `z`, plus the phase `∫₀ᶻ γ/N`.
    pub fn at(&self, z: f64) -> Result<([f64; 3], f64), PhaseError> {
        let (r, phase) = self.r_at(z)?;
        let n = self.gamma / r.im;
        if !(n > 0.0) {
            return Err(PhaseError::NonPositiveModulus { z, value: n });
        }
        // N'/N = 2a and N''/N = 2(a² + b² - q)
        let n1 = 2.0 * r.re * n;
        let n2 = 2.0 * (r.re * r.re + r.im * r.im - self.coef.q(z)) * n;
        Ok(([n, n1, n2], phase))
    }

    /// `P(s) = N·eˢ` on the endpoint leg.
    pub fn p_at(&self, s: f64) -> Result<f64, PhaseError> {
        let leg = self.s_leg.as_ref().ok_or(PhaseError::OutOfRange { z: s, z_max: self.z_max() })?;
        let y = leg.eval(s).map_err(ode_err("modulus (endpoint)"))?;
        Ok(self.gamma * libm::exp(-log_b(self.coef.p_s_real(s), airy_scale(&self.coef) * libm::exp(-s), y[1])))
    }

    /// `log N` at the accepted mesh points of both legs.
    pub fn log_modulus_mesh(&self) -> impl Iterator<Item = f64> + '_ {
        let g = libm::log(self.gamma);
        let c = self.coef;
        let k = airy_scale(&c);
        let z = self.z_leg.t.iter().zip(&self.z_leg.y).map(move |(z, y)| g - log_b(c.q(*z), k, y[1]));
        let s = self
            .s_leg
            .iter()
            .flat_map(|l| l.t.iter().zip(&l.y))
            .map(move |(s, y)| g - log_b(c.p_s_real(*s), k * libm::exp(-s), y[1]) - s);
        z.chain(s)
    }

    /// Phase accumulated up to the end of the path.
    pub fn phase_end(&self) -> f64 {
        match &self.s_leg {
            Some(l) => l.last()[2],
            None => self.z_leg.last()[2],
        }
    }

    fn rho_end(&self) -> Option<Complex64> {
        self.s_leg.as_ref().map(|l| {
            let y = l.last();
            {
                let s = l.t_end();
                Complex64::new(y[0], libm::exp(log_b(self.coef.p_s_real(s), airy_scale(&self.coef) * libm::exp(-s), y[1])))
            }
        })
    }

    fn err_estimate(&self) -> f64 {
        self.z_leg.err_estimate + self.s_leg.as_ref().map_or(0.0, |l| l.err_estimate)
    }
}

/// Least-squares fit of `c₂s² + c₁s + c₀` to `P` on 20 points of the last
/// decade `[S - 10, S]` of the endpoint leg.
pub fn fit_endpoint_quadratic(path: &ModulusPath) -> Result<[f64; 3], PhaseError> {
    let s1 = path.s_end;
    let s0 = s1 - 10.0;
    // Normal equations in the centred variable t = s - s1 for conditioning.
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for j in 0..20 {
        let s = s0 + (s1 - s0) * j as f64 / 19.0;
        let p = path.p_at(s)?;
        let t = s - s1;
        let row = [t * t, t, 1.0];
        for a in 0..3 {
            atb[a] += row[a] * p;
            for b in 0..3 {
                ata[a][b] += row[a] * row[b];
            }
        }
    }
    let x = solve3(ata, atb);
    // back to powers of s: c2 t² + c1 t + c0 with t = s - s1
    let (a2, a1, a0) = (x[0], x[1], x[2]);
    let c2 = a2;
    let c1 = a1 - 2.0 * a2 * s1;
    let c0 = a0 - a1 * s1 + a2 * s1 * s1;
    if !(c2 > 0.0) {
        return Err(PhaseError::TailFit { c2 });
    }
    Ok([c2, c1, c0])
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap_or(col);
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in row + 1..3 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    x
}

/// `∫_S^∞ γ/(c₂s² + c₁s + c₀) ds` for a positive quadratic.
pub fn quadratic_tail(gamma: f64, c: [f64; 3], s: f64) -> Result<f64, PhaseError> {
    let [c2, c1, c0] = c;
    if !(c2 > 0.0) {
        return Err(PhaseError::TailFit { c2 });
    }
    let disc = 4.0 * c0 * c2 - c1 * c1;
    let x = 2.0 * c2 * s + c1;
    if disc > 0.0 {
        let r = libm::sqrt(disc);
        Ok(2.0 * gamma / r * libm::atan2(r, x))
    } else {
        // real roots left of s (the fit is positive on [S, ∞)): 2γ/x in the
        // degenerate case, logarithmic form otherwise
        let r = libm::sqrt(-disc);
        if r == 0.0 {
            Ok(2.0 * gamma / x)
        } else {
            Ok(gamma / r * libm::log((x + r) / (x - r)))
        }
    }
}

/// `Ψ(0)` and `ξ = -(2/π)Ψ(0) - 1`: the phase `∫γ/N` along `[0, 1 - e^{-S}]`
/// plus the closed-form remainder beyond `S`.
pub fn psi_at_zero(chi: f64, gamma: f64) -> Result<PhaseIndexResult, PhaseError> {
    let probe = riccati_probe(chi, gamma)?;
    let path = extend(&probe, chi, gamma, 1.0 - DELTA, Some(s_max(gamma)), false)?;
    let rho = path.rho_end().expect("endpoint leg requested");
    let (tail, tail_coeffs) = tail_from_rho(gamma, rho, path.s_end)?;
    let theta = path.phase_end() + tail;
    let psi0 = -theta;
    Ok(PhaseIndexResult {
        xi: -2.0 / PI * psi0 - 1.0,
        psi0,
        tail_coeffs,
        quad_error: (probe.est_error + path.err_estimate()) * theta.abs().max(1.0),
    })
}

/// `ξ(χ; γ)`.
pub fn xi_of_chi(chi: f64, gamma: f64) -> Result<f64, PhaseError> {
    psi_at_zero(chi, gamma).map(|r| r.xi)
}
