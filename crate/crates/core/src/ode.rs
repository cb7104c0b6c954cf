//! Dormand–Prince 8(5,3) integrator with optional dense output.
//!
//! States are fixed-size real arrays; complex quantities are carried as
//! (re, im) pairs by the callers. Step control follows Hairer's DOP853 with
//! the Lund stabilization switched off, and accepted increments are applied
//! with Kahan compensation so long integrations do not drift.

use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OdeError {
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("step limit {max_steps} reached at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },
    #[error("invalid integration span from {t0} to {t1}")]
    InvalidSpan { t0: f64, t1: f64 },
    #[error("dense output requested at t = {t}, outside [{lo}, {hi}]")]
    OutsideSpan { t: f64, lo: f64, hi: f64 },
    #[error("dense output was not recorded for this solution")]
    NoDenseOutput,
}

#[derive(Debug, Clone, Copy)]
pub struct Dop853Options {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; `0` picks one automatically.
    pub h0: f64,
    pub h_max: f64,
    pub max_steps: usize,
    pub dense: bool,
}

impl Default for Dop853Options {
    fn default() -> Self {
        Self { rtol: 1e-13, atol: 1e-13, h0: 0.0, h_max: f64::INFINITY, max_steps: 200_000, dense: false }
    }
}

/// Interpolant valid on one accepted step `[t0, t0 + h]`.
#[derive(Debug, Clone)]
pub struct DenseSegment<const N: usize> {
    pub t0: f64,
    pub h: f64,
    cont: [[f64; N]; 8],
}

impl<const N: usize> DenseSegment<N> {
    pub fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let c = &self.cont;
        let mut out = [0.0; N];
        for i in 0..N {
            let conpar = c[4][i] + (c[5][i] + (c[6][i] + c[7][i] * s) * s1) * s;
            out[i] = c[0][i] + (c[1][i] + (c[2][i] + (c[3][i] + conpar * s1) * s) * s1) * s;
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Solution<const N: usize> {
    /// Accepted mesh, starting with the initial point.
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub dense: Vec<DenseSegment<N>>,
    pub accepted: usize,
    pub rejected: usize,
    pub evals: usize,
    /// Sum over accepted steps of the scaled local error estimate times the
    /// relative tolerance: a rough bound on the accumulated relative error.
    pub err_estimate: f64,
}

impl<const N: usize> Solution<N> {
    pub fn last(&self) -> [f64; N] {
        self.y[self.y.len() - 1]
    }

    pub fn t_end(&self) -> f64 {
        self.t[self.t.len() - 1]
    }

    /// State at any `t` inside the integrated span (requires dense output).
    pub fn eval(&self, t: f64) -> Result<[f64; N], OdeError> {
        if self.dense.is_empty() {
            return Err(OdeError::NoDenseOutput);
        }
        let t0 = self.t[0];
        let t1 = self.t_end();
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        if !(t >= lo && t <= hi) {
            return Err(OdeError::OutsideSpan { t, lo, hi });
        }
        if t == t0 {
            return Ok(self.y[0]);
        }
        if t == t1 {
            return Ok(self.last());
        }
        let forward = t1 > t0;
        // number of mesh points strictly before t in the direction of travel
        let i = self.t.partition_point(|&m| if forward { m <= t } else { m >= t });
        let seg = i.saturating_sub(1).min(self.dense.len() - 1);
        Ok(self.dense[seg].eval(t))
    }
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = [0.0; N];
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] = y[i] + h * acc;
    }
    out
}

#[inline]
fn lincomb<const N: usize>(terms: &[(f64, &[f64; N])]) -> [f64; N] {
    axpy(&[0.0; N], 1.0, terms)
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction) with the
/// default componentwise error scale `atol + rtol·max(|y|, |y_new|)`.
pub fn integrate<const N: usize, F>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: &Dop853Options,
) -> Result<Solution<N>, OdeError>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let (rtol, atol) = (opts.rtol, opts.atol);
    integrate_scaled(f, t0, y0, t1, opts, move |y, yn| {
        let mut s = [0.0; N];
        for i in 0..N {
            s[i] = atol + rtol * y[i].abs().max(yn[i].abs());
        }
        s
    })
}

/// As [`integrate`], with the per-component error scale supplied by `scale`
/// (called with the old and new state).
pub fn integrate_scaled<const N: usize, F, S>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: &Dop853Options,
    mut scale: S,
) -> Result<Solution<N>, OdeError>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    S: FnMut(&[f64; N], &[f64; N]) -> [f64; N],
{
    if !t0.is_finite() || !t1.is_finite() || t0 == t1 {
        return Err(OdeError::InvalidSpan { t0, t1 });
    }
    let dir = if t1 > t0 { 1.0 } else { -1.0 };
    let span = (t1 - t0).abs();
    let h_max = opts.h_max.min(span);

    let mut sol = Solution {
        t: alloc::vec![t0],
        y: alloc::vec![y0],
        dense: Vec::new(),
        accepted: 0,
        rejected: 0,
        evals: 0,
        err_estimate: 0.0,
    };

    let mut t = t0;
    let mut y = y0;
    let mut comp = [0.0; N];
    let mut k1 = f(t, &y);
    sol.evals += 1;

    let mut h = if opts.h0 > 0.0 {
        opts.h0.min(h_max)
    } else {
        initial_step(&mut f, &mut scale, t, &y, &k1, dir, h_max, &mut sol.evals)
    } * dir;

    let expo1 = 1.0 / 8.0;
    let (safe, facc1, facc2): (f64, f64, f64) = (0.9, 3.0, 1.0 / 6.0);
    let mut last_rejected = false;
    let mut steps = 0usize;

    loop {
        if steps >= opts.max_steps {
            return Err(OdeError::TooManySteps { t, max_steps: opts.max_steps });
        }
        steps += 1;
        let mut last = false;
        if dir * (t + h - t1) >= 0.0 {
            h = t1 - t;
            last = true;
        } else {
            // make t + h exact so increments and the advance of t agree
            h = (t + h) - t;
        }
        if h.abs() <= 16.0 * f64::EPSILON * t.abs().max(f64::MIN_POSITIVE) {
            return Err(OdeError::StepSizeUnderflow { t, h });
        }

        let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A43, &k3)]));
        let k5 = f(t + C5 * h, &axpy(&y, h, &[(A51, &k1), (A53, &k3), (A54, &k4)]));
        let k6 = f(t + C6 * h, &axpy(&y, h, &[(A61, &k1), (A64, &k4), (A65, &k5)]));
        let k7 = f(t + C7 * h, &axpy(&y, h, &[(A71, &k1), (A74, &k4), (A75, &k5), (A76, &k6)]));
        let k8 = f(
            t + C8 * h,
            &axpy(&y, h, &[(A81, &k1), (A84, &k4), (A85, &k5), (A86, &k6), (A87, &k7)]),
        );
        let k9 = f(
            t + C9 * h,
            &axpy(&y, h, &[(A91, &k1), (A94, &k4), (A95, &k5), (A96, &k6), (A97, &k7), (A98, &k8)]),
        );
        let k10 = f(
            t + C10 * h,
            &axpy(
                &y,
                h,
                &[(A101, &k1), (A104, &k4), (A105, &k5), (A106, &k6), (A107, &k7), (A108, &k8), (A109, &k9)],
            ),
        );
        let k11 = f(
            t + C11 * h,
            &axpy(
                &y,
                h,
                &[
                    (A111, &k1),
                    (A114, &k4),
                    (A115, &k5),
                    (A116, &k6),
                    (A117, &k7),
                    (A118, &k8),
                    (A119, &k9),
                    (A1110, &k10),
                ],
            ),
        );
        let t_new = if last { t1 } else { t + h };
        let k12 = f(
            t_new,
            &axpy(
                &y,
                h,
                &[
                    (A121, &k1),
                    (A124, &k4),
                    (A125, &k5),
                    (A126, &k6),
                    (A127, &k7),
                    (A128, &k8),
                    (A129, &k9),
                    (A1210, &k10),
                    (A1211, &k11),
                ],
            ),
        );
        sol.evals += 11;

        let incr = lincomb(&[
            (B1, &k1),
            (B6, &k6),
            (B7, &k7),
            (B8, &k8),
            (B9, &k9),
            (B10, &k10),
            (B11, &k11),
            (B12, &k12),
        ]);
        let y_trial = axpy(&y, h, &[(1.0, &incr)]);

        let sk = scale(&y, &y_trial);
        let mut err = 0.0;
        let mut err2 = 0.0;
        for i in 0..N {
            let e2 = incr[i] - BHH1 * k1[i] - BHH2 * k9[i] - BHH3 * k12[i];
            err2 += (e2 / sk[i]) * (e2 / sk[i]);
            let e = ER1 * k1[i]
                + ER6 * k6[i]
                + ER7 * k7[i]
                + ER8 * k8[i]
                + ER9 * k9[i]
                + ER10 * k10[i]
                + ER11 * k11[i]
                + ER12 * k12[i];
            err += (e / sk[i]) * (e / sk[i]);
        }
        let mut deno = err + 0.01 * err2;
        if deno <= 0.0 {
            deno = 1.0;
        }
        let err = h.abs() * err * libm::sqrt(1.0 / (deno * N as f64));

        let fac11 = libm::pow(err, expo1);
        let fac = facc2.max(facc1.min(fac11 / safe));
        let mut h_new = h / fac;

        if err <= 1.0 {
            sol.accepted += 1;
            sol.err_estimate += err * opts.rtol;
            let y_old = y;
            for i in 0..N {
                let d = h * incr[i] - comp[i];
                let s = y[i] + d;
                comp[i] = (s - y[i]) - d;
                y[i] = s;
            }
            let k13 = f(t_new, &y);
            sol.evals += 1;

            if opts.dense {
                let k14 = f(
                    t + C14 * h,
                    &axpy(
                        &y_old,
                        h,
                        &[
                            (A141, &k1),
                            (A147, &k7),
                            (A148, &k8),
                            (A149, &k9),
                            (A1410, &k10),
                            (A1411, &k11),
                            (A1412, &k12),
                            (A1413, &k13),
                        ],
                    ),
                );
                let k15 = f(
                    t + C15 * h,
                    &axpy(
                        &y_old,
                        h,
                        &[
                            (A151, &k1),
                            (A156, &k6),
                            (A157, &k7),
                            (A158, &k8),
                            (A1511, &k11),
                            (A1512, &k12),
                            (A1513, &k13),
                            (A1514, &k14),
                        ],
                    ),
                );
                let k16 = f(
                    t + C16 * h,
                    &axpy(
                        &y_old,
                        h,
                        &[
                            (A161, &k1),
                            (A166, &k6),
                            (A167, &k7),
                            (A168, &k8),
                            (A169, &k9),
                            (A1613, &k13),
                            (A1614, &k14),
                            (A1615, &k15),
                        ],
                    ),
                );
                sol.evals += 3;
                let mut cont = [[0.0; N]; 8];
                for i in 0..N {
                    let ydiff = y[i] - y_old[i];
                    let bspl = h * k1[i] - ydiff;
                    cont[0][i] = y_old[i];
                    cont[1][i] = ydiff;
                    cont[2][i] = bspl;
                    cont[3][i] = ydiff - h * k13[i] - bspl;
                }
                let d = [
                    [D41, D46, D47, D48, D49, D410, D411, D412, D413, D414, D415, D416],
                    [D51, D56, D57, D58, D59, D510, D511, D512, D513, D514, D515, D516],
                    [D61, D66, D67, D68, D69, D610, D611, D612, D613, D614, D615, D616],
                    [D71, D76, D77, D78, D79, D710, D711, D712, D713, D714, D715, D716],
                ];
                let ks = [&k1, &k6, &k7, &k8, &k9, &k10, &k11, &k12, &k13, &k14, &k15, &k16];
                for (row, dr) in d.iter().enumerate() {
                    for i in 0..N {
                        let mut acc = 0.0;
                        for (c, k) in dr.iter().zip(ks.iter()) {
                            acc += c * k[i];
                        }
                        cont[4 + row][i] = h * acc;
                    }
                }
                sol.dense.push(DenseSegment { t0: t, h, cont });
            }

            k1 = k13;
            t = t_new;
            sol.t.push(t);
            sol.y.push(y);
            if last {
                return Ok(sol);
            }
            if last_rejected {
                h_new = dir * h_new.abs().min(h.abs());
            }
            last_rejected = false;
        } else {
            h_new = h / facc1.min(fac11 / safe);
            sol.rejected += 1;
            last_rejected = true;
        }
        h = dir * h_new.abs().min(h_max);
    }
}

#[allow(clippy::too_many_arguments)]
fn initial_step<const N: usize, F, S>(
    f: &mut F,
    scale: &mut S,
    t: f64,
    y: &[f64; N],
    f0: &[f64; N],
    dir: f64,
    h_max: f64,
    evals: &mut usize,
) -> f64
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    S: FnMut(&[f64; N], &[f64; N]) -> [f64; N],
{
    let sk = scale(y, y);
    let norm = |v: &[f64; N]| -> f64 {
        libm::sqrt(v.iter().zip(sk.iter()).map(|(a, s)| (a / s) * (a / s)).sum::<f64>() / N as f64)
    };
    let dnf = norm(f0);
    let dny = norm(y);
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1e-6 } else { 0.01 * dny / dnf };
    h = h.min(h_max);
    let y1 = axpy(y, dir * h, &[(1.0, f0)]);
    let f1 = f(t + dir * h, &y1);
    *evals += 1;
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let der2 = norm(&diff) / h;
    let der12 = der2.abs().max(dnf);
    let h1 = if der12 <= 1e-15 || !der12.is_finite() {
        1e-6f64.max(h.abs() * 1e-3)
    } else {
        libm::pow(0.01 / der12, 1.0 / 8.0)
    };
    (100.0 * h).min(h1).min(h_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_is_accurate() {
        let opts = Dop853Options { rtol: 1e-13, atol: 1e-13, dense: true, ..Default::default() };
        let sol = integrate(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [0.0, 1.0], 20.0, &opts).unwrap();
        let y = sol.last();
        assert!((y[0] - libm::sin(20.0)).abs() < 1e-11, "{}", y[0] - libm::sin(20.0));
        assert!((y[1] - libm::cos(20.0)).abs() < 1e-11);
        assert_eq!(sol.t_end(), 20.0);
        for t in [0.0, 0.3, 7.77, 19.999, 20.0] {
            let v = sol.eval(t).unwrap();
            assert!((v[0] - libm::sin(t)).abs() < 1e-11, "t={t} {}", v[0] - libm::sin(t));
        }
        assert!(sol.eval(20.5).is_err());
    }

    #[test]
    fn backward_integration_and_dense_output() {
        let opts = Dop853Options { dense: true, ..Default::default() };
        let sol = integrate(|_, y: &[f64; 1]| [y[0]], 2.0, [libm::exp(2.0)], 0.0, &opts).unwrap();
        assert!((sol.last()[0] - 1.0).abs() < 1e-12);
        let v = sol.eval(0.5).unwrap()[0];
        assert!((v - libm::exp(0.5)).abs() < 1e-12 * libm::exp(0.5));
    }

    #[test]
    fn rejects_empty_span() {
        let r = integrate(|_, y: &[f64; 1]| [y[0]], 1.0, [1.0], 1.0, &Dop853Options::default());
        assert!(matches!(r, Err(OdeError::InvalidSpan { .. })));
    }

    #[test]
    fn deterministic() {
        let opts = Dop853Options::default();
        let f = |t: f64, y: &[f64; 2]| [y[1], -libm::sin(t) * y[0]];
        let a = integrate(f, 0.0, [1.0, 0.0], 9.0, &opts).unwrap().last();
        let b = integrate(f, 0.0, [1.0, 0.0], 9.0, &opts).unwrap().last();
        assert_eq!(a[0].to_bits(), b[0].to_bits());
    }
}

// Dormand–Prince 8(5,3) tableau (Hairer's DOP853).
#[allow(clippy::excessive_precision)]
mod tableau {
    pub const A21: f64 = 5.26001519587677318785587544488e-2;
    pub const A31: f64 = 1.97250569845378994544595329183e-2;
    pub const A32: f64 = 5.91751709536136983633785987549e-2;
    pub const A41: f64 = 2.95875854768068491816892993775e-2;
    pub const A43: f64 = 8.87627564304205475450678981324e-2;
    pub const A51: f64 = 2.41365134159266685502369798665e-1;
    pub const A53: f64 = -8.84549479328286085344864962717e-1;
    pub const A54: f64 = 9.24834003261792003115737966543e-1;
    pub const A61: f64 = 3.7037037037037037037037037037e-2;
    pub const A64: f64 = 1.70828608729473871279604482173e-1;
    pub const A65: f64 = 1.25467687566822425016691814123e-1;
    pub const A71: f64 = 3.7109375e-2;
    pub const A74: f64 = 1.70252211019544039314978060272e-1;
    pub const A75: f64 = 6.02165389804559606850219397283e-2;
    pub const A76: f64 = -1.7578125e-2;
    pub const A81: f64 = 3.70920001185047927108779319836e-2;
    pub const A84: f64 = 1.70383925712239993810214054705e-1;
    pub const A85: f64 = 1.07262030446373284651809199168e-1;
    pub const A86: f64 = -1.53194377486244017527936158236e-2;
    pub const A87: f64 = 8.27378916381402288758473766002e-3;
    pub const A91: f64 = 6.24110958716075717114429577812e-1;
    pub const A94: f64 = -3.36089262944694129406857109825e0;
    pub const A95: f64 = -8.68219346841726006818189891453e-1;
    pub const A96: f64 = 2.75920996994467083049415600797e1;
    pub const A97: f64 = 2.01540675504778934086186788979e1;
    pub const A98: f64 = -4.34898841810699588477366255144e1;
    pub const A101: f64 = 4.77662536438264365890433908527e-1;
    pub const A104: f64 = -2.48811461997166764192642586468e0;
    pub const A105: f64 = -5.90290826836842996371446475743e-1;
    pub const A106: f64 = 2.12300514481811942347288949897e1;
    pub const A107: f64 = 1.52792336328824235832596922938e1;
    pub const A108: f64 = -3.32882109689848629194453265587e1;
    pub const A109: f64 = -2.03312017085086261358222928593e-2;
    pub const A111: f64 = -9.3714243008598732571704021658e-1;
    pub const A114: f64 = 5.18637242884406370830023853209e0;
    pub const A115: f64 = 1.09143734899672957818500254654e0;
    pub const A116: f64 = -8.14978701074692612513997267357e0;
    pub const A117: f64 = -1.85200656599969598641566180701e1;
    pub const A118: f64 = 2.27394870993505042818970056734e1;
    pub const A119: f64 = 2.49360555267965238987089396762e0;
    pub const A1110: f64 = -3.0467644718982195003823669022e0;
    pub const A121: f64 = 2.27331014751653820792359768449e0;
    pub const A124: f64 = -1.05344954667372501984066689879e1;
    pub const A125: f64 = -2.00087205822486249909675718444e0;
    pub const A126: f64 = -1.79589318631187989172765950534e1;
    pub const A127: f64 = 2.79488845294199600508499808837e1;
    pub const A128: f64 = -2.85899827713502369474065508674e0;
    pub const A129: f64 = -8.87285693353062954433549289258e0;
    pub const A1210: f64 = 1.23605671757943030647266201528e1;
    pub const A1211: f64 = 6.43392746015763530355970484046e-1;
    pub const A141: f64 = 5.61675022830479523392909219681e-2;
    pub const A147: f64 = 2.53500210216624811088794765333e-1;
    pub const A148: f64 = -2.46239037470802489917441475441e-1;
    pub const A149: f64 = -1.24191423263816360469010140626e-1;
    pub const A1410: f64 = 1.5329179827876569731206322685e-1;
    pub const A1411: f64 = 8.20105229563468988491666602057e-3;
    pub const A1412: f64 = 7.56789766054569976138603589584e-3;
    pub const A1413: f64 = -8.298e-3;
    pub const A151: f64 = 3.18346481635021405060768473261e-2;
    pub const A156: f64 = 2.83009096723667755288322961402e-2;
    pub const A157: f64 = 5.35419883074385676223797384372e-2;
    pub const A158: f64 = -5.49237485713909884646569340306e-2;
    pub const A1511: f64 = -1.08347328697249322858509316994e-4;
    pub const A1512: f64 = 3.82571090835658412954920192323e-4;
    pub const A1513: f64 = -3.40465008687404560802977114492e-4;
    pub const A1514: f64 = 1.41312443674632500278074618366e-1;
    pub const A161: f64 = -4.28896301583791923408573538692e-1;
    pub const A166: f64 = -4.69762141536116384314449447206e0;
    pub const A167: f64 = 7.68342119606259904184240953878e0;
    pub const A168: f64 = 4.06898981839711007970213554331e0;
    pub const A169: f64 = 3.56727187455281109270669543021e-1;
    pub const A1613: f64 = -1.39902416515901462129418009734e-3;
    pub const A1614: f64 = 2.9475147891527723389556272149e0;
    pub const A1615: f64 = -9.15095847217987001081870187138e0;
    pub const B1: f64 = 5.42937341165687622380535766363e-2;
    pub const B6: f64 = 4.45031289275240888144113950566e0;
    pub const B7: f64 = 1.89151789931450038304281599044e0;
    pub const B8: f64 = -5.8012039600105847814672114227e0;
    pub const B9: f64 = 3.1116436695781989440891606237e-1;
    pub const B10: f64 = -1.52160949662516078556178806805e-1;
    pub const B11: f64 = 2.01365400804030348374776537501e-1;
    pub const B12: f64 = 4.47106157277725905176885569043e-2;
    pub const BHH1: f64 = 0.244094488188976377952755905512e00;
    pub const BHH2: f64 = 0.733846688281611857341361741547e00;
    pub const BHH3: f64 = 0.220588235294117647058823529412e-01;
    pub const C2: f64 = 0.526001519587677318785587544488e-01;
    pub const C3: f64 = 0.789002279381515978178381316732e-01;
    pub const C4: f64 = 0.118350341907227396726757197510e00;
    pub const C5: f64 = 0.281649658092772603273242802490e00;
    pub const C6: f64 = 0.333333333333333333333333333333e00;
    pub const C7: f64 = 0.25e00;
    pub const C8: f64 = 0.307692307692307692307692307692e00;
    pub const C9: f64 = 0.651282051282051282051282051282e00;
    pub const C10: f64 = 0.6e00;
    pub const C11: f64 = 0.857142857142857142857142857142e00;
    pub const C14: f64 = 0.1e00;
    pub const C15: f64 = 0.2e00;
    pub const C16: f64 = 0.777777777777777777777777777778e00;
    pub const ER1: f64 = 0.1312004499419488073250102996e-01;
    pub const ER6: f64 = -0.1225156446376204440720569753e01;
    pub const ER7: f64 = -0.4957589496572501915214079952e00;
    pub const ER8: f64 = 0.1664377182454986536961530415e01;
    pub const ER9: f64 = -0.3503288487499736816886487290e00;
    pub const ER10: f64 = 0.3341791187130174790297318841e00;
    pub const ER11: f64 = 0.8192320648511571246570742613e-01;
    pub const ER12: f64 = -0.2235530786388629525884427845e-01;
    pub const D41: f64 = -0.84289382761090128651353491142e01;
    pub const D46: f64 = 0.56671495351937776962531783590e00;
    pub const D47: f64 = -0.30689499459498916912797304727e01;
    pub const D48: f64 = 0.23846676565120698287728149680e01;
    pub const D49: f64 = 0.21170345824450282767155149946e01;
    pub const D410: f64 = -0.87139158377797299206789907490e00;
    pub const D411: f64 = 0.22404374302607882758541771650e01;
    pub const D412: f64 = 0.63157877876946881815570249290e00;
    pub const D413: f64 = -0.88990336451333310820698117400e-01;
    pub const D414: f64 = 0.18148505520854727256656404962e02;
    pub const D415: f64 = -0.91946323924783554000451984436e01;
    pub const D416: f64 = -0.44360363875948939664310572000e01;
    pub const D51: f64 = 0.10427508642579134603413151009e02;
    pub const D56: f64 = 0.24228349177525818288430175319e03;
    pub const D57: f64 = 0.16520045171727028198505394887e03;
    pub const D58: f64 = -0.37454675472269020279518312152e03;
    pub const D59: f64 = -0.22113666853125306036270938578e02;
    pub const D510: f64 = 0.77334326684722638389603898808e01;
    pub const D511: f64 = -0.30674084731089398182061213626e02;
    pub const D512: f64 = -0.93321305264302278729567221706e01;
    pub const D513: f64 = 0.15697238121770843886131091075e02;
    pub const D514: f64 = -0.31139403219565177677282850411e02;
    pub const D515: f64 = -0.93529243588444783865713862664e01;
    pub const D516: f64 = 0.35816841486394083752465898540e02;
    pub const D61: f64 = 0.19985053242002433820987653617e02;
    pub const D66: f64 = -0.38703730874935176555105901742e03;
    pub const D67: f64 = -0.18917813819516756882830838328e03;
    pub const D68: f64 = 0.52780815920542364900561016686e03;
    pub const D69: f64 = -0.11573902539959630126141871134e02;
    pub const D610: f64 = 0.68812326946963000169666922661e01;
    pub const D611: f64 = -0.10006050966910838403183860980e01;
    pub const D612: f64 = 0.77771377980534432092869265740e00;
    pub const D613: f64 = -0.27782057523535084065932004339e01;
    pub const D614: f64 = -0.60196695231264120758267380846e02;
    pub const D615: f64 = 0.84320405506677161018159903784e02;
    pub const D616: f64 = 0.11992291136182789328035130030e02;
    pub const D71: f64 = -0.25693933462703749003312586129e02;
    pub const D76: f64 = -0.15418974869023643374053993627e03;
    pub const D77: f64 = -0.23152937917604549567536039109e03;
    pub const D78: f64 = 0.35763911791061412378285349910e03;
    pub const D79: f64 = 0.93405324183624310003907691704e02;
    pub const D710: f64 = -0.37458323136451633156875139351e02;
    pub const D711: f64 = 0.10409964950896230045147246184e03;
    pub const D712: f64 = 0.29840293426660503123344363579e02;
    pub const D713: f64 = -0.43533456590011143754432175058e02;
    pub const D714: f64 = 0.96324553959188282948394950600e02;
    pub const D715: f64 = -0.39177261675615439165231486172e02;

    pub const D716: f64 = -0.14972683625798562581422125276e3;
}
use tableau::*;
