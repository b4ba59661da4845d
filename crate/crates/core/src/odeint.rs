//! Dormand-Prince 5(4) integration with PI step control and dense output.

use crate::error::{Error, Result};
use std::f64::consts::TAU;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const BETA: f64 = 0.04;
const EXPO: f64 = 0.2 - BETA * 0.75;
const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Tolerances and step limits for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
    /// Cap the step at `2 pi / |s|` so the `s^2/4` phase of the tails is
    /// resolved.
    pub tail_resolve: bool,
    /// Measure the local error per unit step (`|err| <= tol * |h|`), so the
    /// accumulated error stays near `tol` over long spans of small steps.
    pub per_unit_step: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-12,
            max_step: 0.1,
            max_steps: 2_000_000,
            tail_resolve: true,
            per_unit_step: true,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        IntegratorConfig { rel_tol, abs_tol, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidInput("tolerances must be > 0".into()));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::InvalidInput("max_step must be > 0".into()));
        }
        if self.max_steps < 1 {
            return Err(Error::InvalidInput("max_steps must be >= 1".into()));
        }
        Ok(())
    }

    /// Largest step allowed at `s`.
    pub fn step_cap(&self, s: f64) -> f64 {
        if self.tail_resolve && s != 0.0 {
            self.max_step.min(TAU / s.abs())
        } else {
            self.max_step
        }
    }
}

/// Per-step record: accepted step size and its scaled error norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    pub h: f64,
    pub err: f64,
}

#[derive(Debug, Clone, Copy)]
struct Segment<const N: usize> {
    s_old: f64,
    h: f64,
    r: [[f64; N]; 5],
}

impl<const N: usize> Segment<N> {
    fn eval(&self, s: f64) -> [f64; N] {
        let th = (s - self.s_old) / self.h;
        let th1 = 1.0 - th;
        let mut y = [0.0; N];
        for i in 0..N {
            let r = &self.r;
            y[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
        }
        y
    }
}

/// Accepted nodes of an integration, in increasing `s`, with the dense
/// interpolant of every step.
#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    s: Vec<f64>,
    y: Vec<[f64; N]>,
    // segments[k] spans s[k]..s[k+1]
    seg: Vec<Segment<N>>,
    info: Vec<StepInfo>,
    rejected: usize,
    evaluations: usize,
}

impl<const N: usize> Trajectory<N> {
    pub fn nodes(&self) -> &[f64] {
        &self.s
    }

    pub fn states(&self) -> &[[f64; N]] {
        &self.y
    }

    /// Step diagnostics; `steps()[k]` belongs to the interval ending or
    /// starting at node `k` (whichever the integration reached it from).
    pub fn steps(&self) -> &[StepInfo] {
        &self.info
    }

    pub fn rejected_steps(&self) -> usize {
        self.rejected
    }

    pub fn rhs_evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn s_min(&self) -> f64 {
        self.s[0]
    }

    pub fn s_max(&self) -> f64 {
        *self.s.last().expect("trajectory has at least one node")
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.s_min() && s <= self.s_max()
    }

    /// Dense-output state at `s`. Node points return the stored state.
    pub fn eval(&self, s: f64) -> Result<[f64; N]> {
        if !self.contains(s) {
            return Err(Error::OutOfRange { s, lo: self.s_min(), hi: self.s_max() });
        }
        let k = self.s.partition_point(|&x| x < s);
        if k < self.s.len() && self.s[k] == s {
            return Ok(self.y[k]);
        }
        Ok(self.seg[k - 1].eval(s))
    }

    /// Samples on a uniform grid of `n >= 2` points over the span.
    pub fn sample_uniform(&self, n: usize) -> Vec<(f64, [f64; N])> {
        let (lo, hi) = (self.s_min(), self.s_max());
        (0..n)
            .map(|k| {
                let s = if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1).max(1) as f64 };
                (s, self.eval(s).expect("grid inside span"))
            })
            .collect()
    }

    /// Joins a run that went backward from `s0` with one that went forward
    /// from the same `s0`.
    pub fn join(backward: Trajectory<N>, forward: Trajectory<N>) -> Result<Trajectory<N>> {
        if backward.s_max() != forward.s_min() {
            return Err(Error::InvalidInput("trajectories do not share an end point".into()));
        }
        let mut t = backward;
        t.s.extend_from_slice(&forward.s[1..]);
        t.y.extend_from_slice(&forward.y[1..]);
        t.seg.extend_from_slice(&forward.seg);
        t.info.extend_from_slice(&forward.info);
        t.rejected += forward.rejected;
        t.evaluations += forward.evaluations;
        Ok(t)
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for &(c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

fn finite<const N: usize>(v: &[f64; N]) -> bool {
    v.iter().all(|x| x.is_finite())
}

fn err_norm<const N: usize>(y0: &[f64; N], y1: &[f64; N], e: &[f64; N], cfg: &IntegratorConfig) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let sc = cfg.abs_tol + cfg.rel_tol * y0[i].abs().max(y1[i].abs());
        acc += (e[i] / sc).powi(2);
    }
    (acc / N as f64).sqrt()
}

fn initial_step<const N: usize, F>(f: &mut F, s0: f64, y0: &[f64; N], k1: &[f64; N], dir: f64, cap: f64, cfg: &IntegratorConfig) -> (f64, usize)
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let d0 = err_norm(y0, y0, y0, cfg);
    let d1 = err_norm(y0, y0, k1, cfg);
    let mut h = if d0 < 1e-10 || d1 < 1e-10 { 1e-6 } else { 0.01 * d0 / d1 };
    h = h.min(cap);
    let y1 = axpy(y0, dir * h, &[(1.0, k1)]);
    let k2 = f(s0 + dir * h, &y1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = k2[i] - k1[i];
    }
    let d2 = err_norm(y0, y0, &diff, cfg) / h;
    let m = d1.max(d2);
    let h1 = if m <= 1e-15 { (h * 1e-3).max(1e-6) } else { (0.01 / m).powf(0.2) };
    ((100.0 * h).min(h1).min(cap), 1)
}

/// Integrates `y' = f(s, y)` from `s_from` to `s_to`.
pub fn integrate<const N: usize, F>(mut f: F, y0: [f64; N], s_from: f64, s_to: f64, cfg: &IntegratorConfig) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    cfg.validate()?;
    if !(s_from.is_finite() && s_to.is_finite()) || s_from == s_to {
        return Err(Error::InvalidInput("integration span must be finite and non-empty".into()));
    }
    if !finite(&y0) {
        return Err(Error::InvalidInput("initial state is not finite".into()));
    }
    let dir = (s_to - s_from).signum();
    let mut s = s_from;
    let mut y = y0;
    let mut k1 = f(s, &y);
    let mut evals = 1;
    if !finite(&k1) {
        return Err(Error::InvalidInput("right-hand side is not finite at the initial state".into()));
    }
    let (mut h, e) = initial_step(&mut f, s, &y, &k1, dir, cfg.step_cap(s), cfg);
    evals += e;

    let mut ss = vec![s];
    let mut ys = vec![y];
    let mut segs: Vec<Segment<N>> = Vec::new();
    let mut info = Vec::new();
    let mut rejected = 0usize;
    let mut err_old = 1e-4_f64;
    let mut last_rejected = false;
    let mut steps = 0usize;

    loop {
        if steps >= cfg.max_steps {
            return Err(Error::MaxStepsExceeded { s, max_steps: cfg.max_steps });
        }
        let cap = cfg.step_cap(s);
        h = h.min(cap);
        let remaining = (s_to - s).abs();
        let last = h >= remaining * (1.0 - 1e-12);
        if last {
            h = remaining;
        }
        let h_min = 1e-13 * s.abs().max(1.0);
        if h < h_min {
            return Err(Error::StepUnderflow { s, h });
        }
        let hs = dir * h;

        let k2 = f(s + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
        let k3 = f(s + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(s + C4 * hs, &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(s + C5 * hs, &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let y6 = axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
        let s_new = if last { s_to } else { s + hs };
        let k6 = f(s_new, &y6);
        let y_new = axpy(&y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(s_new, &y_new);
        evals += 6;
        steps += 1;

        let mut e = [0.0; N];
        for i in 0..N {
            e[i] = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let err = if finite(&y_new) && finite(&k7) { err_norm(&y, &y_new, &e, cfg) } else { f64::INFINITY };
        let err = if cfg.per_unit_step { err / h.min(1.0) } else { err };

        if err <= 1.0 {
            let mut r = [[0.0; N]; 5];
            for i in 0..N {
                let dy = y_new[i] - y[i];
                let bspl = hs * k1[i] - dy;
                r[0][i] = y[i];
                r[1][i] = dy;
                r[2][i] = bspl;
                r[3][i] = dy - hs * k7[i] - bspl;
                r[4][i] = hs
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            segs.push(Segment { s_old: s, h: hs, r });
            info.push(StepInfo { h: hs, err });
            s = s_new;
            y = y_new;
            k1 = k7;
            ss.push(s);
            ys.push(y);
            if last {
                break;
            }
            let fac = if err == 0.0 {
                FAC_MAX
            } else {
                (SAFETY * err.powf(-EXPO) * err_old.powf(BETA)).clamp(FAC_MIN, FAC_MAX)
            };
            let fac = if last_rejected { fac.min(1.0) } else { fac };
            h *= fac;
            err_old = err.max(1e-4);
            last_rejected = false;
        } else {
            rejected += 1;
            last_rejected = true;
            let fac = if err.is_finite() { (SAFETY * err.powf(-EXPO)).clamp(FAC_MIN, 1.0) } else { 0.1 };
            h *= fac;
        }
    }

    if dir < 0.0 {
        ss.reverse();
        ys.reverse();
        segs.reverse();
        info.reverse();
    }
    Ok(Trajectory { s: ss, y: ys, seg: segs, info, rejected, evaluations: evals })
}

/// Integrates backward from `s0` to `s_lo` and forward from `s0` to `s_hi`,
/// returning one trajectory over `[s_lo, s_hi]`.
pub fn integrate_two_sided<const N: usize, F>(mut f: F, y0: [f64; N], s0: f64, s_lo: f64, s_hi: f64, cfg: &IntegratorConfig) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    if !(s_lo <= s0 && s0 <= s_hi) || s_lo == s_hi {
        return Err(Error::InvalidInput("need s_lo <= s0 <= s_hi with s_lo < s_hi".into()));
    }
    if s_lo == s0 {
        return integrate(f, y0, s0, s_hi, cfg);
    }
    if s_hi == s0 {
        return integrate(f, y0, s0, s_lo, cfg);
    }
    let back = integrate(&mut f, y0, s0, s_lo, cfg)?;
    let fwd = integrate(&mut f, y0, s0, s_hi, cfg)?;
    Trajectory::join(back, fwd)
}

/// Classical fixed-step Dormand-Prince 5th-order update, `n` equal steps.
/// Used to check convergence order.
pub fn integrate_fixed<const N: usize, F>(mut f: F, y0: [f64; N], s_from: f64, s_to: f64, n: usize) -> [f64; N]
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let h = (s_to - s_from) / n as f64;
    let mut y = y0;
    for j in 0..n {
        let s = s_from + j as f64 * h;
        let k1 = f(s, &y);
        let k2 = f(s + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(s + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(s + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(s + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(s + h, &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        y = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    }
    y
}
