//! Numerical solution of the emission memory equation for the excited-state
//! amplitude,
//!
//! ```text
//! ċ(t) = −C ∫₀^{ω_max} dω ω³ ∫₀ᵗ dt′ e^{i(Ω0−ω)(t−t′)} c(t′),
//! C = (μB² / 3πħc³) · ((Ω+ω0)/Ω)²,
//! ```
//!
//! with a sharp frequency cutoff `ω_max`. Written with the memory kernel
//! `K(τ) = ∫₀^{ω_max} ω³ e^{i(Ω0−ω)τ} dω` this is a Volterra
//! integro-differential equation, solved here by product integration:
//! `c` is interpolated linearly between grid points and the kernel is
//! integrated against each hat function exactly, through the closed-form
//! antiderivatives `S1(s) = ∫₀ˢ K` and `S2(s) = ∫₀ˢ σK(σ) dσ`. The outer
//! time stepping is the trapezoidal rule.
//!
//! Because the kernel is integrated exactly, the grid only has to resolve
//! the evolution of `c` itself (decay plus the frequency shift coming from
//! the principal part of the kernel), not the optical-frequency oscillation
//! of `K`. This is what makes the physically relevant regime `Γ/Ω0 ~ 1e-15`
//! tractable.
//!
//! Internally frequencies are in units of Ω0 and times in units of 1/Ω0.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::floquet::FloquetSolution;
use crate::special::si_cin;
use crate::units::{C, HBAR, MU_B};

/// Default cutoff in units of the splitting frequency Ω0.
pub const DEFAULT_CUTOFF_RATIO: f64 = 20.0;

/// Largest accepted `Δt · |λ|`, where `λ` is the Markovian rate
/// (decay plus frequency shift) of the amplitude.
pub const MAX_STEP_PHASE: f64 = 0.1;

/// Regime limits outside which the comparison with the exponential law is
/// not expected to hold.
pub const MAX_GAMMA_OVER_SPLIT: f64 = 1e-2;
pub const MIN_CUTOFF_RATIO: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeWarning {
    /// Γ is not small compared with Ω0.
    StrongDecay,
    /// ω_max is not large compared with Ω0.
    LowCutoff,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalTrajectory {
    /// s
    pub times: Vec<f64>,
    pub amplitude: Vec<C64>,
    /// ω_max, rad/s
    pub cutoff: f64,
    /// Markovian decay rate implied by the kernel, `2πC Ω0³`, 1/s.
    pub gamma_markov: f64,
    /// Frequency shift predicted by the principal part of the kernel, rad/s.
    pub shift_predicted: f64,
    /// Slope of a least-squares fit to the unwrapped phase of `c`, rad/s.
    pub phase_drift: f64,
    pub warnings: Vec<RegimeWarning>,
}

impl SurvivalTrajectory {
    pub fn survival_probability(&self) -> impl Iterator<Item = f64> + '_ {
        self.amplitude.iter().map(|c| c.norm_sqr())
    }
}

/// Closed-form pieces of the kernel for cutoff `u_max = ω_max/Ω0`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kernel {
    // lower end of Δ = 1 − u, i.e. Δ ∈ [−l, 1]
    l: f64,
}

impl Kernel {
    pub(crate) fn new(cutoff_ratio: f64) -> Self {
        Self { l: cutoff_ratio - 1.0 }
    }

    /// `m_k = ∫₀^{u_max} u³ (1−u)^k du`
    fn moment(&self, k: usize) -> f64 {
        // (1−Δ)³Δ^k = Δ^k − 3Δ^{k+1} + 3Δ^{k+2} − Δ^{k+3}
        let p = |j: usize| (1.0 - (-self.l).powi(j as i32 + 1)) / (j as f64 + 1.0);
        p(k) - 3.0 * p(k + 1) + 3.0 * p(k + 2) - p(k + 3)
    }

    /// `∫₀^∞ K(τ) dτ = π + iP`, with `P = PV ∫ u³/(1−u) du`.
    pub(crate) fn integral(&self) -> C64 {
        let l = self.l;
        let p = -l.ln() - 3.0 * (1.0 + l) + 1.5 * (1.0 - l * l) - (1.0 + l.powi(3)) / 3.0;
        C64::new(std::f64::consts::PI, p)
    }

    fn series_threshold(&self) -> f64 {
        1.0 / self.l.max(1.0)
    }

    /// `(S1(s), S2(s))` for `s ≥ 0`.
    pub(crate) fn antiderivatives(&self, s: f64) -> (C64, C64) {
        if s <= self.series_threshold() {
            self.antiderivatives_series(s)
        } else {
            self.antiderivatives_closed(s)
        }
    }

    fn antiderivatives_series(&self, s: f64) -> (C64, C64) {
        // K(σ) = Σ (iσ)^k m_k / k!
        let mut s1 = C64::new(0.0, 0.0);
        let mut s2 = C64::new(0.0, 0.0);
        let mut ik = C64::new(1.0, 0.0);
        let mut pow = s; // s^{k+1}/k!
        for k in 0..60 {
            let m = self.moment(k);
            let t1 = ik * (m * pow / (k as f64 + 1.0));
            let t2 = ik * (m * pow * s / (k as f64 + 2.0));
            s1 += t1;
            s2 += t2;
            if k > 4 && t1.norm() < 1e-18 * s1.norm() && t2.norm() < 1e-18 * s2.norm() {
                break;
            }
            ik *= C64::i();
            pow *= s / (k as f64 + 1.0);
        }
        (s1, s2)
    }

    fn antiderivatives_closed(&self, s: f64) -> (C64, C64) {
        let l = self.l;
        let i = C64::i();
        let e_hi = C64::cis(s); // e^{iΔs} at Δ = 1
        let e_lo = C64::cis(-l * s); // at Δ = −l
        let is = C64::new(0.0, s);

        // M_n = ∫_{−l}^{1} Δ^n e^{iΔs} dΔ
        let anti = |d: f64, e: C64| -> [C64; 3] {
            [
                e / is,
                e * (d / is + 1.0 / (s * s)),
                e * (d * d / is + 2.0 * d / (s * s) - 2.0 / (is * s * s)),
            ]
        };
        let hi = anti(1.0, e_hi);
        let lo = anti(-l, e_lo);
        let m = [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]];

        let (si_a, cin_a) = si_cin(s);
        let (si_b, cin_b) = si_cin(l * s);
        // E(s) = ∫ (e^{iΔs} − 1)/Δ dΔ
        let e = C64::new(cin_b - cin_a, si_a + si_b);

        let int0 = 1.0 + l;
        let int1 = 0.5 * (1.0 - l * l);
        let int2 = (1.0 + l.powi(3)) / 3.0;

        // S1 = (1/i)[E + ∫(−3 + 3Δ − Δ²)(e^{iΔs} − 1)]
        let poly1 = -3.0 * (m[0] - int0) + 3.0 * (m[1] - int1) - (m[2] - int2);
        let s1 = (e + poly1) / i;

        // S2 = ∫ u³ g/Δ², g = e^{iΔs}(1 − iΔs) − 1, split by powers of Δ
        let t_inv2 = (1.0 - e_hi) + (1.0 - e_lo) / l;
        let t_inv1 = e - is * m[0];
        let t_0 = m[0] - is * m[1] - int0;
        let t_1 = m[1] - is * m[2] - int1;
        let s2 = t_inv2 - 3.0 * t_inv1 + 3.0 * t_0 - t_1;
        (s1, s2)
    }

    /// Hat-function weights on a uniform grid of step `h`:
    /// `q[k] = ∫_{kh}^{(k+1)h} K(τ)((k+1)h − τ)/h dτ` and
    /// `p[k] = ∫_{kh}^{(k+1)h} K(τ)(τ − kh)/h dτ` for `k < n`.
    pub(crate) fn hat_weights(&self, h: f64, n: usize) -> (Vec<C64>, Vec<C64>) {
        let anti: Vec<(C64, C64)> = (0..=n).map(|k| self.antiderivatives(k as f64 * h)).collect();
        let mut p = Vec::with_capacity(n);
        let mut q = Vec::with_capacity(n);
        for k in 0..n {
            let (s1a, s2a) = anti[k];
            let (s1b, s2b) = anti[k + 1];
            let whole = s1b - s1a;
            let first = (s2b - s2a) / h - whole * k as f64;
            p.push(first);
            q.push(whole - first);
        }
        (q, p)
    }
}

/// Coupling `C Ω0²` in units of Ω0 (the equation in reduced time reads
/// `dc/dτ = −κ ∫ u³ ∫ e^{i(1−u)(τ−τ′)} c dτ′ du`).
fn reduced_coupling(split: f64, amp: f64) -> f64 {
    MU_B * MU_B / (3.0 * std::f64::consts::PI * HBAR * C.powi(3)) * amp * amp * split * split
}

/// Integrate the memory equation on the uniform grid `t_grid` (seconds,
/// starting at 0) with frequency cutoff `omega_max` (rad/s).
pub fn memory_kernel_evolution(
    sol: &FloquetSolution,
    omega_max: f64,
    t_grid: &[f64],
) -> Result<SurvivalTrajectory> {
    let (split, amp) = sol.emission_parameters();
    if split.is_nan() || split <= 0.0 {
        return Err(domain("memory kernel needs a non-zero splitting Ω0"));
    }
    if !(omega_max.is_finite() && omega_max > split) {
        return Err(domain(format!(
            "cutoff {omega_max:e} rad/s must exceed the splitting {split:e} rad/s"
        )));
    }
    let h = check_grid(t_grid)?;
    let steps = t_grid.len() - 1;

    let cutoff_ratio = omega_max / split;
    let kernel = Kernel::new(cutoff_ratio);
    let kappa = reduced_coupling(split, amp);
    let markov = kernel.integral() * kappa; // dc/dτ ≈ −markov·c
    let hr = h * split;

    if hr * markov.norm() > MAX_STEP_PHASE {
        return Err(Error::Resolution(format!(
            "Δt·|λ| = {:.3e} exceeds {MAX_STEP_PHASE}; use at least {} steps",
            hr * markov.norm(),
            (steps as f64 * hr * markov.norm() / MAX_STEP_PHASE).ceil()
        )));
    }

    let mut warnings = Vec::new();
    let gamma_markov = 2.0 * markov.re * split;
    if gamma_markov / split > MAX_GAMMA_OVER_SPLIT {
        warnings.push(RegimeWarning::StrongDecay);
    }
    if cutoff_ratio < MIN_CUTOFF_RATIO {
        warnings.push(RegimeWarning::LowCutoff);
    }

    let amplitude = if steps == 0 {
        vec![C64::new(1.0, 0.0)]
    } else {
        let (q, p) = kernel.hat_weights(hr, steps);
        solve_volterra(kappa, hr, &q, &p)
    };

    let phase_drift = fit_phase_slope(t_grid, &amplitude);
    Ok(SurvivalTrajectory {
        times: t_grid.to_vec(),
        amplitude,
        cutoff: omega_max,
        gamma_markov,
        shift_predicted: -markov.im * split,
        phase_drift,
        warnings,
    })
}

/// Uniform grid `0, h, 2h, …` of `steps` steps reaching `t_end`.
pub fn uniform_grid(t_end: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|k| t_end * k as f64 / steps as f64).collect()
}

fn check_grid(t: &[f64]) -> Result<f64> {
    if t.is_empty() || t[0] != 0.0 {
        return Err(domain("time grid must start at 0"));
    }
    if t.len() == 1 {
        return Ok(0.0);
    }
    let h = t[1] - t[0];
    if !(h > 0.0 && h.is_finite()) {
        return Err(domain("time grid must be strictly increasing"));
    }
    for (k, &tk) in t.iter().enumerate() {
        if (tk - k as f64 * h).abs() > 1e-9 * (k as f64 * h).max(h) {
            return Err(domain(format!("time grid is not uniform at index {k}")));
        }
    }
    Ok(h)
}

// Product trapezoidal scheme:
//   I_n = Q_0 c_n + Σ_{0<j<n} (Q_{n−j} + P_{n−j−1}) c_j + P_{n−1} c_0
//   c_{n+1} = c_n − (κh/2)(I_n + I_{n+1})
fn solve_volterra(kappa: f64, h: f64, q: &[C64], p: &[C64]) -> Vec<C64> {
    let n = q.len();
    // lag weights W_m = Q_m + P_{m−1}, stored reversed so the history sum
    // runs over two forward slices
    let mut w_rev_re = vec![0.0; n + 1];
    let mut w_rev_im = vec![0.0; n + 1];
    for m in 1..n {
        let w = q[m] + p[m - 1];
        w_rev_re[n - m] = w.re;
        w_rev_im[n - m] = w.im;
    }
    let mut c_re = Vec::with_capacity(n + 1);
    let mut c_im = Vec::with_capacity(n + 1);
    c_re.push(1.0);
    c_im.push(0.0);

    let half = 0.5 * kappa * h;
    let denom = C64::new(1.0, 0.0) + q[0] * half;
    let mut i_prev = C64::new(0.0, 0.0);
    for step in 0..n {
        let next = step + 1;
        // history part of I_{next}: j = 1..next−1 with lag next−j, plus j = 0
        let (hr, hi) = if next > 1 {
            let off = n - next;
            history_dot(
                &w_rev_re[off + 1..off + next],
                &w_rev_im[off + 1..off + next],
                &c_re[1..next],
                &c_im[1..next],
            )
        } else {
            (0.0, 0.0)
        };
        let history = C64::new(hr, hi) + p[next - 1] * C64::new(c_re[0], c_im[0]);
        let c_now = C64::new(c_re[step], c_im[step]);
        let c_next = (c_now - (i_prev + history) * half) / denom;
        i_prev = history + q[0] * c_next;
        c_re.push(c_next.re);
        c_im.push(c_next.im);
    }
    c_re.into_iter().zip(c_im).map(|(re, im)| C64::new(re, im)).collect()
}

// Fixed block boundaries keep the summation order, and so the result,
// independent of the number of threads.
const DOT_BLOCK: usize = 16_384;

fn history_dot(wr: &[f64], wi: &[f64], cr: &[f64], ci: &[f64]) -> (f64, f64) {
    if wr.len() < 2 * DOT_BLOCK {
        return dot(wr, wi, cr, ci);
    }
    let partial: Vec<(f64, f64)> = (0..wr.len().div_ceil(DOT_BLOCK))
        .into_par_iter()
        .map(|b| {
            let r = b * DOT_BLOCK..((b + 1) * DOT_BLOCK).min(wr.len());
            dot(&wr[r.clone()], &wi[r.clone()], &cr[r.clone()], &ci[r])
        })
        .collect();
    partial.iter().fold((0.0, 0.0), |(re, im), (a, b)| (re + a, im + b))
}

fn dot(wr: &[f64], wi: &[f64], cr: &[f64], ci: &[f64]) -> (f64, f64) {
    const LANES: usize = 4;
    let mut acc_re = [0.0; LANES];
    let mut acc_im = [0.0; LANES];
    let chunks = wr.len() / LANES * LANES;
    for base in (0..chunks).step_by(LANES) {
        for l in 0..LANES {
            let k = base + l;
            acc_re[l] += wr[k] * cr[k] - wi[k] * ci[k];
            acc_im[l] += wr[k] * ci[k] + wi[k] * cr[k];
        }
    }
    let mut re: f64 = acc_re.iter().sum();
    let mut im: f64 = acc_im.iter().sum();
    for k in chunks..wr.len() {
        re += wr[k] * cr[k] - wi[k] * ci[k];
        im += wr[k] * ci[k] + wi[k] * cr[k];
    }
    (re, im)
}

fn fit_phase_slope(t: &[f64], c: &[C64]) -> f64 {
    if t.len() < 2 {
        return 0.0;
    }
    let mut phase = Vec::with_capacity(c.len());
    let mut last = 0.0;
    for z in c {
        let mut a = z.arg();
        let turns = ((last - a) / std::f64::consts::TAU).round();
        a += turns * std::f64::consts::TAU;
        phase.push(a);
        last = a;
    }
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let pm = phase.iter().sum::<f64>() / n;
    let (num, den) = t.iter().zip(&phase).fold((0.0, 0.0), |(num, den), (ti, pi)| {
        (num + (ti - tm) * (pi - pm), den + (ti - tm) * (ti - tm))
    });
    num / den
}
