// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Fourier-series control waveforms.
//!
//! Each of the four control channels carries 2M+1 real coefficients: a DC
//! term plus M cosine and M sine amplitudes at the harmonics
//! f_l = l * f_max / M. Amplitudes are ordinary frequencies in MHz; the
//! conversion to angular units happens where the Hamiltonian is assembled.
//! Time samples sit at the left edge of each step, t_j = j * dt.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::CONTROL_CHANNELS;

pub const NUM_CONTROLS: usize = 4;

/// Fourier coefficients for one control channel, in MHz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlCoefficients {
    pub c0: f64,
    pub cosine: Vec<f64>,
    pub sine: Vec<f64>,
}

impl ControlCoefficients {
    pub fn zeros(m: usize) -> Self {
        ControlCoefficients {
            c0: 0.0,
            cosine: vec![0.0; m],
            sine: vec![0.0; m],
        }
    }
}

/// Frequency-domain parameterization of all four control channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseParams {
    /// Coefficients per channel, ordered as `CONTROL_CHANNELS`.
    pub controls: Vec<ControlCoefficients>,
    /// Number of harmonics per channel.
    pub m: usize,
    /// Bandwidth limit in MHz; the highest harmonic sits at f_max.
    pub f_max_mhz: f64,
    /// Gate duration in seconds.
    pub t_gate: f64,
    /// Number of time steps; dt = t_gate / n_steps.
    pub n_steps: usize,
    /// Seed that produced these parameters, when drawn randomly.
    pub seed: Option<u64>,
}

impl PulseParams {
    pub fn zeros(m: usize, f_max_mhz: f64, t_gate: f64, n_steps: usize) -> Result<Self> {
        let p = PulseParams {
            controls: (0..NUM_CONTROLS).map(|_| ControlCoefficients::zeros(m)).collect(),
            m,
            f_max_mhz,
            t_gate,
            n_steps,
            seed: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Degree-of-freedom floor: M must be at least ceil(f_max * T).
    pub fn min_harmonics(f_max_mhz: f64, t_gate: f64) -> usize {
        (f_max_mhz * 1e6 * t_gate).ceil() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.controls.len() != NUM_CONTROLS {
            return Err(Error::invalid(format!(
                "expected {NUM_CONTROLS} control channels, got {}",
                self.controls.len()
            )));
        }
        if self.n_steps < 2 {
            return Err(Error::invalid("n_steps must be >= 2"));
        }
        if !(self.t_gate > 0.0 && self.f_max_mhz > 0.0) {
            return Err(Error::invalid("t_gate and f_max must be positive"));
        }
        let floor = Self::min_harmonics(self.f_max_mhz, self.t_gate);
        if self.m < floor {
            return Err(Error::invalid(format!(
                "M = {} provides too few degrees of freedom; need at least ceil(f_max T) = {floor}",
                self.m
            )));
        }
        for c in &self.controls {
            if c.cosine.len() != self.m || c.sine.len() != self.m {
                return Err(Error::invalid("coefficient lists must have length M"));
            }
            if !c.c0.is_finite()
                || c.cosine.iter().chain(&c.sine).any(|v| !v.is_finite())
            {
                return Err(Error::invalid("coefficients must be finite"));
            }
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.t_gate / self.n_steps as f64
    }

    /// Harmonic frequency f_l in MHz (l = 1..=M).
    pub fn harmonic_mhz(&self, l: usize) -> f64 {
        l as f64 * self.f_max_mhz / self.m as f64
    }

    pub fn parameter_count(&self) -> usize {
        NUM_CONTROLS * (2 * self.m + 1)
    }

    /// Flattens to [c0, a_1..a_M, b_1..b_M] per channel, channels in order.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.parameter_count());
        for c in &self.controls {
            out.push(c.c0);
            out.extend_from_slice(&c.cosine);
            out.extend_from_slice(&c.sine);
        }
        out
    }

    /// Inverse of `to_flat`, keeping this instance's shape metadata.
    pub fn from_flat(&self, flat: &[f64]) -> PulseParams {
        assert_eq!(flat.len(), self.parameter_count());
        let mut controls = Vec::with_capacity(NUM_CONTROLS);
        let stride = 2 * self.m + 1;
        for k in 0..NUM_CONTROLS {
            let base = k * stride;
            controls.push(ControlCoefficients {
                c0: flat[base],
                cosine: flat[base + 1..base + 1 + self.m].to_vec(),
                sine: flat[base + 1 + self.m..base + stride].to_vec(),
            });
        }
        PulseParams {
            controls,
            ..self.clone()
        }
    }
}

/// Time-discretized control amplitudes, in MHz.
#[derive(Debug, Clone)]
pub struct Waveform {
    /// amplitudes[k][j] for channel k at step j.
    pub amplitudes: [Vec<f64>; NUM_CONTROLS],
    pub dt: f64,
    pub t_gate: f64,
}

impl Waveform {
    pub fn n_steps(&self) -> usize {
        self.amplitudes[0].len()
    }

    pub fn zeros(n_steps: usize, t_gate: f64) -> Self {
        Waveform {
            amplitudes: std::array::from_fn(|_| vec![0.0; n_steps]),
            dt: t_gate / n_steps as f64,
            t_gate,
        }
    }

    /// Serializes as CSV with a time column in ns and one MHz column per
    /// channel.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_ns,transmon_I_MHz,transmon_Q_MHz,cavity_I_MHz,cavity_Q_MHz\n");
        for j in 0..self.n_steps() {
            let t_ns = j as f64 * self.dt * 1e9;
            out.push_str(&format!(
                "{:.6},{:.9},{:.9},{:.9},{:.9}\n",
                t_ns,
                self.amplitudes[0][j],
                self.amplitudes[1][j],
                self.amplitudes[2][j],
                self.amplitudes[3][j],
            ));
        }
        out
    }
}

/// Evaluates the Fourier series at every time step.
pub fn synthesize(params: &PulseParams) -> Waveform {
    let n = params.n_steps;
    let dt = params.dt();
    let mut amplitudes: [Vec<f64>; NUM_CONTROLS] = std::array::from_fn(|_| vec![0.0; n]);
    let tables = FourierTables::new(params);
    for (k, coeff) in params.controls.iter().enumerate() {
        let amps = &mut amplitudes[k];
        for j in 0..n {
            amps[j] = coeff.c0;
        }
        for l in 0..params.m {
            let (a, b) = (coeff.cosine[l], coeff.sine[l]);
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let cos_row = &tables.cos[l];
            let sin_row = &tables.sin[l];
            for j in 0..n {
                amps[j] += a * cos_row[j] + b * sin_row[j];
            }
        }
    }
    Waveform {
        amplitudes,
        dt,
        t_gate: params.t_gate,
    }
}

/// Precomputed cos/sin samples of every harmonic: the Jacobian of
/// `synthesize` with respect to the coefficients. The map is linear, so the
/// tables are independent of parameter values and shared by all channels.
pub struct FourierTables {
    /// cos[l][j] = cos(2 pi f_{l+1} t_j)
    pub cos: Vec<Vec<f64>>,
    /// sin[l][j] = sin(2 pi f_{l+1} t_j)
    pub sin: Vec<Vec<f64>>,
    m: usize,
    n: usize,
}

impl FourierTables {
    pub fn new(params: &PulseParams) -> Self {
        let n = params.n_steps;
        let dt = params.dt();
        let mut cos = Vec::with_capacity(params.m);
        let mut sin = Vec::with_capacity(params.m);
        for l in 1..=params.m {
            let omega = 2.0 * std::f64::consts::PI * params.harmonic_mhz(l) * 1e6;
            let mut c = Vec::with_capacity(n);
            let mut s = Vec::with_capacity(n);
            for j in 0..n {
                let phase = omega * (j as f64 * dt);
                c.push(phase.cos());
                s.push(phase.sin());
            }
            cos.push(c);
            sin.push(s);
        }
        FourierTables {
            cos,
            sin,
            m: params.m,
            n,
        }
    }

    /// Pulls an amplitude-space gradient back to coefficient space:
    /// grad_params = J^T grad_amps, laid out like `PulseParams::to_flat`.
    pub fn pullback(&self, grad_amps: &[Vec<f64>; NUM_CONTROLS]) -> Vec<f64> {
        let stride = 2 * self.m + 1;
        let mut out = vec![0.0; NUM_CONTROLS * stride];
        for k in 0..NUM_CONTROLS {
            let g = &grad_amps[k];
            debug_assert_eq!(g.len(), self.n);
            let base = k * stride;
            out[base] = g.iter().sum();
            for l in 0..self.m {
                let cos_row = &self.cos[l];
                let sin_row = &self.sin[l];
                let mut ga = 0.0;
                let mut gb = 0.0;
                for j in 0..self.n {
                    ga += g[j] * cos_row[j];
                    gb += g[j] * sin_row[j];
                }
                out[base + 1 + l] = ga;
                out[base + 1 + self.m + l] = gb;
            }
        }
        out
    }

    /// One column of the Jacobian for a given channel, as d u_kj / d theta.
    /// `param_index` addresses the flat layout of a single channel.
    pub fn column(&self, param_index: usize) -> Vec<f64> {
        if param_index == 0 {
            return vec![1.0; self.n];
        }
        if param_index <= self.m {
            return self.cos[param_index - 1].clone();
        }
        self.sin[param_index - 1 - self.m].clone()
    }
}

/// Draws seeded random coefficients, i.i.d. uniform in
/// [-u_max/(4M), +u_max/(4M)] per control channel.
pub fn random_params(
    m: usize,
    f_max_mhz: f64,
    t_gate: f64,
    n_steps: usize,
    u_max_mhz: &[f64; NUM_CONTROLS],
    seed: u64,
) -> Result<PulseParams> {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = PulseParams::zeros(m, f_max_mhz, t_gate, n_steps)?;
    for (k, coeff) in params.controls.iter_mut().enumerate() {
        let scale = u_max_mhz[k] / (4.0 * m as f64);
        let draw = |rng: &mut ChaCha8Rng| (rng.random::<f64>() * 2.0 - 1.0) * scale;
        coeff.c0 = draw(&mut rng);
        for l in 0..m {
            coeff.cosine[l] = draw(&mut rng);
        }
        for l in 0..m {
            coeff.sine[l] = draw(&mut rng);
        }
    }
    params.seed = Some(seed);
    Ok(params)
}

/// JSON serialization of the parameter set, with explicit shape metadata.
pub fn params_to_json(params: &PulseParams) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ParamsFile {
        m: params.m,
        f_max_mhz: params.f_max_mhz,
        t_gate_us: params.t_gate * 1e6,
        n_steps: params.n_steps,
        seed: params.seed,
        channels: CONTROL_CHANNELS
            .iter()
            .zip(&params.controls)
            .map(|(ch, c)| (ch.label().to_string(), c.clone()))
            .collect(),
    })?)
}

pub fn params_from_json(text: &str) -> Result<PulseParams> {
    let file: ParamsFile = serde_json::from_str(text)?;
    let mut controls = Vec::with_capacity(NUM_CONTROLS);
    for ch in CONTROL_CHANNELS {
        let found = file
            .channels
            .iter()
            .find(|(label, _)| label == ch.label())
            .ok_or_else(|| Error::invalid(format!("missing channel {}", ch.label())))?;
        controls.push(found.1.clone());
    }
    let params = PulseParams {
        controls,
        m: file.m,
        f_max_mhz: file.f_max_mhz,
        t_gate: file.t_gate_us * 1e-6,
        n_steps: file.n_steps,
        seed: file.seed,
    };
    params.validate()?;
    Ok(params)
}

#[derive(Serialize, Deserialize)]
struct ParamsFile {
    m: usize,
    f_max_mhz: f64,
    t_gate_us: f64,
    n_steps: usize,
    seed: Option<u64>,
    channels: Vec<(String, ControlCoefficients)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn base_params() -> PulseParams {
        PulseParams::zeros(8, 8.0, 1e-6, 64).unwrap()
    }

    #[test]
    fn zero_params_give_zero_waveform() {
        let w = synthesize(&base_params());
        assert!(w.amplitudes.iter().flatten().all(|&u| u == 0.0));
    }

    #[test]
    fn dc_term_gives_constant_row() {
        let mut p = base_params();
        p.controls[2].c0 = 1.0;
        let w = synthesize(&p);
        assert!(w.amplitudes[2].iter().all(|&u| u == 1.0));
        assert!(w.amplitudes[0].iter().all(|&u| u == 0.0));
    }

    #[test]
    fn single_cosine_evaluates_at_left_edges() {
        let mut p = base_params();
        p.controls[0].cosine[0] = 1.0; // f_1 = f_max / M = 1 MHz
        let w = synthesize(&p);
        assert_relative_eq!(w.amplitudes[0][0], 1.0, epsilon = 1e-14);
        // quarter period of 1 MHz = 250 ns = step 16
        assert_relative_eq!(w.amplitudes[0][16], 0.0, epsilon = 1e-9);
    }

    #[test]
    fn synthesis_is_linear_in_params() {
        let mut p = base_params();
        p.controls[1].cosine[3] = 0.4;
        p.controls[3].sine[5] = -0.2;
        let mut q = base_params();
        q.controls[1].cosine[3] = -0.1;
        q.controls[3].c0 = 0.9;

        let (alpha, beta) = (1.7, -0.6);
        let combined = p.from_flat(
            &p.to_flat()
                .iter()
                .zip(q.to_flat())
                .map(|(&a, b)| alpha * a + beta * b)
                .collect::<Vec<_>>(),
        );
        let wa = synthesize(&p);
        let wb = synthesize(&q);
        let wc = synthesize(&combined);
        for k in 0..NUM_CONTROLS {
            for j in 0..64 {
                let expected = alpha * wa.amplitudes[k][j] + beta * wb.amplitudes[k][j];
                assert_relative_eq!(wc.amplitudes[k][j], expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn jacobian_columns() {
        let p = base_params();
        let tables = FourierTables::new(&p);
        assert!(tables.column(0).iter().all(|&v| v == 1.0));
        assert_relative_eq!(tables.column(1)[0], 1.0, epsilon = 1e-15); // cos(0)
        assert_relative_eq!(tables.column(1 + p.m)[0], 0.0, epsilon = 1e-15); // sin(0)
    }

    #[test]
    fn jacobian_matches_central_differences() {
        let mut p = base_params();
        // random-ish starting point
        for (k, c) in p.controls.iter_mut().enumerate() {
            c.c0 = 0.1 * (k as f64 + 1.0);
            for l in 0..p.m {
                c.cosine[l] = 0.05 * ((k + l) as f64).sin();
                c.sine[l] = 0.03 * ((2 * k + l) as f64).cos();
            }
        }
        let tables = FourierTables::new(&p);
        let eps = 1e-6;
        let flat = p.to_flat();
        let stride = 2 * p.m + 1;
        for probe in [0usize, 1, 5, p.m, p.m + 1, 2 * p.m] {
            for k in 0..NUM_CONTROLS {
                let idx = k * stride + probe;
                let mut up = flat.clone();
                let mut down = flat.clone();
                up[idx] += eps;
                down[idx] -= eps;
                let wu = synthesize(&p.from_flat(&up));
                let wd = synthesize(&p.from_flat(&down));
                let col = tables.column(probe);
                for j in (0..p.n_steps).step_by(7) {
                    let fd = (wu.amplitudes[k][j] - wd.amplitudes[k][j]) / (2.0 * eps);
                    assert_relative_eq!(fd, col[j], epsilon = 1e-8, max_relative = 1e-8);
                }
            }
        }
    }

    #[test]
    fn spectrum_has_no_power_above_f_max() {
        let p = random_params(8, 8.0, 1e-6, 256, &[20.0, 20.0, 3.0, 3.0], 11).unwrap();
        let w = synthesize(&p);
        // plain DFT of channel 0 over the gate window
        let n = w.n_steps();
        let mut in_band = 0.0f64;
        let mut out_band = 0.0f64;
        for bin in 0..n / 2 {
            let f_mhz = bin as f64 / (w.t_gate * 1e6);
            let (mut re, mut im) = (0.0, 0.0);
            for j in 0..n {
                let phase = -2.0 * std::f64::consts::PI * bin as f64 * j as f64 / n as f64;
                re += w.amplitudes[0][j] * phase.cos();
                im += w.amplitudes[0][j] * phase.sin();
            }
            let power = re * re + im * im;
            // harmonics sit on exact DFT bins because f_l T is an integer
            if f_mhz <= p.f_max_mhz + 1e-9 {
                in_band += power;
            } else {
                out_band += power;
            }
        }
        assert!(
            out_band < 1e-10 * in_band.max(1e-300),
            "out-of-band power {out_band:.3e} vs in-band {in_band:.3e}"
        );
    }

    #[test]
    fn m_floor_enforced() {
        // f_max * T = 8, so M = 7 is too few
        assert!(PulseParams::zeros(7, 8.0, 1e-6, 64).is_err());
        assert!(PulseParams::zeros(8, 8.0, 1e-6, 64).is_ok());
    }

    #[test]
    fn random_params_deterministic_and_bounded() {
        let u_max = [20.0, 20.0, 3.0, 3.0];
        let p1 = random_params(30, 30.0, 1e-6, 500, &u_max, 7).unwrap();
        let p2 = random_params(30, 30.0, 1e-6, 500, &u_max, 7).unwrap();
        assert_eq!(p1, p2);
        let p3 = random_params(30, 30.0, 1e-6, 500, &u_max, 8).unwrap();
        assert_ne!(p1, p3);
        for (k, c) in p1.controls.iter().enumerate() {
            let bound = u_max[k] / (4.0 * 30.0);
            assert!(c.c0.abs() <= bound);
            assert!(c.cosine.iter().chain(&c.sine).all(|v| v.abs() <= bound));
        }
    }

    #[test]
    fn params_json_roundtrip() {
        let p = random_params(8, 8.0, 1e-6, 64, &[20.0, 20.0, 3.0, 3.0], 3).unwrap();
        let json = params_to_json(&p).unwrap();
        let q = params_from_json(&json).unwrap();
        assert_eq!(p, q);
    }
}
