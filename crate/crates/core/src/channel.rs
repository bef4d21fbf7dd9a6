//! Multipath links, disturbance covariances and chip-level simulation.
//!
//! One bit of `L` chips passes through an `M`-tap channel and is observed
//! over `L + M − 1` chips:
//!
//! ```text
//! y(n) = √E b(n) H s + H w(n) + z(n) + n(n)
//! ```
//!
//! where `w` is optional artificial noise, `z` is the superposition of
//! bit-synchronous interferers (each with its own multipath channel to this
//! receiver) and `n` is white noise of variance `σ²` per chip.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::an::AnCovariance;
use crate::kernel::{normalize, Cholesky, ComplexMatrix, HermitianMatrix, C64};
use crate::p2p::WaveformDesign;
use crate::rng::{antipodal, complex_gaussian};
use crate::{Error, Result};

/// Taps `h₁ … h_M` of one transmitter-to-receiver link.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelRealization {
    taps: Vec<C64>,
}

impl ChannelRealization {
    pub fn new(taps: Vec<C64>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::InvalidParameter("channel needs at least one tap".into()));
        }
        if !taps.iter().all(|t| t.is_finite()) {
            return Err(Error::InvalidParameter("channel taps must be finite".into()));
        }
        Ok(ChannelRealization { taps })
    }

    pub fn taps(&self) -> &[C64] {
        &self.taps
    }

    pub fn paths(&self) -> usize {
        self.taps.len()
    }
}

/// Rayleigh multipath: `M` i.i.d. taps, each `CN(0, 1/M)`, so the expected
/// total power is one.
pub fn draw_multipath_channel<R: Rng + ?Sized>(paths: usize, rng: &mut R) -> Result<ChannelRealization> {
    if paths == 0 {
        return Err(Error::InvalidParameter("path count must be at least 1".into()));
    }
    let var = 1.0 / paths as f64;
    ChannelRealization::new((0..paths).map(|_| complex_gaussian(rng, var)).collect())
}

/// The `(L+M−1)×L` banded Toeplitz matrix with `H[i][j] = h[i−j]`, so that
/// `H s` is the full linear convolution of `s` with the taps.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvolutionChannelMatrix {
    h: ComplexMatrix,
    taps: ChannelRealization,
    chips: usize,
}

impl ConvolutionChannelMatrix {
    pub fn new(taps: &ChannelRealization, chips: usize) -> Result<Self> {
        if chips == 0 {
            return Err(Error::InvalidParameter("waveform length must be at least 1".into()));
        }
        let m = taps.paths();
        let h = ComplexMatrix::from_fn(chips + m - 1, chips, |i, j| {
            if i >= j && i - j < m {
                taps.taps[i - j]
            } else {
                C64::ZERO
            }
        });
        Ok(ConvolutionChannelMatrix {
            h,
            taps: taps.clone(),
            chips,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.h
    }

    pub fn taps(&self) -> &ChannelRealization {
        &self.taps
    }

    /// `L`.
    pub fn chips(&self) -> usize {
        self.chips
    }

    /// `M`.
    pub fn paths(&self) -> usize {
        self.taps.paths()
    }

    /// `L + M − 1`.
    pub fn output_len(&self) -> usize {
        self.h.rows()
    }

    /// `H x`.
    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.chips {
            return Err(Error::Dimension(format!(
                "channel expects {} chips, got {}",
                self.chips,
                x.len()
            )));
        }
        Ok(self.h.mul_vec(x))
    }
}

pub fn convolution_channel_matrix(h: &ChannelRealization, chips: usize) -> Result<ConvolutionChannelMatrix> {
    ConvolutionChannelMatrix::new(h, chips)
}

/// A bit-synchronous co-channel user as seen by one receiver.
#[derive(Clone, Debug, PartialEq)]
pub struct Interferer {
    pub energy: f64,
    /// Unit-norm waveform of length `L`.
    pub waveform: Vec<C64>,
    pub channel: ConvolutionChannelMatrix,
    /// `H_j s_j`, cached.
    signature: Vec<C64>,
}

impl Interferer {
    pub fn new(energy: f64, waveform: Vec<C64>, channel: ConvolutionChannelMatrix) -> Result<Self> {
        if !(energy >= 0.0) || !energy.is_finite() {
            return Err(Error::InvalidParameter(format!("interferer energy {energy}")));
        }
        let signature = channel.apply(&waveform)?;
        Ok(Interferer {
            energy,
            waveform,
            channel,
            signature,
        })
    }

    pub fn signature(&self) -> &[C64] {
        &self.signature
    }
}

/// Inclusive ranges for the random interferer population.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterfererModel {
    pub count_min: usize,
    pub count_max: usize,
    pub energy_min: f64,
    pub energy_max: f64,
}

impl Default for InterfererModel {
    fn default() -> Self {
        InterfererModel {
            count_min: 5,
            count_max: 10,
            energy_min: 1.0,
            energy_max: 4.0,
        }
    }
}

impl InterfererModel {
    /// No interferers at all.
    pub fn none() -> Self {
        InterfererModel {
            count_min: 0,
            count_max: 0,
            energy_min: 0.0,
            energy_max: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    /// `L`, chips per bit.
    pub chips: usize,
    /// `M`, resolvable paths.
    pub paths: usize,
    pub noise_variance: f64,
    pub interferers: InterfererModel,
    pub seed: u64,
    pub isi_enabled: bool,
    pub trials: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            chips: 8,
            paths: 3,
            noise_variance: 1.0,
            interferers: InterfererModel::default(),
            seed: 0,
            isi_enabled: true,
            trials: 10_000,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidParameter(msg));
        if self.chips < 2 {
            return bad(format!("L must be at least 2, got {}", self.chips));
        }
        if self.paths < 1 {
            return bad("M must be at least 1".into());
        }
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        if !(self.noise_variance > 0.0) || !self.noise_variance.is_finite() {
            return bad(format!("noise variance must be positive, got {}", self.noise_variance));
        }
        let im = &self.interferers;
        if im.count_min > im.count_max {
            return bad(format!(
                "interferer count range {}..={} is empty",
                im.count_min, im.count_max
            ));
        }
        if !(im.energy_min >= 0.0) || !(im.energy_min <= im.energy_max) || !im.energy_max.is_finite() {
            return bad(format!(
                "interferer energy range [{}, {}] is invalid",
                im.energy_min, im.energy_max
            ));
        }
        Ok(())
    }

    /// `L + M − 1`.
    pub fn observation_len(&self) -> usize {
        self.chips + self.paths - 1
    }
}

/// `R = Σ_j E_j (H_j s_j)(H_j s_j)ᴴ + σ² I`.
#[derive(Clone, Debug, PartialEq)]
pub struct DisturbanceCovariance {
    r: HermitianMatrix,
    noise_variance: f64,
    interferers: Vec<Interferer>,
}

impl DisturbanceCovariance {
    pub fn new(dim: usize, noise_variance: f64, interferers: Vec<Interferer>) -> Result<Self> {
        if !(noise_variance > 0.0) || !noise_variance.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise variance must be positive, got {noise_variance}"
            )));
        }
        if let Some(bad) = interferers.iter().find(|i| i.signature.len() != dim) {
            return Err(Error::Dimension(format!(
                "interferer signature has length {}, receiver window is {dim}",
                bad.signature.len()
            )));
        }
        let r = HermitianMatrix::from_outer_products(
            dim,
            noise_variance,
            interferers.iter().map(|i| (i.energy, i.signature.as_slice())),
        );
        Ok(DisturbanceCovariance {
            r,
            noise_variance,
            interferers,
        })
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.r
    }

    pub fn dim(&self) -> usize {
        self.r.dim()
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn interferers(&self) -> &[Interferer] {
        &self.interferers
    }
}

/// Draw a random interferer population for one receiver and assemble its
/// disturbance covariance.
pub fn build_disturbance_covariance<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    rng: &mut R,
) -> Result<DisturbanceCovariance> {
    cfg.validate()?;
    let im = &cfg.interferers;
    let count = rng.random_range(im.count_min..=im.count_max);
    let mut interferers = Vec::with_capacity(count);
    for _ in 0..count {
        let energy = if im.energy_min == im.energy_max {
            im.energy_min
        } else {
            rng.random_range(im.energy_min..=im.energy_max)
        };
        let mut waveform: Vec<C64> = (0..cfg.chips).map(|_| complex_gaussian(rng, 1.0)).collect();
        normalize(&mut waveform);
        let channel = ConvolutionChannelMatrix::new(&draw_multipath_channel(cfg.paths, rng)?, cfg.chips)?;
        interferers.push(Interferer::new(energy, waveform, channel)?);
    }
    DisturbanceCovariance::new(cfg.observation_len(), cfg.noise_variance, interferers)
}

/// `Q = Hᴴ R⁻¹ H`, Hermitian positive definite.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveQ {
    q: HermitianMatrix,
}

impl EffectiveQ {
    /// Wrap a matrix after checking it is positive definite.
    pub fn from_hermitian(q: HermitianMatrix) -> Result<Self> {
        q.cholesky()?;
        Ok(EffectiveQ { q })
    }

    /// `Hᴴ R⁻¹ H` for an arbitrary channel matrix and disturbance covariance.
    pub fn from_parts(h: &ComplexMatrix, r: &HermitianMatrix) -> Result<Self> {
        if h.rows() != r.dim() {
            return Err(Error::Dimension(format!(
                "channel has {} rows, covariance is {}x{}",
                h.rows(),
                r.dim(),
                r.dim()
            )));
        }
        let chol = r.cholesky()?;
        // Q = (L⁻¹H)ᴴ (L⁻¹H)
        Self::from_hermitian(HermitianMatrix::gram(&chol.solve_lower_mat(h)))
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.q
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    /// `E sᴴ Q s`.
    pub fn sinr(&self, s: &[C64], energy: f64) -> f64 {
        energy * self.q.quad_form(s)
    }
}

pub fn effective_q(h: &ConvolutionChannelMatrix, r: &DisturbanceCovariance) -> Result<EffectiveQ> {
    EffectiveQ::from_parts(h.matrix(), r.matrix())
}

/// Max-SINR output `E sᴴ Q s`.
pub fn sinr(q: &EffectiveQ, s: &[C64], energy: f64) -> f64 {
    q.sinr(s, energy)
}

/// `R + H R_w Hᴴ`: the disturbance seen when artificial noise is added.
pub fn covariance_with_an(h: &ComplexMatrix, r: &HermitianMatrix, rw: &HermitianMatrix) -> HermitianMatrix {
    let hrw = h.matmul(rw.as_matrix()).matmul(&h.adjoint());
    HermitianMatrix::from_hermitian_part(&r.as_matrix().add(&hrw))
}

/// Max-SINR output of a receiver that knows the AN covariance:
/// `E sᴴ Hᴴ (R + H R_w Hᴴ)⁻¹ H s`.
pub fn sinr_with_an(
    h: &ComplexMatrix,
    r: &HermitianMatrix,
    rw: &HermitianMatrix,
    s: &[C64],
    energy: f64,
) -> Result<f64> {
    if rw.dim() != h.cols() {
        return Err(Error::Dimension(format!(
            "AN covariance is {0}x{0}, waveform length is {1}",
            rw.dim(),
            h.cols()
        )));
    }
    let total = covariance_with_an(h, r, rw);
    let chol = total.cholesky()?;
    let mut g = h.mul_vec(s);
    chol.solve_lower_in_place(&mut g);
    Ok(energy * g.iter().map(|x| x.norm_sqr()).sum::<f64>())
}

/// Max-SINR (MMSE up to scale) filter `w = R⁻¹ H s`.
pub fn max_sinr_filter(h: &ComplexMatrix, r: &HermitianMatrix, s: &[C64]) -> Result<Vec<C64>> {
    if h.rows() != r.dim() || h.cols() != s.len() {
        return Err(Error::Dimension("filter dimensions do not match".into()));
    }
    let chol: Cholesky<C64> = r.cholesky()?;
    Ok(chol.solve(&h.mul_vec(s)))
}

/// `sgn Re(wᴴ y)`, with ties resolved to `+1`.
pub fn detect(filter: &[C64], y: &[C64]) -> f64 {
    let stat: f64 = filter.iter().zip(y).map(|(w, v)| (w.conj() * v).re).sum();
    if stat >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Transmitted chip vectors `√E b(n) s + w(n)`, one per bit.
pub fn transmit_chips<R: Rng + ?Sized>(
    design: &WaveformDesign,
    bits: &[f64],
    an: Option<&AnCovariance>,
    rng: &mut R,
) -> Result<Vec<Vec<C64>>> {
    if bits.is_empty() {
        return Err(Error::InvalidParameter("bit sequence is empty".into()));
    }
    let l = design.waveform.len();
    if let Some(a) = an {
        if a.dim() != l {
            return Err(Error::Dimension(format!(
                "AN covariance is {0}x{0}, waveform length is {l}",
                a.dim()
            )));
        }
    }
    let amp = design.energy.sqrt();
    let mut out = Vec::with_capacity(bits.len());
    for &b in bits {
        let mut x: Vec<C64> = design.waveform.iter().map(|c| c.scale(amp * b)).collect();
        if let Some(a) = an {
            for (xi, wi) in x.iter_mut().zip(a.sample(rng)) {
                *xi += wi;
            }
        }
        out.push(x);
    }
    Ok(out)
}

/// Pass transmitted chip vectors through a link and add the receiver's
/// interference and noise.
///
/// With `isi_enabled` the last `M − 1` output chips of every convolved
/// component of bit `n − 1` spill into the first chips of bit `n`. Random
/// numbers are consumed identically with and without ISI.
pub fn receive<R: Rng + ?Sized>(
    channel: &ConvolutionChannelMatrix,
    disturbance: &DisturbanceCovariance,
    tx: &[Vec<C64>],
    isi_enabled: bool,
    rng: &mut R,
) -> Result<Vec<Vec<C64>>> {
    let n_out = channel.output_len();
    if disturbance.dim() != n_out {
        return Err(Error::Dimension(format!(
            "disturbance covariance is {0}x{0}, observation window is {n_out}",
            disturbance.dim()
        )));
    }
    let tail = channel.paths() - 1;
    let chips = channel.chips();
    let mut prev = vec![C64::ZERO; n_out];
    let mut out = Vec::with_capacity(tx.len());
    for x in tx {
        // Channel-convolved part of this bit: signal, AN and interference.
        let mut conv = channel.apply(x)?;
        for intf in disturbance.interferers() {
            let k = intf.energy.sqrt() * antipodal(rng);
            for (c, v) in conv.iter_mut().zip(intf.signature()) {
                *c += v.scale(k);
            }
        }
        let mut y = conv.clone();
        if isi_enabled {
            for i in 0..tail {
                y[i] += prev[chips + i];
            }
        }
        for v in y.iter_mut() {
            *v += complex_gaussian(rng, disturbance.noise_variance());
        }
        prev = conv;
        out.push(y);
    }
    Ok(out)
}

/// Received observation windows for a bit sequence sent with `design`.
pub fn simulate_received_block<R: Rng + ?Sized>(
    design: &WaveformDesign,
    channel: &ConvolutionChannelMatrix,
    disturbance: &DisturbanceCovariance,
    bits: &[f64],
    an: Option<&AnCovariance>,
    isi_enabled: bool,
    rng: &mut R,
) -> Result<Vec<Vec<C64>>> {
    if design.waveform.len() != channel.chips() {
        return Err(Error::Dimension(format!(
            "waveform has {} chips, channel expects {}",
            design.waveform.len(),
            channel.chips()
        )));
    }
    let tx = transmit_chips(design, bits, an, rng)?;
    receive(channel, disturbance, &tx, isi_enabled, rng)
}

/// One receiver's view of a trial: its channel from Alice, its disturbance
/// and the resulting `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Link {
    pub channel: ConvolutionChannelMatrix,
    pub disturbance: DisturbanceCovariance,
    pub q: EffectiveQ,
}

impl Link {
    /// Draw the Alice channel first, then the interferer population.
    pub fn draw<R: Rng + ?Sized>(cfg: &ScenarioConfig, rng: &mut R) -> Result<Self> {
        let channel = ConvolutionChannelMatrix::new(&draw_multipath_channel(cfg.paths, rng)?, cfg.chips)?;
        let disturbance = build_disturbance_covariance(cfg, rng)?;
        let q = effective_q(&channel, &disturbance)?;
        Ok(Link {
            channel,
            disturbance,
            q,
        })
    }

    /// Max-SINR output under artificial noise of covariance `rw`.
    pub fn sinr_with_an(&self, rw: &HermitianMatrix, s: &[C64], energy: f64) -> Result<f64> {
        sinr_with_an(self.channel.matrix(), self.disturbance.matrix(), rw, s, energy)
    }

    /// Max-SINR filter for `s`, optionally aware of the AN covariance.
    pub fn filter(&self, s: &[C64], rw: Option<&HermitianMatrix>) -> Result<Vec<C64>> {
        let h = self.channel.matrix();
        match rw {
            Some(rw) => max_sinr_filter(h, &covariance_with_an(h, self.disturbance.matrix(), rw), s),
            None => max_sinr_filter(h, self.disturbance.matrix(), s),
        }
    }
}
