//! Semiclassical rate equations of the double-dot micro-maser.
//!
//! The resonator field is a coherent amplitude `alpha` while the dot charge
//! stays quantum. In the eigenbasis, with pump fractions
//! `f± = (Omega ± Delta) / (2 Omega)` and the angular coupling
//! `c = 2 pi g0 T / Omega`, the slowly-varying density matrix obeys
//!
//! ```text
//! d rho_++ / dt = -2 c alpha Im(rho_+-) - (gamma_r + Gamma_R f-) rho_++
//!                 + Gamma_L f+ (1 - rho_++ - rho_--)
//! d rho_-- / dt = +2 c alpha Im(rho_+-) - Gamma_R f+ rho_--
//!                 + gamma_r rho_++ + Gamma_L f- (1 - rho_++ - rho_--)
//! d rho_+- / dt = -(gamma_tot + 2 pi i d_omega) rho_+- + i c alpha (rho_++ - rho_--)
//! d alpha / dt  = c Im(rho_+-) - kappa alpha
//! ```
//!
//! with `gamma_tot = (gamma_r + Gamma_R)/2 + gamma_c`. The trace can fall
//! below one: the remainder is the empty-dot population. Eliminating the
//! coherence at fixed `alpha` gives the field growth rate
//! `G (rho_++ - rho_--) - kappa` with the effective emission rate
//! `G = c^2 gamma_tot / (gamma_tot^2 + (2 pi d_omega)^2)`, and substituting
//! the steady populations yields the closed form implemented by
//! [`field_growth_rate`]. Both routes agree identically; the tests pin that.
//!
//! The amplitude is taken real and non-negative: at zero detuning the field
//! phase locks to the polarization, so this loses no generality, and for
//! detuned sweeps the same reduction yields `|alpha|`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::device::{DotParams, PLANCK};
use crate::error::{Error, Result};
use crate::ode::{self, Dopri5Options};

/// Rates and couplings of the pumped double-dot + resonator system.
///
/// All entries are ordinary frequencies / inverse lifetimes (Hz = 1/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaserConfig {
    pub dot: DotParams,
    /// Overall dot-resonator coupling `g0`.
    pub g0: f64,
    /// Source-lead tunneling rate `Gamma_L`.
    pub gamma_source: f64,
    /// Drain-lead tunneling rate `Gamma_R`.
    pub gamma_drain: f64,
    /// Inelastic relaxation rate `gamma_r` (`|+> -> |->`).
    pub gamma_relax: f64,
    /// Charge dephasing rate `gamma_c`.
    pub gamma_dephase: f64,
    /// Dot-resonator detuning `d_omega = Omega - f_0`.
    pub delta_omega: f64,
    /// Photon loss rate `kappa`.
    pub kappa: f64,
}

impl MaserConfig {
    /// Check rate positivity, `gamma_c >= gamma_r / 2`, and a nondegenerate
    /// dot. Called by every operation; construction by struct literal is
    /// allowed for ergonomics.
    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("g0", self.g0),
            ("gamma_source", self.gamma_source),
            ("gamma_drain", self.gamma_drain),
            ("gamma_relax", self.gamma_relax),
            ("gamma_dephase", self.gamma_dephase),
            ("kappa", self.kappa),
        ];
        for (name, r) in rates {
            if !r.is_finite() || r < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be a non-negative finite rate, got {r:e}"
                )));
            }
        }
        if !self.delta_omega.is_finite() {
            return Err(Error::InvalidParameter("delta_omega must be finite".into()));
        }
        if self.gamma_dephase < self.gamma_relax / 2.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma_dephase ({:e}) < gamma_relax/2 ({:e}): pure dephasing would be negative",
                self.gamma_dephase,
                self.gamma_relax / 2.0
            )));
        }
        if self.dot.splitting() == 0.0 {
            return Err(Error::ZeroSplitting);
        }
        Ok(())
    }

    /// Total off-diagonal decay `gamma_tot = (gamma_r + Gamma_R)/2 + gamma_c`.
    pub fn gamma_tot(&self) -> f64 {
        (self.gamma_relax + self.gamma_drain) / 2.0 + self.gamma_dephase
    }

    /// Pump fraction into the excited state, `(Omega + Delta) / (2 Omega)`.
    pub fn fraction_plus(&self) -> f64 {
        let omega = self.dot.splitting();
        (omega + self.dot.detuning()) / (2.0 * omega)
    }

    /// Pump fraction into the ground state, `(Omega - Delta) / (2 Omega)`.
    pub fn fraction_minus(&self) -> f64 {
        let omega = self.dot.splitting();
        (omega - self.dot.detuning()) / (2.0 * omega)
    }

    /// Angular Jaynes-Cummings coupling `2 pi g0 T / Omega`, rad/s.
    pub fn coupling_angular(&self) -> f64 {
        TAU * self.g0 * self.dot.tunnel() / self.dot.splitting()
    }

    /// Effective stimulated-emission rate
    /// `G = c^2 gamma_tot / (gamma_tot^2 + (2 pi d_omega)^2)`, 1/s.
    pub fn effective_emission_rate(&self) -> f64 {
        let c = self.coupling_angular();
        let gt = self.gamma_tot();
        let d = TAU * self.delta_omega;
        c * c * gt / (gt * gt + d * d)
    }
}

/// Slowly-varying 2x2 charge density matrix; the missing trace is the
/// empty-dot population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeDensityMatrix {
    pub rho_pp: f64,
    pub rho_mm: f64,
    pub rho_pm: Complex64,
}

impl ChargeDensityMatrix {
    pub const EMPTY: Self = Self {
        rho_pp: 0.0,
        rho_mm: 0.0,
        rho_pm: Complex64::new(0.0, 0.0),
    };

    pub fn inversion(&self) -> f64 {
        self.rho_pp - self.rho_mm
    }

    pub fn occupancy(&self) -> f64 {
        self.rho_pp + self.rho_mm
    }

    /// Trace bound and positivity, with slack `tol`.
    pub fn validate(&self, tol: f64) -> std::result::Result<(), String> {
        let s = self.occupancy();
        if !(self.rho_pp.is_finite() && self.rho_mm.is_finite() && self.rho_pm.is_finite()) {
            return Err("non-finite density matrix entry".into());
        }
        if self.rho_pp < -tol || self.rho_mm < -tol || s > 1.0 + tol {
            return Err(format!(
                "trace bound violated: rho_pp = {:e}, rho_mm = {:e}",
                self.rho_pp, self.rho_mm
            ));
        }
        if self.rho_pm.norm_sqr() > self.rho_pp.max(0.0) * self.rho_mm.max(0.0) + tol {
            return Err(format!(
                "positivity violated: |rho_pm|^2 = {:e} > rho_pp rho_mm = {:e}",
                self.rho_pm.norm_sqr(),
                self.rho_pp * self.rho_mm
            ));
        }
        Ok(())
    }
}

/// Instantaneous state of the semiclassical maser.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaserState {
    pub rho: ChargeDensityMatrix,
    /// Coherent field amplitude; photons = alpha^2.
    pub alpha: f64,
    /// Time, seconds.
    pub time: f64,
}

impl MaserState {
    /// Empty dot with a small seed field, at `t = 0`.
    pub fn seeded(alpha: f64) -> Self {
        Self {
            rho: ChargeDensityMatrix::EMPTY,
            alpha,
            time: 0.0,
        }
    }
}

/// Time derivative of a [`MaserState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaserDerivative {
    pub rho_pp: f64,
    pub rho_mm: f64,
    pub rho_pm: Complex64,
    pub alpha: f64,
}

/// Right-hand side of the equations of motion at `state`.
pub fn eom_rhs(state: &MaserState, cfg: &MaserConfig) -> MaserDerivative {
    let c = cfg.coupling_angular();
    let d = TAU * cfg.delta_omega;
    let gt = cfg.gamma_tot();
    let fp = cfg.fraction_plus();
    let fm = cfg.fraction_minus();
    let rho = &state.rho;
    let empty = 1.0 - rho.occupancy();
    let drive = 2.0 * c * state.alpha * rho.rho_pm.im;
    MaserDerivative {
        rho_pp: -drive - (cfg.gamma_relax + cfg.gamma_drain * fm) * rho.rho_pp
            + cfg.gamma_source * fp * empty,
        rho_mm: drive - cfg.gamma_drain * fp * rho.rho_mm
            + cfg.gamma_relax * rho.rho_pp
            + cfg.gamma_source * fm * empty,
        rho_pm: -Complex64::new(gt, d) * rho.rho_pm
            + Complex64::new(0.0, c * state.alpha * rho.inversion()),
        alpha: c * rho.rho_pm.im - cfg.kappa * state.alpha,
    }
}

/// Charge steady state at fixed field amplitude `alpha`.
///
/// Solves the 4x4 real linear system for vanishing population and coherence
/// derivatives. Rank-deficient but consistent systems (for instance a dot
/// with no escape channel) return the minimum-norm solution; inconsistent
/// ones fail with [`Error::SingularSystem`].
pub fn steady_state(cfg: &MaserConfig, alpha: f64) -> Result<ChargeDensityMatrix> {
    cfg.validate()?;
    if !(cfg.gamma_tot() > 0.0) {
        return Err(Error::SingularSystem(
            "gamma_tot must be positive for a steady state".into(),
        ));
    }
    if cfg.gamma_source + cfg.gamma_drain <= 0.0 {
        return Err(Error::SingularSystem(
            "at least one lead rate must be positive".into(),
        ));
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter("alpha must be finite".into()));
    }

    let c = cfg.coupling_angular();
    let d = TAU * cfg.delta_omega;
    let gt = cfg.gamma_tot();
    let fp = cfg.fraction_plus();
    let fm = cfg.fraction_minus();
    let (gl, gr, grel) = (cfg.gamma_source, cfg.gamma_drain, cfg.gamma_relax);
    let ca = c * alpha;

    let a = nalgebra::Matrix4::new(
        -(grel + gr * fm + gl * fp), -gl * fp,      0.0, -2.0 * ca,
        grel - gl * fm,              -(gr * fp + gl * fm), 0.0, 2.0 * ca,
        0.0,                         0.0,           -gt,  d,
        ca,                          -ca,           -d,   -gt,
    );
    let b = nalgebra::Vector4::new(-gl * fp, -gl * fm, 0.0, 0.0);

    let scale = a.amax().max(b.amax());
    let svd = a.svd(true, true);
    let x = svd
        .solve(&b, 1e-13 * scale)
        .map_err(|e| Error::SingularSystem(e.to_string()))?;
    let residual = (a * x - b).norm();
    if residual > 1e-8 * scale.max(1.0) {
        return Err(Error::SingularSystem(format!(
            "steady-state system is inconsistent (residual {residual:e})"
        )));
    }

    let rho = ChargeDensityMatrix {
        rho_pp: x[0],
        rho_mm: x[1],
        rho_pm: Complex64::new(x[2], x[3]),
    };
    rho.validate(1e-9).map_err(Error::StateInvariant)?;
    Ok(rho)
}

fn eq10_terms(cfg: &MaserConfig) -> (f64, f64, f64) {
    let g = cfg.effective_emission_rate();
    let omega = cfg.dot.splitting();
    let t = cfg.dot.tunnel();
    let delta = cfg.dot.detuning();
    let (gl, gr, grel) = (cfg.gamma_source, cfg.gamma_drain, cfg.gamma_relax);
    // growth + kappa = num / (den0 + den2 * alpha^2)
    let num = 2.0 * g * omega * gl * (delta * gr - grel * omega);
    let den0 = (gr + 2.0 * gl) * (omega * omega * grel + 2.0 * t * t * gr)
        + delta * gr * (2.0 * delta * gl + omega * grel);
    let den2 = 4.0 * g * omega * omega * (gr + 2.0 * gl);
    (num, den0, den2)
}

/// Field growth rate `d(ln alpha)/dt` at amplitude `alpha`, from the closed
/// form obtained by substituting the steady-state inversion:
///
/// ```text
/// 2 G Omega Gamma_L (Delta Gamma_R - gamma_r Omega)
/// --------------------------------------------------------------------------- - kappa
/// (Gamma_R + 2 Gamma_L)(Omega^2 (4 G a^2 + gamma_r) + 2 T^2 Gamma_R)
///   + Delta Gamma_R (2 Delta Gamma_L + Omega gamma_r)
/// ```
///
/// Identical (to rounding) to `G * inversion(steady_state(cfg, alpha)) - kappa`.
pub fn field_growth_rate(cfg: &MaserConfig, alpha: f64) -> Result<f64> {
    cfg.validate()?;
    if !(cfg.gamma_tot() > 0.0) {
        return Err(Error::SingularSystem(
            "gamma_tot must be positive for a growth rate".into(),
        ));
    }
    if cfg.gamma_source + cfg.gamma_drain <= 0.0 {
        return Err(Error::SingularSystem(
            "at least one lead rate must be positive".into(),
        ));
    }
    let (num, den0, den2) = eq10_terms(cfg);
    Ok(num / (den0 + den2 * alpha * alpha) - cfg.kappa)
}

/// Compositional route to the same growth rate: effective emission rate
/// times the inversion of the explicitly solved steady state, minus `kappa`.
pub fn growth_rate_from_steady_state(cfg: &MaserConfig, alpha: f64) -> Result<f64> {
    let rho = steady_state(cfg, alpha)?;
    Ok(cfg.effective_emission_rate() * rho.inversion() - cfg.kappa)
}

/// Maser configuration with the lead rates left open for a threshold scan
/// (`Gamma_L = Gamma_R = Gamma`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdScan {
    pub dot: DotParams,
    pub g0: f64,
    pub gamma_relax: f64,
    pub gamma_dephase: f64,
    pub delta_omega: f64,
    pub kappa: f64,
}

impl ThresholdScan {
    pub fn with_pump(&self, gamma: f64) -> MaserConfig {
        MaserConfig {
            dot: self.dot,
            g0: self.g0,
            gamma_source: gamma,
            gamma_drain: gamma,
            gamma_relax: self.gamma_relax,
            gamma_dephase: self.gamma_dephase,
            delta_omega: self.delta_omega,
            kappa: self.kappa,
        }
    }
}

const THRESHOLD_FLOOR: f64 = 1e3;
const THRESHOLD_CEIL: f64 = 1e12;

/// Smallest pump rate `Gamma` in `[1e3, 1e12]` Hz with positive initial
/// growth, `None` if the field decays for every pump in the range.
///
/// Log-grid bracketing followed by geometric bisection to relative width
/// 1e-6. A configuration already growing at the scan floor reports the
/// floor itself.
pub fn threshold_pump(scan: &ThresholdScan) -> Result<Option<f64>> {
    scan.with_pump(1e9).validate()?;
    let growth = |gamma: f64| -> Result<f64> { field_growth_rate(&scan.with_pump(gamma), 0.0) };

    const PER_DECADE: usize = 24;
    let decades = (THRESHOLD_CEIL / THRESHOLD_FLOOR).log10();
    let n = (decades * PER_DECADE as f64).round() as usize;
    let gamma_at = |i: usize| THRESHOLD_FLOOR * 10f64.powf(decades * i as f64 / n as f64);

    let mut prev = gamma_at(0);
    if growth(prev)? > 0.0 {
        return Ok(Some(THRESHOLD_FLOOR));
    }
    let mut bracket = None;
    for i in 1..=n {
        let gamma = gamma_at(i);
        if growth(gamma)? > 0.0 {
            bracket = Some((prev, gamma));
            break;
        }
        prev = gamma;
    }
    let Some((mut lo, mut hi)) = bracket else {
        return Ok(None);
    };
    while hi / lo - 1.0 > 1e-6 {
        let mid = (lo * hi).sqrt();
        if growth(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some((lo * hi).sqrt()))
}

/// Steady-state photon number and amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonSteadyState {
    pub n_photons: f64,
    pub alpha_ss: f64,
}

/// Saturated photon number from the linear-in-`alpha^2` rearrangement of the
/// closed-form growth rate; below threshold both entries are zero.
pub fn steady_photon_number(cfg: &MaserConfig) -> Result<PhotonSteadyState> {
    cfg.validate()?;
    if !(cfg.gamma_tot() > 0.0) || cfg.gamma_source + cfg.gamma_drain <= 0.0 {
        return Err(Error::SingularSystem(
            "photon steady state needs gamma_tot > 0 and a lead rate".into(),
        ));
    }
    if cfg.kappa <= 0.0 {
        return Err(Error::InvalidParameter(
            "kappa must be positive for a saturated field".into(),
        ));
    }
    let (num, den0, den2) = eq10_terms(cfg);
    if den2 <= 0.0 {
        // no stimulated emission at all (g0 or T zero)
        return Ok(PhotonSteadyState {
            n_photons: 0.0,
            alpha_ss: 0.0,
        });
    }
    let n = (num / cfg.kappa - den0) / den2;
    if n <= 0.0 {
        return Ok(PhotonSteadyState {
            n_photons: 0.0,
            alpha_ss: 0.0,
        });
    }
    Ok(PhotonSteadyState {
        n_photons: n,
        alpha_ss: n.sqrt(),
    })
}

/// Emitted power `P = kappa n h f` in watts for a leak rate `kappa` and an
/// ordinary emission frequency `freq`.
pub fn output_power(n_photons: f64, kappa: f64, freq: f64) -> Result<f64> {
    for (name, v) in [("n_photons", n_photons), ("kappa", kappa), ("freq", freq)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "{name} must be non-negative, got {v:e}"
            )));
        }
    }
    Ok(kappa * n_photons * PLANCK * freq)
}

/// Photon emission rate `kappa n`, 1/s.
pub fn photon_flux(n_photons: f64, kappa: f64) -> f64 {
    kappa * n_photons
}

/// Integrate the equations of motion from `initial` to `t_end`, sampling the
/// trajectory every `sample_dt` seconds.
///
/// Embedded 4(5) pair at relative tolerance 1e-8 / absolute 1e-12; the trace
/// bound and positivity are checked after every accepted step with slack
/// 1e-9 and violations abort the run.
pub fn time_evolve(
    initial: &MaserState,
    cfg: &MaserConfig,
    t_end: f64,
    dt_max: Option<f64>,
    sample_dt: f64,
) -> Result<Vec<MaserState>> {
    cfg.validate()?;
    if !(t_end > initial.time) {
        return Err(Error::InvalidParameter(
            "t_end must exceed the initial time".into(),
        ));
    }
    if !(sample_dt > 0.0) {
        return Err(Error::InvalidParameter("sample_dt must be positive".into()));
    }
    initial
        .rho
        .validate(1e-9)
        .map_err(Error::StateInvariant)?;

    let y0 = [
        initial.rho.rho_pp,
        initial.rho.rho_mm,
        initial.rho.rho_pm.re,
        initial.rho.rho_pm.im,
        initial.alpha,
    ];
    let unpack = |t: f64, y: &[f64]| MaserState {
        rho: ChargeDensityMatrix {
            rho_pp: y[0],
            rho_mm: y[1],
            rho_pm: Complex64::new(y[2], y[3]),
        },
        alpha: y[4],
        time: t,
    };

    let opts = Dopri5Options {
        rel_tol: 1e-8,
        abs_tol: 1e-12,
        max_step: dt_max,
        ..Default::default()
    };
    let mut trajectory = Vec::new();
    let mut next_sample = initial.time;
    let y_final = ode::integrate(
        |_t, y, dy| {
            let state = unpack(0.0, y);
            let d = eom_rhs(&state, cfg);
            dy[0] = d.rho_pp;
            dy[1] = d.rho_mm;
            dy[2] = d.rho_pm.re;
            dy[3] = d.rho_pm.im;
            dy[4] = d.alpha;
        },
        initial.time,
        &y0,
        t_end,
        Some(sample_dt),
        &opts,
        |t, y| {
            let state = unpack(t, y);
            if !state.alpha.is_finite() {
                return Err(Error::InvariantViolated {
                    time: t,
                    what: "field amplitude diverged".into(),
                });
            }
            state
                .rho
                .validate(1e-9)
                .map_err(|what| Error::InvariantViolated { time: t, what })?;
            if t >= next_sample - 1e-9 * sample_dt {
                trajectory.push(state);
                next_sample = (((t - initial.time) / sample_dt).floor() + 1.0) * sample_dt
                    + initial.time;
            }
            Ok(())
        },
    )?;
    let include_end = trajectory
        .last()
        .map(|s| (s.time - t_end).abs() > 1e-9 * sample_dt)
        .unwrap_or(true);
    if include_end {
        trajectory.push(unpack(t_end, &y_final));
    }
    Ok(trajectory)
}
