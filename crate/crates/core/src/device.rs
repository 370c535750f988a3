//! Device model: double-dot eigenbasis, resonator mode structure, and
//! dot-resonator coupling constants.
//!
//! A single excess electron is shared between two tunnel-coupled dots with
//! tunneling `T` and potential-energy detuning `Delta` (`Delta > 0` means the
//! left dot sits higher). The charge eigenstates split by
//! `Omega = sqrt(4 T^2 + Delta^2)` and mix with angle `phi` where
//! `tan(phi) = -2 T / (Omega + Delta)`. One dot couples capacitively to the
//! quantized voltage of a transmission-line segment; for mode `n` the
//! transverse and longitudinal coupling constants are
//!
//! ```text
//! g_x = g0 (T / Omega)       sqrt(f_n / f_0)
//! g_z = g0 (Delta / 2 Omega) sqrt(f_n / f_0)
//! g0  = f_0 upsilon sqrt(2 Z0 / R_Q)
//! ```
//!
//! with lever arm `upsilon = C_c / (C_c + C_d)` and the resistance quantum
//! `R_Q = h / e^2`.

use crate::error::{Error, Result};

/// Planck constant, J s (exact SI value).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Elementary charge, C (exact SI value).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Resistance quantum h / e^2, Ohm.
pub const RESISTANCE_QUANTUM: f64 = 25_812.807;

/// Double-dot charge configuration.
///
/// Both fields are ordinary frequencies in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotParams {
    tunnel: f64,
    detuning: f64,
}

impl DotParams {
    /// `tunnel` is the interdot tunneling matrix element `T >= 0`;
    /// `detuning` is the interdot bias `Delta` (either sign).
    pub fn new(tunnel: f64, detuning: f64) -> Result<Self> {
        if !tunnel.is_finite() || !detuning.is_finite() {
            return Err(Error::InvalidParameter(
                "dot parameters must be finite".into(),
            ));
        }
        if tunnel < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tunnel coupling must be non-negative, got {tunnel:e}"
            )));
        }
        Ok(Self { tunnel, detuning })
    }

    pub fn tunnel(&self) -> f64 {
        self.tunnel
    }

    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    /// Eigenstate splitting `Omega = sqrt(4 T^2 + Delta^2)`, Hz.
    pub fn splitting(&self) -> f64 {
        (4.0 * self.tunnel * self.tunnel + self.detuning * self.detuning).sqrt()
    }
}

/// Charge eigenbasis of the double dot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenbasis {
    /// Splitting `Omega`, Hz.
    pub splitting: f64,
    /// Mixing angle `phi`, radians, in `[-pi/2, 0]` for `T >= 0`.
    pub mixing_angle: f64,
    /// `<L|+> = sin(phi)`.
    pub amp_plus_left: f64,
    /// `<R|+> = cos(phi)`.
    pub amp_plus_right: f64,
}

/// Diagonalize the two-site charge Hamiltonian.
///
/// The excited state is `|+> = sin(phi)|L> + cos(phi)|R>` and the ground
/// state `|-> = cos(phi)|L> - sin(phi)|R>`; the transform is orthogonal by
/// construction. Fails with [`Error::ZeroSplitting`] for `T = Delta = 0`.
pub fn eigenbasis(dot: &DotParams) -> Result<Eigenbasis> {
    let omega = dot.splitting();
    if omega == 0.0 {
        return Err(Error::ZeroSplitting);
    }
    // Half-angle form of tan(phi) = -2T/(Omega + Delta); atan2 keeps the
    // branch stable through T -> 0 at negative detuning.
    let phi = 0.5 * (-2.0 * dot.tunnel).atan2(dot.detuning);
    Ok(Eigenbasis {
        splitting: omega,
        mixing_angle: phi,
        amp_plus_left: phi.sin(),
        amp_plus_right: phi.cos(),
    })
}

/// Transmission-line resonator geometry and loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorSpec {
    /// Segment length `l`, m.
    pub length: f64,
    /// Capacitance per unit length `C0`, F/m.
    pub cap_per_length: f64,
    /// Characteristic impedance `Z0`, Ohm.
    pub impedance: f64,
    /// Quality factor `Q` (dimensionless, > 1).
    pub quality: f64,
    /// Photon loss rate `kappa`, 1/s.
    pub photon_loss: f64,
}

impl ResonatorSpec {
    pub fn new(
        length: f64,
        cap_per_length: f64,
        impedance: f64,
        quality: f64,
        photon_loss: f64,
    ) -> Result<Self> {
        let fields = [
            ("length", length),
            ("cap_per_length", cap_per_length),
            ("impedance", impedance),
            ("quality", quality),
            ("photon_loss", photon_loss),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "resonator {name} must be positive and finite, got {v:e}"
                )));
            }
        }
        if quality <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "quality factor must exceed 1, got {quality}"
            )));
        }
        Ok(Self {
            length,
            cap_per_length,
            impedance,
            quality,
            photon_loss,
        })
    }

    /// Ordinary frequency of mode `n` (wavevector `k_n = (n+1) pi / l`):
    /// `f_n = (n + 1) / (2 l C0 Z0)`, Hz.
    pub fn mode_frequency(&self, n: usize) -> f64 {
        (n as f64 + 1.0) / (2.0 * self.length * self.cap_per_length * self.impedance)
    }

    /// Fundamental mode frequency `f_0`, Hz.
    pub fn fundamental(&self) -> f64 {
        self.mode_frequency(0)
    }

    /// Total capacitance `l C0`, F.
    pub fn total_capacitance(&self) -> f64 {
        self.length * self.cap_per_length
    }
}

/// Capacitive dot-resonator coupling: lever arm and its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSpec {
    lever: f64,
    caps: Option<(f64, f64)>,
}

impl CouplingSpec {
    /// Build from the coupling capacitance `C_c` and the dot capacitance to
    /// ground `C_d`; the lever arm is `C_c / (C_c + C_d)`.
    pub fn from_capacitances(cap_coupling: f64, cap_dot: f64) -> Result<Self> {
        if !(cap_coupling.is_finite() && cap_dot.is_finite())
            || cap_coupling <= 0.0
            || cap_dot <= 0.0
        {
            return Err(Error::InvalidParameter(
                "capacitances must be positive and finite".into(),
            ));
        }
        Ok(Self {
            lever: cap_coupling / (cap_coupling + cap_dot),
            caps: Some((cap_coupling, cap_dot)),
        })
    }

    /// Build directly from a lever arm in (0, 1).
    pub fn from_lever(lever: f64) -> Result<Self> {
        if !lever.is_finite() || lever <= 0.0 || lever >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "lever arm must lie strictly inside (0, 1), got {lever}"
            )));
        }
        Ok(Self { lever, caps: None })
    }

    /// Lever arm `upsilon = C_c / (C_c + C_d)`.
    pub fn lever(&self) -> f64 {
        self.lever
    }

    /// `(C_c, C_d)` when the spec was built from capacitances.
    pub fn capacitances(&self) -> Option<(f64, f64)> {
        self.caps
    }
}

/// Overall coupling strength `g0 = f upsilon sqrt(2 Z0 / R_Q)`, Hz, for a
/// mode of ordinary frequency `mode_freq`.
pub fn coupling_g0(res: &ResonatorSpec, cpl: &CouplingSpec, mode_freq: f64) -> Result<f64> {
    if !(mode_freq.is_finite() && mode_freq > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mode frequency must be positive, got {mode_freq:e}"
        )));
    }
    Ok(mode_freq * cpl.lever() * (2.0 * res.impedance / RESISTANCE_QUANTUM).sqrt())
}

/// Transverse and longitudinal coupling constants for one mode, Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCouplings {
    /// `g_x = g0 (T/Omega) sqrt(f_n/f_0)`.
    pub g_x: f64,
    /// `g_z = g0 (Delta/2 Omega) sqrt(f_n/f_0)`.
    pub g_z: f64,
}

/// Coupling constants of mode `mode_freq` given the fundamental `fundamental`
/// and the overall strength `g0` (all ordinary frequencies).
///
/// The pair satisfies `4 (g_x^2 + g_z^2) = g0^2 (f_n / f_0)` exactly.
pub fn mode_couplings(
    dot: &DotParams,
    g0: f64,
    mode_freq: f64,
    fundamental: f64,
) -> Result<ModeCouplings> {
    let omega = dot.splitting();
    if omega == 0.0 {
        return Err(Error::ZeroSplitting);
    }
    if !(fundamental.is_finite() && fundamental > 0.0) || !(mode_freq.is_finite() && mode_freq > 0.0)
    {
        return Err(Error::InvalidParameter(
            "mode and fundamental frequencies must be positive".into(),
        ));
    }
    let scale = (mode_freq / fundamental).sqrt();
    Ok(ModeCouplings {
        g_x: g0 * (dot.tunnel / omega) * scale,
        g_z: g0 * (dot.detuning / (2.0 * omega)) * scale,
    })
}

/// Ratio of the resonant interaction energy to the static capacitive
/// interaction between two dots wired through an equal-length conductor:
/// `hbar g0 / Delta_E = (1 / upsilon) sqrt(R_Q / 2 Z0)` (dimensionless).
pub fn static_coupling_ratio(cpl: &CouplingSpec, res: &ResonatorSpec) -> Result<f64> {
    if cpl.lever() == 0.0 {
        return Err(Error::InvalidParameter("lever arm is zero".into()));
    }
    Ok((RESISTANCE_QUANTUM / (2.0 * res.impedance)).sqrt() / cpl.lever())
}

/// Zero-point voltage amplitude at the resonator end for a mode of ordinary
/// frequency `mode_freq`: `sqrt(h f / (l C0))`, volts.
pub fn voltage_rms(res: &ResonatorSpec, mode_freq: f64) -> Result<f64> {
    if !mode_freq.is_finite() || mode_freq < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "mode frequency must be non-negative, got {mode_freq:e}"
        )));
    }
    Ok((PLANCK * mode_freq / res.total_capacitance()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn resonator_50ohm() -> ResonatorSpec {
        // l C0 Z0 chosen so the fundamental lands at 50 GHz.
        let length = 2e-3;
        let impedance = 50.0;
        let cap_per_length = 1.0 / (2.0 * length * impedance * 50e9);
        ResonatorSpec::new(length, cap_per_length, impedance, 1e4, 1e6).unwrap()
    }

    #[test]
    fn symmetric_double_well_mixes_equally() {
        let dot = DotParams::new(1e9, 0.0).unwrap();
        let e = eigenbasis(&dot).unwrap();
        assert_relative_eq!(e.splitting, 2e9, max_relative = 1e-15);
        assert_relative_eq!(e.amp_plus_left.abs(), 1.0 / 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(e.amp_plus_right.abs(), 1.0 / 2f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn uncoupled_dots_localize() {
        let dot = DotParams::new(0.0, 2e9).unwrap();
        let e = eigenbasis(&dot).unwrap();
        assert_relative_eq!(e.splitting, 2e9, max_relative = 1e-15);
        assert_abs_diff_eq!(e.mixing_angle, 0.0);
        assert_abs_diff_eq!(e.amp_plus_left, 0.0);
        assert_abs_diff_eq!(e.amp_plus_right, 1.0);
    }

    #[test]
    fn uncoupled_dots_negative_detuning_localize_left() {
        let dot = DotParams::new(0.0, -2e9).unwrap();
        let e = eigenbasis(&dot).unwrap();
        assert_relative_eq!(e.amp_plus_left.abs(), 1.0, max_relative = 1e-14);
        assert_abs_diff_eq!(e.amp_plus_right, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn splitting_direct_formula() {
        let dot = DotParams::new(1e9, 2e9).unwrap();
        assert_relative_eq!(dot.splitting(), 8f64.sqrt() * 1e9, max_relative = 1e-15);
    }

    #[test]
    fn degenerate_dot_is_rejected() {
        let dot = DotParams::new(0.0, 0.0).unwrap();
        assert_eq!(eigenbasis(&dot), Err(Error::ZeroSplitting));
    }

    #[test]
    fn eigenbasis_is_orthonormal() {
        for (t, d) in [(1e9, 0.5e9), (3e8, -2e9), (0.0, 1e9), (5e9, 1e7)] {
            let e = eigenbasis(&DotParams::new(t, d).unwrap()).unwrap();
            let (s, c) = (e.amp_plus_left, e.amp_plus_right);
            assert_abs_diff_eq!(s * s + c * c, 1.0, epsilon = 1e-15);
            // rows of [[s, c], [c, -s]] are orthogonal for any angle
            assert_abs_diff_eq!(s * c + c * (-s), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn left_population_follows_sign_convention() {
        // Delta > 0: |+> is mostly right-localized under the printed branch,
        // |<L|+>|^2 = (Omega - Delta) / (2 Omega).
        let dot = DotParams::new(1e9, 2e9).unwrap();
        let e = eigenbasis(&dot).unwrap();
        let omega = dot.splitting();
        let expect = (omega - dot.detuning()) / (2.0 * omega);
        assert_relative_eq!(e.amp_plus_left.powi(2), expect, max_relative = 1e-12);
    }

    #[test]
    fn paper_scale_coupling_g0() {
        // f0 = 50 GHz, upsilon = 0.28, Z0 = 50 Ohm -> g0 ~ 870 MHz.
        let res = resonator_50ohm();
        assert_relative_eq!(res.fundamental(), 50e9, max_relative = 1e-12);
        let cpl = CouplingSpec::from_lever(0.28).unwrap();
        let g0 = coupling_g0(&res, &cpl, res.fundamental()).unwrap();
        assert_relative_eq!(g0, 870e6, max_relative = 0.01);
        // frozen hand evaluation
        assert_relative_eq!(g0, 8.7139e8, max_relative = 1e-4);
    }

    #[test]
    fn coupling_vanishes_with_lever() {
        let res = resonator_50ohm();
        for lever in [1e-6, 1e-9] {
            let cpl = CouplingSpec::from_lever(lever).unwrap();
            let g0 = coupling_g0(&res, &cpl, 50e9).unwrap();
            assert!(g0 < 1e6 * lever / 1e-6 * 50.0);
        }
    }

    #[test]
    fn hand_evaluated_coupling_g0() {
        // f0 = 10 GHz, upsilon = 0.1, Z0 = 50 Ohm.
        let res = ResonatorSpec::new(2e-3, 1.0 / (2.0 * 2e-3 * 50.0 * 10e9), 50.0, 1e4, 1e6)
            .unwrap();
        let cpl = CouplingSpec::from_lever(0.1).unwrap();
        let g0 = coupling_g0(&res, &cpl, res.fundamental()).unwrap();
        assert_relative_eq!(g0, 6.2242e7, max_relative = 1e-4);
    }

    #[test]
    fn rwa_consistency_low_impedance() {
        // g0 < f0 whenever Z0 < R_Q / 2 and upsilon < 1.
        let res = resonator_50ohm();
        let cpl = CouplingSpec::from_lever(0.9999).unwrap();
        let f0 = res.fundamental();
        assert!(coupling_g0(&res, &cpl, f0).unwrap() < f0);
    }

    #[test]
    fn mode_frequencies_increase() {
        let res = resonator_50ohm();
        for n in 0..8 {
            assert!(res.mode_frequency(n + 1) > res.mode_frequency(n));
            assert_relative_eq!(
                res.mode_frequency(n),
                (n as f64 + 1.0) * res.fundamental(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn mode_couplings_symmetric_dot() {
        let dot = DotParams::new(1e9, 0.0).unwrap();
        let g = mode_couplings(&dot, 1e8, 50e9, 50e9).unwrap();
        assert_abs_diff_eq!(g.g_z, 0.0);
        assert_relative_eq!(g.g_x, 0.5e8, max_relative = 1e-14);
    }

    #[test]
    fn mode_couplings_no_tunneling() {
        let dot = DotParams::new(0.0, 2e9).unwrap();
        let g = mode_couplings(&dot, 1e8, 50e9, 50e9).unwrap();
        assert_abs_diff_eq!(g.g_x, 0.0);
    }

    #[test]
    fn mode_couplings_third_mode() {
        // T = 1, Delta = 2 (so Delta/2 = T), third mode: both constants equal
        // g0 (1/sqrt(8)) sqrt(3) ~ 0.6124 g0.
        let dot = DotParams::new(1.0, 2.0).unwrap();
        let g = mode_couplings(&dot, 1.0, 3.0, 1.0).unwrap();
        assert_relative_eq!(g.g_x, 0.6123724, max_relative = 1e-6);
        assert_relative_eq!(g.g_z, 0.6123724, max_relative = 1e-6);
    }

    #[test]
    fn mode_coupling_sum_identity() {
        // 4 (g_x^2 + g_z^2) = g0^2 f_n / f_0, exactly in exact arithmetic.
        for (t, d, ratio) in [(1e9, 2e9, 1.0), (5e8, -1e9, 3.0), (2e9, 0.0, 5.0)] {
            let dot = DotParams::new(t, d).unwrap();
            let g0 = 8.7e8;
            let g = mode_couplings(&dot, g0, ratio * 50e9, 50e9).unwrap();
            assert_relative_eq!(
                4.0 * (g.g_x * g.g_x + g.g_z * g.g_z),
                g0 * g0 * ratio,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn static_ratio_paper_value() {
        let res = resonator_50ohm();
        let cpl = CouplingSpec::from_lever(0.28).unwrap();
        let r = static_coupling_ratio(&cpl, &res).unwrap();
        assert_relative_eq!(r, 57.4, max_relative = 0.01);
        assert_relative_eq!(r, 57.381, max_relative = 1e-4);
    }

    #[test]
    fn static_ratio_collapses_to_unity() {
        // upsilon -> 1, Z0 = R_Q / 2 gives exactly 1; use a lever arm just
        // inside the open interval.
        let res = ResonatorSpec::new(1e-3, 1e-10, RESISTANCE_QUANTUM / 2.0, 1e4, 1e6).unwrap();
        let cpl = CouplingSpec::from_lever(1.0 - 1e-12).unwrap();
        assert_relative_eq!(static_coupling_ratio(&cpl, &res).unwrap(), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn static_ratio_hand_value() {
        let res = ResonatorSpec::new(1e-3, 1e-10, 100.0, 1e4, 1e6).unwrap();
        let cpl = CouplingSpec::from_lever(0.5).unwrap();
        assert_relative_eq!(static_coupling_ratio(&cpl, &res).unwrap(), 22.721, max_relative = 1e-4);
    }

    #[test]
    fn voltage_scale() {
        // l C0 = 0.4 pF at 50 GHz -> ~9.1 uV.
        let res = ResonatorSpec::new(2e-3, 0.4e-12 / 2e-3, 50.0, 1e4, 1e6).unwrap();
        let v = voltage_rms(&res, 50e9).unwrap();
        assert_relative_eq!(v, 9.101e-6, max_relative = 1e-3);
        assert_abs_diff_eq!(voltage_rms(&res, 0.0).unwrap(), 0.0);
        // quadrupling l C0 halves the voltage
        let res4 = ResonatorSpec::new(2e-3, 4.0 * 0.4e-12 / 2e-3, 50.0, 1e4, 1e6).unwrap();
        assert_relative_eq!(voltage_rms(&res4, 50e9).unwrap(), v / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn lever_arm_from_capacitances() {
        let cpl = CouplingSpec::from_capacitances(0.28e-15, 0.72e-15).unwrap();
        assert_relative_eq!(cpl.lever(), 0.28, max_relative = 1e-12);
        assert!(CouplingSpec::from_capacitances(0.0, 1e-15).is_err());
        assert!(CouplingSpec::from_lever(1.0).is_err());
        assert!(CouplingSpec::from_lever(0.0).is_err());
    }

    #[test]
    fn splitting_monotonic_in_magnitudes() {
        let base = DotParams::new(1e9, -2e9).unwrap().splitting();
        assert!(DotParams::new(1.5e9, -2e9).unwrap().splitting() > base);
        assert!(DotParams::new(1e9, -2.5e9).unwrap().splitting() > base);
    }

    #[test]
    fn angular_convention_rescales_couplings() {
        use std::f64::consts::TAU;
        let res = resonator_50ohm();
        let cpl = CouplingSpec::from_lever(0.28).unwrap();
        let g0 = coupling_g0(&res, &cpl, 50e9).unwrap();
        let g0_angular = coupling_g0(&res, &cpl, TAU * 50e9).unwrap();
        assert_relative_eq!(g0_angular, TAU * g0, max_relative = 1e-13);
        // the static ratio is frequency-free and unchanged
        let r = static_coupling_ratio(&cpl, &res).unwrap();
        assert_relative_eq!(r, 57.381, max_relative = 1e-4);
    }
}
