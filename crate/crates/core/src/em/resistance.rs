//! Skin-effect AC resistance of round copper wire.

use super::MU_0;
use crate::geometry::CoilSpec;

/// Copper resistivity, Ω·m.
pub const COPPER_RESISTIVITY: f64 = 1.68e-8;

/// `δ = √(2ρ / (ω μ₀))`.
pub fn skin_depth(frequency: f64) -> f64 {
    let omega = 2.0 * std::f64::consts::PI * frequency;
    (2.0 * COPPER_RESISTIVITY / (omega * MU_0)).sqrt()
}

pub fn dc_resistance(coil: &CoilSpec) -> f64 {
    let r = coil.wire_radius;
    COPPER_RESISTIVITY * coil.wire_length() / (std::f64::consts::PI * r * r)
}

/// Conduction confined to an annulus one skin depth thick; the full cross
/// section once `δ ≥ r`.
pub fn ac_resistance(coil: &CoilSpec, frequency: f64) -> f64 {
    let r = coil.wire_radius;
    let inner = (r - skin_depth(frequency)).max(0.0);
    let area = std::f64::consts::PI * (r * r - inner * inner);
    COPPER_RESISTIVITY * coil.wire_length() / area
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::NFC_FREQUENCY;

    #[test]
    fn skin_depth_at_carrier() {
        let d = skin_depth(NFC_FREQUENCY);
        assert!((d - 17.7e-6).abs() <= 0.5e-6, "{d}");
    }

    #[test]
    fn low_frequency_limit_is_dc() {
        let coil = CoilSpec::bench_relay();
        let (ac, dc) = (ac_resistance(&coil, 1.0), dc_resistance(&coil));
        assert!(((ac - dc) / dc).abs() < 1e-12);
    }

    #[test]
    fn bench_relay_at_carrier() {
        let r = ac_resistance(&CoilSpec::bench_relay(), NFC_FREQUENCY);
        assert!((0.1..=1.0).contains(&r), "{r}");
        // frozen: ρ · 1.152 m / (π (r² − (r − δ)²))
        assert!((r - 0.34592).abs() < 1e-4, "{r}");
    }
}
