use crate::components::{positive, PiezoSpec};
use crate::error::{Error, Result};

/// Bias loop of a passively quenched avalanche photodiode: the diode with
/// internal resistance R_d in series with R, fed by a capacitor C charged to
/// V_B + V_E.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    /// Breakdown voltage V_B (V).
    pub breakdown_voltage: f64,
    /// Excess bias V_E (V).
    pub excess_voltage: f64,
    /// Diode internal resistance R_d (Ω).
    pub diode_resistance: f64,
    /// Series resistance R (Ω).
    pub series_resistance: f64,
    /// Bias capacitance C (F).
    pub capacitance: f64,
    /// Latching current I_q (A).
    pub latching_current: f64,
}

impl CircuitSpec {
    pub fn validate(&self) -> Result<()> {
        positive("breakdown voltage", self.breakdown_voltage)?;
        positive("excess bias voltage", self.excess_voltage)?;
        positive("diode resistance", self.diode_resistance)?;
        positive("series resistance", self.series_resistance)?;
        positive("bias capacitance", self.capacitance)?;
        positive("latching current", self.latching_current)?;
        if self.latching_current >= self.peak_current() {
            return Err(Error::invalid(format!(
                "latching current {:.3e} A is not below the peak avalanche current {:.3e} A",
                self.latching_current,
                self.peak_current()
            )));
        }
        Ok(())
    }

    /// V_E/(R + R_d) (A).
    pub fn peak_current(&self) -> f64 {
        self.excess_voltage / (self.series_resistance + self.diode_resistance)
    }

    /// (R + R_d)·C (s).
    pub fn time_constant(&self) -> f64 {
        (self.series_resistance + self.diode_resistance) * self.capacitance
    }

    /// Mean capacitor voltage V_B + V_E/2 across the two branches.
    pub fn mean_capacitor_voltage(&self) -> f64 {
        self.breakdown_voltage + self.excess_voltage / 2.0
    }
}

/// Time at which the avalanche current decays to the latching current;
/// zero when no avalanche develops.
pub fn quench_time(c: &CircuitSpec) -> f64 {
    let i0 = c.peak_current();
    if c.latching_current >= i0 {
        0.0
    } else {
        c.time_constant() * (i0 / c.latching_current).ln()
    }
}

/// I(t) = I₀·e^{−t/τ} until the quench, zero afterwards.
pub fn avalanche_current(c: &CircuitSpec, t: f64) -> f64 {
    if t < 0.0 || t >= quench_time(c) {
        0.0
    } else {
        c.peak_current() * (-t / c.time_constant()).exp()
    }
}

/// ∫₀^{t_s} I² dt = I₀²·τ/2·(1 − e^{−2t_s/τ}) (A²·s).
pub fn current_squared_integral(c: &CircuitSpec) -> f64 {
    let ts = quench_time(c);
    let i0 = c.peak_current();
    let tau = c.time_constant();
    0.5 * i0 * i0 * tau * -(-2.0 * ts / tau).exp_m1()
}

/// R_d·C_p of the piezo charging through the diode (s).
pub fn piezo_time_constant(c: &CircuitSpec, p: &PiezoSpec) -> Result<f64> {
    Ok(c.diode_resistance * p.capacitance()?)
}

/// V(t) = V_E·(1 − e^{−t/(R_d·C_p)}), valid while C ≫ C_p.
pub fn piezo_voltage(c: &CircuitSpec, p: &PiezoSpec, t: f64) -> Result<f64> {
    let tau = piezo_time_constant(c, p)?;
    Ok(c.excess_voltage * -(-t.max(0.0) / tau).exp_m1())
}

/// Time at which the diode current (V_E − V(t))/R_d of the piezo path falls
/// to the latching current.
pub fn piezo_quench_time(c: &CircuitSpec, p: &PiezoSpec) -> Result<f64> {
    let tau = piezo_time_constant(c, p)?;
    let ratio = c.excess_voltage / (c.diode_resistance * c.latching_current);
    Ok(if ratio > 1.0 { tau * ratio.ln() } else { 0.0 })
}
