//! Serialized forms of the solver outputs.

use std::f64::consts::PI;

use s2re_core::{EquatorSolution, MassTriple, MeridianSolution};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeridianRecord {
    pub kind: String,
    pub potential: String,
    pub masses: [f64; 3],
    pub radius: f64,
    pub a: f64,
    pub region: String,
    pub x: f64,
    pub theta: [f64; 3],
    pub theta_alt: [f64; 3],
    pub theta_over_pi: [f64; 3],
    pub theta_alt_over_pi: [f64; 3],
    /// `null` for fixed points.
    pub s: Option<i8>,
    /// `null` for fixed points.
    pub omega_squared: Option<f64>,
    pub r3_omega_squared: Option<f64>,
    pub case: String,
    /// Largest residual over both lifts.
    pub residual: f64,
}

impl MeridianRecord {
    pub fn new(sol: &MeridianSolution, masses: &MassTriple, radius: f64, potential: &str) -> Self {
        let over_pi = |t: [f64; 3]| t.map(|v| v / PI);
        MeridianRecord {
            kind: "meridian".into(),
            potential: potential.into(),
            masses: masses.as_array(),
            radius,
            a: sol.shape.a,
            region: sol.region.to_string(),
            x: sol.shape.x,
            theta: sol.theta(),
            theta_alt: sol.theta_alt(),
            theta_over_pi: over_pi(sol.theta()),
            theta_alt_over_pi: over_pi(sol.theta_alt()),
            s: sol.s().map(|b| b.sign() as i8),
            omega_squared: sol.omega_squared(),
            r3_omega_squared: sol.omega_squared().map(|w| w * radius.powi(3)),
            case: sol.case.to_string(),
            residual: sol.residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquatorRecord {
    pub kind: String,
    pub potential: String,
    pub masses: [f64; 3],
    pub radius: f64,
    pub region: String,
    pub exists: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// 1-based index of the failing inequality.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violated: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dphi: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dphi_over_pi: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neg_potential_energy: Option<f64>,
    /// `[θ, φ]` per body with `φ₁ = 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<[[f64; 2]; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

impl EquatorRecord {
    pub fn solved(
        sol: &EquatorSolution,
        masses: &MassTriple,
        potential: &str,
        residual: f64,
    ) -> Self {
        EquatorRecord {
            kind: "equator".into(),
            potential: potential.into(),
            masses: masses.as_array(),
            radius: sol.radius.get(),
            region: "interior".into(),
            exists: true,
            reason: None,
            violated: None,
            dphi: Some(sol.dphi),
            dphi_over_pi: Some(sol.dphi.map(|d| d / PI)),
            rho: Some(sol.rho),
            neg_potential_energy: Some(sol.neg_potential_energy),
            points: Some(sol.points().map(|p| [p.theta, p.phi])),
            residual: Some(residual),
        }
    }

    pub fn missing(
        masses: &MassTriple,
        radius: f64,
        potential: &str,
        region: &str,
        violated: usize,
    ) -> Self {
        EquatorRecord {
            kind: "equator".into(),
            potential: potential.into(),
            masses: masses.as_array(),
            radius,
            region: region.into(),
            exists: false,
            reason: Some(region.into()),
            violated: Some(violated),
            dphi: None,
            dphi_over_pi: None,
            rho: None,
            neg_potential_energy: None,
            points: None,
            residual: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub a: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub count: usize,
    /// Regions I to IV.
    pub counts: [usize; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRecord>,
    pub max_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerRow {
    pub radius: f64,
    pub a: f64,
    pub coefficients: [f64; 6],
    pub max_coeff_deviation: f64,
    pub root_lambda: f64,
    pub root_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerReport {
    pub masses: [f64; 3],
    pub r21: f64,
    pub quintic: [f64; 6],
    pub positive_root: f64,
    pub rows: Vec<EulerRow>,
    pub orders: Vec<f64>,
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRecord {
    pub index: usize,
    pub kind: String,
    pub omega: f64,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recorded_residual: Option<f64>,
    pub residual_pass: bool,
    pub cx: f64,
    pub cy: f64,
    pub momentum_pass: bool,
    pub period: f64,
    pub sigma_drift: f64,
    pub momentum_drift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integration_error: Option<String>,
    pub drift_pass: bool,
    pub pass: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use s2re_core::{find_meridian_rotators, Cotangent, ScanOptions};

    #[test]
    fn meridian_record_round_trips_exactly() {
        let m = MassTriple::new(3.0, 2.0, 1.0).unwrap();
        let sols =
            find_meridian_rotators(PI / 6.0, &m, &Cotangent::default(), &ScanOptions::default())
                .unwrap();
        for s in &sols {
            let rec = MeridianRecord::new(s, &m, 1.0, "cotangent");
            let text = serde_json::to_string(&rec).unwrap();
            let back: MeridianRecord = serde_json::from_str(&text).unwrap();
            assert_eq!(back, rec);
        }
    }

    #[test]
    fn missing_equator_has_no_numbers() {
        let m = MassTriple::new(25.0, 25.0, 1.0).unwrap();
        let rec = EquatorRecord::missing(&m, 1.0, "cotangent", "exterior", 3);
        let v = serde_json::to_value(&rec).unwrap();
        assert_eq!(v["reason"], "exterior");
        assert!(v.get("dphi").is_none());
    }
}
