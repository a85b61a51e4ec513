//! Resolved run configuration: defaults, config-file merge, flag overrides,
//! validation, and canonicalization of the boundary-condition selector.

use serde::{Deserialize, Serialize};

use halfline::extensions::{make_reference_modes, BcKind, BoundaryCondition};
use halfline::ordering::{classify, OrderingInfo, PhysicalConstants};

/// Fully resolved configuration, echoed verbatim into every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    pub hbar: f64,
    pub lambda: f64,
    /// Boundary-condition selector, canonicalized to `theta=<value>`.
    pub bc: String,
    pub y_max: f64,
    pub grid_n: usize,
    pub t_total: f64,
    pub n_slices: usize,
    /// `imag` or `real`.
    pub time_mode: String,
    /// Kinetic application route: `auto`, `sine`, `cosine`, `kernel`,
    /// or `robin-quad`.
    pub kinetic: String,
    /// Spectrum solver: `exact` or `fd`.
    pub solver: String,
    pub n_list: Vec<usize>,
    pub n_max: usize,
    pub eps_list: Vec<f64>,
    /// Initial state: `gaussian:<center>,<width>`, `mode:<k>`, or
    /// `mix:<k1>,<k2>`.
    pub psi0: String,
    pub near_zero_eps: f64,
    pub samples: usize,
    pub seed: u64,
    pub y0: f64,
    /// Endpoint bins `lo:hi:n`.
    pub bins: String,
    pub table_zmax: f64,
    pub table_n: usize,
    pub format: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: String::new(),
            j1: 0.5,
            j2: 0.5,
            j3: 0.0,
            hbar: 1.0,
            lambda: 4.0,
            bc: "theta=0".into(),
            y_max: 12.0,
            grid_n: 1024,
            t_total: 0.5,
            n_slices: 128,
            time_mode: "imag".into(),
            kinetic: "auto".into(),
            solver: "fd".into(),
            n_list: vec![16, 32, 64, 128, 256],
            n_max: 6,
            eps_list: vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
            psi0: "mix:0,1".into(),
            near_zero_eps: 0.5,
            samples: 200_000,
            seed: 42,
            y0: 1.0,
            bins: "0:4:20".into(),
            table_zmax: 4.0,
            table_n: 9,
            format: "json".into(),
        }
    }
}

impl RunConfig {
    pub fn ordering(&self) -> halfline::Result<OrderingInfo> {
        classify(self.j1, self.j2, self.j3)
    }

    pub fn constants(&self) -> halfline::Result<PhysicalConstants> {
        PhysicalConstants::new(self.hbar, self.lambda)
    }

    /// Parse the stored selector (already canonical after [`canonicalize`]).
    pub fn boundary(&self) -> halfline::Result<BoundaryCondition> {
        BoundaryCondition::parse(&self.bc)
    }

    /// Resolve the user-supplied boundary selector to the canonical θ
    /// coordinate. A `beta=` selector is meaningful only at `|J+| = 1/2`
    /// and is translated through the reference-mode dictionary.
    pub fn canonicalize(&mut self) -> halfline::Result<()> {
        let bc = BoundaryCondition::parse(&self.bc)?;
        let theta = match (bc.theta(), bc.beta()) {
            (Some(t), _) => t,
            (None, Some(_beta)) => {
                let o = self.ordering()?;
                let c = self.constants()?;
                let modes = make_reference_modes(&o, &c);
                bc.resolved(&modes)?.theta().expect("resolved")
            }
            (None, None) => unreachable!("parse always yields a coordinate"),
        };
        self.bc = format!("theta={theta}");
        Ok(())
    }

    /// The boundary kind implied by the canonical θ.
    pub fn bc_kind(&self) -> halfline::Result<BcKind> {
        Ok(self.boundary()?.kind())
    }

    pub fn parsed_bins(&self) -> Result<(f64, f64, usize), String> {
        let parts: Vec<&str> = self.bins.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("bins must be lo:hi:n, got '{}'", self.bins));
        }
        let lo: f64 = parts[0].parse().map_err(|_| format!("bad bins lo '{}'", parts[0]))?;
        let hi: f64 = parts[1].parse().map_err(|_| format!("bad bins hi '{}'", parts[1]))?;
        let n: usize = parts[2].parse().map_err(|_| format!("bad bins n '{}'", parts[2]))?;
        Ok((lo, hi, n))
    }
}

/// Apply the keys present in a flat JSON document over `cfg`.
pub fn apply_json(cfg: &mut RunConfig, doc: &serde_json::Value) -> Result<(), String> {
    let obj = doc.as_object().ok_or("config file must hold a flat JSON object")?;
    // Round-trip through serde: serialize the current config, overlay the
    // file's keys, deserialize back. Unknown keys are rejected.
    let mut base = serde_json::to_value(&*cfg).expect("config serializes");
    let known = base.as_object().unwrap().clone();
    for (k, v) in obj {
        if !known.contains_key(k.as_str()) {
            return Err(format!("unknown config key '{k}'"));
        }
        base.as_object_mut().unwrap().insert(k.clone(), v.clone());
    }
    *cfg = serde_json::from_value(base).map_err(|e| format!("bad config value: {e}"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalization_resolves_beta_at_half() {
        let mut cfg = RunConfig { bc: "beta=1".into(), ..RunConfig::default() };
        cfg.canonicalize().unwrap();
        assert!(cfg.bc.starts_with("theta=0.2953"), "bc = {}", cfg.bc);
        // And l = 1 maps to theta = pi/4.
        let mut cfg = RunConfig { bc: "l=1".into(), ..RunConfig::default() };
        cfg.canonicalize().unwrap();
        assert_eq!(cfg.bc, format!("theta={}", std::f64::consts::FRAC_PI_4));
    }

    #[test]
    fn beta_outside_half_regime_is_refused() {
        let mut cfg = RunConfig {
            j1: 1.0,
            j2: -1.0,
            j3: 1.0,
            bc: "beta=0.3".into(),
            ..RunConfig::default()
        };
        assert!(matches!(cfg.canonicalize(), Err(halfline::Error::Regime(_))));
    }

    #[test]
    fn json_overlay_rejects_unknown_keys() {
        let mut cfg = RunConfig::default();
        let doc = serde_json::json!({"j1": 0.25, "j3": 0.25});
        apply_json(&mut cfg, &doc).unwrap();
        assert_eq!(cfg.j1, 0.25);
        let doc = serde_json::json!({"jj": 1});
        assert!(apply_json(&mut cfg, &doc).is_err());
    }

    #[test]
    fn config_round_trips_through_json() {
        let mut cfg = RunConfig { command: "evolve".into(), ..RunConfig::default() };
        cfg.canonicalize().unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }
}
