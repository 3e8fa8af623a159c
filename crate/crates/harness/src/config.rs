//! Scenario configuration: the JSON file accepted by `radon verify --config`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    EndpointGrassmann,
    EndpointHyperbolic,
    EndpointSphere,
    WeakHyperbolic,
    WeakSphere,
    LpLqGrassmann,
    LpLqHyperbolic,
    LpLqSphere,
    Lemma21,
    Lemma37,
    CounterexampleFlat,
    CounterexampleCap,
    DivergenceProbe,
    Catalan,
    InterpKappa,
}

impl Scenario {
    pub const ALL: [Scenario; 15] = [
        Scenario::EndpointGrassmann,
        Scenario::EndpointHyperbolic,
        Scenario::EndpointSphere,
        Scenario::WeakHyperbolic,
        Scenario::WeakSphere,
        Scenario::LpLqGrassmann,
        Scenario::LpLqHyperbolic,
        Scenario::LpLqSphere,
        Scenario::Lemma21,
        Scenario::Lemma37,
        Scenario::CounterexampleFlat,
        Scenario::CounterexampleCap,
        Scenario::DivergenceProbe,
        Scenario::Catalan,
        Scenario::InterpKappa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::EndpointGrassmann => "endpoint-grassmann",
            Scenario::EndpointHyperbolic => "endpoint-hyperbolic",
            Scenario::EndpointSphere => "endpoint-sphere",
            Scenario::WeakHyperbolic => "weak-hyperbolic",
            Scenario::WeakSphere => "weak-sphere",
            Scenario::LpLqGrassmann => "lp-lq-grassmann",
            Scenario::LpLqHyperbolic => "lp-lq-hyperbolic",
            Scenario::LpLqSphere => "lp-lq-sphere",
            Scenario::Lemma21 => "lemma21",
            Scenario::Lemma37 => "lemma37",
            Scenario::CounterexampleFlat => "counterexample-flat",
            Scenario::CounterexampleCap => "counterexample-cap",
            Scenario::DivergenceProbe => "divergence-probe",
            Scenario::Catalan => "catalan",
            Scenario::InterpKappa => "interp-kappa",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL.into_iter().find(|sc| sc.name() == s).ok_or_else(|| HarnessError::Config(format!("unknown scenario `{s}`")))
    }
}

/// A geometry, with an optional per-geometry exponent (used by the cap family).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    pub n: u32,
    pub d: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
}

impl GeometrySpec {
    pub fn new(n: u32, d: u32) -> Self {
        Self { n, d, k: None, p: None }
    }

    pub fn with_k(n: u32, d: u32, k: u32) -> Self {
        Self { n, d, k: Some(k), p: None }
    }

    pub fn with_p(n: u32, d: u32, p: f64) -> Self {
        Self { n, d, k: None, p: Some(p) }
    }

    pub fn label(&self) -> String {
        let mut s = match self.k {
            Some(k) => format!("({},{},{})", self.n, self.d, k),
            None => format!("({},{})", self.n, self.d),
        };
        if let Some(p) = self.p {
            s.push_str(&format!(" p={p}"));
        }
        s
    }
}

/// Pass thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Largest admissible slope of log(bucket max) against log(bucket size).
    pub slope: f64,
    /// Fraction of samples allowed to hit quadrature accuracy errors.
    pub accuracy_budget: f64,
    /// Absolute tolerance on analytic fixtures.
    pub fixture: f64,
    /// Relative tolerance on identities (dilation invariance and similar).
    pub identity: f64,
    /// Relative tolerance on the logarithmic growth of the divergence probe.
    pub rate: f64,
    /// Absolute tolerance on fitted rates.
    pub rate_slope: f64,
    /// Tolerance for convergence of the subcritical probe.
    pub cauchy: f64,
    /// Standard errors allowed between Monte-Carlo and quadrature.
    pub sigmas: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            slope: 0.05,
            accuracy_budget: 0.01,
            fixture: 1e-3,
            identity: 1e-9,
            rate: 0.05,
            rate_slope: 0.05,
            cauchy: 1e-6,
            sigmas: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub geometries: Vec<GeometrySpec>,
    /// Samples per geometry.
    #[serde(default)]
    pub family_size: usize,
    /// Annulus counts; sample `i` uses `buckets[i % len]`.
    #[serde(default)]
    pub buckets: Vec<usize>,
    /// Range the random annuli are drawn from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[f64; 2]>,
    /// Exponents `p` (`"inf"` allowed), or `(δ, p)` pairs flattened for lemma37.
    #[serde(default, with = "crate::jsonnum::vec")]
    pub exponents: Vec<f64>,
    /// Scenario-specific grid: κ values, cap indices `m`, probe cut-offs, dilation factors.
    #[serde(default)]
    pub grid: Vec<f64>,
    /// Monte-Carlo samples, tuple count, or flat-family length.
    #[serde(default)]
    pub samples: usize,
    /// Cells of the weak-norm grid.
    #[serde(default)]
    pub weak_cells: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points).map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (points - 1) as f64).exp().round()).collect()
}

impl ScenarioConfig {
    /// The configuration the acceptance criteria are stated for.
    pub fn default_for(scenario: Scenario) -> Self {
        use Scenario::*;
        let g = GeometrySpec::new;
        let gk = GeometrySpec::with_k;
        let hyperbolic = vec![g(3, 2), g(4, 2), g(4, 3), g(5, 3)];
        let dyadic = vec![1, 2, 4, 8, 16, 32, 64];
        let mut c = ScenarioConfig {
            scenario,
            seed: 0,
            geometries: Vec::new(),
            family_size: 0,
            buckets: Vec::new(),
            range: None,
            exponents: Vec::new(),
            grid: Vec::new(),
            samples: 0,
            weak_cells: 0,
            tolerances: Tolerances::default(),
            output: None,
        };
        match scenario {
            EndpointGrassmann => {
                c.geometries = vec![gk(3, 2, 0), gk(4, 2, 0), gk(4, 3, 1), gk(5, 3, 0)];
                c.family_size = 1000;
                c.buckets = dyadic;
                c.range = Some([0.0, 10.0]);
            }
            EndpointHyperbolic => {
                c.geometries = hyperbolic;
                c.family_size = 1000;
                c.buckets = dyadic;
                c.range = Some([1.0, 10.0]);
            }
            EndpointSphere => {
                c.geometries = vec![g(2, 1), g(3, 1), g(3, 2), g(4, 2)];
                c.family_size = 1000;
                c.buckets = dyadic;
                c.range = Some([0.0, 1.0]);
            }
            WeakHyperbolic => {
                c.geometries = hyperbolic;
                c.family_size = 280;
                c.buckets = dyadic;
                c.range = Some([1.0, 10.0]);
                c.weak_cells = 1 << 12;
            }
            WeakSphere => {
                c.geometries = vec![g(3, 1), g(3, 2), g(4, 2), g(4, 3)];
                c.family_size = 280;
                c.buckets = dyadic;
                c.range = Some([0.0, 1.0]);
                c.weak_cells = 1 << 12;
            }
            LpLqGrassmann => {
                c.geometries = vec![gk(3, 2, 0), gk(4, 2, 0), gk(5, 3, 0), gk(4, 3, 1)];
                c.family_size = 280;
                c.buckets = dyadic;
                c.range = Some([0.0, 10.0]);
                c.exponents = vec![1.0, 1.2, 1.4];
                c.grid = vec![1.0, 2.0, 4.0];
            }
            LpLqHyperbolic => {
                c.geometries = hyperbolic;
                c.family_size = 280;
                c.buckets = dyadic;
                c.range = Some([1.0, 10.0]);
                c.exponents = vec![1.0, 1.2, 1.4];
            }
            LpLqSphere => {
                c.geometries = vec![g(3, 1), g(3, 2), g(4, 2)];
                c.family_size = 280;
                c.buckets = dyadic;
                c.range = Some([0.0, 1.0]);
                c.exponents = vec![1.0, 2.0, f64::INFINITY];
            }
            Lemma21 => {
                c.samples = 10_000;
                c.buckets = vec![2, 40];
                c.grid = vec![1.0, 5.0];
            }
            Lemma37 => {
                c.family_size = 1000;
                c.buckets = dyadic;
                c.range = Some([-3.0, 3.0]);
                c.exponents = vec![1.0, 2.0, 0.5, 3.0, -1.0, 1.5, 2.0, 1.5];
            }
            CounterexampleFlat => {
                c.geometries = vec![g(2, 1), g(3, 1), g(3, 2), g(4, 2)];
                c.samples = 20;
            }
            CounterexampleCap => {
                c.geometries =
                    vec![GeometrySpec::with_p(2, 1, 1.0), GeometrySpec::with_p(3, 2, 1.0), GeometrySpec::with_p(4, 2, 1.5)];
                c.grid = log_grid(100.0, 10_000.0, 17);
            }
            DivergenceProbe => {
                c.geometries = vec![g(3, 2), g(4, 2), g(4, 3), g(5, 3), g(5, 2)];
                c.grid = vec![10.0, 100.0, 1000.0, 10_000.0];
            }
            Catalan => {
                c.geometries = vec![g(3, 2), g(4, 3)];
                c.samples = 1_000_000;
                c.grid = vec![0.8];
            }
            InterpKappa => {
                c.geometries = hyperbolic;
                c.family_size = 140;
                c.buckets = dyadic;
                c.range = Some([1.0, 10.0]);
                c.exponents = vec![1.2];
                c.grid = vec![1.0, 1.25, 1.5, 1.75, 2.0];
            }
        }
        c
    }

    /// Reads a config file. Missing fields fall back to the scenario defaults. A report file is
    /// accepted too, in which case its embedded config is used.
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        Self::parse(None, text)
    }

    /// As [`ScenarioConfig::from_json`], with the scenario fixed by the caller. A `scenario`
    /// field in the file must agree with it.
    pub fn from_json_for(scenario: Scenario, text: &str) -> Result<Self, HarnessError> {
        Self::parse(Some(scenario), text)
    }

    fn parse(expected: Option<Scenario>, text: &str) -> Result<Self, HarnessError> {
        let mut raw: serde_json::Value = serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        if let Some(embedded) = raw.get("config").filter(|v| v.is_object()) {
            raw = embedded.clone();
        }
        let named: Option<Scenario> = match raw.get("scenario") {
            Some(v) => Some(serde_json::from_value(v.clone()).map_err(|e| HarnessError::Config(e.to_string()))?),
            None => None,
        };
        let scenario = match (expected, named) {
            (Some(a), Some(b)) if a != b => {
                return Err(HarnessError::Config(format!("config is for scenario `{b}`, not `{a}`")));
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(HarnessError::Config("config has no `scenario` field".into())),
        };
        let mut merged = serde_json::to_value(Self::default_for(scenario)).expect("config serializes");
        if let (Some(base), Some(over)) = (merged.as_object_mut(), raw.as_object()) {
            for (k, v) in over {
                if k == "tolerances" {
                    if let (Some(bt), Some(ot)) = (base.get_mut(k).and_then(|b| b.as_object_mut()), v.as_object()) {
                        for (tk, tv) in ot {
                            bt.insert(tk.clone(), tv.clone());
                        }
                        continue;
                    }
                }
                base.insert(k.clone(), v.clone());
            }
        }
        let config: Self = serde_json::from_value(merged).map_err(|e| HarnessError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if !(0.0..=1.0).contains(&self.tolerances.accuracy_budget) {
            return bad("accuracy budget must lie in [0, 1]".into());
        }
        if self.buckets.contains(&0) {
            return bad("bucket sizes must be positive".into());
        }
        if let Some([lo, hi]) = self.range {
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return bad(format!("invalid range [{lo}, {hi}]"));
            }
        }
        Ok(())
    }
}
