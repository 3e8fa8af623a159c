//! The named verification scenarios.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use rayon::prelude::*;

use radon_core::curve::FnCurve;
use radon_core::inequality::{alternating_power_check, exponential_weight_check};
use radon_core::lorentz::LorentzIndex;
use radon_core::profiles::random_step_profile_stream;
use radon_core::stats::log_log_slope;
use radon_core::{
    grassmann, hyperbolic, sphere, GrassmannGeometry, HyperbolicGeometry, SphereGeometry, StepProfile, StreamRng, WeakNormGrid,
};

use crate::config::{GeometrySpec, Scenario, ScenarioConfig};
use crate::estimate::estimate_constant;
use crate::report::{Check, RatioReport, Relation, SampleFailure, Series};
use crate::HarnessError;

type CoreResult<T> = radon_core::Result<T>;

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Omit wall-clock time so reports are byte-stable.
    pub deterministic: bool,
}

pub fn run_scenario(config: &ScenarioConfig, opts: &RunOptions) -> Result<RatioReport, HarnessError> {
    config.validate()?;
    let start = Instant::now();
    let mut builder = Builder::new(config);
    match opts.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(config, &mut builder))?;
        }
        None => dispatch(config, &mut builder)?,
    }
    let mut report = builder.finish();
    if !opts.deterministic {
        report.wall_time_secs = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

fn dispatch(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    match c.scenario {
        Scenario::EndpointGrassmann => endpoint_grassmann(c, b),
        Scenario::EndpointHyperbolic => endpoint_hyperbolic(c, b),
        Scenario::EndpointSphere => endpoint_sphere(c, b),
        Scenario::WeakHyperbolic => weak_hyperbolic(c, b),
        Scenario::WeakSphere => weak_sphere(c, b),
        Scenario::LpLqGrassmann => lp_lq_grassmann(c, b),
        Scenario::LpLqHyperbolic => lp_lq_hyperbolic(c, b),
        Scenario::LpLqSphere => lp_lq_sphere(c, b),
        Scenario::Lemma21 => lemma21(c, b),
        Scenario::Lemma37 => lemma37(c, b),
        Scenario::CounterexampleFlat => counterexample_flat(c, b),
        Scenario::CounterexampleCap => counterexample_cap(c, b),
        Scenario::DivergenceProbe => divergence_probe(c, b),
        Scenario::Catalan => catalan(c, b),
        Scenario::InterpKappa => interp_kappa(c, b),
    }
}

struct Builder {
    config: ScenarioConfig,
    series: Vec<Series>,
    checks: Vec<Check>,
    samples: usize,
    failures: Vec<SampleFailure>,
}

impl Builder {
    fn new(config: &ScenarioConfig) -> Self {
        Self { config: config.clone(), series: Vec::new(), checks: Vec::new(), samples: 0, failures: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, value: f64, relation: Relation, threshold: f64) {
        self.checks.push(Check::new(name, value, relation, threshold));
    }

    fn at_most(&mut self, name: impl Into<String>, value: f64, threshold: f64) {
        self.check(name, value, Relation::AtMost, threshold);
    }

    fn at_least(&mut self, name: impl Into<String>, value: f64, threshold: f64) {
        self.check(name, value, Relation::AtLeast, threshold);
    }

    fn count_zero(&mut self, name: impl Into<String>, count: usize) {
        self.check(name, count as f64, Relation::Equal, 0.0);
    }

    /// Records a family whose samples each produce `columns.len()` ratios. Accuracy failures are
    /// counted against the budget; any other error aborts the run. The trend check runs when the
    /// family spans at least two annulus counts. Returns the surviving columns.
    fn family(
        &mut self,
        label: &str,
        columns: &[&str],
        params: BTreeMap<String, String>,
        outcomes: Vec<(usize, CoreResult<Vec<f64>>)>,
    ) -> Result<Vec<Vec<(usize, f64)>>, HarnessError> {
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); columns.len()];
        self.samples += outcomes.len();
        for (index, (bucket, out)) in outcomes.into_iter().enumerate() {
            match out {
                Ok(values) => {
                    for (col, v) in cols.iter_mut().zip(values) {
                        col.push((bucket, v));
                    }
                }
                Err(e) if e.is_accuracy() || matches!(e, radon_core::Error::Integrability(_)) => {
                    self.failures.push(SampleFailure { series: label.to_string(), index, message: e.to_string() })
                }
                Err(e) => return Err(e.into()),
            }
        }
        for (name, col) in columns.iter().zip(&cols) {
            let full = format!("{label} {name}");
            let values: Vec<f64> = col.iter().map(|p| p.1).collect();
            let finite = values.iter().all(|v| v.is_finite());
            let sup = values.iter().copied().fold(0.0, f64::max);
            let mut series = Series {
                label: full.clone(),
                parameters: params.clone(),
                buckets: col.iter().map(|p| p.0).collect(),
                values,
                sup,
                bucket_maxima: Vec::new(),
                slope: None,
                slope_stderr: None,
            };
            self.at_least(format!("{full}: finite samples"), if finite { 1.0 } else { 0.0 }, 1.0);
            let mut sizes: Vec<usize> = col.iter().map(|p| p.0).collect();
            sizes.sort_unstable();
            sizes.dedup();
            if sizes.len() >= 2 {
                match estimate_constant(col) {
                    Ok(est) => {
                        series.bucket_maxima = est.bucket_maxima;
                        series.slope = Some(est.slope);
                        series.slope_stderr = Some(est.stderr);
                        let tol = self.config.tolerances.slope;
                        self.at_most(format!("{full}: bucket-max slope"), est.slope, tol);
                    }
                    Err(e) => self.check(
                        format!("{full}: bucket-max slope ({e})"),
                        f64::NAN,
                        Relation::AtMost,
                        self.config.tolerances.slope,
                    ),
                }
            }
            self.series.push(series);
        }
        Ok(cols)
    }

    /// A deterministic table rather than a random family.
    fn table(&mut self, label: String, params: BTreeMap<String, String>, buckets: Vec<usize>, values: Vec<f64>) {
        self.samples += values.len();
        let sup = values.iter().copied().fold(0.0, f64::max);
        self.series.push(Series {
            label,
            parameters: params,
            buckets,
            values,
            sup,
            bucket_maxima: Vec::new(),
            slope: None,
            slope_stderr: None,
        });
    }

    fn finish(self) -> RatioReport {
        let budget = (self.config.tolerances.accuracy_budget * self.samples as f64).floor();
        let mut checks = self.checks;
        checks.push(Check::new("accuracy failures within budget", self.failures.len() as f64, Relation::AtMost, budget));
        let pass = checks.iter().all(|c| c.pass);
        RatioReport {
            scenario: self.config.scenario,
            seed: self.config.seed,
            config: self.config,
            samples: self.samples,
            series: self.series,
            checks,
            accuracy_failures: self.failures,
            pass,
            wall_time_secs: None,
        }
    }
}

fn params(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn require<T>(v: &[T], what: &str) -> Result<(), HarnessError> {
    if v.is_empty() {
        return Err(HarnessError::Config(format!("scenario needs a nonempty `{what}`")));
    }
    Ok(())
}

fn range(c: &ScenarioConfig) -> Result<(f64, f64), HarnessError> {
    c.range.map(|[a, b]| (a, b)).ok_or_else(|| HarnessError::Config("scenario needs a `range`".into()))
}

/// Runs `f(index, annulus_count)` over the family, in parallel, keeping sample order.
fn sample_family<R, F>(c: &ScenarioConfig, f: F) -> Result<Vec<(usize, R)>, HarnessError>
where
    R: Send,
    F: Fn(u64, usize) -> R + Sync,
{
    require(&c.buckets, "buckets")?;
    if c.family_size == 0 {
        return Err(HarnessError::Config("scenario needs a positive `family_size`".into()));
    }
    Ok((0..c.family_size)
        .into_par_iter()
        .map(|i| {
            let l = c.buckets[i % c.buckets.len()];
            (l, f(i as u64, l))
        })
        .collect())
}

fn profile(c: &ScenarioConfig, index: u64, l: usize) -> CoreResult<StepProfile<f64>> {
    let (lo, hi) = c.range.map(|[a, b]| (a, b)).unwrap_or((0.0, 1.0));
    random_step_profile_stream(c.seed, index, l, (lo, hi))
}

fn grassmann_geom(g: &GeometrySpec) -> Result<GrassmannGeometry, HarnessError> {
    Ok(GrassmannGeometry::new(g.n, g.d, g.k.unwrap_or(0))?)
}

fn hyperbolic_geom(g: &GeometrySpec) -> Result<HyperbolicGeometry, HarnessError> {
    Ok(HyperbolicGeometry::new(g.n, g.d)?)
}

fn sphere_geom(g: &GeometrySpec) -> Result<SphereGeometry, HarnessError> {
    Ok(SphereGeometry::new(g.n, g.d)?)
}

fn fmt_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

fn endpoint_grassmann(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    require(&c.geometries, "geometries")?;
    range(c)?;
    for spec in &c.geometries {
        let g = grassmann_geom(spec)?;
        let out = sample_family(c, |i, l| -> CoreResult<Vec<f64>> {
            let f = profile(c, i, l)?;
            let r = grassmann::endpoint_ratio(&g, &f)?;
            let [x, y, z] = grassmann::lemma_chain(&g, &f, r.truncated_argmax)?;
            let chain_ok = y <= x * (1.0 + 1e-12) && z <= y * (1.0 + 1e-12);
            Ok(vec![r.truncated, r.plain, if chain_ok { 0.0 } else { 1.0 }])
        })?;
        let label = format!("grassmann {}", spec.label());
        b.family(&label, &["truncated", "plain"], params(&[("geometry", spec.label())]), strip_last(&out))?;
        let violations = out.iter().filter(|(_, r)| matches!(r, Ok(v) if v[2] != 0.0)).count();
        b.count_zero(format!("{label}: comparison-chain violations"), violations);
    }
    let g = GrassmannGeometry::new(3, 2, 0)?;
    let ball: StepProfile<f64> = StepProfile::indicator(vec![(0.0, 1.0)])?;
    let fixture = grassmann::endpoint_ratio(&g, &ball)?.plain;
    b.at_most("grassmann (3,2,0) χ[0,1): |plain ratio - 1.2089|", (fixture - 1.2089).abs(), c.tolerances.fixture);
    Ok(())
}

/// Drops the trailing bookkeeping column of each sample.
fn strip_last(out: &[(usize, CoreResult<Vec<f64>>)]) -> Vec<(usize, CoreResult<Vec<f64>>)> {
    out.iter()
        .map(|(l, r)| {
            (
                *l,
                match r {
                    Ok(v) => Ok(v[..v.len() - 1].to_vec()),
                    Err(e) => Err(e.clone()),
                },
            )
        })
        .collect()
}

fn endpoint_hyperbolic(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    require(&c.geometries, "geometries")?;
    range(c)?;
    for spec in &c.geometries {
        let g = hyperbolic_geom(spec)?;
        g.require_endpoint_range()?;
        let out = sample_family(c, |i, l| -> CoreResult<Vec<f64>> {
            let e = hyperbolic::endpoint_bound_ratio(&g, &profile(c, i, l)?)?;
            Ok(vec![e.weighted, e.plain])
        })?;
        let label = format!("hyperbolic {}", spec.label());
        let cols = b.family(&label, &["weighted", "plain"], params(&[("geometry", spec.label())]), out)?;
        let inverted = cols[0].iter().zip(&cols[1]).filter(|(w, p)| p.1 > w.1 * (1.0 + 1e-12)).count();
        b.count_zero(format!("{label}: samples with plain ratio above weighted ratio"), inverted);
    }
    let g = HyperbolicGeometry::new(3, 2)?;
    let shell: StepProfile<f64> = StepProfile::indicator(vec![(1.0, 2.0)])?;
    let w = hyperbolic::endpoint_bound_ratio(&g, &shell)?.weighted;
    b.at_most(
        "hyperbolic (3,2) χ[1,2): |weighted ratio - 2π/√1.07357|",
        (w - 2.0 * PI / 1.07357f64.sqrt()).abs(),
        c.tolerances.fixture,
    );
    Ok(())
}

fn endpoint_sphere(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    require(&c.geometries, "geometries")?;
    range(c)?;
    for spec in &c.geometries {
        let g = sphere_geom(spec)?;
        let label = format!("sphere {}", spec.label());
        if g.d() == 1 {
            let out = sample_family(c, |i, l| -> CoreResult<Vec<f64>> {
                let (sq, ratio) = sphere::d1_chain_ratios(&g, &profile(c, i, l)?)?;
                Ok(vec![ratio, sq])
            })?;
            b.family(&label, &["weighted", "chain I²/length"], params(&[("geometry", spec.label())]), out)?;
        } else {
            let out = sample_family(c, |i, l| -> CoreResult<Vec<f64>> {
                Ok(vec![sphere::weighted_endpoint_ratio(&g, &profile(c, i, l)?)?.0])
            })?;
            b.family(&label, &["weighted"], params(&[("geometry", spec.label())]), out)?;
        }
    }
    Ok(())
}

/// `sup_λ λ μ(λ)^{1/r}` over a log-spaced grid with golden-section refinement at the peak.
pub fn lambda_grid_sup(mu: &dyn Fn(f64) -> f64, r: f64, lo: f64, hi: f64) -> f64 {
    let phi = |l: f64| l * mu(l).max(0.0).powf(1.0 / r);
    let n = 4000;
    let grid: Vec<f64> = (0..=n).map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / n as f64).exp()).collect();
    let (mut best, mut at) = (0.0, 0);
    for (i, &l) in grid.iter().enumerate() {
        let v = phi(l);
        if v > best {
            best = v;
            at = i;
        }
    }
    let (mut a, mut bb) = (grid[at.saturating_sub(1)], grid[(at + 1).min(n)]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let x = bb - g * (bb - a);
        let y = a + g * (bb - a);
        if phi(x) >= phi(y) {
            bb = y;
        } else {
            a = x;
        }
    }
    best.max(phi(0.5 * (a + bb)))
}

fn weak_grid(c: &ScenarioConfig) -> WeakNormGrid {
    let mut g = WeakNormGrid::default();
    if c.weak_cells > 0 {
        g.cells = c.weak_cells;
    }
    g
}

fn weak_hyperbolic(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    require(&c.geometries, "geometries")?;
    range(c)?;
    let grid = weak_grid(c);
    for spec in &c.geometries {
        let g = hyperbolic_geom(spec)?;
        g.require_endpoint_range()?;
        let index = LorentzIndex::new(g.critical_p(), 1.0)?;
        let out = sample_family(c, |i, l| -> CoreResult<Vec<f64>> {
            let f = profile(c, i, l)?;
            let weak = hyperbolic::weak_norm_decay_with(&g, &f, grid)?;
            Ok(vec![weak / hyperbolic::hn_lorentz_norm(&f, &g, index)?])
        })?;
        let label = format!("hyperbolic {}", spec.label());
        b.family(&label, &["weak / L^{crit,1}"], params(&[("geometry", spec.label()), ("cells", grid.cells.to_string())]), out)?;
    }
    // Witness: 1/cosh on (3,2), where μ{1/cosh > λ} = S/2 + sinh(2S)/4 with S = arccosh(1/λ).
    let g = HyperbolicGeometry::new(3, 2)?;
    let curve = FnCurve::new(|s: f64| 1.0 / s.cosh(), None, vec![]);
    let value = hyperbolic::weak_norm_of(&curve, &g, WeakNormGrid::default())?;
    let mu = |l: f64| {
        if l >= 1.0 {
            return 0.0;
        }
        let s = (1.0 / l).acosh();
        s / 2.0 + (2.0 * s).sinh() / 4.0
    };
    let oracle = lambda_grid_sup(&mu, 2.0, 1e-9, 1.0);
    b.table("witness 1/cosh (3,2)".into(), params(&[("oracle", format!("{oracle}"))]), vec![0], vec![value]);
    b.at_most("witness 1/cosh (3,2): |weak norm - λ-grid oracle|", (value - oracle).abs(), c.tolerances.fixture);
    Ok(())
}

fn weak_sphere(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    require(&c.geometries, "geometries")?;
    range(c)?;
    let grid = weak_grid(c);
    for spec in &c.geometries {
        let g = sphere_geom(spec)?;
        let index = LorentzIndex::new(g.critical_p(), 1.0)?;
        let out = sample_family(c, |i, l| -> CoreResult<Vec<f64>> {
            let f = profile(c, i, l)?;
            let weak = sphere::weak_norm_decay_with(&g, &f, grid)?;
            Ok(vec![weak / sphere::sphere_lorentz_norm(&f, &g, index)?])
        })?;
        let label = format!("sphere {}", spec.label());
        b.family(&label, &["weak / L^{n/d,1}"], params(&[("geometry", spec.label()), ("cells", grid.cells.to_string())]), out)?;
    }
    // Witness: 1/cos on (3,2), where μ{1/cos > λ} = π/4 - θ₀/2 - sin(2θ₀)/4 with θ₀ = arccos(1/λ).
    let g = SphereGeometry::new(3, 2)?;
    let curve = FnCurve::new(|t: f64| 1.0 / t.cos(), Some(FRAC_PI_2), vec![]);
    let value = sphere::weak_norm_of(&curve, &g, WeakNormGrid::default())?;
    let mu = |l: f64| {
        if l < 1.0 {
            return PI / 4.0;
        }
        let t0 = (1.0 / l).acos();
        PI / 4.0 - t0 / 2.0 - (2.0 * t0).sin() / 4.0
    };
    let oracle = lambda_grid_sup(&mu, 3.0, 1e-3, 1e8);
    b.table("witness 1/cos (3,2)".into(), params(&[("oracle", format!("{oracle}"))]), vec![0], vec![value]);
    b.at_most("witness 1/cos (3,2): |weak norm - λ-grid oracle|", (value - oracle).abs(), c.tolerances.fixture);
    Ok(())
}

/// Samples below this index also run the dilation check.
const DILATION_SAMPLES: u64 = 40;

fn lp_lq_grassmann(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    require(&c.geometries, "geometries")?;
    require(&c.exponents, "exponents")?;
    range(c)?;
    let lambdas: Vec<f64> = c.grid.iter().copied().filter(|&l| l != 1.0).collect();
    for spec in &c.geometries {
        let g = grassmann_geom(spec)?;
        for &p in c.exponents.iter().filter(|&&p| p < g.critical_p::<f64>()) {
            let q = grassmann::lp_lq_exponent(&g, p)?;
            let out = sample_family(c, |i, l| -> CoreResult<Vec<f64>> {
                let f = profile(c, i, l)?;
                let base = grassmann::lp_lq_ratio(&g, &f, p)?.ratio;
                let mut dev: f64 = 0.0;
                if i < DILATION_SAMPLES {
                    for &lam in &lambdas {
                        let r = grassmann::lp_lq_ratio(&g, &f.dilate(lam)?, p)?.ratio;
                        dev = dev.max(((r - base) / base).abs());
                    }
                }
                Ok(vec![base, dev])
            })?;
            let label = format!("grassmann {} p={}", spec.label(), fmt_p(p));
            b.family(
                &label,
                &["ratio"],
                params(&[("geometry", spec.label()), ("p", fmt_p(p)), ("q", format!("{q}"))]),
                strip_last(&out),
            )?;
            let dev = out.iter().filter_map(|(_, r)| r.as_ref().ok().map(|v| v[1])).fold(0.0, f64::max);
            b.at_most(format!("{label}: dilation deviation"), dev, c.tolerances.identity);
        }
    }
    Ok(())
}

fn lp_lq_hyperbolic(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    require(&c.geometries, "geometries")?;
    require(&c.exponents, "exponents")?;
    range(c)?;
    for spec in &c.geometries {
        let g = hyperbolic_geom(spec)?;
        for &p in c.exponents.iter().filter(|&&p| p < g.critical_p::<f64>()) {
            let q = hyperbolic::lp_lq_exponent(&g, p)?;
            let out = sample_family(c, |i, l| -> CoreResult<Vec<f64>> {
                Ok(vec![hyperbolic::lp_lq_ratio(&g, &profile(c, i, l)?, p)?.ratio])
            })?;
            let label = format!("hyperbolic {} p={}", spec.label(), fmt_p(p));
            b.family(&label, &["ratio"], params(&[("geometry", spec.label()), ("p", fmt_p(p)), ("q", format!("{q}"))]), out)?;
        }
    }
    Ok(())
}

fn lp_lq_sphere(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    require(&c.geometries, "geometries")?;
    require(&c.exponents, "exponents")?;
    range(c)?;
    for spec in &c.geometries {
        let g = sphere_geom(spec)?;
        for &p in &c.exponents {
            let out =
                sample_family(c, |i, l| -> CoreResult<Vec<f64>> { Ok(vec![sphere::lp_ratio(&g, &profile(c, i, l)?, p)?]) })?;
            let label = format!("sphere {} p={}", spec.label(), fmt_p(p));
            b.family(&label, &["ratio"], params(&[("geometry", spec.label()), ("p", fmt_p(p))]), out)?;
        }
        // Weighted diagonal n/p = (n-d)/q + d at the midpoint of [1, n/d).
        let p = 0.5 * (1.0 + g.critical_p::<f64>());
        let q = sphere::weighted_exponent(&g, p)?;
        let out = sample_family(c, |i, l| -> CoreResult<Vec<f64>> {
            Ok(vec![sphere::weighted_lp_lq_ratio(&g, &profile(c, i, l)?, p)?.1])
        })?;
        let label = format!("sphere {} weighted p={}", spec.label(), fmt_p(p));
        b.family(&label, &["ratio"], params(&[("geometry", spec.label()), ("p", fmt_p(p)), ("q", format!("{q}"))]), out)?;
    }
    Ok(())
}

fn lemma21(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    if c.samples == 0 || c.buckets.len() != 2 || c.grid.len() != 2 {
        return Err(HarnessError::Config(
            "lemma21 needs `samples`, `buckets` = [min len, max len] and `grid` = [γ min, γ max]".into(),
        ));
    }
    let (lmin, lmax) = (c.buckets[0] as u64, c.buckets[1] as u64);
    let (gmin, gmax) = (c.grid[0], c.grid[1]);
    if lmin > lmax || !(1.0 <= gmin && gmin <= gmax) {
        return Err(HarnessError::Config("lemma21 needs min <= max and 1 <= γ min <= γ max".into()));
    }
    let out: Vec<CoreResult<(usize, usize, f64)>> = (0..c.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = StreamRng::new(c.seed, i as u64);
            let len = rng.int_in(lmin, lmax) as usize;
            let mut x: Vec<f64> = (0..len).map(|_| rng.uniform_in(0.0, 10.0)).collect();
            x.sort_by(|a, b| b.total_cmp(a));
            let drawn = rng.uniform_in(gmin, gmax);
            let mut gammas = vec![drawn, 1.0, 1.5, 2.0, len as f64 / 2.0, 5.0];
            gammas.retain(|&g| (gmin..=gmax).contains(&g));
            let (mut violations, mut min_slack) = (0, f64::INFINITY);
            for &gamma in &gammas {
                let chk = alternating_power_check(&x, gamma)?;
                if !chk.holds {
                    violations += 1;
                }
                min_slack = min_slack.min(chk.slack() / chk.rhs.abs().max(1.0));
            }
            Ok((len, violations, min_slack))
        })
        .collect();
    let mut rows = Vec::with_capacity(out.len());
    for r in out {
        rows.push(r?);
    }
    let violations: usize = rows.iter().map(|r| r.1).sum();
    let min_slack = rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    b.table(
        "relative slack".into(),
        params(&[("gamma", format!("[{gmin}, {gmax}]")), ("length", format!("[{lmin}, {lmax}]"))]),
        rows.iter().map(|r| r.0).collect(),
        rows.iter().map(|r| r.2).collect(),
    );
    b.count_zero("alternating inequality violations", violations);
    b.at_least("smallest relative slack", min_slack, -1e-12);
    Ok(())
}

fn lemma37(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    if c.exponents.is_empty() || !c.exponents.len().is_multiple_of(2) {
        return Err(HarnessError::Config("lemma37 needs `exponents` as flattened (δ, p) pairs".into()));
    }
    let (lo, hi) = range(c)?;
    for pair in c.exponents.chunks(2) {
        let (delta, p) = (pair[0], pair[1]);
        let out = sample_family(c, |i, l| -> CoreResult<Vec<f64>> {
            let f = random_step_profile_stream(c.seed, i, l, (0.0, hi - lo))?;
            let union: Vec<(f64, f64)> = f.intervals().iter().map(|&(a, b)| (a + lo, b + lo)).collect();
            let chk = exponential_weight_check(&union, delta, p)?;
            let ratio = chk.ratio.unwrap_or(0.0);
            Ok(vec![ratio, if ratio <= chk.derived_bound * (1.0 + 1e-12) { 0.0 } else { 1.0 }])
        })?;
        let label = format!("δ={delta} p={p}");
        let bound = p.powf(1.0 / p) * delta.abs().powf(1.0 / p - 1.0);
        b.family(
            &label,
            &["ratio"],
            params(&[("delta", format!("{delta}")), ("p", format!("{p}")), ("derived candidate", format!("{bound}"))]),
            strip_last(&out),
        )?;
        let above = out.iter().filter(|(_, r)| matches!(r, Ok(v) if v[1] != 0.0)).count();
        b.count_zero(format!("{label}: samples above the derived candidate p^(1/p)|δ|^(1/p-1)"), above);
    }
    Ok(())
}

fn counterexample_flat(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    require(&c.geometries, "geometries")?;
    if c.samples == 0 {
        return Err(HarnessError::Config("counterexample-flat needs `samples` (family length)".into()));
    }
    let a: Vec<f64> = (1..=c.samples as i32).map(|i| 0.5f64.powi(i)).collect();
    for spec in &c.geometries {
        let g = sphere_geom(spec)?;
        let p = spec.p.unwrap_or_else(|| g.critical_p());
        let rows = sphere::counterexample_flat(&g, &a, p)?;
        let label = format!("sphere {} p={}", spec.label(), fmt_p(p));
        let idx: Vec<usize> = (1..=rows.len()).collect();
        b.table(format!("{label} sup"), params(&[("geometry", spec.label())]), idx.clone(), rows.iter().map(|r| r.sup).collect());
        b.table(format!("{label} norm"), params(&[("geometry", spec.label())]), idx, rows.iter().map(|r| r.norm).collect());
        b.count_zero(format!("{label}: rows with sup != 1"), rows.iter().filter(|r| r.sup != 1.0).count());
        b.count_zero(
            format!("{label}: rows where the norm fails to decrease"),
            rows.windows(2).filter(|w| !(w[1].norm < w[0].norm)).count(),
        );
        b.at_most(format!("{label}: last norm"), rows.last().unwrap().norm, 1e-2);
    }
    Ok(())
}

fn counterexample_cap(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    require(&c.geometries, "geometries")?;
    require(&c.grid, "grid")?;
    let mut m: Vec<u64> = c.grid.iter().map(|&x| x.round() as u64).collect();
    m.dedup();
    for spec in &c.geometries {
        let g = sphere_geom(spec)?;
        let p = spec.p.ok_or_else(|| HarnessError::Config("counterexample-cap geometries need `p`".into()))?;
        let rows = sphere::counterexample_cap(&g, p, &m)?;
        let x: Vec<f64> = rows.iter().map(|r| r.m as f64).collect();
        let norms: Vec<f64> = rows.iter().map(|r| r.norm).collect();
        let lower: Vec<f64> = rows.iter().map(|r| r.lower_bound).collect();
        let ns = log_log_slope(&x, &norms)?;
        let ls = log_log_slope(&x, &lower)?;
        let label = format!("sphere {}", spec.label());
        let idx: Vec<usize> = rows.iter().map(|r| r.m as usize).collect();
        let expected = -(g.n() as f64) / (2.0 * p);
        b.table(
            format!("{label} norm"),
            params(&[("slope", format!("{}", ns.slope)), ("expected", format!("{expected}"))]),
            idx.clone(),
            norms,
        );
        b.table(format!("{label} lower bound"), params(&[("slope", format!("{}", ls.slope))]), idx, lower);
        b.at_most(format!("{label}: |norm slope + n/(2p)|"), (ns.slope - expected).abs(), c.tolerances.rate_slope);
        b.at_least(format!("{label}: lower-bound slope"), ls.slope, -(g.d() as f64) / 2.0 - c.tolerances.rate_slope);
    }
    Ok(())
}

fn divergence_probe(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    require(&c.geometries, "geometries")?;
    if c.grid.len() < 2 {
        return Err(HarnessError::Config("divergence-probe needs at least two cut-offs in `grid`".into()));
    }
    for spec in &c.geometries {
        let g = hyperbolic_geom(spec)?;
        g.require_endpoint_range()?;
        let crit = g.critical_p::<f64>();
        let at = hyperbolic::divergence_probe(&g, crit, &c.grid)?;
        let below = hyperbolic::divergence_probe(&g, 0.9 * crit, &c.grid)?;
        let label = format!("hyperbolic {}", spec.label());
        let idx: Vec<usize> = (0..c.grid.len()).collect();
        b.table(format!("{label} p=crit"), params(&[("p", format!("{crit}"))]), idx.clone(), at.clone());
        b.table(format!("{label} p=0.9crit"), params(&[("p", format!("{}", 0.9 * crit))]), idx, below.clone());
        for (j, w) in at.windows(2).enumerate() {
            let growth = (w[1] - w[0]) / (c.grid[j + 1] / c.grid[j]).ln();
            b.at_most(
                format!("{label}: |increment / log ratio - 1| on [{}, {}]", c.grid[j], c.grid[j + 1]),
                (growth - 1.0).abs(),
                c.tolerances.rate,
            );
        }
        let n = below.len();
        b.at_most(
            format!("{label}: subcritical increment on [{}, {}]", c.grid[n - 2], c.grid[n - 1]),
            (below[n - 1] - below[n - 2]).abs(),
            c.tolerances.cauchy,
        );
    }
    Ok(())
}

fn catalan(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    require(&c.geometries, "geometries")?;
    if c.samples < 2 {
        return Err(HarnessError::Config("catalan needs `samples` >= 2".into()));
    }
    let x_norm = c.grid.first().copied().unwrap_or(0.8);
    let psis: [(&str, Vec<f64>); 4] =
        [("1", vec![1.0]), ("t", vec![0.0, 1.0]), ("t^2", vec![0.0, 0.0, 1.0]), ("t^4", vec![0.0, 0.0, 0.0, 0.0, 1.0])];
    let mut cases = Vec::new();
    for spec in &c.geometries {
        for (name, coeffs) in &psis {
            cases.push((spec.d, *name, coeffs.clone()));
        }
    }
    let results: Vec<CoreResult<sphere::CatalanCheck>> = cases
        .par_iter()
        .enumerate()
        .map(|(i, (d, _, coeffs))| sphere::catalan_check(*d, coeffs, x_norm, c.samples, c.seed, i as u64))
        .collect();
    for ((d, name, _), r) in cases.iter().zip(results) {
        let chk = r?;
        let label = format!("S^{d} ψ={name}");
        b.table(
            label.clone(),
            params(&[("rhs", format!("{}", chk.rhs)), ("std_err", format!("{}", chk.std_err))]),
            vec![c.samples],
            vec![chk.lhs],
        );
        b.at_most(
            format!("{label}: |MC - quadrature| - {}·SE", c.tolerances.sigmas),
            chk.abs_diff - c.tolerances.sigmas * chk.std_err,
            1e-12,
        );
    }
    Ok(())
}

fn interp_kappa(c: &ScenarioConfig, b: &mut Builder) -> Result<(), HarnessError> {
    require(&c.geometries, "geometries")?;
    require(&c.exponents, "exponents")?;
    require(&c.grid, "grid")?;
    range(c)?;
    for spec in &c.geometries {
        let g = hyperbolic_geom(spec)?;
        for &p in c.exponents.iter().filter(|&&p| p < g.critical_p::<f64>()) {
            for &kappa in &c.grid {
                let q = hyperbolic::interpolation_exponent(&g, p, kappa)?;
                let out = sample_family(c, |i, l| -> CoreResult<Vec<f64>> {
                    Ok(vec![hyperbolic::lp_lq_ratio_at(&g, &profile(c, i, l)?, p, q)?.ratio])
                })?;
                let label = format!("hyperbolic {} p={} κ={kappa}", spec.label(), fmt_p(p));
                b.family(
                    &label,
                    &["ratio"],
                    params(&[("geometry", spec.label()), ("p", fmt_p(p)), ("kappa", format!("{kappa}")), ("q", format!("{q}"))]),
                    out,
                )?;
            }
        }
    }
    Ok(())
}
