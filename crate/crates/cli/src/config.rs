//! TOML space definitions.

use std::fmt;
use std::path::Path;

use pcm_core::fixedpoint::FixedPointConfig;
use pcm_core::{
    Carrier, ConeMetric, ConeSpec, Kernel, KernelFamily, MapKind, Norm, PcmSpace, Scalarizer, SelfMap, TNorm, Vector,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub name: String,
    pub carrier: CarrierConfig,
    #[serde(default)]
    pub cone: ConeConfig,
    #[serde(default)]
    pub tnorm: TNorm,
    pub kernel: KernelConfig,
    #[serde(default)]
    pub structure: StructureKind,
    pub grids: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<MapsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_point: Option<FixedPointSettings>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CarrierConfig {
    Interval { lo: f64, hi: f64, samples: usize },
    Naturals { max: u64 },
    Points { points: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    pub dim: usize,
    #[serde(default)]
    pub norm: Norm,
}

impl Default for ConeConfig {
    fn default() -> Self {
        ConeConfig { dim: 1, norm: Norm::Sup }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    Heaviside,
    ExpRatio,
    Fraction,
    RationalPair,
    FromConeMetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    pub family: FamilyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<ConeMetric>,
    #[serde(default)]
    pub scalarizer: Scalarizer,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureKind {
    Affine,
    #[default]
    None,
}

/// A `t` value: a scalar is repeated across every cone coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TValue {
    Scalar(f64),
    Vector(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_values: Vec<TValue>,
    #[serde(default = "default_mus")]
    pub mu_values: Vec<f64>,
    #[serde(default = "default_lambdas")]
    pub lambda_values: Vec<f64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Resolution of the left-limit grid used for diameters.
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    /// Random probes added to the carrier samples for ball disjointness.
    #[serde(default = "default_probes")]
    pub random_probes: usize,
}

fn default_mus() -> Vec<f64> {
    vec![0.25, 0.5, 0.75]
}

fn default_lambdas() -> Vec<f64> {
    vec![0.1, 0.5, 0.9]
}

fn default_tolerance() -> f64 {
    1e-12
}

fn default_resolution() -> usize {
    1000
}

fn default_probes() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MapConfig {
    ScaleHalf,
    Quad,
    Identity,
    Affine { a: f64, b: f64 },
    Tabulated { knots: Vec<[f64; 2]> },
}

impl MapConfig {
    fn kind(&self) -> MapKind<f64> {
        match self {
            MapConfig::ScaleHalf => MapKind::ScaleHalf,
            MapConfig::Quad => MapKind::Quad,
            MapConfig::Identity => MapKind::identity(),
            MapConfig::Affine { a, b } => MapKind::Affine { a: *a, b: *b },
            MapConfig::Tabulated { knots } => MapKind::Tabulated(knots.iter().map(|k| (k[0], k[1])).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapsConfig {
    pub f: MapConfig,
    pub g: MapConfig,
    /// Defaults to the carrier interval.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointSettings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mann_mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
}

/// A config problem, located by dotted field path and, when known, source line.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "config error at line {l}, field `{}`: {}", self.field, self.message),
            None => write!(f, "config error, field `{}`: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// First line declaring the last segment of `field` inside its table, 1-based.
fn line_of(source: &str, field: &str) -> Option<usize> {
    let mut parts: Vec<&str> = field.split('.').collect();
    let key = parts.pop()?;
    let table = parts.join(".");
    let mut current = String::new();
    let mut table_line = None;
    for (i, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if let Some(header) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = header.trim().to_string();
            if current == field {
                return Some(i + 1);
            }
            if current == table {
                table_line = Some(i + 1);
            }
            continue;
        }
        if current == table {
            if let Some(rest) = line.strip_prefix(key) {
                if rest.trim_start().starts_with('=') {
                    return Some(i + 1);
                }
            }
        }
    }
    table_line
}

pub struct Loaded {
    pub config: SpaceConfig,
    source: String,
}

impl Loaded {
    fn err(&self, field: &str, message: impl Into<String>) -> ConfigError {
        ConfigError {
            field: field.to_string(),
            line: line_of(&self.source, field),
            message: message.into(),
        }
    }
}

pub fn parse(source: &str) -> Result<SpaceConfig, ConfigError> {
    let config: SpaceConfig = toml::from_str(source).map_err(|e| {
        let line = e.span().map(|s| source[..s.start].matches('\n').count() + 1);
        ConfigError {
            field: "<document>".into(),
            line,
            message: e.message().to_string(),
        }
    })?;
    let loaded = Loaded {
        config,
        source: source.to_string(),
    };
    validate(&loaded)?;
    Ok(loaded.config)
}

pub fn load(path: &Path) -> Result<SpaceConfig, ConfigError> {
    let source = std::fs::read_to_string(path).map_err(|e| ConfigError {
        field: "<file>".into(),
        line: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse(&source)
}

fn in_open_unit(v: f64) -> bool {
    v > 0.0 && v < 1.0
}

fn validate(l: &Loaded) -> Result<(), ConfigError> {
    let c = &l.config;
    if c.name.trim().is_empty() {
        return Err(l.err("name", "must not be empty"));
    }
    match &c.carrier {
        CarrierConfig::Interval { lo, hi, samples } => {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(l.err("carrier.lo", format!("need finite lo < hi, got [{lo}, {hi}]")));
            }
            if *samples < 2 {
                return Err(l.err("carrier.samples", "need at least 2 samples"));
            }
        }
        CarrierConfig::Naturals { max } => {
            if *max < 2 {
                return Err(l.err("carrier.max", "need max ≥ 2"));
            }
        }
        CarrierConfig::Points { points } => {
            if points.len() < 2 || points.iter().any(|p| !p.is_finite()) {
                return Err(l.err("carrier.points", "need at least 2 finite points"));
            }
        }
    }
    if c.cone.dim == 0 {
        return Err(l.err("cone.dim", "must be positive"));
    }
    let is_interval = matches!(c.carrier, CarrierConfig::Interval { .. });
    match c.kernel.family {
        FamilyName::RationalPair if !matches!(c.carrier, CarrierConfig::Naturals { .. }) => {
            return Err(l.err("kernel.family", "kernel family incompatible with carrier"));
        }
        FamilyName::FromConeMetric if c.kernel.metric.is_none() => {
            return Err(l.err("kernel.metric", "from-cone-metric needs a metric"));
        }
        _ => {}
    }
    if c.kernel.metric.is_some() && c.kernel.family != FamilyName::FromConeMetric {
        return Err(l.err("kernel.metric", "only from-cone-metric takes a metric"));
    }
    if let Some(s) = c.kernel.scale {
        if !(s.is_finite() && s > 0.0) {
            return Err(l.err("kernel.scale", "must be positive"));
        }
    }
    let g = &c.grids;
    if g.t_values.is_empty() {
        return Err(l.err("grids.t_values", "must not be empty"));
    }
    for t in &g.t_values {
        let (ok, dim_ok) = match t {
            TValue::Scalar(v) => (v.is_finite() && *v > 0.0, true),
            TValue::Vector(vs) => (vs.iter().all(|v| v.is_finite() && *v > 0.0), vs.len() == c.cone.dim),
        };
        if !ok {
            return Err(l.err("grids.t_values", "all t values must be strictly positive"));
        }
        if !dim_ok {
            return Err(l.err("grids.t_values", format!("vector t values need {} components", c.cone.dim)));
        }
    }
    if g.mu_values.iter().any(|m| !in_open_unit(*m)) {
        return Err(l.err("grids.mu_values", "mu values must lie in (0, 1)"));
    }
    if g.lambda_values.is_empty() || g.lambda_values.iter().any(|m| !in_open_unit(*m)) {
        return Err(l.err("grids.lambda_values", "need lambda values in (0, 1)"));
    }
    if !(g.tolerance.is_finite() && g.tolerance > 0.0) {
        return Err(l.err("grids.tolerance", "must be positive"));
    }
    if g.resolution == 0 {
        return Err(l.err("grids.resolution", "must be positive"));
    }
    if c.structure == StructureKind::Affine {
        if !is_interval {
            return Err(l.err("structure", "the affine structure needs an interval carrier"));
        }
        if g.mu_values.is_empty() {
            return Err(l.err("grids.mu_values", "the affine structure needs mu values"));
        }
    }
    if let Some(m) = &c.maps {
        let Some((lo, hi)) = c.domain() else {
            return Err(l.err("maps", "self-maps need an interval carrier"));
        };
        let (clo, chi) = interval_bounds(&c.carrier).expect("interval carrier");
        if !(lo < hi && lo >= clo && hi <= chi) {
            return Err(l.err("maps.domain", "domain must be an interval inside the carrier"));
        }
        for (name, map) in [("maps.f", &m.f), ("maps.g", &m.g)] {
            SelfMap::new(map.kind(), lo, hi).map_err(|e| l.err(name, e.to_string()))?;
        }
    }
    if let Some(fp) = &c.fixed_point {
        let d = FixedPointConfig::<f64>::default();
        let tol = fp.tol.unwrap_or(d.tol);
        if !(tol > 0.0) {
            return Err(l.err("fixed_point.tol", "must be positive"));
        }
        if !in_open_unit(fp.mann_mu.unwrap_or(d.mann_mu)) {
            return Err(l.err("fixed_point.mann_mu", "must lie in (0, 1)"));
        }
        if fp.grid_n.unwrap_or(d.grid_n) < 2 {
            return Err(l.err("fixed_point.grid_n", "must be at least 2"));
        }
        if fp.max_iter == Some(0) {
            return Err(l.err("fixed_point.max_iter", "must be positive"));
        }
    }
    Ok(())
}

fn interval_bounds(c: &CarrierConfig) -> Option<(f64, f64)> {
    match c {
        CarrierConfig::Interval { lo, hi, .. } => Some((*lo, *hi)),
        _ => None,
    }
}

impl SpaceConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn carrier(&self) -> Carrier<f64> {
        let built = match &self.carrier {
            CarrierConfig::Interval { lo, hi, samples } => Carrier::interval(*lo, *hi, *samples),
            CarrierConfig::Naturals { max } => Carrier::naturals(*max),
            CarrierConfig::Points { points } => Carrier::points(points.clone()),
        };
        built.expect("validated carrier")
    }

    pub fn kernel_family(&self) -> KernelFamily {
        match self.kernel.family {
            FamilyName::Heaviside => KernelFamily::Heaviside,
            FamilyName::ExpRatio => KernelFamily::ExpRatio,
            FamilyName::Fraction => KernelFamily::Fraction,
            FamilyName::RationalPair => KernelFamily::RationalPair,
            FamilyName::FromConeMetric => KernelFamily::FromConeMetric(self.kernel.metric.expect("validated metric")),
        }
    }

    /// The space without the construction-time metric sweep; metric failures
    /// are reported by the suites instead.
    pub fn space(&self) -> Result<PcmSpace<f64>, pcm_core::Error> {
        let kernel = Kernel::new(self.kernel_family())
            .with_scale(self.kernel.scale.unwrap_or(1.0))
            .with_scalarizer(self.kernel.scalarizer);
        PcmSpace::new(
            self.carrier(),
            ConeSpec::with_norm(self.cone.dim, self.cone.norm)?,
            self.tnorm,
            kernel,
        )
    }

    pub fn t_values(&self) -> Vec<Vector<f64>> {
        self.grids
            .t_values
            .iter()
            .map(|t| match t {
                TValue::Scalar(v) => Vector::splat(self.cone.dim, *v),
                TValue::Vector(vs) => Vector::new(vs.clone()).expect("validated t value"),
            })
            .collect()
    }

    pub fn domain(&self) -> Option<(f64, f64)> {
        let maps = self.maps.as_ref()?;
        match maps.domain {
            Some([lo, hi]) => Some((lo, hi)),
            None => interval_bounds(&self.carrier),
        }
    }

    pub fn maps(&self) -> Option<(SelfMap<f64>, SelfMap<f64>)> {
        let m = self.maps.as_ref()?;
        let (lo, hi) = self.domain()?;
        Some((
            SelfMap::new(m.f.kind(), lo, hi).expect("validated map"),
            SelfMap::new(m.g.kind(), lo, hi).expect("validated map"),
        ))
    }

    pub fn fixed_point_config(&self) -> FixedPointConfig<f64> {
        let d = FixedPointConfig::default();
        match &self.fixed_point {
            None => d,
            Some(fp) => FixedPointConfig {
                tol: fp.tol.unwrap_or(d.tol),
                max_iter: fp.max_iter.unwrap_or(d.max_iter),
                mann_mu: fp.mann_mu.unwrap_or(d.mann_mu),
                grid_n: fp.grid_n.unwrap_or(d.grid_n),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
name = "frac"
tnorm = "minimum"

[carrier]
kind = "interval"
lo = 0.0
hi = 1.0
samples = 11

[kernel]
family = "fraction"

[grids]
t_values = [0.5, 1.0]
"#;

    #[test]
    fn parses_minimal_config() {
        let c = parse(GOOD).unwrap();
        assert_eq!(c.cone, ConeConfig::default());
        assert_eq!(c.grids.mu_values, default_mus());
        assert_eq!(c.t_values().len(), 2);
    }

    #[test]
    fn incompatible_kernel_names_field_and_line() {
        let src = GOOD.replace("\"fraction\"", "\"rational-pair\"");
        let e = parse(&src).unwrap_err();
        assert_eq!(e.field, "kernel.family");
        assert_eq!(e.line, Some(12));
        assert!(e.to_string().contains("kernel family incompatible with carrier"));
    }

    #[test]
    fn bad_interval_is_located() {
        let src = GOOD.replace("lo = 0.0", "lo = 2.0");
        let e = parse(&src).unwrap_err();
        assert_eq!((e.field.as_str(), e.line), ("carrier.lo", Some(7)));
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let e = parse("name = \"x\"\n[carrier\n").unwrap_err();
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(parse(&format!("{GOOD}\nbogus = 1\n")).is_err());
    }

    #[test]
    fn round_trips() {
        let c = parse(GOOD).unwrap();
        assert_eq!(parse(&c.to_toml()).unwrap(), c);
    }
}
