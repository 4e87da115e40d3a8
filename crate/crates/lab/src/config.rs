//! Scenario configuration (TOML).
//!
//! ```toml
//! curvature = 1
//!
//! [grid]
//! n_colat = 32
//! n_lon = 64
//!
//! [surface]
//! kind = "harmonic"
//! radius = 0.8
//! terms = [{ l = 2, m = 0, eps = 0.1 }]
//!
//! [pair.isometry]
//! kind = "rotation"
//! axis = [0.3, -0.2, 1.0]
//! angle = 0.9
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use rigidlab_core::harmonics::real_sph_harm;
use rigidlab_core::{AmbientIsometry, RadialGraph, ScalarField, SpaceForm, SphereGrid, Tolerances};

/// Invalid configuration, reported with the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub curvature: i32,
    #[serde(default)]
    pub grid: GridConfig,
    pub surface: SurfaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairConfig>,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_colat: usize,
    pub n_lon: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n_colat: 32,
            n_lon: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicTerm {
    pub l: u32,
    pub m: i32,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    Constant {
        radius: f64,
    },
    /// ρ = radius · (1 + Σ eps · Y_lm).
    Harmonic {
        radius: f64,
        #[serde(default)]
        terms: Vec<HarmonicTerm>,
    },
    /// CSV with header `ring,col,rho`, one row per grid node.
    Tabulated {
        path: PathBuf,
    },
    /// Harmonic surface with eps drawn uniformly from [−amplitude, amplitude]
    /// for every 1 ≤ l ≤ max_degree; resolved into `harmonic` using the seed.
    Random {
        radius: f64,
        max_degree: u32,
        amplitude: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IsometrySpec {
    Identity,
    /// Rotation about the polar axis.
    Pole {
        angle: f64,
    },
    Rotation {
        axis: [f64; 3],
        angle: f64,
    },
    Matrix {
        rows: [[f64; 3]; 3],
    },
    /// K = 0 only.
    Translation {
        offset: [f64; 3],
    },
}

impl IsometrySpec {
    pub fn build(&self) -> Result<AmbientIsometry, rigidlab_core::Error> {
        match self {
            IsometrySpec::Identity => Ok(AmbientIsometry::Identity),
            IsometrySpec::Pole { angle } => Ok(AmbientIsometry::PoleRotation { angle: *angle }),
            IsometrySpec::Rotation { axis, angle } => AmbientIsometry::axis_angle(*axis, *angle),
            IsometrySpec::Matrix { rows } => AmbientIsometry::rotation(*rows),
            IsometrySpec::Translation { offset } => AmbientIsometry::translation(*offset),
        }
    }
}

/// Second surface M̃. With only `isometry`, M̃ is the image of M; with
/// `surface`, M̃ is that graph, identified through `isometry` when given and
/// node by node otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isometry: Option<IsometrySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    pub isometry: f64,
    pub gap: f64,
    pub w_match: f64,
    /// Metric-defect gate for evaluating the integral formulas.
    pub integral_gate: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        let t = Tolerances::default();
        ToleranceConfig {
            isometry: t.isometry,
            gap: t.gap,
            w_match: t.w_match,
            integral_gate: rigidlab_core::identities::INTEGRAL_ISOMETRY_GATE,
        }
    }
}

impl ToleranceConfig {
    pub fn pipeline(&self) -> Tolerances {
        Tolerances {
            isometry: self.isometry,
            gap: self.gap,
            w_match: self.w_match,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("rigidlab-out"),
        }
    }
}

impl ScenarioConfig {
    /// Parses and validates; relative `tabulated` paths resolve against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self, ConfigError> {
        let mut cfg: ScenarioConfig =
            toml::from_str(text).map_err(|e| ConfigError::new("", e.to_string()))?;
        if let Some(base) = base {
            cfg.rebase(base);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, path.parent())
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |s: &mut SurfaceSpec| {
            if let SurfaceSpec::Tabulated { path } = s {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        };
        fix(&mut self.surface);
        if let Some(PairConfig {
            surface: Some(s), ..
        }) = &mut self.pair
        {
            fix(s);
        }
    }

    pub fn space_form(&self) -> SpaceForm {
        SpaceForm::from_int(self.curvature).expect("validated")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let sf = SpaceForm::from_int(self.curvature).map_err(|_| {
            ConfigError::new(
                "curvature",
                format!("must be -1, 0 or 1, got {}", self.curvature),
            )
        })?;
        let GridConfig { n_colat, n_lon } = self.grid;
        if n_colat < 8 {
            return Err(ConfigError::new(
                "grid.n_colat",
                format!("must be at least 8, got {n_colat}"),
            ));
        }
        if n_lon < 8 || n_lon % 2 != 0 {
            return Err(ConfigError::new(
                "grid.n_lon",
                format!("must be even and at least 8, got {n_lon}"),
            ));
        }
        validate_surface(&self.surface, "surface", &sf, n_colat)?;
        if let Some(pair) = &self.pair {
            if pair.isometry.is_none() && pair.surface.is_none() {
                return Err(ConfigError::new(
                    "pair",
                    "needs `isometry`, `surface` or both",
                ));
            }
            if let Some(s) = &pair.surface {
                validate_surface(s, "pair.surface", &sf, n_colat)?;
            }
            if let Some(iso) = &pair.isometry {
                let built = iso
                    .build()
                    .map_err(|e| ConfigError::new("pair.isometry", e.to_string()))?;
                built
                    .check_space_form(&sf)
                    .map_err(|e| ConfigError::new("pair.isometry", e.to_string()))?;
            }
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("tolerances.isometry", t.isometry),
            ("tolerances.gap", t.gap),
            ("tolerances.w_match", t.w_match),
            ("tolerances.integral_gate", t.integral_gate),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::new(
                    name,
                    format!("must be positive and finite, got {v}"),
                ));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Arc<SphereGrid> {
        SphereGrid::shared(self.grid.n_colat, self.grid.n_lon).expect("validated")
    }

    /// Replaces `random` surfaces by the harmonic terms they draw. The seed comes
    /// from the surface spec, then `seed`, then 0.
    pub fn resolve(&mut self, seed: Option<u64>) {
        resolve_surface(&mut self.surface, seed);
        if let Some(PairConfig {
            surface: Some(s), ..
        }) = &mut self.pair
        {
            // independent stream for the second surface
            resolve_surface(s, seed.map(|v| v.wrapping_add(1)));
        }
    }
}

fn validate_surface(
    s: &SurfaceSpec,
    field: &str,
    sf: &SpaceForm,
    n_colat: usize,
) -> Result<(), ConfigError> {
    let check_radius = |r: f64| {
        if !(r > 0.0 && r < sf.rho_max()) {
            let bound = if sf.rho_max().is_finite() {
                format!("{}", sf.rho_max())
            } else {
                "inf".into()
            };
            return Err(ConfigError::new(
                format!("{field}.radius"),
                format!(
                    "{r} outside (0, {bound}) for curvature {}",
                    sf.curvature().as_int()
                ),
            ));
        }
        Ok(())
    };
    let max_l = (n_colat / 2) as u32;
    match s {
        SurfaceSpec::Constant { radius } => check_radius(*radius),
        SurfaceSpec::Harmonic { radius, terms } => {
            check_radius(*radius)?;
            for (i, t) in terms.iter().enumerate() {
                let f = format!("{field}.terms[{i}]");
                if t.l > max_l {
                    return Err(ConfigError::new(
                        format!("{f}.l"),
                        format!(
                            "degree {} not resolvable on n_colat = {n_colat} (max {max_l})",
                            t.l
                        ),
                    ));
                }
                if t.m.unsigned_abs() > t.l {
                    return Err(ConfigError::new(
                        format!("{f}.m"),
                        format!("|m| must not exceed l = {}", t.l),
                    ));
                }
                if !t.eps.is_finite() {
                    return Err(ConfigError::new(format!("{f}.eps"), "must be finite"));
                }
            }
            Ok(())
        }
        SurfaceSpec::Tabulated { path } => {
            if path.as_os_str().is_empty() {
                return Err(ConfigError::new(
                    format!("{field}.path"),
                    "must not be empty",
                ));
            }
            Ok(())
        }
        SurfaceSpec::Random {
            radius,
            max_degree,
            amplitude,
            ..
        } => {
            check_radius(*radius)?;
            if *max_degree > max_l {
                return Err(ConfigError::new(
                    format!("{field}.max_degree"),
                    format!("{max_degree} not resolvable on n_colat = {n_colat} (max {max_l})"),
                ));
            }
            if !(*amplitude >= 0.0 && amplitude.is_finite()) {
                return Err(ConfigError::new(
                    format!("{field}.amplitude"),
                    "must be non-negative",
                ));
            }
            Ok(())
        }
    }
}

fn resolve_surface(s: &mut SurfaceSpec, seed: Option<u64>) {
    if let SurfaceSpec::Random {
        radius,
        max_degree,
        amplitude,
        seed: own,
    } = *s
    {
        let seed = own.or(seed).unwrap_or(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut terms = Vec::new();
        for l in 1..=max_degree {
            for m in -(l as i32)..=(l as i32) {
                let eps = if amplitude > 0.0 {
                    rng.gen_range(-amplitude..=amplitude)
                } else {
                    0.0
                };
                terms.push(HarmonicTerm { l, m, eps });
            }
        }
        *s = SurfaceSpec::Harmonic { radius, terms };
    }
}

/// Builds the radial graph of a validated, resolved surface spec.
pub fn build_surface(
    s: &SurfaceSpec,
    sf: SpaceForm,
    grid: &Arc<SphereGrid>,
    field: &str,
) -> anyhow::Result<RadialGraph> {
    let rg = match s {
        SurfaceSpec::Constant { radius } => RadialGraph::constant(sf, Arc::clone(grid), *radius),
        SurfaceSpec::Harmonic { radius, terms } => RadialGraph::from_fn(sf, grid, |t, l| {
            radius
                * (1.0
                    + terms
                        .iter()
                        .map(|h| h.eps * real_sph_harm(h.l, h.m, t, l))
                        .sum::<f64>())
        }),
        SurfaceSpec::Tabulated { path } => {
            let values = crate::csvio::read_tabulated(path, grid)
                .map_err(|e| ConfigError::new(format!("{field}.path"), e.to_string()))?;
            RadialGraph::new(sf, ScalarField::new(Arc::clone(grid), values)?)
        }
        SurfaceSpec::Random { .. } => unreachable!("random surfaces are resolved before building"),
    };
    rg.map_err(|e| ConfigError::new(field, e.to_string()).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPHERE: &str = "curvature = 0\n[grid]\nn_colat = 16\nn_lon = 32\n[surface]\nkind = \"constant\"\nradius = 1.0\n";

    #[test]
    fn parses_minimal_config() {
        let cfg = ScenarioConfig::parse(SPHERE, None).unwrap();
        assert_eq!(
            cfg.grid,
            GridConfig {
                n_colat: 16,
                n_lon: 32
            }
        );
        assert_eq!(cfg.tolerances, ToleranceConfig::default());
        assert!(cfg.pair.is_none());
    }

    #[test]
    fn hemisphere_bound_is_enforced() {
        let text = SPHERE
            .replace("curvature = 0", "curvature = 1")
            .replace("1.0", "1.6");
        let err = ScenarioConfig::parse(&text, None).unwrap_err();
        assert_eq!(err.field, "surface.radius");
    }

    #[test]
    fn unresolvable_degree_is_rejected() {
        let text = "curvature = -1\n[grid]\nn_colat = 8\nn_lon = 16\n[surface]\nkind = \"harmonic\"\nradius = 1.0\nterms = [{ l = 5, m = 0, eps = 0.1 }]\n";
        let err = ScenarioConfig::parse(text, None).unwrap_err();
        assert_eq!(err.field, "surface.terms[0].l");
    }

    #[test]
    fn translation_needs_flat_space() {
        let text = SPHERE.replace("curvature = 0", "curvature = -1")
            + "[pair.isometry]\nkind = \"translation\"\noffset = [0.2, 0.0, 0.0]\n";
        assert_eq!(
            ScenarioConfig::parse(&text, None).unwrap_err().field,
            "pair.isometry"
        );
    }

    #[test]
    fn unknown_fields_are_errors() {
        let text = SPHERE.to_string() + "[tolerances]\nisometyr = 1e-3\n";
        let err = ScenarioConfig::parse(&text, None).unwrap_err();
        assert!(err.message.contains("isometyr"), "{err}");
    }

    #[test]
    fn random_surface_resolution_is_seeded() {
        let text = "curvature = 0\n[surface]\nkind = \"random\"\nradius = 1.0\nmax_degree = 3\namplitude = 0.02\n";
        let mut a = ScenarioConfig::parse(text, None).unwrap();
        let mut b = a.clone();
        let mut c = a.clone();
        a.resolve(Some(7));
        b.resolve(Some(7));
        c.resolve(Some(8));
        assert_eq!(a, b);
        assert_ne!(a, c);
        match &a.surface {
            SurfaceSpec::Harmonic { terms, .. } => assert_eq!(terms.len(), 15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn resolved_config_round_trips() {
        let text = SPHERE.to_string()
            + "[pair.isometry]\nkind = \"rotation\"\naxis = [0.0, 1.0, 0.0]\nangle = 0.5\n";
        let cfg = ScenarioConfig::parse(&text, None).unwrap();
        let again = ScenarioConfig::parse(&toml::to_string(&cfg).unwrap(), None).unwrap();
        assert_eq!(cfg, again);
    }
}
