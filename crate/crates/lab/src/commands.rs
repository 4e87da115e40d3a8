//! Subcommand implementations. Each returns the process exit code.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;

use rigidlab_core::identities::{
    codazzi_divergence_defects, gradient_relation_defects, hessian_identity_defects,
    integral_formula_residuals, rigidity_integrand, IdentityReport,
};
use rigidlab_core::pair::{apply_isometry, congruence_test, isometry_residual, lorentz_defect};
use rigidlab_core::sigma::scalar_curvature;
use rigidlab_core::{
    AmbientIsometry, Curvature, Error as CoreError, IdentifiedPair, RadialGraph, SphereGrid,
    SurfaceGeometry,
};

use crate::config::{build_surface, ConfigError, ScenarioConfig};
use crate::csvio::NodeTable;
use crate::report::{
    to_toml, Conventions, ConvergenceReport, ConvergenceRow, FormulaTable, PairSection,
    RecoveredSection, Residuals, SurfaceSummary, VerdictReport, VerifyReport,
};

/// Residuals at or below this are treated as rounding noise in convergence tables.
pub const ROUNDING_FLOOR: f64 = 1e-8;

pub const EXIT_CONFIG: i32 = 1;

/// Input rejected: invalid configuration or a surface outside the admissible domain.
#[derive(Debug)]
pub struct Rejected(pub String);

impl std::fmt::Display for Rejected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Rejected {}

impl From<ConfigError> for Rejected {
    fn from(e: ConfigError) -> Self {
        Rejected(e.to_string())
    }
}

fn node_of(e: &CoreError) -> Option<usize> {
    match *e {
        CoreError::NonFinite { node }
        | CoreError::NodeOutOfDomain { node, .. }
        | CoreError::OffModel { node, .. }
        | CoreError::NotStarShaped { node, .. }
        | CoreError::SingularMetric { node, .. }
        | CoreError::RootNotBracketed { node }
        | CoreError::StarShapeLost { node, .. }
        | CoreError::NonPositiveWeight { node, .. } => Some(node),
        _ => None,
    }
}

/// Turns a core domain error into a rejection naming the node's ring, column and angles.
fn reject(context: &str, e: CoreError, grid: &SphereGrid) -> anyhow::Error {
    let mut msg = format!("{context}: {e}");
    if let Some(node) = node_of(&e) {
        if node < grid.len() {
            let (t, l) = grid.angles(node);
            msg += &format!(
                " (ring {}, col {}, theta {t:.6}, lambda {l:.6})",
                node / grid.n_lon(),
                node % grid.n_lon()
            );
        }
    }
    Rejected(msg).into()
}

fn geometry(rg: &RadialGraph, context: &str) -> anyhow::Result<SurfaceGeometry> {
    SurfaceGeometry::compute(rg).map_err(|e| reject(context, e, rg.grid()))
}

fn write_text(dir: &Path, name: &str, text: &str) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

pub struct BuiltPair {
    pub pair: IdentifiedPair,
    pub identification: String,
    /// Isometry M̃ is known to be the image under.
    pub applied: Option<AmbientIsometry>,
}

/// Builds M̃ and the identification from `[pair]` of `cfg`, or from the surface
/// of `tilde` when given (identified through `cfg`'s isometry, if any).
pub fn build_pair(
    cfg: &ScenarioConfig,
    rg: &RadialGraph,
    tilde: Option<&ScenarioConfig>,
) -> anyhow::Result<Option<BuiltPair>> {
    let sf = cfg.space_form();
    let grid = rg.grid();
    let iso = match cfg.pair.as_ref().and_then(|p| p.isometry.as_ref()) {
        Some(spec) => Some(
            spec.build()
                .map_err(|e| Rejected(format!("pair.isometry: {e}")))?,
        ),
        None => None,
    };
    let second = match tilde {
        Some(t) => Some(
            build_surface(&t.surface, sf, grid, "tilde surface")
                .map_err(|e| Rejected(e.to_string()))?,
        ),
        None => match cfg.pair.as_ref().and_then(|p| p.surface.as_ref()) {
            Some(s) => Some(
                build_surface(s, sf, grid, "pair.surface").map_err(|e| Rejected(e.to_string()))?,
            ),
            None => None,
        },
    };
    let built = match (second, iso) {
        (None, None) => return Ok(None),
        (None, Some(iso)) => {
            let image = apply_isometry(rg, &iso).map_err(|e| reject("pair.isometry", e, grid))?;
            let pair = IdentifiedPair::by_isometry(rg, &image, &iso)
                .map_err(|e| reject("image surface", e, grid))?;
            BuiltPair {
                pair,
                identification: "isometry image of M".into(),
                applied: Some(iso),
            }
        }
        (Some(rgt), Some(iso)) => {
            let pair = IdentifiedPair::by_isometry(rg, &rgt, &iso)
                .map_err(|e| reject("second surface", e, grid))?;
            BuiltPair {
                pair,
                identification: "through the configured isometry".into(),
                applied: Some(iso),
            }
        }
        (Some(rgt), None) => {
            let pair = IdentifiedPair::nodewise(rg, &rgt)
                .map_err(|e| reject("second surface", e, grid))?;
            BuiltPair {
                pair,
                identification: "node by node".into(),
                applied: None,
            }
        }
    };
    Ok(Some(built))
}

fn summary(geom: &SurfaceGeometry) -> SurfaceSummary {
    let (min_support_node, min_support) = geom.support().min();
    let (min_sigma2_node, min_sigma2) = geom.sigma2().min();
    let rho = geom.rho();
    let k = geom.space_form().k();
    SurfaceSummary {
        area: geom.area(),
        min_rho: rho.min().1,
        max_rho: rho.max().1,
        min_support,
        min_support_node,
        min_sigma2,
        min_sigma2_node,
        min_scalar_curvature: scalar_curvature(k, min_sigma2, 2),
    }
}

fn pair_section(built: &BuiltPair, gate: f64) -> PairSection {
    let (m, mt) = (built.pair.m(), built.pair.m_tilde());
    let iso = isometry_residual(m, mt);
    let mut section = PairSection {
        identification: built.identification.clone(),
        isometry_residual: iso,
        isometry_gate: gate,
        not_applicable: None,
        rigidity_integral: None,
        max_rigidity_integrand: None,
        formulas: None,
    };
    match integral_formula_residuals(&built.pair, gate) {
        Ok(f) => section.formulas = Some(FormulaTable::from(&f)),
        Err(e) => section.not_applicable = Some(e.to_string()),
    }
    match rigidity_integrand(&built.pair, gate) {
        Ok(r) => {
            section.rigidity_integral = Some(r.integral);
            section.max_rigidity_integrand = Some(r.max_abs());
        }
        Err(e) if section.not_applicable.is_none() => section.not_applicable = Some(e.to_string()),
        Err(_) => {}
    }
    section
}

fn node_table(geom: &SurfaceGeometry, pair: Option<&BuiltPair>, gate: f64) -> NodeTable {
    let mut t = NodeTable::new();
    let col = |f: &dyn Fn(&rigidlab_core::hypersurface::NodeGeometry) -> f64| {
        geom.nodes().iter().map(f).collect::<Vec<_>>()
    };
    t.push("rho", col(&|n| n.rho));
    t.push("support", col(&|n| n.support));
    t.push("sigma1", col(&|n| n.sigma1()));
    t.push("sigma2", col(&|n| n.sigma2()));
    let (k1, k2) = geom.principal_curvatures();
    t.push("kappa1", k1.into_values());
    t.push("kappa2", k2.into_values());
    t.push("hessian_defect", hessian_identity_defects(geom));
    t.push("grad_relation_defect", gradient_relation_defects(geom));
    t.push("codazzi_div_defect", codazzi_divergence_defects(geom));
    if let Some(b) = pair {
        if let Ok(r) = rigidity_integrand(&b.pair, gate) {
            t.push("weight", r.weight);
            t.push("gap", r.gap);
            t.push("rigidity_integrand", r.integrand);
        }
    }
    t
}

pub fn verify(cfg: &ScenarioConfig, out: &Path) -> anyhow::Result<i32> {
    let grid = cfg.grid();
    let sf = cfg.space_form();
    let rg =
        build_surface(&cfg.surface, sf, &grid, "surface").map_err(|e| Rejected(e.to_string()))?;
    let geom = geometry(&rg, "surface")?;
    let built = build_pair(cfg, &rg, None)?;
    let gate = cfg.tolerances.integral_gate;
    let base = IdentityReport::single(&geom);
    let report = VerifyReport {
        report: "verify",
        curvature: sf.curvature().as_int(),
        n_colat: grid.n_colat(),
        n_lon: grid.n_lon(),
        residuals: Residuals::from_report(&base),
        surface: summary(&geom),
        pair: built.as_ref().map(|b| pair_section(b, gate)),
        conventions: Conventions::for_space_form(&sf),
        config: cfg.clone(),
    };
    let path = write_text(out, "verify.toml", &to_toml(&report)?)?;
    node_table(&geom, built.as_ref(), gate).write(&out.join("verify_nodes.csv"), &grid)?;

    let r = &report.residuals;
    println!(
        "curvature {}  grid {}x{}",
        report.curvature,
        grid.n_colat(),
        grid.n_lon()
    );
    println!("hessian_max        {:e}", r.hessian_max);
    println!("grad_relation_max  {:e}", r.grad_relation_max);
    println!("codazzi_div_max    {:e}", r.codazzi_div_max);
    println!("minkowski_residual {:e}", r.minkowski_residual);
    if let Some(p) = &report.pair {
        println!("isometry_residual  {:e}", p.isometry_residual);
        match (&p.formulas, &p.not_applicable) {
            (Some(f), _) => {
                println!(
                    "formula residuals  {:e} {:e} {:e} {:e}",
                    f.residuals[0], f.residuals[1], f.residuals[2], f.residuals[3]
                );
                println!("subtraction_defect {:e}", f.subtraction_defect);
            }
            (None, Some(why)) => println!("pair formulas not applicable: {why}"),
            _ => {}
        }
    }
    println!("wrote {}", path.display());
    Ok(0)
}

pub fn congruence(
    cfg: &ScenarioConfig,
    tilde: Option<&ScenarioConfig>,
    out: &Path,
) -> anyhow::Result<i32> {
    if let Some(t) = tilde {
        if t.curvature != cfg.curvature {
            return Err(Rejected(format!(
                "curvature: configs disagree ({} vs {})",
                cfg.curvature, t.curvature
            ))
            .into());
        }
        if t.grid != cfg.grid {
            return Err(Rejected("grid: configs must use the same grid".into()).into());
        }
    }
    let grid = cfg.grid();
    let sf = cfg.space_form();
    let rg =
        build_surface(&cfg.surface, sf, &grid, "surface").map_err(|e| Rejected(e.to_string()))?;
    let built = build_pair(cfg, &rg, tilde)?
        .ok_or_else(|| Rejected("no second surface: give [pair] or --config-tilde".into()))?;
    let verdict = congruence_test(&built.pair, &cfg.tolerances.pipeline());
    let recovered = verdict.recovered.as_ref().map(|r| {
        let distance = built.applied.map(|iso| r.distance_to(&iso, &sf));
        let lorentz =
            (sf.curvature() == Curvature::Hyperbolic).then(|| lorentz_defect(&r.matrix, r.dim));
        RecoveredSection::new(r, distance, lorentz)
    });
    let report = VerdictReport::new(
        &verdict,
        &sf,
        grid.n_colat(),
        grid.n_lon(),
        built.identification.clone(),
        recovered,
        cfg.clone(),
        tilde.cloned(),
    );
    let path = write_text(out, "congruence.toml", &to_toml(&report)?)?;
    println!("{}", report.status);
    println!("isometry_residual {:e}", report.isometry_residual);
    println!(
        "min_sigma2        {:e} (node {})",
        report.min_sigma2, report.min_sigma2_node
    );
    if let Some(f) = &report.failure {
        println!(
            "failure: {} at node {} (ring {}, col {})",
            f.kind, f.node, f.ring, f.col
        );
    }
    if let Some(w) = report.max_w_difference {
        println!("max_w_difference  {w:e}");
    }
    println!("wrote {}", path.display());
    Ok(report.exit_code)
}

fn order(prev: f64, cur: f64) -> String {
    if prev <= ROUNDING_FLOOR || cur <= ROUNDING_FLOOR {
        "N/A".into()
    } else {
        format!("{:.2}", (prev / cur).log2())
    }
}

pub fn converge(cfg: &ScenarioConfig, levels: usize, out: &Path) -> anyhow::Result<i32> {
    if levels < 2 {
        return Err(Rejected(format!("--levels: need at least 2, got {levels}")).into());
    }
    let sf = cfg.space_form();
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels);
    let mut prev: Option<[f64; 4]> = None;
    for i in 0..levels {
        let (nc, nl) = (cfg.grid.n_colat << i, cfg.grid.n_lon << i);
        let grid = SphereGrid::shared(nc, nl)?;
        let rg = build_surface(&cfg.surface, sf, &grid, "surface")
            .map_err(|e| Rejected(e.to_string()))?;
        let geom = geometry(&rg, &format!("surface at {nc}x{nl}"))?;
        let r = IdentityReport::single(&geom);
        let cur = [
            r.hessian_max,
            r.grad_relation_max,
            r.codazzi_div_max,
            r.minkowski_residual,
        ];
        let orders: Vec<String> = match prev {
            Some(p) => (0..4).map(|j| order(p[j], cur[j])).collect(),
            None => vec!["-".into(); 4],
        };
        rows.push(ConvergenceRow {
            n_colat: nc,
            n_lon: nl,
            hessian: cur[0],
            grad_relation: cur[1],
            codazzi_div: cur[2],
            minkowski: cur[3],
            order_hessian: orders[0].clone(),
            order_grad_relation: orders[1].clone(),
            order_codazzi_div: orders[2].clone(),
            order_minkowski: orders[3].clone(),
        });
        prev = Some(cur);
    }
    let report = ConvergenceReport {
        report: "converge",
        curvature: sf.curvature().as_int(),
        rounding_floor: ROUNDING_FLOOR,
        levels: rows,
        conventions: Conventions::for_space_form(&sf),
        config: cfg.clone(),
    };
    let path = write_text(out, "converge.toml", &to_toml(&report)?)?;
    let mut w = csv::Writer::from_path(out.join("converge.csv"))?;
    w.write_record([
        "n_colat",
        "n_lon",
        "hessian",
        "order_hessian",
        "grad_relation",
        "order_grad_relation",
        "codazzi_div",
        "order_codazzi_div",
        "minkowski",
        "order_minkowski",
    ])?;
    println!(
        "{:>7} {:>6} {:>11} {:>6} {:>11} {:>6} {:>11} {:>6} {:>11} {:>6}",
        "n_colat",
        "n_lon",
        "hessian",
        "ord",
        "grad_rel",
        "ord",
        "codazzi",
        "ord",
        "minkowski",
        "ord"
    );
    for r in &report.levels {
        use crate::csvio::fmt_f64;
        w.write_record([
            r.n_colat.to_string(),
            r.n_lon.to_string(),
            fmt_f64(r.hessian),
            r.order_hessian.clone(),
            fmt_f64(r.grad_relation),
            r.order_grad_relation.clone(),
            fmt_f64(r.codazzi_div),
            r.order_codazzi_div.clone(),
            fmt_f64(r.minkowski),
            r.order_minkowski.clone(),
        ])?;
        println!(
            "{:>7} {:>6} {:>11.3e} {:>6} {:>11.3e} {:>6} {:>11.3e} {:>6} {:>11.3e} {:>6}",
            r.n_colat,
            r.n_lon,
            r.hessian,
            r.order_hessian,
            r.grad_relation,
            r.order_grad_relation,
            r.codazzi_div,
            r.order_codazzi_div,
            r.minkowski,
            r.order_minkowski
        );
    }
    w.flush()?;
    println!("wrote {}", path.display());
    Ok(0)
}

pub fn dump_geometry(cfg: &ScenarioConfig, out: &Path) -> anyhow::Result<i32> {
    let grid = cfg.grid();
    let sf = cfg.space_form();
    let rg =
        build_surface(&cfg.surface, sf, &grid, "surface").map_err(|e| Rejected(e.to_string()))?;
    let geom = geometry(&rg, "surface")?;
    let nodes = geom.nodes();
    let mut t = NodeTable::new();
    let mut push = |name: &str, f: &dyn Fn(&rigidlab_core::hypersurface::NodeGeometry) -> f64| {
        t.push(name, nodes.iter().map(f).collect())
    };
    push("rho", &|n| n.rho);
    for i in 0..4 {
        let name = format!("x{i}");
        push(&name, &|n| n.position[i]);
    }
    for i in 0..4 {
        let name = format!("nu{i}");
        push(&name, &|n| n.normal[i]);
    }
    push("g_tt", &|n| n.g[0][0]);
    push("g_tl", &|n| n.g[0][1]);
    push("g_ll", &|n| n.g[1][1]);
    push("h_tt", &|n| n.h[0][0]);
    push("h_tl", &|n| n.h[0][1]);
    push("h_ll", &|n| n.h[1][1]);
    push("w_tt", &|n| n.w[0][0]);
    push("w_tl", &|n| n.w[0][1]);
    push("w_lt", &|n| n.w[1][0]);
    push("w_ll", &|n| n.w[1][1]);
    push("kappa1", &|n| n.principal_curvatures().0);
    push("kappa2", &|n| n.principal_curvatures().1);
    push("sigma1", &|n| n.sigma1());
    push("sigma2", &|n| n.sigma2());
    let k = sf.k();
    push("scalar_curvature", &|n| scalar_curvature(k, n.sigma2(), 2));
    push("support", &|n| n.support);
    push("phi", &|n| n.phi);
    push("phi_prime", &|n| n.phi_prime);
    push("potential", &|n| n.potential);
    t.push("area_weight", geom.area_weights());
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let path = out.join("geometry.csv");
    t.write(&path, &grid)?;
    println!("wrote {}", path.display());
    Ok(0)
}
