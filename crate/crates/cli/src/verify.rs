use galqm::algebra::{Coefficient, Generator, StructureTable};
use galqm::group::{bargmann_exponent, cocycle_defect, GalileiElement, ACCUMULATED_TOLERANCE, GROUP_TOLERANCE};
use galqm::sectors::{charge_commutation_audit, constructor_suite, superpose, SectorLabel};
use galqm::spin::{Spin, SpinRepresentation, SPECTRUM_TOLERANCE};
use galqm::states::StateVector;
use galqm::Error;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{RunConfig, Suite};
use crate::report::Header;

const SPIN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub max_defect: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub header: Header,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

/// Runs the selected suites; `Err` is a configuration problem.
pub fn run(config: &RunConfig) -> Result<VerifyReport, String> {
    let mut checks = Vec::new();
    for suite in config.suites() {
        checks.push(match suite {
            Suite::GroupAxioms => group_axioms(config),
            Suite::Cocycle => cocycle(config),
            Suite::Jacobi => jacobi(config)?,
            Suite::SpinSweep => spin_sweep(config)?,
            Suite::Superselection => superselection(config)?,
            Suite::SectorAudit => sector_audit(config)?,
        });
    }
    Ok(VerifyReport { header: Header::new("verify", config), passed: checks.iter().all(|c| c.passed), checks })
}

fn suite_rng(config: &RunConfig, suite: Suite) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(suite as u64);
    rng
}

fn group_axioms(config: &RunConfig) -> CheckResult {
    let mut rng = suite_rng(config, Suite::GroupAxioms);
    let scale = config.samples.scale;
    let id = GalileiElement::identity();
    let mut worst = 0.0f64;
    for _ in 0..config.samples.group {
        let g1 = GalileiElement::random(&mut rng, scale);
        let g2 = GalileiElement::random(&mut rng, scale);
        let g3 = GalileiElement::random(&mut rng, scale);
        worst = worst
            .max(g1.compose(&g2).compose(&g3).distance(&g1.compose(&g2.compose(&g3))))
            .max(g1.compose(&id).distance(&g1))
            .max(id.compose(&g1).distance(&g1))
            .max(g1.compose(&g1.inverse()).distance(&id));
    }
    CheckResult {
        name: Suite::GroupAxioms.name(),
        passed: worst < GROUP_TOLERANCE,
        max_defect: worst,
        tolerance: GROUP_TOLERANCE,
        samples: config.samples.group,
        detail: "associativity, identity and inverse residuals".into(),
    }
}

fn cocycle(config: &RunConfig) -> CheckResult {
    let mut rng = suite_rng(config, Suite::Cocycle);
    let scale = config.samples.scale;
    let mass = config.grid.mass;
    let (mut worst, mut asymmetry) = (0.0f64, 0.0f64);
    for _ in 0..config.samples.cocycle {
        let g1 = GalileiElement::random(&mut rng, scale);
        let g2 = GalileiElement::random(&mut rng, scale);
        let g3 = GalileiElement::random(&mut rng, scale);
        worst = worst.max(cocycle_defect(&g1, &g2, &g3, mass).abs());
        asymmetry = asymmetry.max((bargmann_exponent(&g1, &g2, mass) - bargmann_exponent(&g2, &g1, mass)).abs());
    }
    let witnessed = asymmetry > ACCUMULATED_TOLERANCE;
    CheckResult {
        name: Suite::Cocycle.name(),
        passed: worst < ACCUMULATED_TOLERANCE && witnessed,
        max_defect: worst,
        tolerance: ACCUMULATED_TOLERANCE,
        samples: config.samples.cocycle,
        detail: format!("max |xi(g1,g2) - xi(g2,g1)| = {asymmetry:.6e}"),
    }
}

fn table(config: &RunConfig) -> Result<StructureTable, String> {
    let mut table = StructureTable::galilei();
    if let Some(t) = config.test_hooks.as_ref().and_then(|h| h.tamper.as_ref()) {
        let parse = |s: &str| s.parse::<Generator>().map_err(|e| format!("test_hooks.tamper: {e}"));
        let (a, b) = (parse(&t.left)?, parse(&t.right)?);
        let value = table.bracket(a, b).scale(&Coefficient::integer(t.scale));
        table.set(a, b, value);
    }
    Ok(table)
}

fn jacobi(config: &RunConfig) -> Result<CheckResult, String> {
    let table = table(config)?;
    let failures = table.jacobi_failures();
    let antisymmetric = table.is_antisymmetric();
    let central = table.is_central(Generator::M);
    let mut detail = format!("{} of 1331 triples nonzero", failures.len());
    if let Some((x, y, z, d)) = failures.first() {
        detail.push_str(&format!("; first ({x}, {y}, {z}) -> {d}"));
    }
    detail.push_str(&format!("; antisymmetric: {antisymmetric}; M central: {central}"));
    Ok(CheckResult {
        name: Suite::Jacobi.name(),
        passed: failures.is_empty() && antisymmetric && central,
        max_defect: failures.len() as f64,
        tolerance: 0.0,
        samples: 1331,
        detail,
    })
}

fn spin_sweep(config: &RunConfig) -> Result<CheckResult, String> {
    let j_max: Spin = config.spin.j_max.parse().map_err(|e: Error| format!("spin.j_max: {e}"))?;
    let hbar = config.grid.hbar;
    let (mut algebraic, mut spectral) = (0.0f64, 0.0f64);
    let mut count = 0;
    for spin in j_max.sweep() {
        let rep = SpinRepresentation::new(spin, hbar).map_err(|e| e.to_string())?;
        algebraic = algebraic
            .max(rep.casimir_check())
            .max(rep.casimir_scalar_defect())
            .max(rep.commutation_defect())
            .max(rep.hermiticity_defect());
        let report = rep.spectrum_check().map_err(|e| e.to_string())?;
        spectral = spectral.max(report.max_deviation);
        count += 1;
    }
    Ok(CheckResult {
        name: Suite::SpinSweep.name(),
        passed: algebraic < SPIN_TOLERANCE * hbar.max(1.0).powi(3) && spectral < SPECTRUM_TOLERANCE,
        max_defect: algebraic.max(spectral),
        tolerance: SPIN_TOLERANCE,
        samples: count,
        detail: format!("j = 0..{j_max}: algebraic {algebraic:.3e}, spectral {spectral:.3e}"),
    })
}

fn superselection(config: &RunConfig) -> Result<CheckResult, String> {
    let mass = config.grid.mass;
    let labels = [(mass, 0), (mass, 1), (mass, -1), (2.0 * mass, 0), (0.5 * mass, 2)]
        .iter()
        .map(|&(m, q)| SectorLabel::new(m, q).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let (mut cases, mut refused, mut same_sector_errors) = (0, 0, 0);
    for a in &labels {
        for b in &labels {
            let s1 = StateVector::basis(2, 0, *a);
            let s2 = StateVector::basis(2, 1, *b);
            let r = superpose(&s1, &s2, Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
            if a == b {
                same_sector_errors += usize::from(r.is_err());
            } else {
                cases += 1;
                refused += usize::from(matches!(r, Err(Error::SectorViolation { .. })));
            }
        }
    }
    Ok(CheckResult {
        name: Suite::Superselection.name(),
        passed: refused == cases && same_sector_errors == 0,
        max_defect: (cases - refused + same_sector_errors) as f64,
        tolerance: 0.0,
        samples: cases,
        detail: format!(
            "{refused}/{cases} cross-sector superpositions refused; {same_sector_errors} same-sector failures"
        ),
    })
}

fn sector_audit(config: &RunConfig) -> Result<CheckResult, String> {
    let suite = constructor_suite(config.grid.mass, config.grid.hbar, &[-1, 0, 1]).map_err(|e| e.to_string())?;
    let report = charge_commutation_audit(&suite);
    let worst = report.entries.iter().map(|e| e.cross_sector).fold(0.0, f64::max);
    let flagged: Vec<&str> = report.violations().map(|e| e.name.as_str()).collect();
    Ok(CheckResult {
        name: Suite::SectorAudit.name(),
        passed: report.passed(),
        max_defect: worst,
        tolerance: galqm::sectors::AUDIT_TOLERANCE,
        samples: report.entries.len(),
        detail: if flagged.is_empty() { "no operator mixes charge sectors".into() } else { flagged.join(", ") },
    })
}
