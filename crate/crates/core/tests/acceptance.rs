//! Acceptance gate: one line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use galqm::algebra::{verify_representation, Generator, StructureTable};
use galqm::dynamics::{
    em_hamiltonian, evolve, free_hamiltonian_with_spin, heisenberg_check, line_representation, momentum_op,
    plane_gaussian, plane_representation, position_momentum_uncertainty, position_op, schrodinger_residual,
    spin_propagator, time_energy_check, variance_value, zeeman_term, EmParameters, EvolutionMethod, GridConfig,
    GridHamiltonian, GridState, PlaneConfig,
};
use galqm::group::{bargmann_exponent, cocycle_defect, GalileiElement};
use galqm::operator::{norm, LinearOperator};
use galqm::sectors::{charge_commutation_audit, constructor_suite, gauge_transform, superpose, SectorLabel};
use galqm::spin::{build_spin_rep, Spin, SpinRepresentation};
use galqm::states::{expectation, Ray, StateVector};
use galqm::{hermitian_eigen, Error};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_secs, || format!("runtime {:.2} s exceeds {limit_secs} s", elapsed.as_secs_f64()))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn group_axioms() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let id = GalileiElement::identity();
    let (mut assoc, mut ident, mut inv) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100_000 {
        let g1 = GalileiElement::random(&mut rng, 1.0);
        let g2 = GalileiElement::random(&mut rng, 1.0);
        let g3 = GalileiElement::random(&mut rng, 1.0);
        assoc = assoc.max(g1.compose(&g2).compose(&g3).distance(&g1.compose(&g2.compose(&g3))));
        ident = ident.max(g1.compose(&id).distance(&g1)).max(id.compose(&g1).distance(&g1));
        inv = inv.max(g1.compose(&g1.inverse()).distance(&id)).max(g1.inverse().compose(&g1).distance(&id));
    }
    let worst = assoc.max(ident).max(inv);
    ensure(worst < 1e-12, || format!("associativity {assoc:.1e}, identity {ident:.1e}, inverse {inv:.1e}"))?;
    within(start.elapsed(), 5.0)?;
    Ok(format!("max residual {worst:.1e} over 1e5 triples in {:.2} s", start.elapsed().as_secs_f64()))
}

fn bargmann_cocycle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut witness = 0.0f64;
    for _ in 0..10_000 {
        let g1 = GalileiElement::random(&mut rng, 1.0);
        let g2 = GalileiElement::random(&mut rng, 1.0);
        let g3 = GalileiElement::random(&mut rng, 1.0);
        worst = worst.max(cocycle_defect(&g1, &g2, &g3, 1.0).abs());
        witness = witness.max((bargmann_exponent(&g1, &g2, 1.0) - bargmann_exponent(&g2, &g1, 1.0)).abs());
    }
    ensure(worst < 1e-10, || format!("cocycle defect {worst:.1e}"))?;
    ensure(witness > 1e-10, || "no asymmetric pair found".into())?;
    Ok(format!("max |defect| {worst:.1e} over 1e4 triples; max |ξ(g1,g2)-ξ(g2,g1)| = {witness:.3}"))
}

fn jacobi_table() -> Outcome {
    let table = StructureTable::galilei();
    let failures = table.jacobi_failures();
    ensure(failures.is_empty(), || format!("{} nonzero Jacobi triples", failures.len()))?;
    ensure(table.is_antisymmetric(), || "table not antisymmetric".into())?;
    ensure(table.is_central(Generator::M), || "M not central".into())?;
    Ok("1331 triples exactly zero; antisymmetric; M central".into())
}

fn pauli_bit_exact() -> Outcome {
    let rep = build_spin_rep(0.5, 1.0).map_err(|e| e.to_string())?;
    let (z, h) = (c(0.0, 0.0), 0.5);
    let expected = [
        DMatrix::from_row_slice(2, 2, &[z, c(h, 0.0), c(h, 0.0), z]),
        DMatrix::from_row_slice(2, 2, &[z, c(0.0, -h), c(0.0, h), z]),
        DMatrix::from_row_slice(2, 2, &[c(h, 0.0), z, z, c(-h, 0.0)]),
    ];
    for (i, (m, e)) in rep.components().iter().zip(&expected).enumerate() {
        ensure(*m == e, || format!("J{} differs: {m}", i + 1))?;
    }
    Ok("J1, J2, J3 equal σ/2 entry for entry".into())
}

fn spin_sweep() -> Outcome {
    let start = Instant::now();
    let (mut comm, mut spectral, mut cas) = (0.0f64, 0.0f64, 0.0f64);
    for spin in Spin::from_twice(9).sweep() {
        let rep = SpinRepresentation::new(spin, 1.0).map_err(|e| e.to_string())?;
        comm = comm.max(rep.casimir_check());
        cas = cas.max(rep.casimir_scalar_defect());
        let report = rep.spectrum_check().map_err(|e| e.to_string())?;
        let j3_dev = report
            .j3_eigenvalues
            .iter()
            .zip(&report.expected_j3)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        spectral = spectral.max(j3_dev);
    }
    ensure(comm < 1e-12, || format!("|[J²,Ji]| = {comm:.1e}"))?;
    ensure(spectral < 1e-10, || format!("J3 spectrum deviation {spectral:.1e}"))?;
    ensure(cas < 1e-12, || format!("J² - j(j+1)ħ² = {cas:.1e}"))?;
    within(start.elapsed(), 2.0)?;
    Ok(format!(
        "j = 0..9/2: |[J²,Ji]| {comm:.1e}, J3 spectrum {spectral:.1e}, J² scalar {cas:.1e} in {:.2} s",
        start.elapsed().as_secs_f64()
    ))
}

fn uncertainty() -> Outcome {
    let cfg = GridConfig::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut min_product = f64::INFINITY;
    for _ in 0..10_000 {
        let psi = common::random_interior_state(&mut rng, cfg);
        let r = position_momentum_uncertainty(&psi).map_err(|e| e.to_string())?;
        min_product = min_product.min(r.lhs.sqrt());
    }
    ensure(min_product >= 0.5 - 1e-9, || format!("min ΔXΔP = {min_product}"))?;
    let g = GridState::gaussian(cfg, 0.3, 0.8, 1.0).map_err(|e| e.to_string())?;
    let gp = position_momentum_uncertainty(&g).map_err(|e| e.to_string())?.lhs.sqrt();
    ensure((gp - 0.5).abs() < 1e-6, || format!("Gaussian ΔXΔP = {gp}"))?;
    Ok(format!("min ΔXΔP over 1e4 states {min_product:.9}; Gaussian {gp:.12}"))
}

fn unitarity_and_order() -> Outcome {
    let cfg = GridConfig::standard();
    let psi = GridState::gaussian(cfg, -1.0, 1.2, 1.0).map_err(|e| e.to_string())?;
    let free = GridHamiltonian::free(cfg, false);
    let harmonic = GridHamiltonian::free(cfg, false).with_potential(|x| 0.02 * x * x);
    let exact = EvolutionMethod::ExactMomentum;
    let cn = EvolutionMethod::CrankNicolson { max_step: 0.05 };
    let mut unitarity = 0.0f64;
    let mut composition = 0.0f64;
    for (h, m) in [(&free, exact), (&harmonic, cn)] {
        let run = |s: &GridState, t| evolve(s, h, t, m).map_err(|e| e.to_string());
        let whole = run(&psi, 1.0)?;
        let split = run(&run(&psi, 0.4)?, 0.6)?;
        unitarity = unitarity.max((whole.norm() - 1.0).abs());
        composition = composition.max(whole.distance(&split));
    }
    ensure(unitarity < 1e-8, || format!("norm drift {unitarity:.1e}"))?;
    ensure(composition < 1e-8, || format!("composition {composition:.1e}"))?;

    let mut ratios = Vec::new();
    for (h, m) in [(&free, exact), (&harmonic, EvolutionMethod::CrankNicolson { max_step: 1.0 })] {
        let r1 = schrodinger_residual(&psi, h, 0.02, m).map_err(|e| e.to_string())?;
        let r2 = schrodinger_residual(&psi, h, 0.01, m).map_err(|e| e.to_string())?;
        ratios.push(r1 / r2);
    }
    ensure(ratios.iter().all(|r| (3.5..=4.5).contains(r)), || format!("residual ratios {ratios:?}"))?;
    Ok(format!(
        "norm drift {unitarity:.1e}, composition {composition:.1e}, residual ratios {:.3} (exact) {:.3} (CN)",
        ratios[0], ratios[1]
    ))
}

fn free_spreading() -> Outcome {
    let start = Instant::now();
    let cfg = GridConfig::standard();
    let h = GridHamiltonian::free(cfg, false);
    let x = position_op(&cfg);
    let sigma0 = 1.0;
    let psi = GridState::gaussian(cfg, 0.0, 0.0, sigma0).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for step in 0..=50 {
        let t = 0.1 * step as f64;
        let out = evolve(&psi, &h, t, EvolutionMethod::ExactMomentum).map_err(|e| e.to_string())?;
        let w2 = variance_value(&out, &x).map_err(|e| e.to_string())?;
        let expected = sigma0 * sigma0 + (cfg.hbar() * t / (2.0 * cfg.mass() * sigma0)).powi(2);
        worst = worst.max((w2 - expected).abs() / expected);
    }
    ensure(worst < 1e-4, || format!("relative width error {worst:.1e}"))?;
    within(start.elapsed(), 30.0)?;
    Ok(format!("max relative width² error {worst:.1e} over t ∈ [0, 5] in {:.2} s", start.elapsed().as_secs_f64()))
}

fn heisenberg() -> Outcome {
    let cfg = GridConfig::standard();
    let h = GridHamiltonian::free(cfg, false);
    let p0 = 0.9;
    let psi = GridState::gaussian(cfg, -3.0, p0, 1.0).map_err(|e| e.to_string())?;
    let m = EvolutionMethod::ExactMomentum;
    let mut worst_x = 0.0f64;
    let mut worst_p = 0.0f64;
    for t in [0.0, 1.0, 2.5] {
        let rx = heisenberg_check(&psi, &h, &position_op(&cfg), t, 1e-3, m).map_err(|e| e.to_string())?;
        worst_x = worst_x.max((rx.finite_difference - p0 / cfg.mass()).abs()).max(rx.discrepancy);
        let rp = heisenberg_check(&psi, &h, &momentum_op(&cfg), t, 1e-3, m).map_err(|e| e.to_string())?;
        worst_p = worst_p.max(rp.finite_difference.abs()).max(rp.commutator_rate.abs());
    }
    let drift = galqm::dynamics::energy_drift(&psi, &h, 5.0, m).map_err(|e| e.to_string())?;
    ensure(worst_x < 1e-6, || format!("d<X>/dt error {worst_x:.1e}"))?;
    ensure(worst_p < 1e-6, || format!("d<P>/dt = {worst_p:.1e}"))?;
    ensure(drift < 1e-8, || format!("energy drift {drift:.1e}"))?;
    Ok(format!("d<X>/dt error {worst_x:.1e}, |d<P>/dt| {worst_p:.1e}, <H> drift {drift:.1e}"))
}

fn time_energy() -> Outcome {
    let cfg = GridConfig::standard();
    let h = GridHamiltonian::free(cfg, false);
    let x = position_op(&cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut min_slack = f64::INFINITY;
    let mut runs = 0;
    for _ in 0..20 {
        let psi = common::random_interior_state(&mut rng, cfg);
        for t in [0.0, 0.5, 1.5] {
            let at = evolve(&psi, &h, t, EvolutionMethod::ExactMomentum).map_err(|e| e.to_string())?;
            let r = time_energy_check(&at, &h, &x, 1e-3, EvolutionMethod::ExactMomentum).map_err(|e| e.to_string())?;
            min_slack = min_slack.min(r.slack);
            runs += 1;
        }
    }
    ensure(min_slack >= -1e-8, || format!("min slack {min_slack:.3e}"))?;
    Ok(format!("min ΔH·τ_X - ħ/2 = {min_slack:.3e} over {runs} runs"))
}

fn sectors() -> Outcome {
    let masses = [0.5, 1.0, 2.0];
    let charges = [-2i64, -1, 0, 1, 2];
    let labels: Vec<SectorLabel> =
        masses.iter().flat_map(|&m| charges.iter().map(move |&q| SectorLabel::new(m, q).unwrap())).collect();
    let (mut cases, mut refused) = (0, 0);
    for a in &labels {
        for b in &labels {
            if a == b {
                continue;
            }
            cases += 1;
            let s1 = StateVector::basis(4, 0, *a);
            let s2 = StateVector::basis(4, 1, *b);
            if matches!(superpose(&s1, &s2, c(0.6, 0.0), c(0.0, 0.8)), Err(Error::SectorViolation { .. })) {
                refused += 1;
            }
        }
    }
    ensure(refused == cases, || format!("{refused}/{cases} cross-sector superpositions refused"))?;

    let cfg = GridConfig::new(256, 40.0, 1.0, 1.0).unwrap();
    let h = GridHamiltonian::free(cfg, false);
    let x = position_op(&cfg);
    let p = momentum_op(&cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for q in [-2, 0, 3] {
        let psi = common::random_interior_state(&mut rng, cfg).with_charge(q);
        for theta in [0.0, 0.7, std::f64::consts::PI, -4.2] {
            let g = psi.gauge_transform(theta);
            let out = evolve(&g, &h, 0.8, EvolutionMethod::ExactMomentum).map_err(|e| e.to_string())?;
            ensure(g.sector() == psi.sector() && out.sector() == psi.sector(), || "sector label changed".into())?;
            let (sv, gv) = (psi.to_state_vector(), gauge_transform(&psi.to_state_vector(), theta));
            ensure(gv.sector() == sv.sector(), || "sector label changed".into())?;
            let overlap = Ray::new(sv.clone()).unwrap().overlap(&Ray::new(gv.clone()).unwrap());
            worst = worst.max((overlap - 1.0).abs());
            for obs in [&x, &p] {
                let d = expectation(&sv, obs).map_err(|e| e.to_string())? - expectation(&gv, obs).map_err(|e| e.to_string())?;
                worst = worst.max(d.abs());
            }
        }
    }
    ensure(worst < 1e-12, || format!("gauge invariance defect {worst:.1e}"))?;
    let audit = charge_commutation_audit(&constructor_suite(1.0, 1.0, &[-1, 0, 1]).map_err(|e| e.to_string())?);
    ensure(audit.passed(), || "charge audit flagged a library operator".into())?;
    Ok(format!(
        "{refused}/{cases} cross-sector superpositions refused; gauge defect {worst:.1e}; {} constructors pass the charge audit",
        audit.entries.len()
    ))
}

fn em_hamiltonian_checks() -> Outcome {
    let cfg = GridConfig::standard();
    let params = EmParameters::new(1.0, 2.0, 3.0);
    let zero = em_hamiltonian(cfg, |_| 0.0, |_| [0.0; 3], [0.0; 3], &params, true).map_err(|e| e.to_string())?;
    let free = free_hamiltonian_with_spin(&cfg, true);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst_free = 0.0f64;
    for _ in 0..10 {
        let (up, down) = common::random_spinor(&mut rng);
        let probe = common::random_interior_state(&mut rng, cfg).with_spinor(up, down).unwrap();
        let a = zero.apply(probe.amplitudes());
        let b = free.apply(probe.amplitudes());
        let diff: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        worst_free = worst_free.max(norm(&diff) / norm(probe.amplitudes()));
    }
    ensure(worst_free < 1e-12, || format!("zero-field vs free {worst_free:.1e}"))?;

    // Zeeman: energies of k = 0 spinors against the 2x2 oracle
    let kappa = params.g_l * cfg.hbar() * params.charge / (cfg.mass() * params.c);
    let mut worst_zeeman = 0.0f64;
    for b in [[0.0, 0.0, 1.0], [0.0, 0.0, -0.4], [0.3, -0.2, 0.7]] {
        let h = em_hamiltonian(cfg, |_| 0.0, |_| [0.0; 3], b, &params, true).map_err(|e| e.to_string())?;
        let term = zeeman_term(kappa, b);
        let oracle = DMatrix::from_fn(2, 2, |i, j| term[i][j]);
        let (vals, vecs) = hermitian_eigen(&oracle).map_err(|e| e.to_string())?;
        let bn = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
        worst_zeeman = worst_zeeman.max((vals[0] + kappa * bn).abs()).max((vals[1] - kappa * bn).abs());
        for (k, e) in vals.iter().enumerate() {
            let s = GridState::plane_wave(cfg, 0).with_spinor(vecs[(0, k)], vecs[(1, k)]).unwrap();
            let hs = h.apply(s.amplitudes());
            let d: Vec<Complex64> = hs.iter().zip(s.amplitudes()).map(|(a, b)| a - b * e).collect();
            worst_zeeman = worst_zeeman.max(norm(&d) / norm(s.amplitudes()));
        }
        // the exact propagator is the exponential of the same 2x2 block
        let u = spin_propagator(&term, 1.0);
        let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
        worst_zeeman = worst_zeeman.max((det.norm() - 1.0).abs());
    }
    ensure(worst_zeeman < 1e-10, || format!("Zeeman defect {worst_zeeman:.1e}"))?;
    Ok(format!("zero-field defect {worst_free:.1e}; Zeeman vs 2x2 oracle {worst_zeeman:.1e}"))
}

fn representation() -> Outcome {
    let table = StructureTable::galilei();
    let cfg = GridConfig::standard();
    let line_probes: Vec<Vec<Complex64>> = [(-2.0, 0.5, 1.0), (1.5, -1.0, 0.8), (0.0, 0.0, 1.3)]
        .iter()
        .map(|&(x0, p0, s)| GridState::gaussian(cfg, x0, p0, s).unwrap().amplitudes().to_vec())
        .collect();
    let line = verify_representation(&table, &line_representation(&cfg), &line_probes, 1e-8).map_err(|e| e.to_string())?;

    let plane = PlaneConfig::new(64, 20.0, 1.0, 1.0).map_err(|e| e.to_string())?;
    let spin = Some((c(0.6, 0.0), c(0.0, 0.8)));
    let plane_probes: Vec<Vec<Complex64>> = [([0.5, -0.3], 0.9, 0), ([-1.0, 0.4], 0.8, 1), ([0.0, 1.0], 0.8, -1)]
        .iter()
        .map(|&(center, sigma, m)| plane_gaussian(&plane, center, sigma, m, spin).unwrap())
        .collect();
    let planar =
        verify_representation(&table, &plane_representation(&plane), &plane_probes, 1e-8).map_err(|e| e.to_string())?;
    for (name, r) in [("line", &line), ("plane", &planar)] {
        ensure(r.passed(), || {
            let bad: Vec<String> = r.failures().map(|f| format!("[{},{}] {:.1e}", f.left, f.right, f.residual)).collect();
            format!("{name}: {}", bad.join(", "))
        })?;
    }
    Ok(format!(
        "line: {} relations, max {:.1e}; plane with spin: {} relations, max {:.1e}",
        line.checked().count(),
        line.max_residual(),
        planar.checked().count(),
        planar.max_residual()
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("group axioms", group_axioms),
        ("Bargmann cocycle", bargmann_cocycle),
        ("Jacobi identity", jacobi_table),
        ("spin-1/2 matrices", pauli_bit_exact),
        ("spin-j sweep", spin_sweep),
        ("position-momentum uncertainty", uncertainty),
        ("unitarity and Schrödinger residual", unitarity_and_order),
        ("free Gaussian spreading", free_spreading),
        ("Heisenberg equation", heisenberg),
        ("time-energy relation", time_energy),
        ("superselection and gauge", sectors),
        ("electromagnetic Hamiltonian", em_hamiltonian_checks),
        ("Lie algebra representation", representation),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
