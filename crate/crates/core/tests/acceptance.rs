//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::process::ExitCode;

use gaussent_core::anchors::Anchors;
use gaussent_core::epr::{degree_of_epr, epr_from_photons, epr_vs_loss};
use gaussent_core::gaussian::{
    apply_local_squeezing, apply_loss, entangle_on_beamsplitter, Combination, CorrelationMatrix4,
    Quadrature, SqueezedBeam, TwoModeState,
};
use gaussent_core::photon_number::{decompose, reconstruct_cm};
use gaussent_core::protocols::{
    capacity_ratio, optimal_squeezed_capacity, optimal_squeezed_capacity_numeric, teleport_fidelity,
};
use gaussent_core::separability::{
    degree_of_inseparability, inseparability_vs_loss, product_restriction,
    standard_form_restrictions,
};
use gaussent_core::spectra::cm_at_frequency;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn within(name: &str, got: f64, want: f64, tol: f64) -> Check {
    if (got - want).abs() <= tol {
        Ok(format!("{name} = {got:.6}"))
    } else {
        Err(format!("{name} = {got} (want {want} ± {tol})"))
    }
}

fn all(checks: Vec<Check>) -> Check {
    let mut ok = Vec::new();
    for c in checks {
        ok.push(c?);
    }
    Ok(ok.join(", "))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn anchor(key: &str) -> CorrelationMatrix4 {
    Anchors::bundled().get(key).unwrap().cm
}

fn reported_cm() -> CorrelationMatrix4 {
    let row = Anchors::bundled()
        .get("6.5MHz")
        .unwrap()
        .reported_row()
        .unwrap();
    cm_at_frequency(&row).unwrap()
}

fn pure_equal(v: f64) -> TwoModeState {
    let b = SqueezedBeam::pure_amplitude_squeezed(v).unwrap();
    entangle_on_beamsplitter(&b, &b).unwrap()
}

fn random_symmetric_state(rng: &mut ChaCha8Rng) -> CorrelationMatrix4 {
    let v: f64 = rng.gen_range(0.02..0.999);
    let impurity: f64 = rng.gen_range(1.0..20.0);
    let eta: f64 = rng.gen_range(0.05..=1.0);
    let b = SqueezedBeam::vacuum_squeezed(v, impurity / v).unwrap();
    apply_loss(&entangle_on_beamsplitter(&b, &b).unwrap(), eta, eta)
        .unwrap()
        .cm
}

fn inseparability_anchor() -> Check {
    all(vec![
        within(
            "I(matrix)",
            degree_of_inseparability(&anchor("6.5MHz")).map_err(|e| e.to_string())?,
            0.400,
            0.001,
        ),
        within(
            "I(reported)",
            degree_of_inseparability(&reported_cm()).map_err(|e| e.to_string())?,
            0.440,
            0.001,
        ),
    ])
}

fn epr_anchor() -> Check {
    let e = degree_of_epr(&anchor("6.5MHz")).map_err(|e| e.to_string())?;
    all(vec![
        within("E(reported cv)", 0.77 * 0.76, 0.5852, 1e-4),
        within("E(matrix)", e.degree, 0.5648, 5e-4),
    ])
}

fn loss_boundary() -> Check {
    let mut worst: f64 = 0.0;
    for v in [0.1, 0.3, 0.5, 0.7, 0.9] {
        worst = worst.max((epr_vs_loss(v, 0.5) - 1.0).abs());
    }
    ensure(worst <= 1e-12, format!("max |E(0.5) - 1| = {worst:.2e}"))?;
    Ok(format!("max |E(0.5) - 1| = {worst:.2e}"))
}

fn pipeline_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut di, mut de): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let v: f64 = rng.gen_range(0.01..0.99);
        let eta: f64 = rng.gen_range(0.0..=1.0);
        let cm = apply_loss(&pure_equal(v), eta, eta).unwrap().cm;
        di =
            di.max((degree_of_inseparability(&cm).unwrap() - inseparability_vs_loss(v, eta)).abs());
        de = de.max((degree_of_epr(&cm).unwrap().degree - epr_vs_loss(v, eta)).abs());
    }
    ensure(
        di <= 1e-10 && de <= 1e-10,
        format!("max dI = {di:.2e}, max dE = {de:.2e}"),
    )?;
    for k in 1..10 {
        let v = k as f64 / 10.0;
        for j in 1..=100 {
            let eta = j as f64 / 100.0;
            let i = degree_of_inseparability(&apply_loss(&pure_equal(v), eta, eta).unwrap().cm)
                .unwrap();
            ensure(i < 1.0, format!("I = {i} at v = {v}, eta = {eta}"))?;
        }
    }
    Ok(format!(
        "max dI = {di:.2e}, max dE = {de:.2e}, I < 1 on grid"
    ))
}

fn teleportation() -> Check {
    let f = teleport_fidelity(0.44).map_err(|e| e.to_string())?;
    ensure(f.no_cloning, "F(0.44) should beat the no-cloning limit")?;
    within("F(0.44)", f.fidelity, 0.6944, 1e-4)
}

fn photon_decomposition() -> Check {
    let high = decompose(&reported_cm()).map_err(|e| e.to_string())?;
    let low = decompose(&anchor("3.5MHz")).map_err(|e| e.to_string())?;
    all(vec![
        within("n_min", high.n_min, 0.356, 0.001),
        within("n_bias", high.n_bias, 0.0, 1e-12),
        within("n_excess", high.n_excess, 1.944, 0.002),
        within("n_bias(3.5 MHz)", low.n_bias, 0.094, 0.002),
    ])
}

fn photon_diagram_epr() -> Check {
    within(
        "E(0.356, 1.944)",
        epr_from_photons(0.356, 1.944).map_err(|e| e.to_string())?,
        0.675,
        0.005,
    )
}

fn dense_coding() -> Check {
    let ratio = capacity_ratio(125.0, 0.356, 1.944).map_err(|e| e.to_string())?;
    let mut checks = vec![within("ratio(125)", ratio, 1.02, 0.005)];
    for n in [0.5, 3.375, 125.0] {
        let (_, numeric) = optimal_squeezed_capacity_numeric(n).map_err(|e| e.to_string())?;
        checks.push(within(
            &format!("C_opt({n})"),
            numeric,
            optimal_squeezed_capacity(n),
            1e-6,
        ));
    }
    all(checks)
}

fn restriction_truth_table() -> Check {
    let (high, low) = (anchor("6.5MHz"), anchor("3.5MHz"));
    let (rh, rl) = (
        standard_form_restrictions(&high),
        standard_form_restrictions(&low),
    );
    ensure(
        rh.bias_ratio_ok && rh.correlation_offset_ok,
        format!("6.5 MHz: {rh:?}"),
    )?;
    ensure(
        rl.bias_ratio_ok && !rl.correlation_offset_ok,
        format!("3.5 MHz: {rl:?}"),
    )?;
    ensure(
        product_restriction(&high) && product_restriction(&low),
        "product restriction",
    )?;
    Ok("6.5 MHz passes both, 3.5 MHz fails offset, product holds for both".into())
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut de, mut dn): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let cm = random_symmetric_state(&mut rng);
        ensure(cm.is_physical(), "random state not physical")?;
        let d = decompose(&cm).unwrap();
        let direct = degree_of_epr(&cm).unwrap().degree;
        de = de.max((epr_from_photons(d.n_min, d.n_excess).unwrap() - direct).abs());
        let back = decompose(&reconstruct_cm(d.n_min, d.n_excess).unwrap()).unwrap();
        dn = dn
            .max((back.n_min - d.n_min).abs())
            .max((back.n_excess - d.n_excess).abs());
    }
    ensure(
        de <= 1e-10 && dn <= 1e-10,
        format!("max dE = {de:.2e}, max dn = {dn:.2e}"),
    )?;
    Ok(format!("max dE = {de:.2e}, max round-trip dn = {dn:.2e}"))
}

fn invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut di, mut dn): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let state = TwoModeState::from_cm(random_symmetric_state(&mut rng));
        let i0 = degree_of_inseparability(&state.cm).unwrap();
        let n0 = decompose(&state.cm).unwrap().n_min;
        for g in [0.5, 0.8, 1.25, 2.0] {
            let sq = apply_local_squeezing(&state, g).unwrap();
            di = di.max((degree_of_inseparability(&sq.cm).unwrap() - i0).abs());
            dn = dn.max((decompose(&sq.cm).unwrap().n_min - n0).abs());
        }
    }
    ensure(
        di <= 1e-10 && dn <= 1e-10,
        format!("max dI = {di:.2e}, max dn_min = {dn:.2e}"),
    )?;

    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let mut beam = || {
            let v = 10f64.powf(rng.gen_range(-3.0..3.0));
            let w = 10f64.powf(rng.gen_range(0.0..2.0)) / v;
            SqueezedBeam::vacuum_squeezed(v, w).unwrap()
        };
        let (a, b) = (beam(), beam());
        let (ex, ey) = (rng.gen_range(0.0..=1.0), rng.gen_range(0.0..=1.0));
        let s = apply_loss(&entangle_on_beamsplitter(&a, &b).unwrap(), ex, ey).unwrap();
        worst = worst.min(s.cm.min_physical_eigenvalue());
    }
    ensure(worst >= -1e-9, format!("min eigenvalue {worst:.2e}"))?;
    Ok(format!(
        "max dI = {di:.2e}, max dn_min = {dn:.2e}, min eig = {worst:.3e}"
    ))
}

fn perfect_squeezing_limit() -> Check {
    let b = SqueezedBeam::pure_amplitude_squeezed(1e-8).map_err(|e| e.to_string())?;
    let s = entangle_on_beamsplitter(&b, &b).map_err(|e| e.to_string())?;
    let sum = s.sum_diff_variance(Quadrature::Plus, Combination::Sum);
    let diff = s.sum_diff_variance(Quadrature::Minus, Combination::Diff);
    ensure(
        sum <= 1e-7 && diff <= 1e-7,
        format!("sum {sum:.2e}, diff {diff:.2e}"),
    )?;
    Ok(format!(
        "amplitude sum {sum:.2e}, phase difference {diff:.2e}"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("inseparability at 6.5 MHz", inseparability_anchor),
        ("EPR paradox at 6.5 MHz", epr_anchor),
        ("EPR boundary at 50% efficiency", loss_boundary),
        ("pipeline matches loss closed forms", pipeline_equivalence),
        ("teleportation fidelity", teleportation),
        ("photon-number decomposition", photon_decomposition),
        ("EPR from photon numbers", photon_diagram_epr),
        ("dense-coding capacity", dense_coding),
        (
            "standard-form restriction truth table",
            restriction_truth_table,
        ),
        ("photon-form and reconstruction oracles", oracle_equivalence),
        ("local-squeezing invariance and physicality", invariance),
        ("perfect-squeezing limit", perfect_squeezing_limit),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {}: {name} ({detail})", n + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {}: {name} ({detail})", n + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
