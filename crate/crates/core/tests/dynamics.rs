use sbx_core::bath::{self, BathParams, DiscretizedBath, Mode, Scheme};
use sbx_core::dynamics::{self, AmplitudeTrace};
use sbx_core::model::{EffectiveModel, ModelKind};
use sbx_core::spectrum::ModelFamily;
use sbx_core::{arrowhead, polaron, Complex64, Error};
use std::f64::consts::FRAC_1_SQRT_2;

fn p(alpha: f64) -> BathParams {
    BathParams::scaled(alpha, 0.7, 0.02).unwrap()
}

#[test]
fn arrowhead_matches_dense_eigensolver() {
    let model = EffectiveModel::rwa(p(0.05));
    let bath = bath::discretize(&p(0.05), 300, Scheme::Logarithmic).unwrap();
    let disc = model.discretize(&bath);
    let n = disc.omegas.len() + 1;
    let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
    m[(0, 0)] = disc.delta_eff;
    for k in 0..n - 1 {
        m[(k + 1, k + 1)] = disc.omegas[k];
        m[(0, k + 1)] = disc.couplings[k];
        m[(k + 1, 0)] = disc.couplings[k];
    }
    let dense = nalgebra::SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dense.eigenvalues[a].total_cmp(&dense.eigenvalues[b]));
    let ours = arrowhead::eigen(&disc).unwrap();
    assert_eq!(ours.len(), n);
    for (pair, &i) in ours.iter().zip(&order) {
        assert!((pair.value - dense.eigenvalues[i]).abs() <= 1e-12, "{} vs {}", pair.value, dense.eigenvalues[i]);
        let w = dense.eigenvectors[(0, i)].powi(2);
        assert!((pair.weight - w).abs() <= 1e-9, "{} vs {w}", pair.weight);
    }
    let total: f64 = ours.iter().map(|p| p.weight).sum();
    assert!((total - 1.0).abs() <= 1e-12);
}

#[test]
fn single_resonant_mode_is_a_rabi_oscillation() {
    let delta = 0.02;
    let coupling = 0.003;
    let model = EffectiveModel::rwa(p(0.01));
    let bath = DiscretizedBath {
        modes: vec![Mode { omega: delta, g: 2.0 * coupling }],
        scheme: Scheme::Linear,
        alpha: 0.01,
    };
    let tr = dynamics::ed_oracle(&model, &bath, 3000.0, 0.5).unwrap();
    for (i, a) in tr.amp.iter().enumerate() {
        let t = tr.time(i);
        let want = Complex64::from_polar(FRAC_1_SQRT_2 * (coupling * t).cos(), -delta * t);
        assert!((a - want).norm() <= 1e-12, "t = {t}");
    }
}

#[test]
fn volterra_matches_ed_oracle_on_short_window() {
    for (kind, alpha) in [(ModelKind::Rwa, 0.028), (ModelKind::Polaron, 0.12)] {
        let model = ModelFamily::new(p(0.0), kind).model_at(alpha).unwrap();
        let bath = bath::discretize(&p(alpha), 4000, Scheme::Logarithmic).unwrap();
        let v = dynamics::solve_amplitude(&model, 500.0, 0.02).unwrap();
        let e = dynamics::ed_oracle(&model, &bath, 500.0, 0.02).unwrap();
        let dev = v.max_deviation(&e).unwrap();
        assert!(dev <= 1e-4, "{kind:?}: {dev}");
    }
}

fn deviation_on_coarse(fine: &AmplitudeTrace, coarse: &AmplitudeTrace) -> f64 {
    let ratio = (coarse.dt / fine.dt).round() as usize;
    coarse
        .amp
        .iter()
        .enumerate()
        .map(|(i, a)| (a - fine.amp[i * ratio]).norm())
        .fold(0.0, f64::max)
}

#[test]
fn step_halving_converges_at_second_order() {
    let model = EffectiveModel::rwa(p(0.04));
    let t = |dt| dynamics::solve_amplitude(&model, 100.0, dt).unwrap();
    let (a, b, c) = (t(0.04), t(0.02), t(0.01));
    let order = (deviation_on_coarse(&b, &a) / deviation_on_coarse(&c, &b)).log2();
    assert!(order >= 1.8, "{order}");
}

#[test]
fn trace_invariants_and_errors() {
    let model = polaron::polaron_model(&p(0.08)).unwrap();
    let tr = dynamics::solve_amplitude(&model, 200.0, 0.05).unwrap();
    assert_eq!(tr.amp[0], Complex64::new(FRAC_1_SQRT_2, 0.0));
    assert_eq!(tr.pz[0], 1.0);
    assert!(tr.max_modulus() <= FRAC_1_SQRT_2 + 1e-6);
    assert_eq!(tr.kind, ModelKind::Polaron);
    assert!(matches!(dynamics::solve_amplitude(&model, 10.0, 0.5), Err(Error::Domain { .. })));
}

#[test]
fn pz_series_of_phase_rotation() {
    let amp: Vec<Complex64> = (0..100).map(|i| Complex64::from_polar(FRAC_1_SQRT_2, -0.3 * i as f64)).collect();
    let pz = dynamics::pz_series(&amp);
    for (i, v) in pz.iter().enumerate() {
        assert!((v - (0.3 * i as f64).cos()).abs() < 1e-14);
    }
    assert!(dynamics::pz_series(&[Complex64::new(FRAC_1_SQRT_2, 0.0); 5]).iter().all(|&v| v == 1.0));
}

#[test]
fn residue_prediction_regimes() {
    let fam = ModelFamily::new(p(0.0), ModelKind::Rwa);
    let pred = |a: f64| dynamics::asymptotic_envelope(&fam.model_at(a).unwrap()).unwrap();
    assert!(pred(0.02).is_none());
    let at = pred(0.028).unwrap();
    assert_eq!(at.nu, 0.0);
    let (r1, r2) = (pred(0.035).unwrap(), pred(0.05).unwrap());
    assert!(r2.frequency() > r1.frequency() && r1.frequency() > 0.0);
    assert!(r1.z > 0.0 && r1.z < 1.0);
}

#[test]
fn residue_matches_late_time_envelope() {
    let model = EffectiveModel::rwa(p(0.05));
    let pred = dynamics::asymptotic_envelope(&model).unwrap().unwrap();
    let tr = dynamics::solve_amplitude(&model, 2000.0, 0.05).unwrap();
    let w = tr.late_window(dynamics::LATE_FRACTION);
    assert!((w.envelope - pred.z).abs() <= 0.02 * pred.z, "{} vs {}", w.envelope, pred.z);
}
