use num_complex::Complex64;
use std::f64::consts::PI;
use wzterm_core::closedforms::{energy_quantum, wz_sphere_harmonic, wz_symmetric_space};
use wzterm_core::flatfam::{energy_numeric, DiscreteTorusMap};
use wzterm_core::modulipath::path_holonomy;
use wzterm_core::oracle::{gamma_from_fraction, volume_fraction, S3Sampler, Surface};
use wzterm_core::spectral::{
    cartan_path, energy_closed_form, gamma_spectral, holonomy_integral, lift_circle, LiftConfig, QuadConfig,
    SpectralConfig, SpectralCurveP0, Span,
};
use wzterm_core::{build_group, GroupType, Series};

#[test]
fn discrete_energy_matches_spectral_energy() {
    let c = SpectralCurveP0::<f64>::clifford();
    let spectral = energy_closed_form(&c).unwrap();
    let discrete = energy_numeric(&DiscreteTorusMap::<f64>::clifford(128).unwrap(), 1e-3).unwrap();
    assert!((discrete / spectral - 1.0).abs() < 1e-4);
}

#[test]
fn volume_picture_matches_spectral_gamma() {
    let v = volume_fraction(Surface::Clifford, &S3Sampler::new(11, 1_000_000).unwrap());
    let mc = gamma_from_fraction(v.fraction, 1e-9).unwrap();
    let c = SpectralCurveP0::<f64>::clifford();
    let (d1, d2) = c.reference_log_mu();
    let g = gamma_spectral(&c, &d1, &d2, 1024, &SpectralConfig::default()).unwrap();
    assert!((mc.canonical - g.gamma.canonical).abs() < 3.0 * 2.0 * PI * v.stderr);
    let eq = volume_fraction(Surface::Equator, &S3Sampler::new(12, 1_000_000).unwrap());
    let deg_one = wz_symmetric_space::<f64>(1);
    assert!((gamma_from_fraction(eq.fraction, 1e-9).unwrap().canonical - deg_one.canonical).abs() < 6.0 * PI * eq.stderr);
}

#[test]
fn spectral_lift_is_a_moduli_path() {
    let c = SpectralCurveP0::nonconformal(Complex64::new(-0.25, 0.55)).unwrap();
    let (d1, d2) = c.reference_log_mu();
    let p = lift_circle(&c, &d1, &d2, 16384, Span::Half, &LiftConfig::default()).unwrap();
    let i = holonomy_integral(&p, &QuadConfig::default()).unwrap().value;
    let h = path_holonomy(&cartan_path(&p).unwrap()).unwrap();
    assert!((h - Complex64::from_polar(1.0, -i / PI)).norm() < 1e-7);
}

#[test]
fn quantized_sphere_energies_give_integral_terms() {
    for gt in GroupType::all_up_to_rank(4) {
        let g = build_group(gt).unwrap();
        let q: f64 = energy_quantum(&g);
        let s = wz_sphere_harmonic(&g, 3.0 * q, 1e-9).unwrap();
        assert!(s.integrality_residual < 1e-9, "{gt}");
        assert_eq!(s.gamma.pi_multiple, Some(1), "{gt}");
    }
    let su2 = build_group(GroupType::new(Series::A, 1).unwrap()).unwrap();
    assert!((energy_quantum::<f64>(&su2) - 32.0 * PI).abs() < 1e-12);
}
