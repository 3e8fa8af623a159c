use radon_core::lorentz::LorentzIndex;
use radon_core::{
    grassmann, hyperbolic, sphere, GrassmannGeometry, HyperbolicGeometry, Quadrature, SphereGeometry, StepProfileF32,
    StepProfileF64,
};

#[test]
fn f32_paths_track_f64() {
    let f64p = StepProfileF64::indicator(vec![(0.5, 1.5), (2.0, 3.0)]).unwrap();
    let f32p: StepProfileF32 = f64p.cast();
    let g = GrassmannGeometry::new(4, 2, 0).unwrap();
    let quad = Quadrature::<f32>::new(1e-5);
    for s in [0.0f32, 0.7, 1.8] {
        let a = grassmann::abel_step_closed(&g, &f32p, s).unwrap() as f64;
        let b = grassmann::abel_step_closed(&g, &f64p, s as f64).unwrap();
        let c = grassmann::abel_point(&g, &f32p, s, &quad).unwrap().value as f64;
        assert!((a - b).abs() <= 1e-5 * b.abs().max(1.0));
        assert!((c - b).abs() <= 1e-4 * b.abs().max(1.0));
    }
    let h = HyperbolicGeometry::new(3, 2).unwrap();
    let ht = StepProfileF64::indicator(vec![(1.0, 2.0)]).unwrap();
    let e = hyperbolic::endpoint_bound_ratio(&h, &ht.cast::<f32>()).unwrap();
    assert!((e.weighted as f64 - hyperbolic::endpoint_bound_ratio(&h, &ht).unwrap().weighted).abs() < 1e-3);
    let sg = SphereGeometry::new(3, 2).unwrap();
    let cap = StepProfileF64::indicator(vec![(0.3, 0.9)]).unwrap();
    let n32 = sphere::sphere_lorentz_norm(&cap.cast::<f32>(), &sg, LorentzIndex::new(1.5f32, 1.0).unwrap()).unwrap();
    let n64 = sphere::sphere_lorentz_norm(&cap, &sg, LorentzIndex::new(1.5, 1.0).unwrap()).unwrap();
    assert!((n32 as f64 - n64).abs() < 1e-5 * n64);
}
