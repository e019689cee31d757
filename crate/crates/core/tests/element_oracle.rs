//! Element pattern values checked against an arbitrary-precision
//! transcription (tests/oracles/element_pattern.py).

use num_complex::Complex64;
use ris_gbsm::element::{
    element_pattern_h, element_pattern_matrix, element_pattern_v, ElementGeometry, PhaseModel,
    ReflectionCoefficient, VACUUM_PERMEABILITY, VACUUM_PERMITTIVITY,
};
use ris_gbsm::geometry::SphericalAngle;

type Case = (f64, f64, f64, f64, f64, f64, f64, f64, [(f64, f64); 4]);

#[rustfmt::skip]
const CASES: &[Case] = &[
    (0.0156, 0.0156, 0.05, 60.0, 0.0, 60.0, 180.0, 0.0, [(0.0, 0.0), (0.0, 0.0), (0.0, -2.6914763518552739272e-12), (0.0, -2.9671296224657417705e-54)]),
    (0.0156, 0.0156, 0.05, 60.0, 0.0, 30.0, 150.0, -90.0, [(1.8094156830543386896e-13, -3.6188313661086773791e-13), (5.4022650089365891423e-12, -4.0516987567024418567e-12), (7.3516394821511115034e-12, -1.7627340674124006548e-11), (1.1416329258966766823e-12, -6.1820147982223980867e-12)]),
    (0.0156, 0.0156, 0.05, 45.0, 255.0, 72.0, 75.0, 123.0, [(4.1414373464396402084e-12, 1.2303810075635974689e-12), (-1.5989953363335480433e-12, -9.2798676565045401993e-12), (5.9031754428776572515e-13, 2.3340558859618442966e-12), (-9.8814839452830914617e-13, -2.5737879943238858731e-12)]),
    (0.02, 0.01, 0.1, 10.0, 33.0, 80.0, 300.0, -170.0, [(-4.9790573145670434472e-13, 9.5254933319516852002e-13), (-8.6819560030192323174e-14, -3.4183039038300204046e-13), (-6.0708467161851386762e-13, 7.379595637591886705e-12), (5.2109606756048829392e-13, 3.3174057930392646064e-13)]),
];

#[test]
fn matches_high_precision_transcription() {
    for &(a, b, lam, ti, pi, to, po, ph, expected) in CASES {
        let geom = ElementGeometry {
            length: a,
            width: b,
            wavelength: lam,
            permeability: VACUUM_PERMEABILITY,
            permittivity: VACUUM_PERMITTIVITY,
        };
        let inc = SphericalAngle::from_degrees(ti, pi).unwrap();
        let out = SphericalAngle::from_degrees(to, po).unwrap();
        let r = ReflectionCoefficient::from_phase(ph.to_radians());
        let (vv, vh) = element_pattern_v(&geom, inc, out, r).unwrap();
        let (hv, hh) = element_pattern_h(&geom, inc, out, r).unwrap();
        let m = element_pattern_matrix(&geom, inc, out, r, PhaseModel::NonIdeal).unwrap();
        assert_eq!([vv, vh, hv, hh], m.to_array());

        let expected: Vec<Complex64> = expected.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let scale = expected.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for (got, want) in [vv, vh, hv, hh].iter().zip(&expected) {
            let err = (got - want).norm();
            assert!(
                err <= 1e-10 * scale,
                "case {ti}/{pi}/{to}/{po}/{ph}: got {got}, want {want}"
            );
        }
    }
}
