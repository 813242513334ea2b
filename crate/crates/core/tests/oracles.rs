//! Correlators checked against values integrated independently (composite
//! Gauss-Legendre, 200 panels of 100 nodes) and against a 10-site chain.

use xyquench::correlators::{correlator_g, correlator_s, correlator_set, magnetization_z, Lag};
use xyquench::{ModelParams, QuadratureSpec};

struct Reference {
    gamma: f64,
    a: f64,
    t: f64,
    mz: f64,
    g_plus: f64,
    g_minus: f64,
    s: f64,
    tzz: f64,
}

const REFERENCES: &[Reference] = &[
    Reference {
        gamma: 0.5,
        a: 2.0,
        t: 1.0,
        mz: 0.7575127038470159,
        g_plus: 0.04345585094855822,
        g_minus: -0.10785097996325607,
        s: -0.3799884498978563,
        tzz: 0.7229034746553316,
    },
    Reference {
        gamma: 0.5,
        a: 1.0,
        t: 1.0,
        mz: 0.5160813260529924,
        g_plus: -0.07579766826531376,
        g_minus: -0.39914729215661615,
        s: -0.4204496519216419,
        tzz: 0.41286341086175943,
    },
    Reference {
        gamma: 0.5,
        a: 0.5,
        t: 1.0,
        mz: 0.13226919146737823,
        g_plus: -0.21110697371861661,
        g_minus: -0.8567353508845601,
        s: -0.28002210288850404,
        tzz: -0.08495529008546271,
    },
    Reference {
        gamma: 1.0,
        a: 0.7,
        t: 2.5,
        mz: 0.14260504399006052,
        g_plus: -0.00477764656114682,
        g_minus: -0.863040683535395,
        s: 0.3135581549470707,
        tzz: 0.1145316117513956,
    },
    Reference {
        gamma: 0.5,
        a: 1e4,
        t: 0.0,
        mz: 0.9999999993749997,
        g_plus: 2.5000000007852075e-05,
        g_minus: -2.5000000070274364e-05,
        s: 0.0,
        tzz: 0.9999999993749995,
    },
];

#[test]
fn correlators_match_reference_integrals() {
    let spec = QuadratureSpec::default();
    for r in REFERENCES {
        let p = ModelParams::new(r.gamma, r.a, r.t).unwrap();
        let set = correlator_set(&p, &spec).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() < 1e-9;
        assert!(
            close(set.mz, r.mz),
            "mz at {:?}: {} vs {}",
            (r.a, r.t),
            set.mz,
            r.mz
        );
        assert!(close(set.tyy, r.g_plus), "G(+1) at {:?}", (r.a, r.t));
        assert!(close(set.txx, r.g_minus), "G(-1) at {:?}", (r.a, r.t));
        assert!(close(set.txy, r.s), "S at {:?}", (r.a, r.t));
        assert!(close(set.tzz, r.tzz), "Tzz at {:?}", (r.a, r.t));

        assert!(close(magnetization_z(&p, &spec).unwrap(), r.mz));
        assert!(close(correlator_g(Lag::Plus, &p, &spec).unwrap(), r.g_plus));
        assert!(close(
            correlator_g(Lag::Minus, &p, &spec).unwrap(),
            r.g_minus
        ));
        assert!(close(correlator_s(&p, &spec).unwrap(), r.s));
    }
}

#[test]
fn strong_initial_field_polarizes() {
    let spec = QuadratureSpec::default();
    // mz = 1 − γ²/(8ã²) + O(ã⁻⁴) at t̃ = 0
    for (a, mz, g_plus, g_minus) in [
        (
            1e2,
            0.9999937496191145,
            0.0025000078111082624,
            -0.0025000703161867366,
        ),
        (
            1e3,
            0.9999999374999617,
            0.00025000000781250087,
            -0.00025000007031250604,
        ),
    ] {
        let set = correlator_set(&ModelParams::new(0.5, a, 0.0).unwrap(), &spec).unwrap();
        assert!((set.mz - mz).abs() < 1e-12);
        assert!((set.tyy - g_plus).abs() < 1e-12);
        assert!((set.txx - g_minus).abs() < 1e-12);
    }
    let far = correlator_set(&ModelParams::new(0.5, 1e6, 0.0).unwrap(), &spec).unwrap();
    assert!((far.mz - 1.0).abs() < 1e-6);
    assert!((far.tzz - 1.0).abs() < 1e-6);
}

#[test]
fn agrees_with_exact_diagonalization_of_a_short_ring() {
    // ⟨σᶻ⟩, ⟨σˣσˣ⟩, ⟨σʸσʸ⟩, ⟨σᶻσᶻ⟩, ⟨σˣσʸ⟩ on a periodic 10-site chain
    // quenched from field ã to zero; the residual is the finite-size error
    let ring = [
        ((2.0, 0.0), [0.98149, -0.13519, 0.12538, 0.98027, 0.0]),
        ((0.5, 0.0), [0.29718, -0.88503, -0.12571, -0.02294, 0.0]),
        ((2.0, 1.0), [0.75749, -0.10786, 0.04339, 0.72286, -0.37999]),
        (
            (0.5, 1.0),
            [0.13331, -0.85657, -0.21108, -0.08500, -0.27935],
        ),
        ((1.0, 0.5), [0.70184, -0.44648, 0.07767, 0.60607, -0.28073]),
    ];
    let spec = QuadratureSpec::default();
    for ((a, t), ed) in ring {
        let set = correlator_set(&ModelParams::new(0.5, a, t).unwrap(), &spec).unwrap();
        let ours = [set.mz, set.txx, set.tyy, set.tzz, set.txy];
        for (x, y) in ours.iter().zip(ed) {
            assert!((x - y).abs() < 1.5e-2, "({a}, {t}): {ours:?} vs {ed:?}");
        }
    }
}
