use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quathyp::document::MatrixDocument;
use quathyp::exact::{exact_invariants, is_member, ExactMatrix};
use quathyp::model::membership_residual;
use quathyp::normal_forms::{random_isometry, sample};
use quathyp::oracle::eigen_classify;
use quathyp::{classify, DynamicalType, Field, Model, QMatrix3, Tolerances};

fn field_of(h: bool) -> Field {
    if h {
        Field::Quaternion
    } else {
        Field::Complex
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_members_keep_their_label(seed in any::<u64>(), t in 0..DynamicalType::ALL.len(), h in any::<bool>()) {
        let field = field_of(h);
        let s = sample(DynamicalType::ALL[t], field, &mut ChaCha8Rng::seed_from_u64(seed));
        let tols = Tolerances::default();
        prop_assert!(membership_residual(&s.matrix, s.model) <= 1e-9);
        prop_assert_eq!(classify(&s.matrix, s.model, field, &tols).unwrap().dtype, s.dtype);
        prop_assert_eq!(eigen_classify(&s.matrix, s.model, &tols).unwrap(), s.dtype);
    }

    #[test]
    fn conjugation_keeps_the_type(seed in any::<u64>(), t in 0..DynamicalType::ALL.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = sample(DynamicalType::ALL[t], Field::Quaternion, &mut rng);
        let c = random_isometry(Field::Quaternion, s.model, &mut rng);
        let b = c * s.matrix * c.inverse().unwrap();
        let tols = Tolerances::default();
        let before = classify(&s.matrix, s.model, Field::Quaternion, &tols).unwrap();
        let after = classify(&b, s.model, Field::Quaternion, &tols).unwrap();
        prop_assert_eq!(before.dtype, after.dtype);
        let (x, y) = (before.invariants, after.invariants);
        for (p, q) in [(x.a, y.a), (x.b, y.b), (x.c, y.c)] {
            prop_assert!((p - q).abs() <= 1e-8 * (1.0 + p.abs()), "{} vs {}", p, q);
        }
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), t in 0..DynamicalType::ALL.len()) {
        let s = sample(DynamicalType::ALL[t], Field::Quaternion, &mut ChaCha8Rng::seed_from_u64(seed));
        let doc = MatrixDocument::new(&s.matrix, Field::Quaternion, s.model);
        let back = MatrixDocument::from_json(&serde_json::to_string(&doc).unwrap()).unwrap();
        prop_assert_eq!(back.to_matrix().unwrap(), s.matrix);
    }

    #[test]
    fn rational_dilations_agree_with_floats(p in 2i64..40, q in 1i64..40, neg in any::<bool>()) {
        prop_assume!(p != q);
        let r = p as f64 / q as f64;
        let last = if neg { -1.0 } else { 1.0 };
        let a = QMatrix3::from_real([[r, 0.0, 0.0], [0.0, 1.0 / r, 0.0], [0.0, 0.0, last]]);
        let doc = MatrixDocument::from_json(&format!(
            r#"{{"field":"H","model":"siegel","matrix":[["{p}/{q}",0,0],[0,"{q}/{p}",0],[0,0,{last}]]}}"#
        ))
        .unwrap();
        let e: ExactMatrix = doc.to_exact().unwrap();
        prop_assert!(is_member(&e, Model::Siegel));
        let exact = exact_invariants(&e, Model::Siegel).unwrap();
        let float = classify(&a, Model::Siegel, Field::Quaternion, &Tolerances::default()).unwrap();
        prop_assert_eq!(exact.dtype, DynamicalType::StrictlyHyperbolic);
        prop_assert_eq!(float.dtype, exact.dtype);
        let [ea, eb, ec, ..] = exact.to_f64();
        for (x, y) in [(ea, float.invariants.a), (eb, float.invariants.b), (ec, float.invariants.c)] {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()));
        }
    }
}

#[test]
fn example_matrices() {
    let tols = Tolerances::default();
    let siegel = |d: [f64; 3]| {
        let a = QMatrix3::from_real([[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]]);
        classify(&a, Model::Siegel, Field::Quaternion, &tols).unwrap()
    };
    let c = siegel([2.0, 0.5, 1.0]);
    assert_eq!(c.dtype, DynamicalType::StrictlyHyperbolic);
    assert_eq!((c.invariants.a, c.invariants.b, c.invariants.c), (7.0, 19.25, 26.5));
    assert_eq!(c.invariants.g, 0.25);
    let c = siegel([2.0, 0.5, -1.0]);
    assert_eq!(c.dtype, DynamicalType::StrictlyHyperbolic);
    assert_eq!(c.invariants.g, 182.25);
    let c = siegel([1.0, 1.0, 1.0]);
    assert_eq!(c.dtype, DynamicalType::SimpleElliptic);
    assert_eq!(c.invariants.min_degree, 1);
}
