use offshell::exact::{Sampler, Scalar};
use offshell::qsym::{Composition, VariableAssignment};
use offshell::rmatrix::{build_r, check_ybe, RPoint};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (1i64..2000, 1i64..2000, any::<bool>())
        .prop_map(|(p, q, neg)| Scalar::frac(if neg { -p } else { p }, q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn yang_baxter(n in 2usize..=3, q in scalar(), u in scalar(), v in scalar(), w in scalar()) {
        match check_ybe(n, &q, &u, &v, &w) {
            Ok(ok) => prop_assert!(ok),
            Err(e) => prop_assert!(e.needs_resample() || q.is_zero()),
        }
    }

    #[test]
    fn r_at_equal_points_is_flip(n in 2usize..=4, q in scalar(), u in scalar()) {
        prop_assume!(!(&q * &q).is_one());
        let r = build_r(&RPoint::new(n, u.clone(), u, q).unwrap());
        prop_assert_eq!(r, offshell::rmatrix::swap(n));
    }

    #[test]
    fn scalar_field_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!((&a / &b) * &b, a.clone());
        prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
    }

    #[test]
    fn q_symmetrization_is_q_symmetric(seed in 0u64..1000, n in 2usize..=3) {
        let mut s = Sampler::new(seed, 0);
        let q = s.generic_q();
        let c = Composition::new(2, vec![n]).unwrap();
        let t = VariableAssignment::sample(&c, &mut s, &q, &[]);
        let g = offshell::qsym::ProbeFunction::sample(&[n], &mut s);
        let checks = offshell::qsym::check_sym_of_q_symmetric(&g, &t, &q).unwrap();
        prop_assert!(checks.iter().all(|c| c.pass));
    }
}
