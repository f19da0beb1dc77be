use offshell::bethe::{cross_validate, with_resampling, BetheTask, Route, DEFAULT_MAX_CELLS};
use offshell::exact::Sampler;
use offshell::qsym::{Composition, VariableAssignment};
use offshell::rep::{vector_rep, AffineModule};
use offshell::Scalar;

fn evaluation_task(n: usize, parts: &[usize], sampler: &mut Sampler) -> BetheTask {
    let q = sampler.generic_q();
    let z = sampler.scalar();
    let module = AffineModule::evaluation(vector_rep(n, &q).unwrap(), &z).unwrap();
    let comp = Composition::new(n, parts.to_vec()).unwrap();
    let blank = VariableAssignment::new(
        &comp,
        parts.iter().map(|&k| vec![Scalar::one(); k]).collect(),
    )
    .unwrap();
    BetheTask::new(comp, module, blank, Route::ALL.to_vec(), DEFAULT_MAX_CELLS).unwrap()
}

fn tensor_task(n: usize, factors: usize, parts: &[usize], sampler: &mut Sampler) -> BetheTask {
    let q = sampler.generic_q();
    let mut module =
        AffineModule::evaluation(vector_rep(n, &q).unwrap(), &sampler.scalar()).unwrap();
    for _ in 1..factors {
        let next = AffineModule::evaluation(vector_rep(n, &q).unwrap(), &sampler.scalar()).unwrap();
        module = AffineModule::tensor(&module, &next).unwrap();
    }
    let comp = Composition::new(n, parts.to_vec()).unwrap();
    let blank = VariableAssignment::new(
        &comp,
        parts.iter().map(|&k| vec![Scalar::one(); k]).collect(),
    )
    .unwrap();
    BetheTask::new(
        comp,
        module,
        blank,
        vec![Route::Trace, Route::W, Route::WHat],
        DEFAULT_MAX_CELLS,
    )
    .unwrap()
}

#[test]
fn all_routes_agree_on_vector_evaluation_modules() {
    let cases: &[(usize, &[usize])] = &[
        (2, &[1]),
        (2, &[2]),
        (3, &[1, 1]),
        (3, &[2, 1]),
        (3, &[1, 2]),
        (4, &[1, 1, 1]),
    ];
    for (k, (n, parts)) in cases.iter().enumerate() {
        let mut sampler = Sampler::new(11, k as u64);
        let task = evaluation_task(*n, parts, &mut sampler);
        let (t, cv) = with_resampling(&task, &mut sampler, 5, cross_validate)
            .unwrap()
            .unwrap();
        assert!(cv.pass(), "{}: {:?}", t.fingerprint(), cv.mismatch);
    }
}

#[test]
fn weight_routes_agree_on_tensor_modules() {
    let cases: &[(usize, usize, &[usize])] =
        &[(2, 2, &[1]), (2, 2, &[2]), (3, 2, &[1, 1]), (2, 3, &[2])];
    for (k, (n, f, parts)) in cases.iter().enumerate() {
        let mut sampler = Sampler::new(12, k as u64);
        let task = tensor_task(*n, *f, parts, &mut sampler);
        let (t, cv) = with_resampling(&task, &mut sampler, 5, cross_validate)
            .unwrap()
            .unwrap();
        assert!(cv.pass(), "{}: {:?}", t.fingerprint(), cv.mismatch);
        assert!(
            cv.vectors
                .iter()
                .any(|v| v.coords.iter().any(|x| !x.is_zero())),
            "{}",
            t.fingerprint()
        );
    }
}
