use offshell::exact::Sampler;
use offshell::gauss::{
    check_composed_currents, check_current_relations, check_current_serre, gauss_extract,
    reconstruct_l, Flavor,
};
use offshell::rep::{check_module, tensor_module, vector_rep, AffineModule};
use offshell::rmatrix::check_ybe;
use offshell::{Check, Scalar};

fn modules(sampler: &mut Sampler) -> Vec<AffineModule> {
    let mut out = Vec::new();
    for n in 2..=4 {
        let q = sampler.generic_q();
        let v = vector_rep(n, &q).unwrap();
        let a = AffineModule::evaluation(v.clone(), &sampler.scalar()).unwrap();
        let b = AffineModule::evaluation(v, &sampler.scalar()).unwrap();
        out.push(a.clone());
        if n <= 3 {
            out.push(AffineModule::tensor(&a, &b).unwrap());
        }
    }
    out
}

fn all_pass(cs: &[Check]) {
    for c in cs {
        assert!(c.pass, "{c:?}");
    }
}

#[test]
fn yang_baxter_samples() {
    let mut s = Sampler::new(1, 0);
    for n in 2..=4 {
        for _ in 0..10 {
            let q = s.generic_q();
            let (u, v, w) = (s.scalar(), s.scalar(), s.scalar());
            match check_ybe(n, &q, &u, &v, &w) {
                Ok(ok) => assert!(ok),
                Err(e) => assert!(e.needs_resample()),
            }
        }
    }
}

#[test]
fn rll_serre_and_zero_modes() {
    let mut s = Sampler::new(2, 0);
    for m in modules(&mut s) {
        all_pass(&check_module(&m.rep).unwrap());
        all_pass(&m.check_zero_modes().unwrap());
        all_pass(&[m.check_constant_part().unwrap()]);
        all_pass(&m.check_rll_all(&s.scalar(), &s.scalar()).unwrap());
    }
}

#[test]
fn tensor_of_three_has_serre() {
    let q = Scalar::frac(7, 5).unwrap();
    let v = vector_rep(2, &q).unwrap();
    let m = tensor_module(&tensor_module(&v, &v).unwrap(), &v).unwrap();
    all_pass(&check_module(&m).unwrap());
}

#[test]
fn gauss_round_trips() {
    let mut s = Sampler::new(3, 0);
    for m in modules(&mut s) {
        for flavor in [Flavor::First, Flavor::Second] {
            let t = s.scalar();
            let g = gauss_extract(&m.lplus, &m.lminus, &t, flavor).unwrap();
            let (p, mi) = reconstruct_l(&g).unwrap();
            assert_eq!(p, m.lplus.eval(&t).unwrap());
            assert_eq!(mi, m.lminus.eval(&t).unwrap());
        }
    }
}

#[test]
fn current_relations() {
    let mut s = Sampler::new(4, 0);
    for m in modules(&mut s) {
        let (z, w, z2) = (s.scalar(), s.scalar(), s.scalar());
        for flavor in [Flavor::First, Flavor::Second] {
            all_pass(&check_current_relations(&m, &z, &w, flavor).unwrap());
            all_pass(&check_current_serre(&m, &z, &z2, &w, flavor).unwrap());
        }
        all_pass(&check_composed_currents(&m, &z, &w).unwrap());
    }
}
