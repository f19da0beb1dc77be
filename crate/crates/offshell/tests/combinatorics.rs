use std::collections::{BTreeMap, BTreeSet};

use offshell::exact::Sampler;
use offshell::qsym::{
    coeff_x, coeff_y, enumerate_admissible_m, enumerate_admissible_s, Composition,
    VariableAssignment,
};
use offshell::Scalar;

/// Every assignment of `0..=bound(key)` to `keys`.
fn grid(
    keys: &[(usize, usize)],
    bound: impl Fn(usize, usize) -> usize,
) -> Vec<BTreeMap<(usize, usize), usize>> {
    let mut out = vec![BTreeMap::new()];
    for &(b, a) in keys {
        let mut next = Vec::new();
        for m in &out {
            for v in 0..=bound(b, a) {
                let mut m2 = m.clone();
                m2.insert((b, a), v);
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

fn brute_s(c: &Composition) -> BTreeSet<BTreeMap<(usize, usize), usize>> {
    let n = c.rank();
    let keys: Vec<_> = (1..n).flat_map(|b| (1..=b).map(move |a| (b, a))).collect();
    grid(&keys, |_, a| c.part(a))
        .into_iter()
        .filter(|s| {
            (1..n).all(|a| (a..n).map(|b| s[&(b, a)]).sum::<usize>() == c.part(a))
                && (1..n).all(|b| (2..=b).all(|a| s[&(b, a - 1)] <= s[&(b, a)]))
        })
        .collect()
}

fn brute_m(c: &Composition) -> BTreeSet<BTreeMap<(usize, usize), usize>> {
    let n = c.rank();
    let keys: Vec<_> = (1..n).flat_map(|b| (b..n).map(move |a| (b, a))).collect();
    grid(&keys, |_, a| c.part(a))
        .into_iter()
        .filter(|m| {
            (1..n).all(|a| (1..=a).map(|b| m[&(b, a)]).sum::<usize>() == c.part(a))
                && (1..n).all(|b| (b + 1..n).all(|a| m[&(b, a - 1)] >= m[&(b, a)]))
        })
        .collect()
}

#[test]
fn enumeration_matches_grid_search() {
    for n in 2..=4 {
        for c in Composition::all_up_to(n, 0, 6) {
            let s = enumerate_admissible_s(&c);
            let got: BTreeSet<_> = s.iter().map(|x| x.entries().clone()).collect();
            assert_eq!(got.len(), s.len(), "duplicates for {c}");
            assert_eq!(got, brute_s(&c), "s for {c}");
            let m = enumerate_admissible_m(&c);
            let got: BTreeSet<_> = m.iter().map(|x| x.entries().clone()).collect();
            assert_eq!(got.len(), m.len(), "duplicates for {c}");
            assert_eq!(got, brute_m(&c), "m for {c}");
        }
    }
}

#[test]
fn prefix_sums_reach_totals() {
    for c in Composition::all_up_to(4, 0, 5) {
        for m in enumerate_admissible_m(&c) {
            for a in 1..4 {
                assert_eq!(m.m_bold(a, a), c.part(a));
            }
        }
        for s in enumerate_admissible_s(&c) {
            for a in 1..4 {
                assert_eq!(s.s_bold(1, a), c.part(a));
                assert_eq!(s.s_tilde(a, a), 0);
                assert_eq!(s.s_tilde(4, a), c.part(a) - s.s_bold(4, a));
            }
        }
    }
}

#[test]
fn worked_example_coefficient() {
    let c = Composition::new(3, vec![1, 1]).unwrap();
    let (t1, t2) = (Scalar::frac(3, 7).unwrap(), Scalar::frac(11, 2).unwrap());
    let t = VariableAssignment::new(&c, vec![vec![t1.clone()], vec![t2.clone()]]).unwrap();
    let q = Scalar::int(5);
    let ms = enumerate_admissible_m(&c);
    let m = ms.iter().find(|m| m.get(1, 2) == 1).unwrap();
    let r = &t2 / &t1;
    assert_eq!(coeff_y(m, &t, &q).unwrap(), &r / (Scalar::one() - &r));
    let other = ms.iter().find(|m| m.get(1, 2) == 0).unwrap();
    assert_eq!(coeff_y(other, &t, &q).unwrap(), Scalar::one());
}

#[test]
fn rank_two_coefficients_are_one() {
    let c = Composition::new(2, vec![3]).unwrap();
    let mut s = Sampler::new(9, 0);
    let q = s.generic_q();
    let t = VariableAssignment::sample(&c, &mut s, &q, &[]);
    for m in enumerate_admissible_m(&c) {
        assert_eq!(coeff_y(&m, &t, &q).unwrap(), Scalar::one());
    }
    for x in enumerate_admissible_s(&c) {
        assert_eq!(coeff_x(&x, &t, &q).unwrap(), Scalar::one());
    }
}

/// Independent evaluator: walks each type-`a` variable once and reads off
/// which block of the triangular matrix it sits in.
fn y_by_blocks(
    m: &offshell::qsym::AdmissibleM,
    t: &VariableAssignment,
    q: &Scalar,
    c: &Composition,
) -> Scalar {
    let n = c.rank();
    let qi = Scalar::one() / q;
    let mut out = Scalar::one();
    for a in 2..n {
        // Variable j of type a (1-based) belongs to block b when
        // 𝐦^{b−1}_a < j ≤ 𝐦^b_a; its partner of type a−1 is at the same
        // distance from the top of block b.
        let mut top_a = 0;
        let mut top_prev = 0;
        for b in 1..a {
            top_a += m.get(b, a);
            top_prev += m.get(b, a - 1);
            for j in (top_a - m.get(b, a) + 1)..=top_a {
                let partner = top_prev - (top_a - j);
                let x = t.get(a, j).clone();
                let y = t.get(a - 1, partner).clone();
                out = out * (&x / &y) / (Scalar::one() - &x / &y);
                for l2 in partner + 1..=c.part(a - 1) {
                    let r = &x / t.get(a - 1, l2);
                    out = out * (&qi - q * &r) / (Scalar::one() - r);
                }
            }
        }
    }
    out
}

#[test]
fn y_coefficient_matches_block_walk() {
    let mut s = Sampler::new(10, 0);
    for c in [vec![1, 1, 1], vec![2, 1, 1], vec![1, 2, 2], vec![2, 2, 1]] {
        let c = Composition::new(4, c).unwrap();
        let q = s.generic_q();
        let t = VariableAssignment::sample(&c, &mut s, &q, &[]);
        for m in enumerate_admissible_m(&c) {
            assert_eq!(coeff_y(&m, &t, &q).unwrap(), y_by_blocks(&m, &t, &q, &c));
        }
    }
}
