//! Randomized audits of the segment and real arithmetic against plain
//! rational arithmetic, which serves as the independent oracle: segments
//! must contain every pointwise result, and reals built from rationals
//! must stay within the promised width of the exact value.

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reals::{
    le_violation, pow2, rat, real_arith, real_compare, CompareOutcome, Rat, Real, RealOp, Seg,
    SegOp,
};

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    let num = rng.gen_range(-48i64..=48);
    let den = rng.gen_range(1i64..=16);
    rat(num, den)
}

fn random_seg(rng: &mut ChaCha8Rng) -> Seg {
    let a = random_rat(rng);
    let b = random_rat(rng);
    if a <= b {
        Seg::new(a, b).unwrap()
    } else {
        Seg::new(b, a).unwrap()
    }
}

/// A point of a segment chosen by a random convex weight.
fn random_point(rng: &mut ChaCha8Rng, s: &Seg) -> Rat {
    let w = rat(rng.gen_range(0i64..=8), 8);
    s.lo() * (rat(1, 1) - &w) + s.hi() * w
}

fn pointwise(op: SegOp, u: &Rat, v: &Rat) -> Rat {
    match op {
        SegOp::Add => u + v,
        SegOp::Sub => u - v,
        SegOp::Mul => u * v,
        SegOp::Min => u.min(v).clone(),
        SegOp::Max => u.max(v).clone(),
    }
}

#[test]
fn segment_operations_contain_every_pointwise_result() {
    let mut rng = ChaCha8Rng::seed_from_u64(501);
    let ops = [SegOp::Add, SegOp::Sub, SegOp::Mul, SegOp::Min, SegOp::Max];
    let mut violations = 0usize;
    for case in 0..1000 {
        let s = random_seg(&mut rng);
        let t = random_seg(&mut rng);
        let op = ops[case % ops.len()];
        let out = reals::seg_arith(op, &s, &t);
        for _ in 0..4 {
            let u = random_point(&mut rng, &s);
            let v = random_point(&mut rng, &t);
            if !out.contains_rat(&pointwise(op, &u, &v)) {
                violations += 1;
            }
        }
    }
    assert_eq!(violations, 0, "segment arithmetic let a pointwise result escape");
}

#[test]
fn real_arithmetic_matches_exact_rationals_at_precision_thirty() {
    let mut rng = ChaCha8Rng::seed_from_u64(502);
    let ops = [RealOp::Add, RealOp::Sub, RealOp::Mul, RealOp::Sup, RealOp::Inf];
    for case in 0..500 {
        let (qa, qb, qc) = (random_rat(&mut rng), random_rat(&mut rng), random_rat(&mut rng));
        let inner_op = ops[case % ops.len()];
        let outer_op = ops[(case / ops.len()) % ops.len()];
        let exact_inner = match inner_op {
            RealOp::Add => &qa + &qb,
            RealOp::Sub => &qa - &qb,
            RealOp::Mul => &qa * &qb,
            RealOp::Sup => qa.clone().max(qb.clone()),
            RealOp::Inf => qa.clone().min(qb.clone()),
        };
        let exact = match outer_op {
            RealOp::Add => &exact_inner + &qc,
            RealOp::Sub => &exact_inner - &qc,
            RealOp::Mul => &exact_inner * &qc,
            RealOp::Sup => exact_inner.clone().max(qc.clone()),
            RealOp::Inf => exact_inner.clone().min(qc.clone()),
        };
        let x = real_arith(
            outer_op,
            &real_arith(inner_op, &Real::from_rat(&qa), &Real::from_rat(&qb)),
            &Real::from_rat(&qc),
        );
        let s = x.approx(x.modulus(30));
        assert!(s.contains_rat(&exact), "case {case}: {s} misses the exact value");
        assert!(s.length() <= pow2(-30), "case {case}: segment wider than 2^-30");
        assert!((s.midpoint() - &exact).abs() <= pow2(-30));
    }
}

#[test]
fn derived_moduli_survive_invariant_audits_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(503);
    let ops = [RealOp::Add, RealOp::Sub, RealOp::Mul, RealOp::Sup, RealOp::Inf];
    for case in 0..200 {
        let x = Real::from_rat(&random_rat(&mut rng));
        let y = Real::from_rat(&random_rat(&mut rng));
        let z = real_arith(ops[case % ops.len()], &x, &y);
        z.check_invariants(8).unwrap();
    }
}

#[test]
fn envelopes_bound_both_arguments_and_comparisons_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(504);
    for _ in 0..100 {
        let (qa, qb, qc) = (random_rat(&mut rng), random_rat(&mut rng), random_rat(&mut rng));
        let (x, y, z) = (Real::from_rat(&qa), Real::from_rat(&qb), Real::from_rat(&qc));
        let sup = real_arith(RealOp::Sup, &x, &y);

        assert_eq!(le_violation(&x, &sup, 10), None);
        assert_eq!(le_violation(&y, &sup, 10), None);

        // sup(x, y) <= z exactly when both arguments are, so a violation
        // witness on one side must come with one on the other.
        let sup_le = le_violation(&sup, &z, 12).is_none();
        let both_le = qa.max(qb) <= qc;
        assert_eq!(sup_le, both_le);

        match real_compare(&x, &y, 12) {
            CompareOutcome::Less { .. } => assert!(qa < qb),
            CompareOutcome::Greater { .. } => assert!(qa > qb),
            CompareOutcome::NotSeparated { .. } => assert_eq!(qa, qb),
        }
    }
}
