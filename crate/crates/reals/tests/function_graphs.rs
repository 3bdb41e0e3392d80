//! Applying, restricting and extending partial function graphs, checked
//! against the functions they are supposed to denote.

use reals::{
    affine_graph, apply_candidates, identity_graph, le_violation, pow2, rat, rat_int, real_apply,
    real_compare, real_extend_clamp, real_restrict, CSReal, CompareOutcome, PartialRealFun, Rat,
    Real, RealError,
};

fn assert_not_separated(x: &Real, q: &Rat, precision: usize) {
    let outcome = real_compare(x, &Real::from_rat(q), precision);
    assert!(
        matches!(outcome, CompareOutcome::NotSeparated { .. }),
        "{} separated from {}: {:?}",
        x.name(),
        reals::fmt_rat(q),
        outcome
    );
}

#[test]
fn the_identity_applies_to_deep_precision() {
    let x = Real::from_rat(&rat(1, 2));
    let y = real_apply(&identity_graph(), &x, 15, 64).unwrap();
    y.check_invariants(15).unwrap();
    assert_not_separated(&y, &rat(1, 2), 15);
}

#[test]
fn affine_maps_land_on_their_closed_forms() {
    let double_shift = affine_graph(&rat_int(2), &rat_int(1), None);
    let y = real_apply(&double_shift, &Real::from_rat(&rat(1, 2)), 15, 64).unwrap();
    y.check_invariants(12).unwrap();
    assert_not_separated(&y, &rat_int(2), 15);

    let reflect = affine_graph(&rat(-3, 1), &rat_int(2), None);
    let z = real_apply(&reflect, &Real::from_rat(&rat(1, 3)), 10, 64).unwrap();
    z.check_invariants(10).unwrap();
    assert_not_separated(&z, &rat_int(1), 10);
}

#[test]
fn applications_compose_with_arithmetic() {
    // 2 * (2x + 1) + 1 at x = 1/4 is 4.
    let phi = affine_graph(&rat_int(2), &rat_int(1), None);
    let once = real_apply(&phi, &Real::from_rat(&rat(1, 4)), 12, 64).unwrap();
    let twice = real_apply(&phi, &once, 12, 64).unwrap();
    twice.check_invariants(10).unwrap();
    assert_not_separated(&twice, &rat_int(4), 10);
}

#[test]
fn a_graph_with_one_wide_entry_times_out_at_the_stage_that_needs_more() {
    let cell = reals::parse_seg("[1/4, 3/4]").unwrap();
    let phi = PartialRealFun::from_entries("single cell", vec![(cell.clone(), cell)]);
    let err = real_apply(&phi, &Real::from_rat(&rat(1, 2)), 2, 8).unwrap_err();
    assert_eq!(err, RealError::ApplyTimeout { precision: 1, budget: 8 });
}

#[test]
fn restriction_keeps_members_and_starves_outsiders() {
    let h = CSReal::from_rats("origin", vec![rat_int(0)]);
    let psi = real_restrict(&identity_graph(), &h);

    let at_member = real_apply(&psi, &Real::from_rat(&rat_int(0)), 8, 64).unwrap();
    at_member.check_invariants(8).unwrap();
    assert_not_separated(&at_member, &rat_int(0), 10);

    let outside = real_apply(&psi, &Real::from_rat(&rat_int(1)), 4, 64);
    assert!(matches!(outside, Err(RealError::ApplyTimeout { .. })));
}

#[test]
fn clamped_extension_is_total_and_agrees_on_the_middle() {
    let phi = identity_graph();
    let psi = real_extend_clamp(&phi, &Real::from_rat(&rat_int(0)), &Real::from_rat(&rat_int(1)));

    let below = real_apply(&psi, &Real::from_rat(&rat_int(-1)), 10, 64).unwrap();
    below.check_invariants(8).unwrap();
    assert_not_separated(&below, &rat_int(0), 10);

    let above = real_apply(&psi, &Real::from_rat(&rat_int(2)), 10, 64).unwrap();
    above.check_invariants(8).unwrap();
    assert_not_separated(&above, &rat_int(1), 10);

    let middle = real_apply(&psi, &Real::from_rat(&rat(1, 2)), 10, 64).unwrap();
    middle.check_invariants(8).unwrap();
    assert_not_separated(&middle, &rat(1, 2), 10);
}

#[test]
fn candidate_entries_are_mutually_consistent() {
    let phi = identity_graph();
    let x = Real::from_rat(&rat(1, 2));
    for stage in 0..6 {
        let query = x.approx(x.modulus(stage + 6));
        let candidates = apply_candidates(&phi, &query, stage, 64).unwrap();
        assert!(!candidates.is_empty(), "stage {stage} found no candidates");
        let positions: Vec<_> = candidates.iter().map(|(p, _, _)| p.clone()).collect();
        phi.check_consistency(&positions).unwrap();
        for (_, r, s) in &candidates {
            assert!(query.inside(r));
            assert!(r.inside(s));
        }
    }
}

#[test]
fn nearby_inputs_get_nearby_outputs() {
    // Continuity in action: outputs at x and at x + 2^-12 cannot drift
    // further apart than the input gap plus both output widths.
    let phi = affine_graph(&rat_int(2), &rat_int(1), None);
    let x = Real::from_rat(&rat(1, 2));
    let x_nudged = Real::from_rat(&(rat(1, 2) + pow2(-12)));
    let y = real_apply(&phi, &x, 8, 64).unwrap();
    let y_nudged = real_apply(&phi, &x_nudged, 8, 64).unwrap();
    assert!(matches!(
        real_compare(&y, &y_nudged, 8),
        CompareOutcome::NotSeparated { .. }
    ));
    let gap = reals::real_abs(&reals::real_arith(reals::RealOp::Sub, &y, &y_nudged));
    assert_eq!(le_violation(&gap, &Real::from_rat(&pow2(-8)), 6), None);
}

#[test]
fn application_respects_the_argument_not_its_presentation() {
    // The same rational presented with different names and moduli must
    // land on inseparable outputs.
    let phi = identity_graph();
    let plain = Real::from_rat(&rat(1, 4));
    let shifted = reals::real_arith(
        reals::RealOp::Add,
        &Real::from_rat(&rat(1, 8)),
        &Real::from_rat(&rat(1, 8)),
    );
    let via_plain = real_apply(&phi, &plain, 10, 64).unwrap();
    let via_shifted = real_apply(&phi, &shifted, 10, 64).unwrap();
    assert!(matches!(
        real_compare(&via_plain, &via_shifted, 10),
        CompareOutcome::NotSeparated { .. }
    ));
}

#[test]
fn hint_positions_are_real_graph_positions() {
    // Hints only propose; every proposed position must answer through the
    // ordinary enumerator, so hinted and unhinted graphs agree.
    let phi = identity_graph();
    let x = Real::from_rat(&rat(3, 8));
    let query = x.approx(x.modulus(9));
    for p in phi.hint_positions(&query, 3) {
        let entry = phi.entry_at(&p).unwrap();
        assert!(entry.is_some(), "hint at {p} does not enumerate");
    }
    assert!(!phi.hint_positions(&query, 3).is_empty());
}
