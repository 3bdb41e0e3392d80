//! Applying machine-derived bar functions: budgeted application gives exact
//! answers where the graph is listed at feasible positions and honest
//! timeouts where it is not.

use contfun::{apply_n, uc_modulus_search, ApplyResult, ContfunError, PartialNFun};
use csets::{dini_build, fan_manifest, first_hit_fn, CSSet, Fan};
use kleene::{avoid_finite, bar_b, bar_d};
use seqcode::{nat, Nat};
use streams::{project, DecidableSet, EnumerableSet, SeqOracle};

fn machine_bar(name: &str, f: impl Fn(&Nat) -> Result<bool, kleene::KleeneError> + Send + Sync + 'static)
-> DecidableSet {
    DecidableSet::new(SeqOracle::from_rule(name.to_string(), move |s| {
        nat(u64::from(matches!(f(s), Ok(true))))
    }))
}

#[test]
fn the_output_bar_counts_the_zero_path_at_depth_two() {
    let bar = machine_bar("halts-with-output-zero", bar_d);
    let phi = PartialNFun::new(EnumerableSet::new(first_hit_fn(&bar, &CSSet::cantor())));
    let got = apply_n(&phi, &SeqOracle::zero(), 10).unwrap();
    let ApplyResult::Value { value, certificate } = got else {
        panic!("the zero path runs straight into the output bar");
    };
    assert_eq!(value, nat(2));
    assert_eq!(certificate.prefix_len, 2);
}

#[test]
fn modulus_search_times_out_on_the_machine_avoiding_subtree() {
    let bar = machine_bar("halting-trace-bar", bar_b);
    let phi = PartialNFun::new(EnumerableSet::new(first_hit_fn(&bar, &CSSet::cantor())));
    let manifest = fan_manifest(&Fan::cantor(), &nat(1 << 40), 8).unwrap();
    let err = uc_modulus_search(&phi, &manifest, 8, 500).unwrap_err();
    // the first undecided leaf is the leftmost path avoiding the bar so
    // far: deeper hits on that subtree sit at infeasibly large positions
    let avoiding = avoid_finite(8).encode();
    assert_eq!(avoiding, nat(37));
    assert_eq!(
        err,
        ContfunError::ApplyTimeout {
            prefix: avoiding,
            budget: 500,
        }
    );
}

#[test]
fn staged_descent_functions_apply_stage_by_stage() {
    let bar = machine_bar("halting-trace-bar", bar_b);
    let staged = dini_build(&bar, &CSSet::cantor());
    let avoiding = SeqOracle::from_table(avoid_finite(8).items().to_vec(), nat(0));
    for stage in 0..4u64 {
        let phi = PartialNFun::new(EnumerableSet::new(project(&staged, &nat(stage))));
        let on_zeros = apply_n(&phi, &SeqOracle::zero(), 10).unwrap();
        assert_eq!(on_zeros.value(), Some(&nat(2u64.saturating_sub(stage))));
        // the machine-avoiding path never meets a listed entry
        let on_avoiding = apply_n(&phi, &avoiding, 10).unwrap();
        assert_eq!(on_avoiding, ApplyResult::Timeout { scanned: 10 });
    }
}
