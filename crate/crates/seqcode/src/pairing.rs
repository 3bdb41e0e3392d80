//! Cantor pairing on arbitrary-precision naturals.

use crate::Nat;
use num_traits::One;

/// pair(m,n) = (m+n)(m+n+1)/2 + m, a bijection ℕ×ℕ → ℕ.
pub fn pair(m: &Nat, n: &Nat) -> Nat {
    let s = m + n;
    (&s * (&s + Nat::one())) / Nat::from(2u32) + m
}

/// Inverse of [`pair`], recovered with an exact integer square root.
pub fn unpair(k: &Nat) -> (Nat, Nat) {
    let disc = Nat::from(8u32) * k + Nat::one();
    let w = (disc.sqrt() - Nat::one()) / Nat::from(2u32);
    let t = (&w * (&w + Nat::one())) / Nat::from(2u32);
    let m = k - &t;
    let n = &w - &m;
    (m, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;

    #[test]
    fn frozen_values() {
        assert_eq!(pair(&nat(0), &nat(0)), nat(0));
        assert_eq!(pair(&nat(0), &nat(1)), nat(1));
        assert_eq!(pair(&nat(1), &nat(0)), nat(2));
        assert_eq!(unpair(&pair(&nat(7), &nat(11))), (nat(7), nat(11)));
    }

    #[test]
    fn bijection_exhaustive_small() {
        let mut seen = std::collections::HashSet::new();
        for m in 0u64..=200 {
            for n in 0u64..=200 {
                let k = pair(&nat(m), &nat(n));
                assert!(seen.insert(k.clone()), "pair({m},{n}) collides");
                assert_eq!(unpair(&k), (nat(m), nat(n)));
            }
        }
    }

    #[test]
    fn surjective_initial_segment() {
        // Every k < 100 is hit by some (m,n).
        for k in 0u64..100 {
            let (m, n) = unpair(&nat(k));
            assert_eq!(pair(&m, &n), nat(k));
        }
    }
}
