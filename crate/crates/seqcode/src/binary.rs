//! Block coding of arbitrary sequences over the binary alphabet.

use crate::{decode, encode, FinSeq, Nat, SeqCode, SeqError};
use num_traits::{One, ToPrimitive, Zero};

/// Recodes a sequence over {0,1}: each item n becomes a block of n zeros
/// followed by a single 1, so ⟨2⟩ ↦ ⟨0,0,1⟩ and ⟨1,0⟩ ↦ ⟨0,1,1⟩.
pub fn bin_encode(a: &SeqCode) -> SeqCode {
    let mut out: Vec<Nat> = Vec::new();
    for item in decode(a).items() {
        let n = item
            .to_usize()
            .expect("block of zeros too large to materialize");
        out.extend(std::iter::repeat(Nat::zero()).take(n));
        out.push(Nat::one());
    }
    encode(&FinSeq::new(out))
}

/// Number of 1s in a binary sequence code; rejects any item above 1.
pub fn sharp(b: &SeqCode) -> Result<Nat, SeqError> {
    let items = decode(b);
    let one = Nat::one();
    let mut count = Nat::zero();
    for (index, item) in items.items().iter().enumerate() {
        if *item > one {
            return Err(SeqError::NonBinary {
                index,
                item: item.clone(),
            });
        }
        if item.is_one() {
            count += Nat::one();
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{length_code, nat};

    #[test]
    fn frozen_values() {
        assert_eq!(bin_encode(&nat(0)), nat(0));
        let two = encode(&FinSeq::from_u64s(&[2]));
        assert_eq!(bin_encode(&two), encode(&FinSeq::from_u64s(&[0, 0, 1])));
        let one_zero = encode(&FinSeq::from_u64s(&[1, 0]));
        assert_eq!(
            bin_encode(&one_zero),
            encode(&FinSeq::from_u64s(&[0, 1, 1]))
        );
    }

    #[test]
    fn sharp_counts_ones() {
        let code = encode(&FinSeq::from_u64s(&[0, 1, 1]));
        assert_eq!(sharp(&code), Ok(nat(2)));
        assert_eq!(sharp(&nat(0)), Ok(nat(0)));
    }

    #[test]
    fn sharp_rejects_non_binary() {
        let code = encode(&FinSeq::from_u64s(&[0, 2]));
        assert_eq!(
            sharp(&code),
            Err(SeqError::NonBinary {
                index: 1,
                item: nat(2)
            })
        );
    }

    #[test]
    fn sharp_of_bin_encode_is_length() {
        let mut distinct = std::collections::HashSet::new();
        for a in 0u64..200 {
            let a = nat(a);
            let b = bin_encode(&a);
            assert_eq!(sharp(&b), Ok(Nat::from(length_code(&a))));
            assert!(distinct.insert(b), "bin_encode collides at {a}");
        }
    }
}
