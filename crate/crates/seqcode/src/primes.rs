//! Incremental prime table shared by the coding functions.

use std::sync::{Mutex, OnceLock};

fn cache() -> &'static Mutex<Vec<u64>> {
    static CACHE: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![2, 3, 5, 7, 11, 13]))
}

/// The i-th prime: prime(0) = 2, prime(1) = 3, prime(2) = 5, …
pub fn prime(i: usize) -> u64 {
    let mut list = cache().lock().unwrap();
    while list.len() <= i {
        push_next(&mut list);
    }
    list[i]
}

/// Position of `q` in the prime sequence, if `q` is prime.
pub fn prime_index(q: u64) -> Option<usize> {
    if q < 2 {
        return None;
    }
    let mut list = cache().lock().unwrap();
    while *list.last().unwrap() < q {
        push_next(&mut list);
    }
    list.binary_search(&q).ok()
}

fn push_next(list: &mut Vec<u64>) {
    let mut candidate = list.last().unwrap() + 2;
    loop {
        // The cached list always reaches past sqrt(candidate), so trial
        // division against it is a complete primality test here.
        let mut composite = false;
        for &p in list.iter() {
            if p * p > candidate {
                break;
            }
            if candidate % p == 0 {
                composite = true;
                break;
            }
        }
        if !composite {
            list.push(candidate);
            return;
        }
        candidate += 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes() {
        let expected = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
        for (i, &p) in expected.iter().enumerate() {
            assert_eq!(prime(i), p);
        }
    }

    #[test]
    fn index_of_prime() {
        assert_eq!(prime_index(2), Some(0));
        assert_eq!(prime_index(13), Some(5));
        assert_eq!(prime_index(1), None);
        assert_eq!(prime_index(15), None);
        assert_eq!(prime_index(104_729), Some(9_999));
    }
}
