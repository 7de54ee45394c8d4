//! Surjective pair coding on ℕ.
//!
//! The coding is the diagonal enumeration `⟨n,m⟩ = (n+m)(n+m+1)/2 + m`. It is
//! a bijection ℕ×ℕ → ℕ and satisfies `n, m ≤ ⟨n,m⟩`, which is what the
//! Σ⁰₁-to-decidable bar transform relies on.

/// `⟨n,m⟩`, or `None` when the code does not fit in a `u64`.
pub fn checked_pair(n: u64, m: u64) -> Option<u64> {
    let diag = n.checked_add(m)?;
    let tri = if diag % 2 == 0 {
        (diag / 2).checked_mul(diag.checked_add(1)?)?
    } else {
        diag.checked_mul(diag.checked_add(1)? / 2)?
    };
    tri.checked_add(m)
}

/// `⟨n,m⟩`.
///
/// Panics when the code overflows `u64`; overflow is never wrapped.
pub fn pair(n: u64, m: u64) -> u64 {
    checked_pair(n, m).unwrap_or_else(|| panic!("pair code <{n},{m}> overflows u64"))
}

/// `(j₀(c), j₁(c))`, the inverse of [`pair`].
pub fn unpair(code: u64) -> (u64, u64) {
    // Largest w with w(w+1)/2 <= code.
    let w = (((8 * code as u128 + 1).isqrt() - 1) / 2) as u64;
    let m = code - triangle(w).expect("w(w+1)/2 <= code fits in u64");
    (w - m, m)
}

pub fn first(code: u64) -> u64 {
    unpair(code).0
}

pub fn second(code: u64) -> u64 {
    unpair(code).1
}

fn triangle(w: u64) -> Option<u64> {
    if w.is_multiple_of(2) {
        (w / 2).checked_mul(w.checked_add(1)?)
    } else {
        w.checked_mul(w.checked_add(1)? / 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    /// Walks the diagonals directly: codes 0,1,2,... visit (0,0),(1,0),(0,1),(2,0),...
    fn diagonal_enumeration(count: usize) -> Vec<(u64, u64)> {
        let mut out = Vec::with_capacity(count);
        let mut diag = 0u64;
        while out.len() < count {
            for m in 0..=diag {
                out.push((diag - m, m));
                if out.len() == count {
                    break;
                }
            }
            diag += 1;
        }
        out
    }

    #[test]
    fn matches_enumeration_oracle() {
        let table = diagonal_enumeration(2000);
        assert_eq!(table[8], (1, 2));
        for (code, &(n, m)) in table.iter().enumerate() {
            assert_eq!(pair(n, m), code as u64);
            assert_eq!(unpair(code as u64), (n, m));
        }
    }

    #[test]
    fn examples() {
        assert_eq!(pair(0, 0), 0);
        assert_eq!(pair(1, 2), 8);
        assert_eq!(unpair(8), (1, 2));
        assert_eq!(unpair(3), (2, 0));
        assert_eq!(unpair(2), (0, 1));
    }

    #[test]
    fn round_trip_and_dominance() {
        for n in 0..=50 {
            for m in 0..=50 {
                let c = pair(n, m);
                assert_eq!(unpair(c), (n, m));
                assert!(n <= c && m <= c);
            }
        }
    }

    #[test]
    fn large_codes() {
        for code in [u64::MAX, u64::MAX - 1, 1 << 62, (1 << 53) + 1] {
            let (n, m) = unpair(code);
            assert_eq!(checked_pair(n, m), Some(code));
        }
        assert_eq!(checked_pair(u64::MAX, 1), None);
        assert_eq!(checked_pair(1 << 33, 1 << 33), None);
    }

    #[test]
    #[should_panic(expected = "overflows")]
    fn overflow_is_an_error() {
        pair(u64::MAX, u64::MAX);
    }
}
