//! Cantor pairing on the naturals.

/// `⟨x, y⟩ = (x + y)(x + y + 1)/2 + y`, so `⟨0, 0⟩ = 0`.
///
/// Panics on overflow; callers stay far below `2^32` per coordinate.
pub fn pair(x: u64, y: u64) -> u64 {
    let s = x.checked_add(y).expect("pairing overflow");
    let tri = s
        .checked_mul(s + 1)
        .map(|t| t / 2)
        .expect("pairing overflow");
    tri.checked_add(y).expect("pairing overflow")
}

/// Inverse of [`pair`].
pub fn unpair(z: u64) -> (u64, u64) {
    // w is the largest value with w(w+1)/2 <= z.
    let mut w = ((8u128 * z as u128 + 1).isqrt() as u64 - 1) / 2;
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    let y = z - w * (w + 1) / 2;
    (w - y, y)
}

/// First projection `(z)_0`.
pub fn left(z: u64) -> u64 {
    unpair(z).0
}

/// Second projection `(z)_1`.
pub fn right(z: u64) -> u64 {
    unpair(z).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn origin_is_zero() {
        assert_eq!(pair(0, 0), 0);
        assert_eq!(unpair(0), (0, 0));
    }

    #[test]
    fn enumerates_diagonals_in_order() {
        // Walk diagonals independently and compare codes.
        let mut code = 0;
        for s in 0..40u64 {
            for y in 0..=s {
                assert_eq!(pair(s - y, y), code);
                assert_eq!(unpair(code), (s - y, y));
                code += 1;
            }
        }
    }

    proptest! {
        #[test]
        fn roundtrip(x in 0u64..1_000_000, y in 0u64..1_000_000) {
            prop_assert_eq!(unpair(pair(x, y)), (x, y));
        }

        #[test]
        fn unpair_then_pair(z in 0u64..u32::MAX as u64) {
            let (x, y) = unpair(z);
            prop_assert_eq!(pair(x, y), z);
        }
    }
}
