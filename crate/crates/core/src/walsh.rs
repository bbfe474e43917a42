//! Fast Walsh–Hadamard transform and the symplectic character transform on Pauli indices.

use crate::scalar::Scalar;

/// In-place unnormalized Walsh–Hadamard transform:
/// `v[b] ← Σ_a (−1)^{popcount(a & b)} v[a]`. Length must be a power of two.
pub fn fwht<T: Scalar>(v: &mut [T]) {
    let len = v.len();
    assert!(len.is_power_of_two(), "transform length must be a power of two");
    let mut h = 1;
    while h < len {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, t) = (a.clone() + b.clone(), a.clone() - b.clone());
                *a = s;
                *b = t;
            }
        }
        h *= 2;
    }
}

/// Exchanges the x and z halves of a canonical Pauli index.
#[inline]
pub fn swap_halves(n: usize, idx: usize) -> usize {
    let mask = (1usize << n) - 1;
    (idx >> n) | ((idx & mask) << n)
}

/// `out[P] = Σ_Q (−1)^{Q.P} v[Q]` with the symplectic pairing.
///
/// The symplectic pairing of `Q` and `P` is the ordinary bit dot product of
/// `idx(Q)` with `swap_halves(idx(P))`, so this is a standard transform
/// followed by an index permutation.
pub fn symplectic_transform<T: Scalar>(n: usize, v: &[T]) -> Vec<T> {
    assert_eq!(v.len(), 1 << (2 * n), "vector length must be 4^n");
    let mut w = v.to_vec();
    fwht(&mut w);
    (0..w.len()).map(|p| w[swap_halves(n, p)].clone()).collect()
}
