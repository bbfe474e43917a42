//! Euclidean projection onto the probability simplex.

use crate::error::{Error, Result};
use crate::scalar::{max_of, Scalar};

/// Closest point (in ℓ₂) of `{r ≥ 0, Σ r = 1}` to `v`.
///
/// Sort-and-threshold: with `u` sorted descending, the support size is the
/// largest `k` with `u_k > (Σ_{i≤k} u_i − 1)/k`, and the answer is
/// `max(v − θ, 0)` for the corresponding threshold `θ`. Only field
/// operations are used, so the result is exact for rational inputs.
pub fn project_to_simplex<T: Scalar>(v: &[T]) -> Result<Vec<T>> {
    if v.is_empty() {
        return Err(Error::InvalidArgument("cannot project an empty vector".into()));
    }
    if let Some(i) = v.iter().position(|x| !x.is_finite_value()) {
        return Err(Error::NonFinite(i));
    }
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("finite values are ordered"));
    let mut prefix = T::zero();
    let mut theta = T::zero();
    for (k, uk) in u.iter().enumerate() {
        prefix += uk.clone();
        let candidate = (prefix.clone() - T::one()) / T::from_usize_exact(k + 1);
        if *uk > candidate {
            theta = candidate;
        } else {
            break;
        }
    }
    Ok(v.iter().map(|x| max_of(x.clone() - theta.clone(), T::zero())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};

    fn r(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(a, b)| rational(a, b)).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(project_to_simplex(&r(&[(3, 5), (3, 5), (-1, 5)])).unwrap(), r(&[(1, 2), (1, 2), (0, 1)]));
        assert_eq!(project_to_simplex(&[2.0, 0.0, 0.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
        let member = r(&[(1, 3), (1, 6), (1, 2)]);
        assert_eq!(project_to_simplex(&member).unwrap(), member);
    }

    #[test]
    fn errors() {
        assert!(matches!(project_to_simplex(&[0.5, f64::NAN]), Err(Error::NonFinite(1))));
        assert!(project_to_simplex::<f64>(&[]).is_err());
    }
}
