use crate::error::{Error, Result};

/// Massart's form of the DKW bound: P(sup |F̂_k - F| >= eps) <= 2 e^{-2 k eps²}.
pub fn dkw_exceedance_bound(k: u64, epsilon: f64) -> f64 {
    (2.0 * (-2.0 * k as f64 * epsilon * epsilon).exp()).min(1.0)
}

/// Radius eps with 2 e^{-2 k eps²} = delta.
pub fn dkw_radius(k: u64, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * k as f64)).sqrt()
}

/// Smallest k with 2 e^{-2 k eps²} <= delta, i.e. ceil(ln(2/delta) / (2 eps²)).
pub fn dkw_sample_size(epsilon: f64, delta: f64) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: format!("must lie in (0, 1), got {epsilon}"),
        });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter {
            name: "delta",
            reason: format!("must lie in (0, 1), got {delta}"),
        });
    }
    let exact = (2.0 / delta).ln() / (2.0 * epsilon * epsilon);
    let mut k = exact.ceil().max(1.0) as u64;
    // Guard the ceiling against rounding in `exact`.
    while k > 1 && 2.0 * (-2.0 * (k - 1) as f64 * epsilon * epsilon).exp() <= delta {
        k -= 1;
    }
    while 2.0 * (-2.0 * k as f64 * epsilon * epsilon).exp() > delta {
        k += 1;
    }
    Ok(k)
}
