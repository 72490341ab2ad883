use crate::empirical::Empirical1d;

/// sup_x |F̂(x) - F(x)| for a continuous target CDF `F`. Exact: the supremum is
/// attained at an order statistic from one side or the other.
pub fn kolmogorov_1d(emp: &Empirical1d, target_cdf: impl Fn(f64) -> f64) -> f64 {
    let k = emp.len() as f64;
    emp.sorted()
        .iter()
        .enumerate()
        .fold(0.0, |acc, (i, &x)| {
            let f = target_cdf(x);
            let above = ((i + 1) as f64 / k - f).abs();
            let below = (i as f64 / k - f).abs();
            acc.max(above).max(below)
        })
}

/// sup_x |F̂_a(x) - F̂_b(x)|, evaluated at every jump of either step function.
pub fn kolmogorov_two_sample(a: &Empirical1d, b: &Empirical1d) -> f64 {
    let (xa, xb) = (a.sorted(), b.sorted());
    let (ka, kb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut sup: f64 = 0.0;
    while i < xa.len() || j < xb.len() {
        let x = match (xa.get(i), xb.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        sup = sup.max((i as f64 / ka - j as f64 / kb).abs());
    }
    sup
}
