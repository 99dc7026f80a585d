/// Probabilists' Hermite polynomial `H_k(x)`, defined by
/// `H_k φ = (-d/dx)^k φ`, via `H_{k+1} = x H_k - k H_{k-1}`.
pub fn hermite(k: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if k == 0 {
        return prev;
    }
    for j in 1..k {
        let next = x * cur - j as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `d^m Φ / dx^m = (-1)^{m-1} H_{m-1} φ` for `m ≥ 1`.
pub fn cdf_derivative(m: usize, x: f64) -> f64 {
    assert!(m >= 1, "zeroth derivative of Phi is Phi itself");
    let sign = if (m - 1) % 2 == 0 { 1.0 } else { -1.0 };
    sign * hermite(m - 1, x) * crate::normal::pdf(x)
}
