//! Associated Laguerre polynomials and displaced-Fock-state overlaps.
//!
//! Only the two functions the closed-form spectra actually need. The
//! Laguerre evaluation uses the upward three-term recurrence in the degree,
//! which is stable for the degrees (≲ 60) and arguments (≲ 16) reached at
//! couplings g/ω ≤ 2; the closed binomial sum would overflow long before.

/// Associated Laguerre polynomial L_n^k(x) for x ≥ 0.
///
/// Recurrence: (n+1) L_{n+1}^k = (2n+k+1−x) L_n^k − (n+k) L_{n−1}^k.
pub fn laguerre(n: usize, k: usize, x: f64) -> f64 {
    assert!(x >= 0.0, "laguerre argument must be non-negative");
    let kf = k as f64;
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0; // L_0^k
    let mut cur = 1.0 + kf - x; // L_1^k
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + kf + 1.0 - x) * cur - (jf + kf) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Overlap ⟨m| exp(α(a† − a)) |n⟩ of Fock states under a real displacement.
///
/// For m ≥ n this is √(n!/m!) α^{m−n} e^{−α²/2} L_n^{m−n}(α²); the m < n
/// case follows from ⟨m|D(α)|n⟩ = (−1)^{m+n} ⟨n|D(α)|m⟩. The factorial
/// ratio and the power of α are accumulated as one running product so
/// nothing overflows.
pub fn displaced_fock_overlap(m: usize, n: usize, alpha: f64) -> f64 {
    if m < n {
        let sign = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
        return sign * displaced_fock_overlap(n, m, alpha);
    }
    let x = alpha * alpha;
    // sqrt(n!/m!) * alpha^(m-n)
    let mut prefactor = 1.0;
    for j in (n + 1)..=m {
        prefactor *= alpha / (j as f64).sqrt();
    }
    prefactor * (-x / 2.0).exp() * laguerre(n, m - n, x)
}
