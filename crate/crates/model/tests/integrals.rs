//! Quadrature oracle: every Hermite-basis integral matrix must agree with
//! direct Gauss–Hermite numerical integration of the γ-scaled basis functions.
//! The quadrature path shares no code with the production ladder algebra.

use approx::assert_relative_eq;
use model::{
    one_body_matrix, position_matrix, position_squared_matrix, reduced_hamiltonian,
    two_body_tensor, ModelSpec,
};

/// Physicists' Hermite polynomial values H_0..H_{nmax}(u).
fn hermite_values(nmax: usize, u: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(nmax + 1);
    h.push(1.0);
    if nmax >= 1 {
        h.push(2.0 * u);
    }
    for n in 1..nmax {
        let next = 2.0 * u * h[n] - 2.0 * n as f64 * h[n - 1];
        h.push(next);
    }
    h
}

/// Gauss–Hermite nodes and weights for ∫ f(u) e^{−u²} du ≈ Σ w_i f(u_i).
/// Roots of H_n are found by bisection between the interlacing roots of
/// H_{n−1}, built up recursively from n = 1.
fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut roots: Vec<f64> = vec![];
    for k in 1..=n {
        let mut brackets = Vec::with_capacity(k + 1);
        // H_k has k real roots interlaced by the roots of H_{k−1}; pad the
        // bracket list with outer bounds that exceed the largest root.
        let bound = (2.0 * k as f64 + 2.0).sqrt() + 1.0;
        brackets.push(-bound);
        brackets.extend(roots.iter().copied());
        brackets.push(bound);
        let mut new_roots = Vec::with_capacity(k);
        for w in brackets.windows(2) {
            let (mut lo, mut hi) = (w[0], w[1]);
            let f = |u: f64| *hermite_values(k, u).last().unwrap();
            let (mut flo, fhi) = (f(lo), f(hi));
            assert!(flo * fhi < 0.0, "bracket failed for H_{k}");
            let _ = fhi;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fmid = f(mid);
                if flo * fmid <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fmid;
                }
            }
            new_roots.push(0.5 * (lo + hi));
        }
        roots = new_roots;
    }
    // w_i = 2^{n−1} n! √π / (n² H_{n−1}(x_i)²)
    let mut lognum = (n as f64 - 1.0) * std::f64::consts::LN_2 + 0.5 * std::f64::consts::PI.ln();
    for k in 1..=n {
        lognum += (k as f64).ln();
    }
    let weights = roots
        .iter()
        .map(|&x| {
            let hprev = hermite_values(n - 1, x)[n - 1];
            (lognum - 2.0 * (n as f64).ln() - 2.0 * hprev.abs().ln()).exp()
        })
        .collect();
    (roots, weights)
}

/// log of the normalization of φ_n(x) = N_n H_n(γx) e^{−γ²x²/2}, N_n = √(γ/(√π 2ⁿ n!)).
fn log_norm(gamma: f64, n: usize) -> f64 {
    let mut l = 0.5 * (gamma.ln() - 0.5 * std::f64::consts::PI.ln()) - 0.5 * n as f64 * std::f64::consts::LN_2;
    for k in 1..=n {
        l -= 0.5 * (k as f64).ln();
    }
    l
}

/// ⟨m| f |n⟩ for a polynomial-in-u integrand, f supplied as u ↦ factor(u), by
/// Gauss–Hermite quadrature after the substitution u = γx (dx = du/γ).
fn quad_matrix_element(
    gamma: f64,
    m: usize,
    n: usize,
    nodes: &(Vec<f64>, Vec<f64>),
    factor: impl Fn(f64) -> f64,
) -> f64 {
    let scale = (log_norm(gamma, m) + log_norm(gamma, n)).exp() / gamma;
    let mut acc = 0.0;
    for (&u, &w) in nodes.0.iter().zip(nodes.1.iter()) {
        let h = hermite_values(m.max(n), u);
        acc += w * h[m] * h[n] * factor(u);
    }
    scale * acc
}

/// Kinetic-energy element ⟨m|p²|n⟩ = ∫ φ_m′ φ_n′ dx via the exact Hermite
/// derivative H_n′ = 2n H_{n−1}, evaluated numerically at the nodes.
fn quad_kinetic_element(gamma: f64, m: usize, n: usize, nodes: &(Vec<f64>, Vec<f64>)) -> f64 {
    // φ_n′(x) = N_n γ (2n H_{n−1}(u) − u H_n(u)) e^{−u²/2}
    let scale = (log_norm(gamma, m) + log_norm(gamma, n)).exp() * gamma;
    let mut acc = 0.0;
    for (&u, &w) in nodes.0.iter().zip(nodes.1.iter()) {
        let h = hermite_values(m.max(n), u);
        let dm = if m > 0 { 2.0 * m as f64 * h[m - 1] } else { 0.0 } - u * h[m];
        let dn = if n > 0 { 2.0 * n as f64 * h[n - 1] } else { 0.0 } - u * h[n];
        acc += w * dm * dn;
    }
    scale * acc
}

#[test]
fn position_matrix_examples() {
    let x = position_matrix(1.0, 3);
    assert_relative_eq!(x[(0, 1)], 1.0 / 2f64.sqrt(), epsilon = 1e-14);
    for n in 0..3 {
        assert_eq!(x[(n, n)], 0.0, "⟨n|x|n⟩ must vanish by parity");
    }
    let x = position_matrix(2.0, 3);
    assert_relative_eq!(x[(1, 2)], 0.5, epsilon = 1e-14);
}

#[test]
fn integral_matrices_match_quadrature() {
    let r = 4;
    let nodes = gauss_hermite(2 * r + 10);
    for &gamma in &[0.8, 1.0, 1.729366] {
        let x = position_matrix(gamma, r);
        let x2 = position_squared_matrix(gamma, r);
        for m in 0..r {
            for n in 0..r {
                let xq = quad_matrix_element(gamma, m, n, &nodes, |u| u / gamma);
                assert_relative_eq!(x[(m, n)], xq, epsilon = 1e-10, max_relative = 1e-10);
                let x2q = quad_matrix_element(gamma, m, n, &nodes, |u| u * u / (gamma * gamma));
                assert_relative_eq!(x2[(m, n)], x2q, epsilon = 1e-10, max_relative = 1e-10);
            }
        }
        for &z in &[2.2, 10.0] {
            let h = one_body_matrix(gamma, z, r);
            for m in 0..r {
                for n in 0..r {
                    let hq = quad_kinetic_element(gamma, m, n, &nodes)
                        + z * quad_matrix_element(gamma, m, n, &nodes, |u| u * u / (gamma * gamma));
                    assert_relative_eq!(h[(m, n)], hq, epsilon = 1e-10, max_relative = 1e-9);
                }
            }
        }
    }
}

#[test]
fn one_body_is_diagonal_in_its_own_eigenbasis() {
    let z: f64 = 4.0;
    let gamma = z.powf(0.25);
    let h = one_body_matrix(gamma, z, 4);
    for m in 0..4 {
        for n in 0..4 {
            if m == n {
                assert_relative_eq!(h[(m, n)], z.sqrt() * (2 * n + 1) as f64, epsilon = 1e-12);
            } else {
                assert_relative_eq!(h[(m, n)], 0.0, epsilon = 1e-12);
            }
        }
    }
    assert_relative_eq!(h[(0, 0)], 2.0, epsilon = 1e-14);
}

#[test]
fn two_body_tensor_matches_2d_quadrature() {
    let r = 3;
    let gamma = 1.3;
    let u = two_body_tensor(gamma, r);
    assert_relative_eq!(u[(0, 0, 0, 0)], -1.0 / (gamma * gamma), epsilon = 1e-12);

    let nodes = gauss_hermite(2 * r + 10);
    for p in 0..r {
        for q in 0..r {
            for s in 0..r {
                for t in 0..r {
                    // ⟨pq|−(x−y)²|st⟩ on the product grid.
                    let mut acc = 0.0;
                    for (&ux, &wx) in nodes.0.iter().zip(nodes.1.iter()) {
                        let hx = hermite_values(p.max(s), ux);
                        let fx = hx[p] * hx[s];
                        for (&uy, &wy) in nodes.0.iter().zip(nodes.1.iter()) {
                            let hy = hermite_values(q.max(t), uy);
                            let d = (ux - uy) / gamma;
                            acc += wx * wy * fx * hy[q] * hy[t] * (-d * d);
                        }
                    }
                    let scale = (log_norm(gamma, p) + log_norm(gamma, s)).exp() / gamma
                        * (log_norm(gamma, q) + log_norm(gamma, t)).exp()
                        / gamma;
                    let uq = scale * acc;
                    assert_relative_eq!(u[(p, q, s, t)], uq, epsilon = 1e-9, max_relative = 1e-9);
                    // Symmetry of u(i,j) under particle exchange.
                    assert_relative_eq!(u[(p, q, s, t)], u[(q, p, t, s)], epsilon = 1e-14);
                }
            }
        }
    }
}

#[test]
fn reduced_hamiltonian_has_contract_symmetries() {
    let spec = ModelSpec::new(2, 2.2, 3).unwrap();
    let k = reduced_hamiltonian(&spec).elements;
    let r = spec.n_orbitals;
    for p in 0..r {
        for q in 0..r {
            for s in 0..r {
                for t in 0..r {
                    let v = k[(p, q, s, t)];
                    assert_relative_eq!(v, k[(s, t, p, q)], epsilon = 1e-12); // Hermitian
                    assert_relative_eq!(v, k[(q, p, t, s)], epsilon = 1e-12); // boson-symmetric
                }
            }
        }
    }
}
