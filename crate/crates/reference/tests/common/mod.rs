#![allow(dead_code)] // each test binary uses a different subset

use ndarray::Array2;

/// Dense N-distinguishable-particle Hamiltonian sum_i h(i) + sum_{i<j}
/// u(i, j) on the product space of dimension R^N, with particle 1 the most
/// significant digit of the configuration index.
pub fn distinguishable_hamiltonian(h: &Array2<f64>, u: &ndarray::Array4<f64>, r: usize, n: usize) -> Array2<f64> {
    let dim = r.pow(n as u32);
    let digits = |mut idx: usize| -> Vec<usize> {
        let mut out = vec![0usize; n];
        for slot in (0..n).rev() {
            out[slot] = idx % r;
            idx /= r;
        }
        out
    };
    let mut matrix = Array2::<f64>::zeros((dim, dim));
    for a in 0..dim {
        let da = digits(a);
        for b in 0..dim {
            let db = digits(b);
            let mut total = 0.0;
            for i in 0..n {
                if (0..n).all(|k| k == i || da[k] == db[k]) {
                    total += h[[da[i], db[i]]];
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    if (0..n).all(|k| k == i || k == j || da[k] == db[k]) {
                        total += u[[da[i], da[j], db[i], db[j]]];
                    }
                }
            }
            matrix[[a, b]] = total;
        }
    }
    matrix
}

/// One normalized exchange-symmetric product vector per occupation pattern:
/// equal weight on every configuration whose orbital content matches.
pub fn symmetric_occupation_vectors(occupations: &[Vec<usize>], r: usize, n: usize) -> Vec<Vec<f64>> {
    let dim = r.pow(n as u32);
    let digits = |mut idx: usize| -> Vec<usize> {
        let mut out = vec![0usize; n];
        for slot in (0..n).rev() {
            out[slot] = idx % r;
            idx /= r;
        }
        out
    };
    occupations
        .iter()
        .map(|occ| {
            let mut v = vec![0.0f64; dim];
            for (idx, slot) in v.iter_mut().enumerate() {
                let mut count = vec![0usize; r];
                for &d in &digits(idx) {
                    count[d] += 1;
                }
                if &count == occ {
                    *slot = 1.0;
                }
            }
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in &mut v {
                *x /= norm;
            }
            v
        })
        .collect()
}

/// Compress `matrix` onto the span of `vectors` and return the ascending
/// eigenvalues of the block.
pub fn compressed_spectrum(matrix: &Array2<f64>, vectors: &[Vec<f64>]) -> Vec<f64> {
    let dim = matrix.nrows();
    let m = vectors.len();
    let mut block = Array2::<f64>::zeros((m, m));
    for (bi, vb) in vectors.iter().enumerate() {
        let mut applied = vec![0.0; dim];
        for (row, slot) in applied.iter_mut().enumerate() {
            for col in 0..dim {
                *slot += matrix[[row, col]] * vb[col];
            }
        }
        for (ai, va) in vectors.iter().enumerate() {
            block[[ai, bi]] = va.iter().zip(applied.iter()).map(|(x, y)| x * y).sum();
        }
    }
    reference::linalg::eigh_symmetric(&block).0
}
