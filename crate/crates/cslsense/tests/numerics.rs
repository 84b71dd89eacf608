use approx::assert_relative_eq;
use cslsense::numerics::{
    complex_gaussian, frob, hermitian_eigen, hermitian_sqrt, kronecker, singular_values, svd,
    CMat, SeededRng,
};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn hermitian_sqrt_known_2x2() {
    // [[1, .6], [.6, 1]] has root [[0.948683, 0.316228], [0.316228, 0.948683]]
    let q = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.6, 0.0), c(0.6, 0.0), c(1.0, 0.0)]);
    let root = hermitian_sqrt(&q).unwrap();
    assert_relative_eq!(root[(0, 0)].re, 0.9486832980505138, epsilon = 1e-12);
    assert_relative_eq!(root[(0, 1)].re, 0.31622776601683794, epsilon = 1e-12);
    assert_relative_eq!(root[(1, 0)].re, 0.31622776601683794, epsilon = 1e-12);
    assert_relative_eq!(root[(1, 1)].re, 0.9486832980505138, epsilon = 1e-12);
}

#[test]
fn hermitian_sqrt_round_trip_complex() {
    let rho = Complex64::from_polar(0.7, 0.9);
    let q = CMat::from_fn(5, 5, |r, s| {
        if r <= s {
            rho.powu((s - r) as u32)
        } else {
            rho.conj().powu((r - s) as u32)
        }
    });
    let root = hermitian_sqrt(&q).unwrap();
    let err = frob(&(&root * &root - &q)) / frob(&q);
    assert!(err < 1e-12, "round trip error {err:.3e}");
    // the root itself is Hermitian
    let herm = frob(&(&root - &root.adjoint()));
    assert!(herm < 1e-10);
}

#[test]
fn hermitian_sqrt_rejects_non_hermitian() {
    let q = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 0.0), c(0.1, 0.0), c(1.0, 0.0)]);
    assert!(hermitian_sqrt(&q).is_err());
}

#[test]
fn sqrt_of_diagonal() {
    let q = CMat::from_row_slice(2, 2, &[c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(9.0, 0.0)]);
    let root = hermitian_sqrt(&q).unwrap();
    assert_relative_eq!(root[(0, 0)].re, 2.0, epsilon = 1e-12);
    assert_relative_eq!(root[(1, 1)].re, 3.0, epsilon = 1e-12);
    assert!(root[(0, 1)].norm() < 1e-12);
}

#[test]
fn eigen_sorted_ascending() {
    let q = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.3, 0.1), c(0.3, -0.1), c(1.0, 0.0)]);
    let dec = hermitian_eigen(&q).unwrap();
    assert!(dec.eigenvalues[0] <= dec.eigenvalues[1]);
    let total: f64 = dec.eigenvalues.iter().sum();
    assert_relative_eq!(total, 3.0, epsilon = 1e-10);
}

#[test]
fn svd_reconstructs_and_sorts() {
    let mut rng = SeededRng::new(3);
    let a = complex_gaussian(&mut rng, 6, 4, 1.0);
    let dec = svd(&a).unwrap();
    for w in dec.singular_values.windows(2) {
        assert!(w[0] >= w[1]);
    }
    let err = frob(&(dec.reconstruct() - &a)) / frob(&a);
    assert!(err < 1e-12, "svd reconstruction error {err:.3e}");
}

#[test]
fn singular_values_match_gram_eigenvalues() {
    let mut rng = SeededRng::new(5);
    let a = complex_gaussian(&mut rng, 5, 5, 1.0);
    let sv = singular_values(&a).unwrap();
    let gram = &a.adjoint() * &a;
    let mut eig = hermitian_eigen(&gram).unwrap().eigenvalues;
    eig.reverse();
    for (s, e) in sv.iter().zip(eig.iter()) {
        assert_relative_eq!(s * s, e.max(0.0), epsilon = 1e-8, max_relative = 1e-8);
    }
}

#[test]
fn kronecker_singular_values_factor() {
    let mut rng = SeededRng::new(9);
    let a = complex_gaussian(&mut rng, 2, 2, 1.0);
    let b = complex_gaussian(&mut rng, 3, 3, 1.0);
    let k = kronecker(&a, &b).unwrap();
    let sa = singular_values(&a).unwrap();
    let sb = singular_values(&b).unwrap();
    let mut expect: Vec<f64> = sa
        .iter()
        .flat_map(|&x| sb.iter().map(move |&y| x * y))
        .collect();
    expect.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let got = singular_values(&k).unwrap();
    for (g, e) in got.iter().zip(expect.iter()) {
        assert_relative_eq!(g, e, epsilon = 1e-9, max_relative = 1e-9);
    }
}

#[test]
fn kronecker_dimension_cap() {
    let a = CMat::zeros(200, 200);
    let b = CMat::zeros(200, 200);
    assert!(kronecker(&a, &b).is_err());
}

#[test]
fn seeded_rng_reproducible_and_keyed() {
    let root = SeededRng::new(42);
    let mut a = root.derive(&[1, 2]);
    let mut b = root.derive(&[1, 2]);
    let mut other = root.derive(&[1, 3]);
    let xs: Vec<f64> = (0..8).map(|_| a.uniform()).collect();
    let ys: Vec<f64> = (0..8).map(|_| b.uniform()).collect();
    let zs: Vec<f64> = (0..8).map(|_| other.uniform()).collect();
    assert_eq!(xs, ys);
    assert_ne!(xs, zs);
}

#[test]
fn distinct_draws_are_distinct() {
    let mut rng = SeededRng::new(1);
    for _ in 0..50 {
        let mut v = rng.distinct(10, 7);
        v.sort_unstable();
        v.dedup();
        assert_eq!(v.len(), 7);
        assert!(v.iter().all(|&x| x < 10));
    }
}

#[test]
fn complex_gaussian_variance() {
    let mut rng = SeededRng::new(17);
    let a = complex_gaussian(&mut rng, 100, 100, 2.0);
    let mean_p: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>() / 1e4;
    assert!((mean_p - 2.0).abs() < 0.1, "per-entry power {mean_p}");
}
