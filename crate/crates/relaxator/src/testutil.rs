//! Seeded random matrices shared by unit tests and the scenario runner.

use crate::operator::{dagger, CMat};
use num_complex::Complex64 as C64;
use rand::Rng;

pub fn rand_cmat<R: Rng>(rng: &mut R, d: usize) -> CMat {
    CMat::from_shape_fn((d, d), |_| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

pub fn rand_hermitian<R: Rng>(rng: &mut R, d: usize) -> CMat {
    let m = rand_cmat(rng, d);
    let md = dagger(&m);
    (&m + &md).mapv(|z| z * 0.5)
}

/// Random density operator: normalized `M M† / Tr(M M†)`.
pub fn rand_density<R: Rng>(rng: &mut R, d: usize) -> CMat {
    let m = rand_cmat(rng, d);
    let md = dagger(&m);
    let mm = m.dot(&md);
    let tr = crate::operator::trace(&mm);
    mm.mapv(|z| z / tr)
}

/// Random Hermitian traceless matrix.
pub fn rand_traceless_hermitian<R: Rng>(rng: &mut R, d: usize) -> CMat {
    let mut h = rand_hermitian(rng, d);
    let tr = crate::operator::trace(&h) / d as f64;
    for i in 0..d {
        h[[i, i]] -= tr;
    }
    h
}
