//! Seeded samplers shared by harnesses and tests.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::ball::GreenPotentialSpec;
use crate::point::CPoint;
use crate::potentials::{Atom, AtomicMeasure, FactoredPoly};

/// Uniform point on the sphere of radius `r` in C^n.
pub fn uniform_sphere<R: Rng + ?Sized>(rng: &mut R, n: usize, r: f64) -> CPoint {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return CPoint::from_vec(v.into_iter().map(|c| c * (r / norm)).collect());
        }
    }
}

/// Uniform point in the closed ball of radius `r` in C^n (volume measure of R^(2n)).
pub fn uniform_ball<R: Rng + ?Sized>(rng: &mut R, n: usize, r: f64) -> CPoint {
    let u: f64 = rng.random();
    let rad = r * u.powf(1.0 / (2 * n) as f64);
    uniform_sphere(rng, n, rad)
}

pub fn uniform_ball_samples(seed: u64, n: usize, r: f64, count: usize) -> Vec<CPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| uniform_ball(&mut rng, n, r)).collect()
}

/// Midpoints of an `m x m` grid over `[-r, r]^2`, kept when inside the closed disc of
/// radius `r`.
pub fn disc_grid(r: f64, m: usize) -> Vec<CPoint> {
    let h = 2.0 * r / m as f64;
    let mut out = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let x = -r + (i as f64 + 0.5) * h;
            let y = -r + (j as f64 + 0.5) * h;
            if x * x + y * y <= r * r {
                out.push(CPoint::c1_parts(x, y));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_stay_in_the_ball() {
        for n in 1..=3 {
            for z in uniform_ball_samples(9, n, 0.7, 200) {
                assert!(z.norm() <= 0.7 + 1e-15);
                assert_eq!(z.dim(), n);
            }
        }
        assert_eq!(uniform_ball_samples(1, 2, 1.0, 5), uniform_ball_samples(1, 2, 1.0, 5));
    }

    #[test]
    fn grid_is_inside_disc() {
        let g = disc_grid(1.0, 10);
        assert!(g.iter().all(|z| z.norm() <= 1.0));
        assert!(g.len() > 60 && g.len() < 100);
    }
}

/// Uniform point of the closed disc of radius `r` in C.
pub fn uniform_disc<R: Rng + ?Sized>(rng: &mut R, r: f64) -> Complex64 {
    uniform_ball(rng, 1, r).z()
}

/// `count` root lists of random monic polynomials: degree uniform in `1..=max_degree`, roots
/// uniform in the disc of radius `r`.
pub fn monic_root_battery(seed: u64, count: usize, max_degree: usize, r: f64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = rng.random_range(1..=max_degree);
            (0..d).map(|_| uniform_disc(&mut rng, r)).collect()
        })
        .collect()
}

/// Random polynomials `prod (1 - z / a_k)` (so `f(0) = 1`) with degree in `1..=max_degree`
/// and zeros uniform in the annulus `r_min <= |a| <= r_max`.
pub fn unit_value_poly_battery(seed: u64, count: usize, max_degree: usize, r_min: f64, r_max: f64) -> Vec<FactoredPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = rng.random_range(1..=max_degree);
            let roots: Vec<Complex64> = (0..d)
                .map(|_| {
                    let rad = (rng.random_range(r_min * r_min..=r_max * r_max) as f64).sqrt();
                    Complex64::from_polar(rad, rng.random_range(0.0..std::f64::consts::TAU))
                })
                .collect();
            let lead = roots.iter().fold(Complex64::new(1.0, 0.0), |acc, &a| acc * (-1.0 / a));
            FactoredPoly { lead, ..FactoredPoly::monic(&roots) }
        })
        .collect()
}

/// Random atomic measures in C of total mass 1 with `1..=max_atoms` atoms in the disc of
/// radius `r`; their potentials lie in the logarithmic class with zero Robin constant.
pub fn log_class_measure_battery(seed: u64, count: usize, max_atoms: usize, r: f64) -> Vec<AtomicMeasure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.random_range(1..=max_atoms);
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let atoms: Vec<(Complex64, f64)> = raw.iter().map(|w| (uniform_disc(&mut rng, r), w / total)).collect();
            AtomicMeasure::planar(&atoms).expect("valid random measure")
        })
        .collect()
}

/// Random Green-potential specifications in the unit disc: `1..=max_poles` poles with
/// `|a| <= r_max` and weights summing to at most `max_weight`.
pub fn green_spec_battery(seed: u64, count: usize, max_poles: usize, r_max: f64, max_weight: f64) -> Vec<GreenPotentialSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.random_range(1..=max_poles);
            let total = rng.random_range(0.1..=1.0) * max_weight;
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            let atoms = raw
                .iter()
                .map(|w| Atom { location: CPoint::c1(uniform_disc(&mut rng, r_max)), weight: total * w / sum })
                .collect();
            GreenPotentialSpec::new(1, atoms).expect("valid random spec")
        })
        .collect()
}

/// Random normalized logarithms `(1/d) log|P|` of monic polynomials with degree in
/// `1..=max_degree` and zeros uniform in the disc of radius `r`.
pub fn log_poly_battery(seed: u64, count: usize, max_degree: usize, r: f64) -> Vec<AtomicMeasure> {
    monic_root_battery(seed, count, max_degree, r)
        .into_iter()
        .map(|roots| {
            let w = 1.0 / roots.len() as f64;
            let atoms: Vec<(Complex64, f64)> = roots.into_iter().map(|a| (a, w)).collect();
            AtomicMeasure::planar(&atoms).expect("valid root measure")
        })
        .collect()
}
