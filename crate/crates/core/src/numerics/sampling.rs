//! Seeded Monte Carlo sampling of the unit sphere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};

use crate::error::{Error, Result};
use crate::linalg::{BlochVector, Outcome};
use crate::numerics::quadrature::{Integrand, SphereRule};
use crate::scalar::{from_usize, lit, Real};

/// `n` i.i.d. uniform unit vectors; identical for identical seeds.
pub fn sphere_sample<T: Real>(seed: u64, n: usize) -> Vec<BlochVector<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let [x, y, z]: [f64; 3] = UnitSphere.sample(&mut rng);
            BlochVector::new(lit(x), lit(y), lit(z))
        })
        .collect()
}

/// Monte Carlo estimate `4 pi / n * sum f(lambda_i)` over `samples`.
pub fn mc_integrate<T: Real, V: Integrand<T>>(
    samples: &[BlochVector<T>],
    mut f: impl FnMut(&BlochVector<T>) -> V,
) -> Option<V> {
    let w = lit::<T>(4.0) * T::PI() / from_usize(samples.len().max(1));
    let mut it = samples.iter();
    let mut acc = f(it.next()?).scaled(w);
    for lambda in it {
        acc.add_weighted(w, &f(lambda));
    }
    Some(acc)
}

/// Monte Carlo rule: equal weights `4 pi / n` on seeded uniform samples.
#[derive(Clone, Debug)]
pub struct MonteCarloRule<T> {
    seed: u64,
    samples: Vec<BlochVector<T>>,
}

impl<T: Real> MonteCarloRule<T> {
    pub fn new(seed: u64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfDomain {
                name: "samples",
                value: 0.0,
                domain: ">= 1",
            });
        }
        Ok(Self {
            seed,
            samples: sphere_sample(seed, n),
        })
    }

    pub fn samples(&self) -> &[BlochVector<T>] {
        &self.samples
    }

    /// The `3 / sqrt(n)` tolerance used for Monte Carlo comparisons.
    pub fn tolerance(&self) -> T {
        lit::<T>(3.0) / from_usize::<T>(self.samples.len()).sqrt()
    }
}

impl<T: Real> SphereRule<T> for MonteCarloRule<T> {
    fn visit(&self, _polar: &BlochVector<T>, cut: &BlochVector<T>, _theta_breaks: &[T], mut f: impl FnMut(&BlochVector<T>, T, Outcome)) {
        let w = lit::<T>(4.0) * T::PI() / from_usize(self.samples.len());
        for lambda in &self.samples {
            let side = if cut.dot(lambda) >= T::zero() { Outcome::Plus } else { Outcome::Minus };
            f(lambda, w, side);
        }
    }

    fn describe(&self) -> String {
        format!("Monte Carlo, {} samples, seed {}", self.samples.len(), self.seed)
    }
}
